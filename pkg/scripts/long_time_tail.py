"""Pole term vs background over long times: where the power-law tail takes over."""
import argparse

import numpy as np

from resonance_lab.dynamics import gamov_background_split
from resonance_lab.model import canonical_model
from resonance_lab.resonance import find_pole


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--coupling", type=float, default=0.2)
    ap.add_argument("--t-max", type=float, default=800.0)
    ap.add_argument("--steps", type=int, default=17)
    args = ap.parse_args()

    model = canonical_model(args.coupling)
    res = find_pole(model)
    ts = np.linspace(0, args.t_max, args.steps)
    gamov, bg = gamov_background_split(model, res, ts)
    cross = None
    for t, g, b in zip(ts, np.abs(gamov), np.abs(bg)):
        print(f"t={t:8.1f}  |gamov|={g:.3e}  |bg|={b:.3e}")
        if cross is None and b > g:
            cross = t
    print("background first exceeds the pole term at t =", cross)


if __name__ == "__main__":
    main()
