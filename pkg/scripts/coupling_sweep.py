"""Pole, seed and decay rates across couplings.

Prints |z0 - seed| with its ratio per halving, and the fitted log-P1 slope
against 2 Im z0 and the golden-rule rate.
"""
import argparse
import math

import numpy as np

from resonance_lab.dynamics import fit_decay_rate, survival_amplitude
from resonance_lab.model import Family, canonical_model, eval_v2
from resonance_lab.resonance import find_pole


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--couplings", type=float, nargs="+", default=[0.4, 0.2, 0.1, 0.05])
    ap.add_argument("--family", default="rational_sqrt", choices=[f.value for f in Family])
    args = ap.parse_args()

    prev = None
    print(f"{'lambda':>7} {'Re z0':>12} {'Im z0':>13} {'|z0-seed|':>10} {'ratio':>6} {'fit/2Imz0-1':>12} {'fit/golden-1':>13}")
    for lam in args.couplings:
        model = canonical_model(lam, Family(args.family))
        res = find_pole(model)
        gap = abs(res.z0 - res.seed)
        ts = np.linspace(0.5 * res.lifetime, 2 * res.lifetime, 41)
        slope = -fit_decay_rate(ts, np.abs(survival_amplitude(model, ts)) ** 2)
        golden = 2 * math.pi * float(eval_v2(model, model.m))
        ratio = f"{prev / gap:6.1f}" if prev else " " * 6
        print(f"{lam:7.3f} {res.z0.real:12.9f} {res.z0.imag:13.10f} {gap:10.3e} {ratio} "
              f"{slope / (2 * res.z0.imag) - 1:12.2e} {slope / -golden - 1:13.3%}")
        prev = gap


if __name__ == "__main__":
    main()
