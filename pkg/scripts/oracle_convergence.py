"""Continuum survival probability against the discretized Hamiltonian.

For each node count and layout: recurrence time and the worst |P1 difference|
over t <= T_rec(smallest N)/2, so every row is judged on the same horizon.
"""
import argparse
import time

import numpy as np

from resonance_lab.dynamics import survival_amplitude
from resonance_lab.model import canonical_model
from resonance_lab.oracle import discretize, recurrence_time, survival_discrete


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--coupling", type=float, default=0.2)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 2000, 4000])
    ap.add_argument("--rules", nargs="+", default=["graded", "uniform", "gauss_legendre"])
    ap.add_argument("--omega-max", type=float, default=1000.0)
    args = ap.parse_args()

    model = canonical_model(args.coupling)
    for rule in args.rules:
        # uniform/GL on a short interval show the truncation floor the graded tail avoids
        omega_max = args.omega_max if rule == "graded" else 20.0
        models = {}
        for n in args.sizes:
            t0 = time.perf_counter()
            models[n] = (discretize(model, n, omega_max, rule=rule), time.perf_counter() - t0)
        horizon = recurrence_time(models[min(args.sizes)][0]) / 2
        ts = np.linspace(0, horizon, 400)
        p_cont = np.abs(survival_amplitude(model, ts)) ** 2
        print(f"{rule} (omega_max={omega_max:g}), horizon t <= {horizon:.1f}")
        for n, (dm, secs) in models.items():
            err = np.max(np.abs(p_cont - np.abs(survival_discrete(dm, ts)) ** 2))
            print(f"  N={n:5d}  T_rec={recurrence_time(dm):8.1f}  max err={err:.3e}  build {secs:.1f}s")


if __name__ == "__main__":
    main()
