#!/usr/bin/env python3
"""Berry phases of cone loops against the solid-angle reference.

Sweeps the cone opening angle, accumulates the optimal-phase increments over
one closed loop and compares |dlambda_g| with pi (1 - cos theta).
"""

import argparse
import math
from pathlib import Path

import numpy as np

import qsteer as q

SX = [[0.0, 1.0], [1.0, 0.0]]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--thetas", type=float, nargs="+",
                    default=list(np.linspace(0.15, math.pi - 0.15, 13)))
    ap.add_argument("--omega", type=float, default=0.1)
    ap.add_argument("--samples", type=int, default=2049)
    ap.add_argument("--out", type=Path, default=Path("berry_sweep.csv"))
    args = ap.parse_args()

    worst = 0.0
    rows = []
    for theta in args.thetas:
        path = q.rotating_cone(1.0, theta, args.omega, SX)
        history = q.sample_history(path, 0.0, path.duration, args.samples)
        phases = q.berry_phase(history)
        reference = math.pi * (1 - math.cos(theta))
        err = abs(abs(phases.delta_lambda_g_mod) - abs(_wrap(reference)))
        worst = max(worst, err)
        rows.append((theta, phases.delta_lambda_g, phases.delta_lambda_e, reference))
        print(
            f"theta {theta:6.3f}  dlambda_g {phases.delta_lambda_g:+9.5f}  "
            f"solid angle {reference:8.5f}  mod-2pi error {err:.2e}"
        )
    print(f"worst mod-2pi deviation from the solid-angle formula: {worst:.2e}")

    with open(args.out, "w") as fh:
        fh.write("theta_rad,delta_lambda_g,delta_lambda_e,solid_angle_reference\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {args.out}")


def _wrap(x):
    y = math.fmod(x + math.pi, 2 * math.pi)
    if y <= 0:
        y += 2 * math.pi
    return y - math.pi


if __name__ == "__main__":
    main()
