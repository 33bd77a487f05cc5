"""Frequency-domain denoising: l1 vs debiased-l1 vs GMC.

A two-sine signal (amplitudes 2 and 1) is observed in unit-variance white
Gaussian noise and reconstructed through an over-sampled DFT frame under
each penalty, sweeping the regularization weight.  The GMC penalty keeps
the cost convex yet avoids the amplitude shrinkage of the l1 solution:
its best reconstruction is both sparser and closer to the true component
amplitudes.

Pass a realization count as the first argument (default 5 here; the CLI
`gmcreg sweep` runs the full 20-realization study).  Writes
`demo_out/sweep_records.csv` and `demo_out/sweep_aggregates.csv`.
"""

import os
import sys

import numpy as np

from gmcreg import (
    DftFrameOperator,
    ExperimentSpec,
    add_awgn,
    coefficient_clusters,
    denoise_frame,
    make_two_sine,
    run_sweep,
    write_aggregates_csv,
    write_records_csv,
)

OUT_DIR = "demo_out"


def main(realizations=5):
    spec = ExperimentSpec(realizations=realizations)
    print(f"sweeping lambda over {spec.lambda_grid[0]}..{spec.lambda_grid[-1]} "
          f"({len(spec.lambda_grid)} values, {realizations} noise realizations)")
    result = run_sweep(spec)

    os.makedirs(OUT_DIR, exist_ok=True)
    write_records_csv(result.records, os.path.join(OUT_DIR, "sweep_records.csv"))
    write_aggregates_csv(result.aggregates, os.path.join(OUT_DIR, "sweep_aggregates.csv"))

    print(f"{'method':<12} {'best lambda':>11} {'mean rmse':>10}")
    for method in ("l1", "l1_debiased", "gmc"):
        lam, mean = result.best_lambda(method)
        print(f"{method:<12} {lam:>11.2f} {mean:>10.4f}")

    # amplitude recovery at the per-method optimal weights
    lam_l1, _ = result.best_lambda("l1")
    lam_gmc, _ = result.best_lambda("gmc")
    frame = DftFrameOperator(spec.signal_len, spec.coef_len)
    clean = make_two_sine(spec)
    noisy = add_awgn(clean, spec.noise_sigma, (spec.seed, 0))
    for method, lam in (("l1", lam_l1), ("gmc", lam_gmc)):
        coef = denoise_frame(noisy, frame, method, lam, spec.gamma).coef
        top = coefficient_clusters(coef, frame)[:2]
        desc = ", ".join(f"f={f:.3f} amp={a:.2f}" for f, a in top)
        print(f"{method} components (true: f=0.100 amp=2.00, f=0.220 amp=1.00): {desc}")
    print(f"wrote {OUT_DIR}/sweep_records.csv and {OUT_DIR}/sweep_aggregates.csv")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5)
