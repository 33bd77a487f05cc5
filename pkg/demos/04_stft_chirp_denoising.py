"""Time-frequency denoising of a chirp: l1 vs GMC support sizes.

A linear chirp is observed in light noise and reconstructed from STFT
coefficients (75% overlapping square-root-Hann frames forming an exactly
tight frame).  With the weights chosen so both penalties reach comparable
reconstruction RMSE, the GMC solution keeps far fewer active
time-frequency coefficients; extraneous noise speckle is suppressed.

Writes `demo_out/stft_summary.csv`.
"""

import os

import numpy as np

from gmcreg import (
    StftDemoSpec,
    StftFrameOperator,
    add_awgn,
    denoise_frame,
    make_chirp,
    rmse,
    run_stft_demo,
    write_records_csv,
)

OUT_DIR = "demo_out"


def main():
    spec = StftDemoSpec()
    clean = make_chirp(spec)
    noisy = add_awgn(clean, spec.noise_sigma, spec.seed)
    print(f"chirp: {spec.signal_len} samples sweeping normalized frequency "
          f"{spec.freq_start} -> {spec.freq_end}, noise sigma {spec.noise_sigma}")
    print(f"noisy-signal rmse: {rmse(noisy, clean):.4f}")

    frame = StftFrameOperator(spec.signal_len, spec.segment_len)
    print(f"frame: {frame.n_frames} frames x {frame.segment_len} bins = "
          f"{frame.domain_dim} coefficients for {frame.codomain_dim} samples")

    report = run_stft_demo(spec)
    print(f"{'method':<6} {'lambda':>7} {'rmse':>8} {'active coefs':>13}")
    print(f"{'l1':<6} {report.lam_l1:>7.3f} {report.rmse_l1:>8.4f} {report.nnz_l1:>13d}")
    print(f"{'gmc':<6} {report.lam_gmc:>7.3f} {report.rmse_gmc:>8.4f} {report.nnz_gmc:>13d}")
    ratio = report.nnz_l1 / max(report.nnz_gmc, 1)
    print(f"matched rmse, {ratio:.1f}x fewer active coefficients with gmc")

    # a single l1 run at a mid-grid weight for contrast in the CSV
    mid = denoise_frame(noisy, frame, "l1", 0.05)
    print(f"l1 at lambda=0.05 for contrast: rmse {rmse(mid.recon, clean):.4f}")

    os.makedirs(OUT_DIR, exist_ok=True)
    path = os.path.join(OUT_DIR, "stft_summary.csv")
    write_records_csv(report.rows(), path)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
