"""Two-dimensional generalized Huber and GMC penalty surfaces.

Evaluates both functions on a grid for two choices of the coupling matrix
B: a rank-2 matrix (elliptic level sets near the origin) and a rank-1
matrix (level sets are parallel lines, constant along the null space of
B).  The values come from the inner shrinkage solver; near the origin they
match the closed quadratic form exactly.

Writes `demo_out/surface_rank2.csv` and `demo_out/surface_rank1.csv`.
"""

import os

import numpy as np

from gmcreg import DenseOperator, GmcPenalty, eval_generalized_huber_many

OUT_DIR = "demo_out"

B_RANK2 = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
B_RANK1 = np.array([[1.0, 0.5]])


def surface(b_entries, path, ticks):
    pen = GmcPenalty(DenseOperator(b_entries))
    x1, x2 = np.meshgrid(ticks, ticks, indexing="ij")
    pts = np.stack([x1.ravel(), x2.ravel()], axis=0)
    _, huber_vals = eval_generalized_huber_many(pen, pts)
    gmc_vals = np.sum(np.abs(pts), axis=0) - huber_vals
    with open(path, "w") as fh:
        fh.write("x1,x2,gen_huber,gmc_penalty\n")
        for a, b, s, p in zip(pts[0], pts[1], huber_vals, gmc_vals):
            fh.write(f"{a:.6g},{b:.6g},{s:.6g},{p:.6g}\n")
    return pen, huber_vals.reshape(x1.shape)


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    ticks = np.linspace(-3.0, 3.0, 61)

    pen2, vals2 = surface(B_RANK2, os.path.join(OUT_DIR, "surface_rank2.csv"), ticks)
    # near the origin the surface is the quadratic 0.5*||B x||^2
    x = np.array([0.2, -0.1])
    quad = 0.5 * np.sum((B_RANK2 @ x) ** 2)
    print(f"rank-2 B: value at {x} = {vals2[32, 29]:.6f} "
          f"(quadratic form gives {quad:.6f})")

    pen1, _ = surface(B_RANK1, os.path.join(OUT_DIR, "surface_rank1.csv"), ticks)
    # rank-1 B: constant along the null direction of B
    from gmcreg import eval_generalized_huber

    null = np.array([-0.5, 1.0]) / np.hypot(0.5, 1.0)
    v0 = eval_generalized_huber(pen1, np.array([0.8, 0.4])).value
    v1 = eval_generalized_huber(pen1, np.array([0.8, 0.4]) + 1.1 * null).value
    print(f"rank-1 B: value is constant along null(B): {v0:.6f} vs {v1:.6f}")
    print(f"wrote {OUT_DIR}/surface_rank2.csv and {OUT_DIR}/surface_rank1.csv")


if __name__ == "__main__":
    main()
