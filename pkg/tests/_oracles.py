"""Brute-force oracles the library implementations are checked against.

Everything here is deliberately independent of the package internals:
dense grid searches and dense linear algebra only.
"""

import numpy as np


def grid_argmin_scalar_cost(y, a, lam, b, lo=-3.0, hi=3.0, step=1e-5):
    """argmin over a grid of 0.5*(y - a*x)**2 + lam * mc_b(x)."""
    x = np.arange(lo, hi + step, step)
    b2 = b * b
    if b2 == 0.0:
        mc = np.abs(x)
    else:
        s = np.where(np.abs(x) <= 1.0 / b2, 0.5 * b2 * x * x, np.abs(x) - 0.5 / b2)
        mc = np.abs(x) - s
    cost = 0.5 * (y - a * x) ** 2 + lam * mc
    return float(x[np.argmin(cost)])


def grid_min_scaled_huber(x, b, span=6.0, step=1e-3):
    """min over a v-grid of |v| + 0.5*b**2*(x - v)**2."""
    v = np.arange(-span, span + step, step)
    return float(np.min(np.abs(v) + 0.5 * b * b * (x - v) ** 2))


def grid_argmin_complex_shrink(y, lam, span=12.0, step=0.01):
    """argmin over a complex grid of lam*|v| + 0.5*|y - v|**2."""
    t = np.arange(-span, span + step, step)
    re, im = np.meshgrid(t, t, indexing="ij")
    v = re + 1j * im
    cost = lam * np.abs(v) + 0.5 * np.abs(y - v) ** 2
    k = np.argmin(cost)
    return v.ravel()[k]


def grid_min_gen_huber(b_entries, x, step=1e-3, margin=2.0):
    """Dense grid search for min_v ||v||_1 + 0.5*||B(x - v)||^2, N in {1, 2}.

    The v-grid spans [-(||x||_inf + margin), ||x||_inf + margin] per
    coordinate; the 2-D case is evaluated in chunks to bound memory.
    """
    b = np.asarray(b_entries, dtype=float)
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    span = np.max(np.abs(x)) + margin
    grid = np.arange(-span, span + step, step)
    if n == 1:
        r = b[:, 0:1] * (x[0] - grid)[None, :]
        cost = np.abs(grid) + 0.5 * np.sum(r * r, axis=0)
        return float(np.min(cost))
    if n != 2:
        raise ValueError("oracle supports N in {1, 2} only")
    g = b.T @ b
    d1 = x[0] - grid
    d2 = x[1] - grid
    # cost(i, j) = c1(i) + c2(j) + g01 * d1(i) * d2(j), evaluated in chunks
    c1 = np.abs(grid) + 0.5 * g[0, 0] * d1 * d1
    c2 = np.abs(grid) + 0.5 * g[1, 1] * d2 * d2
    best = np.inf
    chunk = 1024
    for i in range(0, grid.size, chunk):
        t = np.outer(g[0, 1] * d1[i : i + chunk], d2)
        t += c2[None, :]
        t += c1[i : i + chunk, None]
        best = min(best, float(t.min()))
    return best


def dense_gram_lambda_max(entries):
    """Largest eigenvalue of A^H A by a dense eigen-solve."""
    a = np.asarray(entries)
    g = a.conj().T @ a
    return float(np.max(np.linalg.eigvalsh(g)))


def psd_factor(gram):
    """Some C with C^T C = gram, via an eigendecomposition (PSD input)."""
    w, vecs = np.linalg.eigh(np.asarray(gram))
    w = np.clip(w, 0.0, None)
    return (vecs * np.sqrt(w)) @ vecs.T
