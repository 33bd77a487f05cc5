"""Generalized Huber function and GMC penalty.

The generalized Huber function of a matrix B is the infimal convolution of
the l1 norm with ``0.5 * ||B . ||_2^2``:

    gen_huber_B(x) = min_v  ||v||_1 + 0.5 * ||B (x - v)||_2^2

It is convex, differentiable, depends on B only through B^T B, and sits
between 0 and ``||x||_1``.  The GMC penalty is its complement,

    gmc_B(x) = ||x||_1 - gen_huber_B(x),

a non-convex sparsity penalty that keeps a least-squares cost convex when
B^T B is dominated by the Gram matrix of the data operator (see
``build_b_from_a`` and the solvers module).

There is no closed form for the inner minimum, so it is computed by
iterative shrinkage on v, which converges for this strongly structured
lasso-type problem.  Penalty objects are immutable and evaluation is pure,
so they can be shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConvergenceError
from .operators import COMPLEX, LinearOperator, ScaledOperator, estimate_gram_norm
from .scalar import soft


@dataclass
class GmcPenalty:
    """A generalized Huber / GMC penalty parameterized by the operator B.

    ``inner_tol`` is the sup-norm fixed-point tolerance of the inner
    shrinkage iteration, ``inner_max_iter`` its iteration budget.  The
    squared spectral norm of B is computed once at construction and reused
    as the inner step size.
    """

    b_op: LinearOperator
    inner_tol: float = 1e-10
    inner_max_iter: int = 100_000
    gram_norm: float = field(init=False)

    def __post_init__(self):
        if not (self.inner_tol > 0):
            raise ValueError("inner_tol must be positive")
        if self.inner_max_iter < 1:
            raise ValueError("inner_max_iter must be at least 1")
        self.gram_norm = estimate_gram_norm(self.b_op)

    @property
    def domain_dim(self) -> int:
        return self.b_op.domain_dim


@dataclass(frozen=True)
class InnerSolution:
    """Result of the inner minimization defining the generalized Huber value.

    ``v_star`` attains the minimum, ``value`` is the generalized Huber value
    at the queried point, ``residual`` the final sup-norm fixed-point change.
    """

    v_star: np.ndarray
    value: float
    iterations: int
    residual: float


def build_b_from_a(
    a_op: LinearOperator,
    lam: float,
    gamma: float,
    inner_tol: float = 1e-10,
    inner_max_iter: int = 100_000,
) -> GmcPenalty:
    """Construct the penalty with B = sqrt(gamma/lam) * A.

    Then B^T B = (gamma/lam) A^T A, and for ``0 <= gamma <= 1`` the combined
    cost ``0.5*||y - A x||^2 + lam * gmc_B(x)`` is convex.  ``gamma`` outside
    [0, 1] is rejected because that guarantee is lost.
    """
    if not (lam > 0):
        raise ValueError("lam must be positive")
    if not (0.0 <= gamma <= 1.0):
        raise ValueError("gamma must lie in [0, 1] to preserve cost convexity")
    scale = np.sqrt(gamma / lam)
    return GmcPenalty(
        ScaledOperator(a_op, scale), inner_tol=inner_tol, inner_max_iter=inner_max_iter
    )


def _as_columns(pen: GmcPenalty, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x)
    single = x.ndim == 1
    if single:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] != pen.domain_dim:
        raise ValueError(f"expected vectors of length {pen.domain_dim}, got shape {x.shape}")
    dtype = np.complex128 if (pen.b_op.field == COMPLEX or np.iscomplexobj(x)) else np.float64
    return x.astype(dtype), single


def _inner_solve(pen: GmcPenalty, xs: np.ndarray):
    """Shrinkage iteration for min_v ||v||_1 + 0.5*||B(x - v)||^2, batched.

    ``xs`` has one query point per column.  Returns (v, values, iterations,
    residual); the step is 1/||B^T B||_2 so the objective decreases
    monotonically.
    """
    if pen.gram_norm == 0.0:
        # B = 0: the minimum is 0 at v = 0
        v = np.zeros_like(xs)
        return v, np.zeros(xs.shape[1]), 0, 0.0
    step = 1.0 / pen.gram_norm
    v = np.zeros_like(xs)
    resid = np.inf
    for it in range(1, pen.inner_max_iter + 1):
        grad = pen.b_op.adjoint_multi(pen.b_op.forward_multi(v - xs))
        v_next = soft(v - step * grad, step)
        resid = float(np.max(np.abs(v_next - v)))
        v = v_next
        if resid <= pen.inner_tol:
            return v, _inner_values(pen, xs, v), it, resid
    raise ConvergenceError(
        f"inner shrinkage iteration did not reach tol={pen.inner_tol} "
        f"in {pen.inner_max_iter} iterations",
        best=InnerSolution(
            v_star=v[:, 0] if v.shape[1] == 1 else v,
            value=float(_inner_values(pen, xs, v)[0]),
            iterations=pen.inner_max_iter,
            residual=resid,
        ),
        iterations=pen.inner_max_iter,
    )


def _inner_values(pen: GmcPenalty, xs, v) -> np.ndarray:
    r = pen.b_op.forward_multi(xs - v)
    return np.sum(np.abs(v), axis=0) + 0.5 * np.sum(np.abs(r) ** 2, axis=0)


def eval_generalized_huber(pen: GmcPenalty, x) -> InnerSolution:
    """Evaluate the generalized Huber function at ``x`` via the inner problem.

    Raises ``ConvergenceError`` (with the best iterate attached) if the inner
    iteration budget is exhausted.
    """
    xs, _ = _as_columns(pen, x)
    if xs.shape[1] != 1:
        raise ValueError("eval_generalized_huber takes a single vector; use eval_generalized_huber_many")
    v, values, iters, resid = _inner_solve(pen, xs)
    return InnerSolution(
        v_star=v[:, 0], value=float(values[0]), iterations=iters, residual=resid
    )


def eval_generalized_huber_many(pen: GmcPenalty, xs) -> tuple[np.ndarray, np.ndarray]:
    """Batched generalized Huber values for the columns of ``xs``.

    Returns ``(v_star, values)`` with matching column layout.  The iteration
    runs until every column meets the tolerance.
    """
    cols, _ = _as_columns(pen, xs)
    v, values, _, _ = _inner_solve(pen, cols)
    return v, values


def grad_generalized_huber(pen: GmcPenalty, x) -> np.ndarray:
    """Gradient of the generalized Huber function: B^T B (x - v_star).

    Every entry has magnitude at most 1.
    """
    xs, _ = _as_columns(pen, x)
    sol = eval_generalized_huber(pen, xs[:, 0])
    return pen.b_op.adjoint(pen.b_op.forward(xs[:, 0] - sol.v_star))


def eval_gmc(pen: GmcPenalty, x) -> float:
    """GMC penalty value ``||x||_1 - gen_huber(x)``; lies in [0, ||x||_1]."""
    xs, _ = _as_columns(pen, x)
    sol = eval_generalized_huber(pen, xs[:, 0])
    return float(np.sum(np.abs(xs[:, 0])) - sol.value)


def eval_gmc_many(pen: GmcPenalty, xs) -> np.ndarray:
    """Batched GMC penalty values for the columns of ``xs``."""
    cols, _ = _as_columns(pen, xs)
    _, values = eval_generalized_huber_many(pen, cols)
    return np.sum(np.abs(cols), axis=0) - values


def in_quadratic_region(pen: GmcPenalty, x) -> bool:
    """Whether ``||B^T B x||_inf <= 1``.

    On this region the generalized Huber function equals
    ``0.5 * ||B x||_2^2`` and the GMC penalty equals
    ``||x||_1 - 0.5 * ||B x||_2^2``.
    """
    xs, _ = _as_columns(pen, x)
    g = pen.b_op.adjoint(pen.b_op.forward(xs[:, 0]))
    return bool(np.max(np.abs(g)) <= 1.0)
