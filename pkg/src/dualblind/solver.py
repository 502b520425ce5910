"""Equality-constrained nuclear-norm recovery of the lifted matrix.

Solves ``min ||C(X)||_*  s.t.  A(X) = y`` by ADMM on the split ``Z = C(X)``:

* X-step: ``min ||C(X) - Z + U||^2  s.t.  A(X) = y``.  ``C^* C`` scales column
  ``n`` of each block by the anti-diagonal count ``w[n]`` and ``A`` reads each
  column through one linear functional, so the step is a per-column
  projection onto a hyperplane.
* Z-step: singular value thresholding of ``C(X) + U`` at ``1 / rho``.
* U-step: scaled dual ascent.

The data are normalized to ``||y|| = 1`` before iterating, which makes `rho`
dimensionless; the program is positively homogeneous so the solution is
rescaled afterwards.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_complex_vector, check_positive_int, check_positive_real
from .exceptions import ShapeError
from .hankel import concat_lift, measurement_op, stack_lift, stack_lift_adjoint
from .signal_model import LiftedMatrix


@dataclass(frozen=True)
class SolverParams:
    rho: float = 1.0
    max_iters: int = 5000
    tol_primal: float = 1e-8
    tol_dual: float = 1e-8
    tol_feas: float = 1e-8

    def __post_init__(self):
        check_positive_real(self.rho, "rho")
        check_positive_int(self.max_iters, "max_iters")
        for name in ("tol_primal", "tol_dual", "tol_feas"):
            check_positive_real(getattr(self, name), name)


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    primal_residual: float
    dual_residual: float
    feasibility: float
    nuclear_norm: float
    converged: bool


def nuclear_norm(m):
    """Sum of singular values."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False).sum())


def svt(m, threshold):
    """Singular value soft-thresholding, the proximal map of ``threshold * ||.||_*``."""
    threshold = check_positive_real(threshold, "threshold")
    u, s, vh = np.linalg.svd(np.asarray(m), full_matrices=False)
    s = np.maximum(s - threshold, 0.0)
    keep = s > 0
    return (u[:, keep] * s[keep]) @ vh[keep]


def _feasibility(op, x, y):
    return float(np.linalg.norm(measurement_op(op, x) - y) / max(np.linalg.norm(y), 1.0))


def _affine_projector(op, y):
    """Per-column projection of a stacked ``(2, N_rc, N)`` array onto ``A(X) = y``."""
    rows = op.rows
    conj_rows = np.conj(rows) / op.row_energy

    def project(v):
        resid = y - np.einsum("bkj,bkj->j", rows, v)
        return v + conj_rows * resid

    return project


def admm_nuclear(y, op, params, lift, lift_adjoint, weights, prox):
    """Generic scaled ADMM for ``min f(L(X)) s.t. A(X) = y`` with ``L^* L`` diagonal.

    `lift` maps a ``(2, N_rc, N)`` array to the split variable, `lift_adjoint`
    back, `weights` is the per-column diagonal of ``L^* L`` and ``prox(v, t)``
    the proximal map of ``t * f``.  Returns the stacked estimate (in the
    normalized scale), the final residuals, the iteration count and a flag.
    """
    project = _affine_projector(op, y)
    x = project(np.zeros(op.rows.shape, dtype=complex))
    z = lift(x)
    u = np.zeros_like(z)
    thresh = 1.0 / params.rho
    r_norm = s_norm = np.inf
    converged = False
    it = 0
    for it in range(1, params.max_iters + 1):
        x = project(lift_adjoint(z - u) / weights)
        lx = lift(x)
        z_old = z
        z = prox(lx + u, thresh)
        u = u + lx - z
        r_norm = np.linalg.norm(lx - z)
        s_norm = params.rho * np.linalg.norm(lift_adjoint(z - z_old))
        eps_pri = params.tol_primal * max(np.linalg.norm(lx), np.linalg.norm(z))
        eps_dual = params.tol_dual * params.rho * np.linalg.norm(lift_adjoint(u))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            converged = True
            break
    return x, float(r_norm), float(s_norm), it, converged


def _check_inputs(y, op, shape=None):
    y = check_complex_vector(y, "y", op.n_samples)
    if shape is not None:
        if shape.n_samples != op.n_samples:
            raise ShapeError(f"shape is for N = {shape.n_samples}, operator for N = {op.n_samples}")
        if shape.block_dim != op.rows.shape[1]:
            raise ShapeError(f"shape block_dim {shape.block_dim} != subspace dimension {op.rows.shape[1]}")
    return y


def _zero_result(op):
    x = LiftedMatrix.zeros(op.rows.shape[1], op.n_samples)
    return x, SolverReport(0, 0.0, 0.0, 0.0, 0.0, True)


def solve_dbd(y, op, shape, params=None):
    """Recover the lifted matrix by Hankel-structured nuclear-norm minimization.

    Parameters
    ----------
    y : array_like of complex, shape (N,)
        Overlaid measurements.
    op : MeasurementOperator
    shape : HankelShape
    params : SolverParams, optional

    Returns
    -------
    x_hat : LiftedMatrix
    report : SolverReport
        ``converged`` is False when `max_iters` ran out or the final
        feasibility exceeds ``tol_feas``; no exception is raised.
    """
    params = params or SolverParams()
    y = _check_inputs(y, op, shape)
    scale = float(np.linalg.norm(y))
    if scale == 0.0:
        return _zero_result(op)

    x, r, s, it, ok = admm_nuclear(
        y / scale, op, params,
        lambda v: stack_lift(v, shape),
        lambda m: stack_lift_adjoint(m, shape),
        shape.antidiagonal_counts,
        svt,
    )
    x_hat = LiftedMatrix.from_stacked(x * scale)
    feas = _feasibility(op, x_hat, y)
    report = SolverReport(
        iterations=it,
        primal_residual=r,
        dual_residual=s,
        feasibility=feas,
        nuclear_norm=nuclear_norm(concat_lift(x_hat, shape)),
        converged=bool(ok and feas <= params.tol_feas),
    )
    return x_hat, report
