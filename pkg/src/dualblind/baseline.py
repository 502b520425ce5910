"""Unstructured lifted nuclear-norm baseline.

Minimizes ``||X_r||_* + ||X_c||_*`` subject to ``A(X) = y`` with the same ADMM
machinery as :func:`dualblind.solver.solve_dbd`, the Hankel lift replaced by
the identity on each block.  It ignores the shift structure of the rows and
serves as the comparison arm of the phase-transition benchmark.
"""

import numpy as np

from .signal_model import LiftedMatrix
from .solver import (
    SolverParams,
    SolverReport,
    _check_inputs,
    _feasibility,
    _zero_result,
    admm_nuclear,
    nuclear_norm,
    svt,
)


def _blockwise_svt(stacked, threshold):
    return np.stack([svt(stacked[0], threshold), svt(stacked[1], threshold)])


def solve_baseline(y, op, params=None):
    """Returns ``(x_hat, report)``; ``report.nuclear_norm`` is ``||X_r||_* + ||X_c||_*``."""
    params = params or SolverParams()
    y = _check_inputs(y, op)
    scale = float(np.linalg.norm(y))
    if scale == 0.0:
        return _zero_result(op)
    ones = np.ones(op.n_samples)
    x, r, s, it, ok = admm_nuclear(
        y / scale, op, params, lambda v: v, lambda v: v, ones, _blockwise_svt
    )
    x_hat = LiftedMatrix.from_stacked(x * scale)
    feas = _feasibility(op, x_hat, y)
    report = SolverReport(
        iterations=it,
        primal_residual=r,
        dual_residual=s,
        feasibility=feas,
        nuclear_norm=nuclear_norm(x_hat.radar) + nuclear_norm(x_hat.comms),
        converged=bool(ok and feas <= params.tol_feas),
    )
    return x_hat, report
