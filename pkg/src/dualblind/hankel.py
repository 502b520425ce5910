"""Vectorized Hankel lift, its concatenation, the measurement operator and adjoints.

Inner products follow ``<A, B> = trace(A^H B)``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._validation import check_complex_matrix, check_complex_vector, check_positive_int
from .exceptions import ShapeError, UnsupportedConfigurationError
from .extremal import min_separation
from .signal_model import LiftedMatrix, _check_bases, steering_matrix


@dataclass(frozen=True)
class HankelShape:
    """Lift dimensions with ``n1 + n2 = n_samples + 1``."""

    n1: int
    n2: int
    n_samples: int
    block_dim: int

    def __post_init__(self):
        for name in ("n1", "n2", "n_samples", "block_dim"):
            check_positive_int(getattr(self, name), name)
        if self.n1 + self.n2 != self.n_samples + 1:
            raise ShapeError(
                f"need n1 + n2 = n_samples + 1, got {self.n1} + {self.n2} != {self.n_samples + 1}"
            )

    @classmethod
    def square(cls, n_samples, block_dim):
        """Most-square split ``n1 = ceil((N + 1) / 2)``."""
        n1 = (n_samples + 2) // 2
        return cls(n1, n_samples + 1 - n1, n_samples, block_dim)

    @property
    def lift_shape(self):
        return (self.n1 * self.block_dim, self.n2)

    @property
    def stack_shape(self):
        return (self.n1 * self.block_dim, 2 * self.n2)

    @cached_property
    def antidiagonal_counts(self):
        """``w[n] = #{(i, j) : i + j = n}`` for ``n = 0, ..., N - 1``."""
        n = np.arange(self.n_samples)
        return (np.minimum.reduce([n, np.full_like(n, self.n1 - 1),
                                   np.full_like(n, self.n2 - 1), self.n_samples - 1 - n]) + 1).astype(float)

    @cached_property
    def _index(self):
        return np.arange(self.n1)[:, None] + np.arange(self.n2)[None, :]


@dataclass(frozen=True)
class MeasurementOperator:
    """``[A(X)]_j = <s_j e_j^T, X>`` with ``s_j`` the conjugated j-th rows of (B, D)."""

    basis_r: np.ndarray
    basis_c: np.ndarray

    def __post_init__(self):
        basis_r, basis_c = _check_bases(self.basis_r, self.basis_c)
        object.__setattr__(self, "basis_r", basis_r)
        object.__setattr__(self, "basis_c", basis_c)

    @property
    def n_samples(self):
        return self.basis_r.shape[0]

    @cached_property
    def rows(self):
        """``(2, N_rc, N)`` array; ``rows[b, k, j]`` multiplies ``X_b[k, j]``."""
        if self.basis_r.shape[1] != self.basis_c.shape[1]:
            raise UnsupportedConfigurationError(
                "radar and comms subspaces must have equal dimension"
            )
        return np.stack([self.basis_r.T, self.basis_c.T])

    @cached_property
    def row_energy(self):
        """``||s_j||^2`` for each sample ``j``."""
        return (np.abs(self.rows) ** 2).sum(axis=(0, 1))


def _lift_raw(block, shape):
    return block[:, shape._index].transpose(1, 0, 2).reshape(shape.lift_shape)


def _lift_adjoint_raw(m, shape):
    r = shape.block_dim
    out = np.zeros((r, shape.n_samples), dtype=complex)
    for i in range(shape.n1):
        out[:, i:i + shape.n2] += m[i * r:(i + 1) * r]
    return out


def stack_lift(stacked, shape):
    """:func:`concat_lift` on a raw ``(2, N_rc, N)`` array, without validation."""
    return np.hstack([_lift_raw(stacked[0], shape), _lift_raw(stacked[1], shape)])


def stack_lift_adjoint(m, shape):
    """:func:`concat_lift_adjoint` returning a raw ``(2, N_rc, N)`` array."""
    return np.stack([_lift_adjoint_raw(m[:, :shape.n2], shape),
                     _lift_adjoint_raw(m[:, shape.n2:], shape)])


def _check_block(block, shape):
    return check_complex_matrix(block, "block", shape=(shape.block_dim, shape.n_samples))


def hankel_lift(block, shape):
    """Block-Hankel lift: block-row ``i``, column ``j`` holds column ``i + j`` of `block`."""
    return _lift_raw(_check_block(block, shape), shape)


def hankel_lift_adjoint(m, shape):
    return _lift_adjoint_raw(check_complex_matrix(m, "m", shape=shape.lift_shape), shape)


def concat_lift(x, shape):
    """``C(X) = [H(X_r), H(X_c)]``."""
    _check_block(x.radar, shape)
    return stack_lift(x.stacked(), shape)


def concat_lift_adjoint(m, shape):
    """Adjoint of :func:`concat_lift`: anti-diagonal sums of each half."""
    m = check_complex_matrix(m, "m", shape=shape.stack_shape)
    return LiftedMatrix.from_stacked(stack_lift_adjoint(m, shape))


def measurement_op(op, x):
    """``y_j = sum_k B[j, k] X_r[k, j] + sum_k D[j, k] X_c[k, j]``."""
    stacked = x.stacked()
    if stacked.shape[1:] != op.rows.shape[1:]:
        raise ShapeError(f"lifted matrix blocks {stacked.shape[1:]} do not match operator {op.rows.shape[1:]}")
    return np.einsum("bkj,bkj->j", op.rows, stacked)


def measurement_op_adjoint(op, y):
    y = check_complex_vector(y, "y", op.n_samples)
    return LiftedMatrix.from_stacked(np.conj(op.rows) * y)


def vandermonde_factors(radar, comms, h_r, h_c, shape):
    """Factors with ``C(X) = left @ diag(psi) @ right.T``.

    Returns
    -------
    left : ndarray, shape (n1 * N_rc, K + Q)
        Column ``i`` is ``kron(a_n1(tau_i), h)``.
    psi : ndarray, shape (K + Q,)
        ``[beta; omega]``.
    right : ndarray, shape (2 * n2, K + Q)
        Radar columns ``[a_n2(tau); 0]``, comms columns ``[0; a_n2(tau)]``.
    """
    h_r = check_complex_vector(h_r, "h_r")
    h_c = check_complex_vector(h_c, "h_c")
    if h_r.shape != h_c.shape:
        raise UnsupportedConfigurationError(
            f"factorization needs N_r = N_c, got {h_r.size} and {h_c.size}"
        )
    if h_r.size != shape.block_dim:
        raise ShapeError(f"coefficient length {h_r.size} != block_dim {shape.block_dim}")
    k, q = len(radar), len(comms)
    left_r = np.einsum("nk,m->nmk", steering_matrix(radar.delays, shape.n1), h_r)
    left_c = np.einsum("nk,m->nmk", steering_matrix(comms.delays, shape.n1), h_c)
    left = np.hstack([left_r.reshape(-1, k), left_c.reshape(-1, q)])
    right = np.zeros((2 * shape.n2, k + q), dtype=complex)
    right[:shape.n2, :k] = steering_matrix(radar.delays, shape.n2)
    right[shape.n2:, k:] = steering_matrix(comms.delays, shape.n2)
    psi = np.concatenate([radar.amplitudes, comms.amplitudes])
    return left, psi, right


@dataclass(frozen=True)
class GuaranteeDiagnostic:
    gram_left_min: float
    gram_right_min: float
    threshold_left: float
    threshold_right: float
    left_pass: bool
    right_pass: bool
    separation: float
    separation_threshold: float
    separation_pass: bool

    @property
    def passed(self):
        return self.left_pass and self.right_pass and self.separation_pass


def _delays_from_right(right, shape):
    # each nonzero half-column is a_n2(tau), so tau follows from the phase of entry 1
    if shape.n2 < 2:
        return np.array([]), np.array([])
    n2 = shape.n2
    radar = np.abs(right[:n2]).sum(axis=0) > 0
    phase = np.where(radar, right[1], right[n2 + 1]) / np.where(radar, right[0], right[n2])
    tau = (-np.angle(phase) / (2 * np.pi)) % 1.0
    return tau[radar], tau[~radar]


def check_guarantee(left, right, shape, mu):
    """Incoherence diagnostics for the Vandermonde factors.

    Compares the smallest singular value of each factor's column Gram matrix
    with ``n1 / mu`` and ``n2 / mu``, and the joint delay separation (read off
    the steering columns of `right`) with the threshold ``2 mu / (N (mu - 1))``
    those conditions imply.
    """
    mu = float(mu)
    if not mu > 1:
        raise ValueError(f"mu must exceed 1, got {mu}")

    def gram_min(f):
        if f.shape[1] == 0:
            return np.inf
        return float(np.linalg.svd(f.conj().T @ f, compute_uv=False)[-1])

    gl, gr = gram_min(left), gram_min(right)
    tl, tr = shape.n1 / mu, shape.n2 / mu
    sep = min_separation(*_delays_from_right(right, shape)).delta
    threshold = 2.0 * mu / (shape.n_samples * (mu - 1.0))
    return GuaranteeDiagnostic(
        gram_left_min=gl,
        gram_right_min=gr,
        threshold_left=tl,
        threshold_right=tr,
        left_pass=bool(gl >= tl),
        right_pass=bool(gr >= tr),
        separation=sep,
        separation_threshold=threshold,
        separation_pass=bool(sep > threshold),
    )
