"""MUSIC delay estimation and least-squares waveform recovery from a lifted block."""

import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import check_complex_matrix, check_complex_vector, check_delays, check_positive_int
from .exceptions import DomainError, EstimationError, RankDeficiencyError, ShapeError
from .hankel import hankel_lift
from .signal_model import steering_matrix

#: Relative singular-value floor defining the numerical rank of a lifted block.
RANK_RTOL = 1e-10

#: Steering-matrix condition number above which a fit is flagged.
CONDITION_WARN = 1e8


class IllConditionedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Pseudospectrum:
    grid: np.ndarray
    values: np.ndarray
    peaks: np.ndarray

    def db(self):
        """Values in dB relative to the maximum."""
        return 10.0 * np.log10(self.values / self.values.max())


@dataclass(frozen=True)
class WaveformFit:
    """Rank-1 factorization ``block ~ coeffs (A(delays) amplitudes)^T``.

    ``coeffs`` has unit norm with its first nonzero entry real and positive.
    """

    coeffs: np.ndarray
    amplitudes: np.ndarray
    residual: float
    condition: float
    warning: str | None = None


def music_pseudospectrum(block, model_order, shape, grid_size):
    """Evaluate ``1 / ||P_noise a_n2(tau)||^2`` on ``tau = g / grid_size``."""
    model_order = check_positive_int(model_order, "model_order")
    grid_size = check_positive_int(grid_size, "grid_size")
    if grid_size < 4 * shape.n_samples:
        raise DomainError(f"grid_size must be >= 4 N = {4 * shape.n_samples}, got {grid_size}")
    if model_order > shape.n2:
        raise DomainError(f"model_order {model_order} exceeds the lift width n2 = {shape.n2}")
    lifted = hankel_lift(block, shape)
    _, s, vh = np.linalg.svd(lifted, full_matrices=False)
    rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
    if model_order > rank:
        raise RankDeficiencyError(f"model_order {model_order} exceeds numerical rank {rank}")
    # rows of vh[:r] span the row space of the lift, i.e. the n2-length steering vectors
    proj = np.fft.fft(np.conj(vh[:model_order]), n=grid_size, axis=1)
    signal = (np.abs(proj) ** 2).sum(axis=0)
    noise = np.maximum(shape.n2 - signal, shape.n2 * 1e-30)
    return np.arange(grid_size) / grid_size, 1.0 / noise


def music_delays(block, model_order, shape, grid_size=4096):
    """Locate `model_order` delays from the row space of the block's Hankel lift.

    Peaks are the largest circular local maxima of the pseudospectrum, refined
    by three-point parabolic interpolation of its logarithm.

    Returns
    -------
    delays : ndarray, sorted ascending
    spectrum : Pseudospectrum
    """
    grid, values = music_pseudospectrum(block, model_order, shape, grid_size)
    left, right = np.roll(values, 1), np.roll(values, -1)
    is_peak = (values > left) & (values >= right)
    candidates = np.flatnonzero(is_peak)
    if candidates.size < model_order:
        raise EstimationError(
            f"found {candidates.size} pseudospectrum peaks, need {model_order}"
        )
    top = candidates[np.argsort(values[candidates])[::-1][:model_order]]
    top = np.sort(top)

    lv, cv, rv = np.log(left[top]), np.log(values[top]), np.log(right[top])
    curv = lv - 2.0 * cv + rv
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(curv < 0, 0.5 * (lv - rv) / curv, 0.0)
    offset = np.clip(offset, -0.5, 0.5)
    delays = np.sort(((top + offset) / grid_size) % 1.0)
    return delays, Pseudospectrum(grid, values, top)


def recover_waveform_amplitudes(block, delays):
    """Least-squares waveform coefficients and amplitudes for known delays.

    Solves ``block ~ M A^T`` with ``A`` the steering matrix of `delays`, then
    takes the leading singular pair of ``M`` as ``coeffs amplitudes^T``.
    """
    block = check_complex_matrix(block, "block")
    delays = check_delays(delays)
    n = block.shape[1]
    if delays.size == 0:
        raise DomainError("need at least one delay")
    if delays.size > n:
        raise ShapeError(f"{delays.size} delays exceed the {n} samples")
    if np.unique(delays).size != delays.size:
        raise DomainError("delays must be distinct")
    a = steering_matrix(delays, n)
    sol, *_ = np.linalg.lstsq(a, block.T, rcond=None)
    m = sol.T  # (N_rc, P)
    cond = float(np.linalg.cond(a))
    note = None
    if cond > CONDITION_WARN:
        note = f"steering matrix condition number {cond:.3g}; delays nearly coincide"
        warnings.warn(note, IllConditionedWarning, stacklevel=2)

    u, s, vh = np.linalg.svd(m, full_matrices=False)
    coeffs = u[:, 0]
    mags = np.abs(coeffs)
    anchor = int(np.flatnonzero(mags > 1e-12 * mags.max())[0])
    phase = coeffs[anchor] / mags[anchor]
    coeffs = coeffs / phase
    amplitudes = s[0] * vh[0] * phase
    recon = np.outer(coeffs, a @ amplitudes)
    scale = np.linalg.norm(block)
    residual = float(np.linalg.norm(block - recon) / scale) if scale > 0 else 0.0
    return WaveformFit(coeffs, amplitudes, residual, cond, note)


def nmse(truth, estimate):
    """Relative error after optimal complex-scalar alignment of `estimate`.

    ``min_c ||truth - c estimate|| / ||truth||``; lies in [0, 1].
    """
    truth = check_complex_vector(np.ravel(truth), "truth")
    estimate = check_complex_vector(np.ravel(estimate), "estimate", truth.size)
    t_norm = np.linalg.norm(truth)
    if t_norm == 0:
        raise DomainError("truth must be nonzero")
    e_energy = np.vdot(estimate, estimate).real
    if e_energy == 0:
        return 1.0
    c = np.vdot(estimate, truth) / e_energy
    return float(np.linalg.norm(truth - c * estimate) / t_norm)
