"""Sparse delay channels, waveform subspaces and the overlaid measurement model.

All delays are normalized to the unit torus [0, 1) and samples are indexed
``n = 0, ..., N - 1``.  A receiver observes

    y[n] = sum_i beta_i exp(-2j pi tau_r[i] n) (B h_r)[n]
         + sum_q omega_q exp(-2j pi tau_c[q] n) (D h_c)[n]

where ``B`` and ``D`` are known tall bases and ``h_r``, ``h_c`` unknown
coefficient vectors.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import (
    check_complex_matrix,
    check_complex_vector,
    check_delays,
    check_positive_int,
    frozen,
)
from .exceptions import DomainError, InfeasibleSeparationError, ShapeError

#: Retry cap for separation-constrained delay sampling.
MAX_REJECTION_TRIES = 10_000

BASIS_KINDS = ("phase", "dft", "gaussian")


@dataclass(frozen=True)
class DelayChannel:
    """Delays on the unit torus with their complex path amplitudes."""

    delays: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        delays = check_delays(self.delays)
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != delays.shape:
            raise ShapeError(
                f"got {delays.size} delays but {amplitudes.size} amplitudes"
            )
        if np.any(amplitudes == 0):
            raise DomainError("channel amplitudes must be nonzero")
        if np.unique(delays).size != delays.size:
            raise DomainError("channel delays must be pairwise distinct")
        object.__setattr__(self, "delays", frozen(delays))
        object.__setattr__(self, "amplitudes", frozen(amplitudes))

    @classmethod
    def empty(cls):
        return cls(np.zeros(0), np.zeros(0, dtype=complex))

    def __len__(self):
        return self.delays.size

    def scaled(self, factor):
        """Channel with every amplitude multiplied by `factor`."""
        return DelayChannel(self.delays, self.amplitudes * factor)


@dataclass(frozen=True)
class LiftedMatrix:
    """Stacked unknown ``X = [X_r; X_c]``, each block ``N_rc x N``."""

    radar: np.ndarray
    comms: np.ndarray

    def __post_init__(self):
        radar = check_complex_matrix(self.radar, "radar block")
        comms = check_complex_matrix(self.comms, "comms block", shape=radar.shape)
        object.__setattr__(self, "radar", frozen(radar))
        object.__setattr__(self, "comms", frozen(comms))

    @classmethod
    def zeros(cls, block_dim, n_samples):
        z = np.zeros((block_dim, n_samples), dtype=complex)
        return cls(z, z)

    @classmethod
    def from_stacked(cls, stacked):
        stacked = np.asarray(stacked)
        if stacked.ndim != 3 or stacked.shape[0] != 2:
            raise ShapeError(f"expected a (2, N_rc, N) array, got {stacked.shape}")
        return cls(stacked[0], stacked[1])

    @property
    def block_dim(self):
        return self.radar.shape[0]

    @property
    def n_samples(self):
        return self.radar.shape[1]

    def stacked(self):
        """Return a fresh ``(2, N_rc, N)`` array holding both blocks."""
        return np.stack([self.radar, self.comms])

    def norm(self):
        return float(np.sqrt(np.linalg.norm(self.radar) ** 2 + np.linalg.norm(self.comms) ** 2))

    def __add__(self, other):
        return LiftedMatrix(self.radar + other.radar, self.comms + other.comms)

    def __sub__(self, other):
        return LiftedMatrix(self.radar - other.radar, self.comms - other.comms)

    def __mul__(self, scalar):
        return LiftedMatrix(self.radar * scalar, self.comms * scalar)

    __rmul__ = __mul__


def steering_vector(tau, n_samples):
    """Atom ``a(tau)[n] = exp(-2j pi tau n)`` for ``n = 0, ..., n_samples - 1``.

    Parameters
    ----------
    tau : float
        Delay in [0, 1).
    n_samples : int
        Vector length.

    Returns
    -------
    ndarray of complex, shape (n_samples,)
    """
    tau = check_delays([tau], "tau")[0]
    n_samples = check_positive_int(n_samples, "n_samples")
    return np.exp(-2j * np.pi * tau * np.arange(n_samples))


def steering_matrix(delays, n_samples):
    """Columns are :func:`steering_vector` for each delay; shape (n_samples, P)."""
    delays = check_delays(delays)
    return np.exp(-2j * np.pi * np.outer(np.arange(n_samples), delays))


def _check_bases(basis_r, basis_c):
    basis_r = check_complex_matrix(basis_r, "basis_r")
    basis_c = check_complex_matrix(basis_c, "basis_c")
    if basis_r.shape[0] != basis_c.shape[0]:
        raise ShapeError(
            f"bases must share the sample count, got {basis_r.shape[0]} "
            f"and {basis_c.shape[0]} rows"
        )
    return basis_r, basis_c


def check_basis(basis, name="basis"):
    """Validate a subspace basis: tall, with pairwise distinct columns."""
    basis = check_complex_matrix(basis, name)
    n, ns = basis.shape
    if ns > n:
        raise ShapeError(f"{name} must be tall, got {basis.shape}")
    for i in range(ns):
        for j in range(i + 1, ns):
            if np.allclose(basis[:, i], basis[:, j]):
                raise DomainError(f"{name} has duplicated columns {i} and {j}")
    return basis


def synthesize_measurements(radar, comms, basis_r, basis_c, h_r, h_c):
    """Overlaid frequency-domain samples of the radar and comms returns."""
    basis_r, basis_c = _check_bases(basis_r, basis_c)
    n = basis_r.shape[0]
    g_r = basis_r @ check_complex_vector(h_r, "h_r", basis_r.shape[1])
    g_c = basis_c @ check_complex_vector(h_c, "h_c", basis_c.shape[1])
    y = g_r * (steering_matrix(radar.delays, n) @ radar.amplitudes)
    y = y + g_c * (steering_matrix(comms.delays, n) @ comms.amplitudes)
    return y


def build_lifted_truth(radar, comms, h_r, h_c, n_samples):
    """Ground-truth lifted matrix ``X_r = sum_i beta_i h_r a(tau_i)^T`` (and comms)."""
    n_samples = check_positive_int(n_samples, "n_samples")
    h_r = check_complex_vector(h_r, "h_r")
    h_c = check_complex_vector(h_c, "h_c", h_r.shape[0])
    radar_row = steering_matrix(radar.delays, n_samples) @ radar.amplitudes
    comms_row = steering_matrix(comms.delays, n_samples) @ comms.amplitudes
    return LiftedMatrix(np.outer(h_r, radar_row), np.outer(h_c, comms_row))


class Scene(NamedTuple):
    """One synthetic problem instance."""

    radar: DelayChannel
    comms: DelayChannel
    basis_r: np.ndarray
    basis_c: np.ndarray
    h_r: np.ndarray
    h_c: np.ndarray

    @property
    def n_samples(self):
        return self.basis_r.shape[0]

    def measurements(self):
        return synthesize_measurements(*self)

    def lifted(self):
        return build_lifted_truth(self.radar, self.comms, self.h_r, self.h_c, self.n_samples)

    def waveforms(self):
        """Sampled spectra ``(B h_r, D h_c)``."""
        return self.basis_r @ self.h_r, self.basis_c @ self.h_c


def _random_amplitudes(rng, count):
    gamma = rng.random(count)
    phi = rng.uniform(0.0, 2 * np.pi, count)
    return (1.0 + 10.0**gamma) * np.exp(-1j * phi)


def _random_basis(rng, n, ns, kind, exclude=()):
    if kind == "dft":
        # distinct columns of the unnormalized N-point DFT, unit-modulus entries
        pool = np.setdiff1d(np.arange(n), np.asarray(exclude, dtype=int))
        cols = rng.choice(pool, size=ns, replace=False)
        return np.exp(-2j * np.pi * np.outer(np.arange(n), cols) / n), cols
    if kind == "phase":
        return np.exp(2j * np.pi * rng.random((n, ns))), ()
    if kind == "gaussian":
        return (rng.standard_normal((n, ns)) + 1j * rng.standard_normal((n, ns))) / np.sqrt(2), ()
    raise DomainError(f"unknown basis kind {kind!r}; choose from {BASIS_KINDS}")


def _unit_gaussian(rng, size):
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


def sample_delays(rng, n_radar, n_comms, separation_floor=None):
    """Uniform delays, redrawn until the joint torus separation meets the floor."""
    from .extremal import min_separation

    for _ in range(MAX_REJECTION_TRIES):
        tau_r = rng.random(n_radar)
        tau_c = rng.random(n_comms)
        if not separation_floor:
            return tau_r, tau_c
        if min_separation(tau_r, tau_c).delta >= separation_floor:
            return tau_r, tau_c
    raise InfeasibleSeparationError(
        f"no draw of {n_radar}+{n_comms} delays reached separation floor "
        f"{separation_floor} in {MAX_REJECTION_TRIES} tries"
    )


def random_scene(config, rng_seed):
    """Draw a seeded scene from an experiment configuration.

    `config` needs the attributes ``n_samples``, ``targets``, ``paths``,
    ``subspace_dim``, ``separation_floor`` and optionally ``basis`` (one of
    ``"phase"``, ``"dft"``, ``"gaussian"``; default ``"phase"``).  `rng_seed`
    is anything accepted by :func:`numpy.random.default_rng`.
    """
    n = check_positive_int(config.n_samples, "n_samples")
    ns = check_positive_int(config.subspace_dim, "subspace_dim")
    k = check_positive_int(config.targets, "targets", minimum=0)
    q = check_positive_int(config.paths, "paths", minimum=0)
    if ns > n:
        raise ShapeError(f"subspace_dim {ns} exceeds n_samples {n}")
    kind = getattr(config, "basis", "phase")
    rng = np.random.default_rng(rng_seed)

    tau_r, tau_c = sample_delays(rng, k, q, config.separation_floor)
    radar = DelayChannel(tau_r, _random_amplitudes(rng, k))
    comms = DelayChannel(tau_c, _random_amplitudes(rng, q))
    basis_r, used = _random_basis(rng, n, ns, kind)
    basis_c, _ = _random_basis(rng, n, ns, kind, exclude=used)
    h_r = _unit_gaussian(rng, ns)
    h_c = _unit_gaussian(rng, ns)
    return Scene(radar, comms, frozen(basis_r), frozen(basis_c), frozen(h_r), frozen(h_c))
