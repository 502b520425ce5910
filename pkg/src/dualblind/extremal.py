"""Beurling-Selberg extremal functions and Vandermonde conditioning.

Beurling's function

    H(x) = (sin(pi x) / pi)^2 * [ sum_{n>=0} (x-n)^-2 - sum_{n<0} (x-n)^-2 + 2/x ]

is an entire function of exponential type 2 pi with ``H >= sgn`` and
``integral(H - sgn) = 1``.  Selberg's majorant and minorant of the indicator of
``[a, b]`` built from it have Fourier transforms supported on
``[-bandwidth, bandwidth]`` and integrals ``(b - a) +/- 1/bandwidth``.
Selberg's functions bound the spectrum of Vandermonde matrices whose nodes are
separated on the torus.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_complex_vector, check_delays, check_positive_int
from .exceptions import DegenerateSceneError, DomainError, InfeasibleBoundError, ShapeError

DEFAULT_TRUNCATION = 10_000

_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class SeparationStats:
    """Torus separations: radar-radar, comms-comms, radar-comms, and their minimum."""

    delta_r: float
    delta_c: float
    delta_rc: float
    delta: float


@dataclass(frozen=True)
class ExtremalInterval:
    a: float
    b: float
    bandwidth: float

    def __post_init__(self):
        if not self.b > self.a:
            raise DomainError(f"interval requires a < b, got [{self.a}, {self.b}]")
        if not (self.bandwidth > 0 and np.isfinite(self.bandwidth)):
            raise DomainError(f"bandwidth must be positive, got {self.bandwidth}")

    @property
    def length(self):
        return self.b - self.a


def torus_distance(x, y):
    d = np.abs(np.asarray(x) - np.asarray(y)) % 1.0
    return np.minimum(d, 1.0 - d)


def _within_min(t):
    if t.size < 2:
        return np.inf
    d = torus_distance(t[:, None], t[None, :])
    return float(d[np.triu_indices(t.size, 1)].min())


def min_separation(radar_delays, comms_delays):
    """Minimum wrap-around separations within and across the two delay sets."""
    tau_r = check_delays(radar_delays, "radar_delays")
    tau_c = check_delays(comms_delays, "comms_delays")
    delta_r = _within_min(tau_r)
    delta_c = _within_min(tau_c)
    if tau_r.size and tau_c.size:
        delta_rc = float(torus_distance(tau_r[:, None], tau_c[None, :]).min())
    else:
        delta_rc = np.inf
    return SeparationStats(delta_r, delta_c, delta_rc, min(delta_r, delta_c, delta_rc))


def beurling_tail_bound(x, truncation):
    """Bound on the error of :func:`beurling_majorant_sgn` at truncation `truncation`.

    The omitted series tail is replaced by the midpoint integral
    ``1/(T+1/2-x) - 1/(T+1/2+x)``; the residual is controlled by the third
    derivative of the summand, giving ``|x| / (T - |x|)^4`` (valid for ``|x| < T``),
    plus a floating-point summation allowance.
    """
    x = np.abs(np.asarray(x, dtype=float))
    gap = np.maximum(truncation - x, 1.0)
    rounding = 4 * np.finfo(float).eps * (2 * truncation + 1)
    return np.where(x < truncation, x / gap**4 + rounding, np.inf)


def beurling_majorant_sgn(x, truncation=DEFAULT_TRUNCATION):
    """Beurling's entire majorant of ``sgn`` (with ``sgn(0) = 1``).

    Evaluated as ``sum_{|n|<=T} sgn(n) sinc^2(x - n) + 2 sin^2(pi x)/(pi^2 x)``
    plus a midpoint-rule estimate of the omitted tail.  The term at the integer
    nearest `x` is taken in sinc form, so integers (removable singularities)
    are handled exactly.  The truncation is widened to ``2 max|x|`` when needed
    so the tail estimate stays valid.  Accepts scalars or arrays.
    """
    truncation = check_positive_int(truncation, "truncation")
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    if flat.size:
        truncation = max(truncation, 2 * int(np.ceil(np.abs(flat).max())))
    nearest = np.round(flat)
    frac = flat - nearest
    # sin^2(pi x) == sin^2(pi frac); frac is exact, so no cancellation near integers
    sin2 = np.sin(np.pi * frac) ** 2 / np.pi**2
    n = np.arange(-truncation, truncation + 1, dtype=float)
    sgn = np.where(n >= 0, 1.0, -1.0)
    out = np.empty(flat.shape)
    step = max(1, _CHUNK_ELEMENTS // n.size)
    for start in range(0, flat.size, step):
        xs = flat[start:start + step, None]
        d2 = (xs - n) ** 2
        d2[n == nearest[start:start + step, None]] = np.inf
        out[start:start + step] = sin2[start:start + step] * ((sgn / d2).sum(axis=1))
    in_range = np.abs(nearest) <= truncation
    out += np.where(in_range, np.where(nearest >= 0, 1.0, -1.0) * np.sinc(frac) ** 2, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        recip = np.where(flat == 0.0, 0.0, 2.0 / np.where(flat == 0.0, 1.0, flat))
        half = truncation + 0.5
        tail = 1.0 / (half - flat) - 1.0 / (half + flat)
    out += sin2 * (recip + tail)
    return out.reshape(x.shape) if x.ndim else float(out[0])


def selberg_majorant(interval, t, truncation=DEFAULT_TRUNCATION):
    """``C_E(t) = (H(D(t-a)) + H(D(b-t))) / 2`` with ``D`` the bandwidth."""
    t = np.asarray(t, dtype=float)
    d = interval.bandwidth
    return 0.5 * (
        beurling_majorant_sgn(d * (t - interval.a), truncation)
        + beurling_majorant_sgn(d * (interval.b - t), truncation)
    )


def selberg_minorant(interval, t, truncation=DEFAULT_TRUNCATION):
    """``c_E(t) = -(H(D(a-t)) + H(D(t-b))) / 2``."""
    t = np.asarray(t, dtype=float)
    d = interval.bandwidth
    return -0.5 * (
        beurling_majorant_sgn(d * (interval.a - t), truncation)
        + beurling_majorant_sgn(d * (t - interval.b), truncation)
    )


def indicator(interval, t):
    t = np.asarray(t, dtype=float)
    return ((t >= interval.a) & (t <= interval.b)).astype(float)


def selberg_integral(interval, which="majorant", periods=400, order=16, truncation=1000):
    """Integrate the majorant or minorant over the real line.

    Composite Gauss-Legendre over panels one period ``1/bandwidth`` wide,
    covering ``periods`` periods beyond each endpoint, plus the asymptotic tail
    ``1 / (2 pi^2 D^2 u)`` of each Beurling term past the cut.
    """
    func = {"majorant": selberg_majorant, "minorant": selberg_minorant}[which]
    d = interval.bandwidth
    width = 1.0 / d
    lo = interval.a - periods * width
    n_panels = int(np.ceil((interval.b + periods * width - lo) / width))
    edges = lo + width * np.arange(n_panels + 1)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = (mid[:, None] + 0.5 * width * nodes[None, :]).ravel()
    vals = func(interval, pts, truncation).reshape(n_panels, order)
    total = float(0.5 * width * (vals @ weights).sum())
    hi = edges[-1]
    # each side carries two half-weighted Beurling terms with mean tail 1/(2 pi^2 u^2)
    cuts = [interval.a - lo, interval.b - lo, hi - interval.a, hi - interval.b]
    tail = sum(0.25 / (np.pi**2 * d**2 * c) for c in cuts)
    return total + tail if which == "majorant" else total - tail


def fourier_energy_outside(interval, which="majorant", periods=512, oversample=8,
                           truncation=2000):
    """Fraction of the spectral energy of the extremal function beyond ``|f| > bandwidth``.

    ``f`` is in cycles per unit ``t``; the function is sampled ``oversample``
    times per period on a window of ``periods`` periods around the interval
    and transformed with an FFT.
    """
    func = {"majorant": selberg_majorant, "minorant": selberg_minorant}[which]
    d = interval.bandwidth
    dt = 1.0 / (oversample * d)
    center = 0.5 * (interval.a + interval.b)
    half = 0.5 * interval.length + periods / d
    m = int(2 * np.ceil(half / dt))
    t = center + dt * (np.arange(m) - m // 2)
    power = np.abs(np.fft.fft(func(interval, t, truncation))) ** 2
    freqs = np.fft.fftfreq(m, dt)
    return float(power[np.abs(freqs) > d].sum() / power.sum())


def condition_bound(n_samples, delta):
    """Upper bound ``sqrt((N + 1/D - 1) / (N - 1/D - 1))`` on the condition number.

    Requires ``N > 1 + 1/D``; `delta` may be ``inf``.
    """
    n_samples = check_positive_int(n_samples, "n_samples")
    delta = float(delta)
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    inv = 0.0 if np.isinf(delta) else 1.0 / delta
    if not n_samples > 1.0 + inv:
        need = int(np.floor(1.0 + inv)) + 1
        raise InfeasibleBoundError(
            f"bound needs n_samples > 1 + 1/delta = {1.0 + inv:g}; "
            f"use at least N = {need}"
        )
    return float(np.sqrt((n_samples + inv - 1.0) / (n_samples - inv - 1.0)))


def weighted_vandermonde(radar, comms, g_r, g_c):
    """``[diag(g_r) V_r, diag(g_c) V_c]`` of shape ``(N, K + Q)``."""
    g_r = check_complex_vector(g_r, "g_r")
    g_c = check_complex_vector(g_c, "g_c", g_r.shape[0])
    n = np.arange(g_r.shape[0])
    v_r = np.exp(-2j * np.pi * np.outer(n, radar.delays))
    v_c = np.exp(-2j * np.pi * np.outer(n, comms.delays))
    return np.hstack([g_r[:, None] * v_r, g_c[:, None] * v_c])


def empirical_condition(radar, comms, g_r, g_c):
    """Condition number of the weighted Vandermonde system via SVD."""
    vg = weighted_vandermonde(radar, comms, g_r, g_c)
    n, p = vg.shape
    if p == 0:
        raise ShapeError("scene has no delays")
    if p > n:
        raise ShapeError(f"K + Q = {p} exceeds N = {n}")
    s = np.linalg.svd(vg, compute_uv=False)
    if s[-1] < 1e-14 * s[0]:
        raise DegenerateSceneError(
            f"weighted Vandermonde matrix is rank deficient (sigma_min/sigma_max = {s[-1] / s[0]:.3g})"
        )
    return float(s[0] / s[-1])
