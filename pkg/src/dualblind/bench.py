"""Experiment runners behind the command-line harness.

Each runner returns plain result objects; :mod:`dualblind.cli` turns them into
CSV and SVG files.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .baseline import solve_baseline
from .exceptions import DegenerateSceneError, InfeasibleSeparationError
from .extremal import (
    ExtremalInterval,
    condition_bound,
    empirical_condition,
    fourier_energy_outside,
    indicator,
    min_separation,
    selberg_integral,
    selberg_majorant,
    selberg_minorant,
    torus_distance,
)
from .hankel import HankelShape, MeasurementOperator, check_guarantee, vandermonde_factors
from .signal_model import DelayChannel, _random_amplitudes, random_scene, sample_delays
from .solver import solve_dbd
from .spectral import music_delays, nmse, recover_waveform_amplitudes

#: Lifted-matrix relative error below which a trial counts as a success.
SUCCESS_NMSE = 1e-3


def trial_seed(seed, *counters):
    """Independent, reproducible stream for ``(seed, counters...)``."""
    return np.random.SeedSequence([seed, *counters])


def lifted_error(truth, estimate):
    """Relative Frobenius error between lifted matrices."""
    denom = truth.norm()
    return (estimate - truth).norm() / denom if denom > 0 else estimate.norm()


def match_delays(true, est):
    """Pair estimated with true delays minimizing total torus distance."""
    true, est = np.asarray(true), np.asarray(est)
    if true.size == 0 or est.size == 0:
        return []
    cost = torus_distance(true[:, None], est[None, :])
    rows, cols = linear_sum_assignment(cost)
    order = np.argsort(rows)
    return [(int(rows[i]), float(true[rows[i]]), float(est[cols[i]]), float(cost[rows[i], cols[i]]))
            for i in order]


@dataclass
class BlockEstimate:
    delays: np.ndarray
    spectrum: object
    fit: object
    waveform_nmse: float


@dataclass
class RecoveryResult:
    scene: object
    shape: HankelShape
    x_hat: object
    report: object
    lifted_nmse: float
    radar: BlockEstimate | None
    comms: BlockEstimate | None
    guarantee: object | None


def _estimate_block(block, order, shape, grid_size, basis, truth_waveform):
    delays, spectrum = music_delays(block, order, shape, grid_size)
    fit = recover_waveform_amplitudes(block, delays)
    return BlockEstimate(delays, spectrum, fit, nmse(truth_waveform, basis @ fit.coeffs))


def run_recovery(config, seed=None):
    """Scene generation, Hankel recovery, MUSIC and waveform fits for one seed."""
    seed = config.seed if seed is None else seed
    scene = random_scene(config, seed)
    n, ns = config.n_samples, config.subspace_dim
    shape = HankelShape.square(n, ns)
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    x_hat, report = solve_dbd(scene.measurements(), op, shape, config.solver_params)
    truth = scene.lifted()
    g_r, g_c = scene.waveforms()
    radar = comms = None
    if len(scene.radar):
        radar = _estimate_block(x_hat.radar, len(scene.radar), shape, config.grid_size,
                                scene.basis_r, g_r)
    if len(scene.comms):
        comms = _estimate_block(x_hat.comms, len(scene.comms), shape, config.grid_size,
                                scene.basis_c, g_c)
    guarantee = None
    if len(scene.radar) + len(scene.comms):
        left, _, right = vandermonde_factors(scene.radar, scene.comms, scene.h_r, scene.h_c, shape)
        guarantee = check_guarantee(left, right, shape, config.mu)
    return RecoveryResult(scene, shape, x_hat, report, lifted_error(truth, x_hat),
                          radar, comms, guarantee)


@dataclass(frozen=True)
class TrialOutcome:
    k: int
    q: int
    trial: int
    method: str
    nmse: float
    converged: bool
    iterations: int
    note: str = ""

    @property
    def success(self):
        return self.nmse < SUCCESS_NMSE


def _run_trial(args):
    config, k, q, trial = args
    cfg = config.replace(targets=k, paths=q)
    shape = HankelShape.square(cfg.n_samples, cfg.subspace_dim)
    try:
        scene = random_scene(cfg, trial_seed(cfg.seed, k, q, trial))
    except InfeasibleSeparationError as exc:
        return [TrialOutcome(k, q, trial, m, float("nan"), False, 0, f"scene: {exc}")
                for m in ("proposed", "baseline")]
    y = scene.measurements()
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    truth = scene.lifted()
    out = []
    x, rep = solve_dbd(y, op, shape, cfg.solver_params)
    out.append(TrialOutcome(k, q, trial, "proposed", lifted_error(truth, x), rep.converged, rep.iterations))
    x, rep = solve_baseline(y, op, cfg.solver_params)
    out.append(TrialOutcome(k, q, trial, "baseline", lifted_error(truth, x), rep.converged, rep.iterations))
    return out


@dataclass(frozen=True)
class CellSummary:
    k: int
    q: int
    method: str
    success_prob: float
    trials: int
    note: str = ""


def phase_transition(config, progress=None):
    """Success probability of both methods over the ``(K, Q)`` sweep.

    Trials run in a process pool when ``config.workers > 1``; results are
    ordered by ``(K, Q, trial)`` regardless of completion order.  Cells whose
    rank ``K + Q`` exceeds the lift width ``n2`` are not simulated and record
    probability 0.
    """
    shape = HankelShape.square(config.n_samples, config.subspace_dim)
    cells = [(k, q) for k in config.k_range for q in config.q_range]
    jobs = [(config, k, q, t) for k, q in cells if k + q <= shape.n2 for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=1))
    else:
        results = []
        for job in jobs:
            results.append(_run_trial(job))
            if progress:
                progress(job)
    outcomes = sorted((o for batch in results for o in batch),
                      key=lambda o: (o.k, o.q, o.trial, o.method != "proposed"))
    summaries = []
    for k, q in cells:
        for method in ("proposed", "baseline"):
            if k + q > shape.n2:
                summaries.append(CellSummary(k, q, method, 0.0, config.trials,
                                             f"K+Q={k + q} exceeds lift width n2={shape.n2}"))
                continue
            sel = [o for o in outcomes if o.k == k and o.q == q and o.method == method]
            wins = sum(o.success for o in sel)
            summaries.append(CellSummary(k, q, method, wins / len(sel), len(sel)))
    return summaries, outcomes


def flat_spectrum_scene(config, seed):
    """Delays and a shared unit-modulus waveform for conditioning checks.

    The comms waveform is a constant phase rotation of the radar one, so the
    weighted system has the singular values of the joint Vandermonde matrix.
    """
    rng = np.random.default_rng(seed)
    tau_r, tau_c = sample_delays(rng, config.condition_targets, config.condition_paths,
                                 config.condition_floor)
    radar = DelayChannel(tau_r, _random_amplitudes(rng, tau_r.size))
    comms = DelayChannel(tau_c, _random_amplitudes(rng, tau_c.size))
    g_r = np.exp(2j * np.pi * rng.random(config.n_samples))
    g_c = g_r * np.exp(2j * np.pi * rng.random())
    return radar, comms, g_r, g_c


@dataclass(frozen=True)
class ConditionRow:
    n_samples: int
    delta: float
    bound: float
    empirical: float

    @property
    def passed(self):
        return self.empirical <= self.bound * (1 + 1e-12)


def condition_trials(config):
    rows = []
    for trial in range(config.condition_trials):
        radar, comms, g_r, g_c = flat_spectrum_scene(config, trial_seed(config.seed, trial))
        delta = min_separation(radar.delays, comms.delays).delta
        try:
            kappa = empirical_condition(radar, comms, g_r, g_c)
        except DegenerateSceneError:
            kappa = float("inf")
        rows.append(ConditionRow(config.n_samples, delta, condition_bound(config.n_samples, delta), kappa))
    return rows


@dataclass
class ExtremalReport:
    interval: ExtremalInterval
    t: np.ndarray
    majorant: np.ndarray
    minorant: np.ndarray
    indicator: np.ndarray
    freqs: np.ndarray
    spectra: dict
    checks: list
    conditions: list


def _spectrum(values, dt):
    mag = np.abs(np.fft.fftshift(np.fft.fft(values))) * dt
    return mag


def run_extremal(config):
    """Sample the extremal functions and evaluate their identities and the bound table."""
    interval = ExtremalInterval(config.interval_a, config.interval_b, config.bandwidth)
    pad = 3.0 * max(interval.length, 1.0 / interval.bandwidth)
    t = np.linspace(interval.a - pad, interval.b + pad, config.extremal_points)
    maj = selberg_majorant(interval, t, config.truncation)
    mino = selberg_minorant(interval, t, config.truncation)
    ind = indicator(interval, t)
    dt = t[1] - t[0]
    freqs = np.fft.fftshift(np.fft.fftfreq(t.size, dt))
    spectra = {"majorant": _spectrum(maj, dt), "indicator": _spectrum(ind, dt),
               "minorant": _spectrum(mino, dt)}

    checks = []
    length, inv = interval.length, 1.0 / interval.bandwidth
    for which, expected in (("majorant", length + inv), ("minorant", length - inv)):
        value = selberg_integral(interval, which)
        rel = abs(value - expected) / abs(expected) if expected else abs(value)
        checks.append((f"integral_{which}", value, expected, rel, rel <= 1e-3))
    slack = float(min((maj - ind).min(), (ind - mino).min()))
    checks.append(("sandwich_slack", slack, 0.0, max(0.0, -slack), slack >= -1e-9))
    for which in ("majorant", "minorant"):
        frac = fourier_energy_outside(interval, which)
        checks.append((f"out_of_band_energy_{which}", frac, 0.0, frac, frac <= 1e-6))
    return ExtremalReport(interval, t, maj, mino, ind, freqs, spectra, checks,
                          condition_trials(config))
