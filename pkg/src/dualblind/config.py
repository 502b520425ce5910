"""Experiment configuration and its flat ``key = value`` file format.

Example::

    # reference-sized recovery run
    n_samples = 75
    targets = 2
    paths = 2
    separation_floor = 0.1
    k_range = 1-4
"""

import configparser
import dataclasses
import hashlib
from dataclasses import dataclass, fields

from .exceptions import ConfigError
from .signal_model import BASIS_KINDS
from .solver import SolverParams

_SECTION = "experiment"


def _parse_range(text):
    text = text.strip()
    if "-" in text and "," not in text:
        lo, hi = (int(p) for p in text.split("-", 1))
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return tuple(range(lo, hi + 1))
    values = tuple(int(p) for p in text.split(",") if p.strip())
    if not values:
        raise ValueError("empty range")
    return values


def _parse_optional_float(text):
    return None if text.strip().lower() in ("", "none", "off") else float(text)


@dataclass(frozen=True)
class ExperimentConfig:
    n_samples: int = 75
    targets: int = 2
    paths: int = 2
    subspace_dim: int = 2
    separation_floor: float | None = 0.1
    basis: str = "phase"
    rho: float = 1.0
    max_iters: int = 5000
    tol_primal: float = 1e-8
    tol_dual: float = 1e-8
    tol_feas: float = 1e-8
    grid_size: int = 4096
    trials: int = 20
    seed: int = 0
    k_range: tuple = (1, 2, 3, 4)
    q_range: tuple = (1, 2, 3, 4)
    workers: int = 1
    mu: float = 2.0
    interval_a: float = -1.0
    interval_b: float = 1.0
    bandwidth: float = 1.0
    truncation: int = 10_000
    extremal_points: int = 10_000
    condition_trials: int = 100
    condition_floor: float = 0.2
    condition_targets: int = 2
    condition_paths: int = 2

    def __post_init__(self):
        positive = ("n_samples", "subspace_dim", "max_iters", "grid_size", "trials",
                    "workers", "truncation", "extremal_points", "condition_trials")
        for name in positive:
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("targets", "paths", "condition_targets", "condition_paths"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.basis not in BASIS_KINDS:
            raise ConfigError(f"basis must be one of {BASIS_KINDS}, got {self.basis!r}")
        if self.subspace_dim > self.n_samples:
            raise ConfigError("subspace_dim cannot exceed n_samples")
        if not self.k_range or not self.q_range:
            raise ConfigError("sweep ranges must be nonempty")
        if min(self.k_range) < 0 or min(self.q_range) < 0:
            raise ConfigError("sweep ranges must be nonnegative")
        if self.separation_floor is not None and not 0 <= self.separation_floor < 0.5:
            raise ConfigError("separation_floor must lie in [0, 0.5)")
        for name in ("rho", "tol_primal", "tol_dual", "tol_feas", "condition_floor"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not self.mu > 1:
            raise ConfigError("mu must exceed 1")

    @property
    def solver_params(self):
        return SolverParams(self.rho, self.max_iters, self.tol_primal, self.tol_dual, self.tol_feas)

    def replace(self, **changes):
        try:
            return dataclasses.replace(self, **changes)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_text(self):
        """Canonical ``key = value`` serialization; :func:`parse_config` inverts it."""
        lines = []
        for f in _public_fields():
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            elif value is None:
                value = "none"
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def digest(self):
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _public_fields():
    return list(fields(ExperimentConfig))


def _converter(f):
    if f.name == "separation_floor":
        return _parse_optional_float
    if f.type is tuple:
        return _parse_range
    return f.type


def parse_config(text):
    """Parse the flat key-value format; unknown or malformed keys raise :class:`ConfigError`."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    known = {f.name: f for f in _public_fields()}
    values = {}
    for key, raw in parser[_SECTION].items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            values[key] = _converter(known[key])(raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
    return ExperimentConfig(**values)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
