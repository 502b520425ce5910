"""scikit-learn style front end to the recovery pipeline."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_complex_vector
from .baseline import solve_baseline
from .hankel import HankelShape, MeasurementOperator
from .signal_model import DelayChannel, check_basis, synthesize_measurements
from .solver import SolverParams, solve_dbd
from .spectral import music_delays, recover_waveform_amplitudes

METHODS = ("hankel", "lifted")


class DualBlindDeconvolution(BaseEstimator):
    """Separate an overlaid radar and communications measurement.

    Parameters
    ----------
    n_targets, n_paths : int
        Model orders ``K`` (radar delays) and ``Q`` (comms paths).
    method : {"hankel", "lifted"}
        ``"hankel"`` minimizes the nuclear norm of the concatenated Hankel
        lift; ``"lifted"`` is the unstructured blockwise baseline.
    n1 : int or None
        Hankel row count; ``None`` picks the most square split.
    rho, max_iters, tol_primal, tol_dual, tol_feas
        ADMM settings, see :class:`dualblind.solver.SolverParams`.
    grid_size : int
        MUSIC search grid on ``[0, 1)``.

    Attributes
    ----------
    lifted_ : LiftedMatrix
        Recovered ``[X_r; X_c]``.
    report_ : SolverReport
    radar_, comms_ : DelayChannel
        Estimated delays and amplitudes.
    radar_coeffs_, comms_coeffs_ : ndarray
        Unit-norm waveform coefficients.
    spectra_ : dict
        ``"radar"`` / ``"comms"`` pseudospectra.

    Examples
    --------
    >>> from dualblind import ExperimentConfig, random_scene
    >>> scene = random_scene(ExperimentConfig(n_samples=31, separation_floor=0.15), 1)
    >>> est = DualBlindDeconvolution(n_targets=2, n_paths=2)
    >>> est = est.fit(scene.measurements(), scene.basis_r, scene.basis_c)
    >>> bool(est.report_.converged)
    True
    """

    def __init__(self, n_targets=1, n_paths=1, method="hankel", n1=None, rho=1.0,
                 max_iters=5000, tol_primal=1e-8, tol_dual=1e-8, tol_feas=1e-8, grid_size=4096):
        self.n_targets = n_targets
        self.n_paths = n_paths
        self.method = method
        self.n1 = n1
        self.rho = rho
        self.max_iters = max_iters
        self.tol_primal = tol_primal
        self.tol_dual = tol_dual
        self.tol_feas = tol_feas
        self.grid_size = grid_size

    def _shape(self, n, block_dim):
        if self.n1 is None:
            return HankelShape.square(n, block_dim)
        return HankelShape(self.n1, n + 1 - self.n1, n, block_dim)

    def fit(self, y, basis_r, basis_c):
        """Recover the lifted matrix, delays and waveform coefficients from `y`."""
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        basis_r = check_basis(basis_r, "basis_r")
        basis_c = check_basis(basis_c, "basis_c")
        y = check_complex_vector(y, "y", basis_r.shape[0])
        op = MeasurementOperator(basis_r, basis_c)
        shape = self._shape(y.size, basis_r.shape[1])
        params = SolverParams(self.rho, self.max_iters, self.tol_primal, self.tol_dual, self.tol_feas)
        if self.method == "hankel":
            x, report = solve_dbd(y, op, shape, params)
        else:
            x, report = solve_baseline(y, op, params)

        self.basis_r_, self.basis_c_ = basis_r, basis_c
        self.lifted_, self.report_, self.shape_ = x, report, shape
        self.spectra_ = {}
        blocks = (("radar", x.radar, self.n_targets, basis_r), ("comms", x.comms, self.n_paths, basis_c))
        for kind, block, order, basis in blocks:
            if order == 0:
                channel, coeffs = DelayChannel.empty(), np.zeros(basis.shape[1], complex)
            else:
                delays, spectrum = music_delays(block, order, shape, self.grid_size)
                fit = recover_waveform_amplitudes(block, delays)
                channel, coeffs = DelayChannel(delays, fit.amplitudes), fit.coeffs
                self.spectra_[kind] = spectrum
            setattr(self, f"{kind}_", channel)
            setattr(self, f"{kind}_coeffs_", coeffs)
        return self

    def predict(self):
        """Measurements synthesized from the fitted parametric model."""
        check_is_fitted(self, "lifted_")
        return synthesize_measurements(self.radar_, self.comms_, self.basis_r_, self.basis_c_,
                                       self.radar_coeffs_, self.comms_coeffs_)

    def waveforms(self):
        """Estimated ``(g_r, g_c)``, each defined up to a complex scalar."""
        check_is_fitted(self, "lifted_")
        return self.basis_r_ @ self.radar_coeffs_, self.basis_c_ @ self.comms_coeffs_

    def score(self, y):
        """One minus the relative residual of :meth:`predict` against `y`."""
        y = check_complex_vector(y, "y", self.basis_r_.shape[0])
        return 1.0 - float(np.linalg.norm(self.predict() - y) / np.linalg.norm(y))
