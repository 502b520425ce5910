import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dualblind import DualBlindDeconvolution, ExperimentConfig, random_scene


@pytest.fixture(scope="module")
def scene():
    return random_scene(ExperimentConfig(), 5)


def test_params_round_trip():
    est = DualBlindDeconvolution(n_targets=3, rho=2.0)
    params = est.get_params()
    assert params["n_targets"] == 3 and params["rho"] == 2.0
    assert clone(est).get_params() == params
    assert est.set_params(n_paths=4).n_paths == 4


def test_fit_predict(scene):
    est = DualBlindDeconvolution(2, 2).fit(scene.measurements(), scene.basis_r, scene.basis_c)
    assert est.report_.converged
    np.testing.assert_allclose(est.radar_.delays, np.sort(scene.radar.delays), atol=2 / 4096)
    np.testing.assert_allclose(est.comms_.delays, np.sort(scene.comms.delays), atol=2 / 4096)
    assert est.score(scene.measurements()) > 0.99
    assert set(est.spectra_) == {"radar", "comms"}


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DualBlindDeconvolution().predict()


def test_zero_order_block(scene):
    y = scene.measurements()
    est = DualBlindDeconvolution(2, 0).fit(y, scene.basis_r, scene.basis_c)
    assert len(est.comms_) == 0 and "comms" not in est.spectra_


def test_bad_method(scene):
    with pytest.raises(ValueError):
        DualBlindDeconvolution(method="sdp").fit(scene.measurements(), scene.basis_r, scene.basis_c)


def test_lifted_method_runs(scene):
    est = DualBlindDeconvolution(2, 2, method="lifted", max_iters=50)
    est.fit(scene.measurements(), scene.basis_r, scene.basis_c)
    assert est.report_.iterations <= 50


def test_custom_split(scene):
    est = DualBlindDeconvolution(2, 2, n1=30).fit(scene.measurements(), scene.basis_r, scene.basis_c)
    assert (est.shape_.n1, est.shape_.n2) == (30, 46)
