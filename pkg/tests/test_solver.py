import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualblind import (
    DelayChannel,
    DomainError,
    ExperimentConfig,
    HankelShape,
    MeasurementOperator,
    ShapeError,
    SolverParams,
    concat_lift,
    nuclear_norm,
    random_scene,
    solve_dbd,
    svt,
)
from dualblind.bench import lifted_error

from conftest import crandn


def _solve(scene, params=None):
    shape = HankelShape.square(scene.n_samples, scene.basis_r.shape[1])
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    x, rep = solve_dbd(scene.measurements(), op, shape, params)
    return x, rep, shape


def test_nuclear_norm_basics(rng):
    assert nuclear_norm(np.zeros((4, 3))) == 0.0
    u, v = crandn(rng, 5), crandn(rng, 4)
    assert nuclear_norm(np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))) == pytest.approx(1.0)


def test_nuclear_norm_gram_oracle(rng):
    m = crandn(rng, 5, 5)
    eig = np.linalg.eigvalsh(m.conj().T @ m)
    assert nuclear_norm(m) == pytest.approx(np.sqrt(np.clip(eig, 0, None)).sum(), rel=1e-12)


def test_svt_full_shrinkage(rng):
    m = crandn(rng, 4, 6)
    np.testing.assert_array_equal(svt(m, np.linalg.norm(m, 2) * 1.01), np.zeros((4, 6)))


def test_svt_small_threshold_identity(rng):
    m = crandn(rng, 4, 6)
    np.testing.assert_allclose(svt(m, 1e-14), m, atol=1e-12)


def test_svt_rank_one_closed_form(rng):
    u, v = crandn(rng, 5), crandn(rng, 3)
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    np.testing.assert_allclose(svt(7.0 * np.outer(u, v.conj()), 2.5), 4.5 * np.outer(u, v.conj()), atol=1e-12)


def test_svt_rejects_bad_threshold(rng):
    with pytest.raises(DomainError):
        svt(crandn(rng, 2, 2), 0.0)


@given(st.integers(0, 10_000), st.floats(0.01, 5.0))
def test_svt_nonexpansive(seed, t):
    rng = np.random.default_rng(seed)
    a, b = crandn(rng, 6, 4), crandn(rng, 6, 4)
    assert np.linalg.norm(svt(a, t) - svt(b, t)) <= np.linalg.norm(a - b) * (1 + 1e-12)


def test_params_validation():
    with pytest.raises(DomainError):
        SolverParams(rho=0)
    with pytest.raises(DomainError):
        SolverParams(tol_primal=-1)
    with pytest.raises(DomainError):
        SolverParams(max_iters=0)


def test_zero_data():
    scene = random_scene(ExperimentConfig(n_samples=15), 0)
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    x, rep = solve_dbd(np.zeros(15), op, HankelShape.square(15, 2))
    assert x.norm() == 0 and rep.nuclear_norm == 0 and rep.converged


def test_shape_mismatch():
    scene = random_scene(ExperimentConfig(n_samples=15), 0)
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    with pytest.raises(ShapeError):
        solve_dbd(scene.measurements(), op, HankelShape.square(16, 2))
    with pytest.raises(ShapeError):
        solve_dbd(scene.measurements(), op, HankelShape.square(15, 3))


def test_small_well_separated_scene():
    cfg = ExperimentConfig(n_samples=15, targets=1, paths=1, subspace_dim=1, separation_floor=0.3)
    scene = random_scene(cfg, 0)
    x, rep, _ = _solve(scene)
    assert rep.converged
    assert lifted_error(scene.lifted(), x) <= 1e-3


def test_small_scene_failure_is_not_a_solver_defect():
    # at N = 15 some scenes admit a feasible point of lower nuclear norm than
    # the truth, so the program itself does not recover them
    cfg = ExperimentConfig(n_samples=15, targets=1, paths=1, subspace_dim=1, separation_floor=0.3)
    scene = random_scene(cfg, 1)
    x, rep, shape = _solve(scene)
    assert rep.converged and rep.feasibility <= 1e-8
    assert lifted_error(scene.lifted(), x) > 1e-1
    assert rep.nuclear_norm < nuclear_norm(concat_lift(scene.lifted(), shape))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_reference_configuration(seed):
    scene = random_scene(ExperimentConfig(), seed)
    x, rep, shape = _solve(scene)
    assert rep.converged and rep.feasibility <= 1e-8
    assert lifted_error(scene.lifted(), x) <= 1e-3
    truth = nuclear_norm(concat_lift(scene.lifted(), shape))
    assert rep.nuclear_norm <= truth + 1e-6 * (1 + truth)


def test_iteration_cap_reports_not_converged():
    scene = random_scene(ExperimentConfig(), 0)
    x, rep, _ = _solve(scene, SolverParams(max_iters=3))
    assert rep.iterations == 3 and not rep.converged
    # the X-step keeps the equality constraint even without convergence
    assert rep.feasibility <= 1e-8


def test_homogeneous_in_data():
    scene = random_scene(ExperimentConfig(n_samples=31, targets=1, paths=1), 4)
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    shape = HankelShape.square(31, 2)
    y = scene.measurements()
    x1, _ = solve_dbd(y, op, shape)
    x2, _ = solve_dbd(1e3 * y, op, shape)
    assert (x2 * 1e-3 - x1).norm() <= 1e-10 * x1.norm()


def _clustered(seed, gap, n=55):
    cfg = ExperimentConfig(n_samples=n, separation_floor=None)
    scene = random_scene(cfg, seed)
    t0, c0 = scene.radar.delays[0], scene.comms.delays[0]
    return scene._replace(
        radar=DelayChannel(np.array([t0, (t0 + gap) % 1]), scene.radar.amplitudes),
        comms=DelayChannel(np.array([c0, (c0 + gap) % 1]), scene.comms.amplitudes),
    )


def _median_error(gap, seeds=range(3)):
    params = SolverParams(max_iters=2000)
    errs = []
    for s in seeds:
        scene = _clustered(s, gap)
        x, _, _ = _solve(scene, params)
        errs.append(lifted_error(scene.lifted(), x))
    return float(np.median(errs))


@pytest.mark.slow
def test_error_grows_as_separation_shrinks():
    errors = [_median_error(gap) for gap in (0.25, 0.01, 0.001)]
    assert errors[0] <= 1e-6
    assert errors[0] <= errors[1] <= errors[2]
    assert errors[2] >= 100 * errors[0]


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="noiseless recovery stays below the 1e-3 failure rule "
                                       "even for delays 0.001 apart; only its accuracy degrades")
def test_clustered_delays_fail():
    assert _median_error(0.001) >= 1e-3
