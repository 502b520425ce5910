import numpy as np
import pytest

from dualblind import (
    ExperimentConfig,
    HankelShape,
    MeasurementOperator,
    nuclear_norm,
    random_scene,
    solve_baseline,
    solve_dbd,
)
from dualblind.bench import lifted_error


def _scene(k, q, seed, n=31):
    cfg = ExperimentConfig(n_samples=n, targets=k, paths=q, separation_floor=0.1)
    return random_scene(cfg, seed)


def _run(scene, solver):
    op = MeasurementOperator(scene.basis_r, scene.basis_c)
    if solver is solve_dbd:
        x, rep = solve_dbd(scene.measurements(), op, HankelShape.square(scene.n_samples, 2))
    else:
        x, rep = solve_baseline(scene.measurements(), op)
    return lifted_error(scene.lifted(), x), x, rep


def test_zero_data():
    scene = _scene(1, 1, 0)
    x, rep = solve_baseline(np.zeros(31), MeasurementOperator(scene.basis_r, scene.basis_c))
    assert x.norm() == 0 and rep.converged and rep.nuclear_norm == 0


def test_report_objective_and_feasibility():
    scene = _scene(1, 1, 0)
    _, x, rep = _run(scene, solve_baseline)
    assert rep.nuclear_norm == pytest.approx(nuclear_norm(x.radar) + nuclear_norm(x.comms), rel=1e-12)
    assert rep.feasibility <= 1e-8


def test_baseline_objective_not_above_truth():
    scene = _scene(1, 1, 0)
    _, _, rep = _run(scene, solve_baseline)
    truth = scene.lifted()
    t = nuclear_norm(truth.radar) + nuclear_norm(truth.comms)
    assert rep.nuclear_norm <= t + 1e-6 * (1 + t)


@pytest.mark.xfail(strict=True, reason="the unstructured program has 2 N_rc N unknowns against N "
                                       "measurements and a lower-norm feasible point than the truth")
def test_baseline_recovers_rank_one_scene():
    err, _, _ = _run(_scene(1, 1, 0), solve_baseline)
    assert err <= 1e-2


def test_baseline_fails_on_richer_scene():
    err, _, _ = _run(_scene(3, 3, 0), solve_baseline)
    assert err > 1e-1


@pytest.mark.xfail(strict=True, reason="K + Q = 6 at N = 31 lies beyond the Hankel program's "
                                       "recovery region for random unit-modulus bases")
@pytest.mark.slow
def test_hankel_recovers_richer_scene():
    err, _, _ = _run(_scene(3, 3, 0), solve_dbd)
    assert err <= 1e-3


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_paired_ordering(seed):
    scene = _scene(1, 1, seed)
    err_dbd, _, _ = _run(scene, solve_dbd)
    err_base, _, _ = _run(scene, solve_baseline)
    assert err_dbd <= 1e-3 < 1e-1 < err_base


def test_dominance_over_trials():
    both, base_wins, dbd_wins = 0, 0, 0
    for seed in range(8):
        scene = _scene(1, 1, seed)
        d_ok = _run(scene, solve_dbd)[0] <= 1e-3
        b_ok = _run(scene, solve_baseline)[0] <= 1e-3
        base_wins += b_ok
        dbd_wins += d_ok
        both += b_ok and d_ok
    assert base_wins == 0 or both / base_wins >= 0.9
    assert dbd_wins >= base_wins
