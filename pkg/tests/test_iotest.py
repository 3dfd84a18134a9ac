import numpy as np
import pytest

from simlearn import (
    DimensionError,
    LtvModel,
    PrincipleViolationError,
    ProtocolError,
    as_plant,
    build_lifted,
    design_test_inputs,
    membership,
    oracle_behavior,
    random_test_inputs,
    run_tests,
    verify_principles,
)
from simlearn.reporting import load_dataset, save_dataset


def test_design_is_zero_then_identity():
    U = design_test_inputs(1, 35)
    assert U.shape == (35, 36)
    assert np.array_equal(U[:, 0], np.zeros(35))
    assert np.array_equal(U[:, 1:], np.eye(35))


def test_design_mimo_shape():
    U = design_test_inputs(2, 2)
    assert U.shape == (4, 5)
    assert np.array_equal(U, np.hstack([np.zeros((4, 1)), np.eye(4)]))


def test_design_always_passes_verification():
    for n_u, T in [(1, 1), (1, 35), (2, 2), (3, 7)]:
        assert verify_principles(design_test_inputs(n_u, T)).passed


def test_random_design_passes_verification():
    U = random_test_inputs(2, 5, np.random.default_rng(0))
    check = verify_principles(U)
    assert check.passed
    assert np.array_equal(U[:, 0], np.zeros(10))


def test_verify_rejects_nonzero_initial_column():
    U = design_test_inputs(1, 4)
    U[0, 0] = 1e-3
    check = verify_principles(U)
    assert not check.passed
    assert "principle-1" in check.message


def test_verify_rejects_rank_deficiency():
    U = design_test_inputs(1, 4)
    U[:, 2] = U[:, 1]  # repeated column
    check = verify_principles(U)
    assert not check.passed
    assert check.sigma_min <= check.tolerance
    assert check.rank < 4


def test_verify_reports_diagnostics():
    check = verify_principles(design_test_inputs(2, 3))
    assert check.rank == 6
    assert check.sigma_min == pytest.approx(1.0)
    assert check.sigma_max == pytest.approx(1.0)


def test_verify_shape_errors():
    with pytest.raises(DimensionError):
        verify_principles(np.zeros((4, 4)))
    with pytest.raises(DimensionError):
        verify_principles(np.array([]))


def test_run_tests_zero_state_returns_lifted_columns():
    m = LtvModel.constant([[0.5, 1.0], [0.0, 0.3]], [[1.0], [0.5]], [[1.0, 0.0]], [[0.0]],
                          [0.0, 0.0], 4)
    G, _ = build_lifted(m)
    data = run_tests(as_plant(m), design_test_inputs(1, 4), 1, 4)
    assert np.allclose(data.Y[:, 0], np.zeros(4))
    assert np.allclose(data.Y[:, 1:], G, atol=1e-12)


def test_run_tests_first_column_is_free_response(ex1_models, ex1_datasets):
    host = ex1_models["host"]
    _, L = build_lifted(host)
    data = ex1_datasets["host"]
    assert np.allclose(data.Y[:, 0], L @ host.x0, atol=1e-12)
    assert np.array_equal(data.trajectory_column(0)[:35], np.zeros(35))


def test_every_test_column_is_admissible(ex1_models, ex1_datasets):
    rep = oracle_behavior(ex1_models["guest"])
    data = ex1_datasets["guest"]
    for k in range(0, data.n_tests, 7):
        result = membership(rep, data.trajectory_column(k), tol=1e-9)
        assert result.is_member


def test_run_tests_deterministic(ex1_models):
    m = ex1_models["host"]
    U = design_test_inputs(1, 35)
    d1 = run_tests(as_plant(m), U, 1, 35)
    d2 = run_tests(as_plant(m), U, 1, 35)
    assert np.array_equal(d1.Y, d2.Y)


def test_run_tests_rejects_bad_inputs():
    m = LtvModel.constant([[0.5]], [[1.0]], [[1.0]], [[0.0]], [0.0], 3)
    U = design_test_inputs(1, 3)
    U[0, 0] = 1.0
    with pytest.raises(PrincipleViolationError):
        run_tests(as_plant(m), U, 1, 3)


def test_run_tests_protocol_errors():
    U = design_test_inputs(1, 3)
    with pytest.raises(ProtocolError):
        run_tests(lambda u: np.zeros(4), U, 1, 3)  # not a multiple of T

    calls = {"n": 0}

    def flaky(u):
        calls["n"] += 1
        return np.zeros(3 if calls["n"] == 1 else 6)

    with pytest.raises(ProtocolError):
        run_tests(flaky, U, 1, 3)


def test_dataset_csv_round_trip(tmp_path, ex1_datasets):
    data = ex1_datasets["host"]
    save_dataset(data, tmp_path / "U.csv", tmp_path / "Y.csv")
    back = load_dataset(tmp_path / "U.csv", tmp_path / "Y.csv")
    assert (back.n_u, back.n_y, back.T) == (data.n_u, data.n_y, data.T)
    assert np.array_equal(back.U, data.U)
    assert np.array_equal(back.Y, data.Y)
