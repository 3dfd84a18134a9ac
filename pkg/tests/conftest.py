import numpy as np
import pytest

from simlearn import (
    as_plant,
    build_representation,
    design_test_inputs,
    oracle_behavior,
    run_tests,
)
from simlearn.config import builtin_config


@pytest.fixture(scope="session")
def ex1_cfg():
    return builtin_config("example1")


@pytest.fixture(scope="session")
def ex2_cfg():
    return builtin_config("example2")


@pytest.fixture(scope="session")
def ex1_models(ex1_cfg):
    return {
        "host": ex1_cfg.host,
        "guest": ex1_cfg.guests[0],
        "dissimilar": ex1_cfg.guests[1],
    }


@pytest.fixture(scope="session")
def ex2_models(ex2_cfg):
    return {"host": ex2_cfg.host, "guest": ex2_cfg.guests[0]}


@pytest.fixture(scope="session")
def ex1_oracle_reps(ex1_models):
    return {name: oracle_behavior(m) for name, m in ex1_models.items()}


@pytest.fixture(scope="session")
def ex2_oracle_reps(ex2_models):
    return {name: oracle_behavior(m) for name, m in ex2_models.items()}


def capture(model):
    U = design_test_inputs(model.n_u, model.T)
    return run_tests(as_plant(model), U, model.n_u, model.T)


@pytest.fixture(scope="session")
def ex1_datasets(ex1_models):
    return {name: capture(m) for name, m in ex1_models.items()}


@pytest.fixture(scope="session")
def ex2_datasets(ex2_models):
    return {name: capture(m) for name, m in ex2_models.items()}


@pytest.fixture(scope="session")
def ex1_data_reps(ex1_datasets):
    return {name: build_representation(d) for name, d in ex1_datasets.items()}


@pytest.fixture(scope="session")
def ex2_data_reps(ex2_datasets):
    return {name: build_representation(d) for name, d in ex2_datasets.items()}


@pytest.fixture(scope="session")
def ex1_reference(ex1_cfg):
    return ex1_cfg.reference()


@pytest.fixture(scope="session")
def ex2_reference(ex2_cfg):
    return ex2_cfg.reference()


def random_model(rng, T=None, n_x=None, n_u=None, n_y=None):
    """Small random LTV model with moderate spectral radius."""
    from simlearn import LtvModel

    T = T or int(rng.integers(1, 7))
    n_x = n_x or int(rng.integers(1, 5))
    n_u = n_u or int(rng.integers(1, 4))
    n_y = n_y or int(rng.integers(1, 4))
    return LtvModel(
        A=0.5 * rng.standard_normal((T, n_x, n_x)),
        B=rng.standard_normal((T, n_x, n_u)),
        C=rng.standard_normal((T, n_y, n_x)),
        D=rng.standard_normal((T, n_y, n_u)),
        x0=rng.standard_normal(n_x),
    )


def random_orthonormal(rng, n, m):
    Q, _ = np.linalg.qr(rng.standard_normal((n, m)))
    return Q


def synthetic_rep(H, w0, n_u=None, n_y=None, T=1):
    """Behavior representation built directly from a basis and offset.

    Used for geometric unit tests; W is taken equal to H, which is a valid
    difference matrix spanning the same subspace.
    """
    from simlearn import BehaviorRep

    H = np.asarray(H, dtype=float)
    n_wT, m = H.shape
    if n_u is None:
        n_u = m // T
        n_y = n_wT // T - n_u
    return BehaviorRep(W=H.copy(), w0=np.asarray(w0, dtype=float), H=H, n_u=n_u, n_y=n_y, T=T)
