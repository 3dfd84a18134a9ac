"""Offline input/output test design, verification and capture.

A test campaign applies n_u*T + 1 input supervectors to a plant that restarts
from the same (unknown) initial state before every run: one all-zero input to
expose the free response, then n_u*T inputs whose stacked matrix has full
rank.  The captured column pairs are the raw material for the data-based
behavior representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionError, PrincipleViolationError, ProtocolError

Plant = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TestDataset:
    """Captured test data: column k of U/Y is the k-th applied input
    supervector and the measured response."""

    __test__ = False  # "Test" prefix is domain vocabulary, not a pytest case

    U: np.ndarray
    Y: np.ndarray
    n_u: int
    n_y: int
    T: int

    def __post_init__(self):
        object.__setattr__(self, "U", np.asarray(self.U, dtype=float))
        object.__setattr__(self, "Y", np.asarray(self.Y, dtype=float))
        if self.U.shape != (self.n_u * self.T, self.n_u * self.T + 1):
            raise DimensionError(
                f"U has shape {self.U.shape}, expected "
                f"({self.n_u * self.T}, {self.n_u * self.T + 1})"
            )
        if self.Y.shape != (self.n_y * self.T, self.U.shape[1]):
            raise DimensionError(
                f"Y has shape {self.Y.shape}, expected ({self.n_y * self.T}, {self.U.shape[1]})"
            )

    @property
    def n_tests(self) -> int:
        return self.U.shape[1]

    def trajectory_column(self, k: int) -> np.ndarray:
        """Stacked trajectory vector col(u_k, y_k) of the k-th test."""
        return np.concatenate([self.U[:, k], self.Y[:, k]])


@dataclass(frozen=True)
class PrincipleCheck:
    """Outcome of verifying a test-input matrix, with rank diagnostics."""

    passed: bool
    zero_initial_input: bool
    rank: int
    sigma_min: float
    sigma_max: float
    tolerance: float
    message: str


def design_test_inputs(n_u: int, T: int) -> np.ndarray:
    """Canonical test-input matrix [0 | I]: a zero first column followed by
    the identity, i.e. one impulse per input channel per time step."""
    if n_u < 1 or T < 1:
        raise DimensionError("n_u and T must be positive")
    m = n_u * T
    return np.hstack([np.zeros((m, 1)), np.eye(m)])


def random_test_inputs(n_u: int, T: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Random full-rank alternative to the identity design (useful to check
    that downstream results do not depend on the particular excitation)."""
    if n_u < 1 or T < 1:
        raise DimensionError("n_u and T must be positive")
    rng = np.random.default_rng() if rng is None else rng
    m = n_u * T
    while True:
        X = rng.standard_normal((m, m))
        if np.linalg.matrix_rank(X) == m:  # all but certain on first draw
            return np.hstack([np.zeros((m, 1)), X])


def verify_principles(U_test: np.ndarray, rank_tol: float | None = None) -> PrincipleCheck:
    """Check the two excitation requirements on a test-input matrix.

    Requirement 1: the first column is exactly zero.  Requirement 2: the
    remaining n_u*T columns have full numerical rank, judged by the smallest
    singular value against ``rank_tol`` (default 1e-8 times the largest
    singular value).

    Raises:
        DimensionError: if the matrix is empty or its column count is not
            one more than its row count.
    """
    U_test = np.asarray(U_test, dtype=float)
    if U_test.ndim != 2 or U_test.size == 0:
        raise DimensionError("U_test must be a nonempty matrix")
    m, cols = U_test.shape
    if cols != m + 1:
        raise DimensionError(f"expected {m + 1} test columns for {m} input dofs, got {cols}")

    zero_first = not np.any(U_test[:, 0])
    svals = np.linalg.svd(U_test[:, 1:], compute_uv=False)
    sigma_max = float(svals[0])
    sigma_min = float(svals[-1])
    tol = 1e-8 * sigma_max if rank_tol is None else float(rank_tol)
    rank = int(np.count_nonzero(svals > tol))

    if not zero_first:
        message = "principle-1 violated: initial test input is not zero"
    elif sigma_min <= tol:
        message = (
            f"principle-2 violated: smallest singular value {sigma_min:.3e} "
            f"below tolerance {tol:.3e} (rank {rank} of {m})"
        )
    else:
        message = "test inputs satisfy both principles"
    return PrincipleCheck(
        passed=zero_first and sigma_min > tol,
        zero_initial_input=zero_first,
        rank=rank,
        sigma_min=sigma_min,
        sigma_max=sigma_max,
        tolerance=tol,
        message=message,
    )


def run_tests(
    plant: Plant,
    U_test: np.ndarray,
    n_u: int,
    T: int,
    rank_tol: float | None = None,
) -> TestDataset:
    """Apply every test column to the plant and capture the responses.

    The plant is a callable mapping an input supervector to an output
    supervector and is assumed to restart from the same initial state on
    every call.

    Raises:
        PrincipleViolationError: if ``U_test`` fails :func:`verify_principles`.
        ProtocolError: if a response length is inconsistent with the horizon.
    """
    U_test = np.asarray(U_test, dtype=float)
    if U_test.shape[0] != n_u * T:
        raise DimensionError(
            f"U_test has {U_test.shape[0]} rows, expected n_u*T = {n_u * T}"
        )
    check = verify_principles(U_test, rank_tol)
    if not check.passed:
        raise PrincipleViolationError(check.message)

    responses = []
    n_y = None
    for k in range(U_test.shape[1]):
        y = np.asarray(plant(U_test[:, k]), dtype=float).ravel()
        if n_y is None:
            if y.size == 0 or y.size % T != 0:
                raise ProtocolError(
                    f"plant response length {y.size} is not a multiple of the horizon {T}"
                )
            n_y = y.size // T
        elif y.size != n_y * T:
            raise ProtocolError(
                f"test {k}: response length {y.size} differs from earlier tests ({n_y * T})"
            )
        responses.append(y)
    return TestDataset(U=U_test.copy(), Y=np.column_stack(responses), n_u=n_u, n_y=n_y, T=T)
