"""Linear time-varying state-space models and their lifted (full-horizon) form.

This module is the ground-truth side of the package: it knows the model
matrices and the initial state, simulates responses, and builds the block
transfer matrices that map an input supervector and the initial state to the
output supervector.  Everything else in the package works from sampled data
only; the state dimension never leaves this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .behavior import BehaviorRep, orthonormal_columns
from .errors import DimensionError


@dataclass(frozen=True)
class LtvModel:
    """Discrete-time LTV quadruple over a finite horizon, plus the fixed
    initial state.

    The per-step matrices are stored as stacked arrays indexed by time:
    ``A[t]`` is (n_x, n_x), ``B[t]`` is (n_x, n_u), ``C[t]`` is (n_y, n_x)
    and ``D[t]`` is (n_y, n_u), for t = 0 .. T-1.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    x0: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C", "D", "x0"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        for name in ("A", "B", "C", "D"):
            if getattr(self, name).ndim != 3:
                raise DimensionError(f"{name} must be a stack of per-step matrices (T, rows, cols)")
        if self.A.shape[1] != self.A.shape[2]:
            raise DimensionError(f"A must be (T, n_x, n_x), got {self.A.shape}")
        T, n_x = self.A.shape[0], self.A.shape[1]
        if T < 1:
            raise DimensionError("horizon must contain at least one step")
        if self.B.shape[:2] != (T, n_x):
            raise DimensionError(f"B shape {self.B.shape} inconsistent with A {self.A.shape}")
        if self.C.shape[0] != T or self.C.shape[2] != n_x:
            raise DimensionError(f"C shape {self.C.shape} inconsistent with A {self.A.shape}")
        if self.D.shape != (T, self.n_y, self.n_u):
            raise DimensionError(f"D shape {self.D.shape} inconsistent with B and C")
        if self.x0.shape != (n_x,):
            raise DimensionError(f"x0 length {self.x0.shape} does not match n_x={n_x}")

    @property
    def T(self) -> int:
        return self.A.shape[0]

    @property
    def n_x(self) -> int:
        return self.A.shape[1]

    @property
    def n_u(self) -> int:
        return self.B.shape[2]

    @property
    def n_y(self) -> int:
        return self.C.shape[1]

    @classmethod
    def constant(cls, A, B, C, D, x0, T: int) -> "LtvModel":
        """Wrap a time-invariant quadruple by replicating it over T steps."""
        A, B, C, D = (np.atleast_2d(np.asarray(M, dtype=float)) for M in (A, B, C, D))
        return cls(
            A=np.tile(A, (T, 1, 1)),
            B=np.tile(B, (T, 1, 1)),
            C=np.tile(C, (T, 1, 1)),
            D=np.tile(D, (T, 1, 1)),
            x0=np.asarray(x0, dtype=float),
        )


@dataclass(frozen=True)
class Trajectory:
    """Input/output pair over the whole horizon, stacked time-major.

    ``u`` has length n_u*T with layout [u(0); u(1); ...; u(T-1)], and ``y``
    likewise with n_y*T entries.  The combined vector ``w`` stacks the full
    input supervector over the full output supervector.
    """

    u: np.ndarray
    y: np.ndarray
    n_u: int
    n_y: int

    def __post_init__(self):
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float).ravel())
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float).ravel())
        if self.u.size % self.n_u != 0:
            raise DimensionError(f"input length {self.u.size} not divisible by n_u={self.n_u}")
        if self.y.size % self.n_y != 0:
            raise DimensionError(f"output length {self.y.size} not divisible by n_y={self.n_y}")
        if self.u.size // self.n_u != self.y.size // self.n_y:
            raise DimensionError("input and output cover different horizons")

    @property
    def T(self) -> int:
        return self.u.size // self.n_u

    @property
    def w(self) -> np.ndarray:
        return np.concatenate([self.u, self.y])


def simulate(model: LtvModel, u: np.ndarray) -> Trajectory:
    """Run the recursion x(t+1) = A(t)x(t) + B(t)u(t), y(t) = C(t)x(t) + D(t)u(t)
    from the model's initial state and return the resulting trajectory.

    Args:
        model: the system to simulate.
        u: input supervector of length n_u*T, time-major.

    Raises:
        DimensionError: if ``u`` has the wrong length.
    """
    u = np.asarray(u, dtype=float).ravel()
    if u.size != model.n_u * model.T:
        raise DimensionError(
            f"input supervector has length {u.size}, expected {model.n_u * model.T}"
        )
    uu = u.reshape(model.T, model.n_u)
    x = model.x0.copy()
    y = np.empty((model.T, model.n_y))
    for t in range(model.T):
        y[t] = model.C[t] @ x + model.D[t] @ uu[t]
        x = model.A[t] @ x + model.B[t] @ uu[t]
    return Trajectory(u=u, y=y.ravel(), n_u=model.n_u, n_y=model.n_y)


def build_lifted(model: LtvModel) -> tuple[np.ndarray, np.ndarray]:
    """Assemble the full-horizon transfer matrices (G, L) with
    y_supervector = G @ u_supervector + L @ x0.

    G is block lower triangular: block (t, s) is D(t) on the diagonal and
    C(t) A(t-1) ... A(s+1) B(s) below it.  L stacks the block rows
    C(t) A(t-1) ... A(0).
    """
    T, n_u, n_y, n_x = model.T, model.n_u, model.n_y, model.n_x
    G = np.zeros((n_y * T, n_u * T))
    L = np.zeros((n_y * T, n_x))
    for s in range(T):
        G[n_y * s:n_y * (s + 1), n_u * s:n_u * (s + 1)] = model.D[s]
        impulse = model.B[s]
        for t in range(s + 1, T):
            G[n_y * t:n_y * (t + 1), n_u * s:n_u * (s + 1)] = model.C[t] @ impulse
            impulse = model.A[t] @ impulse
    transition = np.eye(n_x)
    for t in range(T):
        L[n_y * t:n_y * (t + 1)] = model.C[t] @ transition
        transition = model.A[t] @ transition
    return G, L


def oracle_behavior(model: LtvModel) -> BehaviorRep:
    """Exact affine representation of the model's admissible behavior.

    The subspace component is spanned by the stacked impulse trajectories
    [e_k; G e_k] and the offset is the zero-input trajectory [0; L x0].  This
    mirrors what the data pipeline reconstructs from sampled tests and is
    intended as a verification reference.
    """
    G, L = build_lifted(model)
    n_uT = G.shape[1]
    W = np.vstack([np.eye(n_uT), G])
    w0 = np.concatenate([np.zeros(n_uT), L @ model.x0])
    return BehaviorRep(
        W=W,
        w0=w0,
        H=orthonormal_columns(W),
        n_u=model.n_u,
        n_y=model.n_y,
        T=model.T,
    )


def as_plant(model: LtvModel) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap a model as the one-method plant interface used by the I/O tests:
    apply an input supervector, receive the output supervector.

    The returned callable restarts from the model's initial state on every
    call, which is exactly the repeatable-test assumption of the offline
    protocol.
    """

    def apply(u: np.ndarray) -> np.ndarray:
        return simulate(model, u).y

    return apply
