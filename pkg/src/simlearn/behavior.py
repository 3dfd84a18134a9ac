"""Data-based reconstruction of the admissible behavior.

Given a captured test dataset, the set of all trajectories the plant can
produce from its fixed initial state is an affine set: subtracting the
zero-input trajectory from every other test column yields a difference matrix
whose span is the subspace component, and the zero-input trajectory itself is
the offset.  The subspace is carried around as an orthonormal basis so that
projections and angle computations are cheap and stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateBehaviorError, DimensionError, PrincipleViolationError
from .iotest import TestDataset, verify_principles


def orthonormal_columns(M: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(M) via a thin QR factorization.

    Householder QR is used instead of classical Gram-Schmidt; at the sizes
    reached here (hundreds of columns) single-pass Gram-Schmidt loses
    orthogonality.
    """
    Q, _ = np.linalg.qr(np.asarray(M, dtype=float))
    return Q


@dataclass(frozen=True)
class BehaviorRep:
    """Affine representation of an admissible behavior.

    ``W`` holds the trajectory differences (one column per non-zero test),
    ``w0`` is the zero-input trajectory, and ``H`` is an orthonormal basis of
    span(W).  Every member trajectory is w0 + W g for some coefficient
    vector g.
    """

    W: np.ndarray
    w0: np.ndarray
    H: np.ndarray
    n_u: int
    n_y: int
    T: int

    def __post_init__(self):
        object.__setattr__(self, "W", np.asarray(self.W, dtype=float))
        object.__setattr__(self, "w0", np.asarray(self.w0, dtype=float).ravel())
        object.__setattr__(self, "H", np.asarray(self.H, dtype=float))
        n_wT = (self.n_u + self.n_y) * self.T
        if self.W.shape != (n_wT, self.n_u * self.T):
            raise DimensionError(
                f"W has shape {self.W.shape}, expected ({n_wT}, {self.n_u * self.T})"
            )
        if self.w0.shape != (n_wT,):
            raise DimensionError(f"w0 has length {self.w0.size}, expected {n_wT}")
        if self.H.shape != self.W.shape:
            raise DimensionError(f"H has shape {self.H.shape}, expected {self.W.shape}")

    @property
    def n_w(self) -> int:
        return self.n_u + self.n_y

    @property
    def dim(self) -> int:
        """Dimension of the subspace component (= number of input dofs)."""
        return self.n_u * self.T


class MembershipResult(NamedTuple):
    is_member: bool
    residual: float
    g: np.ndarray


def build_representation(data: TestDataset, rank_tol: float | None = None) -> BehaviorRep:
    """Construct the affine representation (W, w0, H) from captured data.

    The offset is the zero-input test column; the difference columns are the
    remaining trajectories minus the offset; H orthonormalizes them.

    Raises:
        PrincipleViolationError: if the dataset's inputs fail verification.
        DegenerateBehaviorError: if the difference matrix loses rank, meaning
            the plant output contradicted the full-rank input design.
    """
    check = verify_principles(data.U, rank_tol)
    if not check.passed:
        raise PrincipleViolationError(check.message)

    w0 = data.trajectory_column(0)
    W = np.vstack([data.U[:, 1:], data.Y[:, 1:]]) - w0[:, None]

    svals = np.linalg.svd(W, compute_uv=False)
    tol = 1e-8 * svals[0] if rank_tol is None else float(rank_tol)
    if svals[-1] <= tol:
        raise DegenerateBehaviorError(
            f"trajectory differences are rank deficient "
            f"(sigma_min {svals[-1]:.3e} <= {tol:.3e}); "
            "the plant violated the full-input-rank premise"
        )
    return BehaviorRep(W=W, w0=w0, H=orthonormal_columns(W), n_u=data.n_u, n_y=data.n_y, T=data.T)


def membership(rep: BehaviorRep, w: np.ndarray, tol: float = 1e-8) -> MembershipResult:
    """Test whether a trajectory vector belongs to the behavior.

    Solves the least-squares problem W g = w - w0; the trajectory is a member
    when the residual is at most ``tol * (1 + ||w||)``.  The returned ``g``
    gives the affine combination of test trajectories that reproduces w.

    Raises:
        DimensionError: if ``w`` has the wrong length.
    """
    w = np.asarray(w, dtype=float).ravel()
    if w.size != rep.w0.size:
        raise DimensionError(f"trajectory has length {w.size}, expected {rep.w0.size}")
    g, *_ = np.linalg.lstsq(rep.W, w - rep.w0, rcond=None)
    residual = float(np.linalg.norm(rep.W @ g - (w - rep.w0)))
    return MembershipResult(residual <= tol * (1.0 + np.linalg.norm(w)), residual, g)


def decompose(rep: BehaviorRep) -> tuple[np.ndarray, np.ndarray]:
    """Return the subspace basis and the offset of the affine set."""
    return rep.H, rep.w0
