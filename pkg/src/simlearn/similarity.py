"""Similarity between two admissible behaviors.

Two behaviors are similar when they share at least one trajectory, which
reduces to solvability of a linear equation in the two subspace bases and the
offset difference.  The quantitative side is the vector of principal-angle
cosines between the two subspace components, obtained from the singular value
decomposition of H1' H2; the associated principal directions are H1 U and
H2 V.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .behavior import BehaviorRep
from .errors import DimensionError, NotSimilarError

#: Singular values below this are treated as exact zeros (a shared degenerate
#: direction) rather than rejected.
DEGENERATE_INDEX_FLOOR = 1e-12


class SimilarityCheck(NamedTuple):
    similar: bool
    l1: np.ndarray
    l2: np.ndarray
    residual: float
    common_point: np.ndarray | None


@dataclass(frozen=True)
class SimilarityReport:
    """Full similarity assessment of a (host, guest) pair.

    ``indexes`` holds the principal-angle cosines sorted nonincreasing; P1 and
    P2 are the principal-vector matrices H1 U and H2 V whose paired columns
    realize those cosines.  ``common_point`` is a trajectory in the
    intersection when the pair is similar.
    """

    similar: bool
    residual: float
    l1: np.ndarray
    l2: np.ndarray
    indexes: np.ndarray
    Umat: np.ndarray
    Vmat: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    common_point: np.ndarray | None
    degenerate: bool

    @property
    def distance_to_identity(self) -> float:
        """Norm distance between the index vector and the all-ones vector."""
        return float(np.linalg.norm(1.0 - self.indexes))


def _require_matching_dims(rep1: BehaviorRep, rep2: BehaviorRep) -> None:
    if (rep1.n_u, rep1.n_y, rep1.T) != (rep2.n_u, rep2.n_y, rep2.T):
        raise DimensionError(
            f"behaviors have incompatible dimensions "
            f"({rep1.n_u}, {rep1.n_y}, {rep1.T}) vs ({rep2.n_u}, {rep2.n_y}, {rep2.T})"
        )


def check_similarity(rep1: BehaviorRep, rep2: BehaviorRep, tol: float = 1e-8) -> SimilarityCheck:
    """Decide similarity by solving [H1 H2] [l1; l2] = w2_0 - w1_0 in the
    least-squares sense.

    The pair is similar when the residual is at most ``tol * (1 + ||rhs||)``;
    in that case ``H1 l1 + w1_0`` is reported as a common trajectory.
    """
    _require_matching_dims(rep1, rep2)
    rhs = rep2.w0 - rep1.w0
    m = rep1.dim
    stacked = np.hstack([rep1.H, rep2.H])
    sol, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
    residual = float(np.linalg.norm(stacked @ sol - rhs))
    similar = residual <= tol * (1.0 + np.linalg.norm(rhs))
    l1, l2 = sol[:m], sol[m:]
    common = rep1.H @ l1 + rep1.w0 if similar else None
    return SimilarityCheck(similar, l1, l2, residual, common)


def similarity_indexes(
    rep1: BehaviorRep,
    rep2: BehaviorRep,
    tol: float = 1e-8,
    allow_dissimilar: bool = False,
) -> SimilarityReport:
    """Compute the similarity indexes and principal vectors of a pair.

    Runs :func:`check_similarity` first; index computation presumes a similar
    pair, so a negative check raises unless ``allow_dissimilar`` is set (the
    indexes are still well-defined numbers in that case, useful as a
    diagnostic, but carry no intersection guarantee).

    Raises:
        NotSimilarError: if the pair is not similar and no override was given.
    """
    check = check_similarity(rep1, rep2, tol)
    if not check.similar and not allow_dissimilar:
        raise NotSimilarError(
            f"behaviors are not similar (residual {check.residual:.3e} "
            f"exceeds tolerance); pass allow_dissimilar=True to compute "
            "indexes anyway"
        )
    Umat, svals, Vt = np.linalg.svd(rep1.H.T @ rep2.H)
    degenerate = bool(np.any(svals < DEGENERATE_INDEX_FLOOR))
    indexes = np.where(svals < DEGENERATE_INDEX_FLOOR, 0.0, svals)
    return SimilarityReport(
        similar=check.similar,
        residual=check.residual,
        l1=check.l1,
        l2=check.l2,
        indexes=indexes,
        Umat=Umat,
        Vmat=Vt.T,
        P1=rep1.H @ Umat,
        P2=rep2.H @ Vt.T,
        common_point=check.common_point,
        degenerate=degenerate,
    )


class GuestRanking(NamedTuple):
    """Guests ordered by ascending distance of their index vector from the
    all-ones vector; guests that failed the similarity check are listed
    separately and carry no rank."""

    order: list[int]
    distances: list[float]
    dissimilar: list[int]
    reports: dict[int, SimilarityReport]


def rank_guests(
    host: BehaviorRep,
    guests: list[BehaviorRep],
    tol: float = 1e-8,
) -> GuestRanking:
    """Rank candidate guests by how close their behavior is to the host's.

    Raises:
        DimensionError: if the guest list is empty.
    """
    if not guests:
        raise DimensionError("guest list is empty")
    reports: dict[int, SimilarityReport] = {}
    scored: list[tuple[float, int]] = []
    dissimilar: list[int] = []
    for i, guest in enumerate(guests):
        report = similarity_indexes(host, guest, tol, allow_dissimilar=True)
        reports[i] = report
        if report.similar:
            scored.append((report.distance_to_identity, i))
        else:
            dissimilar.append(i)
    scored.sort(key=lambda pair: pair[0])  # stable: ties keep input order
    return GuestRanking(
        order=[i for _, i in scored],
        distances=[d for d, _ in scored],
        dissimilar=dissimilar,
        reports=reports,
    )
