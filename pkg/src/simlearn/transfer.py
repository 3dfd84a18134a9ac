"""Similarity-based trajectory transfer.

Once a guest system has learned a successful trajectory, the best the host
can do with it is the orthogonal projection of that trajectory onto the
host's own admissible behavior.  With principal vectors and similarity
indexes in hand this projection has a closed form, so the host needs no
trial-and-error of its own: the whole pipeline runs offline from the two test
datasets plus the guest's learned trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .behavior import BehaviorRep, build_representation, membership
from .errors import DimensionError, InvalidExperienceError, NotSimilarError
from .iotest import Plant, design_test_inputs, run_tests
from .similarity import SimilarityReport, similarity_indexes


def project_subspace(H: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Orthogonal projection of x onto span(H), with H orthonormal: H (H' x)."""
    H = np.asarray(H, dtype=float)
    x = np.asarray(x, dtype=float)
    if H.shape[0] != x.shape[0]:
        raise DimensionError(f"cannot project length-{x.shape[0]} vector onto {H.shape[0]}-dim space")
    return H @ (H.T @ x)


def project_behavior(rep: BehaviorRep, x: np.ndarray) -> np.ndarray:
    """Closest member of the affine behavior to x: w0 plus the subspace
    projection of x - w0."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != rep.w0.size:
        raise DimensionError(f"trajectory has length {x.size}, expected {rep.w0.size}")
    return rep.w0 + project_subspace(rep.H, x - rep.w0)


@dataclass(frozen=True)
class TransferResult:
    """Outcome of transferring a guest trajectory to the host.

    ``w_h`` is the host-admissible trajectory closest to the guest experience
    ``w_g``; ``g_bar`` are its coordinates in the guest principal basis, and
    ``transfer_error`` is ||w_h - w_g||.
    """

    w_h: np.ndarray
    g_bar: np.ndarray
    transfer_error: float
    report: SimilarityReport

    def split(self, n_u: int, T: int) -> tuple[np.ndarray, np.ndarray]:
        """Split w_h into its input and output supervectors."""
        return self.w_h[: n_u * T], self.w_h[n_u * T:]


def transfer(
    rep_host: BehaviorRep,
    rep_guest: BehaviorRep,
    report: SimilarityReport,
    w_g: np.ndarray,
    membership_tol: float = 1e-6,
) -> TransferResult:
    """Map the guest's learned trajectory onto the host behavior.

    The guest trajectory is expanded in the guest principal basis,
    g_bar = (H2 V)' (w_g - w2_0), scaled by the similarity indexes, and
    reassembled in the host principal basis together with the projected
    offset mismatch:

        w_h = (H1 U) diag(s) g_bar + P_span(H1)(w2_0 - w1_0) + w1_0

    which equals the orthogonal projection of w_g onto the host behavior.

    Raises:
        NotSimilarError: if the report does not certify similarity, or if the
            produced trajectory unexpectedly fails host membership (a stale or
            mismatched report).
        InvalidExperienceError: if w_g is not a member of the guest behavior.
    """
    if not report.similar:
        raise NotSimilarError("transfer requires a report certifying similarity")
    w_g = np.asarray(w_g, dtype=float).ravel()
    experience = membership(rep_guest, w_g, membership_tol)
    if not experience.is_member:
        raise InvalidExperienceError(
            f"guest trajectory is not in the guest behavior "
            f"(residual {experience.residual:.3e})"
        )

    g_bar = report.P2.T @ (w_g - rep_guest.w0)
    w_h = (
        report.P1 @ (report.indexes * g_bar)
        + project_subspace(rep_host.H, rep_guest.w0 - rep_host.w0)
        + rep_host.w0
    )

    # A wrong (host, guest, report) combination shows up as w_h leaving the
    # host behavior, so verify before handing the trajectory out.
    own = membership(rep_host, w_h, 1e-8)
    if not own.is_member:
        raise NotSimilarError(
            f"transfer output failed host membership (residual {own.residual:.3e}); "
            "the similarity report does not match the supplied behaviors"
        )
    return TransferResult(
        w_h=w_h,
        g_bar=g_bar,
        transfer_error=float(np.linalg.norm(w_h - w_g)),
        report=report,
    )


@dataclass(frozen=True)
class PipelineOutcome:
    """Result of the end-to-end learning-transfer procedure.

    ``similar`` is the gate decision; when it is False the pipeline stopped
    after the similarity check and ``result`` is None.
    """

    similar: bool
    report: SimilarityReport
    result: TransferResult | None
    rep_host: BehaviorRep
    rep_guest: BehaviorRep


def transfer_pipeline(
    plant_host: Plant,
    plant_guest: Plant,
    w_g: np.ndarray,
    n_u: int,
    T: int,
    rank_tol: float | None = None,
    similarity_tol: float = 1e-8,
    membership_tol: float = 1e-6,
) -> PipelineOutcome:
    """Run the whole procedure against two plants: design and apply the test
    inputs, reconstruct both behaviors, gate on similarity, and transfer the
    guest trajectory.

    A dissimilar pair is a regular outcome (``similar=False``), not an
    exception, so callers can report it gracefully.
    """
    U_test = design_test_inputs(n_u, T)
    rep_host = build_representation(run_tests(plant_host, U_test, n_u, T, rank_tol), rank_tol)
    rep_guest = build_representation(run_tests(plant_guest, U_test, n_u, T, rank_tol), rank_tol)
    report = similarity_indexes(rep_host, rep_guest, similarity_tol, allow_dissimilar=True)
    if not report.similar:
        return PipelineOutcome(False, report, None, rep_host, rep_guest)
    result = transfer(rep_host, rep_guest, report, w_g, membership_tol)
    return PipelineOutcome(True, report, result, rep_host, rep_guest)
