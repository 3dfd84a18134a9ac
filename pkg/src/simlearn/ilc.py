"""Trial-and-error baseline: iterative learning control on the lifted system.

This is the learner that produces the guest's "successful experience": it
repeatedly applies an input supervector to the plant, measures the tracking
error against a reference output, and corrects the input using only the
data-derived response matrix (no model knowledge).  Each correction is the
minimum-norm least-squares solution of the lifted response equation, so the
per-trial error map is an orthogonal projection and the error norm can never
increase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .behavior import BehaviorRep
from .errors import DimensionError, IlcDivergenceError
from .iotest import Plant

#: Trials without improvement tolerated before declaring a stall.
STALL_PATIENCE = 10


@dataclass(frozen=True)
class IlcRun:
    """Record of one learning run.

    ``u_final``/``y_final`` are the matched input/response pair of the last
    executed trial (``y_final`` is None when no trial ran).  ``error_history``
    holds the per-trial RMS tracking errors; ``iterations`` counts the trials.
    """

    u_final: np.ndarray
    y_final: np.ndarray | None
    error_history: np.ndarray
    iterations: int
    converged: bool
    stalled: bool = False

    @property
    def w(self) -> np.ndarray:
        """Stacked trajectory col(u_final, y_final) of the final trial."""
        if self.y_final is None:
            raise ValueError("run executed no trials; no trajectory available")
        return np.concatenate([self.u_final, self.y_final])


def response_matrix(rep: BehaviorRep) -> np.ndarray:
    """Zero-state input-to-output map extracted from the test data.

    The difference columns of the representation satisfy
    y-part = G_hat @ u-part, and the u-parts form an invertible matrix by the
    excitation design, so G_hat = Wy @ inv(Wu).  With identity test inputs Wu
    is the identity and the y-parts are G_hat directly.
    """
    m = rep.dim
    Wu = rep.W[:m]
    Wy = rep.W[m:]
    return np.linalg.solve(Wu.T, Wy.T).T


def ilc_track(
    plant: Plant,
    rep: BehaviorRep,
    y_d: np.ndarray,
    max_iters: int = 300,
    tol: float = 1e-3,
    on_stall: str = "raise",
) -> IlcRun:
    """Learn an input that tracks the reference output on the given plant.

    Per trial: apply the current input, measure e = y_d - y, record the RMS
    error ||e|| / sqrt(len(e)), stop if it is at most ``tol``, otherwise
    correct the input by the minimum-norm least-squares solution of
    G_hat du = e.  Starts from the zero input.

    A run whose error fails to decrease for ``STALL_PATIENCE`` consecutive
    trials has hit a floor the correction cannot fix (reference unreachable,
    or the response matrix does not match the plant).  With
    ``on_stall="raise"`` this raises :class:`IlcDivergenceError` carrying the
    partial run; with ``on_stall="stop"`` the run is returned with
    ``stalled=True``.

    Raises:
        DimensionError: if the reference length does not match the behavior.
        IlcDivergenceError: on a stall under the default policy.
    """
    if on_stall not in ("raise", "stop"):
        raise ValueError(f"on_stall must be 'raise' or 'stop', got {on_stall!r}")
    y_d = np.asarray(y_d, dtype=float).ravel()
    if y_d.size != rep.n_y * rep.T:
        raise DimensionError(f"reference has length {y_d.size}, expected {rep.n_y * rep.T}")

    G_hat = response_matrix(rep)
    Usv, svals, Vt = np.linalg.svd(G_hat, full_matrices=False)
    keep = svals > max(G_hat.shape) * np.finfo(float).eps * (svals[0] if svals.size else 0.0)
    Uk, sk, Vk = Usv[:, keep], svals[keep], Vt[keep]

    scale = np.sqrt(y_d.size)
    u = np.zeros(rep.dim)
    history: list[float] = []
    u_final, y_final = u, None
    converged = False
    stalled = False
    stall_streak = 0

    for _ in range(max_iters):
        y = np.asarray(plant(u), dtype=float).ravel()
        err = float(np.linalg.norm(y_d - y) / scale)
        history.append(err)
        u_final, y_final = u, y
        if err <= tol:
            converged = True
            break
        if len(history) > 1 and err >= history[-2]:
            stall_streak += 1
            if stall_streak >= STALL_PATIENCE:
                stalled = True
                break
        else:
            stall_streak = 0
        e = y_d - y
        u = u + Vk.T @ ((Uk.T @ e) / sk)

    run = IlcRun(
        u_final=u_final,
        y_final=y_final,
        error_history=np.asarray(history),
        iterations=len(history),
        converged=converged,
        stalled=stalled,
    )
    if stalled and on_stall == "raise":
        raise IlcDivergenceError(
            f"tracking error stopped decreasing for {STALL_PATIENCE} consecutive "
            f"trials (stuck at {history[-1]:.3e}); the data-derived response "
            "matrix cannot reduce the remaining error",
            run=run,
        )
    return run


def ilc_error_curve(run: IlcRun) -> np.ndarray:
    """Per-trial error table: rows of (trial index, RMS error)."""
    if run.iterations == 0:
        return np.empty((0, 2))
    return np.column_stack([np.arange(run.iterations, dtype=float), run.error_history])
