"""Delimited output files and the figures rendered next to them.

Every writer here has a matching reader so that results round-trip losslessly
(floats are printed with 17 significant digits).  Figures are rendered
head-less to PNG files alongside the CSV output; nothing opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .behavior import BehaviorRep
from .errors import DimensionError
from .ilc import IlcRun, ilc_error_curve
from .iotest import PrincipleCheck, TestDataset
from .models import Trajectory
from .similarity import SimilarityReport

FLOAT_FMT = "%.17g"


# ---------------------------------------------------------------------------
# matrix files with a small metadata header
# ---------------------------------------------------------------------------

def _format_meta(meta: dict) -> str:
    return "# " + " ".join(f"{k}={v}" for k, v in meta.items())


def _parse_meta(line: str) -> dict:
    meta = {}
    for token in line.lstrip("#").split():
        key, _, value = token.partition("=")
        meta[key] = value
    return meta


def write_matrix_csv(path: str | Path, M: np.ndarray, meta: dict | None = None) -> None:
    """Write a matrix (a vector is written as one column) with a ``# key=value`` header."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim > 2:
        raise DimensionError("only vectors and matrices can be written")
    path = Path(path)
    with path.open("w") as fh:
        if meta:
            fh.write(_format_meta(meta) + "\n")
        np.savetxt(fh, M, fmt=FLOAT_FMT, delimiter=",")


def read_matrix_csv(path: str | Path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    with path.open() as fh:
        first = fh.readline()
        meta = _parse_meta(first) if first.startswith("#") else {}
    M = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return M, meta


# ---------------------------------------------------------------------------
# datasets and behavior representations
# ---------------------------------------------------------------------------

def save_dataset(data: TestDataset, u_path: str | Path, y_path: str | Path) -> None:
    meta = {"n_u": data.n_u, "n_y": data.n_y, "T": data.T}
    write_matrix_csv(u_path, data.U, meta)
    write_matrix_csv(y_path, data.Y, meta)


def load_dataset(u_path: str | Path, y_path: str | Path) -> TestDataset:
    U, meta = read_matrix_csv(u_path)
    Y, meta_y = read_matrix_csv(y_path)
    if meta != meta_y:
        raise DimensionError(f"dataset halves disagree on dimensions: {meta} vs {meta_y}")
    return TestDataset(U=U, Y=Y, n_u=int(meta["n_u"]), n_y=int(meta["n_y"]), T=int(meta["T"]))


def save_behavior(rep: BehaviorRep, prefix: str | Path) -> list[Path]:
    """Write the (W, w0, H) bundle as three CSV files sharing one prefix."""
    prefix = Path(prefix)
    meta = {"n_u": rep.n_u, "n_y": rep.n_y, "T": rep.T}
    paths = []
    for suffix, M in (("W", rep.W), ("w0", rep.w0[:, None]), ("H", rep.H)):
        p = prefix.with_name(prefix.name + f"_{suffix}.csv")
        write_matrix_csv(p, M, meta)
        paths.append(p)
    return paths


def load_behavior(prefix: str | Path) -> BehaviorRep:
    prefix = Path(prefix)
    parts = {}
    meta = {}
    for suffix in ("W", "w0", "H"):
        M, meta = read_matrix_csv(prefix.with_name(prefix.name + f"_{suffix}.csv"))
        parts[suffix] = M
    return BehaviorRep(
        W=parts["W"],
        w0=parts["w0"].ravel(),
        H=parts["H"],
        n_u=int(meta["n_u"]),
        n_y=int(meta["n_y"]),
        T=int(meta["T"]),
    )


# ---------------------------------------------------------------------------
# trajectories, error curves, reports
# ---------------------------------------------------------------------------

def write_trajectory_csv(path: str | Path, traj: Trajectory) -> None:
    """One time step per row: t, the input channels, then the output channels."""
    cols = ["t"]
    cols += [f"u{i + 1}" for i in range(traj.n_u)]
    cols += [f"y{i + 1}" for i in range(traj.n_y)]
    table = np.column_stack(
        [
            np.arange(traj.T, dtype=float),
            traj.u.reshape(traj.T, traj.n_u),
            traj.y.reshape(traj.T, traj.n_y),
        ]
    )
    with Path(path).open("w") as fh:
        fh.write(",".join(cols) + "\n")
        np.savetxt(fh, table, fmt=FLOAT_FMT, delimiter=",")


def read_trajectory_csv(path: str | Path) -> Trajectory:
    path = Path(path)
    with path.open() as fh:
        names = fh.readline().strip().split(",")
    n_u = sum(1 for n in names if n.startswith("u"))
    n_y = sum(1 for n in names if n.startswith("y"))
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return Trajectory(
        u=table[:, 1:1 + n_u].ravel(),
        y=table[:, 1 + n_u:1 + n_u + n_y].ravel(),
        n_u=n_u,
        n_y=n_y,
    )


def write_reference_csv(path: str | Path, y_d: np.ndarray, n_y: int) -> None:
    """Reference output supervector, one time step per row."""
    ref = _channels(y_d, n_y)
    with Path(path).open("w") as fh:
        fh.write("t," + ",".join(f"y{i + 1}" for i in range(n_y)) + "\n")
        rows = np.column_stack([np.arange(ref.shape[0], dtype=float), ref])
        np.savetxt(fh, rows, fmt=FLOAT_FMT, delimiter=",")


def read_reference_csv(path: str | Path) -> np.ndarray:
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return table[:, 1:].ravel()


def write_error_curve_csv(path: str | Path, run: IlcRun) -> None:
    with Path(path).open("w") as fh:
        fh.write("trial,rms_error\n")
        np.savetxt(fh, ilc_error_curve(run), fmt=FLOAT_FMT, delimiter=",")


def read_error_curve_csv(path: str | Path) -> np.ndarray:
    lines = Path(path).read_text().splitlines()
    if len(lines) <= 1:
        return np.empty((0, 2))
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_similarity_csv(path: str | Path, report: SimilarityReport) -> None:
    """Index vector with the gate outcome in the header."""
    with Path(path).open("w") as fh:
        fh.write(
            _format_meta(
                {
                    "similar": report.similar,
                    "residual": FLOAT_FMT % report.residual,
                    "degenerate": report.degenerate,
                    "distance_to_identity": FLOAT_FMT % report.distance_to_identity,
                }
            )
            + "\n"
        )
        fh.write("k,index\n")
        rows = np.column_stack([np.arange(1, report.indexes.size + 1), report.indexes])
        np.savetxt(fh, rows, fmt=["%d", FLOAT_FMT], delimiter=",")


def read_similarity_csv(path: str | Path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    with path.open() as fh:
        meta = _parse_meta(fh.readline())
    table = np.loadtxt(path, delimiter=",", skiprows=2, ndmin=2)
    return table[:, 1], meta


def write_ranking_csv(path: str | Path, entries: list[dict]) -> None:
    """Ranking rows: rank (empty for dissimilar guests), guest, distance, similar."""
    with Path(path).open("w") as fh:
        fh.write("rank,guest,distance_to_identity,similar\n")
        for e in entries:
            rank = "" if e["rank"] is None else str(e["rank"])
            fh.write(f"{rank},{e['guest']},{FLOAT_FMT % e['distance']},{e['similar']}\n")


def write_principles_csv(path: str | Path, checks: dict[str, PrincipleCheck]) -> None:
    with Path(path).open("w") as fh:
        fh.write("system,passed,rank,sigma_min,sigma_max,tolerance\n")
        for name, c in checks.items():
            fh.write(
                f"{name},{c.passed},{c.rank},{FLOAT_FMT % c.sigma_min},"
                f"{FLOAT_FMT % c.sigma_max},{FLOAT_FMT % c.tolerance}\n"
            )


def write_path_csv(path: str | Path, points: np.ndarray) -> None:
    """Planar path points, one row per sample: n, x, y."""
    points = np.asarray(points, dtype=float)
    with Path(path).open("w") as fh:
        fh.write("n,x,y\n")
        rows = np.column_stack([np.arange(points.shape[0], dtype=float), points])
        np.savetxt(fh, rows, fmt=FLOAT_FMT, delimiter=",")


def read_path_csv(path: str | Path) -> np.ndarray:
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return table[:, 1:]


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def _channels(vec: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(vec, dtype=float).reshape(-1, n)


def fig_tracking(
    path: str | Path,
    y_d: np.ndarray,
    curves: dict[str, np.ndarray],
    n_y: int,
    channel_names: list[str] | None = None,
) -> None:
    """Reference vs. learned/transferred outputs, one panel per output channel."""
    ref = _channels(y_d, n_y)
    t = np.arange(ref.shape[0])
    names = channel_names or [f"y{i + 1}" for i in range(n_y)]
    fig, axes = plt.subplots(n_y, 1, figsize=(7, 2.6 * n_y), sharex=True, squeeze=False)
    for i in range(n_y):
        ax = axes[i, 0]
        ax.plot(t, ref[:, i], "k--", linewidth=1.5, label="reference")
        for label, y in curves.items():
            ax.plot(t, _channels(y, n_y)[:, i], linewidth=1.2, label=label)
        ax.set_ylabel(names[i])
        ax.grid(True, alpha=0.3)
    axes[0, 0].legend(loc="best", fontsize=8)
    axes[-1, 0].set_xlabel("time step")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_inputs(path: str | Path, curves: dict[str, np.ndarray], n_u: int) -> None:
    fig, axes = plt.subplots(n_u, 1, figsize=(7, 2.6 * n_u), sharex=True, squeeze=False)
    for i in range(n_u):
        ax = axes[i, 0]
        for label, u in curves.items():
            uu = _channels(u, n_u)
            ax.plot(np.arange(uu.shape[0]), uu[:, i], linewidth=1.2, label=label)
        ax.set_ylabel(f"u{i + 1}")
        ax.grid(True, alpha=0.3)
    axes[0, 0].legend(loc="best", fontsize=8)
    axes[-1, 0].set_xlabel("time step")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_error_curves(path: str | Path, curves: dict[str, np.ndarray]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, hist in curves.items():
        hist = np.asarray(hist, dtype=float)
        if hist.size:
            ax.semilogy(np.arange(hist.size), np.maximum(hist, 1e-300), label=label)
    ax.set_xlabel("trial")
    ax.set_ylabel("RMS tracking error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_similarity(path: str | Path, indexes: dict[str, np.ndarray]) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, s in indexes.items():
        s = np.asarray(s, dtype=float)
        ax.plot(np.arange(1, s.size + 1), s, marker=".", linewidth=1.0, label=label)
    ax.set_xlabel("k")
    ax.set_ylabel("similarity index")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_paths(path: str | Path, paths: dict[str, np.ndarray]) -> None:
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    for label, pts in paths.items():
        pts = np.asarray(pts, dtype=float)
        ax.plot(pts[:, 0], pts[:, 1], linewidth=1.2, label=label)
    ax.set_xlabel("x position")
    ax.set_ylabel("y position")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
