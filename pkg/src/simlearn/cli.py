"""Command-line front end.

Subcommands::

    simlearn test        --config cfg.json --out DIR   capture test datasets
    simlearn similarity  --config cfg.json --out DIR   indexes + guest ranking
    simlearn transfer    --config cfg.json --out DIR   learn on guests, transfer to host
    simlearn ilc         --config cfg.json --out DIR   baseline learner only
    simlearn example1    --out DIR                     bundled SISO scenario, end to end
    simlearn example2    --out DIR                     bundled robot scenario, end to end

Exit codes: 0 on success, 2 when a similarity gate rejected every guest,
1 on any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import reporting
from .behavior import BehaviorRep, build_representation
from .config import ScenarioConfig, builtin_config, load_config
from .errors import IlcDivergenceError, SimlearnError
from .ilc import IlcRun, ilc_track
from .iotest import TestDataset, design_test_inputs, random_test_inputs, run_tests, verify_principles
from .models import Trajectory, as_plant
from .presets import integrate_planar_path
from .similarity import rank_guests, similarity_indexes
from .transfer import transfer

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_SIMILAR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simlearn",
        description="Data-driven behavior similarity and trajectory transfer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        p.add_argument("--tol-rank", type=float, default=None, help="rank tolerance override")
        p.add_argument("--tol-similarity", type=float, default=None, help="similarity tolerance override")
        p.add_argument("--tol-membership", type=float, default=None, help="membership tolerance override")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized test-input designs")
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("test", help="run the offline I/O tests and write the datasets")
    add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("similarity", help="similarity indexes and guest ranking")
    add_common(p)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("transfer", help="learn on each guest, transfer to the host")
    add_common(p)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("ilc", help="baseline iterative learner on configured systems")
    add_common(p)
    p.add_argument("--system", default="all", help="system name from the config, or 'all'")
    p.set_defaults(func=cmd_ilc)

    for name in ("example1", "example2"):
        p = sub.add_parser(name, help=f"run the bundled {name} scenario end to end")
        add_common(p, needs_config=False)
        p.set_defaults(func=lambda args, _name=name: cmd_example(args, _name))
    return parser


def _load_scenario(args, builtin: str | None = None) -> ScenarioConfig:
    cfg = builtin_config(builtin) if builtin else load_config(args.config)
    if args.out is not None:
        cfg.output_dir = args.out
    if args.tol_rank is not None:
        cfg.rank_tol = args.tol_rank
    if args.tol_similarity is not None:
        cfg.similarity_tol = args.tol_similarity
    if args.tol_membership is not None:
        cfg.membership_tol = args.tol_membership
    return cfg


def _out_dir(cfg: ScenarioConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _test_matrix(cfg: ScenarioConfig, seed: int | None) -> np.ndarray:
    if cfg.test_inputs == "random":
        return random_test_inputs(cfg.host.n_u, cfg.T, np.random.default_rng(seed))
    return design_test_inputs(cfg.host.n_u, cfg.T)


def _capture_all(cfg: ScenarioConfig, seed: int | None) -> dict[str, TestDataset]:
    U_test = _test_matrix(cfg, seed)
    datasets = {}
    for name in cfg.system_names():
        plant = as_plant(cfg.system(name))
        datasets[name] = run_tests(plant, U_test, cfg.host.n_u, cfg.T, cfg.rank_tol)
    return datasets


def _build_reps(cfg: ScenarioConfig, datasets: dict[str, TestDataset]) -> dict[str, BehaviorRep]:
    return {name: build_representation(data, cfg.rank_tol) for name, data in datasets.items()}


def cmd_test(args, cfg: ScenarioConfig | None = None) -> int:
    cfg = cfg or _load_scenario(args)
    out = _out_dir(cfg)
    datasets = _capture_all(cfg, args.seed)
    checks = {}
    for name, data in datasets.items():
        reporting.save_dataset(data, out / f"{name}_U.csv", out / f"{name}_Y.csv")
        checks[name] = verify_principles(data.U, cfg.rank_tol)
        print(f"[test] {name}: {data.n_tests} tests captured; {checks[name].message}")
    reporting.write_principles_csv(out / "principles.csv", checks)
    return EXIT_OK


def cmd_similarity(args, cfg: ScenarioConfig | None = None) -> int:
    cfg = cfg or _load_scenario(args)
    out = _out_dir(cfg)
    reps = _build_reps(cfg, _capture_all(cfg, args.seed))
    ranking = rank_guests(
        reps[cfg.host_name], [reps[name] for name in cfg.guest_names], cfg.similarity_tol
    )
    indexes_by_guest = {}
    for i, name in enumerate(cfg.guest_names):
        report = ranking.reports[i]
        reporting.write_similarity_csv(out / f"similarity_{name}.csv", report)
        indexes_by_guest[name] = report.indexes
        print(
            f"[similarity] {name}: similar={report.similar} "
            f"residual={report.residual:.3e} distance={report.distance_to_identity:.3e}"
        )
    entries = []
    for rank, guest_idx in enumerate(ranking.order, start=1):
        entries.append(
            {
                "rank": rank,
                "guest": cfg.guest_names[guest_idx],
                "distance": ranking.distances[rank - 1],
                "similar": True,
            }
        )
    for guest_idx in ranking.dissimilar:
        entries.append(
            {
                "rank": None,
                "guest": cfg.guest_names[guest_idx],
                "distance": ranking.reports[guest_idx].distance_to_identity,
                "similar": False,
            }
        )
    reporting.write_ranking_csv(out / "ranking.csv", entries)
    if not args.no_figures:
        reporting.fig_similarity(out / "similarity_indexes.png", indexes_by_guest)
    if not ranking.order:
        print("[similarity] no guest passed the similarity gate")
        return EXIT_NOT_SIMILAR
    return EXIT_OK


def _run_ilc(cfg: ScenarioConfig, reps, name: str, on_stall: str) -> IlcRun:
    plant = as_plant(cfg.system(name))
    return ilc_track(
        plant,
        reps[name],
        cfg.reference(),
        max_iters=cfg.ilc_max_iters,
        tol=cfg.ilc_tol,
        on_stall=on_stall,
    )


def cmd_ilc(args, cfg: ScenarioConfig | None = None) -> int:
    cfg = cfg or _load_scenario(args)
    out = _out_dir(cfg)
    wanted = cfg.system_names() if args.system == "all" else [args.system]
    for name in wanted:
        cfg.system(name)  # validates the name
    reps = _build_reps(cfg, _capture_all(cfg, args.seed))
    curves = {}
    for name in wanted:
        run = _run_ilc(cfg, reps, name, on_stall="raise")
        curves[name] = run.error_history
        reporting.write_error_curve_csv(out / f"ilc_{name}_errors.csv", run)
        if run.y_final is not None:
            traj = Trajectory(u=run.u_final, y=run.y_final, n_u=cfg.host.n_u, n_y=cfg.host.n_y)
            reporting.write_trajectory_csv(out / f"ilc_{name}.csv", traj)
        status = "converged" if run.converged else "stopped at trial limit"
        final = run.error_history[-1] if run.iterations else float("nan")
        print(f"[ilc] {name}: {run.iterations} trials, {status}, final RMS error {final:.3e}")
    if not args.no_figures:
        reporting.fig_error_curves(out / "ilc_errors.png", curves)
    return EXIT_OK


def cmd_transfer(args, cfg: ScenarioConfig | None = None) -> int:
    cfg = cfg or _load_scenario(args)
    out = _out_dir(cfg)
    datasets = _capture_all(cfg, args.seed)
    reps = _build_reps(cfg, datasets)
    y_d = cfg.reference()
    n_u, n_y = cfg.host.n_u, cfg.host.n_y
    reporting.write_reference_csv(out / "reference.csv", y_d, n_y)

    summary_rows = []
    error_curves = {}
    transferred = 0
    for name in cfg.guest_names:
        run = _run_ilc(cfg, reps, name, on_stall="stop")
        error_curves[name] = run.error_history
        reporting.write_error_curve_csv(out / f"ilc_{name}_errors.csv", run)
        traj_g = Trajectory(u=run.u_final, y=run.y_final, n_u=n_u, n_y=n_y)
        reporting.write_trajectory_csv(out / f"experience_{name}.csv", traj_g)
        if run.stalled:
            print(f"[transfer] note: learner stalled on {name} at RMS error "
                  f"{run.error_history[-1]:.3e} (reference not exactly reachable)")

        report = similarity_indexes(
            reps[cfg.host_name], reps[name], cfg.similarity_tol, allow_dissimilar=True
        )
        row = {
            "guest": name,
            "similar": report.similar,
            "transfer_error": float("nan"),
            "residual": report.residual,
            "distance": report.distance_to_identity,
            "ilc_trials": run.iterations,
            "ilc_final_error": run.error_history[-1] if run.iterations else float("nan"),
        }
        if report.similar:
            result = transfer(reps[cfg.host_name], reps[name], report, traj_g.w, cfg.membership_tol)
            u_h, y_h = result.split(n_u, cfg.T)
            traj_h = Trajectory(u=u_h, y=y_h, n_u=n_u, n_y=n_y)
            reporting.write_trajectory_csv(out / f"transfer_{name}.csv", traj_h)
            row["transfer_error"] = result.transfer_error
            transferred += 1
            print(f"[transfer] {name}: transfer error {result.transfer_error:.6e}")
            if not args.no_figures:
                reporting.fig_tracking(
                    out / f"tracking_{name}.png",
                    y_d,
                    {f"{name} (learned)": traj_g.y, "host (transferred)": y_h},
                    n_y,
                )
                reporting.fig_inputs(
                    out / f"inputs_{name}.png",
                    {f"{name} (learned)": traj_g.u, "host (transferred)": u_h},
                    n_u,
                )
            if cfg.sample_time is not None:
                path_g = integrate_planar_path(traj_g.y, cfg.sample_time)
                path_h = integrate_planar_path(y_h, cfg.sample_time)
                path_ref = integrate_planar_path(y_d, cfg.sample_time)
                reporting.write_path_csv(out / f"path_{name}.csv", path_g)
                reporting.write_path_csv(out / "path_host.csv", path_h)
                reporting.write_path_csv(out / "path_reference.csv", path_ref)
                if not args.no_figures:
                    reporting.fig_paths(
                        out / "paths.png",
                        {"reference": path_ref, name: path_g, "host": path_h},
                    )
        else:
            print(f"[transfer] {name}: not similar (residual {report.residual:.3e}); skipped")
        summary_rows.append(row)

    with (out / "transfer_summary.csv").open("w") as fh:
        fh.write("guest,similar,transfer_error,lae_residual,distance_to_identity,"
                 "ilc_trials,ilc_final_error\n")
        for r in summary_rows:
            fh.write(
                f"{r['guest']},{r['similar']},{reporting.FLOAT_FMT % r['transfer_error']},"
                f"{reporting.FLOAT_FMT % r['residual']},{reporting.FLOAT_FMT % r['distance']},"
                f"{r['ilc_trials']},{reporting.FLOAT_FMT % r['ilc_final_error']}\n"
            )
    if not args.no_figures:
        reporting.fig_error_curves(out / "ilc_errors.png", error_curves)
    if transferred == 0:
        print("[transfer] no guest passed the similarity gate")
        return EXIT_NOT_SIMILAR
    return EXIT_OK


def cmd_example(args, name: str) -> int:
    """Full pipeline on a bundled scenario: tests, similarity, learning, transfer."""
    cfg = _load_scenario(args, builtin=name)
    out = _out_dir(cfg)
    (out / "scenario.json").write_text(cfg.to_json() + "\n")
    code = cmd_test(args, cfg)
    if code != EXIT_OK:
        return code
    code = cmd_similarity(args, cfg)
    if code != EXIT_OK:
        return code
    return cmd_transfer(args, cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IlcDivergenceError as exc:
        print(f"error: learning diverged: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SimlearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
