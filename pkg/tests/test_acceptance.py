"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py`` to see them).
"""

import time

import numpy as np

from simlearn import (
    LtvModel,
    as_plant,
    check_similarity,
    ilc_track,
    membership,
    project_behavior,
    similarity_indexes,
    simulate,
    transfer,
    transfer_pipeline,
)
from simlearn.presets import example1_system
from simlearn.cli import main
from simlearn.config import builtin_config
from simlearn import reporting
from conftest import random_orthonormal, synthetic_rep
from test_similarity import brute_force_indexes
from test_transfer import guest_member, similar_random_pair


def report(num, name, ok, detail=""):
    print(f"criterion {num} [{name}]: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_1_membership_reconstruction(ex1_models, ex1_data_reps,
                                               ex2_models, ex2_data_reps):
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    failures = []
    for models, reps, key in ((ex1_models, ex1_data_reps, "host"),
                              (ex2_models, ex2_data_reps, "host")):
        model, rep = models[key], reps[key]
        for _ in range(50):
            tr = simulate(model, rng.standard_normal(model.n_u * model.T))
            res = membership(rep, tr.w, tol=1e-8)
            if not res.is_member:
                failures.append(f"member rejected (residual {res.residual:.2e})")
            w_bad = tr.w.copy()
            w_bad[model.n_u * model.T + rng.integers(model.n_y * model.T)] += 1.0
            if membership(rep, w_bad, tol=1e-8).is_member:
                failures.append("perturbed non-trajectory accepted")
    elapsed = time.perf_counter() - t0
    if elapsed >= 5.0:
        failures.append(f"runtime {elapsed:.1f}s exceeds 5s")
    report(1, "behavior reconstruction", not failures,
           f"(100 members + 100 perturbations, {elapsed:.2f}s) {failures[:3]}")


def test_criterion_2_similarity_indexes(ex1_cfg, ex1_data_reps, ex1_oracle_reps):
    tol = ex1_cfg.similarity_tol
    data_si = similarity_indexes(ex1_data_reps["host"], ex1_data_reps["guest"], tol).indexes
    oracle_si = similarity_indexes(ex1_oracle_reps["host"], ex1_oracle_reps["guest"],
                                   tol).indexes
    path_gap = float(np.max(np.abs(data_si - oracle_si)))

    self_si = similarity_indexes(ex1_data_reps["host"], ex1_data_reps["host"]).indexes
    self_gap = float(np.max(np.abs(self_si - 1.0)))

    rng = np.random.default_rng(102)
    sym_gap = offset_gap = 0.0
    for _ in range(20):
        n, m = 10, 4
        H1, H2 = random_orthonormal(rng, n, m), random_orthonormal(rng, n, m)
        r1 = synthetic_rep(H1, rng.standard_normal(n), n_u=4, n_y=6, T=1)
        r2 = synthetic_rep(H2, rng.standard_normal(n), n_u=4, n_y=6, T=1)
        fwd = similarity_indexes(r1, r2, allow_dissimilar=True).indexes
        rev = similarity_indexes(r2, r1, allow_dissimilar=True).indexes
        sym_gap = max(sym_gap, float(np.max(np.abs(fwd - rev))))
        r1b = synthetic_rep(H1, rng.standard_normal(n), n_u=4, n_y=6, T=1)
        r2b = synthetic_rep(H2, rng.standard_normal(n), n_u=4, n_y=6, T=1)
        moved = similarity_indexes(r1b, r2b, allow_dissimilar=True).indexes
        offset_gap = max(offset_gap, float(np.max(np.abs(moved - fwd))))

    ok = path_gap <= 1e-7 and self_gap <= 1e-10 and sym_gap <= 1e-10 and offset_gap <= 1e-10
    report(2, "similarity index correctness", ok,
           f"(data-vs-oracle {path_gap:.1e}, self {self_gap:.1e}, "
           f"symmetry {sym_gap:.1e}, offset {offset_gap:.1e})")


def test_criterion_3_principal_angle_definition():
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(20):
        H1 = random_orthonormal(rng, 6, 2)
        H2 = random_orthonormal(rng, 6, 2)
        r1 = synthetic_rep(H1, np.zeros(6), n_u=2, n_y=4, T=1)
        r2 = synthetic_rep(H2, np.zeros(6), n_u=2, n_y=4, T=1)
        svd_si = similarity_indexes(r1, r2, allow_dissimilar=True).indexes
        oracle = brute_force_indexes(H1, H2)
        worst = max(worst, float(np.max(np.abs(svd_si - oracle))))
    report(3, "brute-force definition equivalence", worst <= 1e-4,
           f"(worst disagreement {worst:.2e} over 20 toys)")


def test_criterion_4_transfer_equals_projection():
    rng = np.random.default_rng(104)
    proj_gap = 0.0
    opt_ok = True
    identity_gap = 0.0
    for _ in range(100):
        rep1, rep2 = similar_random_pair(rng)
        w_g = guest_member(rng, rep2)
        rep_report = similarity_indexes(rep1, rep2)
        result = transfer(rep1, rep2, rep_report, w_g)
        oracle = project_behavior(rep1, w_g)
        proj_gap = max(
            proj_gap,
            float(np.linalg.norm(result.w_h - oracle) / (1 + np.linalg.norm(w_g))),
        )
        members = rep1.w0[:, None] + rep1.H @ rng.standard_normal((rep1.dim, 1000))
        dists = np.linalg.norm(w_g[:, None] - members, axis=0)
        opt_ok = opt_ok and bool(np.all(result.transfer_error <= dists + 1e-9))
        projected = rep1.H @ (rep1.H.T @ rep_report.P2)
        expected = rep_report.P1 @ np.diag(rep_report.indexes)
        identity_gap = max(
            identity_gap, float(np.max(np.linalg.norm(projected - expected, axis=0)))
        )
    ok = proj_gap <= 1e-8 and opt_ok and identity_gap <= 1e-9
    report(4, "closed-form transfer vs projection", ok,
           f"(projection gap {proj_gap:.1e}, principal identity {identity_gap:.1e}, "
           f"optimality {'ok' if opt_ok else 'violated'})")


def test_criterion_5_lossless_edge_cases():
    rng = np.random.default_rng(105)
    rep1, rep2 = similar_random_pair(rng)
    common = check_similarity(rep1, rep2).common_point
    rep_report = similarity_indexes(rep1, rep2)
    err_common = transfer(rep1, rep2, rep_report, common).transfer_error

    H = random_orthonormal(rng, 10, 3)
    w0 = rng.standard_normal(10)
    twin1 = synthetic_rep(H, w0, n_u=3, n_y=7, T=1)
    twin2 = synthetic_rep(H @ random_orthonormal(rng, 3, 3), w0 + H @ rng.standard_normal(3),
                          n_u=3, n_y=7, T=1)
    w_g = guest_member(rng, twin2)
    twin_report = similarity_indexes(twin1, twin2)
    err_twin = float(np.linalg.norm(transfer(twin1, twin2, twin_report, w_g).w_h - w_g))

    ok = err_common <= 1e-9 and err_twin <= 1e-9
    report(5, "common-trajectory and identical-behavior transfer", ok,
           f"(common {err_common:.2e}, identical {err_twin:.2e})")


def test_criterion_6_example1_end_to_end(ex1_cfg, ex1_models, ex1_data_reps, ex1_reference):
    t0 = time.perf_counter()
    host_plant = as_plant(ex1_models["host"])

    run = ilc_track(as_plant(ex1_models["guest"]), ex1_data_reps["guest"], ex1_reference,
                    max_iters=300, tol=1e-3)
    ilc_ok = run.converged and run.iterations <= 300 and run.error_history[-1] <= 1e-3

    outcome = transfer_pipeline(host_plant, as_plant(ex1_models["guest"]), run.w, 1, 35,
                                similarity_tol=ex1_cfg.similarity_tol)
    oracle_dist = float(np.linalg.norm(project_behavior(ex1_data_reps["host"], run.w) - run.w))
    gap = abs(outcome.result.transfer_error - oracle_dist)

    run3 = ilc_track(as_plant(ex1_models["dissimilar"]), ex1_data_reps["dissimilar"],
                     ex1_reference, max_iters=300, tol=1e-3, on_stall="stop")
    outcome3 = transfer_pipeline(host_plant, as_plant(ex1_models["dissimilar"]), run3.w, 1, 35,
                                 similarity_tol=ex1_cfg.similarity_tol)
    degraded = outcome3.result.transfer_error > outcome.result.transfer_error

    elapsed = time.perf_counter() - t0
    ok = ilc_ok and gap <= 1e-6 and degraded and elapsed < 30.0
    report(6, "first scenario end-to-end", ok,
           f"(learner {run.iterations} trials to {run.error_history[-1]:.1e}, "
           f"oracle gap {gap:.1e}, errors {outcome.result.transfer_error:.3f} < "
           f"{outcome3.result.transfer_error:.3f}, {elapsed:.1f}s)")


def test_criterion_7_example2_end_to_end(tmp_path, ex2_cfg, ex2_models, ex2_data_reps,
                                         ex2_reference):
    t0 = time.perf_counter()
    run = ilc_track(as_plant(ex2_models["guest"]), ex2_data_reps["guest"], ex2_reference,
                    max_iters=200, tol=1e-2)
    ilc_ok = run.converged and run.iterations <= 200

    report_sim = similarity_indexes(ex2_data_reps["host"], ex2_data_reps["guest"],
                                    ex2_cfg.similarity_tol)
    result = transfer(ex2_data_reps["host"], ex2_data_reps["guest"], report_sim, run.w)
    oracle = project_behavior(ex2_data_reps["host"], run.w)
    gap = float(np.linalg.norm(result.w_h - oracle))

    out = tmp_path / "example2"
    code = main(["example2", "--out", str(out)])
    paths_ok = (
        code == 0
        and (out / "path_example2-guest.csv").exists()
        and (out / "path_host.csv").exists()
        and reporting.read_path_csv(out / "path_host.csv").shape == (81, 2)
    )

    elapsed = time.perf_counter() - t0
    ok = ilc_ok and gap <= 1e-6 and paths_ok and elapsed < 60.0
    report(7, "robot scenario end-to-end", ok,
           f"(learner {run.iterations} trials, oracle gap {gap:.1e}, "
           f"paths {'written' if paths_ok else 'missing'}, {elapsed:.1f}s)")


def test_criterion_8_gate_rejects_dissimilar_pair(tmp_path):
    host = LtvModel.constant([[0.0]], [[1.0]], [[1.0]], [[0.0]], [0.0], 2)
    guest = LtvModel.constant([[0.0]], [[1.0]], [[1.0]], [[0.0]], [1.0], 2)
    w_g = simulate(guest, np.zeros(2)).w
    outcome = transfer_pipeline(as_plant(host), as_plant(guest), w_g, 1, 2)
    outcome_ok = not outcome.similar and outcome.result is None

    cfg = builtin_config("example1")
    shifted = example1_system("host")
    shifted = LtvModel(A=shifted.A, B=shifted.B, C=shifted.C, D=shifted.D,
                       x0=shifted.x0 + np.array([1.0, 0.0, 0.0]))
    cfg.guests = [shifted]
    cfg.guest_names = ["shifted-host"]
    cfg.similarity_tol = 1e-8
    cfg_path = tmp_path / "gate.json"
    cfg_path.write_text(cfg.to_json())
    code = main(["transfer", "--config", str(cfg_path), "--out", str(tmp_path / "o"),
                 "--no-figures"])

    ok = outcome_ok and code == 2
    report(8, "dissimilar pair exits at the gate", ok,
           f"(pipeline outcome similar={outcome.similar}, exit code {code})")
