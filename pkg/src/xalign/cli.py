"""Command-line surface: seeded simulations, trade-off tables, invariant suite.

Exit codes: 0 on success, 1 when an invariant or decode check fails, 2 on
usage errors.  JSON output is byte-stable for identical invocations (sorted
keys, fixed-precision floats); CSV always carries a header row.  A JSON config
file may supply any flag (keys use underscores), and XALIGN_SEED sets the
default seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import dof, misox, ria, stia2
from .channel import derive_seed, sample_network, schedule_slot_sets
from .errors import (
    ConfigurationError,
    SchedulingError,
    UnsupportedCaseError,
)
from .linalg import rank_tol
from .precoding import czp_pattern, czp_precoder, scalar_ratio_precoder
from .records import fixed_float

ENV_SEED = "XALIGN_SEED"


def frac_to_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator, "real": fixed_float(float(f))}


# ---------------------------------------------------------------------------
# per-trial runners
# ---------------------------------------------------------------------------

def _report_rows(trial: int, reports) -> list[dict]:
    return [
        {
            "trial": trial,
            "receiver": r.receiver,
            "rank": r.rank,
            "num_symbols": r.num_symbols,
            "max_residual": fixed_float(r.max_residual) if np.isfinite(r.max_residual) else "inf",
            "success": bool(r.success),
        }
        for r in reports
    ]


def stia2_trial(A: int, B: int, coherence, feedback_delay: int, base_seed: int, trial: int) -> dict:
    cfg = stia2.stia_case(A, B)
    net = stia2.stia2_network(A, B, coherence=coherence, feedback_delay=feedback_delay,
                              seed=derive_seed(base_seed, trial))
    proc = sample_network(net)
    slot_set = stia2.schedule(cfg, net)[0]
    rng = np.random.default_rng([derive_seed(base_seed, trial), 1])
    payload = stia2.Stia2Payload.random(A, rng)
    transcript = stia2.run_stia_two_user(cfg, proc, slot_set, payload)
    reports = [stia2.decode_stia_receiver(transcript, proc, j) for j in (1, 2)]
    return {
        "trial": trial,
        "reports": _report_rows(trial, reports),
        "symbols": sum(r.num_symbols for r in reports),
        "slots": len(transcript.slots),
        "max_residual": max(r.max_residual for r in reports),
        "success": all(r.success for r in reports),
    }


def ria_trial(K: int, coherence, feedback_delay: int, base_seed: int, trial: int) -> dict:
    plan = ria.plan_ria(K, coherence=coherence, feedback_delay=feedback_delay)
    net = ria.ria_network(K, coherence=plan.coherence, feedback_delay=plan.feedback_delay,
                          seed=derive_seed(base_seed, trial))
    proc = sample_network(net)
    rng = np.random.default_rng([derive_seed(base_seed, trial), 1])
    payload = ria.RiaPayload.random(K, rng)
    transcript = ria.run_ria(plan, proc, payload)
    reports = [ria.decode_ria_receiver(transcript, proc, j) for j in range(1, K + 1)]
    return {
        "trial": trial,
        "reports": _report_rows(trial, reports),
        "symbols": sum(r.num_symbols for r in reports),
        "slots": plan.total_slots,
        "max_residual": max(r.max_residual for r in reports),
        "success": all(r.success for r in reports),
    }


def misox_trial(M: int, N: int, coherence, feedback_delay: int, base_seed: int, trial: int) -> dict:
    cfg = misox.MisoxConfig(M=M, N=N)
    net = misox.misox_network(cfg, coherence=coherence, feedback_delay=feedback_delay,
                              seed=derive_seed(base_seed, trial))
    proc = sample_network(net)
    slot_set = misox.schedule(cfg, net)[0]
    rng = np.random.default_rng([derive_seed(base_seed, trial), 1])
    payload = misox.MisoxPayload.random(cfg, rng)
    transcript = misox.run_misox(cfg, proc, slot_set, payload)
    reports = [misox.decode_misox_receiver(transcript, proc, j) for j in range(1, N + 1)]
    return {
        "trial": trial,
        "reports": _report_rows(trial, reports),
        "symbols": sum(r.num_symbols for r in reports),
        "slots": len(transcript.slots),
        "max_residual": max(r.max_residual for r in reports),
        "success": all(r.success for r in reports),
    }


def run_trials(spec: dict) -> dict:
    """Run ``spec['trials']`` independent seeded executions and aggregate.

    Results are keyed by trial index so the aggregate does not depend on
    completion order when a worker pool is used.
    """
    scheme = spec["scheme"]
    trials = spec["trials"]
    seed = spec["seed"]
    coherence = spec.get("coherence")
    delay = spec.get("feedback_delay", 2)
    workers = spec.get("workers", 1)

    if scheme == "stia2":
        runner = lambda t: stia2_trial(spec["A"], spec["B"], coherence, delay, seed, t)
        plateau = stia2.plateau(stia2.stia_case(spec["A"], spec["B"]))
        params = {"A": spec["A"], "B": spec["B"], "case": stia2.stia_case(spec["A"], spec["B"]).case}
    elif scheme == "ria":
        runner = lambda t: ria_trial(spec["K"], coherence, delay, seed, t)
        plateau = ria.plateau(spec["K"])
        params = {"K": spec["K"]}
    elif scheme == "misox":
        cfg = misox.MisoxConfig(M=spec["M"], N=spec["N"])
        runner = lambda t: misox_trial(spec["M"], spec["N"], coherence, delay, seed, t)
        plateau = misox.plateau(cfg)
        params = {"M": spec["M"], "N": spec["N"]}
    else:
        raise ConfigurationError(f"unknown scheme {scheme!r}")

    results: dict[int, dict] = {}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for trial, res in zip(range(trials), pool.map(runner, range(trials))):
                results[trial] = res
    else:
        for t in range(trials):
            results[t] = runner(t)

    ordered = [results[t] for t in sorted(results)]
    symbols = ordered[0]["symbols"]
    slots = ordered[0]["slots"]
    ratio = Fraction(symbols, slots)
    failures = sum(0 if r["success"] else 1 for r in ordered)
    return {
        "scheme": scheme,
        "params": params,
        "trials": trials,
        "seed": seed,
        "coherence": coherence,
        "feedback_delay": delay,
        "successes": trials - failures,
        "failures": failures,
        "max_residual": fixed_float(max(r["max_residual"] for r in ordered)),
        "symbols_per_run": symbols,
        "slots_per_run": slots,
        "ratio": frac_to_json(ratio),
        "plateau": frac_to_json(plateau),
        "per_trial": [row for r in ordered for row in r["reports"]],
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _emit(args, doc: dict, csv_rows: tuple[list[str], list[list]] | None) -> None:
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        header, rows = csv_rows
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    spec = {
        "scheme": args.scheme,
        "trials": args.trials,
        "seed": args.seed,
        "coherence": args.coherence,
        "feedback_delay": args.feedback_delay,
        "workers": args.workers,
    }
    for dim in ("A", "B", "K", "M", "N"):
        val = getattr(args, dim)
        if val is not None:
            spec[dim] = val
    _require_dims(args)
    doc = run_trials(spec)
    header = ["trial", "receiver", "rank", "num_symbols", "max_residual", "success"]
    rows = [[r[k] for k in header] for r in doc["per_trial"]]
    _emit(args, doc, (header, rows))
    return 0 if doc["failures"] == 0 else 1


def _require_dims(args) -> None:
    needed = {"stia2": ("A", "B"), "ria": ("K",), "misox": ("M", "N")}[args.scheme]
    missing = [d for d in needed if getattr(args, d) is None]
    if missing:
        raise ConfigurationError(
            f"scheme {args.scheme} needs --{' --'.join(missing)}"
        )
    extras = [d for d in ("A", "B", "K", "M", "N")
              if d not in needed and getattr(args, d) is not None]
    if extras:
        raise ConfigurationError(f"scheme {args.scheme} does not take --{' --'.join(extras)}")


def cmd_tradeoff(args) -> int:
    _require_dims(args)
    try:
        grid = [Fraction(tok) for tok in args.grid.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad lambda grid {args.grid!r}: {exc}") from exc
    if not grid or any(g < 0 for g in grid):
        raise ConfigurationError("grid must be non-empty with lambda >= 0")

    regions: dict[str, list[dof.TradeoffPoint]] = {}
    if args.scheme == "stia2":
        regions["theorem1"] = dof.sample_region(lambda lam: dof.theorem1_region(args.A, args.B, lam), grid)
        if 2 * args.B <= args.A:
            regions["corollary1"] = dof.sample_region(
                lambda lam: dof.corollary1_region(args.A, args.B, lam), grid)
    elif args.scheme == "ria":
        regions["theorem2"] = dof.sample_region(lambda lam: dof.theorem2_region(args.K, lam), grid)
    else:
        regions["theorem3"] = dof.sample_region(
            lambda lam: dof.theorem3_region(args.M, args.N, lam), grid)

    doc = {
        "scheme": args.scheme,
        "params": {d: getattr(args, d) for d in ("A", "B", "K", "M", "N") if getattr(args, d) is not None},
        "regions": {name: [p.to_json() for p in pts] for name, pts in regions.items()},
    }
    header = ["region", "lambda", "dof_num", "dof_den", "dof_real", "regime"]
    rows = []
    for name, pts in regions.items():
        for p in pts:
            rows.append([name, f"{p.lam.numerator}/{p.lam.denominator}",
                         p.dof.numerator, p.dof.denominator, fixed_float(float(p.dof)), p.regime])
    _emit(args, doc, (header, rows))
    return 0


def cmd_table(args) -> int:
    a_list = [int(tok) for tok in args.A_list.split(",") if tok.strip()]
    b_list = [int(tok) for tok in args.B_list.split(",") if tok.strip()]
    if not a_list or len(a_list) != len(b_list):
        raise ConfigurationError("--A-list and --B-list must be non-empty and the same length")
    rows_json = []
    csv_rows = []
    for A, B in zip(a_list, b_list):
        row = dof.table1_row(A, B)
        rows_json.append({"A": A, "B": B, **row.to_json()})
        csv_rows.append([A, B, row.case] + [
            x for col in (row.stia, row.gak, row.ia, row.vv)
            for x in (col.numerator, col.denominator, fixed_float(float(col)))
        ])
    header = ["A", "B", "case",
              "stia_num", "stia_den", "stia_real",
              "gak_num", "gak_den", "gak_real",
              "ia_num", "ia_den", "ia_real",
              "vv_num", "vv_den", "vv_real"]
    _emit(args, {"rows": rows_json}, (header, csv_rows))
    return 0


# ---------------------------------------------------------------------------
# verify suite
# ---------------------------------------------------------------------------

def _check_block_constancy(seed: int) -> None:
    net = stia2.stia2_network(2, 1, coherence=5, feedback_delay=2, seed=seed)
    proc = sample_network(net, num_blocks=2)
    assert np.array_equal(proc.channel_at(1, 1, 1), proc.channel_at(1, 1, 5))
    assert not np.array_equal(proc.channel_at(1, 1, 1), proc.channel_at(1, 1, 6))


def _check_determinism(seed: int) -> None:
    net = stia2.stia2_network(3, 2, seed=seed)
    a, b = sample_network(net, num_blocks=4), sample_network(net, num_blocks=4)
    for blk in range(4):
        for i in (1, 2):
            for j in (1, 2):
                assert np.array_equal(a.channel_at(i, j, blk * net.coherence + 1),
                                      b.channel_at(i, j, blk * net.coherence + 1))


def _check_magnitude_bounds(seed: int) -> None:
    net = stia2.stia2_network(5, 5, seed=seed)
    proc = sample_network(net, num_blocks=100)
    lo, hi = net.magnitude_bounds
    count = 0
    for blk in proc._blocks.values():
        for mat in blk.values():
            mags = np.abs(mat)
            assert np.all((mags >= lo) & (mags <= hi))
            count += mat.size
    assert count >= 10000


def _check_schedule(seed: int) -> None:
    sets = schedule_slot_sets(5, 2, 5, n_sets=2, phase_one_len=2)
    assert sets[0].slots == (1, 6, 13, 18, 23)
    assert sets[1].slots == (2, 7, 14, 19, 24)
    one = schedule_slot_sets(5, 2, 5, n_sets=1, phase_one_len=1)[0]
    assert one.slots == (1, 8, 13, 18, 23)
    net = stia2.stia2_network(2, 1, coherence=5, feedback_delay=2, seed=seed)
    proc = sample_network(net)
    for ss in sets + [one]:
        assert len(set(ss.blocks)) == len(ss.slots)
        for k, slot in enumerate(ss.slots, start=1):
            if k > ss.phase_one_len:
                assert proc.has_current_csit(slot)


def _check_solve_roundtrip(seed: int) -> None:
    rng = np.random.default_rng(seed)
    from .linalg import solve_square as solve

    for _ in range(200):
        n = int(rng.integers(1, 17))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) + 3 * np.eye(n)
        x0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b = a @ x0
        x = solve(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-10 * max(np.linalg.norm(b), 1.0)


def _check_czp_pattern(pattern=czp_pattern) -> None:
    """Pattern bands must match the closed-form union-of-runs index sets
    (takes the pattern factory as a parameter so a broken build is detectable)."""
    for a in range(1, 13):
        for b in range(1, a + 1):
            pat = pattern(a, b)
            prev = None
            for j in range(1, a + 1):
                rows = set(pat.rows(j))
                assert len(rows) == b, f"column {j} of ({a},{b}) has {len(rows)} nonzeros"
                if j <= b + 1:
                    expected = set(range(1, b - j + 2)) | set(range(a - j + 2, a + 1))
                    assert rows == expected, f"({a},{b}) column {j}: {sorted(rows)} != {sorted(expected)}"
                if prev is not None:
                    shifted = {((r - 2) % a) + 1 for r in prev}
                    assert rows == shifted, f"({a},{b}) column {j} is not a one-step cyclic shift"
                prev = rows


def _check_czp_alignment(seed: int) -> None:
    rng = np.random.default_rng(seed)
    for a, b in ((3, 2), (5, 2), (5, 3), (7, 3)):
        for _ in range(100):
            h_now = rng.standard_normal((b, a)) + 1j * rng.standard_normal((b, a))
            h_tgt = rng.standard_normal((b, a)) + 1j * rng.standard_normal((b, a))
            pre = czp_precoder(h_now, h_tgt)
            assert np.linalg.norm(h_now @ pre.matrix - h_tgt) <= 1e-9 * np.linalg.norm(h_tgt)
            assert rank_tol(pre.matrix) == a


def _check_scalar_ratio(seed: int) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(100):
        h_t = complex(rng.standard_normal(), rng.standard_normal())
        h_n = complex(rng.standard_normal() + 2.0, rng.standard_normal())
        assert abs(scalar_ratio_precoder(h_t, h_n) * h_n - h_t) <= 1e-12 * max(abs(h_t), 1.0)


def _stia2_smoke(A: int, B: int, seed: int, trials: int) -> None:
    for t in range(trials):
        res = stia2_trial(A, B, None, 2, seed, t)
        assert res["success"], f"stia2 ({A},{B}) trial {t} failed"
        assert res["max_residual"] <= 1e-8


def _check_stia2(seed: int) -> None:
    for a, b in ((2, 1), (3, 2), (5, 2), (4, 4), (3, 5)):
        _stia2_smoke(a, b, seed, trials=10)


def _check_stia2_alignment(seed: int) -> None:
    net = stia2.stia2_network(5, 2, seed=seed)
    cfg = stia2.stia_case(5, 2)
    proc = sample_network(net)
    payload = stia2.Stia2Payload.random(5, np.random.default_rng(seed))
    tr = stia2.run_stia_two_user(cfg, proc, stia2.schedule(cfg, net)[0], payload)
    assert stia2.alignment_gap(tr, proc, 1) <= 1e-9
    assert stia2.alignment_gap(tr, proc, 2) <= 1e-9


def _check_locality(seed: int) -> None:
    # two-user scheme
    net = stia2.stia2_network(3, 2, seed=seed)
    cfg = stia2.stia_case(3, 2)
    proc = sample_network(net)
    rec: list = []
    stia2.run_stia_two_user(cfg, proc, stia2.schedule(cfg, net)[0],
                            stia2.Stia2Payload.random(3, np.random.default_rng(seed)), recorder=rec)
    assert rec and all(acc.kind in ("matrix", "current", "ratio") for acc in rec)
    # retrospective scheme
    plan = ria.plan_ria(3)
    rnet = ria.ria_network(3, seed=seed)
    rproc = sample_network(rnet)
    rrec: list = []
    ria.run_ria(plan, rproc, ria.RiaPayload.random(3, np.random.default_rng(seed)), recorder=rrec)
    phase_ratio = [acc for acc in rrec if acc.kind == "ratio"]
    assert len(phase_ratio) == 3 * 2 * 2  # K phases x (K-1) transmitters x (K-1) ratios
    # MISO X scheme
    mcfg = misox.MisoxConfig(2, 3)
    mnet = misox.misox_network(mcfg, seed=seed)
    mproc = sample_network(mnet)
    mrec: list = []
    misox.run_misox(mcfg, mproc, misox.schedule(mcfg, mnet)[0],
                    misox.MisoxPayload.random(mcfg, np.random.default_rng(seed)), recorder=mrec)
    assert mrec


def _check_ria(seed: int) -> None:
    for k in (2, 3, 4):
        res = ria_trial(k, None, 2, seed, 0)
        assert res["success"], f"ria K={k} failed"
        assert Fraction(res["symbols"], res["slots"]) == ria.plateau(k)
    tr = ria.run_ria(ria.plan_ria(3), sample_network(ria.ria_network(3, seed=seed)),
                     ria.RiaPayload.random(3, np.random.default_rng(seed)))
    for item in tr.meta["side_info"]:
        assert abs(item["tx_value"] - item["rx_value"]) <= 1e-12 * max(1.0, abs(item["rx_value"]))


def _check_misox(seed: int) -> None:
    for m, n in ((2, 3), (3, 3), (2, 4)):
        res = misox_trial(m, n, None, 2, seed, 0)
        assert res["success"], f"misox ({m},{n}) failed"
        assert Fraction(res["symbols"], res["slots"]) == misox.plateau(misox.MisoxConfig(m, n))
    mcfg = misox.MisoxConfig(2, 3)
    mnet = misox.misox_network(mcfg, seed=seed)
    mproc = sample_network(mnet)
    tr = misox.run_misox(mcfg, mproc, misox.schedule(mcfg, mnet)[0],
                         misox.MisoxPayload.random(mcfg, np.random.default_rng(seed)))
    for j in range(1, 4):
        assert misox.interference_gap(tr, mproc, j) <= 1e-9


def _check_dof_golden(seed: int) -> None:
    assert dof.table1_row(5, 2).stia == Fraction(10, 3)
    assert dof.table1_row(5, 2).gak == Fraction(8, 3)
    assert dof.table1_row(5, 3).stia == Fraction(4)
    assert dof.table1_row(5, 3).gak == Fraction(66, 17)
    assert dof.table1_row(10, 11).stia == Fraction(40, 3)
    assert dof.table1_row(10, 11).gak == Fraction(66, 5)
    assert dof.theorem2_region(3, 0).dof == Fraction(5, 4)
    assert dof.theorem3_region(2, 3, 0).dof == Fraction(12, 5)


def _check_dof_regions(seed: int) -> None:
    for region, breakpoint in (
        (lambda lam: dof.theorem1_region(5, 2, lam), Fraction(1, 3)),
        (lambda lam: dof.theorem2_region(3, lam), Fraction(2, 8)),
        (lambda lam: dof.theorem3_region(2, 3, lam), Fraction(2, 5)),
        (lambda lam: dof.corollary1_region(5, 2, lam), Fraction(1, 3)),
    ):
        eps = Fraction(1, 10**9)
        for lam in (breakpoint, Fraction(1)):
            below = region(lam - eps).dof
            at = region(lam).dof
            above = region(lam + eps).dof
            assert abs(below - at) <= eps * 100 and abs(above - at) <= eps * 100
        grid = [Fraction(i, 20) for i in range(0, 31)]
        values = [region(lam).dof for lam in grid]
        assert all(x >= y for x, y in zip(values, values[1:]))


def _check_dof_asymptotics(seed: int) -> None:
    plateau1 = Fraction(10, 3)
    prev_gap = None
    for n in (1, 10, 1000, 10**6):
        gap = abs(plateau1 - dof.asymptotic_dof_t1(5, 2, n))
        if prev_gap is not None:
            assert gap < prev_gap
        prev_gap = gap
    assert abs(float(plateau1 - dof.asymptotic_dof_t1(5, 2, 10**6))) < 1e-5
    assert dof.asymptotic_dof_t3(2, 3, 1) == Fraction(32, 25)


VERIFY_SUITES: dict[str, list[tuple[str, callable]]] = {
    "channel": [
        ("block-constancy", _check_block_constancy),
        ("determinism", _check_determinism),
        ("magnitude-bounds", _check_magnitude_bounds),
        ("slot-schedule", _check_schedule),
    ],
    "linalg": [
        ("solve-roundtrip", _check_solve_roundtrip),
    ],
    "precoding": [
        ("zero-pattern", lambda seed: _check_czp_pattern()),
        ("alignment-and-rank", _check_czp_alignment),
        ("scalar-ratio", _check_scalar_ratio),
    ],
    "stia2": [
        ("decodability", _check_stia2),
        ("alignment-gap", _check_stia2_alignment),
    ],
    "ria": [
        ("decodability-and-side-info", _check_ria),
    ],
    "misox": [
        ("decodability-and-interference", _check_misox),
    ],
    "locality": [
        ("view-audit", _check_locality),
    ],
    "dof": [
        ("golden-values", _check_dof_golden),
        ("region-shape", _check_dof_regions),
        ("asymptotics", _check_dof_asymptotics),
    ],
}


def cmd_verify(args) -> int:
    suites = list(VERIFY_SUITES) if args.suite == "all" else [args.suite]
    unknown = [s for s in suites if s not in VERIFY_SUITES]
    if unknown:
        raise ConfigurationError(f"unknown suite {unknown[0]!r}; choose from {sorted(VERIFY_SUITES)}")
    failures = 0
    for suite in suites:
        for name, check in VERIFY_SUITES[suite]:
            label = f"{suite}:{name}"
            try:
                check(args.seed)
            except Exception as exc:  # noqa: BLE001 - report and keep going
                failures += 1
                print(f"FAIL {label}: {exc}")
            else:
                print(f"PASS {label}")
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xalign",
        description="Interference-alignment simulators for X networks with local delayed CSIT",
    )
    parser.add_argument("--config", help="JSON file supplying defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True)

    default_seed = int(os.environ.get(ENV_SEED, "0"))

    def add_common(p):
        p.add_argument("--seed", type=int, default=default_seed)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write here instead of stdout")

    def add_dims(p):
        p.add_argument("--scheme", choices=("stia2", "ria", "misox"), required=True)
        p.add_argument("--A", type=int)
        p.add_argument("--B", type=int)
        p.add_argument("--K", type=int)
        p.add_argument("--M", type=int)
        p.add_argument("--N", type=int)

    sim = sub.add_parser("simulate", help="run seeded scheme executions and aggregate decode reports")
    add_dims(sim)
    sim.add_argument("--trials", type=int, default=100)
    sim.add_argument("--coherence", type=int, help="override T_c (default: scheme length)")
    sim.add_argument("--feedback-delay", type=int, default=2, dest="feedback_delay")
    sim.add_argument("--workers", type=int, default=1)
    add_common(sim)
    sim.set_defaults(func=cmd_simulate)

    trd = sub.add_parser("tradeoff", help="sample achievable regions on a lambda grid")
    add_dims(trd)
    trd.add_argument("--grid", default="0,1/4,1/2,3/4,1", help="comma-separated exact lambdas")
    add_common(trd)
    trd.set_defaults(func=cmd_tradeoff)

    tab = sub.add_parser("table", help="two-user sum-DoF comparison rows")
    tab.add_argument("--A-list", required=True, dest="A_list")
    tab.add_argument("--B-list", required=True, dest="B_list")
    add_common(tab)
    tab.set_defaults(func=cmd_table)

    ver = sub.add_parser("verify", help="run the invariant suite with fixed seeds")
    ver.add_argument("--suite", default="all",
                     help=f"one of: all, {', '.join(VERIFY_SUITES)}")
    ver.add_argument("--seed", type=int, default=default_seed)
    ver.set_defaults(func=cmd_verify)
    return parser


COMMANDS = ("simulate", "tradeoff", "table", "verify")


def _apply_config_file(argv: list[str]) -> list[str]:
    """Expand --config PATH into flag tokens placed right after the subcommand
    so explicitly passed flags still win (argparse keeps the last value)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ConfigurationError("--config requires a path")
    with open(argv[idx + 1]) as fh:
        overrides = json.load(fh)
    rest = argv[:idx] + argv[idx + 2:]
    tokens = []
    for key, value in overrides.items():
        tokens.extend([f"--{key.replace('_', '-')}", str(value)])
    for pos, tok in enumerate(rest):
        if tok in COMMANDS:
            return rest[: pos + 1] + tokens + rest[pos + 1:]
    raise ConfigurationError("--config needs a subcommand on the command line")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    except (ConfigurationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ConfigurationError, SchedulingError, UnsupportedCaseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
