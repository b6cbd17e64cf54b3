"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

from __future__ import annotations

import io
import json
import math
import os
import random
import subprocess
import sys
import time

import mpmath
import pytest

from exprgen import CORPUS
from test_expr import MALFORMED, derivative_fd_failures, generated_smooth_functions
from hhfrac.cli import SOUND_THEOREMS, draw_instance, main
from hhfrac.convexity import certify_m_convex, defect_at
from hhfrac.expr import ParseError, parse
from hhfrac.fracint import FracParams, moment_as_rl, moment_endpoints, rl_left, rl_right, t_moment
from hhfrac.specfun import gamma
from hhfrac.theorems import (
    DISCREPANCY_TAG,
    HYPOTHESES_UNMET,
    VERIFIED,
    VIOLATED,
    check_hh_classical,
    check_lemma_1_1,
    check_thm_1_1,
    check_thm_1_2,
    check_thm_2_1,
    check_thm_2_3,
    check_thm_3_2,
    run_proof_fact_suite,
)

ALPHAS = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
FUZZ_TRIALS = 10_000


def run_cli(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_criterion_1_identity_suite(acceptance_line):
    start = time.perf_counter()
    worst = 0.0
    for text in CORPUS:
        for alpha in ALPHAS:
            r = check_lemma_1_1(text, 0.0, 1.0, alpha)
            worst = max(worst, abs(r.lhs - r.rhs))
    probe = check_lemma_1_1("x^2", 0.0, 1.0, 0.5)
    elapsed = time.perf_counter() - start
    ok = (
        worst <= 1e-8
        and abs(probe.lhs - 2 / 15) <= 1e-9
        and abs(probe.rhs - 2 / 15) <= 1e-9
        and elapsed < 5.0
    )
    acceptance_line(1, ok, f"max residual {worst:.3g} over {len(CORPUS)}x{len(ALPHAS)}, "
                           f"x^2 sides {probe.lhs:.12f}/{probe.rhs:.12f}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_proof_facts(acceptance_line):
    start = time.perf_counter()
    alphas = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0]
    alpha1s = [0.25, 0.5, 0.75, 1.0]
    reports = run_proof_fact_suite(alphas, alpha1s)
    elapsed = time.perf_counter() - start
    core = [r for r in reports if r.inputs["fact"] in ("i", "ii", "iii", "iv", "v", "vii", "vi-beta")]
    core_ok = all(r.status == VERIFIED for r in core)
    sym = [r for r in reports if r.inputs["fact"] == "vi-sym"]
    diag_ok = all(r.status == VERIFIED for r in sym if r.inputs["alpha"] == r.inputs["alpha1"])
    off = [r for r in sym if r.inputs["alpha"] != r.inputs["alpha1"]]
    off_ok = all(r.status == VIOLATED and abs(r.lhs - r.rhs) > 1e-10 for r in off)
    vii_count = sum(1 for r in reports if r.inputs["fact"] == "vii")
    ok = core_ok and diag_ok and off_ok and vii_count == 5 and elapsed < 10.0
    acceptance_line(2, ok, f"{len(core)} unconditional facts pass={core_ok}, diagonal symmetry={diag_ok}, "
                           f"{len(off)} off-diagonal asymmetries nonzero={off_ok}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_reduction_coherence(acceptance_line):
    worst = 0.0
    a, b = 0.25, 1.5
    for text in CORPUS:
        for m in (1.0, 0.75):
            r11 = check_thm_1_1(text, a, b, m)
            r21 = check_thm_2_1(text, a, b, m, 1.0)
            assert r11.status == VERIFIED and r21.status == VERIFIED
            worst = max(worst, abs(r11.lhs - r21.lhs), abs(r11.rhs - r21.rhs))
            ra = check_thm_2_1(text, a, b, m, 1.0, side="a")
            rb = check_thm_2_1(text, a, b, m, 1.0, side="b")
            f = parse(text)
            first = 0.5 * (f(a) + m * f(b / m))
            second = 0.5 * (f(b) + m * f(a / m))
            worst = max(worst, abs(ra.rhs - first), abs(rb.rhs - second), abs(ra.lhs - r11.lhs), abs(rb.lhs - r11.lhs))
            r12 = check_thm_1_2(text, a, b, m)
            r23 = check_thm_2_3(text, a, b, m, 1.0)
            assert r12.status == VERIFIED and r23.status == VERIFIED
            worst = max(worst, abs(r23.lhs / 2 - r12.lhs), abs(r23.rhs / 2 - r12.rhs))
    ok = worst <= 1e-9
    acceptance_line(3, ok, f"max disagreement {worst:.3g} at alpha = 1 over {len(CORPUS)} functions x m in {{1, 0.75}}")
    assert ok


def test_criterion_4_closed_forms(acceptance_line):
    got = rl_left(parse("x^2"), FracParams(0.5, 0.0, 1.0), 1.0)
    err_power = abs(got - 16 / (15 * math.sqrt(math.pi)))
    rng = random.Random(4)
    worst = 0.0
    for _ in range(20):
        c = rng.uniform(0.1, 5.0)
        a = rng.uniform(0.0, 2.0)
        b = a + rng.uniform(0.05, 3.0)
        alpha = rng.uniform(0.05, 3.0)
        p = FracParams(alpha, a, b)
        expected = c * (b - a) ** alpha / gamma(alpha + 1).value
        f = parse(repr(c))
        worst = max(worst, abs(rl_left(f, p, b) - expected), abs(rl_right(f, p, a) - expected))
    ok = err_power <= 1e-9 and worst <= 1e-10
    acceptance_line(4, ok, f"x^2 order 1/2 error {err_power:.3g}; constant formula max error {worst:.3g} on 20 draws")
    assert ok


def _mp_moment(text: str, c: float, d: float, alpha: float) -> float:
    # smooth form of int_0^1 t^(alpha-1) f(c + t(d - c)) dt in 30-digit arithmetic
    mpmath.mp.dps = 30
    fn = eval("lambda x: " + text.replace("^", "**").replace("exp", "mpmath.exp"))  # fuzz family only
    v = mpmath.quad(lambda u: fn(c + u ** (1 / mpmath.mpf(alpha)) * (d - c)), [0, 1]) / alpha
    return float(v)


def test_criterion_5_cross_oracle(acceptance_line):
    instances = 0
    worst_rl = 0.0
    worst_mp = 0.0
    trial = 0
    while instances < 50:
        inst = draw_instance(99, trial)
        trial += 1
        p = inst.params
        a, b, m, alpha = p["a"], p["b"], p["m"], p["alpha"]
        f = parse(inst.function_text)
        if not (m * b != a and m * a != b and b > a):
            continue
        if not certify_m_convex(f, b, m, grid_n=32).holds:
            continue
        instances += 1
        for o in "ABCD":
            tm = t_moment(f, a, b, m, alpha, o)
            value, _ = moment_as_rl(f, a, b, m, alpha, o)
            scale = max(1.0, abs(tm))
            worst_rl = max(worst_rl, abs(tm - value) / scale)
            if instances <= 15:
                c, d = moment_endpoints(a, b, m, o)
                worst_mp = max(worst_mp, abs(tm - _mp_moment(inst.function_text, c, d, alpha)) / scale)
    ok = worst_rl <= 1e-8 and worst_mp <= 1e-8
    acceptance_line(5, ok, f"50 certified instances x 4 orientations: moment vs corrected RL {worst_rl:.3g}, "
                           f"vs 30-digit oracle (15 instances) {worst_mp:.3g}")
    assert ok


def test_criterion_6_fuzz_soundness(acceptance_line):
    start = time.perf_counter()
    code, text = run_cli("fuzz", "--trials", str(FUZZ_TRIALS), "--seed", "0", "--format", "json-lines")
    elapsed = time.perf_counter() - start
    rows = [json.loads(line) for line in text.splitlines()]
    counts = {r["theorem_id"]: r for r in rows if r["kind"] == "counts"}
    sound_violations = sum(counts[t]["violated"] for t in SOUND_THEOREMS)
    violated = [r for r in rows if r["kind"] == "violated"]
    untagged = [r for r in violated if DISCREPANCY_TAG not in r["notes"] or not r["replay"].startswith("hhfrac check")]
    certified = sum(counts[t]["verified"] + counts[t]["violated"] for t in counts)
    candidates = sum(counts[t]["violated"] for t in counts if t not in SOUND_THEOREMS)
    ok = sound_violations == 0 and not untagged and elapsed < 300.0 and code in (0, 4)
    acceptance_line(6, ok, f"{FUZZ_TRIALS} trials in {elapsed:.1f}s: {certified} certified checks, "
                           f"{sound_violations} violations of sound results, {candidates} discrepancy candidates "
                           f"({len(untagged)} missing tag/replay), exit {code}")
    assert ok


def test_criterion_7_hypothesis_gating(acceptance_line):
    square = check_thm_3_2("x^2", 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    ok = square.status == HYPOTHESES_UNMET
    gated = {
        "HH": check_hh_classical("-x^2", 0.0, 2.0),
        "T1_1": check_thm_1_1("-x^2", 0.0, 2.0, 1.0),
        "T1_2": check_thm_1_2("-x^2", 0.5, 2.0, 0.8),
        "T2_1": check_thm_2_1("-x^2", 0.0, 2.0, 0.7, 0.5),
        "T2_3": check_thm_2_3("-x^2", 0.5, 2.0, 0.8, 1.5),
    }
    f = parse("-x^2")
    for name, r in gated.items():
        ok = ok and r.status == HYPOTHESES_UNMET
        certs = [c for label, c in r.hypotheses if "m-convex" in label or label == "convex"]
        ok = ok and len(certs) == 1 and not certs[0].holds
        m = r.inputs.get("m", 1.0)
        ok = ok and defect_at(f, *certs[0].witness, m) > certs[0].tolerance
    acceptance_line(7, ok, "x^2 under T3_2 and -x^2 under HH, T1_1, T1_2, T2_1, T2_3 all hypotheses_unmet "
                           "with re-verified witnesses")
    assert ok


def test_criterion_8_determinism(acceptance_line):
    fuzz = [run_cli("fuzz", "--trials", "150", "--seed", "7", "--format", fmt) for fmt in ("csv", "csv")]
    sweep = [run_cli("sweep", "--theorem", "T2_2", "--f", "x^2", "--alpha", "0.1:1:0.1", "--q", "1,2",
                     "--format", "csv") for _ in range(2)]
    parallel = run_cli("fuzz", "--trials", "150", "--seed", "7", "--format", "csv", "--jobs", "2")
    env = dict(os.environ)
    outs = []
    for hash_seed in ("1", "2"):
        env["PYTHONHASHSEED"] = hash_seed
        proc = subprocess.run([sys.executable, "-m", "hhfrac", "fuzz", "--trials", "40", "--seed", "3"],
                              capture_output=True, env=env, check=False)
        outs.append(proc.stdout)
    ok = fuzz[0] == fuzz[1] == parallel and sweep[0] == sweep[1] and outs[0] == outs[1] and outs[0]
    acceptance_line(8, ok, "fuzz (serial, 2 workers, separate processes) and sweep outputs byte-identical")
    assert ok


def test_criterion_9_parser(acceptance_line):
    functions = generated_smooth_functions()
    failures = derivative_fd_failures(functions)
    offsets_ok = 0
    for text, offset in MALFORMED[:10]:
        try:
            parse(text)
        except ParseError as exc:
            offsets_ok += exc.offset == offset
    ok = len(functions) == 50 and not failures and offsets_ok == 10
    acceptance_line(9, ok, f"{len(functions)} generated expressions, {len(failures)} derivative mismatches; "
                           f"{offsets_ok}/10 malformed inputs at the right byte offset")
    assert ok
