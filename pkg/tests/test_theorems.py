from __future__ import annotations

import math

import pytest

from hhfrac.theorems import (
    DISCREPANCY_TAG,
    HYPOTHESES_UNMET,
    INCONCLUSIVE,
    THEOREMS,
    VERIFIED,
    VIOLATED,
    CheckSettings,
    PreconditionError,
    Workspace,
    check_cor_2_1,
    check_cor_3_1,
    check_cor_3_2,
    check_hh_classical,
    check_lemma_1_1,
    check_thm_1_1,
    check_thm_1_2,
    check_thm_2_1,
    check_thm_2_2,
    check_thm_2_3,
    check_thm_3_1,
    check_thm_3_2,
    moment_asymmetry,
    run_proof_fact_suite,
)

SQRT2 = math.sqrt(2.0)


def test_classical_hermite_hadamard():
    r = check_hh_classical("x^2", 0.0, 1.0)
    assert r.status == VERIFIED
    assert (r.lhs, r.rhs) == pytest.approx((0.25, 1 / 3))
    assert check_hh_classical("-x^2", 0.0, 2.0).status == HYPOTHESES_UNMET


def test_classical_on_interval_away_from_origin():
    assert check_hh_classical("-ln(x)", 1.0, 4.0).status == VERIFIED


def test_thm_1_1_square():
    r = check_thm_1_1("x^2", 0.0, 1.0, 1.0)
    assert r.status == VERIFIED
    assert (r.lhs, r.rhs) == pytest.approx((1 / 3, 1 / 2))


def test_thm_1_2_needs_nondegenerate_interval():
    with pytest.raises(PreconditionError, match="m"):
        check_thm_1_2("x^2", 0.6, 1.0, 0.5)
    assert check_thm_1_2("x^2", 0.2, 1.0, 0.5).status == VERIFIED


@pytest.mark.parametrize("call", [
    lambda: check_thm_1_1("x^2", -1.0, 1.0, 1.0),
    lambda: check_thm_1_1("x^2", 1.0, 1.0, 1.0),
    lambda: check_thm_1_1("x^2", 0.0, 1.0, 0.0),
    lambda: check_thm_2_1("x^2", 0.0, 1.0, 1.0, 0.0),
    lambda: check_thm_3_1("x^2", 0.0, 1.0, 1.0, 0.5, 1.5),
    lambda: check_cor_3_1("x^2", 0.0, 1.0, 1.0, 1.5),
    lambda: check_lemma_1_1("abs(x - 0.5)", 0.0, 1.0, 0.5),
])
def test_preconditions_are_named(call):
    with pytest.raises(PreconditionError):
        call()


def test_trapezoid_identity_square():
    r = check_lemma_1_1("x^2", 0.0, 1.0, 0.5)
    assert r.status == VERIFIED
    assert r.lhs == pytest.approx(2 / 15, abs=1e-9)
    assert r.rhs == pytest.approx(2 / 15, abs=1e-9)
    assert r.margin <= 1e-9


def test_trapezoid_identity_linear_is_zero():
    r = check_lemma_1_1("3*x - 1", 0.5, 2.0, 0.8)
    assert abs(r.lhs) < 1e-12 and abs(r.rhs) < 1e-12


def test_thm_2_1_square():
    r = check_thm_2_1("x^2", 0.0, 1.0, 1.0, 0.5)
    assert r.status == VERIFIED
    assert r.margin == pytest.approx(4 / 3 - 16 / 15, abs=1e-9)
    assert any("side b" in n for n in r.notes)


def test_thm_2_1_sides_can_be_requested():
    ra = check_thm_2_1("x^2", 0.0, 1.0, 1.0, 0.5, side="a")
    rb = check_thm_2_1("x^2", 0.0, 1.0, 1.0, 0.5, side="b")
    assert ra.theorem_id == "T2_1a" and rb.theorem_id == "T2_1b"
    assert ra.lhs == pytest.approx(16 / 15, abs=1e-9)
    assert rb.lhs == pytest.approx(2 / 5, abs=1e-9)
    assert rb.rhs == pytest.approx(2 / 3, abs=1e-12)


def test_thm_2_1_notes_origin_condition():
    r = check_thm_2_1("x^2 + 1", 0.0, 1.0, 1.0, 0.5)
    assert any("f(0) <= 0" in n and "not met" in n for n in r.notes)


def test_thm_2_1_gates_on_m_convexity():
    r = check_thm_2_1("-x^2", 0.0, 2.0, 1.0, 0.5)
    assert r.status == HYPOTHESES_UNMET
    assert math.isnan(r.lhs)


def test_thm_2_2_examples():
    r = check_thm_2_2("x^2", 0.0, 1.0, 1.0, 1.0, 1.0)
    assert r.status == VERIFIED
    assert (r.lhs, r.rhs) == pytest.approx((1 / 6, 1 / 4))
    r = check_thm_2_2("x^2", 0.0, 1.0, 1.0, 0.5, 2.0)
    assert r.lhs == pytest.approx(2 / 15, abs=1e-9)
    expected = 0.5 * SQRT2 * (SQRT2 - 1) / (SQRT2 * 1.5) * 2.0
    assert r.rhs == pytest.approx(expected, rel=1e-12)
    assert r.rhs == pytest.approx(0.27614237, abs=1e-8)


def test_thm_2_2_linear():
    r = check_thm_2_2("2*x + 1", 0.0, 1.0, 1.0, 0.7, 1.5)
    assert r.status == VERIFIED
    assert r.lhs == pytest.approx(0.0, abs=1e-12) and r.rhs >= 0


def test_cor_2_1_examples():
    r = check_cor_2_1("x^2", 0.0, 1.0, 1.0, 1.0, 2.0)
    assert r.status == VERIFIED
    assert r.rhs == pytest.approx(0.5 * math.sqrt(1 / 3) * SQRT2, rel=1e-12)
    r = check_cor_2_1("x^2", 0.0, 1.0, 1.0, 0.5, 2.0)
    assert r.rhs == pytest.approx(0.5, rel=1e-12)
    assert r.lhs == pytest.approx(2 / 15, abs=1e-9)
    with pytest.raises(PreconditionError, match="q"):
        check_cor_2_1("x^2", 0.0, 1.0, 1.0, 0.5, 1.0)


def test_thm_2_3_square():
    r = check_thm_2_3("x^2", 0.0, 1.0, 1.0, 1.0)
    assert r.status == VERIFIED
    # (f(0) + f(1)) / 1
    assert (r.lhs, r.rhs) == pytest.approx((2 / 3, 1.0))
    assert any("agreement residual" in n for n in r.notes)


@pytest.mark.parametrize("alpha", [0.4, 1.0, 1.7])
def test_thm_2_3_constant_is_tight(alpha):
    r = check_thm_2_3("3", 0.2, 1.0, 1.0, alpha)
    assert r.status == VERIFIED
    assert r.lhs == pytest.approx(6 / alpha, rel=1e-10)
    assert r.margin == pytest.approx(0.0, abs=1e-9)


def test_thm_2_3_linear_through_origin_is_tight():
    r = check_thm_2_3("2*x", 0.5, 1.5, 1.0, 0.6)
    assert r.margin == pytest.approx(0.0, abs=1e-9)


def test_thm_2_3_reduces_to_thm_1_2():
    r23 = check_thm_2_3("exp(x) - 1", 0.3, 1.2, 0.7, 1.0)
    r12 = check_thm_1_2("exp(x) - 1", 0.3, 1.2, 0.7)
    assert r23.lhs / 2 == pytest.approx(r12.lhs, abs=1e-9)
    assert r23.rhs / 2 == pytest.approx(r12.rhs, abs=1e-9)


def test_thm_3_1_at_alpha1_one_matches_thm_2_1():
    r31 = check_thm_3_1("x^3", 0.2, 1.0, 0.8, 0.6, 1.0)
    r21 = check_thm_2_1("x^3", 0.2, 1.0, 0.8, 0.6)
    assert r31.status == VERIFIED
    assert r31.rhs == pytest.approx(r21.rhs, abs=1e-12)
    gap = [n for n in r31.notes if n.startswith("alpha1=1 agreement")]
    assert gap and float(gap[0].split(": ")[1]) <= 1e-12


def test_thm_3_1_constant_is_tight():
    r = check_thm_3_1("2", 0.0, 1.0, 1.0, 0.5, 1.0)
    assert r.margin == pytest.approx(0.0, abs=1e-9)


def test_thm_3_1_probe_square_fails_the_class():
    # x^2 is not (1/2, 1)-convex, so the probe never reaches the bound
    assert check_thm_3_1("x^2", 0.0, 1.0, 1.0, 0.5, 0.5).status == HYPOTHESES_UNMET
    assert check_cor_3_1("x^2", 0.0, 1.0, 1.0, 0.5).status == HYPOTHESES_UNMET


def test_thm_3_2_examples():
    r = check_thm_3_2("4*x - x^2", 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    assert r.status == VERIFIED
    assert r.lhs == pytest.approx(1 / 6, abs=1e-9)
    # (b - a)/2 * [(3/12)(4 - 2) + (1/2)(2)(1/2)]
    assert r.rhs == pytest.approx(0.5, rel=1e-12)
    r = check_thm_3_2("x^2", 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    assert r.status == HYPOTHESES_UNMET
    assert r.hypotheses[0][0] == "|f'| decreasing"


def test_thm_3_2_linear_decreasing():
    r = check_thm_3_2("2 - x", 0.0, 1.0, 1.0, 0.5, 0.7, 1.0)
    assert r.status == VERIFIED
    assert r.lhs == pytest.approx(0.0, abs=1e-12)


def test_thm_3_2_records_moment_asymmetry():
    r = check_thm_3_2("4*x - x^2", 0.0, 1.0, 1.0, 0.5, 0.9, 1.0)
    note = next(n for n in r.notes if n.startswith("D(alpha, alpha1)="))
    assert float(note.split("=")[1].split()[0]) > 1e-4


def test_cor_3_2_example():
    r = check_cor_3_2("4*x - x^2", 0.0, 1.0, 1.0, 1.0, 2.0)
    assert r.status == VERIFIED
    assert r.rhs == pytest.approx(1 / SQRT2, rel=1e-12)


def test_moment_asymmetry_vanishes_on_diagonal():
    assert moment_asymmetry(0.5, 0.5)["D"] <= 1e-9
    off = moment_asymmetry(0.5, 0.9)
    assert off["D"] > 1e-3
    assert off["route_gap"] <= 1e-10


def test_violations_carry_replay_lines():
    # a negative tolerance forces a violation to exercise the reporting path
    s = CheckSettings(check_tol=-10.0)
    r = check_thm_1_1("x^2", 0.0, 1.0, 1.0, s=s)
    assert r.status == VIOLATED
    replay = next(n for n in r.notes if n.startswith("replay: "))
    assert "--theorem T1_1" in replay and "--f 'x^2'" in replay
    assert DISCREPANCY_TAG not in r.notes
    r = check_thm_3_2("4*x - x^2", 0.0, 1.0, 1.0, 1.0, 1.0, 2.0, s=s)
    assert r.status == VIOLATED and DISCREPANCY_TAG in r.notes


def test_overflow_is_inconclusive():
    r = check_thm_1_1("exp(400*x)", 0.0, 1.0, 0.3)
    assert r.status == INCONCLUSIVE
    assert any("EvaluationError" in n for n in r.notes)


def test_workspace_reuses_certificates():
    ws = Workspace()
    check_thm_1_1("x^2", 0.0, 1.0, 0.5, s=ws)
    before = len(ws._memo)
    check_thm_2_1("x^2", 0.0, 1.0, 0.5, 0.5, s=ws)
    r = check_thm_2_1("x^2", 0.0, 1.0, 0.5, 0.5, s=ws)
    assert r.status == VERIFIED
    assert len(ws._memo) > before


def test_report_serialises():
    d = check_thm_2_1("x^2", 0.0, 1.0, 1.0, 0.5).to_dict()
    assert d["status"] == VERIFIED and d["inputs"]["alpha"] == 0.5
    assert d["hypotheses"][1]["holds"] is True
    d = check_thm_2_1("-x^2", 0.0, 1.0, 1.0, 0.5).to_dict()
    assert d["lhs"] is None


def test_registry_covers_cli_ids():
    assert set(THEOREMS) >= {"HH", "T1_1", "T1_2", "L1_1", "T2_1", "T2_2", "C2_1", "T2_3",
                             "T3_1", "C3_1", "T3_2", "C3_2"}


def test_fact_suite_values():
    reports = run_proof_fact_suite([1.0], [0.5, 1.0])
    by = {(r.inputs["fact"], r.inputs.get("alpha1")): r for r in reports}
    assert by[("v", None)].lhs == pytest.approx(0.5, abs=1e-12)
    assert by[("i", None)].rhs == pytest.approx(1 / 12, abs=1e-15)
    assert by[("vi-sym", 1.0)].status == VERIFIED
    assert by[("vi-sym", 0.5)].status == VIOLATED
    assert all(r.status == VERIFIED for r in reports if r.inputs["fact"] != "vi-sym")
