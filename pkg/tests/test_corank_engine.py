import pytest
from hypothesis import given, settings, strategies as st

from normfinsler import tables
from normfinsler.corank_engine import (
    CASE_I, CASE_III, M, RULES, U, _build_label, enumerate_seeds, fmt, init_case, run_corank_one,
    run_seed,
)
from normfinsler.exact_arith import QExt, norm_sq


def seed(system, label):
    rs = _build_label(system)
    for s in enumerate_seeds(rs):
        if s.label == label:
            return s
    raise LookupError(label)


def test_f4_has_five_case_three_classes():
    seeds = enumerate_seeds(_build_label("F4"))
    assert len(seeds) == 5 and all(s.kind == CASE_III for s in seeds)


def test_projected_seed_roots():
    st_ = init_case(seed("F4", "(e1+e2, -e2)"))
    assert fmt(st_.seed_key) == "(2/5, -1/5, 0, 0)"
    assert norm_sq(st_.seed_key) == QExt(1) / 5

    s = seed("D4", "(e1+e2, -e1+e2)")
    assert fmt(init_case(s).seed_key) == "(0, 1, 0, 0)"
    assert fmt(s.z) == "(2, 0, 0, 0)"


def test_case_one_seed_has_no_undecided_planes():
    st_ = init_case(seed("A3", "k = A2+R"))
    assert st_.seed.kind == CASE_I
    assert all(st_.label[g] != U for g in st_.planes)
    assert any(st_.label[g] == M for g in st_.planes)


@pytest.mark.parametrize("system,label,status,rule,h_type", [
    ("F4", "(e1+e2, e2)", "Contradiction", "D", None),
    ("D4", "(e1+e2, -e1+e2)", "Saturated", None, "B3"),
    ("B3", "(e1+e2, -e3)", "Saturated", None, "G2"),
    ("B4", "(e1+e2, -e3-e4)", "Saturated", None, "B3"),
    ("A4", "(e1-e2, e3-e4)", "Saturated", None, "B2+R"),
    ("C4", "(e1+e2, -2e3)", "Contradiction", "F", None),
    ("C3", "(2e1, e1+e2)", "Contradiction", "D", None),
    ("B2", "(e1+e2, -e2)", "Saturated", None, "A1"),
])
def test_seed_verdicts(system, label, status, rule, h_type):
    _, v = run_seed(seed(system, label))
    assert (v.status, v.rule, v.derived_h_type) == (status, rule, h_type)


def test_c4_flat_splitting_uses_the_two_long_roots():
    _, v = run_seed(seed("C4", "(e1+e2, -2e3)"))
    assert {fmt(w) for w in v.witness} == {"(2, 0, 0, 0)", "(0, 2, 0, 0)"}


def test_contradictions_end_their_trace():
    for s in enumerate_seeds(_build_label("F4")):
        st_, v = run_seed(s)
        assert st_.trace[0]["rule"] == "init"
        assert st_.trace[-1]["rule"] == v.rule
        assert st_.trace[-1]["conclusion"].startswith("contradiction")


@pytest.mark.parametrize("system", ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2",
                                    "A1+A1", "A2+A1", "C2+A1", "C3+A1"])
def test_tables_match_embedded_outcomes(system):
    table = run_corank_one(system)
    found = {r.seed.label: (r.outcome, r.coset, r.k_bound) for r in table.rows}
    assert found == tables.CORANK_ONE_OUTCOMES[system]


def test_f4_is_all_contradictions():
    table = run_corank_one("F4")
    assert table.rows and all(r.outcome.startswith("Contradiction") for r in table.rows)
    assert table.survivors() == []


def test_oracle_flags():
    rows = {r.seed.label: r for r in run_corank_one("B2").rows}
    berger = rows["(e1+e2, -e2)"]
    assert berger.needs_oracle and berger.coset == "berger_sp2"
    assert not berger.oracle.get("contradiction")
    c3 = {r.seed.label: r for r in run_corank_one("C3").rows}["(e1+e2, -2e1)"]
    assert c3.needs_oracle and c3.outcome == "Contradiction(oracle)"


def test_reports_are_deterministic():
    a = run_corank_one("B3").to_json(with_trace=True)
    b = run_corank_one("B3").to_json(with_trace=True)
    assert a == b


_SEEDS = [(sys_, s) for sys_ in ("A3", "B3", "C3", "D4", "G2", "A2+A1") for s in enumerate_seeds(_build_label(sys_))]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(_SEEDS), st.permutations(RULES))
def test_verdict_does_not_depend_on_rule_order(item, order):
    _, s = item
    _, base = run_seed(s)
    _, shuffled = run_seed(s, list(order))
    assert (shuffled.status, shuffled.derived_h_type) == (base.status, base.derived_h_type)
