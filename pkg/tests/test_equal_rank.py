import pytest
from hypothesis import given, settings, strategies as st

from normfinsler.equal_rank import (
    EqualRankCandidate, classify_equal_rank, expected_survivors, lemma1_part1, lemma1_part2,
    revalidate, run_filters, survivor_types, symmetric_excess_rank,
)
from normfinsler.exact_arith import ExactVector, QExt, norm_sq
from normfinsler.root_systems import build, closed_subsystems, closure, reflect
from normfinsler.tables import _canon

V = ExactVector


def cand(rs, generators):
    return EqualRankCandidate(rs, closure(rs, [V(g) for g in generators]))


def test_short_a1_in_b2_fails_with_the_orthogonal_long_pair():
    v = lemma1_part1(cand(build("B", 2), [(1, 0)]))
    assert v.failing_rule == "lemma1_part1"
    assert set(v.witness) == {V((1, 1)), V((1, -1))}


def test_long_a1_pair_in_b2_passes():
    c = cand(build("B", 2), [(1, 1), (1, -1)])
    assert c.h_label == "A1+A1" and run_filters(c).passed


def test_a2_plus_line_in_a3_passes():
    c = cand(build("A", 3), [(1, -1, 0, 0), (0, 1, -1, 0)])
    assert c.h_label == "A2+R" and run_filters(c).passed


def test_torus_in_a2_fails_second_filter():
    v = lemma1_part2(cand(build("A", 2), []))
    assert v.failing_rule == "lemma1_part2"


def test_d4_in_f4_fails_on_e1_and_half_sum():
    c = cand(build("F4"), [(1, 1, 0, 0), (1, -1, 0, 0), (0, 0, 1, 1), (0, 0, 1, -1), (0, 1, -1, 0)])
    assert c.h_label == "D4"
    v = lemma1_part2(c)
    half = QExt(1) / 2
    assert set(v.witness) == {V((1, 0, 0, 0)), V((half, half, half, half))}


def test_long_a2_in_g2_is_exempt():
    g2 = build("G2")
    c = EqualRankCandidate(g2, frozenset(r for r in g2.roots if norm_sq(r) == QExt(3)))
    assert c.h_label == "A2"
    assert lemma1_part2(c).passed and run_filters(c).passed


def test_symmetric_filter_examples():
    d4 = build("D", 4)
    assert not symmetric_excess_rank(cand(d4, [(0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 1, 1)])).passed
    assert symmetric_excess_rank(cand(build("B", 3), [(1, -1, 0), (0, 1, -1), (0, 1, 1)])).passed
    b4 = cand(build("F4"), [(1, 0, 0, 0), (0, 1, -1, 0), (0, 0, 1, -1), (0, 0, 0, 1)])
    assert b4.h_label == "B4" and symmetric_excess_rank(b4).passed


@pytest.mark.parametrize("label,rank,want", [
    ("A", 1, ["R"]), ("A", 2, ["A1+R"]), ("A", 3, ["A2+R"]), ("A", 4, ["A3+R"]),
    ("B", 2, ["A1+A1", "A1+R"]), ("B", 3, ["A3"]), ("B", 4, ["D4"]),
    ("C", 3, ["A1+B2", "B2+R"]), ("C", 4, ["A1+C3", "C3+R"]),
    ("D", 4, []), ("G2", 2, ["A2"]), ("F4", 4, ["B4"]),
])
def test_survivors(label, rank, want):
    report = classify_equal_rank(label, rank)
    assert survivor_types(report) == sorted(_canon(h) for h in want)
    assert survivor_types(report) == expected_survivors(label, rank)


def test_c3_survivors_are_named():
    names = {c.h_type: c.coset_space for c in classify_equal_rank("C", 3).survivors}
    assert names["A1+B2"].startswith("HP^2") and names["B2+R"].startswith("CP^5")


def test_e_series_is_gated():
    with pytest.raises(ValueError):
        classify_equal_rank("E6")


@pytest.mark.parametrize("label,rank", [("A", 3), ("B", 3), ("C", 3), ("G2", None), ("B", 2)])
def test_every_fail_witness_revalidates(label, rank):
    rs = build(label, rank)
    for cls in closed_subsystems(rs):
        if len(cls.roots) == len(rs.roots):
            continue
        c = EqualRankCandidate(rs, cls.roots)
        assert revalidate(c, run_filters(c))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_verdict_is_weyl_invariant(data):
    rs = build(data.draw(st.sampled_from(["B", "C"])), 3)
    classes = [c for c in closed_subsystems(rs) if len(c.roots) < len(rs.roots)]
    h = data.draw(st.sampled_from(classes)).roots
    word = data.draw(st.lists(st.sampled_from(list(rs.roots)), max_size=4))
    moved = h
    for a in word:
        moved = frozenset(reflect(rs, a, r) for r in moved)
    before = run_filters(EqualRankCandidate(rs, h))
    after = run_filters(EqualRankCandidate(rs, moved))
    assert before.passed == after.passed
