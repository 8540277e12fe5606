"""Exclusion filters for full-rank subalgebras h of a compact g.

A candidate h is a symmetric closed set of roots plus whatever torus is
left over; the complement m holds the remaining root planes.  Each filter
either passes the candidate or fails it with a pair of m-roots that can
be re-checked by hand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .root_systems import (
    Decomposition,
    RootSystem,
    angle_class,
    build,
    build_sum,
    closed_subsystems,
    decompose,
    format_type,
    parse_type,
    sum_diff_status,
)
from .tables import coset_name, expected_equal_rank, rank_one_symmetric_h, _canon

PASS, FAIL = "Pass", "Fail"


@dataclass
class Verdict:
    status: str
    failing_rule: Optional[str] = None
    witness: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "failing_rule": self.failing_rule,
            "witness": _witness_json(self.witness),
        }


def _witness_json(w):
    if w is None:
        return None
    return [[str(x) for x in v] if isinstance(v, tuple) else v for v in w]


@dataclass
class EqualRankCandidate:
    rs: RootSystem
    h_roots: frozenset
    m_roots: tuple = field(init=False)
    h_type: Decomposition = field(init=False)

    def __post_init__(self) -> None:
        self.m_roots = tuple(r for r in self.rs.roots if r not in self.h_roots)
        self.h_type = decompose(self.h_roots, self.rs.rank)

    @property
    def h_label(self) -> str:
        return self.h_type.label

    def m_pairs(self):
        """Pairs α ≠ ±β of m-roots, in root-list order."""
        for a, b in itertools.combinations(self.m_roots, 2):
            if a != -b:
                yield a, b


def multi_factor(cand: EqualRankCandidate) -> Verdict:
    owner = cand.rs.factor_of_root
    for a, b in cand.m_pairs():
        if owner[a] != owner[b]:
            return Verdict(FAIL, "multi_factor", (a, b))
    return Verdict(PASS)


def lemma1_part1(cand: EqualRankCandidate) -> Verdict:
    """Two m-roots must have a root sum or difference."""
    for a, b in cand.m_pairs():
        if sum_diff_status(cand.rs, a, b) == "neither":
            return Verdict(FAIL, "lemma1_part1", (a, b))
    return Verdict(PASS)


def _in_g2_factor(cand: EqualRankCandidate, a, b) -> bool:
    owner = cand.rs.factor_of_root
    return owner[a] == owner[b] and cand.rs.factors[owner[a]][0] == "G2"


def lemma1_part2(cand: EqualRankCandidate) -> Verdict:
    """m-roots at angle π/3 or 2π/3 need a sum or difference inside h."""
    for a, b in cand.m_pairs():
        if angle_class(a, b)[0] != 1 or _in_g2_factor(cand, a, b):
            continue
        if (a + b) not in cand.h_roots and (a - b) not in cand.h_roots:
            return Verdict(FAIL, "lemma1_part2", (a, b))
    return Verdict(PASS)


def is_symmetric_pair(cand: EqualRankCandidate) -> bool:
    roots, h = cand.rs.root_set, cand.h_roots
    for a, b in cand.m_pairs():
        for c in (a + b, a - b):
            if c in roots and c not in h:
                return False
    return True


def _factor_index(cand: EqualRankCandidate) -> int:
    owners = {cand.rs.factor_of_root[r] for r in cand.m_roots}
    return owners.pop() if len(owners) == 1 else -1


def _restricted_h(cand: EqualRankCandidate, idx: int) -> tuple:
    owner = cand.rs.factor_of_root
    sub = [r for r in cand.h_roots if owner[r] == idx]
    label, rank = cand.rs.factors[idx]
    d = decompose(sub, rank)
    return _canon(format_type(d.factors, d.corank))


def symmetric_excess_rank(cand: EqualRankCandidate) -> Verdict:
    """A symmetric pair survives only when it is rank one and in the table."""
    if not cand.m_roots or not is_symmetric_pair(cand):
        return Verdict(PASS)
    for a, b in cand.m_pairs():
        if sum_diff_status(cand.rs, a, b) == "neither":
            return Verdict(FAIL, "symmetric_excess_rank", (a, b))
    idx = _factor_index(cand)
    if idx >= 0:
        label, rank = cand.rs.factors[idx]
        if rank_one_symmetric_h(label, rank) == _restricted_h(cand, idx):
            return Verdict(PASS)
    return Verdict(FAIL, "symmetric_excess_rank", ("symmetric, not rank one", cand.h_label))


FILTERS = (multi_factor, lemma1_part1, lemma1_part2, symmetric_excess_rank)


def run_filters(cand: EqualRankCandidate) -> Verdict:
    for f in FILTERS:
        v = f(cand)
        if not v.passed:
            return v
    return Verdict(PASS)


def revalidate(cand: EqualRankCandidate, verdict: Verdict) -> bool:
    """Re-check a Fail witness against the raw predicate it names."""
    if verdict.passed:
        return True
    rule, w = verdict.failing_rule, verdict.witness
    if rule == "symmetric_excess_rank" and isinstance(w[0], str):
        return is_symmetric_pair(cand)
    a, b = w
    if a not in cand.m_roots or b not in cand.m_roots or a == -b:
        return False
    if rule == "multi_factor":
        return cand.rs.factor_of_root[a] != cand.rs.factor_of_root[b]
    if rule in ("lemma1_part1", "symmetric_excess_rank"):
        return (a + b) not in cand.rs.root_set and (a - b) not in cand.rs.root_set
    if rule == "lemma1_part2":
        return angle_class(a, b)[0] == 1 and (a + b) not in cand.h_roots and (a - b) not in cand.h_roots
    return False


@dataclass
class CandidateReport:
    h_type: str
    verdict: Verdict
    h_root_count: int
    merged_classes: int = 1
    coset_space: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "h_type": self.h_type,
            "verdict": self.verdict.status,
            "failing_rule": self.verdict.failing_rule,
            "witness": _witness_json(self.verdict.witness),
            "h_root_count": self.h_root_count,
        }
        if self.merged_classes > 1:
            out["merged_classes"] = self.merged_classes
        if self.coset_space:
            out["coset_space"] = self.coset_space
        return out


@dataclass
class EqualRankReport:
    g_type: str
    g_rank: int
    candidates: list[CandidateReport]

    @property
    def survivors(self) -> list[CandidateReport]:
        return [c for c in self.candidates if c.verdict.passed]

    def to_json(self) -> dict:
        return {
            "g": {"type": self.g_type, "rank": self.g_rank},
            "candidates": [c.to_json() for c in self.candidates],
        }


E_SERIES = ("E6", "E7", "E8")


def _system_for(type_label: str, rank: int | None) -> RootSystem:
    if "+" in type_label:
        return build_sum(parse_type(type_label))
    return build(type_label, rank if rank is not None else parse_type(type_label)[0][1])


def classify_equal_rank(
    type_label: str,
    rank: int | None = None,
    *,
    rank_cap: int = 8,
    allow_e_series: bool = False,
    check_merges: bool = True,
) -> EqualRankReport:
    """Enumerate full-rank h in g and keep the ones no filter rejects."""
    if type_label in E_SERIES and not allow_e_series:
        raise ValueError(f"{type_label} enumeration is gated; pass allow_e_series=True")
    rs = _system_for(type_label, rank)
    classes = closed_subsystems(rs, rank_cap=rank_cap, check_merges=check_merges)
    reports = []
    for cls in classes:
        if len(cls.roots) == len(rs.roots):
            continue  # h = g leaves nothing to classify
        cand = EqualRankCandidate(rs, cls.roots)
        verdict = run_filters(cand)
        name = None
        if verdict.passed and len(rs.factors) == 1:
            label, n = rs.factors[0]
            name = coset_name(label, n, _canon(cand.h_label))
        reports.append(CandidateReport(cand.h_label, verdict, len(cls.roots), cls.merged, name))
    label = rs.label if len(rs.factors) > 1 else rs.factors[0][0]
    return EqualRankReport(label, rs.rank, reports)


def expected_survivors(type_label: str, rank: int) -> list[tuple]:
    return sorted(_canon(h) for h, _ in expected_equal_rank(type_label, rank))


def survivor_types(report: EqualRankReport) -> list[tuple]:
    return sorted(_canon(c.h_type) for c in report.survivors)
