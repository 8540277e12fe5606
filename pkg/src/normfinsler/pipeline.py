"""Report builders shared by the command line and the HTTP service.

Every function returns a plain JSON-ready dict.  Reports never contain
timings, so the same inputs always serialise to the same bytes; callers that
want timings measure around these calls.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from . import tables
from .corank_engine import run_corank_one
from .equal_rank import classify_equal_rank, expected_survivors, survivor_types
from .explicit_models import condition_r_report
from .root_systems import build, build_sum, parse_type, simple_roots
from .tables import _canon

EXIT_OK, EXIT_ERROR, EXIT_DIFF = 0, 1, 2

RULE_NOTES = {
    "A": "a root orthogonal to the t∩m direction is a root of h",
    "B": "a root parallel to the t∩m direction spans a plane inside m",
    "C": "a projected root incompatible with, or parallel to, an h-root is not an h-root",
    "D": "two m-roots at angle π/3 or 2π/3 force pr(γ1+γ2) or pr(γ1−γ2) into h",
    "E": "brackets of an h-plane with another plane land in the matching side",
    "F'": "an m-plane orthogonal to t∩m spans a flat splitting subalgebra with its orthogonal torus",
    "F": "two commuting m-planes and a common orthogonal torus form a flat splitting subalgebra",
    "G": "all but one carrier of a new h-root lie in m, so the h-root is a g-plane after all",
    "H": "h has a reduced root system: λ and 2λ cannot both be roots",
    "K": "k = h + t must be one of the equal-rank survivors",
    "oracle": "explicit matrix model decides the saturated seed",
    "init": "seed set-up",
}


def _system(type_label: str, rank: Optional[int]):
    if "+" in type_label:
        return build_sum(parse_type(type_label))
    if rank is None:
        (lab, n), = parse_type(type_label)
        return build(lab, n)
    return build(type_label, rank)


def _split_label(type_label: str, rank: Optional[int]) -> tuple[str, int]:
    if rank is not None:
        return type_label, rank
    (lab, n), = parse_type(type_label)
    return lab, n


def _with_rank(type_label: str, rank: Optional[int]) -> str:
    if "+" in type_label or rank is None or type_label in ("G2", "F4", "E6", "E7", "E8"):
        return type_label
    return f"{type_label}{rank}"


# ---------------------------------------------------------------- roots

def roots_report(type_label: str, rank: Optional[int] = None) -> dict:
    rs = _system(type_label, rank)
    doc = rs.to_json()
    doc["label"] = rs.label
    doc["rank"] = rs.rank
    doc["root_count"] = len(rs.roots)
    simple = simple_roots(rs.roots)
    doc["simple_roots"] = [r.to_json() for r in simple]
    doc["simple_roots_text"] = [str(r) for r in simple]
    return doc


# ---------------------------------------------------------------- equal rank

def equal_rank_section(type_label: str, rank: Optional[int] = None) -> dict:
    lab, n = _split_label(type_label, rank)
    report = classify_equal_rank(lab, n)
    got = survivor_types(report)
    want = expected_survivors(lab, n)
    diffs = []
    if got != want:
        diffs.append({"system": _with_rank(lab, n), "section": "equal-rank",
                      "expected": [_fmt_canon(c) for c in want], "found": [_fmt_canon(c) for c in got]})
    doc = report.to_json()
    doc["survivors"] = [{"h_type": c.h_type, "coset_space": c.coset_space,
                         "key": tables.equal_rank_key(lab, n, _canon(c.h_type))} for c in report.survivors]
    doc["diffs"] = diffs
    return doc


def _fmt_canon(c: tuple) -> str:
    factors, corank = c
    parts = [f"{lab}{n}" if lab not in ("G2", "F4", "E6", "E7", "E8") else lab for lab, n in factors]
    return "+".join(parts + ["R"] * corank) or "0"


# ---------------------------------------------------------------- corank one

def corank_section(type_label: str, rank: Optional[int] = None, *, trace: bool = False) -> dict:
    label = _with_rank(type_label, rank)
    table = run_corank_one(label)
    doc = table.to_json(with_trace=trace)
    expected = tables.CORANK_ONE_OUTCOMES.get(table.g)
    diffs = []
    if expected is None:
        diffs.append({"system": table.g, "section": "corank-one", "note": "no embedded expectation"})
    else:
        found = {r.seed.label: (r.outcome, r.coset, r.k_bound) for r in table.rows}
        for seed in sorted(set(expected) | set(found)):
            if expected.get(seed) != found.get(seed):
                diffs.append({"system": table.g, "section": "corank-one", "seed": seed,
                              "expected": expected.get(seed), "found": found.get(seed)})
    doc["survivors"] = table.survivors()
    doc["diffs"] = diffs
    return doc


# ---------------------------------------------------------------- condition R

def condition_r_section(space: str, t_samples: Sequence = (Fraction(1, 10), Fraction(1, 2)),
                        random_pairs: int = 100) -> dict:
    ts = [Fraction(t) for t in t_samples]
    doc = condition_r_report(space, ts, random_pairs=random_pairs)
    key = tables.CONDITION_R_KEYS.get(space)
    diffs = []
    if key is not None:
        want_fail = not tables.BY_KEY[key].forced_riemannian
        if doc["fails_condition_R"] != want_fail:
            diffs.append({"space": space, "section": "condition-r",
                          "expected_fails": want_fail, "found_fails": doc["fails_condition_R"]})
    doc["main_list_key"] = key
    doc["diffs"] = diffs
    return doc


# ---------------------------------------------------------------- finsler

def finsler_section(metric, x, y, v) -> dict:
    from .finsler_lab import catalog_metric, flag_curvature, metric_from_json

    from .schemas import MetricFile

    if isinstance(metric, str):
        M = catalog_metric(metric)
    else:
        M = metric_from_json(MetricFile.model_validate(metric).model_dump())
    sample = flag_curvature(M, x, y, v, with_sample=True)
    return {"metric": M.name, "dimension": M.dim, "rows": [sample.to_json()]}


# ---------------------------------------------------------------- explain

def explain(seed_id: str) -> dict:
    """Trace for a seed id of the form '<system>:<seed label>'."""
    if ":" not in seed_id:
        raise KeyError(f"seed id {seed_id!r} must look like 'F4:(e1+e2, e2)'")
    system, label = seed_id.split(":", 1)
    system, label = system.strip(), label.strip()
    table = run_corank_one(system)
    for row in table.rows:
        if row.seed.label == label:
            steps = [dict(step, note=RULE_NOTES.get(step["rule"], "")) for step in row.trace]
            if row.oracle is not None:
                steps.append({"rule": "oracle", "inputs": [row.oracle.get("model")],
                              "conclusion": row.oracle.get("detail"), "note": RULE_NOTES["oracle"]})
            return {"system": table.g, "seed": row.seed.to_json(), "outcome": row.outcome,
                    "coset_space": row.coset, "needs_explicit_model_oracle": row.needs_oracle,
                    "steps": steps}
    known = ", ".join(r.seed.label for r in table.rows)
    raise KeyError(f"no seed {label!r} in {table.g}; known seeds: {known}")


def explain_text(doc: dict) -> str:
    lines = [f"{doc['system']} seed {doc['seed']['label']}  (z = {doc['seed']['z']})"]
    for i, step in enumerate(doc["steps"], 1):
        inputs = ", ".join(str(x) for x in step["inputs"])
        lines.append(f"{i:3d}. [{step['rule']}] {step['conclusion']}  <- {inputs}")
        if step.get("note"):
            lines.append(f"       {step['note']}")
    tail = doc["outcome"]
    if doc["coset_space"]:
        tail += f" -> {tables.BY_KEY[doc['coset_space']].name}"
    if doc["needs_explicit_model_oracle"]:
        tail += "  [explicit-model oracle]"
    lines.append("outcome: " + tail)
    return "\n".join(lines)


# ---------------------------------------------------------------- theorem verification

def verify_theorem1(equal_rank_systems=tables.DEFAULT_EQUAL_RANK,
                    corank_systems=tables.DEFAULT_CORANK_ONE,
                    condition_r_spaces=tuple(tables.CONDITION_R_KEYS),
                    *, trace: bool = False, expected_names: Optional[Sequence[str]] = None,
                    compare_names: bool = True) -> dict:
    eq = [equal_rank_section(lab, n) for lab, n in equal_rank_systems]
    co = [corank_section(lab, trace=trace) for lab in corank_systems]
    cr = [condition_r_section(s) for s in condition_r_spaces]
    found = set()
    for sec in eq:
        found |= {s["key"] for s in sec["survivors"] if s["key"]}
    for sec in co:
        found |= set(sec["survivors"])
    want = set(tables.REALIZED_AT_DEFAULT_CAPS if expected_names is None else expected_names)
    diffs = [d for sec in eq + co + cr for d in sec["diffs"]]
    if compare_names and found != want:
        diffs.append({"section": "survivor-names", "missing": sorted(want - found),
                      "unexpected": sorted(found - want)})
    return {
        "command": "verify theorem1",
        "inputs": {"equal_rank": [_with_rank(lab, n) for lab, n in equal_rank_systems],
                   "corank_one": list(corank_systems), "condition_r": list(condition_r_spaces)},
        "equal_rank": eq,
        "corank_one": co,
        "condition_r": cr,
        "survivors": [{"key": k, "name": tables.BY_KEY[k].name} for k in sorted(found)],
        "riemannian_forced": [tables.BY_KEY[k].name for k in tables.MAIN3_FORCED],
        "non_riemannian": [tables.BY_KEY[k].name for k in tables.MAIN3_NON_RIEMANNIAN],
        "diffs": diffs,
        "exit_code": EXIT_OK if not diffs else EXIT_DIFF,
    }


# ---------------------------------------------------------------- export

def to_json_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _md_table(headers: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    for r in rows:
        out.append("| " + " | ".join("" if c is None else str(c) for c in r) + " |")
    return out


def to_markdown(report: dict) -> str:
    """Markdown summary of a verification report or of a single section."""
    lines: list[str] = []
    if "command" in report:
        lines.append(f"# {report['command']}")
        lines.append("")
    for sec in report.get("equal_rank", [report] if "candidates" in report else []):
        g = sec["g"]
        lines.append(f"## Equal rank: {g['type']}{g['rank'] if g['type'] not in ('G2', 'F4') else ''}")
        lines.append("")
        lines += _md_table(["h", "space"], [[s["h_type"], s["coset_space"]] for s in sec["survivors"]])
        lines.append("")
    for sec in report.get("corank_one", [report] if "rows" in report and "g" in report else []):
        lines.append(f"## Corank one: {sec['g']}")
        lines.append("")
        lines += _md_table(["seed", "outcome", "k bound", "space"],
                           [[r["seed"]["label"], r["outcome"], r["k_bound"],
                             tables.BY_KEY[r["coset_space"]].name if r["coset_space"] else None]
                            for r in sec["rows"]])
        lines.append("")
    crs = report.get("condition_r", [report] if "fails_condition_R" in report else [])
    if crs:
        lines.append("## Condition (R)")
        lines.append("")
        lines += _md_table(["space", "verdict", "dependent pairs"],
                           [[c["space"], c["verdict"], f"{c['dependent_pairs']}/{len(c['samples'])}"] for c in crs])
        lines.append("")
    if "survivors" in report and "command" in report:
        lines.append("## Survivors")
        lines.append("")
        lines += [f"- {s['name']}" for s in report["survivors"]]
        lines.append("")
    if "diffs" in report:
        lines.append(f"Diffs: {len(report['diffs'])}")
        lines.append("")
    return "\n".join(lines)
