"""normfinsler command line.

Runs every computation in-process and writes flat report files; there is no
network component.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import pipeline, tables
from .finsler_lab import FinslerError
from .pipeline import EXIT_DIFF, EXIT_ERROR, EXIT_OK
from .root_systems import parse_type
from .schemas import validate_report


def _emit(report: dict, args, text: str) -> None:
    target = getattr(args, "json", None)
    if target is None:
        print(text)
        return
    payload = pipeline.to_json_text(report)
    if target == "-":
        sys.stdout.write(payload)
    else:
        Path(target).write_text(payload, encoding="utf-8")
        print(text)
        print(f"wrote {target}")


def _exit_for(report: dict) -> int:
    return EXIT_OK if not report.get("diffs") else EXIT_DIFF


def _fmt_diffs(diffs: list) -> list[str]:
    return [f"  DIFF {json.dumps(d, ensure_ascii=False)}" for d in diffs]


# ---------------------------------------------------------------- handlers

def cmd_roots(args) -> int:
    rep = pipeline.roots_report(args.type, args.rank)
    lines = [f"{rep['label']}: rank {rep['rank']}, {rep['root_count']} roots, ambient dimension {rep['ambient_dim']}",
             "simple roots: " + ", ".join(rep["simple_roots_text"])]
    _emit(rep, args, "\n".join(lines))
    return EXIT_OK


def cmd_equal_rank(args) -> int:
    rep = pipeline.equal_rank_section(args.type, args.rank)
    g = rep["g"]
    lines = [f"equal-rank subalgebras of {g['type']} (rank {g['rank']}):"]
    for c in rep["candidates"]:
        tag = "survives" if c["failing_rule"] is None else f"fails {c['failing_rule']}"
        extra = f"  {c['coset_space']}" if c.get("coset_space") else ""
        lines.append(f"  {c['h_type']:<14} {tag}{extra}")
    lines += _fmt_diffs(rep["diffs"])
    _emit(rep, args, "\n".join(lines))
    return _exit_for(rep)


def cmd_corank1(args) -> int:
    rep = pipeline.corank_section(args.type, args.rank, trace=args.trace)
    lines = [f"corank-one seeds of {rep['g']}:"]
    for r in rep["rows"]:
        space = tables.BY_KEY[r["coset_space"]].name if r["coset_space"] else ""
        bound = f"  k ⊂ {r['k_bound']}" if r["k_bound"] else ""
        flag = "  [oracle]" if r["needs_explicit_model_oracle"] else ""
        lines.append(f"  {r['seed']['kind']:<8} {r['seed']['label']:<28} {r['outcome']:<24}{bound}  {space}{flag}")
        if args.trace:
            for step in r.get("trace", []):
                lines.append(f"      [{step['rule']}] {step['conclusion']}")
    if rep["angle_pruned"]:
        lines.append("  pruned same-factor π/3, 2π/3 seeds: " + ", ".join(rep["angle_pruned"]))
    if rep["rejected_case_one"]:
        lines.append("  Case I k without a center direction: " + ", ".join(rep["rejected_case_one"]))
    lines += _fmt_diffs(rep["diffs"])
    _emit(rep, args, "\n".join(lines))
    return _exit_for(rep)


def _parse_caps(text: str) -> dict:
    caps = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        lab, _, n = part.partition("=")
        if lab not in ("A", "B", "C", "D") or not n.isdigit():
            raise argparse.ArgumentTypeError(f"bad cap {part!r}; use e.g. A=4,B=4,C=4,D=4")
        caps[lab] = int(n)
    return caps


DEFAULT_CAPS = {"A": 4, "B": 4, "C": 4, "D": 4}


def cmd_verify(args) -> int:
    caps = dict(DEFAULT_CAPS, **args.caps)
    default = caps == DEFAULT_CAPS and not args.skip_exceptional
    mins = {"A": 1, "B": 2, "C": 3, "D": 4}
    eq = [(lab, n) for lab in "ABCD" for n in range(mins[lab], caps[lab] + 1)]
    if not args.skip_exceptional:
        eq += [("G2", 2), ("F4", 4)]

    def keep(label: str) -> bool:
        for lab, n in parse_type(label):
            if lab in caps and n > caps[lab]:
                return False
            if lab in ("G2", "F4") and args.skip_exceptional:
                return False
        return True

    co = [lab for lab in tables.DEFAULT_CORANK_ONE if keep(lab)]
    t0 = time.perf_counter()
    rep = pipeline.verify_theorem1(eq, co, trace=args.trace, compare_names=default)
    rep["inputs"]["caps"] = caps
    elapsed = time.perf_counter() - t0
    lines = ["verify theorem1"]
    lines.append(f"  equal-rank systems: {len(rep['equal_rank'])}, corank-one systems: {len(rep['corank_one'])}, "
                 f"condition-R spaces: {len(rep['condition_r'])}")
    lines.append("  survivors:")
    lines += [f"    {s['name']}" for s in rep["survivors"]]
    if not default:
        lines.append("  (non-default caps: survivor names are not compared)")
    lines += _fmt_diffs(rep["diffs"])
    lines.append(f"  {'OK' if not rep['diffs'] else 'DIFFS PRESENT'} in {elapsed:.1f}s")
    _emit(rep, args, "\n".join(lines))
    return rep["exit_code"]


def _rationals(text: str) -> list[Fraction]:
    try:
        out = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not out or any(t == 0 for t in out):
        raise argparse.ArgumentTypeError("t samples must be nonzero rationals")
    return out


def cmd_condition_r(args) -> int:
    rep = pipeline.condition_r_section(args.space, args.t, random_pairs=args.pairs)
    out = {k: rep[k] for k in ("space", "samples", "dependent_pairs", "verdict")}
    out.update(fails_condition_R=rep["fails_condition_R"], diffs=rep["diffs"],
               membership_unverified=rep["membership_unverified"])
    lines = [f"{rep['space']}: {rep['verdict']} ({rep['dependent_pairs']}/{len(rep['samples'])} dependent pairs)"]
    if rep["membership_unverified"]:
        lines.append("  v(t) taken as given; membership in m not checked")
    lines += _fmt_diffs(rep["diffs"])
    _emit(out, args, "\n".join(lines))
    return _exit_for(rep)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def cmd_finsler(args) -> int:
    metric = args.metric
    path = Path(metric)
    if path.suffix == ".json" or path.exists():
        metric = json.loads(path.read_text(encoding="utf-8"))
    rep = pipeline.finsler_section(metric, args.x, args.y, args.v)
    row = rep["rows"][0]
    d = row["diagnostics"]
    text = (f"{rep['metric']}: K = {row['K']:.12g}  (R_y y residual {d['pole_residual']:.1e}, "
            f"self-adjoint residual {d['self_adjoint_residual']:.1e})")
    _emit(rep, args, text)
    return EXIT_OK


def cmd_explain(args) -> int:
    try:
        rep = pipeline.explain(args.seed_id)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_ERROR
    _emit(rep, args, pipeline.explain_text(rep))
    return EXIT_OK


def cmd_export(args) -> int:
    report = json.loads(Path(args.report).read_text(encoding="utf-8"))
    validate_report(report)
    text = pipeline.to_json_text(report) if args.format == "json" else pipeline.to_markdown(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subparser from clobbering a flag given before the subcommand
    common.add_argument("--json", nargs="?", const="-", metavar="PATH", default=argparse.SUPPRESS,
                        help="emit the JSON report (to stdout, or to PATH)")
    common.add_argument("--trace", action="store_true", default=argparse.SUPPRESS,
                        help="include rule-by-rule traces")
    common.add_argument("--seed-order", choices=["deterministic"], default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="normfinsler", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("roots", parents=[common], help="print a root system")
    r.add_argument("--type", required=True)
    r.add_argument("--rank", type=int)
    r.set_defaults(func=cmd_roots)

    c = sub.add_parser("classify", help="equal-rank or corank-one classification")
    csub = c.add_subparsers(dest="kind", required=True)
    for name, func in (("equal-rank", cmd_equal_rank), ("corank1", cmd_corank1)):
        q = csub.add_parser(name, parents=[common])
        q.add_argument("--type", required=True)
        q.add_argument("--rank", type=int)
        q.set_defaults(func=func)

    v = sub.add_parser("verify", help="end-to-end checks")
    vsub = v.add_subparsers(dest="what", required=True)
    t1 = vsub.add_parser("theorem1", parents=[common])
    t1.add_argument("--caps", type=_parse_caps, default={}, help="rank caps, e.g. A=4,B=4,C=4,D=4")
    t1.add_argument("--skip-exceptional", action="store_true", help="leave out G2 and F4")
    t1.set_defaults(func=cmd_verify)

    cr = sub.add_parser("condition-r", parents=[common], help="eigenvalue-sequence test")
    cr.add_argument("--space", required=True)
    cr.add_argument("--t", type=_rationals, default=[Fraction(1, 10), Fraction(1, 2)],
                    help="comma-separated nonzero rationals")
    cr.add_argument("--pairs", type=int, default=100, help="random pairs for spaces without a v(t) family")
    cr.set_defaults(func=cmd_condition_r)

    f = sub.add_parser("finsler", help="Finsler numerics")
    fsub = f.add_subparsers(dest="what", required=True)
    fc = fsub.add_parser("curvature", parents=[common])
    fc.add_argument("--metric", required=True, help="catalog name or JSON metric file")
    fc.add_argument("--x", type=_floats, required=True)
    fc.add_argument("--y", type=_floats, required=True)
    fc.add_argument("--v", type=_floats, required=True)
    fc.set_defaults(func=cmd_finsler)

    e = sub.add_parser("explain", parents=[common], help="trace one corank-one seed")
    e.add_argument("seed_id", help="e.g. 'F4:(e1+e2, e2)'")
    e.set_defaults(func=cmd_explain)

    x = sub.add_parser("export", parents=[common], help="re-serialise a saved JSON report")
    x.add_argument("report")
    x.add_argument("--format", choices=["json", "markdown"], default="json")
    x.add_argument("--out")
    x.set_defaults(func=cmd_export)
    return p


def _glue_negative_vectors(argv: list[str]) -> list[str]:
    # "--v -0.2,1" would otherwise be read as an unknown option
    out = []
    for tok in argv:
        if out and out[-1] in ("--x", "--y", "--v") and tok.startswith("-"):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_vectors(argv))
    for name, default in (("json", None), ("trace", False), ("seed_order", "deterministic")):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, FinslerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
