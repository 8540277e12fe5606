"""Case analysis for subalgebras h with rank one less than g.

A seed fixes the direction z spanning t∩m.  Every root plane of g is then
labelled H (inside h), M (inside m) or U (unknown), and the projected
vectors pr(γ) onto z⊥ are sorted into confirmed roots of h and eliminated
candidates.  Inference rules run to a fixpoint; the result is either a
contradiction with the rule that produced it, or a saturated labelling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .exact_arith import ExactVector, QExt, cartan_pair, inner, is_parallel, norm_sq
from .root_systems import (
    RootSystem,
    angle_class,
    build,
    build_sum,
    decompose,
    exact_rank,
    format_type,
    lex_positive,
    parse_type,
    reflect_vec,
    simple_roots,
    weyl_orbit,
)
from . import tables

H, M, U = "H", "M", "U"
CASE_I, CASE_II, CASE_III = "CaseI", "CaseII", "CaseIII"


def key(v: ExactVector) -> ExactVector:
    """Representative of ±v."""
    return v if lex_positive(v) else -v


def fmt(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return str(v)


class Contradiction(Exception):
    def __init__(self, rule: str, witness, note: str = "") -> None:
        super().__init__(f"{rule}: {note}")
        self.rule = rule
        self.witness = witness
        self.note = note


@dataclass
class CorankSeed:
    rs: RootSystem
    kind: str
    z: ExactVector
    alpha: Optional[ExactVector] = None
    beta: Optional[ExactVector] = None
    k_roots: Optional[frozenset] = None  # Case I only
    label: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind, "z": fmt(self.z), "label": self.label}
        if self.alpha is not None:
            out["alpha"], out["beta"] = fmt(self.alpha), fmt(self.beta)
        return out


@dataclass
class CaseVerdict:
    status: str  # "Contradiction" or "Saturated"
    rule: Optional[str]
    witness: object
    derived_h_type: Optional[str]
    note: str = ""

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "rule": self.rule,
            "witness": _jsonify(self.witness),
            "derived_h_type": self.derived_h_type,
            "note": self.note,
        }


def _jsonify(x):
    if isinstance(x, ExactVector):
        return fmt(x)
    if isinstance(x, (list, tuple)):
        return [_jsonify(y) for y in x]
    if isinstance(x, QExt):
        return str(x)
    return x


def project(v: ExactVector, z: ExactVector, zz: QExt) -> ExactVector:
    k = inner(v, z) / zz
    return ExactVector(x - k * y for x, y in zip(v, z))


class CaseState:
    """Mutable labelling of root planes for one seed."""

    def __init__(self, seed: CorankSeed) -> None:
        self.seed = seed
        self.rs = seed.rs
        self.z = seed.z
        self.zz = norm_sq(seed.z)
        self.planes = [r for r in self.rs.roots if lex_positive(r)]
        self.pr: dict[ExactVector, ExactVector] = {}
        self.carriers: dict[ExactVector, list[ExactVector]] = {}
        for g in self.planes:
            lam = project(g, self.z, self.zz)
            self.pr[g] = lam
            if not lam.is_zero():
                self.carriers.setdefault(key(lam), []).append(g)
        self.label = {g: U for g in self.planes}
        self.h_roots: dict[ExactVector, set] = {}
        self.eliminated: set[ExactVector] = set()
        self.seed_key: Optional[ExactVector] = None
        self.trace: list[dict] = []
        self.near_misses = 0
        self.k_bound: Optional[str] = None

    # -- bookkeeping -------------------------------------------------
    def log(self, rule: str, inputs, conclusion: str) -> None:
        self.trace.append({"rule": rule, "inputs": [_jsonify(i) for i in inputs], "conclusion": conclusion})

    def plane(self, v: ExactVector) -> ExactVector:
        return key(v)

    def is_root(self, v: ExactVector) -> bool:
        return v in self.rs.root_set

    def set_m(self, g: ExactVector, rule: str, inputs) -> bool:
        g = key(g)
        if self.label[g] == M:
            return False
        if self.label[g] == H:
            raise Contradiction(rule, [g] + list(inputs), "plane required in both h and m")
        self.label[g] = M
        self.log(rule, inputs, f"plane {fmt(g)} in m")
        self._after_m(g, rule)
        return True

    def _after_m(self, g: ExactVector, rule: str) -> None:
        lam = key(self.pr[g])
        if lam.is_zero():
            return
        if lam in self.h_roots and g in self.h_roots[lam]:
            raise Contradiction(rule, [g, lam], "a known component of an h-root plane lies in m")
        live = [c for c in self.carriers[lam] if self.label[c] != M]
        if lam in self.h_roots:
            if not live:
                raise Contradiction("G", [lam], "every carrier of an h-root is in m")
            if len(live) == 1:
                if lam == self.seed_key:
                    raise Contradiction("G", [lam, live[0]], "seed root plane collapses onto a single g-plane")
                self.set_h(live[0], "G", [lam])
        elif not live and lam not in self.eliminated:
            self.eliminated.add(lam)
            self.log("C", [lam], f"{fmt(lam)} has no carrier outside m")

    def set_h(self, g: ExactVector, rule: str, inputs) -> bool:
        g = key(g)
        if self.label[g] == H:
            return False
        if self.label[g] == M:
            raise Contradiction(rule, [g] + list(inputs), "plane required in both h and m")
        if self.seed_key is not None and key(self.pr[g]) == self.seed_key:
            raise Contradiction("G", [g], "seed root plane equals a single g-plane")
        self.label[g] = H
        self.log(rule, inputs, f"plane {fmt(g)} in h")
        self.add_h(self.pr[g], rule, inputs, component=g)
        return True

    def add_h(self, lam: ExactVector, rule: str, inputs, component: Optional[ExactVector] = None) -> bool:
        lam = key(lam)
        if lam.is_zero():
            raise Contradiction(rule, inputs, "zero vector forced into h")
        if lam not in self.carriers:
            raise Contradiction(rule, [lam] + list(inputs), "forced h-root is not a projected root")
        if lam in self.eliminated:
            raise Contradiction(rule, [lam] + list(inputs), "eliminated vector forced into h")
        changed = False
        if lam not in self.h_roots:
            for mu in self.h_roots:
                if is_parallel(lam, mu):
                    raise Contradiction("H", [lam, mu], "h would contain λ and 2λ")
            self.h_roots[lam] = set()
            self.log(rule, inputs, f"{fmt(lam)} is a root of h")
            changed = True
        if component is not None:
            component = key(component)
            if self.label[component] == M:
                raise Contradiction(rule, [component] + list(inputs), "component of an h-root plane lies in m")
            if component not in self.h_roots[lam]:
                self.h_roots[lam].add(component)
                changed = True
        live = [c for c in self.carriers[lam] if self.label[c] != M]
        if not live:
            raise Contradiction("G", [lam], "every carrier of an h-root is in m")
        if len(live) == 1 and self.label[live[0]] == U:
            if lam == self.seed_key:
                raise Contradiction("G", [lam, live[0]], "seed root plane collapses onto a single g-plane")
            self.set_h(live[0], rule, [lam])
            changed = True
        return changed

    def eliminate(self, lam: ExactVector, rule: str, inputs) -> bool:
        lam = key(lam)
        if lam in self.eliminated:
            return False
        if lam in self.h_roots:
            raise Contradiction(rule, [lam] + list(inputs), "h-root fails the crystallographic test")
        self.eliminated.add(lam)
        self.log(rule, inputs, f"{fmt(lam)} is not a root of h")
        for g in self.carriers[lam]:
            self.set_m(g, rule, [lam])
        return True

    def viable(self, lam: ExactVector) -> bool:
        if lam.is_zero():
            return False
        k = key(lam)
        if k not in self.carriers or k in self.eliminated:
            return False
        if all(self.label[c] == M for c in self.carriers[k]):
            return False
        return all(is_parallel(k, mu) or cartan_pair(k, mu)[2] for mu in self.h_roots if mu != k)

    def m_planes(self) -> list[ExactVector]:
        return [g for g in self.planes if self.label[g] == M]

    def h_planes(self) -> list[ExactVector]:
        return [g for g in self.planes if self.label[g] == H]


# ------------------------------------------------------------------ seeds

def _same_g2(rs: RootSystem, a, b) -> bool:
    owner = rs.factor_of_root
    return owner[a] == owner[b] and rs.factors[owner[a]][0] == "G2"


def _center_direction(rs: RootSystem, k_roots) -> Optional[ExactVector]:
    """A nonzero vector of t orthogonal to every root in k_roots, or None."""
    basis = simple_roots(rs.roots)
    ortho: list[ExactVector] = []
    for r in simple_roots(k_roots) if k_roots else []:
        v = r
        for o in ortho:
            v = v - o.scale(inner(v, o) / norm_sq(o))
        if not v.is_zero():
            ortho.append(v)
    for b in basis:
        v = b
        for o in ortho:
            v = v - o.scale(inner(v, o) / norm_sq(o))
        if not v.is_zero():
            return v
    return None


def _seed_signature(rs: RootSystem, a: ExactVector, b: ExactVector):
    z = a - b
    zz = norm_sq(z)
    ap = project(a, z, zz)
    app = norm_sq(ap)
    same = rs.factor_of_root[a] == rs.factor_of_root[b]
    span_count = sum(1 for r in rs.roots if exact_rank([a, b, r]) == 2)
    config = []
    for g in rs.roots:
        lam = project(g, z, zz)
        ip = inner(lam, ap)
        config.append((str(norm_sq(lam)), str(ip * ip / app)))
    fc, ratio = angle_class(a, b)
    lengths = tuple(sorted((str(norm_sq(a)), str(norm_sq(b)))))
    sign = (inner(a, b).sign())
    return (fc, sign, lengths, same, span_count, tuple(sorted(config)))


PREFERRED_PAIRS = {
    "F4": [("e1+e2", "e2"), ("e1+e2", "e2-e1"), ("e1+e2", "-e3"), ("e1", "e2"), ("e1+e2", "-e2")],
    "B": [("e1+e2", "e2"), ("e1+e2", "e2-e1"), ("e1+e2", "-e3-e4"), ("e1+e2", "-e3"), ("e1", "e2"), ("e1+e2", "-e2")],
    "C": [("2e1", "e1+e2"), ("2e1", "2e2"), ("e1+e2", "-2e3"), ("e1+e2", "e2-e1"), ("e1+e2", "-e3-e4"), ("e1+e2", "-2e1")],
    "D": [("e1+e2", "e2-e1"), ("e1+e2", "-e3-e4")],
    "A": [("e1-e2", "e3-e4"), ("e1-e2", "e2-e3"), ("e1-e2", "e1-e3")],
    "E6": [("e1+e2", "e2-e1"), ("e1+e2", "e3+e4")],
    "E7": [("e1+e2", "e2-e1"), ("e1+e2", "-e3-e4")],
    "E8": [("e1+e2", "e2-e1"), ("e1+e2", "-e3-e4")],
}


def parse_vec(text: str, dim: int) -> ExactVector:
    """Parse 'e1+e2', '-2e3', 'e2-e1' into a vector of the given dimension."""
    coords = [0] * dim
    import re

    for sign, coef, idx in re.findall(r"([+-]?)(\d*)e(\d+)", text.replace(" ", "")):
        c = int(coef) if coef else 1
        coords[int(idx) - 1] += -c if sign == "-" else c
    return ExactVector(coords)


def _preferred(rs: RootSystem) -> list[tuple[ExactVector, ExactVector]]:
    if len(rs.factors) != 1:
        return []
    label, n = rs.factors[0]
    out = []
    for a, b in PREFERRED_PAIRS.get(label, []):
        try:
            va, vb = parse_vec(a, rs.ambient_dim), parse_vec(b, rs.ambient_dim)
        except IndexError:
            continue
        if va in rs.root_set and vb in rs.root_set:
            out.append((va, vb))
    return out


def _alpha_reps(rs: RootSystem) -> list[ExactVector]:
    """One root per (factor, length) orbit; Weyl groups act transitively on each."""
    reps: dict[tuple, ExactVector] = {}
    preferred = [a for a, _ in _preferred(rs)]
    for r in preferred + list(rs.roots):
        k = (rs.factor_of_root[r], norm_sq(r))
        reps.setdefault(k, r)
    return [reps[k] for k in sorted(reps, key=lambda k: (k[0], -float(k[1])))]


def _stabilizer_orbit_reps(rs: RootSystem, a: ExactVector) -> list[ExactVector]:
    """One root per orbit of the stabilizer of a in the Weyl group.

    The stabilizer is generated by the reflections in roots orthogonal to a.
    """
    perp = [g for g in rs.roots if lex_positive(g) and inner(g, a).is_zero()]
    seen: set = set()
    reps = []
    for b in rs.roots:
        if b in seen:
            continue
        reps.append(b)
        seen.add(b)
        frontier = [b]
        while frontier:
            nxt = []
            for v in frontier:
                for g in perp:
                    w = reflect_vec(g, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
    return reps


def pair_label(a: ExactVector, b: ExactVector) -> str:
    return f"({_vec_name(a)}, {_vec_name(b)})"


def _vec_name(v: ExactVector) -> str:
    parts = []
    for i, x in enumerate(v):
        if x.is_zero():
            continue
        s = str(x)
        if s == "1":
            coef = "+"
        elif s == "-1":
            coef = "-"
        elif s.startswith("-"):
            coef = s
        else:
            coef = "+" + s
        parts.append(f"{coef}e{i + 1}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text or "0"


def angle_pruned(rs: RootSystem, a: ExactVector, b: ExactVector) -> bool:
    """Same-factor pairs at π/3 or 2π/3 outside G2 never give a seed."""
    return rs.factor_of_root[a] == rs.factor_of_root[b] and angle_class(a, b)[0] == 1 and not _same_g2(rs, a, b)


def enumerate_seeds(rs: RootSystem, include_case_one: bool = True, include_pruned: bool = False) -> list[CorankSeed]:
    """One Case II/III seed per pair signature, then Case I seeds.

    Pairs removed by angle_pruned are left out unless include_pruned is set.
    """
    seen: dict = {}
    ordered: list[tuple[ExactVector, ExactVector]] = []
    candidates = list(_preferred(rs))
    for a in _alpha_reps(rs):
        for b in _stabilizer_orbit_reps(rs, a):
            if b != a and b != -a:
                candidates.append((a, b))
    for a, b in candidates:
        sig = _seed_signature(rs, a, b)
        if sig not in seen:
            seen[sig] = (a, b)
            ordered.append((a, b))
    seeds = []
    simple = len(rs.factors) == 1
    for a, b in ordered:
        if not include_pruned and angle_pruned(rs, a, b):
            continue
        same = rs.factor_of_root[a] == rs.factor_of_root[b]
        if same and not simple:
            continue  # reduces to the simple factor holding both roots
        kind = CASE_III if same else CASE_II
        seeds.append(CorankSeed(rs, kind, a - b, a, b, label=pair_label(a, b)))
    if include_case_one and simple:
        seeds.extend(case_one_seeds(rs))
    return seeds


def case_one_seeds(rs: RootSystem) -> list[CorankSeed]:
    out = []
    for roots, h_label in _survivor_realizations(rs, orbit=False):
        z = _center_direction(rs, roots)
        if z is None:
            continue
        out.append(CorankSeed(rs, CASE_I, z, k_roots=roots, label=f"k = {h_label}"))
    return out


def rejected_case_one(rs: RootSystem) -> list[str]:
    """Equal-rank survivors without a center, which cannot host Case I."""
    return [lab for roots, lab in _survivor_realizations(rs, orbit=False) if _center_direction(rs, roots) is None]


@lru_cache(maxsize=None)
def _survivors_cached(label: str, orbit: bool) -> tuple:
    """Realisations (root set, h label) of the equal-rank survivors of g.

    For a direct sum only one factor may shrink, so the survivors are the
    factor survivors padded with every root of the other factors.
    """
    from .equal_rank import classify_equal_rank
    from .root_systems import closed_subsystems

    rs = _build_label(label)
    if any(f[0] in ("E6", "E7", "E8") for f in rs.factors):
        return ()  # no full-rank h of an E-type algebra passes the filters
    if len(rs.factors) > 1:
        out = []
        offset = 0
        for idx, (lab, n) in enumerate(rs.factors):
            sub = build(lab, n)
            rest = frozenset(r for r in rs.roots if rs.factor_of_root[r] != idx)
            pad = rs.ambient_dim - offset - sub.ambient_dim
            for roots, h in _survivors_cached(sub.label, orbit):
                lifted = frozenset(ExactVector([0] * offset + list(r) + [0] * pad) for r in roots)
                out.append((lifted | rest, h))
            offset += sub.ambient_dim
        return tuple(out)
    report = classify_equal_rank(*rs.factors[0], check_merges=False)
    classes = {c.label: c.roots for c in closed_subsystems(rs)}
    out = []
    for c in report.survivors:
        roots = classes[c.h_type]
        if orbit:
            for o in sorted(weyl_orbit(rs, roots), key=lambda s: sorted(map(fmt, s))):
                out.append((o, c.h_type))
        else:
            out.append((roots, c.h_type))
    return tuple(out)


def _build_label(label: str) -> RootSystem:
    return build_sum(parse_type(label))


def _survivor_realizations(rs: RootSystem, orbit: bool) -> tuple:
    return _survivors_cached(rs.label, orbit)


# ------------------------------------------------------------------ init

def init_case(seed: CorankSeed) -> CaseState:
    st = CaseState(seed)
    if seed.kind == CASE_I:
        for g in st.planes:
            if g in seed.k_roots:
                st.label[g] = H
                st.h_roots.setdefault(key(st.pr[g]), set()).add(g)
            else:
                st.label[g] = M
        st.log("init", [seed.z], "Case I: k-planes in h, all others in m")
        return st
    a, b = seed.alpha, seed.beta
    pa, pb = project(a, st.z, st.zz), project(b, st.z, st.zz)
    if pa != pb:
        raise ValueError("seed does not satisfy pr(α) = pr(β)")
    lam = key(pa)
    st.seed_key = lam
    st.h_roots[lam] = {key(a), key(b)}
    st.log("init", [a, b], f"α' = {fmt(pa)} is a root of h carried by {len(st.carriers[lam])} planes")
    return st


# ------------------------------------------------------------------ rules

def rule_a(st: CaseState) -> bool:
    changed = False
    for g in st.planes:
        if inner(g, st.z).is_zero() and key(g) not in st.h_roots:
            changed |= st.add_h(g, "A", [g])
    return changed


def rule_b(st: CaseState) -> bool:
    changed = False
    for g in st.planes:
        if st.pr[g].is_zero():
            changed |= st.set_m(g, "B", [g])
    return changed


def rule_c(st: CaseState) -> bool:
    changed = False
    for lam in list(st.carriers):
        if lam in st.h_roots or lam in st.eliminated:
            continue
        for mu in list(st.h_roots):
            # parallel to an h-root but not ± it: h has a reduced root system
            if is_parallel(lam, mu) or not cartan_pair(lam, mu)[2]:
                changed |= st.eliminate(lam, "C", [lam, mu])
                break
    return changed


def _z_in_span(st: CaseState, a, b) -> bool:
    return exact_rank([a, b, st.z]) == 2


def rule_d(st: CaseState) -> bool:
    changed = False
    ms = st.m_planes()
    for g1, g2 in itertools.combinations(ms, 2):
        if angle_class(g1, g2)[0] != 1 or _same_g2(st.rs, g1, g2):
            continue
        if not _z_in_span(st, g1, g2):
            st.near_misses += 1
            continue
        cands = [project(g1 + g2, st.z, st.zz), project(g1 - g2, st.z, st.zz)]
        live = [c for c in cands if st.viable(c)]
        if not live:
            raise Contradiction("D", [g1, g2], "neither pr(γ1+γ2) nor pr(γ1−γ2) can be a root of h")
        if len(live) == 1 and key(live[0]) not in st.h_roots:
            changed |= st.add_h(live[0], "D", [g1, g2])
    return changed


def rule_e(st: CaseState) -> bool:
    changed = False
    hs = st.h_planes()
    for g1 in hs:
        for g2 in st.m_planes():
            for s in (1, -1):
                t = g1 + g2.scale(s)
                if st.is_root(t):
                    changed |= st.set_m(t, "E", [g1, g2])
    for g1 in hs:
        lam1 = key(st.pr[g1])
        for mu, comps in list(st.h_roots.items()):
            if mu == lam1:
                continue
            for d in list(comps):
                both_h = st.label[d] == H
                for s in (1, -1):
                    t = g1 + d.scale(s)
                    if not st.is_root(t):
                        continue
                    if both_h:
                        changed |= st.set_h(t, "E", [g1, d])
                    else:
                        changed |= st.add_h(st.pr[key(t)] if key(t) == t else -st.pr[key(t)], "E", [g1, d], component=t)
    return changed


def rule_f_prime(st: CaseState) -> bool:
    for g in st.m_planes():
        if inner(g, st.z).is_zero():
            raise Contradiction("F'", [g], "m-plane orthogonal to z spans a flat splitting subalgebra with γ⊥")
    return False


def flat_split_certificate(st: CaseState, g1: ExactVector, g2: ExactVector) -> Optional[dict]:
    """Rule F data: the commuting set D and whether z splits S1."""
    roots = st.rs.root_set
    D = []
    for d in st.rs.roots:
        if not lex_positive(d):
            continue
        bad = False
        for g in (g1, g2):
            if (d + g) in roots or (d - g) in roots:
                bad = True
                break
        if not bad and exact_rank([g1, g2, d]) == 3:
            D.append(d)
    normals = [g1, g2] + D
    z_in_s1 = all(inner(st.z, v).is_zero() for v in normals)
    base = exact_rank(normals)
    z_perp = exact_rank(normals + [st.z]) == base
    if z_in_s1 or z_perp:
        return {"D": D, "z_in_S1": z_in_s1, "z_perp_S1": z_perp, "dim_S1": st.rs.rank - base}
    return None


def rule_f(st: CaseState) -> bool:
    ms = st.m_planes()
    for g1, g2 in itertools.combinations(ms, 2):
        if (g1 + g2) in st.rs.root_set or (g1 - g2) in st.rs.root_set:
            continue
        cert = flat_split_certificate(st, g1, g2)
        if cert is not None:
            raise Contradiction("F", [g1, g2], f"flat splitting subalgebra, dim S1 = {cert['dim_S1']}")
    return False


def _closure(rs: RootSystem, roots) -> frozenset:
    from .root_systems import closure

    return closure(rs, roots)


def rule_k(st: CaseState) -> bool:
    """Reduction: k = h + t must be an equal-rank survivor when it is proper."""
    if st.seed.kind == CASE_I:
        return False
    upper = _closure(st.rs, [g for g in st.planes if st.label[g] != M])
    if len(upper) == len(st.rs.roots):
        return False
    lower_planes = {g for g in st.planes if st.label[g] == H}
    for comps in st.h_roots.values():
        lower_planes |= comps
    lower = _closure(st.rs, lower_planes)
    d = decompose(upper, st.rs.rank)
    st.k_bound = format_type(d.factors, d.corank)
    fits = [(s, lab) for s, lab in _survivor_realizations(st.rs, orbit=True) if lower <= s <= upper]
    if not fits:
        raise Contradiction("K", [st.k_bound], f"k lies in {st.k_bound}, which is not an equal-rank survivor")
    allowed = frozenset().union(*(s for s, _ in fits))
    changed = False
    for g in st.planes:
        if g not in allowed and st.label[g] != M:
            changed |= st.set_m(g, "K", [st.k_bound])
    return changed


RULES: list[tuple[str, Callable[[CaseState], bool]]] = [
    ("A", rule_a),
    ("B", rule_b),
    ("C", rule_c),
    ("D", rule_d),
    ("F'", rule_f_prime),
    ("F", rule_f),
    ("E", rule_e),
    ("K", rule_k),
]


def _lemma_three(st: CaseState) -> None:
    seed = st.seed
    if seed.kind != CASE_III:
        return
    if angle_class(seed.alpha, seed.beta)[0] == 1 and not _same_g2(st.rs, seed.alpha, seed.beta):
        raise Contradiction("D", [seed.alpha, seed.beta], "same-factor seed at angle π/3 or 2π/3")


def derived_type(st: CaseState) -> str:
    roots = set()
    for lam in st.h_roots:
        roots.add(lam)
        roots.add(-lam)
    try:
        d = decompose(roots, st.rs.rank - 1)
    except ValueError:
        return "unresolved(" + ", ".join(sorted(fmt(l) for l in st.h_roots)) + ")"
    names = []
    diag = None
    if st.seed.kind == CASE_II and st.seed_key is not None:
        for comp, f in zip(d.components, d.factors):
            if f == ("A", 1) and any(key(c) == st.seed_key for c in comp):
                diag = f
                break
    for f in d.factors:
        if diag is not None and f == diag:
            names.append("Δ(A1)")
            diag = None
        else:
            names.append(format_type([f]))
    names += ["R"] * d.corank
    return "+".join(names) if names else "0"


def saturate(st: CaseState, order: Optional[list] = None) -> CaseVerdict:
    rules = order or RULES
    try:
        _lemma_three(st)
        while True:
            for name, fn in rules:
                if fn(st):
                    break
            else:
                break
    except Contradiction as c:
        st.log(c.rule, c.witness, "contradiction: " + c.note)
        return CaseVerdict("Contradiction", c.rule, c.witness, None, c.note)
    return CaseVerdict("Saturated", None, None, derived_type(st))


def run_seed(seed: CorankSeed, order: Optional[list] = None) -> tuple[CaseState, CaseVerdict]:
    st = init_case(seed)
    return st, saturate(st, order)


def reduction_bound(seed: CorankSeed) -> Optional[str]:
    """Type of the closure of non-M planes after Rules A-C alone, when it is proper.

    This is the subalgebra that k = h + t is forced into before any
    flat-splitting or bracket argument is used.
    """
    if seed.kind == CASE_I:
        return None
    st = init_case(seed)
    try:
        while any(fn(st) for name, fn in RULES if name in ("A", "B", "C")):
            pass
    except Contradiction:
        return None
    upper = _closure(st.rs, [g for g in st.planes if st.label[g] != M])
    if len(upper) == len(st.rs.roots):
        return None
    d = decompose(upper, st.rs.rank)
    return format_type(d.factors, d.corank)


# ------------------------------------------------------------------ tables

@dataclass
class CaseRow:
    seed: CorankSeed
    verdict: CaseVerdict
    k_bound: Optional[str]
    coset: Optional[str]
    needs_oracle: bool
    oracle: Optional[dict] = None
    trace: list = field(default_factory=list)

    @property
    def outcome(self) -> str:
        if self.oracle is not None and self.oracle.get("contradiction"):
            return "Contradiction(oracle)"
        if self.verdict.status == "Contradiction":
            return f"Contradiction({self.verdict.rule})"
        return f"Saturated({self.verdict.derived_h_type})"

    def to_json(self, with_trace: bool = False) -> dict:
        out = {
            "seed": self.seed.to_json(),
            "verdict": self.verdict.to_json(),
            "k_bound": self.k_bound,
            "coset_space": self.coset,
            "needs_explicit_model_oracle": self.needs_oracle,
            "outcome": self.outcome,
        }
        if self.oracle is not None:
            out["oracle"] = self.oracle
        if with_trace:
            out["trace"] = self.trace
        return out


@dataclass
class CaseTable:
    g: str
    rows: list[CaseRow]
    rejected_case_one: list[str]
    angle_pruned: list[str] = field(default_factory=list)

    def survivors(self) -> list[str]:
        return sorted({r.coset for r in self.rows if r.coset and not r.outcome.startswith("Contradiction")})

    def to_json(self, with_trace: bool = False) -> dict:
        return {
            "g": self.g,
            "rows": [r.to_json(with_trace) for r in self.rows],
            "rejected_case_one": self.rejected_case_one,
            "angle_pruned": self.angle_pruned,
        }


def run_corank_one(type_label: str, rank: Optional[int] = None, *, rank_cap: int = 8,
                   oracle: Optional[Callable] = None, use_oracle: bool = True) -> CaseTable:
    if rank is not None and "+" not in type_label:
        rs = build(type_label, rank)
    else:
        rs = _build_label(type_label)
    if rs.rank > rank_cap:
        raise ValueError(f"rank {rs.rank} exceeds cap {rank_cap}")
    if oracle is None and use_oracle:
        from .explicit_models import corank_oracle as oracle
    rows = []
    for seed in enumerate_seeds(rs):
        st, verdict = run_seed(seed)
        coset = None
        needs = False
        if verdict.status == "Saturated":
            coset = tables.match_saturated(rs.factors, seed.kind, verdict.derived_h_type, seed.label)
            needs = coset is None or tables.oracle_required(rs.factors, seed.label)
        row = CaseRow(seed, verdict, reduction_bound(seed), coset, needs, trace=st.trace)
        if needs and use_oracle and oracle is not None:
            row.oracle = oracle(rs, seed, st)
            if row.oracle.get("contradiction"):
                row.coset = None
        rows.append(row)
    pruned = [s.label for s in enumerate_seeds(rs, include_case_one=False, include_pruned=True)
              if angle_pruned(rs, s.alpha, s.beta)]
    rejected = rejected_case_one(rs) if len(rs.factors) == 1 else []
    return CaseTable(rs.label, rows, rejected, pruned)
