"""Root systems in explicit coordinates and queries on them.

Coordinates are chosen so that A_n sits in R^{n+1}, the E6/E7 systems
carry √3/2 and √2/2 in their last coordinate, and G2 lives in R^2 with
long roots of squared length 3.
"""
from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exact_arith import (
    SQRT2,
    SQRT3,
    ExactVector,
    QExt,
    cartan_pair,
    inner,
    norm_sq,
    qext_sign,
)

TYPE_LABELS = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")
_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
HALF = Fraction(1, 2)


def type_name(label: str, rank: int) -> str:
    return label if label in _FIXED_RANK else f"{label}{rank}"


def canonical_factor(label: str, rank: int) -> list[tuple[str, int]]:
    """Collapse low-rank coincidences (B1=C1=A1, C2=B2, D2=A1+A1, D3=A3)."""
    if label in ("B", "C") and rank == 1:
        return [("A", 1)]
    if label == "C" and rank == 2:
        return [("B", 2)]
    if label == "D" and rank == 2:
        return [("A", 1), ("A", 1)]
    if label == "D" and rank == 3:
        return [("A", 3)]
    if label == "D" and rank == 1:
        return []
    return [(label, rank)]


_ORDER = {lab: i for i, lab in enumerate(TYPE_LABELS)}


def canonical_factors(factors: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for lab, r in factors:
        out.extend(canonical_factor(lab, r))
    return tuple(sorted(out, key=lambda f: (_ORDER[f[0]], -f[1])))


def format_type(factors: Sequence[tuple[str, int]], corank: int = 0) -> str:
    """Human label such as 'C2+A1' or 'A2+R' (R marks one torus dimension)."""
    parts = [type_name(lab, r) for lab, r in factors]
    parts += ["R"] * corank
    return "+".join(parts) if parts else "0"


def parse_type(text: str) -> list[tuple[str, int]]:
    """Parse 'A2+A1', 'G2', 'B3' into factor tuples."""
    factors = []
    for part in text.replace("⊕", "+").split("+"):
        part = part.strip()
        if part in _FIXED_RANK:
            factors.append((part, _FIXED_RANK[part]))
            continue
        m = re.fullmatch(r"([ABCD])(\d+)", part)
        if not m:
            raise ValueError(f"unsupported type label {part!r}")
        factors.append((m.group(1), int(m.group(2))))
    return factors


def _signed_pairs(dim: int, offset: int = 0) -> list[ExactVector]:
    out = []
    for i, j in itertools.combinations(range(dim), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * dim
            v[i], v[j] = si, sj
            out.append(ExactVector(v))
    return out


def _axis(dim: int, coef) -> list[ExactVector]:
    out = []
    for i in range(dim):
        for s in (1, -1):
            v = [0] * dim
            v[i] = coef * s
            out.append(ExactVector(v))
    return out


def _roots_of(label: str, rank: int) -> tuple[int, list[ExactVector]]:
    n = rank
    if label == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        dim = n + 1
        roots = []
        for i, j in itertools.permutations(range(dim), 2):
            v = [0] * dim
            v[i], v[j] = 1, -1
            roots.append(ExactVector(v))
        return dim, roots
    if label == "B":
        if n < 1:
            raise ValueError("B_n needs n >= 1")
        return n, _axis(n, 1) + _signed_pairs(n)
    if label == "C":
        if n < 1:
            raise ValueError("C_n needs n >= 1")
        return n, _axis(n, 2) + _signed_pairs(n)
    if label == "D":
        if n < 2:
            raise ValueError("D_n needs n >= 2")
        return n, _signed_pairs(n)
    if label in _FIXED_RANK and rank != _FIXED_RANK[label]:
        raise ValueError(f"{label} has rank {_FIXED_RANK[label]}, got {rank}")
    if label == "G2":
        h3 = SQRT3 * HALF
        roots = []
        for s in (1, -1):
            roots.append(ExactVector([SQRT3 * s, 0]))
            roots.append(ExactVector([0, s]))
            for t in (1, -1):
                roots.append(ExactVector([h3 * s, Fraction(3, 2) * t]))
                roots.append(ExactVector([h3 * s, HALF * t]))
        return 2, roots
    if label == "F4":
        halves = [ExactVector([HALF * s for s in signs]) for signs in itertools.product((1, -1), repeat=4)]
        return 4, _axis(4, 1) + _signed_pairs(4) + halves
    if label == "E6":
        roots = [ExactVector(list(v) + [0]) for v in _signed_pairs(5)]
        for signs in itertools.product((1, -1), repeat=6):
            if sum(s > 0 for s in signs) % 2 == 1:
                roots.append(ExactVector([HALF * s for s in signs[:5]] + [SQRT3 * HALF * signs[5]]))
        return 6, roots
    if label == "E7":
        roots = [ExactVector(list(v) + [0]) for v in _signed_pairs(6)]
        roots += [ExactVector([0] * 6 + [SQRT2 * s]) for s in (1, -1)]
        for signs in itertools.product((1, -1), repeat=7):
            if sum(s > 0 for s in signs[:6]) % 2 == 0:
                roots.append(ExactVector([HALF * s for s in signs[:6]] + [SQRT2 * HALF * signs[6]]))
        return 7, roots
    if label == "E8":
        roots = _signed_pairs(8)
        for signs in itertools.product((1, -1), repeat=8):
            if sum(s > 0 for s in signs) % 2 == 0:
                roots.append(ExactVector([HALF * s for s in signs]))
        return 8, roots
    raise ValueError(f"unsupported type {label!r}")


def _lex_key(v: Sequence[QExt]) -> tuple:
    return tuple(float(x) for x in v)


def lex_positive(v: Sequence[QExt]) -> bool:
    for x in v:
        s = qext_sign(x)
        if s:
            return s > 0
    return False


@dataclass(frozen=True)
class RootSystem:
    factors: tuple[tuple[str, int], ...]
    ambient_dim: int
    roots: tuple[ExactVector, ...]
    factor_of_root: dict = field(compare=False, hash=False, repr=False)
    root_set: frozenset = field(compare=False, hash=False, repr=False)

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def label(self) -> str:
        return format_type(self.factors)

    def positive_roots(self) -> list[ExactVector]:
        return [r for r in self.roots if lex_positive(r)]

    def to_json(self) -> dict:
        return {
            "factors": [{"type": lab, "rank": r} for lab, r in self.factors],
            "ambient_dim": self.ambient_dim,
            "roots": [r.to_json() for r in self.roots],
        }


def _assemble(factors: list[tuple[str, int]]) -> RootSystem:
    blocks = [_roots_of(lab, r) for lab, r in factors]
    total = sum(d for d, _ in blocks)
    roots: list[ExactVector] = []
    owner: dict[ExactVector, int] = {}
    offset = 0
    for idx, (dim, rs) in enumerate(blocks):
        for r in rs:
            v = ExactVector([0] * offset + list(r) + [0] * (total - offset - dim))
            roots.append(v)
            owner[v] = idx
        offset += dim
    roots.sort(key=_lex_key, reverse=True)
    return RootSystem(tuple(factors), total, tuple(roots), owner, frozenset(roots))


def build(type_label: str, rank: int | None = None) -> RootSystem:
    """Build a simple root system, or a direct sum when given 'A2+A1'."""
    if rank is None:
        return _assemble(parse_type(type_label))
    return _assemble([(type_label, rank)])


def build_sum(factors: Sequence[tuple[str, int]]) -> RootSystem:
    return _assemble(list(factors))


def is_root(rs: RootSystem, v: Sequence) -> bool:
    if len(v) != rs.ambient_dim:
        raise ValueError("dimension mismatch")
    return ExactVector(v) in rs.root_set


def _require_root(rs: RootSystem, *vs: Sequence) -> None:
    for v in vs:
        if not is_root(rs, v):
            raise ValueError(f"{ExactVector(v)!r} is not a root")


def sum_diff_status(rs: RootSystem, a: Sequence, b: Sequence) -> str:
    _require_root(rs, a, b)
    a, b = ExactVector(a), ExactVector(b)
    if a == b or a == -b:
        raise ValueError("sum_diff_status needs a != ±b")
    s = (a + b) in rs.root_set
    d = (a - b) in rs.root_set
    return {(True, True): "both", (True, False): "sum_only", (False, True): "diff_only"}.get((s, d), "neither")


def angle_class(a: Sequence, b: Sequence) -> tuple[Fraction, Fraction]:
    """(4cos²θ, |a|²/|b|²) as exact rationals."""
    aa, bb = norm_sq(a), norm_sq(b)
    if aa.is_zero() or bb.is_zero():
        raise ValueError("angle_class needs nonzero vectors")
    ab = inner(a, b)
    return (ab * ab * 4 / (aa * bb)).to_fraction(), (aa / bb).to_fraction()


def reflect_vec(alpha: Sequence, v: Sequence) -> ExactVector:
    return _reflect_cached(ExactVector(alpha), ExactVector(v))


@lru_cache(maxsize=1 << 18)
def _reflect_cached(alpha: ExactVector, v: ExactVector) -> ExactVector:
    k = inner(v, alpha) * 2 / norm_sq(alpha)
    return ExactVector(x - k * y for x, y in zip(v, alpha))


def reflect(rs: RootSystem, alpha: Sequence, v: Sequence) -> ExactVector:
    _require_root(rs, alpha)
    return reflect_vec(alpha, v)


# ---------------------------------------------------------------- linear algebra

def exact_rank(vectors: Sequence[Sequence[QExt]]) -> int:
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                k = rows[i][col] * inv
                rows[i] = [x - k * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


# ---------------------------------------------------------------- identification

@dataclass
class Decomposition:
    factors: list[tuple[str, int]]
    corank: int
    components: list[list[ExactVector]]  # simple roots per factor

    @property
    def label(self) -> str:
        return format_type(self.factors, self.corank)

    @property
    def canonical(self) -> tuple:
        return canonical_factors(self.factors), self.corank


def simple_roots(subset: Iterable[Sequence]) -> list[ExactVector]:
    roots = {ExactVector(r) for r in subset}
    pos = sorted((r for r in roots if lex_positive(r)), key=_lex_key, reverse=True)
    pos_set = set(pos)
    simple = []
    for r in pos:
        if not any((r - p) in pos_set for p in pos if p != r):
            simple.append(r)
    return simple


def generate_from_simple(simple: Sequence[ExactVector]) -> set[ExactVector]:
    roots = set(simple) | {-s for s in simple}
    frontier = list(roots)
    while frontier:
        nxt = []
        for v in frontier:
            for s in simple:
                w = reflect_vec(s, v)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    return roots


def _connected_components(n: int, adj: dict[int, set[int]]) -> list[list[int]]:
    seen, comps = set(), []
    for i in range(n):
        if i in seen:
            continue
        stack, comp = [i], []
        seen.add(i)
        while stack:
            j = stack.pop()
            comp.append(j)
            for k in adj[j]:
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        comps.append(sorted(comp))
    return comps


def _classify_component(simple: list[ExactVector]) -> tuple[str, int]:
    n = len(simple)
    if n == 1:
        return ("A", 1)
    lengths = [norm_sq(s) for s in simple]
    bonds: dict[tuple[int, int], int] = {}
    deg = Counter()
    for i, j in itertools.combinations(range(n), 2):
        n1, n2, _ = cartan_pair(simple[i], simple[j])
        m = (n1 * n2).to_fraction()
        if m:
            bonds[(i, j)] = int(m)
            deg[i] += 1
            deg[j] += 1
    mult = set(bonds.values())
    if 3 in mult:
        return ("G2", 2)
    if 2 in mult:
        if n == 2:
            return ("B", 2)
        (i, j), = [k for k, v in bonds.items() if v == 2]
        if deg[i] == 2 and deg[j] == 2:
            return ("F4", 4)
        leaf = i if deg[i] == 1 else j
        other = j if leaf == i else i
        return ("B", n) if lengths[leaf] < lengths[other] else ("C", n)
    branch = [i for i in range(n) if deg[i] == 3]
    if not branch:
        return ("A", n)
    b = branch[0]
    arms = []
    for start in (j for j in range(n) if (min(b, j), max(b, j)) in bonds):
        length, prev, cur = 1, b, start
        while True:
            nxt = [k for k in range(n) if k != prev and (min(cur, k), max(cur, k)) in bonds]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return ("D", n)
    return {(1, 2, 2): ("E6", 6), (1, 2, 3): ("E7", 7), (1, 2, 4): ("E8", 8)}[tuple(arms)]


def decompose(subset: Iterable[Sequence], total_rank: int | None = None) -> Decomposition:
    roots = {ExactVector(r) for r in subset}
    if any(-r not in roots for r in roots):
        raise ValueError("subset is not symmetric")
    simple = simple_roots(roots)
    for a, b in itertools.combinations(simple, 2):
        if not cartan_pair(a, b)[2]:
            raise ValueError(f"non-crystallographic pair {a!r}, {b!r}")
    if exact_rank(simple) != len(simple) or generate_from_simple(simple) != roots:
        raise ValueError("subset is not a root system")
    adj = {i: set() for i in range(len(simple))}
    for i, j in itertools.combinations(range(len(simple)), 2):
        if not inner(simple[i], simple[j]).is_zero():
            adj[i].add(j)
            adj[j].add(i)
    comps = _connected_components(len(simple), adj)
    factors, components = [], []
    for comp in comps:
        sub = [simple[i] for i in comp]
        factors.append(_classify_component(sub))
        components.append(sub)
    order = sorted(range(len(factors)), key=lambda k: (_ORDER[factors[k][0]], -factors[k][1]))
    factors = [factors[k] for k in order]
    components = [components[k] for k in order]
    corank = 0 if total_rank is None else total_rank - len(simple)
    return Decomposition(factors, corank, components)


def identify_type(rs: RootSystem | None, subset: Iterable[Sequence]) -> tuple[list[tuple[str, int]], int]:
    """Irreducible factors of a symmetric root subset plus torus corank inside rs."""
    d = decompose(subset, rs.rank if rs is not None else None)
    return d.factors, d.corank


# ---------------------------------------------------------------- closed subsystems

def is_closed(rs: RootSystem, subset: frozenset) -> bool:
    items = list(subset)
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            s = a + b
            if s in rs.root_set and s not in subset:
                return False
    return True


def closure(rs: RootSystem, subset: Iterable[ExactVector]) -> frozenset:
    cur = set(subset) | {-r for r in subset}
    changed = True
    while changed:
        changed = False
        items = list(cur)
        for i, a in enumerate(items):
            for b in items[i + 1:]:
                s = a + b
                if s in rs.root_set and s not in cur:
                    cur.add(s)
                    cur.add(-s)
                    changed = True
    return frozenset(cur)


@dataclass(frozen=True)
class SubsetSignature:
    cardinality: int
    lengths: tuple
    pair_classes: tuple
    factors: tuple
    corank: int

    @property
    def label(self) -> str:
        return format_type(self.factors, self.corank)


def _frac_key(x: QExt):
    return x.to_fraction() if x.is_rational() else tuple(x.coeffs)


def subset_signature(rs: RootSystem, subset: Iterable[Sequence]) -> SubsetSignature:
    items = sorted({ExactVector(r) for r in subset}, key=_lex_key)
    lengths = [norm_sq(r) for r in items]
    pairs = Counter()
    for i, j in itertools.combinations(range(len(items)), 2):
        ab = inner(items[i], items[j])
        fc = ab * ab * 4 / (lengths[i] * lengths[j])
        ratio = lengths[i] / lengths[j]
        if ratio < 1:
            ratio = 1 / ratio
        pairs[(_frac_key(fc), _frac_key(ratio), qext_sign(ab))] += 1
    d = decompose(items, rs.rank)
    return SubsetSignature(
        len(items),
        tuple(sorted(Counter(_frac_key(x) for x in lengths).items(), key=str)),
        tuple(sorted(pairs.items(), key=str)),
        tuple(d.factors),
        d.corank,
    )


def _highest_root(rs: RootSystem, simple: list[ExactVector], roots: set) -> ExactVector:
    # the root poset of an irreducible system has a unique maximum
    tops = [r for r in roots if lex_positive(r) and all((r + s) not in roots for s in simple)]
    if len(tops) != 1:
        raise RuntimeError("highest root is not unique")
    return tops[0]


def _component_roots(rs: RootSystem, subset: frozenset, comp: list[ExactVector]) -> set:
    return generate_from_simple(comp) & subset


def _children(rs: RootSystem, subset: frozenset) -> list[frozenset]:
    if not subset:
        return []
    d = decompose(subset, rs.rank)
    out = []
    for k, comp in enumerate(d.components):
        comp_roots = _component_roots(rs, subset, comp)
        rest = subset - comp_roots
        lowest = -_highest_root(rs, comp, comp_roots)
        extended = list(comp) + [lowest]
        bases = [[s for i, s in enumerate(extended) if i != drop] for drop in range(len(comp))]
        bases += [[s for i, s in enumerate(comp) if i != drop] for drop in range(len(comp))]
        for base in bases:
            sub = generate_from_simple(base) if base else set()
            child = closure(rs, sub | rest)
            if child != subset:
                out.append(child)
    return out


def _descent(rs: RootSystem) -> set[frozenset]:
    seen: set[frozenset] = set()
    by_sig: dict[SubsetSignature, frozenset] = {}
    frontier = [rs.root_set]
    while frontier:
        nxt = []
        for s in frontier:
            if s in seen:
                continue
            seen.add(s)
            sig = subset_signature(rs, s)
            if sig in by_sig:
                continue
            by_sig[sig] = s
            nxt.extend(_children(rs, s))
        frontier = nxt
    return set(by_sig.values())


def brute_force_closed(rs: RootSystem) -> list[frozenset]:
    """Every symmetric closed subset, by exhaustive search."""
    pos = rs.positive_roots()
    found = []
    for mask in range(1 << len(pos)):
        chosen = [p for i, p in enumerate(pos) if mask >> i & 1]
        s = frozenset(chosen + [-p for p in chosen])
        if is_closed(rs, s):
            found.append(s)
    return found


BRUTE_FORCE_LIMIT = 24
DEFAULT_RANK_CAP = 8


@dataclass
class SubsystemClass:
    roots: frozenset
    signature: SubsetSignature
    merged: int = 1  # how many distinct Weyl orbits share this signature, when known

    @property
    def label(self) -> str:
        return self.signature.label


def _sig_sort_key(sig: SubsetSignature):
    return (-sig.cardinality, str(sig.factors), sig.corank, str(sig.lengths), str(sig.pair_classes))


def weyl_orbit(rs: RootSystem, subset: frozenset, limit: int = 20000) -> set[frozenset]:
    simple = simple_roots(rs.roots)
    orbit = {subset}
    frontier = [subset]
    while frontier and len(orbit) < limit:
        nxt = []
        for s in frontier:
            for a in simple:
                t = frozenset(reflect_vec(a, v) for v in s)
                if t not in orbit:
                    orbit.add(t)
                    nxt.append(t)
        frontier = nxt
    return orbit


def closed_subsystems(rs: RootSystem, rank_cap: int = DEFAULT_RANK_CAP, check_merges: bool = False,
                      brute_force: bool = True) -> list[SubsystemClass]:
    """Symmetric closed subsets of rs, one per signature, largest first.

    With ``brute_force=False`` only the maximal-subsystem descent runs, which
    is what the exhaustive search is compared against.
    """
    if rs.rank > rank_cap:
        raise ValueError(f"rank {rs.rank} exceeds cap {rank_cap}")
    classes: dict[SubsetSignature, SubsystemClass] = {}
    for s in sorted(_descent(rs), key=lambda s: (-len(s), sorted(map(_lex_key, s)))):
        sig = subset_signature(rs, s)
        classes.setdefault(sig, SubsystemClass(s, sig))
    if brute_force and len(rs.roots) <= BRUTE_FORCE_LIMIT:
        groups: dict[SubsetSignature, list[frozenset]] = {}
        for s in brute_force_closed(rs):
            groups.setdefault(subset_signature(rs, s), []).append(s)
        for sig, members in groups.items():
            if sig not in classes:
                classes[sig] = SubsystemClass(min(members, key=lambda s: sorted(map(_lex_key, s))), sig)
            if check_merges:
                remaining = set(members)
                orbits = 0
                while remaining:
                    orbits += 1
                    remaining -= weyl_orbit(rs, next(iter(remaining)))
                classes[sig].merged = orbits
    return [classes[k] for k in sorted(classes, key=_sig_sort_key)]
