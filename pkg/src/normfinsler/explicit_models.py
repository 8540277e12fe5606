"""Explicit matrix models of (g, h) pairs.

Matrices are sparse dicts {(row, col): Gauss} whose entries are complex
numbers with QExt real and imaginary parts, so brackets, centralizers and
orthogonal complements are computed exactly.  Characteristic polynomials
and root isolation go through sympy.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import sympy
from scipy.optimize import minimize

from .exact_arith import QExt, SQRT3

ZERO = QExt()
ONE = QExt(1)


class Gauss:
    """Complex number re + i·im over QExt."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0) -> None:
        self.re = re if isinstance(re, QExt) else QExt(re)
        self.im = im if isinstance(im, QExt) else QExt(im)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __add__(self, o: "Gauss") -> "Gauss":
        return Gauss(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "Gauss") -> "Gauss":
        return Gauss(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "Gauss":
        return Gauss(-self.re, -self.im)

    def __mul__(self, o: "Gauss") -> "Gauss":
        return Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def scale(self, k: QExt) -> "Gauss":
        return Gauss(self.re * k, self.im * k)

    def conj(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    def __eq__(self, o) -> bool:
        return isinstance(o, Gauss) and self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"({self.re}, {self.im})"

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_sympy(self):
        return _qext_sympy(self.re) + sympy.I * _qext_sympy(self.im)


I_UNIT = Gauss(0, 1)
G_ONE = Gauss(1, 0)


def _qext_sympy(x: QExt):
    a, b, c, d = x.coeffs
    return (sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(2)
            + sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(3)
            + sympy.Rational(d.numerator, d.denominator) * sympy.sqrt(6))


class Mat:
    """Sparse square complex matrix with exact entries."""

    __slots__ = ("n", "e")

    def __init__(self, n: int, entries: Optional[dict] = None) -> None:
        self.n = n
        self.e = {k: v for k, v in (entries or {}).items() if not v.is_zero()}

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        """Rows of ints, Fractions, QExt, complex-with-int-parts, or Gauss."""
        n = len(rows)
        ent = {}
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                ent[(i, j)] = _to_gauss(x)
        return cls(n, ent)

    def __add__(self, o: "Mat") -> "Mat":
        out = dict(self.e)
        for k, v in o.e.items():
            out[k] = out[k] + v if k in out else v
        return Mat(self.n, out)

    def __sub__(self, o: "Mat") -> "Mat":
        return self + o.scale(QExt(-1))

    def __neg__(self) -> "Mat":
        return self.scale(QExt(-1))

    def scale(self, k) -> "Mat":
        if isinstance(k, Gauss):
            return Mat(self.n, {p: v * k for p, v in self.e.items()})
        k = k if isinstance(k, QExt) else QExt(k)
        return Mat(self.n, {p: v.scale(k) for p, v in self.e.items()})

    def __matmul__(self, o: "Mat") -> "Mat":
        by_row: dict[int, list] = {}
        for (k, j), v in o.e.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.e.items():
            for j, b in by_row.get(k, ()):
                p = a * b
                out[(i, j)] = out[(i, j)] + p if (i, j) in out else p
        return Mat(self.n, out)

    def dagger(self) -> "Mat":
        return Mat(self.n, {(j, i): v.conj() for (i, j), v in self.e.items()})

    def transpose(self) -> "Mat":
        return Mat(self.n, {(j, i): v for (i, j), v in self.e.items()})

    def is_zero(self) -> bool:
        return not self.e

    def __eq__(self, o) -> bool:
        return isinstance(o, Mat) and self.n == o.n and (self - o).is_zero()

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.e.items())))

    def to_numpy(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=complex)
        for (i, j), v in self.e.items():
            a[i, j] = v.to_complex()
        return a

    def to_sympy(self) -> sympy.Matrix:
        m = sympy.zeros(self.n, self.n)
        for (i, j), v in self.e.items():
            m[i, j] = v.to_sympy()
        return m

    def to_json(self) -> list:
        rows = [[["0", "0"] for _ in range(self.n)] for _ in range(self.n)]
        for (i, j), v in self.e.items():
            rows[i][j] = [str(v.re), str(v.im)]
        return rows


def _to_gauss(x) -> Gauss:
    if isinstance(x, Gauss):
        return x
    if isinstance(x, complex):
        return Gauss(Fraction(x.real).limit_denominator(), Fraction(x.imag).limit_denominator())
    return Gauss(x, 0)


def bracket(x: Mat, y: Mat) -> Mat:
    return x @ y - y @ x


def ip(x: Mat, y: Mat) -> QExt:
    """⟨X, Y⟩ = −Re trace(XY)."""
    total = ZERO
    for (i, j), a in x.e.items():
        b = y.e.get((j, i))
        if b is not None:
            total = total + (a * b).re
    return -total


def unit(n: int, i: int, j: int, val=G_ONE) -> Mat:
    return Mat(n, {(i, j): _to_gauss(val)})


# ---------------------------------------------------------------- linear algebra

def nullspace(rows: list[list[QExt]], ncols: int) -> list[list[QExt]]:
    """Basis of {x : rows·x = 0} by exact Gaussian elimination."""
    m = [list(r) for r in rows if any(not x.is_zero() for x in r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def rank(vectors: list[list[QExt]]) -> int:
    """Row rank by exact elimination."""
    m = [list(v) for v in vectors]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        for i in range(r + 1, len(m)):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def gram_schmidt(vectors: Sequence[Mat]) -> list[Mat]:
    """Orthogonal (not normalised) basis of the span, dropping dependent vectors."""
    out: list[Mat] = []
    norms: list[QExt] = []
    for v in vectors:
        w = v
        for b, nb in zip(out, norms):
            c = ip(w, b)
            if not c.is_zero():
                w = w - b.scale(c / nb)
        if not w.is_zero():
            nw = ip(w, w)
            if not nw.is_zero():
                out.append(w)
                norms.append(nw)
    return out


# ---------------------------------------------------------------- models

@dataclass
class MatrixAlgebra:
    name: str
    size: int
    g_basis: list[Mat]
    h_basis: list[Mat]
    notes: list[str] = field(default_factory=list)
    m_basis: list[Mat] = field(init=False)
    _norms: list[QExt] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.h_basis = gram_schmidt(self.h_basis)
        m = []
        for b in self.g_basis:
            w = b
            for h in self.h_basis:
                c = ip(w, h)
                if not c.is_zero():
                    w = w - h.scale(c / ip(h, h))
            m.append(w)
        self.m_basis = gram_schmidt(m)
        if len(self.h_basis) + len(self.m_basis) != len(self.g_basis):
            raise ValueError(f"{self.name}: h is not inside g")
        self.g_basis = self.h_basis + self.m_basis
        self._norms = [ip(b, b) for b in self.g_basis]
        if any(n.sign() <= 0 for n in self._norms):
            raise ValueError(f"{self.name}: degenerate inner product")

    @property
    def dim_g(self) -> int:
        return len(self.g_basis)

    @property
    def dim_h(self) -> int:
        return len(self.h_basis)

    @property
    def dim_m(self) -> int:
        return len(self.m_basis)

    def coords(self, x: Mat) -> list[QExt]:
        """Coordinates in the orthogonal g basis; raises if x is not in g."""
        cs = [ip(x, b) / n for b, n in zip(self.g_basis, self._norms)]
        if not (self.combine(cs) - x).is_zero():
            raise ValueError(f"matrix is not in {self.name}")
        return cs

    def combine(self, cs: Sequence[QExt], basis: Optional[Sequence[Mat]] = None) -> Mat:
        out = Mat(self.size)
        for c, b in zip(cs, basis or self.g_basis):
            if not c.is_zero():
                out = out + b.scale(c)
        return out

    def in_m(self, x: Mat) -> bool:
        return all(ip(x, h).is_zero() for h in self.h_basis)

    def project_m(self, x: Mat) -> Mat:
        cs = self.coords(x)
        k = self.dim_h
        return self.combine(cs[k:], self.m_basis)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "dim_g": self.dim_g,
            "dim_h": self.dim_h,
            "dim_m": self.dim_m,
            "g_basis": [b.to_json() for b in self.g_basis],
            "h_basis": [b.to_json() for b in self.h_basis],
            "notes": self.notes,
        }


def _real_pair(z: Mat) -> list[Mat]:
    """The two real directions Z − Z†, i(Z + Z†) of a complex root vector."""
    return [z - z.dagger(), (z + z.dagger()).scale(I_UNIT)]


def su_basis(n: int, size: Optional[int] = None) -> list[Mat]:
    size = size or n
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            out += _real_pair(unit(size, i, j))
    for k in range(1, n):
        out.append(Mat(size, {(k - 1, k - 1): I_UNIT, (k, k): -I_UNIT}))
    return out


def u_basis(n: int, size: Optional[int] = None) -> list[Mat]:
    size = size or n
    return su_basis(n, size) + [Mat(size, {(i, i): I_UNIT for i in range(n)})]


def so_basis(n: int, coords: Optional[Sequence[int]] = None, size: Optional[int] = None) -> list[Mat]:
    idx = list(coords) if coords is not None else list(range(n))
    size = size or n
    return [Mat(size, {(a, b): G_ONE, (b, a): -G_ONE}) for a, b in itertools.combinations(idx, 2)]


# quaternion units as 2×2 complex blocks: a+bi+cj+dk ↦ [[a+bi, c+di], [−c+di, a−bi]]
_QUAT = {
    "1": ((G_ONE, Gauss()), (Gauss(), G_ONE)),
    "i": ((I_UNIT, Gauss()), (Gauss(), -I_UNIT)),
    "j": ((Gauss(), G_ONE), (-G_ONE, Gauss())),
    "k": ((Gauss(), I_UNIT), (I_UNIT, Gauss())),
}
_QCONJ_SIGN = {"1": 1, "i": -1, "j": -1, "k": -1}


def _quat_block(size: int, p: int, q: int, unit_name: str, coef: int = 1) -> dict:
    blk = _QUAT[unit_name]
    out = {}
    for a in range(2):
        for b in range(2):
            if not blk[a][b].is_zero():
                out[(2 * p + a, 2 * q + b)] = blk[a][b].scale(QExt(coef))
    return out


def sp_basis(n: int, size: Optional[int] = None) -> list[Mat]:
    """sp(n) as quaternionic anti-Hermitian n×n matrices, in 2n×2n complex form."""
    size = size or 2 * n
    out = []
    for p in range(n):
        for u in ("i", "j", "k"):
            out.append(Mat(size, _quat_block(size, p, p, u)))
    for p in range(n):
        for q in range(p + 1, n):
            for u in ("1", "i", "j", "k"):
                ent = _quat_block(size, p, q, u)
                # entry (q, p) is −conj(u)
                for k2, v in _quat_block(size, q, p, u, -_QCONJ_SIGN[u]).items():
                    ent[k2] = v
                out.append(Mat(size, ent))
    return out


def sp_complex_basis(n: int) -> dict:
    """sp(n) ⊂ u(2n) preserving J = [[0, I], [−I, 0]], keyed by root of C_n.

    Roots are returned as integer tuples (2e_i, e_i ± e_j) with their real
    plane spanned by two matrices.
    """
    size = 2 * n
    planes: dict[tuple, list[Mat]] = {}

    def vec(*pairs):
        v = [0] * n
        for i, c in pairs:
            v[i] += c
        return tuple(v)

    for i in range(n):
        planes[vec((i, 2))] = _real_pair(unit(size, i, n + i))
    for i in range(n):
        for j in range(i + 1, n):
            planes[vec((i, 1), (j, -1))] = _real_pair(unit(size, i, j) - unit(size, n + j, n + i))
            planes[vec((i, 1), (j, 1))] = _real_pair(unit(size, i, n + j) + unit(size, j, n + i))
    torus = [Mat(size, {(i, i): I_UNIT, (n + i, n + i): -I_UNIT}) for i in range(n)]
    return {"planes": planes, "torus": torus, "size": size}


def so_odd_planes(n: int) -> dict:
    """so(2n+1) with torus rotations in planes (2i+1, 2i+2) and a fixed coordinate 0."""
    size = 2 * n + 1
    torus = [Mat(size, {(2 * i + 1, 2 * i + 2): G_ONE, (2 * i + 2, 2 * i + 1): -G_ONE}) for i in range(n)]
    return {"torus": torus, "size": size, "basis": so_basis(size)}


def _berger_h() -> list[Mat]:
    """Irreducible su(2) in sp(2) orthogonal to the diagonal quaternion (i, −3i)."""
    h0 = Mat(4, {(0, 0): Gauss(0, 3), (1, 1): Gauss(0, -3), (2, 2): I_UNIT, (3, 3): -I_UNIT})
    s3 = Gauss(SQRT3, 0)
    e = Mat(4, {(3, 1): s3, (2, 3): Gauss(2, 0), (0, 2): -s3})
    return [h0] + _real_pair(e)


def _parse_n(pattern: str, name: str) -> Optional[tuple]:
    m = re.fullmatch(pattern, name.replace(" ", ""))
    return tuple(int(x) for x in m.groups()) if m else None


CATALOG = (
    "su(n)/su(n-1)",
    "su(n)/s(u(n-1)+u(1))",
    "u(n)/u(n-1)",
    "sp(n)/sp(n-1)",
    "so(n)/so(n-1)",
    "so(5)/so(3)",
    "sp(2)/su(2)",
    "su(5)/sp(2)+R",
    "su(3)/t",
    "sp(n)/t",
    "spin9-vt-family",
)


@lru_cache(maxsize=None)
def build_model(name: str) -> MatrixAlgebra:
    """Exact model for a catalog name such as 'su(4)/su(3)' or 'sp(2)/su(2)'."""
    key = name.replace(" ", "")
    if key in ("sp(2)/su(2)", "sp(2)/su(2)-Berger"):
        return MatrixAlgebra("sp(2)/su(2)", 4, sp_basis(2), _berger_h(),
                             ["su(2) acts on quaternion 2-space by its irreducible 4-dimensional representation"])
    if key in ("su(5)/sp(2)+R", "su(5)/sp(2)⊕R"):
        center = Mat(5, {(i, i): I_UNIT for i in range(4)} | {(4, 4): Gauss(0, -4)})
        return MatrixAlgebra("su(5)/sp(2)+R", 5, su_basis(5), sp_basis(2, size=5) + [center],
                             ["sp(2) in the upper left 4×4 corner"])
    if key == "su(3)/t":
        return MatrixAlgebra("su(3)/t", 3, su_basis(3), su_basis(3)[6:])
    if key == "so(5)/so(3)":
        return MatrixAlgebra("so(5)/so(3)", 5, so_basis(5), so_basis(5, coords=(0, 3, 4)),
                             ["so(3) rotates coordinates 0, 3, 4"])
    if key == "spin9-vt-family":
        return MatrixAlgebra("spin9-vt-family", 9, so_basis(9), [],
                             ["h is not built; membership of v(t) in m is taken as given"])
    p = _parse_n(r"su\((\d+)\)/su\((\d+)\)", key)
    if p and p[1] == p[0] - 1 and p[0] >= 2:
        n = p[0]
        return MatrixAlgebra(key, n, su_basis(n), su_basis(n - 1, n))
    p = _parse_n(r"su\((\d+)\)/s\(u\((\d+)\)\+u\(1\)\)", key)
    if p and p[1] == p[0] - 1:
        n = p[0]
        extra = Mat(n, {(i, i): I_UNIT for i in range(n - 1)} | {(n - 1, n - 1): Gauss(0, -(n - 1))})
        return MatrixAlgebra(key, n, su_basis(n), su_basis(n - 1, n) + [extra])
    p = _parse_n(r"u\((\d+)\)/u\((\d+)\)", key)
    if p and p[1] == p[0] - 1:
        n = p[0]
        return MatrixAlgebra(key, n, u_basis(n), u_basis(n - 1, n))
    p = _parse_n(r"sp\((\d+)\)/sp\((\d+)\)", key)
    if p and p[1] == p[0] - 1 and p[0] >= 2:
        n = p[0]
        return MatrixAlgebra(key, 2 * n, sp_basis(n), sp_basis(n - 1, 2 * n))
    p = _parse_n(r"so\((\d+)\)/so\((\d+)\)", key)
    if p and p[1] == p[0] - 1 and p[0] >= 3:
        n = p[0]
        return MatrixAlgebra(key, n, so_basis(n), so_basis(n, coords=range(n - 1)))
    p = _parse_n(r"sp\((\d+)\)/t", key)
    if p:
        n = p[0]
        data = sp_complex_basis(n)
        g = data["torus"] + [m for pl in data["planes"].values() for m in pl]
        return MatrixAlgebra(key, 2 * n, g, data["torus"])
    raise ValueError(f"unsupported model {name!r}")


def orth_complement(model: MatrixAlgebra) -> list[Mat]:
    return list(model.m_basis)


def check_model(model: MatrixAlgebra) -> dict:
    """Exact closure checks: [g,g]⊂g, [h,h]⊂h, [h,m]⊂m, ⟨h,m⟩=0."""
    out = {"g_closed": True, "h_subalgebra": True, "h_m_invariant": True, "orthogonal": True}
    k = model.dim_h
    for i, a in enumerate(model.g_basis):
        for j in range(i + 1, len(model.g_basis)):
            b = model.g_basis[j]
            try:
                cs = model.coords(bracket(a, b))
            except ValueError:
                out["g_closed"] = False
                continue
            if i < k and j < k and any(not c.is_zero() for c in cs[k:]):
                out["h_subalgebra"] = False
            if i < k <= j and any(not c.is_zero() for c in cs[:k]):
                out["h_m_invariant"] = False
    for h in model.h_basis:
        for m in model.m_basis:
            if not ip(h, m).is_zero():
                out["orthogonal"] = False
    return out


# ---------------------------------------------------------------- centralizers

def _ad_rows(model: MatrixAlgebra, xs: Sequence[Mat], basis: Sequence[Mat]) -> list[list[QExt]]:
    cols = [[c for x in xs for c in model.coords(bracket(x, b))] for b in basis]
    return [list(r) for r in zip(*cols)] if cols else []


def span_kernel(model: MatrixAlgebra, xs: Sequence[Mat], basis: Sequence[Mat]) -> list[Mat]:
    """Elements of span(basis) commuting with every x in xs."""
    rows = _ad_rows(model, xs, basis)
    return [model.combine(v, basis) for v in nullspace(rows, len(basis))]


def centralizer(model: MatrixAlgebra, xs: Sequence[Mat]) -> list[Mat]:
    return span_kernel(model, xs, model.g_basis)


def center_of(model: MatrixAlgebra, basis: Sequence[Mat]) -> list[Mat]:
    return span_kernel(model, basis, basis)


def _in_span(model: MatrixAlgebra, x: Mat, basis: Sequence[Mat]) -> bool:
    vecs = [model.coords(b) for b in basis]
    return rank(vecs + [model.coords(x)]) == rank(vecs) if vecs else x.is_zero()


@dataclass
class FlatWitness:
    u: Mat
    v: Mat
    s0_basis: list[Mat]
    split_ok: bool
    dim_m_part: int

    def to_json(self) -> dict:
        return {
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "dim_s0": len(self.s0_basis),
            "split_ok": self.split_ok,
            "dim_m_part": self.dim_m_part,
        }


def flat_splitting_test(model: MatrixAlgebra, u: Mat, v: Mat) -> Optional[FlatWitness]:
    """Witness when s0 = center(centralizer{u, v}) splits and meets m in dim ≥ 2."""
    if not bracket(u, v).is_zero():
        raise ValueError("u and v do not commute")
    if not (model.in_m(u) and model.in_m(v)):
        raise ValueError("u, v must lie in m")
    if rank([model.coords(u), model.coords(v)]) != 2:
        raise ValueError("u, v are linearly dependent")
    s0 = center_of(model, centralizer(model, [u, v]))
    m_parts = [model.project_m(s) for s in s0]
    split = all(_in_span(model, p, s0) for p in m_parts)
    dim_m = rank([model.coords(p) for p in m_parts]) if m_parts else 0
    if split and dim_m >= 2:
        return FlatWitness(u, v, s0, True, dim_m)
    return None


# ---------------------------------------------------------------- commuting pairs

@dataclass
class PairSearch:
    pair: Optional[tuple[Mat, Mat]]
    stage: Optional[str]
    exact_found: bool
    numeric_min: float

    @property
    def numeric_found(self) -> bool:
        return self.numeric_min < 1e-10

    def to_json(self) -> dict:
        return {
            "found": self.pair is not None,
            "stage": self.stage,
            "exact_found": self.exact_found,
            "numeric_min": self.numeric_min,
        }


def _exact_stage(model: MatrixAlgebra) -> Optional[tuple[Mat, Mat]]:
    ms = model.m_basis
    depth = 3 if len(ms) <= 6 else 2
    for size in range(1, depth + 1):
        for idx in itertools.combinations(range(len(ms)), size):
            for signs in itertools.product((1, -1), repeat=size - 1):
                x = ms[idx[0]]
                for s, i in zip(signs, idx[1:]):
                    x = x + ms[i].scale(QExt(s))
                for y in span_kernel(model, [x], ms):
                    if rank([model.coords(x), model.coords(y)]) == 2:
                        return x, y
    return None


def _structure_numeric(model: MatrixAlgebra) -> np.ndarray:
    """c[i, j, k]: component k of [m_i, m_j] in an orthonormal g basis."""
    ms = model.m_basis
    scale_g = [float(n) ** 0.5 for n in model._norms]
    scale_m = scale_g[model.dim_h:]
    d, D = len(ms), model.dim_g
    c = np.zeros((d, d, D))
    for i in range(d):
        for j in range(i + 1, d):
            cs = model.coords(bracket(ms[i], ms[j]))
            row = np.array([float(x) * s for x, s in zip(cs, scale_g)]) / (scale_m[i] * scale_m[j])
            c[i, j] = row
            c[j, i] = -row
    return c


def _numeric_stage(model: MatrixAlgebra, starts: int = 12, seed: int = 0) -> tuple[float, Optional[np.ndarray]]:
    c = _structure_numeric(model)
    d = c.shape[0]
    if d < 2:
        return float("inf"), None
    rng = np.random.default_rng(seed)

    def unpack(p):
        x, y = p[:d], p[d:]
        x = x / np.linalg.norm(x)
        y = y - (y @ x) * x
        y = y / np.linalg.norm(y)
        return x, y

    def f(p):
        x, y = unpack(p)
        b = np.einsum("i,j,ijk->k", x, y, c)
        return float(b @ b)

    best, best_p = float("inf"), None
    for _ in range(starts):
        p0 = rng.normal(size=2 * d)
        res = minimize(f, p0, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        if res.fun < best:
            best, best_p = res.fun, res.x
    return best, best_p


def _rationalize(model: MatrixAlgebra, p: np.ndarray) -> Optional[tuple[Mat, Mat]]:
    d = model.dim_m
    scale_m = [float(n) ** 0.5 for n in model._norms[model.dim_h:]]
    x, y = p[:d] / np.linalg.norm(p[:d]), p[d:]
    y = y - (y @ x) * x
    vecs = []
    for w in (x, y):
        w = w / np.max(np.abs(w))
        cs = [QExt(Fraction(float(a) / s).limit_denominator(10**6)) for a, s in zip(w, scale_m)]
        vecs.append(model.combine(cs, model.m_basis))
    u, v = vecs
    if bracket(u, v).is_zero() and rank([model.coords(u), model.coords(v)]) == 2:
        return u, v
    return None


def commuting_pair_search(model: MatrixAlgebra, *, numeric: bool = True, starts: int = 12) -> PairSearch:
    """Exact root-plane search, then multistart minimisation of ‖[X, Y]‖²."""
    pair = _exact_stage(model)
    exact = pair is not None
    nmin = float("nan")
    stage = "exact" if exact else None
    if numeric:
        nmin, p = _numeric_stage(model, starts)
        if pair is None and nmin < 1e-10 and p is not None:
            pair = _rationalize(model, p)
            stage = "numeric" if pair is not None else None
    return PairSearch(pair, stage, exact, nmin)


# ---------------------------------------------------------------- eigenvalues

LAM = sympy.Symbol("lam")


@dataclass
class EigenSeq:
    charpoly: list  # sympy coefficients of det(λ − (−iX)), leading first
    values: list[float]
    intervals: list[tuple[Fraction, Fraction]]
    certified: bool

    def to_json(self) -> dict:
        return {
            "charpoly": [str(c) for c in self.charpoly],
            "values": self.values,
            "certified": self.certified,
        }


def _hermitian(x: Mat) -> sympy.Matrix:
    return (-sympy.I * x.to_sympy()).applyfunc(sympy.expand)


@lru_cache(maxsize=512)
def _charpoly(x: Mat) -> tuple:
    p = _hermitian(x).charpoly(LAM)
    return tuple(sympy.expand(c) for c in p.all_coeffs())


def eigenvalue_sequence(x: Mat, eps: Fraction = Fraction(1, 10**12)) -> EigenSeq:
    """Imaginary parts of the eigenvalues of x, sorted, with isolating intervals."""
    coeffs = list(_charpoly(x))
    if any(sympy.im(c) != 0 for c in coeffs):
        raise ValueError("matrix is not anti-Hermitian")
    poly = sympy.Poly(coeffs, LAM)
    if poly.domain.is_QQ or poly.domain.is_ZZ:
        ivs = poly.intervals(eps=sympy.Rational(eps.numerator, eps.denominator))
        vals, out = [], []
        for (lo, hi), mult in ivs:
            lo_f, hi_f = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
            for _ in range(mult):
                vals.append(float((lo_f + hi_f) / 2))
                out.append((lo_f, hi_f))
        order = sorted(range(len(vals)), key=vals.__getitem__)
        return EigenSeq(coeffs, [vals[i] for i in order], [out[i] for i in order], True)
    roots = np.sort(np.linalg.eigvalsh(np.array(_hermitian(x).evalf(30).tolist(), dtype=complex)))
    return EigenSeq(coeffs, [float(r) for r in roots], [], False)


def seq_dependent(x: Mat, y: Mat) -> bool:
    """True iff the eigenvalue multisets of x and y are proportional."""
    if x.n != y.n:
        raise ValueError("matrix sizes differ")
    p, q = _charpoly(x), _charpoly(y)
    n = len(p) - 1
    ks = [k for k in range(1, n + 1) if p[k] != 0]
    if not ks:
        return all(c == 0 for c in q[1:])
    k = ks[0]
    # prefer an even index: traceless matrices have p[1] = 0 anyway
    even = [j for j in ks if j % 2 == 0]
    k2 = even[0] if even else None
    if k2 is not None:
        r = sympy.radsimp(q[k2] / p[k2])
        if r < 0:
            return False
        mag = sympy.root(r, k2)
        candidates = [mag, -mag]
    else:
        r = sympy.radsimp(q[k] / p[k])
        candidates = [sympy.sign(r) * sympy.root(abs(r), k)]
    for c in candidates:
        if all(sympy.simplify(q[j] - c**j * p[j]) == 0 for j in range(1, n + 1)):
            return True
    return False


# ---------------------------------------------------------------- v(t) families

def _t(t) -> QExt:
    return QExt(Fraction(t))


def v_su(n: int, t) -> Mat:
    e = {(i, i): -I_UNIT for i in range(n - 1)}
    e[(n - 1, n - 1)] = Gauss(0, n - 1)
    e[(n - 2, n - 1)] = Gauss(_t(t))
    e[(n - 1, n - 2)] = Gauss(-_t(t))
    return Mat(n, e)


def v_sp(n: int, t) -> Mat:
    s = 2 * n
    tt = Gauss(_t(t))
    e = {
        (s - 4, s - 1): tt,
        (s - 3, s - 2): -tt,
        (s - 2, s - 3): tt,
        (s - 1, s - 4): -tt,
        (s - 2, s - 2): I_UNIT,
        (s - 1, s - 1): -I_UNIT,
    }
    return Mat(s, e)


def v_spin9(t) -> Mat:
    e = {(0, 1): Gauss(_t(t)), (1, 0): Gauss(-_t(t)), (1, 2): G_ONE, (2, 1): -G_ONE}
    for a in (3, 5, 7):
        e[(a, a + 1)] = G_ONE
        e[(a + 1, a)] = -G_ONE
    return Mat(9, e)


def v_berger(t) -> Mat:
    tt = Gauss(_t(t))
    return Mat(4, {
        (0, 0): I_UNIT, (1, 1): -I_UNIT, (2, 2): Gauss(0, -3), (3, 3): Gauss(0, 3),
        (0, 3): tt, (3, 0): -tt, (1, 2): -tt, (2, 1): tt,
    })


def v_su5(t) -> Mat:
    tt = Gauss(_t(t))
    return Mat(5, {
        (0, 0): I_UNIT, (1, 1): I_UNIT, (2, 2): -I_UNIT, (3, 3): -I_UNIT,
        (3, 4): tt, (4, 3): -tt,
    })


def v_family(name: str):
    """The one-parameter family v(t) ⊂ m for a space, or None for sampled spaces."""
    key = name.replace(" ", "")
    if key in ("sp(2)/su(2)", "sp(2)/su(2)-Berger"):
        return v_berger
    if key in ("su(5)/sp(2)+R", "su(5)/sp(2)⊕R"):
        return v_su5
    if key == "spin9-vt-family":
        return v_spin9
    p = _parse_n(r"su\((\d+)\)/su\((\d+)\)", key)
    if p:
        return lambda t: v_su(p[0], t)
    p = _parse_n(r"sp\((\d+)\)/sp\((\d+)\)", key)
    if p:
        return lambda t: v_sp(p[0], t)
    return None


CONDITION_R_SPACES = (
    "su(3)/su(2)",
    "su(4)/su(3)",
    "sp(2)/sp(1)",
    "sp(3)/sp(2)",
    "sp(2)/su(2)",
    "su(5)/sp(2)+R",
    "spin9-vt-family",
    "so(4)/so(3)",
    "so(5)/so(4)",
)


def random_m_element(model: MatrixAlgebra, rng: np.random.Generator) -> Mat:
    cs = [QExt(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))) for _ in model.m_basis]
    if all(c.is_zero() for c in cs):
        cs[0] = ONE
    return model.combine(cs, model.m_basis)


def condition_r_report(name: str, t_samples: Sequence = (Fraction(1, 10), Fraction(1, 2)),
                       random_pairs: int = 100, seed: int = 0) -> dict:
    """Search for m-vectors whose eigenvalue sequences are not proportional."""
    family = v_family(name)
    model = build_model(name)
    samples = []
    unverified = model.name == "spin9-vt-family"
    if family is not None:
        base = family(0)
        for t in t_samples:
            t = Fraction(t)
            if t == 0:
                raise ValueError("t samples must be nonzero")
            vt = family(t)
            member = None if unverified else (model.in_m(base) and model.in_m(vt))
            if member is False:
                raise ValueError(f"v({t}) is not in m for {name}")
            samples.append({"t": str(t), "dependent": seq_dependent(base, vt), "in_m": member})
    else:
        rng = np.random.default_rng(seed)
        for _ in range(random_pairs):
            x, y = random_m_element(model, rng), random_m_element(model, rng)
            samples.append({"t": None, "dependent": seq_dependent(x, y), "in_m": True})
    dependent = sum(1 for s in samples if s["dependent"])
    fails = dependent < len(samples)
    return {
        "space": model.name,
        "samples": samples,
        "dependent_pairs": dependent,
        "fails_condition_R": fails,
        "verdict": "fails Condition (R)" if fails else "no witness found",
        "membership_unverified": unverified,
    }


# ---------------------------------------------------------------- corank oracle

def _b_family_oracle() -> dict:
    model = build_model("so(5)/so(3)")
    search = commuting_pair_search(model, numeric=False)
    if search.pair is None:
        return {"model": model.name, "contradiction": False, "detail": "no commuting m-pair"}
    w = flat_splitting_test(model, *search.pair)
    return {
        "model": model.name,
        "contradiction": w is not None,
        "detail": "flat splitting subalgebra in so(5)/so(3)" if w else "pair found but s0 does not split",
        "witness": w.to_json() if w else None,
    }


def _c3_oracle(st) -> dict:
    """u ∈ g_{2e2}, v ∈ g_{e1−e3}: s0 = span(u, v) lies in the m-planes."""
    n = st.rs.rank
    data = sp_complex_basis(n)
    model = MatrixAlgebra(f"sp({n})", data["size"],
                          data["torus"] + [m for pl in data["planes"].values() for m in pl], [])
    m_mats: list[Mat] = []
    for g, lab in st.label.items():
        if lab == "M":
            m_mats += data["planes"][tuple(int(x.to_fraction()) for x in g)]
    r2 = tuple(2 if i == 1 else 0 for i in range(n))
    r13 = tuple(1 if i == 0 else (-1 if i == 2 else 0) for i in range(n))
    if st.label.get(_root_key(st, r2)) != "M" or st.label.get(_root_key(st, r13)) != "M":
        return {"model": model.name, "contradiction": False, "detail": "planes 2e2, e1−e3 not both in m"}
    u, v = data["planes"][r2][0], data["planes"][r13][0]
    if not bracket(u, v).is_zero():
        return {"model": model.name, "contradiction": False, "detail": "u, v do not commute"}
    s0 = center_of(model, centralizer(model, [u, v]))
    inside = all(_in_span(model, s, m_mats) for s in s0)
    ok = inside and len(s0) >= 2
    return {
        "model": model.name,
        "contradiction": ok,
        "detail": f"s0 = center of centralizer has dim {len(s0)} and lies in m-planes: {inside}",
    }


def _root_key(st, coords):
    from .exact_arith import ExactVector

    return ExactVector(coords)


def _berger_oracle() -> dict:
    model = build_model("sp(2)/su(2)")
    search = commuting_pair_search(model)
    return {
        "model": model.name,
        "contradiction": search.pair is not None,
        "detail": "commuting m-pair found" if search.pair else
        f"no commuting m-pair (numeric minimum {search.numeric_min:.3g})",
        "search": search.to_json(),
    }


def corank_oracle(rs, seed, st) -> dict:
    """Second-stage check for saturated seeds the root-level rules cannot settle."""
    if len(rs.factors) != 1:
        return {"model": None, "contradiction": False, "detail": "no explicit model"}
    lab, n = rs.factors[0]
    if lab == "B" and seed.label == "(e1+e2, -e2)" and n == 2:
        return _berger_oracle()
    if lab == "B" and seed.label in ("(e1+e2, e2)", "(e1+e2, -e1+e2)"):
        return _b_family_oracle()
    if lab == "C" and seed.label == "(e1+e2, -2e1)":
        return _c3_oracle(st)
    return {"model": None, "contradiction": False, "detail": "no explicit model"}


def su3_lemma_pair() -> tuple[Mat, Mat]:
    """A commuting pair of off-diagonal su(3) matrices, orthogonal to the torus."""
    i = I_UNIT
    u = Mat.from_rows([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])
    v = Mat.from_rows([[0, i, -i], [i, 0, i], [-i, i, 0]])
    return u, v
