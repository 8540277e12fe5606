"""Exact arithmetic in the ring Q(√2, √3).

Every element is stored as a + b√2 + c√3 + d√6 with Fraction coefficients.
Sign decisions use rational interval bounds first and an exact
conjugate-splitting argument when the interval is too coarse.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction, "QExt"]

_ZERO = Fraction(0)


def _neg(x: Fraction) -> Fraction:
    return -x if x else x


class QExt:
    """a + b√2 + c√3 + d√6, immutable and hashable."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0) -> None:
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self.c = c if type(c) is Fraction else Fraction(c)
        self.d = d if type(d) is Fraction else Fraction(d)
        self._hash = None

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> "QExt":
        obj = object.__new__(cls)
        obj.a, obj.b, obj.c, obj.d, obj._hash = a, b, c, d, None
        return obj

    @staticmethod
    def coerce(x: Number) -> "QExt":
        if isinstance(x, QExt):
            return x
        if isinstance(x, (int, Fraction)):
            return QExt(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QExt")

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.a

    def is_integer(self) -> bool:
        return self.is_rational() and self.a.denominator == 1

    def __add__(self, other: Number) -> "QExt":
        o = other if type(other) is QExt else QExt.coerce(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        return QExt._raw(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self) -> "QExt":
        return QExt._raw(-self.a, _neg(self.b), _neg(self.c), _neg(self.d))

    def __sub__(self, other: Number) -> "QExt":
        o = other if type(other) is QExt else QExt.coerce(other)
        if o.is_zero():
            return self
        return QExt._raw(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __rsub__(self, other: Number) -> "QExt":
        return QExt.coerce(other) - self

    def __mul__(self, other: Number) -> "QExt":
        if type(other) is int or type(other) is Fraction:
            return QExt._raw(self.a * other, self.b * other, self.c * other, self.d * other)
        o = other if type(other) is QExt else QExt.coerce(other)
        if self.is_zero() or o.is_zero():
            return _QZERO
        if not (self.b or self.c or self.d or o.b or o.c or o.d):
            return QExt._raw(self.a * o.a, _ZERO, _ZERO, _ZERO)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # √2√3 = √6, √2√6 = 2√3, √3√6 = 3√2, √6√6 = 6
        return QExt._raw(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj3(self) -> "QExt":
        """Image under √3 -> -√3."""
        return QExt(self.a, self.b, -self.c, -self.d)

    def conj2(self) -> "QExt":
        """Image under √2 -> -√2."""
        return QExt(self.a, -self.b, self.c, -self.d)

    def inverse(self) -> "QExt":
        if self.is_zero():
            raise ZeroDivisionError("QExt division by zero")
        if self.is_rational():
            return QExt(1 / self.a)
        # x * conj3(x) lies in Q(√2); multiplying by its √2-conjugate lands in Q
        p = self * self.conj3()
        q = p * p.conj2()
        return self.conj3() * p.conj2() * (1 / q.a)

    def __truediv__(self, other: Number) -> "QExt":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QExt division by zero")
            f = Fraction(1) / other
            return QExt(self.a * f, self.b * f, self.c * f, self.d * f)
        return self * QExt.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> "QExt":
        return QExt.coerce(other) * self.inverse()

    def __eq__(self, other: object) -> bool:
        if type(other) is QExt:
            if self is other:
                return True
            # slot access skips Fraction.__eq__ and its ABC isinstance check
            for x, y in ((self.a, other.a), (self.b, other.b), (self.c, other.c), (self.d, other.d)):
                if x._numerator != y._numerator or x._denominator != y._denominator:
                    return False
            return True
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.a == other
        if not isinstance(other, QExt):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c and self.d == other.d

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.a)
            else:
                self._hash = hash((self.a, self.b, self.c, self.d))
        return self._hash

    def sign(self) -> int:
        return qext_sign(self)

    def __lt__(self, other: Number) -> bool:
        return qext_sign(self - other) < 0

    def __le__(self, other: Number) -> bool:
        return qext_sign(self - other) <= 0

    def __gt__(self, other: Number) -> bool:
        return qext_sign(self - other) > 0

    def __ge__(self, other: Number) -> bool:
        return qext_sign(self - other) >= 0

    def __float__(self) -> float:
        return (
            float(self.a)
            + float(self.b) * 2 ** 0.5
            + float(self.c) * 3 ** 0.5
            + float(self.d) * 6 ** 0.5
        )

    def __repr__(self) -> str:
        return f"QExt({self})"

    def __str__(self) -> str:
        parts = []
        for coef, unit in zip(self.coeffs, ("", "√2", "√3", "√6")):
            if not coef:
                continue
            if unit and abs(coef) == 1:
                body = unit
            else:
                body = f"{abs(coef)}{unit}"
            parts.append(("-" if coef < 0 else "+") + body)
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text[0] == "+" else text

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @staticmethod
    def from_json(data: Sequence) -> "QExt":
        return QExt(*(Fraction(str(x)) for x in data))


_QZERO = QExt()
SQRT2 = QExt(0, 1)
SQRT3 = QExt(0, 0, 1)
SQRT6 = QExt(0, 0, 0, 1)


def qext_arith(op: str, a: Number, b: Number | None = None):
    """Dispatch helper for {add, sub, mul, neg, eq, is_zero}."""
    x = QExt.coerce(a)
    if op == "neg":
        return -x
    if op == "is_zero":
        return x.is_zero()
    y = QExt.coerce(b)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "eq":
        return x == y
    raise ValueError(f"unknown op {op!r}")


def _sqrt_bounds(n: int, digits: int) -> tuple[Fraction, Fraction]:
    scale = 10 ** digits
    lo = isqrt(n * scale * scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


def _interval(x: QExt, digits: int) -> tuple[Fraction, Fraction]:
    lo = hi = x.a
    for coef, n in ((x.b, 2), (x.c, 3), (x.d, 6)):
        if not coef:
            continue
        r_lo, r_hi = _sqrt_bounds(n, digits)
        if coef > 0:
            lo += coef * r_lo
            hi += coef * r_hi
        else:
            lo += coef * r_hi
            hi += coef * r_lo
    return lo, hi


def _sign_frac(f: Fraction) -> int:
    return (f > 0) - (f < 0)


def _sign_q2(r: Fraction, s: Fraction) -> int:
    """Exact sign of r + s√2."""
    sr, ss = _sign_frac(r), _sign_frac(s)
    if ss == 0:
        return sr
    if sr == 0 or sr == ss:
        return ss
    return sr * _sign_frac(r * r - 2 * s * s)


def _sign_exact(x: QExt) -> int:
    # x = P + √3 Q with P = a + b√2, Q = c + d√2
    sp = _sign_q2(x.a, x.b)
    sq = _sign_q2(x.c, x.d)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # P² - 3Q² in Q(√2)
    r = x.a * x.a + 2 * x.b * x.b - 3 * (x.c * x.c + 2 * x.d * x.d)
    s = 2 * x.a * x.b - 6 * x.c * x.d
    return sp * _sign_q2(r, s)


def qext_sign(x: Number) -> int:
    """Exact sign in {-1, 0, +1}."""
    x = QExt.coerce(x)
    if x.is_zero():
        return 0
    if x.is_rational():
        return _sign_frac(x.a)
    for digits in (6, 12, 24):
        lo, hi = _interval(x, digits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    return _sign_exact(x)


Vec = tuple  # tuple[QExt, ...]


def vec(*coords: Number) -> tuple[QExt, ...]:
    return tuple(QExt.coerce(c) for c in coords)


class ExactVector(tuple):
    """Tuple of QExt coordinates with vector arithmetic."""

    def __new__(cls, coords: Iterable[Number]):
        return super().__new__(cls, (c if type(c) is QExt else QExt.coerce(c) for c in coords))

    @property
    def ambient_dim(self) -> int:
        return len(self)

    def __add__(self, other):
        _check_dims(self, other)
        return ExactVector(x + y for x, y in zip(self, other))

    def __sub__(self, other):
        _check_dims(self, other)
        return ExactVector(x - y for x, y in zip(self, other))

    def __neg__(self):
        return ExactVector(-x for x in self)

    def scale(self, k: Number) -> "ExactVector":
        return ExactVector(x * k for x in self)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self)

    def to_float(self) -> list[float]:
        return [float(x) for x in self]

    def to_json(self) -> list[list[str]]:
        return [x.to_json() for x in self]

    @staticmethod
    def from_json(data) -> "ExactVector":
        return ExactVector(QExt.from_json(c) for c in data)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(x) for x in self) + ")"

    def __hash__(self) -> int:
        return tuple.__hash__(self)

    def __eq__(self, other) -> bool:
        return tuple.__eq__(self, other)

    def __ne__(self, other) -> bool:
        return not tuple.__eq__(self, other)


def unit_vector(dim: int, i: int, coef: Number = 1) -> ExactVector:
    return ExactVector(coef if j == i else 0 for j in range(dim))


def _check_dims(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")


def inner(u: Sequence[QExt], v: Sequence[QExt]) -> QExt:
    _check_dims(u, v)
    if type(u) is ExactVector and type(v) is ExactVector:
        return _inner_cached(u, v)
    return _inner(u, v)


def _inner(u, v) -> QExt:
    total = QExt()
    for x, y in zip(u, v):
        if x.is_zero() or y.is_zero():
            continue
        total = total + x * y
    return total


# root systems pair the same few hundred vectors over and over
_inner_cached = lru_cache(maxsize=1 << 18)(_inner)


def norm_sq(u: Sequence[QExt]) -> QExt:
    return inner(u, u)


def cartan_pair(lam: Sequence[QExt], mu: Sequence[QExt]) -> tuple[QExt, QExt, bool]:
    """Cartan integers 2(λ,μ)/(μ,μ), 2(λ,μ)/(λ,λ) and the crystallographic verdict."""
    ll = norm_sq(lam)
    mm = norm_sq(mu)
    if ll.is_zero() or mm.is_zero():
        raise ValueError("cartan_pair needs nonzero vectors")
    lm = inner(lam, mu) * 2
    n1 = lm / mm
    n2 = lm / ll
    # the product is 4 exactly when λ and μ are parallel
    ok = n1.is_integer() and n2.is_integer() and (n1 * n2).to_fraction() in (0, 1, 2, 3, 4)
    return n1, n2, ok


def project_out(v: Sequence[QExt], z: Sequence[QExt]) -> ExactVector:
    """Orthogonal projection of v onto the hyperplane z⊥."""
    zz = norm_sq(z)
    if zz.is_zero():
        raise ValueError("cannot project against the zero vector")
    k = inner(v, z) / zz
    return ExactVector(x - k * y for x, y in zip(v, z))


def is_parallel(u: Sequence[QExt], v: Sequence[QExt]) -> bool:
    """True when u, v are linearly dependent (Cauchy-Schwarz equality)."""
    uv = inner(u, v)
    return (uv * uv - norm_sq(u) * norm_sq(v)).is_zero()
