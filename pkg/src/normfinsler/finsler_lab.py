"""Finite-difference Finsler calculus on coordinate charts.

Derivatives are central differences with Richardson extrapolation.  Metrics
given as expressions (the catalog and the JSON kinds) also carry an mpmath
evaluator; curvature is then differenced at 40 digits, which keeps the
nested third-order differences far above round-off.  Plain Python callables
run in double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np
import sympy
from scipy import integrate
from scipy.linalg import null_space
from scipy.optimize import minimize

Array = np.ndarray


class FinslerError(ValueError):
    pass


# ---------------------------------------------------------------- differencing

def _richardson(central: Callable[[float], object], h: float, levels: int):
    """Extrapolate a central difference from steps h, h/2, ..., h/2^levels."""
    table = [central(h / 2**k) for k in range(levels + 1)]
    for m in range(1, levels + 1):
        f = 4**m
        table = [(f * table[k + 1] - table[k]) / (f - 1) for k in range(len(table) - 1)]
    return table[0]


def _d1(f: Callable[[Array], float], z: Array, i: int, h: float, levels: int = 1):
    e = np.zeros_like(z)
    e[i] = 1.0
    return _richardson(lambda s: (f(z + s * e) - f(z - s * e)) / (2 * s), h, levels)


def _d2(f: Callable[[Array], float], z: Array, i: int, j: int, h: float, levels: int = 1):
    ei = np.zeros_like(z)
    ei[i] = 1.0
    if i == j:
        f0 = f(z)
        return _richardson(lambda s: (f(z + s * ei) - 2 * f0 + f(z - s * ei)) / (s * s), h, levels)
    ej = np.zeros_like(z)
    ej[j] = 1.0
    return _richardson(lambda s: (f(z + s * ei + s * ej) - f(z + s * ei - s * ej)
                                  - f(z - s * ei + s * ej) + f(z - s * ei - s * ej)) / (4 * s * s), h, levels)


def _jacobian(f: Callable[[Array], Array], z: Array, idx: Sequence[int], steps: Sequence[float],
              levels: int = 1) -> Array:
    """Columns are ∂f/∂z_i for i in idx."""
    return np.stack([np.asarray(_d1(f, z, i, h, levels)) for i, h in zip(idx, steps)], axis=-1)


# ---------------------------------------------------------------- norms

DIGITS = 40


@dataclass
class MinkowskiNorm:
    dim: int
    evaluate: Callable[[Array], float]
    h_fd: float = 1e-3
    evaluate_mp: Optional[Callable[[Array], object]] = None

    def __call__(self, y) -> float:
        return float(self.evaluate(np.asarray(y, dtype=float)))


@dataclass
class ChartMetric:
    dim: int
    evaluate: Callable[[Array, Array], float]
    h_fd: float = 1e-3
    name: str = "custom"
    evaluate_mp: Optional[Callable[[Array, Array], object]] = None

    def __call__(self, x, y) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))

    @property
    def high_precision(self) -> bool:
        return self.evaluate_mp is not None

    def at(self, x) -> MinkowskiNorm:
        xf = np.asarray(x, dtype=float)
        mp_eval = None
        if self.evaluate_mp is not None:
            xm = _mp_array(xf)
            mp_eval = lambda y: self.evaluate_mp(xm, y)  # noqa: E731
        return MinkowskiNorm(self.dim, lambda y: self.evaluate(xf, y), self.h_fd, mp_eval)


def _mp_array(vals) -> Array:
    return np.array([mpmath.mpf(float(v)) if not isinstance(v, mpmath.mpf) else v for v in vals], dtype=object)


def _to_float(a) -> Array:
    return np.array(a, dtype=object).astype(float)


def _solve(a: Array, b: Array) -> Array:
    if a.dtype == object:
        sol = mpmath.lu_solve(mpmath.matrix(a.tolist()), mpmath.matrix(list(b)))
        return np.array([sol[i] for i in range(len(b))], dtype=object)
    return np.linalg.solve(a, b)


def _mp_steps(y_scale: float) -> tuple[float, float, float]:
    """(Hessian step, spray step, outer step) at DIGITS working digits."""
    base = 10.0 ** (-DIGITS / 4)
    return base * y_scale, 10 * base, 10.0 ** (-DIGITS / 8)


def hessian_g(F: MinkowskiNorm, y, *, check: bool = True) -> Array:
    """Fundamental tensor g_ij(y) = ½ ∂²(F²)/∂y^i∂y^j."""
    y = np.asarray(y, dtype=float)
    scale = float(np.linalg.norm(y))
    if scale == 0:
        raise FinslerError("hessian_g needs y ≠ 0")
    n = len(y)
    if F.evaluate_mp is not None:
        with mpmath.workdps(DIGITS):
            ym = _mp_array(y)
            h = _mp_steps(scale)[0]
            gm = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(i, n):
                    gm[i, j] = gm[j, i] = _d2(lambda v: F.evaluate_mp(v) ** 2, ym, i, j, h) / 2
            g = _to_float(gm)
    else:
        h = F.h_fd * scale
        g = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = 0.5 * _d2(lambda v: F.evaluate(v) ** 2, y, i, j, h)
    if check and np.linalg.eigvalsh(g).min() <= 0:
        raise FinslerError("Hessian of F²/2 is not positive definite")
    return g


def randers_hessian(b, y) -> Array:
    """Closed-form fundamental tensor of |y| + ⟨b, y⟩ (Euclidean |·|)."""
    b = np.asarray(b, dtype=float)
    y = np.asarray(y, dtype=float)
    a = float(np.linalg.norm(y))
    u = y / a
    F = a + b @ y
    n = len(y)
    return (F / a) * (np.eye(n) - np.outer(u, u)) + np.outer(u + b, u + b)


# ---------------------------------------------------------------- submersions

def _as_proj(proj) -> Array:
    p = np.atleast_2d(np.asarray(proj, dtype=float))
    if np.linalg.matrix_rank(p) != p.shape[0]:
        raise FinslerError("projection is not surjective")
    return p


@dataclass
class Lift:
    vector: Array
    value: float
    orthogonality: float
    euclidean_residual: Optional[float] = None


def _fiber_minimize(F1: MinkowskiNorm, p: Array, w: Array, tol: float = 1e-10) -> tuple[Array, float]:
    """Minimise ½F1² over the affine fiber {v : p v = w}."""
    v0 = np.linalg.pinv(p) @ w
    kern = null_space(p)
    if kern.shape[1] == 0:
        return v0, F1(v0)
    h = F1.h_fd * float(np.linalg.norm(v0))

    def obj(t):
        return 0.5 * F1.evaluate(v0 + kern @ t) ** 2

    def grad(t):
        return np.array([_d1(obj, t, i, h) for i in range(len(t))])

    t = np.zeros(kern.shape[1])
    for _ in range(3):
        res = minimize(obj, t, jac=grad, method="BFGS", options={"gtol": tol * 1e-3, "maxiter": 5000})
        if not np.all(np.isfinite(res.x)):
            raise FinslerError("fiber minimisation diverged")
        if np.max(np.abs(grad(res.x))) <= tol * max(res.fun, 1.0):
            t = res.x
            break
        t = res.x
    else:
        raise FinslerError("fiber minimisation did not converge")
    v = v0 + kern @ t
    return v, F1(v)


def subduced_norm(F1: MinkowskiNorm, proj, w) -> float:
    """F2(w) = inf{F1(v) : proj v = w}."""
    p = _as_proj(proj)
    w = np.asarray(w, dtype=float)
    if not np.any(w):
        return 0.0
    return _fiber_minimize(F1, p, w)[1]


def horizontal_lift(F1: MinkowskiNorm, proj, w, *, tol: float = 1e-8,
                    check_euclidean: bool = False) -> Lift:
    """The fiber minimiser over w, checked for g_v-orthogonality to ker(proj).

    With check_euclidean the induced inner products are also compared:
    g2(w)⁻¹ should equal proj · g1(v)⁻¹ · projᵀ.
    """
    p = _as_proj(proj)
    w = np.asarray(w, dtype=float)
    if not np.any(w):
        return Lift(np.zeros(p.shape[1]), 0.0, 0.0)
    v, val = _fiber_minimize(F1, p, w)
    g = hessian_g(F1, v)
    kern = null_space(p)
    # g_v(v, k) = ½ d/ds F1(v + s k)² at s = 0
    half_sq = lambda s: 0.5 * F1.evaluate(v + s[0] * k) ** 2  # noqa: E731
    orth = 0.0
    for k in kern.T:
        orth = max(orth, abs(_d1(half_sq, np.zeros(1), 0, F1.h_fd * val)))
    orth /= max(val * val, 1.0)
    if orth > tol:
        raise FinslerError(f"lift is not orthogonal to the fiber ({orth:.2e})")
    resid = None
    if check_euclidean:
        F2 = MinkowskiNorm(p.shape[0], lambda u: subduced_norm(F1, p, u), max(F1.h_fd, 1e-3))
        g2 = hessian_g(F2, w)
        lhs = np.linalg.inv(g2)
        rhs = p @ np.linalg.inv(g) @ p.T
        resid = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
    return Lift(v, val, orth, resid)


# ---------------------------------------------------------------- spray and curvature

def _xy_steps(M: ChartMetric, y: Array) -> list[float]:
    hy = M.h_fd * max(float(np.linalg.norm(y)), 1e-12)
    return [M.h_fd] * M.dim + [hy] * M.dim


def _spray_z(f2: Callable[[Array], object], n: int, z: Array, steps: Sequence[float], levels: int = 1) -> Array:
    """G^i = ¼ g^{il}([F²]_{x^k y^l} y^k − [F²]_{x^l}) at z = (x, y)."""
    y = z[n:]
    g = np.empty((n, n), dtype=z.dtype)
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = _d2(f2, z, n + i, n + j, steps[n + i], levels) / 2
    mixed = np.array([[_d2(f2, z, k, n + l, steps[n + l], levels) for l in range(n)] for k in range(n)],
                     dtype=z.dtype)
    dx = np.array([_d1(f2, z, l, steps[l], levels) for l in range(n)], dtype=z.dtype)
    rhs = mixed.T @ y - dx
    try:
        return _solve(g, rhs) / 4
    except (np.linalg.LinAlgError, ZeroDivisionError) as exc:
        raise FinslerError("singular fundamental tensor") from exc


def _kernel(M: ChartMetric, y: Array):
    """(F², working array maker, spray steps, outer steps, levels) for M."""
    n = M.dim
    scale = max(float(np.linalg.norm(y)), 1e-12)
    if M.high_precision:
        _, hs, ho = _mp_steps(scale)
        return (lambda v: M.evaluate_mp(v[:n], v[n:]) ** 2, _mp_array,
                [hs] * n + [hs * scale] * n, [ho] * n + [ho * scale] * n, 1)
    base = _xy_steps(M, y)
    return (lambda v: M.evaluate(v[:n], v[n:]) ** 2, lambda a: np.asarray(a, dtype=float),
            base, [10 * s for s in base], 1)


def spray(M: ChartMetric, x, y) -> Array:
    """Geodesic coefficients G^i(x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        raise FinslerError("spray needs y ≠ 0")
    with mpmath.workdps(DIGITS):
        f2, arr, steps, _, levels = _kernel(M, y)
        return _to_float(_spray_z(f2, M.dim, arr(np.concatenate([x, y])), steps, levels))


def _riemann_work(M: ChartMetric, x: Array, y: Array) -> Array:
    n = M.dim
    f2, arr, in_steps, steps, levels = _kernel(M, y)
    z = arr(np.concatenate([x, y]))
    yw = z[n:]

    def G(v):
        return _spray_z(f2, n, v, in_steps, levels)

    G0 = G(z)
    jac = _jacobian(G, z, range(2 * n), steps, levels)  # jac[i, a] = ∂G^i/∂z^a
    dGx, dGy = jac[:, :n], jac[:, n:]
    R = 2 * dGx - dGy @ dGy
    for j in range(n):
        for k in range(n):
            R[:, k] = R[:, k] - yw[j] * _d2(G, z, j, n + k, steps[n + k], levels)
            R[:, k] = R[:, k] + 2 * G0[j] * _d2(G, z, n + j, n + k, steps[n + k], levels)
    return R


def riemann_curvature(M: ChartMetric, x, y) -> Array:
    """Matrix R^i_k of the Riemann curvature R_y, by differencing the spray.

    R^i_k = 2∂_{x^k}G^i − y^j∂²_{x^j y^k}G^i + 2G^j∂²_{y^j y^k}G^i − ∂_{y^j}G^i∂_{y^k}G^j.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with mpmath.workdps(DIGITS):
        return _to_float(_riemann_work(M, x, y))


@dataclass
class CurvatureSample:
    x: list
    y: list
    v: list
    G: list
    R: list
    K: float
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "v": self.v, "K": self.K, "G": self.G, "R": self.R,
                "diagnostics": self.diagnostics}


def curvature_diagnostics(M: ChartMetric, x, y, R: Array, g: Array) -> dict:
    y = np.asarray(y, dtype=float)
    scale = max(float(np.max(np.abs(R))), 1.0) * float(y @ g @ y)
    gR = g @ R
    return {
        "pole_residual": float(np.max(np.abs(g @ (R @ y)))) / scale,
        "self_adjoint_residual": float(np.max(np.abs(gR - gR.T))) / scale,
    }


def flag_curvature(M: ChartMetric, x, y, v, *, with_sample: bool = False):
    """K(x, y, y∧v) = ⟨R_y v, v⟩_y / (⟨y,y⟩_y⟨v,v⟩_y − ⟨y,v⟩_y²)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    g = hessian_g(M.at(x), y)
    den = (y @ g @ y) * (v @ g @ v) - (y @ g @ v) ** 2
    if den < 1e-8 * (y @ g @ y) * (v @ g @ v):
        raise FinslerError("degenerate flag: y and v are (nearly) parallel")
    R = riemann_curvature(M, x, y)
    K = float((R @ v) @ g @ v / den)
    if not with_sample:
        return K
    return CurvatureSample(list(map(float, x)), list(map(float, y)), list(map(float, v)),
                           list(map(float, spray(M, x, y))), R.tolist(), K,
                           curvature_diagnostics(M, x, y, R, g))


# ---------------------------------------------------------------- submersion inequality

def _horizontal_vector(g1: Array, p: Array, v2: Array) -> Array:
    """Unique v1 with p v1 = v2 and g1(v1, ker p) = 0."""
    kern = null_space(p)
    a = np.vstack([p, kern.T @ g1]) if kern.size else p
    b = np.concatenate([v2, np.zeros(kern.shape[1])]) if kern.size else v2
    return np.linalg.solve(a, b)


def submersion_inequality_check(M1: ChartMetric, M2: ChartMetric, proj, samples, *, tol: float = 1e-4) -> dict:
    """Compare K of horizontal flags upstairs with K of their images.

    `proj` is a constant matrix mapping chart 1 onto chart 2; each sample is
    (x1, y2, v2).
    """
    p = _as_proj(proj)
    rows = []
    violations = 0
    for x1, y2, v2 in samples:
        x1 = np.asarray(x1, dtype=float)
        y2 = np.asarray(y2, dtype=float)
        v2 = np.asarray(v2, dtype=float)
        x2 = p @ x1
        lift = horizontal_lift(M1.at(x1), p, y2)
        y1 = lift.vector
        v1 = _horizontal_vector(hessian_g(M1.at(x1), y1), p, v2)
        k1 = flag_curvature(M1, x1, y1, v1)
        k2 = flag_curvature(M2, x2, y2, v2)
        bad = k1 > k2 + tol
        violations += bad
        rows.append({"x1": x1.tolist(), "y1": y1.tolist(), "v1": v1.tolist(),
                     "K_total": k1, "K_base": k2, "violation": bool(bad)})
    return {"samples": rows, "violations": violations, "tolerance": tol}


# ---------------------------------------------------------------- volume, distortion, S-curvature

def unit_ball_volume(F: MinkowskiNorm) -> float:
    """Euclidean volume of {F < 1} by adaptive quadrature in polar form."""
    n = F.dim
    if n == 1:
        return 1.0 / F(np.array([1.0])) + 1.0 / F(np.array([-1.0]))
    if n == 2:
        val, err = integrate.quad(lambda t: F(np.array([math.cos(t), math.sin(t)])) ** -2 / 2,
                                  0, 2 * math.pi, epsabs=1e-13, epsrel=1e-12, limit=200)
        return val
    if n == 3:
        def integrand(phi, theta):
            d = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
            return F(d) ** -3 / 3 * math.sin(theta)

        val, err = integrate.dblquad(integrand, 0, math.pi, 0, 2 * math.pi, epsabs=1e-12, epsrel=1e-11)
        return val
    raise FinslerError("unit-ball quadrature is limited to dimension ≤ 3")


def busemann_hausdorff_density(M: ChartMetric, x) -> float:
    n = M.dim
    euclid = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    return euclid / unit_ball_volume(M.at(x))


def distortion(M: ChartMetric, x, y, sigma: Optional[float] = None) -> float:
    x = np.asarray(x, dtype=float)
    g = hessian_g(M.at(x), y)
    s = busemann_hausdorff_density(M, x) if sigma is None else sigma
    return 0.5 * math.log(np.linalg.det(g)) - math.log(s)


def geodesic(M: ChartMetric, x, y, t_end: float, *, t_eval: Optional[Sequence[float]] = None,
             rtol: float = 1e-12, atol: float = 1e-13):
    """Integrate c'' + 2G(c, c') = 0 from t = 0 to t_end with an embedded RK4(5) scheme.

    The returned scipy solution carries `speed_drift`, the spread of F(c')
    over the accepted steps; it should stay near zero.
    """
    n = M.dim

    def rhs(_t, s):
        return np.concatenate([s[n:], -2 * spray(M, s[:n], s[n:])])

    s0 = np.concatenate([np.asarray(x, float), np.asarray(y, float)])
    sol = integrate.solve_ivp(rhs, (0.0, t_end), s0, method="RK45", rtol=rtol, atol=atol,
                              t_eval=t_eval, max_step=abs(t_end) / 4)
    if not sol.success:
        raise FinslerError(f"geodesic integration failed: {sol.message}")
    speeds = [M(s[:n], s[n:]) for s in sol.y.T]
    sol.speed_drift = float(max(speeds) - min(speeds))
    return sol


def s_curvature(M: ChartMetric, x, y, *, dt: float = 2e-2, method: str = "geodesic") -> float:
    """Derivative of the distortion along the geodesic through (x, y).

    method="geodesic" differentiates τ at points of an integrated geodesic;
    method="spray" applies the spray vector field to τ directly.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = M.dim
    if method == "spray":
        z = np.concatenate([x, y])
        steps = [s * 10 for s in _xy_steps(M, y)]

        def tau(v):
            return distortion(M, v[:n], v[n:])

        grad = np.array([_d1(tau, z, i, steps[i]) for i in range(2 * n)])
        return float(y @ grad[:n] - 2 * spray(M, x, y) @ grad[n:])
    if method != "geodesic":
        raise FinslerError(f"unknown method {method!r}")
    taus = {}
    for sign in (1, -1):
        ts = [sign * dt / 2, sign * dt]
        sol = geodesic(M, x, y, sign * dt, t_eval=ts)
        for t, s in zip(sol.t, sol.y.T):
            taus[round(t / dt * 2)] = distortion(M, s[:n], s[n:])
    d_half = (taus[1] - taus[-1]) / dt
    d_full = (taus[2] - taus[-2]) / (2 * dt)
    return float((4 * d_half - d_full) / 3)


# ---------------------------------------------------------------- metric catalog and JSON

def _symbols(n: int):
    return sympy.symbols(f"x1:{n + 1}"), sympy.symbols(f"y1:{n + 1}")


def metric_from_expression(expr, n: int, name: str = "custom_expression", h_fd: float = 1e-3) -> ChartMetric:
    """Chart metric from a sympy expression (or string) in x1..xn, y1..yn."""
    xs, ys = _symbols(n)
    e = sympy.sympify(expr) if isinstance(expr, str) else expr
    free = {str(s) for s in e.free_symbols} - {str(s) for s in xs + ys}
    if free:
        raise FinslerError(f"unknown symbols in metric expression: {sorted(free)}")
    f_float = sympy.lambdify((xs, ys), e, "math")
    f_mp = sympy.lambdify((xs, ys), e, "mpmath")
    return ChartMetric(n, lambda x, y: float(f_float(tuple(x), tuple(y))), h_fd, name,
                       lambda x, y: f_mp(tuple(x), tuple(y)))


def _quadratic_form(rows, n: int):
    xs, ys = _symbols(n)
    a = sympy.Matrix([[sympy.sympify(str(c)) for c in row] for row in rows])
    if a.shape != (n, n):
        raise FinslerError(f"matrix field must be {n}×{n}")
    y = sympy.Matrix(ys)
    return (y.T * a * y)[0, 0]


def metric_from_json(doc: dict) -> ChartMetric:
    """Build a chart metric from {dimension, kind, parameters}.

    kinds: riemannian_matrix_field (parameters.matrix: rows of expressions in
    x1..xn), randers (parameters.a optional, parameters.b), custom_expression
    (parameters.F: expression in x1..xn, y1..yn).
    """
    n = int(doc["dimension"])
    kind = doc["kind"]
    par = doc.get("parameters", {})
    h = float(par.get("h_fd", 1e-3))
    xs, ys = _symbols(n)
    if kind == "riemannian_matrix_field":
        expr = sympy.sqrt(_quadratic_form(par["matrix"], n))
    elif kind == "randers":
        a = par.get("a", [[int(i == j) for j in range(n)] for i in range(n)])
        b = [sympy.sympify(str(c)) for c in par["b"]]
        if len(b) != n:
            raise FinslerError(f"drift b must have {n} entries")
        expr = sympy.sqrt(_quadratic_form(a, n)) + sum(bi * yi for bi, yi in zip(b, ys))
    elif kind == "custom_expression":
        expr = par["F"]
    else:
        raise FinslerError(f"unknown metric kind {kind!r}")
    return metric_from_expression(expr, n, kind, h)


CATALOG: dict[str, tuple[int, str]] = {
    "euclidean2": (2, "sqrt(y1**2 + y2**2)"),
    "euclidean3": (3, "sqrt(y1**2 + y2**2 + y3**2)"),
    "sphere2": (2, "sqrt(y1**2 + sin(x1)**2*y2**2)"),
    "poincare2": (2, "sqrt(y1**2 + y2**2)/x2"),
    "l4-minkowski": (2, "(y1**4 + y2**4)**(1/4)"),
    "randers-constant": (2, "sqrt(y1**2 + y2**2) + y1/2"),
    "randers-drift": (2, "sqrt(y1**2 + y2**2) + 3*sin(x1)*y2/10"),
    "sphere2-x-line": (3, "sqrt(y1**2 + sin(x1)**2*y2**2 + y3**2)"),
}


def catalog_metric(name: str, h_fd: float = 1e-3) -> ChartMetric:
    try:
        n, expr = CATALOG[name]
    except KeyError:
        raise FinslerError(f"unknown catalog metric {name!r}; choose from {sorted(CATALOG)}") from None
    return metric_from_expression(expr, n, name, h_fd)
