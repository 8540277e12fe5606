import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from normfinsler.finsler_lab import (
    FinslerError, MinkowskiNorm, busemann_hausdorff_density, catalog_metric, flag_curvature,
    hessian_g, horizontal_lift, metric_from_expression, metric_from_json, randers_hessian,
    riemann_curvature, s_curvature, spray, subduced_norm, submersion_inequality_check,
    unit_ball_volume,
)

EUCLID2 = MinkowskiNorm(2, lambda y: float(np.hypot(y[0], y[1])))
ELLIPSE = MinkowskiNorm(2, lambda y: math.sqrt(y[0] ** 2 + 4 * y[1] ** 2))
L4 = MinkowskiNorm(2, lambda y: (y[0] ** 4 + y[1] ** 4) ** 0.25)


def randers_oracle(b, y):
    """½∂²(α + β)² expanded term by term, α = |y|, β = ⟨b, y⟩."""
    b, y = np.asarray(b, float), np.asarray(y, float)
    a, beta = np.linalg.norm(y), b @ y
    n = len(y)
    return (np.eye(n) + (beta / a) * (np.eye(n) - np.outer(y, y) / a**2)
            + (np.outer(y, b) + np.outer(b, y)) / a + np.outer(b, b))


def randers_norm(b):
    b = np.asarray(b, float)
    return MinkowskiNorm(len(b), lambda y: float(np.linalg.norm(y) + b @ y))


def test_euclidean_hessian_is_identity():
    assert np.allclose(hessian_g(EUCLID2, [0.3, -1.2]), np.eye(2), atol=1e-8)


def test_randers_example():
    b, y = [0.5, 0.0], [1.0, 0.0]
    assert np.allclose(randers_hessian(b, y), randers_oracle(b, y), atol=1e-14)
    g = hessian_g(randers_norm(b), y)
    assert np.max(np.abs(g - randers_oracle(b, y))) < 1e-6


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 0.8), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0.3, 3))
def test_randers_hessian_matches_closed_form(rb, tb, ty, ry):
    b = [rb * math.cos(tb), rb * math.sin(tb)]
    y = [ry * math.cos(ty), ry * math.sin(ty)]
    want = randers_oracle(b, y)
    got = hessian_g(randers_norm(b), y)
    assert np.max(np.abs(got - want)) / np.max(np.abs(want)) < 1e-6


def test_quartic_hessian_matches_symbolic():
    y1, y2 = sympy.symbols("y1 y2")
    f2 = sympy.sqrt(y1**4 + y2**4) / 2
    want = np.array(sympy.hessian(f2, (y1, y2)).subs({y1: 1, y2: 1}), dtype=float)
    assert np.max(np.abs(hessian_g(L4, [1.0, 1.0]) - want)) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(0.25, math.pi / 2 - 0.25), st.integers(0, 3), st.floats(0.2, 5), st.floats(0.2, 5))
def test_hessian_homogeneity_and_euler(t, quadrant, r, lam):
    # the quartic norm degenerates on the axes, so stay off them
    t += quadrant * math.pi / 2
    y = np.array([r * math.cos(t), r * math.sin(t)])
    g = hessian_g(L4, y)
    assert abs(y @ g @ y - L4(y) ** 2) < 1e-6 * L4(y) ** 2
    assert np.allclose(hessian_g(L4, lam * y), g, rtol=1e-5, atol=1e-6)


def test_subduced_norm_examples():
    proj = [[1.0, 0.0]]
    assert abs(subduced_norm(EUCLID2, proj, [2.5]) - 2.5) < 1e-10
    assert abs(subduced_norm(ELLIPSE, proj, [1.0]) - 1.0) < 1e-8
    assert abs(subduced_norm(L4, proj, [1.0]) - 1.0) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3).filter(lambda w: abs(w) > 1e-3), st.floats(0.1, 4))
def test_subduced_norm_is_homogeneous(w, lam):
    proj = [[1.0, 1.0]]
    a = subduced_norm(ELLIPSE, proj, [w])
    assert abs(subduced_norm(ELLIPSE, proj, [lam * w]) - lam * a) < 1e-7 * max(1, lam * a)


def test_horizontal_lifts():
    proj = [[1.0, 0.0]]
    assert np.allclose(horizontal_lift(EUCLID2, proj, [0.7]).vector, [0.7, 0.0], atol=1e-9)
    lift = horizontal_lift(ELLIPSE, proj, [1.0], check_euclidean=True)
    assert np.allclose(lift.vector, [1.0, 0.0], atol=1e-8)
    assert lift.orthogonality < 1e-8
    assert np.allclose(horizontal_lift(ELLIPSE, proj, [0.0]).vector, 0.0)


def test_spray_examples():
    assert np.allclose(spray(catalog_metric("l4-minkowski"), [0.2, 0.1], [1.0, 0.3]), 0, atol=1e-12)
    x, y = np.array([0.9, 0.4]), np.array([0.3, -1.1])
    s, c = math.sin(x[0]), math.cos(x[0])
    christoffel = np.array([-0.5 * s * c * y[1] ** 2, (c / s) * y[0] * y[1]])
    assert np.allclose(spray(catalog_metric("sphere2"), x, y), christoffel, atol=1e-9)


def _riemannian_pattern(g, y, K):
    # R^i_k v^k = K (g(y,y) v^i - g(y,v) y^i)
    return K * ((y @ g @ y) * np.eye(len(y)) - np.outer(y, g @ y))


@pytest.mark.parametrize("name,x,K", [("sphere2", [1.1, 0.3], 1.0), ("poincare2", [0.2, 1.3], -1.0)])
def test_riemann_constant_curvature_pattern(name, x, K):
    M = catalog_metric(name)
    y = np.array([0.4, -0.9])
    g = hessian_g(M.at(x), y)
    R = riemann_curvature(M, x, y)
    assert np.allclose(R, _riemannian_pattern(g, y, K), atol=1e-8)


def test_minkowski_curvature_vanishes():
    R = riemann_curvature(catalog_metric("randers-constant"), [0.3, 0.1], [1.0, 0.2])
    assert np.max(np.abs(R)) < 1e-8


def test_flag_curvature_is_a_flag_invariant():
    M = catalog_metric("randers-drift")
    x, y, v = [0.4, 0.2], [1.0, 0.3], [-0.2, 1.0]
    k1 = flag_curvature(M, x, y, v)
    k2 = flag_curvature(M, x, y, np.array(v) + 2.5 * np.array(y))
    assert abs(k1 - k2) < 1e-6


def test_degenerate_flag_is_rejected():
    with pytest.raises(FinslerError):
        flag_curvature(catalog_metric("sphere2"), [1.0, 0.0], [1.0, 0.5], [2.0, 1.0])


def test_submersion_identity_and_product():
    sphere = catalog_metric("sphere2")
    same = submersion_inequality_check(sphere, sphere, np.eye(2), [([1.0, 0.2], [0.5, 1.0], [1.0, -0.3])])
    assert same["violations"] == 0
    row = same["samples"][0]
    assert abs(row["K_total"] - row["K_base"]) < 1e-6

    prod = catalog_metric("sphere2-x-line")
    proj = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    samples = [([1.0, 0.3, 0.5], [1.0, 0.4], [-0.3, 1.0]), ([0.7, -0.1, 2.0], [0.2, 1.0], [1.0, 0.1])]
    res = submersion_inequality_check(prod, sphere, proj, samples)
    assert res["violations"] == 0
    for r in res["samples"]:
        assert abs(r["K_base"] - 1.0) < 1e-6 and r["K_total"] <= 1.0 + 1e-6


def test_unit_ball_volumes():
    assert abs(unit_ball_volume(EUCLID2) - math.pi) < 1e-10
    assert abs(unit_ball_volume(ELLIPSE) - math.pi / 2) < 1e-10
    e3 = MinkowskiNorm(3, lambda y: float(np.linalg.norm(y)))
    assert abs(unit_ball_volume(e3) - 4 * math.pi / 3) < 1e-8
    with pytest.raises(FinslerError):
        unit_ball_volume(MinkowskiNorm(4, lambda y: float(np.linalg.norm(y))))


def test_riemannian_density_is_root_det():
    M = catalog_metric("sphere2")
    x = [0.8, 0.0]
    assert abs(busemann_hausdorff_density(M, x) - math.sin(0.8)) < 1e-9


def test_s_curvature():
    assert abs(s_curvature(catalog_metric("l4-minkowski"), [0.1, 0.2], [1.0, 0.5])) < 1e-6
    assert abs(s_curvature(catalog_metric("sphere2"), [1.0, 0.1], [0.3, 1.0])) < 1e-4
    M = catalog_metric("randers-drift")
    x, y = [0.6, 0.2], [0.8, 0.5]
    geo = s_curvature(M, x, y)
    assert abs(geo - s_curvature(M, x, y, method="spray")) < 1e-6
    assert abs(geo - s_curvature(M, x, y, dt=1e-2)) < 1e-6
    assert abs(geo) > 1e-3  # non-Killing drift: S really is nonzero here


def test_metric_files():
    M = metric_from_json({"dimension": 2, "kind": "riemannian_matrix_field",
                          "parameters": {"matrix": [["1", "0"], ["0", "sin(x1)**2"]]}})
    assert abs(flag_curvature(M, [1.0, 0.0], [1.0, 0.2], [0.0, 1.0]) - 1.0) < 1e-6
    R = metric_from_json({"dimension": 2, "kind": "randers", "parameters": {"b": ["1/3", "0"]}})
    assert abs(flag_curvature(R, [0.0, 0.0], [1.0, 0.0], [0.0, 1.0])) < 1e-8
    C = metric_from_json({"dimension": 2, "kind": "custom_expression",
                          "parameters": {"F": "sqrt(y1**2 + y2**2)/x2"}})
    assert abs(flag_curvature(C, [0.0, 2.0], [1.0, 0.0], [0.0, 1.0]) + 1.0) < 1e-6
    with pytest.raises(FinslerError):
        metric_from_json({"dimension": 2, "kind": "nope"})


def test_float_callables_agree_with_expressions():
    expr = metric_from_expression("sqrt(y1**2 + sin(x1)**2*y2**2)", 2)
    M = catalog_metric("sphere2")
    assert M(np.array([0.5, 0.1]), np.array([1.0, 2.0])) == pytest.approx(expr([0.5, 0.1], [1.0, 2.0]))
