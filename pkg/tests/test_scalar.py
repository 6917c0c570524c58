import math
import random
import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from contactpairs.parse import ParseError, parse
from contactpairs.scalar import (
    Chart,
    ExpressionClassError,
    IncompleteNormalFormWarning,
    ScalarExpr,
    antiderivative,
    check_torus_function,
    differentiate,
    evaluate,
    integrate_torus,
    is_zero,
    normalize,
    parse_pi_multiple,
    to_expr,
)

from generators import parse_with_sympy, random_chart, random_expr, random_expr_text, sym, sympy_zero, to_sympy

T2 = Chart.torus("th1", "th2")


# ----------------------------------------------------------------------------
# normal form


@pytest.mark.parametrize("text, expected", [
    ("sin(th)^2 + cos(th)^2 - 1", "0"),
    ("cos(-th)", "cos(th)"),
    ("sin(th)*cos(th)", "1/2*sin(2*th)"),
    ("sin(th + pi/2)", "cos(th)"),
    ("cos(th + pi)", "-cos(th)"),
    ("sin(-th - th2)", "-sin(th + th2)"),
    ("(x + 1)^2 - x^2 - 2*x", "1"),
    ("2*x/4", "1/2*x"),
])
def test_normalize_examples(text, expected):
    assert normalize(text) == normalize(expected)


@pytest.mark.parametrize("text, zero", [
    ("sin(th1 + th2) - sin(th1)*cos(th2) - cos(th1)*sin(th2)", True),
    ("sin(th)", False),
    ("0*x + (1 - 1)", True),
    ("cos(2*th) - cos(th)^2 + sin(th)^2", True),
    ("sin(3*th) - 3*sin(th) + 4*sin(th)^3", True),
])
def test_is_zero_examples(text, zero):
    assert is_zero(text) is zero


@pytest.mark.parametrize("text, point, value", [
    ("sin(th)", {"th": math.pi / 2}, 1.0),
    ("x^2*y", {"x": 2, "y": 3}, 12.0),
    ("cos(th1 - th2)", {"th1": 0, "th2": 0}, 1.0),
])
def test_evaluate_examples(text, point, value):
    assert abs(evaluate(text, point) - value) < 1e-15


def test_pi_is_symbolic():
    e = to_expr("sin(th1 + pi/6)*2")
    assert e.subs({"th1": to_expr("pi/3")}) == to_expr(2)
    assert parse_pi_multiple("3*pi/4") == Fraction(3, 4)
    with pytest.raises(ExpressionClassError):
        parse_pi_multiple("pi^2")


def test_rational_value():
    assert to_expr("3/4").rational_value() == Fraction(3, 4)
    assert to_expr("pi").rational_value() is None
    assert to_expr("x").rational_value() is None
    assert to_expr("0").rational_value() == 0


def test_nonlinear_trig_argument_rejected():
    with pytest.raises(ExpressionClassError):
        to_expr("sin(x^2)")
    with pytest.raises(ExpressionClassError):
        to_expr("cos(sin(x))")


def test_division_only_by_constants():
    assert to_expr("x/3") == ScalarExpr.const(Fraction(1, 3)) * to_expr("x")
    with pytest.raises((ExpressionClassError, ParseError, ZeroDivisionError)):
        to_expr("1/x")
    with pytest.raises((ExpressionClassError, ParseError, ZeroDivisionError)):
        to_expr("x/0")


@pytest.mark.parametrize("text", [
    "-cos(2*th + pi/6) - sin(2*th) + sin(2*th + pi/3)",
    "sin(th + pi/4) - cos(th - pi/4)",
    "sin(pi/3)^2 - 3/4",
    "cos(pi/5) - cos(2*pi/5) - 1/2",
    "sin(x + pi/3) + sin(x - pi/3) - sin(x)",
    "cos(x + pi/7)*cos(x - pi/7) - cos(x)^2 + sin(pi/7)^2",
])
def test_irrational_phase_identities(text):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IncompleteNormalFormWarning)
        assert is_zero(text)


def test_irrational_phases_stay_nonzero():
    for text in ("sin(x + pi/3) - sin(x)", "sin(pi/5)", "cos(pi/12) - 1"):
        e = to_expr(text)
        assert e and abs(evaluate(e, {"x": 0.3})) > 1e-6


def test_crosscheck_warns_when_form_is_nonzero_but_samples_vanish():
    tiny = to_expr("1/1000000000000*sin(x)")
    with pytest.warns(IncompleteNormalFormWarning):
        assert not is_zero(tiny, tol=1e-6)


# ----------------------------------------------------------------------------
# grammar


@pytest.mark.parametrize("text", ["", "sin(", "x +", "x ^ -1", "exp(x)", "x $ y", "x^(1/2)", "(x"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ExpressionClassError)):
        parse(text)


def test_parse_precedence():
    assert parse("-x^2") == to_expr("-(x^2)")
    assert parse("2*x + 3*y - x") == parse("x + 3*y")
    assert parse("sin(1/2*th + pi)") == parse("-sin(th/2)")


# ----------------------------------------------------------------------------
# independent sympy oracle


def test_normal_form_matches_sympy_on_random_expressions():
    rng = random.Random(7)
    for _ in range(60):
        chart = random_chart(rng, rng.randint(1, 3))
        a, b = random_expr_text(rng, chart), random_expr_text(rng, chart)
        text = f"({a})*({b}) - ({b})^2"
        ours = to_sympy(to_expr(text))
        theirs = parse_with_sympy(text)
        assert sympy_zero(ours - theirs), text


def test_derivative_matches_sympy():
    rng = random.Random(11)
    for _ in range(60):
        chart = random_chart(rng, rng.randint(1, 3))
        text = random_expr_text(rng, chart)
        x = rng.choice(chart.names)
        ours = to_sympy(differentiate(text, x))
        theirs = sp.diff(parse_with_sympy(text), sym(x))
        assert sympy_zero(ours - theirs), (text, x)


def test_substitution_matches_sympy():
    rng = random.Random(13)
    chart = Chart(("th1", "th2", "x"), (True, True, False))
    for _ in range(40):
        text = random_expr_text(rng, chart)
        sub = {"th1": "th2 - th1 + pi/2", "x": "x^2 + 1"}
        ours = to_sympy(to_expr(text).subs({k: to_expr(v) for k, v in sub.items()}))
        theirs = parse_with_sympy(text).subs({sym(k): parse_with_sympy(v) for k, v in sub.items()},
                                             simultaneous=True)
        assert sympy_zero(ours - theirs), text


def test_torus_integral_matches_sympy():
    rng = random.Random(17)
    for _ in range(25):
        text = random_expr_text(rng, T2)
        e = to_expr(text)
        got = integrate_torus(e, T2)
        t1, t2 = sym("th1"), sym("th2")
        want = sp.integrate(to_sympy(e), (t1, 0, 2 * sp.pi), (t2, 0, 2 * sp.pi))
        assert abs(got.value - float(want)) < 1e-9, text


# ----------------------------------------------------------------------------
# integration


def test_integrate_examples():
    assert integrate_torus("cos(th1)", T2).value == 0
    r = integrate_torus("3", T2)
    assert r.rational() == 3 and r.power == 2
    r = integrate_torus("1 + sin(th1)*cos(th2)", T2)
    assert r.rational() == 1 and abs(r.value - (2 * math.pi) ** 2) < 1e-12


def test_integrate_rejects_bad_inputs():
    with pytest.raises(ValueError):
        integrate_torus("1", Chart(("th1", "x"), (True, False)))
    with pytest.raises(ExpressionClassError):
        integrate_torus("th1*cos(th2)", T2)
    with pytest.raises(ExpressionClassError):
        check_torus_function(to_expr("sin(th1/2)"), T2)


def test_antiderivative():
    e = to_expr("3*cos(2*th1 - th2) + sin(th1)")
    F = antiderivative(e, "th1")
    assert F.diff("th1") == e
    with pytest.raises(ExpressionClassError):
        antiderivative("cos(th2)", "th1")


# ----------------------------------------------------------------------------
# properties


def test_linearity_and_mixed_partials():
    rng = random.Random(3)
    for _ in range(100):
        chart = random_chart(rng, rng.randint(2, 4))
        e1, e2 = random_expr(rng, chart), random_expr(rng, chart)
        a, b = Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 2)
        x, y = rng.sample(chart.names, 2)
        lhs = (a * e1 + b * e2).diff(x)
        assert is_zero(lhs - (a * e1.diff(x) + b * e2.diff(x)))
        assert is_zero(e1.diff(x).diff(y) - e1.diff(y).diff(x))


def test_evaluate_agrees_with_raw_tree():
    rng = random.Random(5)
    chart = random_chart(rng, 3)
    for _ in range(20):
        text = random_expr_text(rng, chart)
        f = sp.lambdify([sym(n) for n in chart.names], parse_with_sympy(text), "numpy")
        e = to_expr(text)
        for p in chart.random_points(5, seed=rng.randint(0, 10_000)):
            assert abs(evaluate(e, p) - f(*p.values)) < 1e-12 * max(1.0, abs(f(*p.values)))


def test_is_zero_sound_on_constructed_identities():
    rng = random.Random(19)
    for _ in range(1000):
        chart = random_chart(rng, rng.randint(1, 3))
        a, b, c = (random_expr(rng, chart, 1) for _ in range(3))
        choice = rng.randrange(3)
        if choice == 0:
            z = (a + b) * c - (a * c + b * c)
        elif choice == 1:
            z = (a * b) * c - a * (b * c)
        else:
            z = (a + b) ** 2 - a * a - 2 * a * b - b * b
        assert is_zero(z, crosscheck=False)


def test_integral_of_derivative_vanishes():
    rng = random.Random(23)
    chart = Chart.torus("th1", "th2", "th3")
    for _ in range(100):
        e = random_expr(rng, chart)
        x = rng.choice(chart.names)
        assert integrate_torus(e.diff(x), chart).rational() == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-12, 12), st.sampled_from([1, 2, 3, 4, 5, 6]))
def test_addition_formula_property(m, n, a, b):
    q = Fraction(a, b)
    text = f"sin({m}*a + {n}*b + {q}*pi) - sin({m}*a)*cos({n}*b + {q}*pi) - cos({m}*a)*sin({n}*b + {q}*pi)"
    assert is_zero(text, crosscheck=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=2))
def test_points_wrap_periodic_coordinates(vals):
    p = T2.point(vals)
    assert np.all((0 <= p.values) & (p.values < 2 * math.pi + 1e-12))


def test_exact_division():
    g = to_expr("2 + cos(th)")
    assert (3 * g * g).exact_div(g * g) == to_expr(3)
    assert to_expr("x^2*sin(th)").exact_div("2*x") == to_expr("1/2*x*sin(th)")
    assert to_expr("1").exact_div(g) is None
    assert to_expr("x").exact_div("x^2") is None
    with pytest.raises(ZeroDivisionError):
        to_expr("x").exact_div("0")
