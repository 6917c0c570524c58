"""Acceptance criteria 1-10, each timed against its runtime limit.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists one
PASS/FAIL line per criterion.  ``python tests/test_acceptance.py`` prints
the same lines without pytest.
"""

import random
from fractions import Fraction

from acceptance_log import criterion
from contactpairs.bundle import (
    SingularSetSpec,
    assemble_trivial_bundle_pair,
    check_conditions,
    classify_singular_set,
    construct_sigma_circles,
    construct_sigma_empty,
    construct_sigma_full,
    area_form,
    lemma_area_coefficient,
    lemma_volume_pair,
    singular_function,
    verify_assembled,
)
from contactpairs.catalog import build
from contactpairs.forms import (
    ChartMap,
    DifferentialForm,
    VectorField,
    exterior_derivative as d,
    interior_product,
    lie_derivative,
    one_form,
    pullback,
    wedge,
)
from contactpairs.invariance import contact_condition, pullback_check
from contactpairs.lie import (
    InvariantForm,
    check_jacobi,
    invariant_cp_check,
    invariant_distribution,
    invariant_involutive,
    invariant_reeb_properties,
    is_nilpotent,
    lookup,
    n4_1_coordinates,
)
from contactpairs.pair import (
    ContactPair,
    check_reeb_properties,
    class_dimension_check,
    darboux_pair,
    derive_frame,
    involutivity_check,
    reeb_fields,
    reeb_flow_invariance,
    verify,
)
from contactpairs.report import NUMERIC_FAIL, SYMBOLIC_FAIL, SYMBOLIC_PASS
from contactpairs.scalar import Chart, to_expr

from generators import random_chart, random_field, random_form, random_map

DARBOUX_TYPES = [(h, k) for h in range(4) for k in range(4) if 1 <= h + k <= 3]
LIE_PAIRS = [("n4_1", 2, 4, 1, 0), ("n6_12", 4, 6, 2, 0), ("n6_13", 2, 3, 1, 1)]


def verified_pairs():
    """Every chart pair of the catalog with its stored frames (possibly empty)."""
    out = []
    for h, k in DARBOUX_TYPES:
        ex = build(f"darboux({h},{k})")
        out.append((ex.pair, ex.frames))
    for cid in ("t4_product", "t4_irrational(1/10)", "t4_irrational(1/2)", "t4_irrational(1)"):
        ex = build(cid)
        out.append((ex.pair, ex.frames))
    chart, coframe, frame = n4_1_coordinates()
    out.append((ContactPair(chart, coframe[1], coframe[3], 1, 0, name="n4_1_chart"),
                {"alpha": [frame[3]], "eta": frame[:3]}))
    out.append((assemble_trivial_bundle_pair(construct_sigma_full(), "bundle_full"), {}))
    for levels in ("0,pi", "0,pi/2,pi,3*pi/2"):
        bd, _, _ = construct_sigma_circles(SingularSetSpec.circles(levels))
        out.append((assemble_trivial_bundle_pair(bd, f"bundle_circles({levels})"), {}))
    return out


# ----------------------------------------------------------------------------


def test_criterion_01_darboux():
    with criterion(1, "Darboux pairs verify symbolically with coordinate Reeb fields", 5):
        for h, k in DARBOUX_TYPES:
            cp = darboux_pair(h, k)
            rep = verify(cp)
            assert rep.passed and all(c.status == SYMBOLIC_PASS for c in rep.conditions), (h, k)
            rp = reeb_fields(cp)
            assert rp.alpha.field == VectorField.coordinate(cp.chart, f"x{2 * h + 1}")
            assert rp.eta.field == VectorField.coordinate(cp.chart, f"y{2 * k + 1}")


def test_criterion_02_t4_product():
    with criterion(2, "T^4 product pair and its displayed Reeb fields", 1):
        cp = build("t4_product").pair
        rep = verify(cp)
        assert rep.passed and rep.condition("volume").status == SYMBOLIC_PASS
        rp = reeb_fields(cp)
        assert [str(c) for c in rp.alpha.field.components] == ["sin(th3)", "-cos(th3)", "0", "0"]
        assert [str(c) for c in rp.eta.field.components] == ["0", "0", "0", "1"]


def test_criterion_03_lie_catalog():
    with criterion(3, "nilpotent Lie algebra pairs in exact arithmetic", 1):
        for name, a, e, h, k in LIE_PAIRS:
            g = lookup(name).algebra
            assert check_jacobi(g) and is_nilpotent(g)[0]
            rep = invariant_cp_check(g, InvariantForm.basis(g.dim, a - 1), InvariantForm.basis(g.dim, e - 1), h, k)
            assert rep.passed, rep.summary()
            vol = Fraction(rep.extra["volume_constant"])
            assert vol != 0


def test_criterion_04_pullback_invariance():
    with criterion(4, "pullback invariance suite and the T^5 contact form", 30):
        for cid in ("t3_fn(1)", "t3_fn(2)", "t3_fn(3)", "t3_reflection", "t5_contact", "fv_germ"):
            ex = build(cid)
            rep = pullback_check(ex.map, ex.form)
            assert rep.conditions[0].status == SYMBOLIC_PASS, cid
        t5 = build("t5_contact").form
        cond = contact_condition(t5, grid=17)
        assert cond.passed and cond.min_abs > 1e-9


def test_criterion_05_irrational_t4():
    with criterion(5, "irrational T^4 pair has a constant non-zero volume coefficient", 2):
        for lam in ("1/10", "1/2", "1"):
            rep = verify(build(f"t4_irrational({lam})").pair)
            vol = rep.condition("volume")
            assert vol.status == SYMBOLIC_PASS
            assert to_expr(vol.detail["value"]).rational_value() not in (None, 0)


def test_criterion_06_reeb_properties():
    with criterion(6, "Reeb identities and flow invariance for every verified pair", 60):
        for cp, _ in verified_pairs():
            assert verify(cp).passed, cp.name
            rep = check_reeb_properties(cp)
            assert rep.passed, rep.summary()
            assert len(rep.conditions) == 13
            dev = reeb_flow_invariance(cp, t=0.1, step=1e-3, n_points=10)
            assert max(dev.values()) < 1e-6, (cp.name, dev)
        for name, a, e, h, k in LIE_PAIRS:
            assert invariant_reeb_properties(lookup(name).pair()).passed


def _coordinate_lie_derivative(X: VectorField, a: DifferentialForm) -> DifferentialForm:
    """``L_X (f dx^I) = X(f) dx^I + f sum_r dx^{i_1} ^ .. ^ d(X^{i_r}) ^ .. ^ dx^{i_p}``."""
    c = a.chart
    out = DifferentialForm.zero(c, a.degree)
    for I, f in a.terms.items():
        out = out + DifferentialForm(c, a.degree, {I: X.apply(f)})
        for r in range(len(I)):
            pieces = [one_form(c, {c.names[j]: 1}) for j in I]
            pieces[r] = d(DifferentialForm.scalar(c, X.components[I[r]]))
            w = DifferentialForm.scalar(c, f)
            for p in pieces:
                w = wedge(w, p)
            out = out + w
    return out


def test_criterion_07_exterior_engine():
    with criterion(7, "exterior calculus identities, 500 random cases each", 120):
        rng = random.Random(2024)
        n = 500
        for _ in range(n):
            ch = random_chart(rng, rng.randint(2, 6))
            a = random_form(rng, ch, rng.randint(0, ch.dim - 1))
            assert d(d(a)).is_zero()
        for _ in range(n):
            ch = random_chart(rng, rng.randint(2, 6))
            p, q = rng.randint(0, 3), rng.randint(0, 3)
            a, b = random_form(rng, ch, p), random_form(rng, ch, q)
            assert (wedge(a, b) - (-1) ** (p * q) * wedge(b, a)).is_zero()
        for _ in range(n):
            ch = random_chart(rng, rng.randint(2, 6))
            p, q = rng.randint(0, 2), rng.randint(0, 2)
            a, b = random_form(rng, ch, p), random_form(rng, ch, q)
            assert (d(wedge(a, b)) - wedge(d(a), b) - (-1) ** p * wedge(a, d(b))).is_zero()
        for _ in range(n):
            ch = random_chart(rng, rng.randint(2, 6))
            a = random_form(rng, ch, rng.randint(0, min(2, ch.dim - 1)), flat_trig=False)
            # constant coefficients keep the wedge check cheap: phi^*(c dx_j) = c d(phi_j)
            b = one_form(ch, {x: Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                              for x in rng.sample(ch.names, rng.randint(1, 2))})
            phi = random_map(rng, ch)
            assert (pullback(phi, d(a)) - d(pullback(phi, a))).is_zero()
            assert (pullback(phi, wedge(a, b)) - wedge(pullback(phi, a), pullback(phi, b))).is_zero()
        for _ in range(n):
            ch = random_chart(rng, rng.randint(2, 6))
            a = random_form(rng, ch, rng.randint(0, min(3, ch.dim)))
            X = random_field(rng, ch)
            L = lie_derivative(X, a)
            cartan = interior_product(X, d(a))
            if a.degree:
                cartan = cartan + d(interior_product(X, a))
            assert (L - cartan).is_zero()
            assert (L - _coordinate_lie_derivative(X, a)).is_zero()


def test_criterion_08_torus_bundles():
    with criterion(8, "torus-bundle constructions round-trip", 30):
        bd = construct_sigma_full()
        assert check_conditions(bd).passed
        assert classify_singular_set(singular_function(bd)).variant == "All"
        assert verify_assembled(bd).passed
        bd, rep = construct_sigma_empty(area_form(1), DifferentialForm.zero(bd.chart, 2))
        assert rep.passed and check_conditions(bd).passed
        assert classify_singular_set(singular_function(bd)).variant == "Empty"
        for levels in ("0,pi", "0,pi/2,pi,3*pi/2"):
            spec = SingularSetSpec.circles(levels)
            h, beta = lemma_volume_pair(spec)
            assert lemma_area_coefficient(h, beta) == to_expr(1)
            bd, _, rep = construct_sigma_circles(spec)
            assert rep.passed and check_conditions(bd).passed
            assert verify_assembled(bd).passed
            sset = classify_singular_set(singular_function(bd))
            assert sset.exact and sset.matches(spec)


def test_criterion_09_negative_controls():
    with criterion(9, "negative controls rejected with the right condition and witness", 10):
        dar, dar11, t4 = darboux_pair(1, 0), darboux_pair(1, 1), build("t4_product").pair
        c = dar.chart

        rep = verify(ContactPair(c, dar.alpha, one_form(c, {"y1": "1 + x1"}), 1, 0))
        cond = rep.condition("d_eta_power_closed")
        assert cond.status == SYMBOLIC_FAIL and cond.witness["idx"] == [1, 4]

        rep = verify(ContactPair(c, one_form(c, {"x3": 1, "x2": "x1^2"}), dar.eta, 1, 0))
        cond = rep.condition("volume")
        assert cond.status == NUMERIC_FAIL and cond.witness["point"][0] == 0.0

        rep = verify(ContactPair(t4.chart, t4.alpha, t4.eta, 0, 1))
        assert rep.condition("d_alpha_power_closed").status == SYMBOLIC_FAIL

        rep = verify(ContactPair(t4.chart, t4.alpha, one_form(t4.chart, {"th1": 1}), 1, 0))
        assert rep.condition("volume").witness == "identically zero"

        d20 = darboux_pair(2, 0)
        rep = verify(ContactPair(d20.chart, one_form(d20.chart, {"x5": 1, "x2": "x1", "x3": "x2"}), d20.eta, 2, 0))
        assert rep.condition("volume").witness == "identically zero"

        rep = verify(ContactPair(dar11.chart, dar11.alpha, one_form(dar11.chart, {"y3": 1, "y2": "x1"}), 1, 1))
        assert rep.condition("d_eta_power_closed").passed
        assert rep.condition("volume").witness == "identically zero"


def test_criterion_10_characteristic_distributions():
    with criterion(10, "characteristic distribution dimensions and involutivity", 60):
        for cp, frames in verified_pairs():
            rep = class_dimension_check(cp, n_points=50)
            assert rep.passed, rep.summary()
            for which in ("alpha", "eta"):
                frame = frames.get(which) or derive_frame(cp, which)
                if frame:
                    inv = involutivity_check(cp, which, frame, tol=1e-9)
                    assert inv.passed, inv.summary()
        for name, *_ in LIE_PAIRS:
            ip = lookup(name).pair()
            assert len(invariant_distribution(ip, "alpha")) == 2 * ip.k + 1
            assert len(invariant_distribution(ip, "eta")) == 2 * ip.h + 1
            assert invariant_involutive(ip, "alpha") and invariant_involutive(ip, "eta")


if __name__ == "__main__":
    import sys

    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except BaseException:
            failed += 1
    sys.exit(1 if failed else 0)
