"""T^2-invariant contact pairs of type (1,0) on principal torus bundles over T^2.

An invariant pair is described by base data

    alpha = beta + f1 theta^1 + f2 theta^2,   eta = gamma + g1 theta^1 + g2 theta^2

with ``beta, gamma`` 1-forms and ``f1, f2`` functions on the base, ``g1, g2``
constants, and curvature components ``Omega^1, Omega^2``.  The pair is a
contact pair exactly when

* cc1: ``beta^(g2 df1 - g1 df2) + h (dbeta + f1 Omega^1 + f2 Omega^2)
  + (f2 df1 - f1 df2)^gamma`` never vanishes, with ``h = g2 f1 - g1 f2``;
* cc2: ``df1 ^ df2 = 0``;
* cc3: ``dgamma + g1 Omega^1 + g2 Omega^2 = 0``.

The zero set of ``h`` is the singular set of the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .forms import DifferentialForm, exterior_derivative, one_form, wedge
from .pair import ContactPair, verify
from .report import (
    NUMERIC_FAIL,
    NUMERIC_PASS,
    SYMBOLIC_PASS,
    Condition,
    VerificationReport,
    closed_condition,
    nonvanishing_condition,
)
from .scalar import (
    Chart,
    ScalarExpr,
    antiderivative,
    as_rational,
    check_torus_function,
    frequency,
    integrate_torus,
    parse_pi_multiple,
    split_by,
    to_expr,
)

BASE = Chart.torus("th1", "th2")
TOTAL = Chart.torus("th1", "th2", "phi1", "phi2")
FIBER_SAMPLES = 256
R_CAP = 2 ** 20


class NoPrimitiveError(ValueError):
    pass


class ConstructionError(ValueError):
    pass


class RCapError(ConstructionError):
    pass


def _scalar(f) -> ScalarExpr:
    return to_expr(f)


def _d(f) -> DifferentialForm:
    return exterior_derivative(DifferentialForm.scalar(BASE, f))


def area_form(c=1) -> DifferentialForm:
    """``c dth1 ^ dth2`` on the base."""
    return DifferentialForm(BASE, 2, {(0, 1): to_expr(c)})


@dataclass(frozen=True, eq=False)
class BundleData:
    beta: DifferentialForm
    gamma: DifferentialForm
    f1: ScalarExpr
    f2: ScalarExpr
    g1: Fraction
    g2: Fraction
    omega1: DifferentialForm
    omega2: DifferentialForm
    chart: Chart = BASE

    def __post_init__(self):
        for label, form, deg in (("beta", self.beta, 1), ("gamma", self.gamma, 1),
                                 ("Omega1", self.omega1, 2), ("Omega2", self.omega2, 2)):
            if form.chart != self.chart or form.degree != deg:
                raise ValueError(f"{label} must be a {deg}-form on the base chart")
        object.__setattr__(self, "f1", to_expr(self.f1))
        object.__setattr__(self, "f2", to_expr(self.f2))
        object.__setattr__(self, "g1", as_rational(self.g1))
        object.__setattr__(self, "g2", as_rational(self.g2))
        for e in (self.f1, self.f2):
            check_torus_function(e, self.chart)

    @property
    def flat(self) -> bool:
        return self.omega1.is_zero() and self.omega2.is_zero()

    def to_dict(self) -> dict:
        def form(a):
            return {"degree": a.degree,
                    "terms": [{"idx": [i + 1 for i in idx], "coef": str(c)} for idx, c in sorted(a.terms.items())]}

        return {
            "chart": {"names": list(self.chart.names), "periodic": list(self.chart.periodic)},
            "beta": form(self.beta),
            "gamma": form(self.gamma),
            "f1": str(self.f1),
            "f2": str(self.f2),
            "g1": str(self.g1),
            "g2": str(self.g2),
            "omega1": form(self.omega1),
            "omega2": form(self.omega2),
        }


def cc1_form(bd: BundleData) -> DifferentialForm:
    h = singular_function(bd)
    df1, df2 = _d(bd.f1), _d(bd.f2)
    out = wedge(bd.beta, bd.g2 * df1 - bd.g1 * df2)
    out = out + h * (exterior_derivative(bd.beta) + bd.f1 * bd.omega1 + bd.f2 * bd.omega2)
    return out + wedge(bd.f2 * df1 - bd.f1 * df2, bd.gamma)


def check_conditions(bd: BundleData, grid: int = 17, tol: float = 1e-9) -> VerificationReport:
    cc3 = exterior_derivative(bd.gamma) + bd.g1 * bd.omega1 + bd.g2 * bd.omega2
    conds = [
        nonvanishing_condition("cc1", cc1_form(bd).coefficient((0, 1)), bd.chart, grid, tol),
        closed_condition("cc2", wedge(_d(bd.f1), _d(bd.f2))),
        # g1, g2 are rational constants by type, so dg1 = dg2 = 0 holds.
        closed_condition("cc3", cc3),
    ]
    report = VerificationReport("bundle", conds, grid=grid, tol=tol)
    report.extra["h"] = str(singular_function(bd))
    return report


def singular_function(bd: BundleData) -> ScalarExpr:
    return bd.g2 * bd.f1 - bd.g1 * bd.f2


# ----------------------------------------------------------------------------
# singular sets


@dataclass(frozen=True)
class SingularSetSpec:
    """``All``, ``Empty`` or ``Circles``: levels of th2 (multiples of pi) with
    the sign of ``h`` on the arc just after each level."""

    variant: str
    levels: tuple = ()
    signs: tuple = ()

    def __post_init__(self):
        if self.variant not in ("All", "Empty", "Circles"):
            raise ValueError(f"unknown singular-set variant {self.variant!r}")
        if self.variant != "Circles":
            if self.levels:
                raise ValueError(f"variant {self.variant} takes no levels")
            return
        levels = tuple(as_rational(c) for c in self.levels)
        signs = tuple(self.signs) or tuple(1 if i % 2 == 0 else -1 for i in range(len(levels)))
        if not levels:
            raise ValueError("Circles needs at least two levels")
        if len(levels) % 2:
            raise ValueError(f"{len(levels)} circles cannot carry alternating signs around th2")
        if any(not (0 <= c < 2) for c in levels):
            raise ValueError("levels must lie in [0, 2*pi)")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if len(signs) != len(levels) or any(s not in (1, -1) for s in signs):
            raise ValueError("one sign (+1 or -1) per component")
        if any(signs[i] == signs[(i + 1) % len(signs)] for i in range(len(signs))):
            raise ValueError("adjacent components must carry opposite signs")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def circles(cls, text: str, signs: str | None = None) -> "SingularSetSpec":
        """Parse ``"0,pi"`` (levels as rational multiples of pi) and optional ``"+,-"``."""
        levels = [parse_pi_multiple(t.strip()) for t in text.split(",") if t.strip()]
        sg = ()
        if signs:
            sg = tuple(1 if s.strip() == "+" else -1 if s.strip() == "-" else 0 for s in signs.split(","))
        return cls("Circles", tuple(levels), sg)

    @property
    def equally_spaced(self) -> bool:
        m = len(self.levels)
        return all(c == self.levels[0] + Fraction(2 * j, m) for j, c in enumerate(self.levels))

    def to_dict(self) -> dict:
        out = {"variant": self.variant}
        if self.variant == "Circles":
            out["levels"] = [_pi_str(c) for c in self.levels]
            out["signs"] = ["+" if s > 0 else "-" for s in self.signs]
        return out


def _pi_str(c: Fraction) -> str:
    return "0" if c == 0 else str(ScalarExpr.const(c) * ScalarExpr.pi())


@dataclass
class SingularSet:
    variant: str  # All | Empty | Circles | Unclassified
    levels: list = field(default_factory=list)  # Fractions of pi when exact, else floats (radians)
    signs: list = field(default_factory=list)
    exact: bool = True
    detail: dict = field(default_factory=dict)

    def matches(self, spec: SingularSetSpec) -> bool:
        if self.variant != spec.variant:
            return False
        if spec.variant != "Circles":
            return True
        return self.exact and list(self.levels) == list(spec.levels) and list(self.signs) == list(spec.signs)

    def to_dict(self) -> dict:
        out = {"variant": self.variant, "exact": self.exact}
        if self.variant == "Circles":
            out["levels"] = [_pi_str(c) if isinstance(c, Fraction) else c for c in self.levels]
            out["signs"] = ["+" if s > 0 else "-" for s in self.signs]
        out.update(self.detail)
        return out


def _snap(theta: float, max_den: int = 64):
    q = Fraction(theta / math.pi).limit_denominator(max_den)
    return q % 2


def classify_singular_set(h, chart: Chart = BASE, grid: int = 17) -> SingularSet:
    """Zero set of ``h`` on the base.

    Constants give ``All``/``Empty``.  When ``h`` depends on the second
    coordinate only, sign changes on a 256-point fiber locate the circles,
    each root is refined with Brent's method and snapped to a rational
    multiple of pi that is confirmed as an exact zero.
    """
    h = to_expr(h)
    if h.is_constant():
        return SingularSet("All" if not h else "Empty")
    second = chart.names[1]
    if h.free_symbols() != {second}:
        axes = [chart.grid_axis(n, grid) for n in chart.names]
        mesh = np.meshgrid(*axes, indexing="ij")
        vals = np.broadcast_to(h.evaluate(dict(zip(chart.names, mesh))), mesh[0].shape)
        return SingularSet("Unclassified", exact=False,
                           detail={"sign_grid": np.sign(vals).astype(int).tolist()})
    step = 2 * math.pi / FIBER_SAMPLES
    ts = (np.arange(FIBER_SAMPLES) + 0.5) * step
    vals = np.asarray(h.evaluate({second: ts}), dtype=float)

    def fn(t):
        return float(h.evaluate({second: t}))

    roots = []
    for i in range(FIBER_SAMPLES):
        a, b = ts[i], ts[i] + step
        va, vb = vals[i], vals[(i + 1) % FIBER_SAMPLES]
        if va == 0 or np.sign(va) != np.sign(vb):
            roots.append(brentq(fn, a, b, xtol=1e-14) % (2 * math.pi))
    if not roots:
        return SingularSet("Empty" if np.all(vals != 0) else "Unclassified", exact=False,
                           detail={"note": "non-constant h without sign change on the fiber"})
    exact = True
    levels = []
    for r in roots:
        q = _snap(r)
        if abs(float(q) * math.pi - r) < 1e-8 and not h.subs({second: ScalarExpr.const(q) * ScalarExpr.pi()}):
            levels.append(q)
        else:
            exact = False
            levels.append(r)
    order = sorted(range(len(levels)), key=lambda i: float(levels[i]))
    levels = [levels[i] for i in order]
    signs = []
    for lv in levels:
        t = float(lv) * math.pi if isinstance(lv, Fraction) else lv
        signs.append(int(np.sign(fn(t + 1e-6))))
    return SingularSet("Circles", levels, signs, exact, detail={"fiber_samples": FIBER_SAMPLES})


# ----------------------------------------------------------------------------
# primitives


def fourier_primitive(F, chart: Chart = BASE) -> DifferentialForm:
    """A 1-form ``gamma`` on T^2 with ``dgamma = -F``.

    Each Fourier mode of the ``dth1^dth2`` coefficient is inverted
    separately: modes with a non-zero first frequency are integrated in th1,
    the remaining ones in th2.  A non-zero mean (equivalently a non-zero
    integral) is the obstruction.
    """
    if isinstance(F, DifferentialForm):
        if F.degree != 2 or F.chart != chart:
            raise ValueError("fourier_primitive needs a 2-form on the base torus")
        c = F.coefficient((0, 1))
    else:
        c = to_expr(F)
    check_torus_function(c, chart)
    x, y = chart.names
    first, rest = split_by(c, lambda key: frequency(key, x) != 0)
    second, mean = split_by(rest, lambda key: frequency(key, y) != 0)
    if mean:
        total = integrate_torus(mean, chart)
        raise NoPrimitiveError(
            f"no primitive: the form has mean {mean} (integral {total.value:.6g}) over the torus"
        )
    gamma = DifferentialForm.zero(chart, 1)
    if first:
        gamma = gamma + one_form(chart, {y: -antiderivative(first, x)})
    if second:
        gamma = gamma + one_form(chart, {x: antiderivative(second, y)})
    return gamma


def torus_mean(form: DifferentialForm) -> Fraction:
    """Rational mean of the area coefficient (integral divided by (2 pi)^2)."""
    return integrate_torus(form.coefficient((0, 1)), form.chart).rational()


# ----------------------------------------------------------------------------
# constructions


def construct_sigma_full() -> BundleData:
    """Flat data whose singular set is the whole base (h = 0)."""
    th1, th2 = "th1", "th2"
    return BundleData(
        beta=DifferentialForm.zero(BASE, 1),
        gamma=one_form(BASE, {th1: 1}),
        f1=ScalarExpr.sin(th2),
        f2=ScalarExpr.cos(th2),
        g1=0,
        g2=0,
        omega1=DifferentialForm.zero(BASE, 2),
        omega2=DifferentialForm.zero(BASE, 2),
    )


def _class_constants(omega1, omega2):
    """``(g1, g2) != 0`` with ``g1 I1 + g2 I2 = 0`` for the means ``I1, I2``."""
    a, b = torus_mean(omega1), torus_mean(omega2)
    return (-b, a), (a, b)


def construct_sigma_empty(omega1: DifferentialForm, omega2: DifferentialForm, grid: int = 17,
                          tol: float = 1e-9):
    """Data with empty singular set on a bundle with a non-zero class.

    Returns ``(data, report)``.
    """
    (g1, g2), (a, b) = _class_constants(omega1, omega2)
    if a == 0 and b == 0:
        raise ConstructionError("both characteristic classes vanish: no pair with empty singular set")
    gamma = fourier_primitive(g1 * omega1 + g2 * omega2)
    G = g2 * omega1 - g1 * omega2
    m = torus_mean(G)  # equals a^2 + b^2 > 0
    beta = fourier_primitive(G - area_form(m))
    bd = BundleData(beta, gamma, ScalarExpr.const(g2), ScalarExpr.const(-g1), g1, g2, omega1, omega2)
    report = check_conditions(bd, grid, tol)
    sset = classify_singular_set(singular_function(bd))
    report.conditions.append(_match_condition(sset, SingularSetSpec("Empty")))
    report.extra["singular_set"] = sset.to_dict()
    report.extra["l"] = str(m)
    return bd, report


def lemma_volume_pair(spec: SingularSetSpec):
    """``(h, beta)`` on T^2 with ``h^{-1}(0)`` the given circles and
    ``h dbeta + beta ^ dh`` an area form.

    Equally spaced levels use ``h = s sin(m (th2 - c1))``,
    ``beta = (s/m) cos(m (th2 - c1)) dth1`` which gives exactly
    ``dth1 ^ dth2``.  Otherwise ``h = s prod sin((th2 - c_i)/2)`` and
    ``beta = h' dth1``; then the area coefficient is ``h'^2 - h h''``, which
    is positive because ``log|h|`` is concave between the circles and
    ``h' != 0`` on them.
    """
    if spec.variant != "Circles":
        raise ValueError("the volume pair is built for circle singular sets")
    th2 = ScalarExpr.symbol("th2")
    pi = ScalarExpr.pi()
    c1 = spec.levels[0]
    if spec.equally_spaced:
        m = len(spec.levels) // 2
        s = spec.signs[0]
        arg = m * th2 - m * c1 * pi
        h = s * ScalarExpr.sin(arg)
        beta = one_form(BASE, {"th1": Fraction(s, m) * ScalarExpr.cos(arg)})
        return h, beta
    # between c1 and c2 every factor but the first is negative
    s = -spec.signs[0]
    h = ScalarExpr.const(s)
    for c in spec.levels:
        h = h * ScalarExpr.sin(th2 / 2 - (c / 2) * pi)
    return h, one_form(BASE, {"th1": h.diff("th2")})


def lemma_area_coefficient(h, beta) -> ScalarExpr:
    """Coefficient of ``h dbeta + beta ^ dh`` on ``dth1 ^ dth2``."""
    form = to_expr(h) * exterior_derivative(beta) + wedge(beta, _d(h))
    return form.coefficient((0, 1))


def construct_sigma_circles(spec: SingularSetSpec, omega1: DifferentialForm | None = None,
                            omega2: DifferentialForm | None = None, k1=1, k2=0, grid: int = 17,
                            tol: float = 1e-9, g=None):
    """Data whose singular set is the preimage of the given circles.

    Returns ``(data, r, report)`` where ``beta = r beta0`` and ``r`` is the
    first power of two for which cc1 passes its grid check.
    """
    omega1 = omega1 if omega1 is not None else DifferentialForm.zero(BASE, 2)
    omega2 = omega2 if omega2 is not None else DifferentialForm.zero(BASE, 2)
    k1, k2 = as_rational(k1), as_rational(k2)
    h, beta0 = lemma_volume_pair(spec)
    lemma = lemma_area_coefficient(h, beta0)
    (g1, g2), (a, b) = _class_constants(omega1, omega2)
    if a == 0 and b == 0:
        g1, g2 = (as_rational(g[0]), as_rational(g[1])) if g is not None else (Fraction(0), Fraction(1))
        if g1 == 0 and g2 == 0:
            raise ConstructionError("(g1, g2) must not both vanish")
    # gamma = -(g1 gamma1 + g2 gamma2) with d gamma_i = Omega^i
    gamma = fourier_primitive(g1 * omega1 + g2 * omega2)
    D = k1 * g2 - k2 * g1
    if D == 0:
        raise ConstructionError(f"k1 g2 - k2 g1 vanishes for k = ({k1}, {k2}), g = ({g1}, {g2})")
    f = h / D
    r = 1
    while True:
        bd = BundleData(r * beta0, gamma, k1 * f, k2 * f, g1, g2, omega1, omega2)
        report = check_conditions(bd, grid, tol)
        if report.condition("cc1").passed:
            break
        r *= 2
        if r > R_CAP:
            raise RCapError(f"cc1 still fails at r = {R_CAP}")
    sset = classify_singular_set(singular_function(bd))
    report.conditions.append(_match_condition(sset, spec))
    lemma_cond = nonvanishing_condition("lemma_area_form", lemma, BASE, grid, tol)
    report.conditions.append(lemma_cond)
    report.extra["r"] = r
    report.extra["singular_set"] = sset.to_dict()
    report.extra["lemma_area_coefficient"] = str(lemma)
    return bd, r, report


def _match_condition(sset: SingularSet, spec: SingularSetSpec) -> Condition:
    ok = sset.matches(spec)
    status = SYMBOLIC_PASS if ok and sset.exact else NUMERIC_PASS if ok else NUMERIC_FAIL
    return Condition("singular_set", status, witness=None if ok else {"found": sset.to_dict(),
                                                                     "expected": spec.to_dict()})


# ----------------------------------------------------------------------------


def lift(form: DifferentialForm, chart: Chart) -> DifferentialForm:
    """Re-express a base form on a chart that contains the base coordinates."""
    terms = {}
    for idx, c in form.terms.items():
        terms[tuple(chart.index(form.chart.names[i]) for i in idx)] = c
    return DifferentialForm(chart, form.degree, terms)


def assemble_trivial_bundle_pair(bd: BundleData, name: str = "bundle") -> ContactPair:
    """The pair on ``T^4 = T^2 x T^2`` with the flat connection ``theta^i = dphi_i``."""
    if not bd.flat:
        raise ConstructionError("curvature must vanish to realize the bundle on a single T^4 chart")
    alpha = lift(bd.beta, TOTAL) + one_form(TOTAL, {"phi1": bd.f1, "phi2": bd.f2})
    eta = lift(bd.gamma, TOTAL) + one_form(TOTAL, {"phi1": bd.g1, "phi2": bd.g2})
    return ContactPair(TOTAL, alpha, eta, 1, 0, name=name)


def verify_assembled(bd: BundleData, grid: int = 17, tol: float = 1e-9) -> VerificationReport:
    return verify(assemble_trivial_bundle_pair(bd), grid=grid, tol=tol)
