"""Built-in worked examples, each runnable as a self-contained check.

Ids may take arguments, e.g. ``darboux(1,2)``, ``t4_irrational(1/2)``,
``t3_fn(3)`` or ``bundle_circles(0, pi/2, pi, 3*pi/2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import bundle as bdl
from . import lie
from .forms import ChartMap, DifferentialForm, VectorField, exterior_derivative, one_form
from .invariance import contact_condition, orientation_condition, pullback_check
from .pair import (
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
from .report import (
    NUMERIC_FAIL,
    NUMERIC_PASS,
    SYMBOLIC_FAIL,
    SYMBOLIC_PASS,
    Condition,
    VerificationReport,
)
from .scalar import Chart, as_rational, parse_pi_multiple, to_expr

FLOW_TOL = 1e-6


class UnknownExampleError(KeyError):
    pass


@dataclass
class PairExample:
    pair: ContactPair
    frames: dict = field(default_factory=dict)  # which -> list of VectorField


@dataclass
class PullbackExample:
    name: str
    form: DifferentialForm
    map: ChartMap
    region: tuple = (-1.0, 1.0)


@dataclass
class CatalogResult:
    id: str
    kind: str
    reports: list
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "passed": self.passed,
               "reports": [r.to_dict() for r in self.reports]}
        out.update(self.extra)
        return out

    def summary(self) -> str:
        head = f"{self.id} [{self.kind}]: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + [r.summary() for r in self.reports])


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: str  # pair | lie | pullback | bundle
    signature: str
    description: str
    topic: str
    builder: Callable
    defaults: tuple = ()

    def build(self, *args):
        return self.builder(*(args or self.defaults))


# ----------------------------------------------------------------------------
# builders


def _darboux(h=1, k=0) -> PairExample:
    h, k = int(h), int(k)
    if h > 3 or k > 3:
        raise ValueError("catalog Darboux pairs have h, k <= 3")
    cp = darboux_pair(h, k)
    xs = [n for n in cp.chart.names if n.startswith("x")]
    ys = [n for n in cp.chart.names if n.startswith("y")]
    frames = {
        "alpha": [VectorField.coordinate(cp.chart, n) for n in ys],
        "eta": [VectorField.coordinate(cp.chart, n) for n in xs],
    }
    return PairExample(cp, frames)


def _t4_product() -> PairExample:
    c = Chart.torus("th1", "th2", "th3", "phi")
    alpha = one_form(c, {"th1": "sin(th3)", "th2": "-cos(th3)"})
    eta = one_form(c, {"phi": 1})
    frames = {
        "alpha": [VectorField.coordinate(c, "phi")],
        "eta": [VectorField.coordinate(c, n) for n in ("th1", "th2", "th3")],
    }
    return PairExample(ContactPair(c, alpha, eta, 1, 0, name="t4_product"), frames)


def _t4_irrational(lam=Fraction(1, 10)) -> PairExample:
    lam = as_rational(lam)
    c = Chart.torus("th1", "th2", "th3", "th4")
    omega = one_form(c, {"th1": "cos(th3)", "th2": "sin(th3)"})
    eta = one_form(c, {"th4": 1, "th1": lam})
    frames = {
        "alpha": [VectorField.coordinate(c, "th4")],
        "eta": [VectorField.from_dict(c, {"th1": 1, "th4": -lam}),
                VectorField.coordinate(c, "th2"), VectorField.coordinate(c, "th3")],
    }
    return PairExample(ContactPair(c, omega, eta, 1, 0, name=f"t4_irrational({lam})"), frames)


def _n4_1_chart() -> PairExample:
    chart, coframe, frame = lie.n4_1_coordinates()
    cp = ContactPair(chart, coframe[1], coframe[3], 1, 0, name="n4_1_chart")
    frames = {"alpha": [frame[3]], "eta": [frame[0], frame[1], frame[2]]}
    return PairExample(cp, frames)


def _omega_n(chart: Chart, n: int) -> DifferentialForm:
    return one_form(chart, {"th1": f"cos({n}*th3)", "th2": f"sin({n}*th3)"})


def _t3_fn(n=1) -> PullbackExample:
    n = int(n)
    if n == 0:
        raise ValueError("n must be a non-zero integer")
    c = Chart.torus("th1", "th2", "th3")
    phi = ChartMap(c, c, ["th2", "th1", f"pi/{2 * n} - th3"])
    return PullbackExample(f"t3_fn({n})", _omega_n(c, n), phi)


def _t3_reflection() -> PullbackExample:
    c = Chart.torus("th1", "th2", "th3")
    phi = ChartMap(c, c, ["th1", "-th2", "-th3"])
    return PullbackExample("t3_reflection", _omega_n(c, 1), phi)


def t5_form() -> DifferentialForm:
    c = Chart.torus("th1", "th2", "th3", "th4", "th5")
    return one_form(c, {
        "th1": "sin(th2)*cos(th2)",
        "th2": "-sin(th1)*cos(th1)",
        "th3": "cos(th1)*cos(th2)",
        "th4": "sin(th1)*cos(th3) - sin(th2)*sin(th3)",
        "th5": "sin(th1)*sin(th3) + sin(th2)*cos(th3)",
    })


def _t5_contact() -> PullbackExample:
    form = t5_form()
    c = form.chart
    phi = ChartMap(c, c, ["pi - th1", "-th2", "pi/2 - th3", "th5", "th4"])
    return PullbackExample("t5_contact", form, phi)


def _fv_germ() -> PullbackExample:
    c = Chart(("th1", "th2", "t"), (True, True, False))
    form = one_form(c, {"th1": 1, "th2": "t"})
    phi = ChartMap(c, c, ["th1", "pi - th2", "-t"])
    return PullbackExample("fv_germ", form, phi)


def _bundle_circles_spec(*levels):
    if not levels:
        return bdl.SingularSetSpec.circles("0,pi")
    return bdl.SingularSetSpec("Circles", tuple(as_rational(q) for q in levels))


_ENTRIES = [
    CatalogEntry("darboux", "pair", "(h,k)", "Darboux model pair on R^(2h+2k+2), h,k <= 3",
                 "canonical local model", _darboux, (1, 0)),
    CatalogEntry("t4_product", "pair", "", "alpha = sin(th3) dth1 - cos(th3) dth2, eta = dphi on T^4",
                 "product pair on the 4-torus", _t4_product),
    CatalogEntry("t4_irrational", "pair", "(lambda)",
                 "omega = cos(th3) dth1 + sin(th3) dth2, eta = dth4 + lambda dth1 on T^4",
                 "pair whose eta has non-compact leaves for irrational lambda", _t4_irrational,
                 (Fraction(1, 10),)),
    CatalogEntry("n4_1", "lie", "", "[X1,X4]=X3, [X1,X3]=X2 with pair (w2, w4) of type (1,0)",
                 "4-dimensional nilpotent Lie group", lambda: lie.lookup("n4_1")),
    CatalogEntry("n6_12", "lie", "", "[X1,X6]=X5, [X1,X5]=X4, [X2,X3]=X4 with pair (w4, w6) of type (2,0)",
                 "6-dimensional nilpotent Lie group", lambda: lie.lookup("n6_12")),
    CatalogEntry("n6_13", "lie", "",
                 "[X1,X6]=X5, [X1,X5]=X4, [X1,X4]=X3, [X5,X6]=X2 with pair (w2, w3) of type (1,1)",
                 "6-dimensional nilpotent Lie group", lambda: lie.lookup("n6_13")),
    CatalogEntry("t3_fn", "pullback", "(n)",
                 "f_n(th1,th2,th3) = (th2, th1, pi/(2n) - th3) preserves cos(n th3) dth1 + sin(n th3) dth2",
                 "contact form on T^3 with an invariant diffeomorphism", _t3_fn, (1,)),
    CatalogEntry("t3_reflection", "pullback", "",
                 "f(th1,th2,th3) = (th1, -th2, -th3) preserves cos(th3) dth1 + sin(th3) dth2",
                 "contact form on T^3 with an invariant diffeomorphism", _t3_reflection),
    CatalogEntry("t5_contact", "pullback", "",
                 "five-term contact form on T^5 and f = (pi - th1, -th2, pi/2 - th3, th5, th4)",
                 "contact form on T^5 with an invariant diffeomorphism", _t5_contact),
    CatalogEntry("fv_germ", "pullback", "",
                 "F_V(th1,th2,t) = (th1, pi - th2, -t) preserves dth1 + t dth2 on T^2 x ]-1,1[",
                 "invariant contact germ along a torus", _fv_germ),
    CatalogEntry("bundle_full", "bundle", "", "flat T^2-bundle data with singular set everything",
                 "invariant pair on a torus bundle, h = 0", bdl.construct_sigma_full),
    CatalogEntry("bundle_empty", "bundle", "",
                 "Omega1 = dth1^dth2, Omega2 = 0: data with empty singular set",
                 "invariant pair on a torus bundle, h never zero",
                 lambda: bdl.construct_sigma_empty(bdl.area_form(1), bdl.area_form(0))),
    CatalogEntry("bundle_circles", "bundle", "(levels...)",
                 "flat data whose singular set is the given th2-circles (default 0, pi)",
                 "invariant pair on a torus bundle, h vanishing on circles",
                 lambda *lv: bdl.construct_sigma_circles(_bundle_circles_spec(*lv))),
]


def entries() -> list:
    return list(_ENTRIES)


def list_ids() -> list:
    return [e.id + e.signature for e in _ENTRIES]


_ID = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\((.*)\))?\s*$")


def parse_id(text: str):
    m = _ID.match(text)
    if not m:
        raise UnknownExampleError(f"malformed example id {text!r}")
    base, args = m.group(1), m.group(2)
    entry = next((e for e in _ENTRIES if e.id == base), None)
    if entry is None:
        raise UnknownExampleError(f"unknown example {base!r}; known: {[e.id for e in _ENTRIES]}")
    values = []
    if args and args.strip():
        for a in args.split(","):
            e = to_expr(a.strip())
            if entry.id == "bundle_circles":
                values.append(parse_pi_multiple(a.strip()))
            else:
                q = e.rational_value()
                if q is None:
                    raise ValueError(f"argument {a!r} is not rational")
                values.append(q)
    return entry, tuple(values)


def build(text: str):
    entry, args = parse_id(text)
    return entry.build(*args)


# ----------------------------------------------------------------------------
# runners


def pair_reports(ex: PairExample, grid: int = 17, tol: float = 1e-9, seed: int = 42,
                 flow: bool = True) -> tuple:
    """Verification, Reeb properties, class dimensions, involutivity and flow invariance."""
    cp = ex.pair
    reports = [verify(cp, grid, tol, seed)]
    if not reports[0].passed:
        return reports, {}
    rp = reeb_fields(cp)
    props = check_reeb_properties(cp, rp)
    reports.append(props)
    reports.append(class_dimension_check(cp, seed=seed))
    frames_used = {}
    for which in ("alpha", "eta"):
        frame = ex.frames.get(which) or derive_frame(cp, which, rp)
        frames_used[which] = frame is not None
        if frame is not None:
            reports.append(involutivity_check(cp, which, frame, tol=tol, seed=seed))
    extra = {
        "reeb": {
            "alpha": [str(c) for c in rp.alpha.numerator.components],
            "eta": [str(c) for c in rp.eta.numerator.components],
            "alpha_denominator": str(rp.alpha.denominator),
            "eta_denominator": str(rp.eta.denominator),
            "exact": rp.exact,
        },
        "frames": frames_used,
    }
    if flow:
        dev = reeb_flow_invariance(cp, rp, seed=seed)
        worst = max(dev.values())
        reports.append(VerificationReport(f"{cp.name}:flow", [Condition(
            "reeb_flow_invariance", NUMERIC_PASS if worst < FLOW_TOL else NUMERIC_FAIL,
            tol=FLOW_TOL, detail={k: float(f"{v:.3e}") for k, v in sorted(dev.items())})], seed=seed))
    return reports, extra


def lie_reports(entry: lie.AlgebraEntry) -> tuple:
    g = entry.algebra
    cp = entry.pair()
    nil, steps = lie.is_nilpotent(g)
    basics = VerificationReport(g.name, [
        Condition("jacobi", SYMBOLIC_PASS if lie.check_jacobi(g) else SYMBOLIC_FAIL,
                  witness=lie.jacobi_violations(g) or None),
        Condition("nilpotent", SYMBOLIC_PASS if nil else SYMBOLIC_FAIL, detail={"steps": steps}),
    ])
    dims = []
    for which, expected in (("alpha", 2 * cp.k + 1), ("eta", 2 * cp.h + 1)):
        basis = lie.invariant_distribution(cp, which)
        dims.append(Condition(f"dim_ker_{which}", SYMBOLIC_PASS if len(basis) == expected else SYMBOLIC_FAIL,
                              detail={"expected": expected, "observed": len(basis)}))
        dims.append(Condition(f"involutive_{which}",
                              SYMBOLIC_PASS if lie.invariant_involutive(cp, which) else SYMBOLIC_FAIL))
    reports = [basics, cp.check(), lie.invariant_reeb_properties(cp),
               VerificationReport(f"{g.name}:distributions", dims)]
    extra = {"algebra": g.to_manifest(), "pair": [f"w{entry.alpha_index}", f"w{entry.eta_index}"],
             "type": [entry.h, entry.k]}
    if entry.id == "n4_1":
        reports.append(n4_1_coordinate_agreement())
        more, _ = pair_reports(_n4_1_chart(), flow=False)
        reports.extend(more)
    return reports, extra


def n4_1_coordinate_agreement() -> VerificationReport:
    """The coordinate coframe of the n4_1 group has the CE differential of the algebra."""
    g = lie.lookup("n4_1").algebra
    _, coframe, _ = lie.n4_1_coordinates()
    conds = []
    for i, w in enumerate(coframe):
        ce = lie.transport(lie.ce_differential(g, lie.InvariantForm.basis(g.dim, i)), coframe)
        residual = exterior_derivative(w) - ce
        conds.append(Condition(f"d_w{i + 1}_matches_ce", SYMBOLIC_PASS if residual.is_zero() else SYMBOLIC_FAIL,
                               witness=None if residual.is_zero() else str(residual)))
    return VerificationReport("n4_1:coordinates", conds)


def pullback_reports(ex: PullbackExample, grid: int = 17, tol: float = 1e-9) -> tuple:
    report = pullback_check(ex.map, ex.form, ex.name)
    report.conditions.append(orientation_condition(ex.map))
    report.conditions.append(contact_condition(ex.form, grid, tol, ex.region))
    report.grid, report.tol = grid, tol
    return [report], {"form": str(ex.form), "map": [str(c) for c in ex.map.components]}


def bundle_reports(result, grid: int = 17, tol: float = 1e-9, seed: int = 42, flow: bool = True) -> tuple:
    if isinstance(result, bdl.BundleData):
        bd, report, r = result, bdl.check_conditions(result, grid, tol), None
        sset = bdl.classify_singular_set(bdl.singular_function(bd))
        report.extra["singular_set"] = sset.to_dict()
        report.conditions.append(Condition("singular_set", SYMBOLIC_PASS if sset.variant == "All" else SYMBOLIC_FAIL,
                                           detail=sset.to_dict()))
    elif len(result) == 2:
        (bd, report), r = result, None
    else:
        bd, r, report = result
    reports = [report]
    extra = {"bundle": bd.to_dict()}
    if r is not None:
        extra["r"] = r
    if bd.flat:
        cp = bdl.assemble_trivial_bundle_pair(bd)
        more, pair_extra = pair_reports(PairExample(cp), grid, tol, seed, flow)
        reports.extend(more)
        extra.update(pair_extra)
    return reports, extra


def run(text: str, grid: int = 17, tol: float = 1e-9, seed: int = 42, flow: bool = True) -> CatalogResult:
    entry, args = parse_id(text)
    obj = entry.build(*args)
    label = entry.id if not args else f"{entry.id}({', '.join(str(a) for a in args)})"
    if entry.kind == "pair":
        reports, extra = pair_reports(obj, grid, tol, seed, flow)
    elif entry.kind == "lie":
        reports, extra = lie_reports(obj)
    elif entry.kind == "pullback":
        reports, extra = pullback_reports(obj, grid, tol)
    else:
        reports, extra = bundle_reports(obj, grid, tol, seed, flow)
    extra["description"] = entry.description
    extra["topic"] = entry.topic
    return CatalogResult(label, entry.kind, reports, extra)
