"""Contact pairs on a chart: verification, Reeb fields, characteristic
distributions, Legendrian curves and the two function brackets.

A pair ``(alpha, eta)`` of type ``(h, k)`` on a chart of dimension
``2h + 2k + 2`` is a contact pair when ``(d alpha)^(h+1) = 0``,
``(d eta)^(k+1) = 0`` and ``alpha ^ (d alpha)^h ^ eta ^ (d eta)^k`` never
vanishes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .forms import (
    CurveSpec,
    DifferentialForm,
    VectorField,
    contract_at,
    exterior_derivative,
    flow,
    form_coefficients,
    form_power,
    form_tensor,
    interior_product,
    lie_bracket,
    one_form,
    pair_form_vector,
    pulled_back_coefficients,
    top_coefficient,
    wedge,
    wedge_all,
)
from .report import (
    NUMERIC_FAIL,
    NUMERIC_PASS,
    SYMBOLIC_FAIL,
    SYMBOLIC_PASS,
    Condition,
    VerificationReport,
    closed_condition,
    nonvanishing_condition,
    zero_condition,
)
from .scalar import ONE, ZERO, Chart, ExpressionClassError, Point, ScalarExpr, to_expr

ALPHA, ETA = "alpha", "eta"


class ReebError(RuntimeError):
    pass


class SingularSystemError(RuntimeError):
    def __init__(self, message, condition_number=float("inf")):
        super().__init__(message)
        self.condition_number = condition_number


class NoFrameError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ContactPair:
    chart: Chart
    alpha: DifferentialForm
    eta: DifferentialForm
    h: int
    k: int
    name: str = "pair"
    darboux: bool = False

    def __post_init__(self):
        for label, form in ((ALPHA, self.alpha), (ETA, self.eta)):
            if form.degree != 1:
                raise ValueError(f"{label} must be a 1-form, got degree {form.degree}")
            if form.chart != self.chart:
                raise ValueError(f"{label} lives on a different chart")
        if self.h < 0 or self.k < 0:
            raise ValueError("type (h, k) must be non-negative")
        if self.h + self.k < 1:
            raise ValueError("type (0, 0) is excluded: need h >= 1 or k >= 1")
        if 2 * self.h + 2 * self.k + 2 != self.chart.dim:
            raise ValueError(
                f"type ({self.h}, {self.k}) needs dimension {2 * self.h + 2 * self.k + 2}, "
                f"chart has {self.chart.dim}"
            )

    def form(self, which: str) -> DifferentialForm:
        return {ALPHA: self.alpha, ETA: self.eta}[_which(which)]

    def top_form(self) -> DifferentialForm:
        da, de = exterior_derivative(self.alpha), exterior_derivative(self.eta)
        return wedge_all(self.alpha, form_power(da, self.h), self.eta, form_power(de, self.k))


def _which(which: str) -> str:
    if which not in (ALPHA, ETA):
        raise ValueError(f"expected 'alpha' or 'eta', got {which!r}")
    return which


def darboux_pair(h: int, k: int) -> ContactPair:
    """``alpha = dx_{2h+1} + sum x_{2i-1} dx_{2i}``, ``eta`` likewise in the y's."""
    if h < 0 or k < 0 or h + k < 1:
        raise ValueError("need h, k >= 0 with h + k >= 1")
    xs = [f"x{i}" for i in range(1, 2 * h + 2)]
    ys = [f"y{i}" for i in range(1, 2 * k + 2)]
    chart = Chart.euclidean(*xs, *ys)

    def model(names, m):
        coeffs = {names[2 * m]: ONE}
        for i in range(m):
            coeffs[names[2 * i + 1]] = ScalarExpr.symbol(names[2 * i])
        return one_form(chart, coeffs)

    return ContactPair(chart, model(xs, h), model(ys, k), h, k, name=f"darboux({h},{k})", darboux=True)


def verify(cp: ContactPair, grid: int = 17, tol: float = 1e-9, seed: int = 42,
           region=(-1.0, 1.0)) -> VerificationReport:
    da = exterior_derivative(cp.alpha)
    de = exterior_derivative(cp.eta)
    conds = [
        closed_condition("d_alpha_power_closed", form_power(da, cp.h + 1)),
        closed_condition("d_eta_power_closed", form_power(de, cp.k + 1)),
    ]
    top = wedge_all(cp.alpha, form_power(da, cp.h), cp.eta, form_power(de, cp.k))
    conds.append(nonvanishing_condition("volume", top_coefficient(top), cp.chart, grid, tol, region))
    report = VerificationReport(cp.name, conds, grid=grid, tol=tol, seed=seed)
    report.extra["type"] = [cp.h, cp.k]
    if not all(cp.chart.periodic):
        report.extra["region"] = list(region)
    return report


# ----------------------------------------------------------------------------
# Reeb fields


@dataclass(frozen=True, eq=False)
class HomogeneousField:
    """The field ``numerator / denominator``; exact when the denominator is 1."""

    numerator: VectorField
    denominator: ScalarExpr = ONE

    @property
    def exact(self) -> bool:
        return self.denominator == ONE

    @property
    def field(self) -> VectorField:
        if not self.exact:
            raise ReebError("field is only known pointwise (denominator left in homogeneous form)")
        return self.numerator

    def at(self, p: Point) -> np.ndarray:
        return self.numerator.at(p) / self.denominator.evaluate(p.env)

    def evaluate_many(self, positions: np.ndarray) -> np.ndarray:
        names = self.numerator.chart.names
        env = dict(zip(names, positions.T))
        P = positions.shape[0]
        num = np.stack([np.broadcast_to(np.asarray(c.evaluate(env), float), (P,))
                        for c in self.numerator.components], axis=1)
        den = np.broadcast_to(np.asarray(self.denominator.evaluate(env), float), (P,))
        return num / den[:, None]


@dataclass(frozen=True, eq=False)
class ReebPair:
    alpha: HomogeneousField
    eta: HomogeneousField

    @property
    def exact(self) -> bool:
        return self.alpha.exact and self.eta.exact


def kernel_field(omega: DifferentialForm) -> VectorField:
    """The field V with ``i(V) dx_1^...^dx_n = omega`` for an (n-1)-form."""
    n = omega.chart.dim
    if omega.degree != n - 1:
        raise ValueError("kernel_field needs an (n-1)-form")
    comps = []
    for j in range(n):
        c = omega.coefficient(tuple(i for i in range(n) if i != j))
        comps.append(-c if j % 2 else c)
    return VectorField(omega.chart, comps)


def _normalized(V: VectorField, form: DifferentialForm, label: str) -> HomogeneousField:
    s = pair_form_vector(form, V)
    if not s:
        raise ReebError(f"{label}(V) vanishes identically; the pair cannot be a contact pair")
    comps = []
    for c in V.components:
        q = c.exact_div(s)
        if q is None:
            return HomogeneousField(V, s)
        comps.append(q)
    return HomogeneousField(VectorField(V.chart, comps), ONE)


def reeb_fields(cp: ContactPair) -> ReebPair:
    da = exterior_derivative(cp.alpha)
    de = exterior_derivative(cp.eta)
    da_h, de_k = form_power(da, cp.h), form_power(de, cp.k)
    omega_alpha = wedge_all(da_h, cp.eta, de_k)
    omega_eta = wedge_all(cp.alpha, da_h, de_k)
    return ReebPair(
        _normalized(kernel_field(omega_alpha), cp.alpha, ALPHA),
        _normalized(kernel_field(omega_eta), cp.eta, ETA),
    )


def _scaled_bracket(X: HomogeneousField, Y: HomogeneousField) -> VectorField:
    """``s^2 t^2 [V/s, W/t]`` expressed without denominators."""
    V, s, W, t = X.numerator, X.denominator, Y.numerator, Y.denominator
    return s * t * lie_bracket(V, W) - (s * V.apply(t)) * W + (t * W.apply(s)) * V


def _scaled_lie_derivative(X: HomogeneousField, form: DifferentialForm) -> DifferentialForm:
    """``s^2 L_{V/s} form`` for a 1-form, without denominators."""
    V, s = X.numerator, X.denominator
    val = pair_form_vector(form, V)
    out = s * interior_product(V, exterior_derivative(form))
    out = out + s * exterior_derivative(DifferentialForm.scalar(form.chart, val))
    return out - val * exterior_derivative(DifferentialForm.scalar(form.chart, s))


def check_reeb_properties(cp: ContactPair, rp: ReebPair | None = None) -> VerificationReport:
    """Normalization, annihilation, commutation and flow-invariance identities.

    Non-exact fields are handled in cleared-denominator form, so every check
    stays symbolic.
    """
    rp = rp or reeb_fields(cp)
    da = exterior_derivative(cp.alpha)
    de = exterior_derivative(cp.eta)
    Xa, Xe = rp.alpha, rp.eta
    conds = [
        zero_condition("alpha(X_alpha)=1", pair_form_vector(cp.alpha, Xa.numerator) - Xa.denominator),
        zero_condition("eta(X_eta)=1", pair_form_vector(cp.eta, Xe.numerator) - Xe.denominator),
        zero_condition("eta(X_alpha)=0", pair_form_vector(cp.eta, Xa.numerator)),
        zero_condition("alpha(X_eta)=0", pair_form_vector(cp.alpha, Xe.numerator)),
        closed_condition("i(X_alpha)dalpha=0", interior_product(Xa.numerator, da)),
        closed_condition("i(X_alpha)deta=0", interior_product(Xa.numerator, de)),
        closed_condition("i(X_eta)dalpha=0", interior_product(Xe.numerator, da)),
        closed_condition("i(X_eta)deta=0", interior_product(Xe.numerator, de)),
    ]
    br = _scaled_bracket(Xa, Xe)
    conds.append(
        Condition("[X_alpha,X_eta]=0", SYMBOLIC_PASS)
        if br.is_zero()
        else Condition("[X_alpha,X_eta]=0", SYMBOLIC_FAIL, witness=str(br))
    )
    for fname, X in (("X_alpha", Xa), ("X_eta", Xe)):
        for form_name, form in ((ALPHA, cp.alpha), (ETA, cp.eta)):
            conds.append(closed_condition(f"L_{fname}({form_name})=0", _scaled_lie_derivative(X, form)))
    report = VerificationReport(cp.name, conds)
    report.extra["exact"] = rp.exact
    return report


def reeb_uniqueness(cp: ContactPair, p: Point, which: str = ALPHA) -> float:
    """Smallest singular value of ``X -> (form(X), i(X) Omega)`` at ``p``.

    A positive value certifies that the defining equations pin down a
    single vector at ``p``.
    """
    which = _which(which)
    da = exterior_derivative(cp.alpha)
    de = exterior_derivative(cp.eta)
    if which == ALPHA:
        omega = wedge_all(form_power(da, cp.h), cp.eta, form_power(de, cp.k))
    else:
        omega = wedge_all(cp.alpha, form_power(da, cp.h), form_power(de, cp.k))
    return float(np.linalg.svd(_defining_matrix(cp.form(which), omega, p), compute_uv=False)[-1])


def _defining_matrix(form: DifferentialForm, omega: DifferentialForm, p: Point) -> np.ndarray:
    n = form.chart.dim
    rows = [[form_tensor(form, p)[i] for i in range(n)]]
    basis = np.eye(n)
    contractions = [contract_at(omega, p, basis[i]) for i in range(n)]
    keys = sorted(set().union(*contractions))
    for key in keys:
        rows.append([contractions[i].get(key, 0.0) for i in range(n)])
    return np.array(rows)


def reeb_flow_invariance(cp: ContactPair, rp: ReebPair | None = None, points=None,
                         t: float = 0.1, step: float = 1e-3, seed: int = 42,
                         n_points: int = 10) -> dict:
    """Max deviation of alpha, eta coefficients after flowing along each Reeb field."""
    rp = rp or reeb_fields(cp)
    if points is None:
        points = cp.chart.random_points(n_points, seed=seed)
    base = np.array([p.values for p in points])
    out = {}
    for fname, X in (("X_alpha", rp.alpha), ("X_eta", rp.eta)):
        field = X.numerator if X.exact else _pointwise_field(X)
        steps = max(1, int(round(abs(t) / step)))
        pos, jac = flow(field, base, t, steps) if isinstance(field, VectorField) else field(base, t, steps)
        for form_name, form in ((ALPHA, cp.alpha), (ETA, cp.eta)):
            moved = pulled_back_coefficients(form, pos, jac)
            here = form_coefficients(form, base)
            out[f"{fname}:{form_name}"] = float(np.max(np.abs(moved - here)))
    return out


def _pointwise_field(X: HomogeneousField):
    """Flow for a homogeneous field using finite-difference Jacobians."""

    def run(base, t, steps):
        x = np.array(base, dtype=float)
        P, n = x.shape
        J = np.broadcast_to(np.eye(n), (P, n, n)).copy()
        h = t / steps
        eps = 1e-6

        def rhs(x, J):
            f = X.evaluate_many(x)
            D = np.zeros((P, n, n))
            for j in range(n):
                e = np.zeros(n)
                e[j] = eps
                D[:, :, j] = (X.evaluate_many(x + e) - X.evaluate_many(x - e)) / (2 * eps)
            return f, D @ J

        for _ in range(steps):
            k1x, k1J = rhs(x, J)
            k2x, k2J = rhs(x + h / 2 * k1x, J + h / 2 * k1J)
            k3x, k3J = rhs(x + h / 2 * k2x, J + h / 2 * k2J)
            k4x, k4J = rhs(x + h * k3x, J + h * k3J)
            x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
            J = J + h / 6 * (k1J + 2 * k2J + 2 * k3J + k4J)
        return x, J

    return run


# ----------------------------------------------------------------------------
# characteristic distributions


@dataclass
class Distribution:
    basis: np.ndarray  # columns span the distribution
    rank_tol: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def characteristic_matrix(form: DifferentialForm, p: Point) -> np.ndarray:
    """Rows of the linear conditions ``form(v) = 0`` and ``i(v) d form = 0``."""
    if form.degree != 1:
        raise ValueError("characteristic distribution needs a 1-form")
    row = form_tensor(form, p)
    M = form_tensor(exterior_derivative(form), p)
    return np.vstack([row[None, :], M])


def characteristic_distribution(form: DifferentialForm, p: Point, rcond: float = 1e-10) -> Distribution:
    A = characteristic_matrix(form, p)
    return Distribution(scipy.linalg.null_space(A, rcond=rcond), rcond)


def involutivity_check(cp: ContactPair, which: str, frame=None, points=None, tol: float = 1e-9,
                       seed: int = 42, n_points: int = 20) -> VerificationReport:
    """Brackets of frame fields must stay in the frame's span at each sample point."""
    which = _which(which)
    if not frame:
        raise NoFrameError(f"no frame available for the {which} distribution of {cp.name}")
    if points is None:
        points = cp.chart.random_points(n_points, seed=seed)
    form = cp.form(which)
    brackets = [lie_bracket(X, Y) for X, Y in itertools.combinations(frame, 2)]
    worst_in, worst_close, worst_rank = 0.0, 0.0, len(frame)
    for p in points:
        F = np.stack([X.at(p) for X in frame], axis=1)
        A = characteristic_matrix(form, p)
        worst_in = max(worst_in, float(np.max(np.abs(A @ F))) if F.size else 0.0)
        worst_rank = min(worst_rank, int(np.linalg.matrix_rank(F, tol=1e-9)))
        for B in brackets:
            b = B.at(p)
            coef, *_ = np.linalg.lstsq(F, b, rcond=None)
            worst_close = max(worst_close, float(np.linalg.norm(F @ coef - b)))
    expected = 2 * cp.k + 1 if which == ALPHA else 2 * cp.h + 1
    conds = [
        Condition("frame_rank", NUMERIC_PASS if worst_rank == expected else NUMERIC_FAIL,
                  detail={"rank": worst_rank, "expected": expected}),
        Condition("frame_in_distribution", NUMERIC_PASS if worst_in < tol else NUMERIC_FAIL,
                  min_abs=None, tol=tol, detail={"max_residual": worst_in}),
        Condition("bracket_closure", NUMERIC_PASS if worst_close < tol else NUMERIC_FAIL,
                  tol=tol, detail={"max_residual": worst_close}),
    ]
    return VerificationReport(f"{cp.name}:{which}-distribution", conds, tol=tol, seed=seed)


# ----------------------------------------------------------------------------
# Legendrian curves


def legendrian_check(cp: ContactPair, curve: CurveSpec, wrt: str = ALPHA, samples: int = 33,
                     tol: float = 1e-9) -> VerificationReport:
    """``form(gamma') = 0`` symbolically and ``i(gamma')(other ^ d other^m) != 0`` at samples."""
    wrt = _which(wrt)
    if curve.chart != cp.chart:
        raise ValueError("curve lives on a different chart")
    form = cp.form(wrt)
    other, m = (cp.eta, cp.k) if wrt == ALPHA else (cp.alpha, cp.h)
    sub = curve.substitution()
    vel = curve.velocity()
    try:
        along = ZERO
        for (i,), c in form.terms.items():
            if vel[i]:
                along = along + c.subs(sub) * vel[i]
    except ExpressionClassError as exc:
        raise ExpressionClassError(f"curve leaves the expression class: {exc}") from exc
    conds = [zero_condition(f"{wrt}(velocity)=0", along)]
    transverse = wedge(other, form_power(exterior_derivative(other), m))
    lo, hi = curve.interval
    worst, worst_t = np.inf, lo
    for t in np.linspace(lo, hi, samples):
        p = curve.point_at(float(t))
        v = np.array([c.evaluate({curve.param: float(t)}) for c in vel])
        vals = contract_at(transverse, p, v)
        mag = max((abs(x) for x in vals.values()), default=0.0)
        if mag < worst:
            worst, worst_t = mag, float(t)
    ok = worst > tol
    conds.append(
        Condition(
            "transverse",
            NUMERIC_PASS if ok else NUMERIC_FAIL,
            min_abs=float(worst),
            argmin=[worst_t],
            grid=samples,
            tol=tol,
            witness=None if ok else {"t": worst_t},
        )
    )
    return VerificationReport(f"{cp.name}:legendrian[{wrt}]", conds, grid=samples, tol=tol)


# ----------------------------------------------------------------------------
# Hamiltonian fields and function brackets


def hamiltonian_system(cp: ContactPair, f, wrt: str, p: Point):
    """Linear system ``A X = b`` whose unique solution is ``X_{f,wrt}`` at ``p``."""
    wrt = _which(wrt)
    f = to_expr(f)
    form, other = (cp.alpha, cp.eta) if wrt == ALPHA else (cp.eta, cp.alpha)
    n = cp.chart.dim
    env = p.env
    w = form_tensor(form, p)
    dw = form_tensor(exterior_derivative(form), p)
    o = form_tensor(other, p)
    do = form_tensor(exterior_derivative(other), p)
    df = np.array([f.diff(name).evaluate(env) for name in cp.chart.names])
    rows, rhs = [o], [0.0]
    for r in do.T:
        rows.append(r)
        rhs.append(0.0)
    rows.append(w)
    rhs.append(f.evaluate(env))
    leaf = scipy.linalg.null_space(np.vstack([o[None, :], do]), rcond=1e-10)
    for a, b in itertools.combinations(range(leaf.shape[1]), 2):
        u, v = leaf[:, a], leaf[:, b]
        wu, wv = w @ u, w @ v
        rows.append((dw @ u) * wv - (dw @ v) * wu)
        rhs.append(-(df @ u * wv - df @ v * wu))
    return np.array(rows).reshape(-1, n), np.array(rhs)


def hamiltonian_field(cp: ContactPair, f, wrt: str, p: Point) -> np.ndarray:
    """The vector ``X_{f,wrt}`` at ``p`` from the pointwise linear system."""
    A, b = hamiltonian_system(cp, f, wrt, p)
    sv = np.linalg.svd(A, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if sv[-1] <= 1e-10 * max(sv[0], 1.0):
        raise SingularSystemError(f"Hamiltonian system is singular at {list(p.values)}", cond)
    X, *_ = np.linalg.lstsq(A, b, rcond=None)
    return X


def darboux_hamiltonian_field(cp: ContactPair, f, wrt: str) -> VectorField:
    """Closed-form ``X_{f,wrt}`` for a Darboux pair."""
    if not cp.darboux:
        raise ValueError("closed form only available for Darboux pairs")
    wrt = _which(wrt)
    f = to_expr(f)
    m = cp.h if wrt == ALPHA else cp.k
    prefix = "x" if wrt == ALPHA else "y"
    names = [f"{prefix}{i}" for i in range(1, 2 * m + 2)]
    z = names[2 * m]
    fz = f.diff(z)
    comps = {z: f}
    for i in range(m):
        pn, qn = names[2 * i], names[2 * i + 1]
        fp = f.diff(pn)
        pe = ScalarExpr.symbol(pn)
        comps[qn] = fp
        comps[pn] = pe * fz - f.diff(qn)
        comps[z] = comps[z] - pe * fp
    return VectorField.from_dict(cp.chart, comps)


def function_bracket(cp: ContactPair, f, g, wrt: str, p: Point, method: str = "auto",
                     step: float = 1e-5) -> float:
    """``form([X_f, X_g])`` at ``p``.

    ``method='symbolic'`` uses the Darboux closed form, ``'stencil'`` central
    differences of pointwise solves; ``'auto'`` picks the former when possible.
    """
    wrt = _which(wrt)
    form = cp.form(wrt)
    if method == "auto":
        method = "symbolic" if cp.darboux else "stencil"
    if method == "symbolic":
        Xf = darboux_hamiltonian_field(cp, f, wrt)
        Xg = darboux_hamiltonian_field(cp, g, wrt)
        return float(pair_form_vector(form, lie_bracket(Xf, Xg)).evaluate(p.env))
    n = cp.chart.dim
    x0 = np.array(p.values)

    def solve(h, x):
        return hamiltonian_field(cp, h, wrt, Point(cp.chart, x))

    Xf, Xg = solve(f, x0), solve(g, x0)
    Df, Dg = np.zeros((n, n)), np.zeros((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = step
        Df[:, j] = (solve(f, x0 + e) - solve(f, x0 - e)) / (2 * step)
        Dg[:, j] = (solve(g, x0 + e) - solve(g, x0 - e)) / (2 * step)
    bracket = Dg @ Xf - Df @ Xg
    return float(form_tensor(form, p) @ bracket)


# ----------------------------------------------------------------------------
# frames and class dimensions


def derive_frame(cp: ContactPair, which: str, rp: ReebPair | None = None):
    """A symbolic frame of ``ker{w, dw}`` when one follows from the pair alone.

    * If the distribution is a line (``k = 0`` for alpha, ``h = 0`` for eta)
      it is spanned by the other Reeb field, provided that field is exact.
    * If ``w`` is closed and has a non-zero constant coefficient on some
      ``dx_j``, then ``d_i - (w_i / w_j) d_j`` (``i != j``) span ``ker w``.

    Returns ``None`` otherwise.
    """
    which = _which(which)
    form = cp.form(which)
    line = cp.k == 0 if which == ALPHA else cp.h == 0
    if line:
        rp = rp or reeb_fields(cp)
        other = rp.eta if which == ALPHA else rp.alpha
        if other.exact:
            return [other.field]
    if not exterior_derivative(form):
        names = cp.chart.names
        for (j,), c in sorted(form.terms.items()):
            q = c.rational_value()
            if q:
                frame = []
                for i, name in enumerate(names):
                    if i == j:
                        continue
                    comps = {name: ONE}
                    wi = form.coefficient((i,))
                    if wi:
                        comps[names[j]] = -wi / q
                    frame.append(VectorField.from_dict(cp.chart, comps))
                return frame
    return None


def class_dimension_check(cp: ContactPair, n_points: int = 50, seed: int = 42,
                          rcond: float = 1e-10) -> VerificationReport:
    """``dim ker{alpha, dalpha} = 2k+1`` and ``dim ker{eta, deta} = 2h+1`` at
    seeded random points, plus independence of the two Reeb vectors."""
    points = cp.chart.random_points(n_points, seed=seed)
    rp = reeb_fields(cp)
    conds = []
    for which, expected in ((ALPHA, 2 * cp.k + 1), (ETA, 2 * cp.h + 1)):
        dims = [characteristic_distribution(cp.form(which), p, rcond).dim for p in points]
        bad = [i for i, dm in enumerate(dims) if dm != expected]
        conds.append(Condition(
            f"dim_ker_{which}",
            NUMERIC_PASS if not bad else NUMERIC_FAIL,
            detail={"expected": expected, "observed": sorted(set(dims))},
            witness=None if not bad else {"point": [round(float(x), 12) for x in points[bad[0]].values],
                                          "dim": dims[bad[0]]},
        ))
    worst = np.inf
    for p in points:
        M = np.stack([rp.alpha.at(p), rp.eta.at(p)], axis=1)
        worst = min(worst, float(np.linalg.svd(M, compute_uv=False)[-1]))
    conds.append(Condition("reeb_independent", NUMERIC_PASS if worst > 1e-9 else NUMERIC_FAIL,
                           min_abs=worst, tol=1e-9))
    return VerificationReport(f"{cp.name}:classes", conds, seed=seed)
