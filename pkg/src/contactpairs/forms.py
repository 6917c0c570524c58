"""Differential forms, vector fields and maps on a single chart.

Forms are stored sparsely: strictly increasing 0-based index tuples map to
:class:`~contactpairs.scalar.ScalarExpr` coefficients.  All operations are
exact; the numeric helpers at the bottom (pointwise evaluation and flows)
exist for cross-checks.
"""

from __future__ import annotations

import itertools
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from .scalar import (
    ONE,
    ZERO,
    Chart,
    ExpressionClassError,
    Point,
    ScalarExpr,
    eval_on,
    to_expr,
)


class ChartMismatchError(ValueError):
    pass


def merge_indices(a: tuple, b: tuple):
    """Sorted union of two increasing tuples with the shuffle sign, or None."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    sb = set(b)
    if any(i in sb for i in a):
        return None
    inversions = sum(1 for i in a for j in b if i > j)
    return tuple(sorted(a + b)), (-1 if inversions % 2 else 1)


def _check_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError(f"chart {a.chart.names} differs from {b.chart.names}")


class DifferentialForm:
    """A degree-k form ``sum c_I dx_I`` on a chart."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[tuple, ScalarExpr] | None = None):
        if degree < 0:
            raise ValueError("negative degree")
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not match degree {degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= chart.dim):
                raise ValueError(f"index {idx} out of range for dimension {chart.dim}")
            c = to_expr(c)
            if c:
                clean[idx] = c
        if degree > chart.dim and clean:
            raise ValueError("non-zero form above the top degree")
        self.chart = chart
        self.degree = degree
        self.terms = clean

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_terms(cls, chart: Chart, degree: int, terms: Mapping) -> "DifferentialForm":
        """Build from index tuples that may use coordinate names in any order."""
        acc: dict = {}
        for idx, c in terms.items():
            if isinstance(idx, (str, int)):
                idx = (idx,)
            raw = [chart.index(i) if isinstance(i, str) else int(i) for i in idx]
            if len(set(raw)) != len(raw):
                continue
            sign = 1
            order = sorted(range(len(raw)), key=lambda j: raw[j])
            # parity of the sorting permutation
            seen = [False] * len(raw)
            for start in range(len(raw)):
                if seen[start]:
                    continue
                j, length = start, 0
                while not seen[j]:
                    seen[j] = True
                    j = order[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
            key = tuple(sorted(raw))
            acc[key] = acc.get(key, ZERO) + sign * to_expr(c)
        return cls(chart, degree, acc)

    @classmethod
    def scalar(cls, chart: Chart, f) -> "DifferentialForm":
        return cls(chart, 0, {(): to_expr(f)})

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "DifferentialForm":
        return cls(chart, degree, {})

    # -- algebra --------------------------------------------------------------

    def coefficient(self, idx) -> ScalarExpr:
        return self.terms.get(tuple(idx), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        _check_chart(self, other)
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, ZERO) + v
        return DifferentialForm(self.chart, self.degree, acc)

    def __neg__(self):
        return DifferentialForm(self.chart, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, DifferentialForm):
            return NotImplemented
        f = to_expr(f)
        return DifferentialForm(self.chart, self.degree, {k: f * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, self.degree, frozenset(self.terms.items())))

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        return wedge(self, other)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            basis = "^".join(f"d{self.chart.names[i]}" for i in idx)
            parts.append(f"({c})" + (f" {basis}" if basis else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self.degree}-form {self}>"


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    _check_chart(a, b)
    acc: dict = {}
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            m = merge_indices(i, j)
            if m is None:
                continue
            key, sign = m
            prod = ca * cb
            acc[key] = acc.get(key, ZERO) + (prod if sign > 0 else -prod)
    return DifferentialForm(a.chart, a.degree + b.degree, acc)


def wedge_all(*forms: DifferentialForm) -> DifferentialForm:
    return reduce(wedge, forms)


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    names = a.chart.names
    acc: dict = {}
    for idx, c in a.terms.items():
        for name in c.free_symbols():
            j = a.chart.index(name)
            if j in idx:
                continue
            pos = sum(1 for i in idx if i < j)
            key = tuple(sorted(idx + (j,)))
            dc = c.diff(names[j])
            acc[key] = acc.get(key, ZERO) + (-dc if pos % 2 else dc)
    return DifferentialForm(a.chart, a.degree + 1, acc)


d = exterior_derivative


def form_power(a: DifferentialForm, m: int) -> DifferentialForm:
    if m < 0:
        raise ValueError("negative power")
    out = DifferentialForm.scalar(a.chart, ONE)
    for _ in range(m):
        out = wedge(out, a)
    return out


def one_form(chart: Chart, coeffs: Mapping) -> DifferentialForm:
    return DifferentialForm.from_terms(chart, 1, coeffs)


def coordinate_differential(chart: Chart, name: str) -> DifferentialForm:
    return DifferentialForm(chart, 1, {(chart.index(name),): ONE})


def volume_form(chart: Chart) -> DifferentialForm:
    return DifferentialForm(chart, chart.dim, {tuple(range(chart.dim)): ONE})


def top_coefficient(a: DifferentialForm) -> ScalarExpr:
    if a.degree != a.chart.dim:
        raise ValueError(f"degree {a.degree} is not the top degree {a.chart.dim}")
    return a.coefficient(tuple(range(a.chart.dim)))


# ----------------------------------------------------------------------------


class VectorField:
    """``sum X^i d/dx_i`` with symbolic components."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence):
        comps = tuple(to_expr(c) for c in components)
        if len(comps) != chart.dim:
            raise ValueError(f"{len(comps)} components for a {chart.dim}-dimensional chart")
        self.chart = chart
        self.components = comps

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping[str, object]) -> "VectorField":
        vals = [ZERO] * chart.dim
        for name, c in comps.items():
            vals[chart.index(name)] = to_expr(c)
        return cls(chart, vals)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        return cls.from_dict(chart, {name: 1})

    def apply(self, f) -> ScalarExpr:
        """Directional derivative ``X(f)``."""
        f = to_expr(f)
        out = ZERO
        for name, c in zip(self.chart.names, self.components):
            if c:
                df = f.diff(name)
                if df:
                    out = out + c * df
        return out

    def __call__(self, f) -> ScalarExpr:
        return self.apply(f)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __add__(self, other):
        _check_chart(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField(self.chart, [-c for c in self.components])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, VectorField):
            return NotImplemented
        f = to_expr(f)
        return VectorField(self.chart, [f * c for c in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self):
        return hash((self.chart, self.components))

    def at(self, p: Point) -> np.ndarray:
        env = p.env
        return np.array([c.evaluate(env) for c in self.components], dtype=float)

    def __str__(self):
        parts = [f"({c}) d/d{n}" for n, c in zip(self.chart.names, self.components) if c]
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"<VectorField {self}>"


def pair_form_vector(a: DifferentialForm, X: VectorField) -> ScalarExpr:
    """``a(X)`` for a 1-form."""
    if a.degree != 1:
        raise ValueError("pairing needs a 1-form")
    _check_chart(a, X)
    out = ZERO
    for (i,), c in a.terms.items():
        if X.components[i]:
            out = out + c * X.components[i]
    return out


def interior_product(X: VectorField, a: DifferentialForm) -> DifferentialForm:
    _check_chart(a, X)
    if a.degree == 0:
        raise ValueError("interior product of a 0-form is undefined")
    acc: dict = {}
    for idx, c in a.terms.items():
        for pos, i in enumerate(idx):
            xi = X.components[i]
            if not xi:
                continue
            key = idx[:pos] + idx[pos + 1:]
            val = xi * c
            acc[key] = acc.get(key, ZERO) + (-val if pos % 2 else val)
    return DifferentialForm(a.chart, a.degree - 1, acc)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    _check_chart(X, Y)
    return VectorField(X.chart, [X.apply(yi) - Y.apply(xi) for xi, yi in zip(X.components, Y.components)])


def lie_derivative(X: VectorField, a: DifferentialForm) -> DifferentialForm:
    """Cartan formula ``i(X) da + d(i(X) a)``; ``X(f)`` on 0-forms."""
    _check_chart(a, X)
    if a.degree == 0:
        return DifferentialForm.scalar(a.chart, X.apply(a.coefficient(())))
    return interior_product(X, exterior_derivative(a)) + exterior_derivative(interior_product(X, a))


# ----------------------------------------------------------------------------


class ChartMap:
    """A map ``source -> target`` given by target coordinates in source coordinates.

    Components landing in periodic target coordinates must be affine with
    integer coefficients on periodic source coordinates and a rational
    multiple of pi as offset; this keeps every pullback in class.
    """

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Chart, target: Chart, components: Sequence):
        comps = tuple(to_expr(c) for c in components)
        if len(comps) != target.dim:
            raise ValueError(f"{len(comps)} components for a {target.dim}-dimensional target")
        for name, per, comp in zip(target.names, target.periodic, comps):
            unknown = comp.free_symbols() - set(source.names)
            if unknown:
                raise ValueError(f"component for {name!r} uses non-source symbols {sorted(unknown)}")
            if per:
                _check_angle_component(name, comp, source)
        self.source = source
        self.target = target
        self.components = comps

    @classmethod
    def identity(cls, chart: Chart) -> "ChartMap":
        return cls(chart, chart, chart.coordinates())

    def substitution(self) -> dict:
        return dict(zip(self.target.names, self.components))

    def pull_scalar(self, f) -> ScalarExpr:
        return to_expr(f).subs(self.substitution())

    def differentials(self) -> list:
        """``d(phi^i)`` as 1-forms on the source chart."""
        return [exterior_derivative(DifferentialForm.scalar(self.source, c)) for c in self.components]

    def jacobian(self) -> list:
        return [[c.diff(n) for n in self.source.names] for c in self.components]

    def __repr__(self):
        return f"<ChartMap {self.source.names} -> ({', '.join(map(str, self.components))})>"


def _check_angle_component(name: str, comp: ScalarExpr, source: Chart):
    lin = comp.as_linear()
    if lin is None:
        raise ExpressionClassError(
            f"component {comp} for periodic coordinate {name!r} must be affine in the angles"
        )
    coeffs, _ = lin
    for src, a in coeffs:
        if not source.periodic[source.index(src)]:
            raise ExpressionClassError(
                f"periodic coordinate {name!r} depends on non-periodic {src!r}"
            )
        if a.denominator != 1:
            raise ExpressionClassError(
                f"non-integer coefficient {a} of {src!r} in periodic coordinate {name!r}"
            )


def pullback(phi: ChartMap, a: DifferentialForm) -> DifferentialForm:
    if a.chart != phi.target:
        raise ChartMismatchError("form does not live on the target chart of the map")
    sub = phi.substitution()
    if a.degree == 0:
        return DifferentialForm.scalar(phi.source, a.coefficient(()).subs(sub))
    dphi = phi.differentials()
    out = DifferentialForm.zero(phi.source, a.degree)
    for idx, c in a.terms.items():
        piece = DifferentialForm.scalar(phi.source, c.subs(sub))
        for i in idx:
            piece = wedge(piece, dphi[i])
        out = out + piece
    return out


class CurveSpec:
    """One smooth piece ``t -> (x_1(t), ..., x_n(t))`` of a curve on a chart."""

    __slots__ = ("chart", "components", "param", "interval")

    def __init__(self, chart: Chart, components: Sequence, param: str = "t", interval=(0.0, 1.0)):
        comps = tuple(to_expr(c) for c in components)
        if len(comps) != chart.dim:
            raise ValueError(f"{len(comps)} curve components for a {chart.dim}-dimensional chart")
        for c in comps:
            extra = c.free_symbols() - {param}
            if extra:
                raise ValueError(f"curve component {c} depends on {sorted(extra)} besides {param!r}")
        self.chart = chart
        self.components = comps
        self.param = param
        self.interval = (float(interval[0]), float(interval[1]))

    def substitution(self) -> dict:
        return dict(zip(self.chart.names, self.components))

    def velocity(self) -> list:
        return [c.diff(self.param) for c in self.components]

    def point_at(self, t: float) -> Point:
        env = {self.param: t}
        return Point(self.chart, [c.evaluate(env) for c in self.components])


# ----------------------------------------------------------------------------
# numerics


def evaluate_form(a: DifferentialForm, p: Point) -> dict:
    """Coefficients at ``p`` for every increasing index tuple (zeros included)."""
    env = p.env
    return {
        idx: (a.terms[idx].evaluate(env) if idx in a.terms else 0.0)
        for idx in itertools.combinations(range(a.chart.dim), a.degree)
    }


def form_tensor(a: DifferentialForm, p: Point) -> np.ndarray:
    """Dense antisymmetric array of the form at ``p``."""
    n = a.chart.dim
    out = np.zeros((n,) * a.degree)
    env = p.env
    for idx, c in a.terms.items():
        v = c.evaluate(env)
        for perm in itertools.permutations(range(a.degree)):
            sign = _perm_sign(perm)
            out[tuple(idx[j] for j in perm)] = sign * v
    return out


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def contract_at(a: DifferentialForm, p: Point, v: np.ndarray) -> dict:
    """Numeric ``i(v) a`` at ``p`` as a dict over increasing tuples."""
    env = p.env
    out: dict = {}
    for idx, c in a.terms.items():
        val = c.evaluate(env)
        for pos, i in enumerate(idx):
            key = idx[:pos] + idx[pos + 1:]
            out[key] = out.get(key, 0.0) + (-1) ** pos * v[i] * val
    return out


def _field_evaluator(X: VectorField):
    names = X.chart.names
    jac = [[c.diff(n) for n in names] for c in X.components]

    def field(x):
        env = dict(zip(names, x.T))
        shape = (x.shape[0],)
        return np.stack([eval_on(c, env, shape) for c in X.components], axis=1)

    def dfield(x):
        env = dict(zip(names, x.T))
        shape = (x.shape[0],)
        return np.stack(
            [np.stack([eval_on(c, env, shape) for c in row], axis=1) for row in jac], axis=1
        )

    return field, dfield


def flow(X: VectorField, points: np.ndarray, t: float, steps: int):
    """RK4 flow of ``X`` with its Jacobian (variational equation).

    ``points`` has shape (P, n); returns (positions, jacobians (P, n, n)).
    """
    field, dfield = _field_evaluator(X)
    x = np.array(points, dtype=float)
    P, n = x.shape
    J = np.broadcast_to(np.eye(n), (P, n, n)).copy()
    h = t / steps

    def rhs(x, J):
        return field(x), dfield(x) @ J

    for _ in range(steps):
        k1x, k1J = rhs(x, J)
        k2x, k2J = rhs(x + h / 2 * k1x, J + h / 2 * k1J)
        k3x, k3J = rhs(x + h / 2 * k2x, J + h / 2 * k2J)
        k4x, k4J = rhs(x + h * k3x, J + h * k3J)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        J = J + h / 6 * (k1J + 2 * k2J + 2 * k3J + k4J)
    return x, J


def pulled_back_coefficients(a: DifferentialForm, positions: np.ndarray, jac: np.ndarray) -> np.ndarray:
    """Coefficients of ``phi^* a`` at base points, given ``phi(p)`` and ``Dphi(p)``.

    Returns shape (P, C(n, k)) in ``itertools.combinations`` order.
    """
    names = a.chart.names
    P, n = positions.shape
    env = dict(zip(names, positions.T))
    tuples = list(itertools.combinations(range(n), a.degree))
    out = np.zeros((P, len(tuples)))
    for K, c in a.terms.items():
        vals = eval_on(c, env, (P,))
        for col, I in enumerate(tuples):
            if a.degree == 0:
                out[:, col] += vals
                continue
            sub = jac[:, list(K), :][:, :, list(I)]
            out[:, col] += vals * np.linalg.det(sub)
    return out


def form_coefficients(a: DifferentialForm, positions: np.ndarray) -> np.ndarray:
    n = a.chart.dim
    P = positions.shape[0]
    return pulled_back_coefficients(a, positions, np.broadcast_to(np.eye(n), (P, n, n)))


def flow_lie_derivative(X: VectorField, a: DifferentialForm, points: np.ndarray,
                        step: float = 1e-4, substeps: int = 4) -> np.ndarray:
    """Central difference of ``phi_t^* a`` at t=0 along the flow of ``X``."""
    xp, Jp = flow(X, points, step, substeps)
    xm, Jm = flow(X, points, -step, substeps)
    return (pulled_back_coefficients(a, xp, Jp) - pulled_back_coefficients(a, xm, Jm)) / (2 * step)
