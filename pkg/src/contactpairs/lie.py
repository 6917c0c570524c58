"""Lie algebras given by rational structure constants.

Left-invariant forms are constant-coefficient exterior elements over the
dual basis; their differential is the Chevalley-Eilenberg differential
``d w^k = - sum_{i<j} c_ij^k w^i ^ w^j``.  Everything here is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .forms import merge_indices
from .report import SYMBOLIC_FAIL, SYMBOLIC_PASS, Condition, VerificationReport
from .scalar import as_rational


class JacobiError(ValueError):
    pass


# ----------------------------------------------------------------------------
# rational linear algebra


def rref(rows):
    """Reduced row echelon form over the rationals; returns (matrix, pivots)."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows) -> int:
    rows = [r for r in rows]
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols: int) -> list:
    """Basis of ``{v : rows v = 0}`` as lists of Fractions."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantForm:
    """Constant-coefficient form over the dual basis ``w^1 .. w^n`` (0-based keys)."""

    dim: int
    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            if len(idx) != self.degree or any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"bad index {idx} for degree {self.degree}")
            if idx and (idx[0] < 0 or idx[-1] >= self.dim):
                raise ValueError(f"index {idx} out of range")
            c = as_rational(c)
            if c:
                clean[idx] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def basis(cls, dim: int, i: int) -> "InvariantForm":
        """The dual covector ``w^i`` (0-based)."""
        return cls(dim, 1, {(i,): 1})

    @classmethod
    def scalar(cls, dim: int, c=1) -> "InvariantForm":
        return cls(dim, 0, {(): c})

    def coefficient(self, idx) -> Fraction:
        return self.terms.get(tuple(idx), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if self.degree != other.degree or self.dim != other.dim:
            raise ValueError("degree or dimension mismatch")
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return InvariantForm(self.dim, self.degree, acc)

    def __neg__(self):
        return InvariantForm(self.dim, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = as_rational(c)
        return InvariantForm(self.dim, self.degree, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return (self.dim, self.degree, self.terms) == (other.dim, other.degree, other.terms)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def wedge(self, other: "InvariantForm") -> "InvariantForm":
        acc: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                m = merge_indices(i, j)
                if m is None:
                    continue
                key, sign = m
                acc[key] = acc.get(key, 0) + sign * a * b
        return InvariantForm(self.dim, self.degree + other.degree, acc)

    def contract(self, v) -> "InvariantForm":
        """``i(v)`` for a vector ``v`` given in the basis ``X_1 .. X_n``."""
        if self.degree == 0:
            raise ValueError("interior product of a 0-form is undefined")
        acc: dict = {}
        for idx, c in self.terms.items():
            for pos, i in enumerate(idx):
                if v[i]:
                    key = idx[:pos] + idx[pos + 1:]
                    acc[key] = acc.get(key, 0) + (-1) ** pos * v[i] * c
        return InvariantForm(self.dim, self.degree - 1, acc)

    def __call__(self, v) -> Fraction:
        if self.degree != 1:
            raise ValueError("only 1-forms can be evaluated on a vector")
        return sum((c * as_rational(v[i]) for (i,), c in self.terms.items()), Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            basis = "^".join(f"w{i + 1}" for i in idx)
            parts.append(f"{self.terms[idx]}" + (f"*{basis}" if basis else ""))
        return " + ".join(parts)


def power(a: InvariantForm, m: int) -> InvariantForm:
    out = InvariantForm.scalar(a.dim)
    for _ in range(m):
        out = out.wedge(a)
    return out


class LieAlgebra:
    """Structure constants ``[X_i, X_j] = sum_k c[i, j][k] X_k`` for ``i < j`` (0-based)."""

    def __init__(self, dim: int, constants: dict | None = None, name: str = "g"):
        if dim < 1:
            raise ValueError("dimension must be positive")
        clean: dict = {}
        for (i, j), result in (constants or {}).items():
            if i == j:
                raise ValueError(f"bracket [X{i + 1}, X{i + 1}] is zero by antisymmetry")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if not (0 <= i and j < dim):
                raise ValueError(f"bracket index out of range for dimension {dim}")
            row = dict(clean.get((i, j), {}))
            for k, c in result.items():
                if not 0 <= k < dim:
                    raise ValueError(f"bracket result index {k + 1} out of range")
                row[k] = row.get(k, 0) + sign * as_rational(c)
            row = {k: c for k, c in row.items() if c}
            if row:
                clean[(i, j)] = row
            else:
                clean.pop((i, j), None)
        self.dim = dim
        self.constants = clean
        self.name = name
        self._violations = None  # cached Jacobi check; instances are treated as immutable

    @classmethod
    def from_brackets(cls, dim: int, brackets, name: str = "g") -> "LieAlgebra":
        """``brackets`` maps 1-based ``(i, j)`` to ``{k: c}`` or a single 1-based ``k``."""
        out = {}
        for (i, j), res in brackets.items():
            if isinstance(res, int):
                res = {res: 1}
            out[(i - 1, j - 1)] = {k - 1: c for k, c in res.items()}
        return cls(dim, out, name)

    @classmethod
    def from_manifest(cls, data: dict, name: str = "g") -> "LieAlgebra":
        """``{"dim": n, "brackets": [{"i": 1, "j": 4, "result": [{"k": 3, "c": "1"}]}]}``."""
        dim = int(data["dim"])
        out: dict = {}
        for b in data.get("brackets", []):
            i, j = int(b["i"]) - 1, int(b["j"]) - 1
            out[(i, j)] = {int(r["k"]) - 1: as_rational(r.get("c", 1)) for r in b["result"]}
        return cls(dim, out, name)

    def to_manifest(self) -> dict:
        return {
            "dim": self.dim,
            "brackets": [
                {"i": i + 1, "j": j + 1,
                 "result": [{"k": k + 1, "c": str(c)} for k, c in sorted(row.items())]}
                for (i, j), row in sorted(self.constants.items())
            ],
        }

    def bracket_basis(self, i: int, j: int) -> list:
        v = [Fraction(0)] * self.dim
        if i == j:
            return v
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, c in self.constants.get((i, j), {}).items():
            v[k] = sign * c
        return v

    def bracket(self, u, v) -> list:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b or i == j:
                    continue
                for k, c in enumerate(self.bracket_basis(i, j)):
                    if c:
                        out[k] += as_rational(a) * as_rational(b) * c
        return out

    def basis_vector(self, i: int) -> list:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    def __repr__(self):
        return f"<LieAlgebra {self.name} dim={self.dim}>"


def check_jacobi(g: LieAlgebra) -> bool:
    """Exact cyclic-sum test on all basis triples ``i < j < k``."""
    return not jacobi_violations(g)


def jacobi_violations(g: LieAlgebra) -> list:
    bad = []
    for i, j, k in itertools.combinations(range(g.dim), 3):
        X = [g.basis_vector(t) for t in (i, j, k)]
        total = [Fraction(0)] * g.dim
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            term = g.bracket(g.bracket(X[a], X[b]), X[c])
            total = [s + t for s, t in zip(total, term)]
        if any(total):
            bad.append((i + 1, j + 1, k + 1))
    return bad


def _d_basis(g: LieAlgebra, k: int) -> InvariantForm:
    return InvariantForm(g.dim, 2, {(i, j): -row[k] for (i, j), row in g.constants.items() if k in row})


def ce_differential(g: LieAlgebra, a: InvariantForm) -> InvariantForm:
    """Chevalley-Eilenberg differential, extended as an antiderivation."""
    bad = g._violations
    if bad is None:
        bad = g._violations = jacobi_violations(g)
    if bad:
        raise JacobiError(f"Jacobi identity fails on basis triples {bad}")
    return _ce(g, a)


def _ce(g: LieAlgebra, a: InvariantForm) -> InvariantForm:
    if a.dim != g.dim:
        raise ValueError("form and algebra have different dimensions")
    out = InvariantForm(g.dim, a.degree + 1)
    for idx, c in a.terms.items():
        for pos, k in enumerate(idx):
            piece = InvariantForm.scalar(g.dim, c * (-1) ** pos)
            for q, t in enumerate(idx):
                piece = piece.wedge(_d_basis(g, t) if q == pos else InvariantForm.basis(g.dim, t))
            out = out + piece
    return out


def derived_span(g: LieAlgebra, span: list) -> list:
    """Basis (row-reduced) of ``[g, span]``."""
    vecs = []
    for i in range(g.dim):
        for v in span:
            w = g.bracket(g.basis_vector(i), v)
            if any(w):
                vecs.append(w)
    return rref(vecs)[0] if vecs else []


def is_nilpotent(g: LieAlgebra) -> tuple:
    """``(nilpotent, steps)``: steps is the first ``m`` with ``g^{m+1} = 0``.

    When the lower central series stabilizes at a non-zero ideal the step
    count is the length at which it stabilized.
    """
    current = [g.basis_vector(i) for i in range(g.dim)]
    steps = 0
    while current:
        nxt = derived_span(g, current)
        steps += 1
        if len(nxt) == len(current):
            return False, steps
        current = nxt
    return True, steps


# ----------------------------------------------------------------------------
# invariant contact pairs


def _top_constant(form: InvariantForm) -> Fraction:
    return form.coefficient(tuple(range(form.dim)))


def invariant_cp_check(g: LieAlgebra, a: InvariantForm, e: InvariantForm, h: int, k: int,
                       name: str | None = None) -> VerificationReport:
    if a.degree != 1 or e.degree != 1:
        raise ValueError("alpha and eta must be 1-forms")
    if 2 * h + 2 * k + 2 != g.dim:
        raise ValueError(f"type ({h}, {k}) needs dimension {2 * h + 2 * k + 2}, algebra has {g.dim}")
    if h + k < 1:
        raise ValueError("type (0, 0) is excluded")
    da, de = ce_differential(g, a), ce_differential(g, e)
    conds = []
    for label, form in (("d_alpha_power_closed", power(da, h + 1)), ("d_eta_power_closed", power(de, k + 1))):
        if form.is_zero():
            conds.append(Condition(label, SYMBOLIC_PASS))
        else:
            idx = min(form.terms)
            conds.append(Condition(label, SYMBOLIC_FAIL,
                                   witness={"idx": [i + 1 for i in idx], "coef": str(form.terms[idx])}))
    c = _top_constant(reduce(InvariantForm.wedge, [a, power(da, h), e, power(de, k)]))
    conds.append(
        Condition("volume", SYMBOLIC_PASS, detail={"value": str(c)})
        if c
        else Condition("volume", SYMBOLIC_FAIL, witness="identically zero", detail={"value": "0"})
    )
    report = VerificationReport(name or g.name, conds)
    report.extra["type"] = [h, k]
    report.extra["volume_constant"] = str(c)
    report.extra["rational_structure_constants"] = True
    return report


@dataclass(frozen=True)
class InvariantPair:
    algebra: LieAlgebra
    alpha: InvariantForm
    eta: InvariantForm
    h: int
    k: int

    @property
    def name(self) -> str:
        return self.algebra.name

    def form(self, which: str) -> InvariantForm:
        return {"alpha": self.alpha, "eta": self.eta}[which]

    def check(self) -> VerificationReport:
        return invariant_cp_check(self.algebra, self.alpha, self.eta, self.h, self.k)


def _kernel_vector(omega: InvariantForm) -> list:
    n = omega.dim
    out = []
    for j in range(n):
        c = omega.coefficient(tuple(i for i in range(n) if i != j))
        out.append(-c if j % 2 else c)
    return out


def invariant_reeb_fields(cp: InvariantPair) -> tuple:
    """Reeb vectors in the basis ``X_1 .. X_n``."""
    g = cp.algebra
    da, de = ce_differential(g, cp.alpha), ce_differential(g, cp.eta)
    dah, dek = power(da, cp.h), power(de, cp.k)
    Va = _kernel_vector(reduce(InvariantForm.wedge, [dah, cp.eta, dek]))
    Ve = _kernel_vector(reduce(InvariantForm.wedge, [cp.alpha, dah, dek]))
    sa, se = cp.alpha(Va), cp.eta(Ve)
    if not sa or not se:
        raise ValueError("Reeb normalization vanishes; the pair is not a contact pair")
    return [x / sa for x in Va], [x / se for x in Ve]


def invariant_reeb_properties(cp: InvariantPair) -> VerificationReport:
    """Exact Reeb identities; brackets come from the structure constants.

    For left-invariant data ``L_X w = i(X) dw`` because ``w(X)`` is constant.
    """
    g = cp.algebra
    Xa, Xe = invariant_reeb_fields(cp)
    da, de = ce_differential(g, cp.alpha), ce_differential(g, cp.eta)

    def scalar(name, value):
        return Condition(name, SYMBOLIC_PASS) if value == 0 else Condition(name, SYMBOLIC_FAIL, witness=str(value))

    def form(name, f):
        return Condition(name, SYMBOLIC_PASS) if f.is_zero() else Condition(name, SYMBOLIC_FAIL, witness=str(f))

    br = g.bracket(Xa, Xe)
    conds = [
        scalar("alpha(X_alpha)=1", cp.alpha(Xa) - 1),
        scalar("eta(X_eta)=1", cp.eta(Xe) - 1),
        scalar("eta(X_alpha)=0", cp.eta(Xa)),
        scalar("alpha(X_eta)=0", cp.alpha(Xe)),
        form("i(X_alpha)dalpha=0", da.contract(Xa)),
        form("i(X_alpha)deta=0", de.contract(Xa)),
        form("i(X_eta)dalpha=0", da.contract(Xe)),
        form("i(X_eta)deta=0", de.contract(Xe)),
        Condition("[X_alpha,X_eta]=0", SYMBOLIC_PASS) if not any(br)
        else Condition("[X_alpha,X_eta]=0", SYMBOLIC_FAIL, witness=[str(x) for x in br]),
    ]
    for fname, X in (("X_alpha", Xa), ("X_eta", Xe)):
        for label, d_form in (("alpha", da), ("eta", de)):
            conds.append(form(f"L_{fname}({label})=0", d_form.contract(X)))
    report = VerificationReport(cp.name, conds)
    report.extra["reeb"] = {"alpha": [str(x) for x in Xa], "eta": [str(x) for x in Xe], "exact": True}
    return report


def invariant_distribution(cp: InvariantPair, which: str) -> list:
    """Rational basis of ``ker w ∩ ker i(.) dw`` inside the Lie algebra."""
    w = cp.form(which)
    dw = ce_differential(cp.algebra, w)
    n = cp.algebra.dim
    rows = [[w.coefficient((i,)) for i in range(n)]]
    basis = [cp.algebra.basis_vector(i) for i in range(n)]
    contractions = [dw.contract(v) for v in basis]
    for j in range(n):
        rows.append([contractions[i].coefficient((j,)) for i in range(n)])
    return nullspace(rows, n)


def invariant_involutive(cp: InvariantPair, which: str) -> bool:
    """Exact closure of the distribution under the bracket."""
    frame = invariant_distribution(cp, which)
    r = rank(frame) if frame else 0
    for u, v in itertools.combinations(frame, 2):
        if rank(frame + [cp.algebra.bracket(u, v)]) != r:
            return False
    return True


# ----------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class AlgebraEntry:
    id: str
    algebra: LieAlgebra
    alpha_index: int  # 1-based
    eta_index: int
    h: int
    k: int
    topic: str

    def pair(self) -> InvariantPair:
        n = self.algebra.dim
        return InvariantPair(self.algebra, InvariantForm.basis(n, self.alpha_index - 1),
                             InvariantForm.basis(n, self.eta_index - 1), self.h, self.k)


def _entries() -> list:
    return [
        AlgebraEntry("n4_1", LieAlgebra.from_brackets(4, {(1, 4): 3, (1, 3): 2}, "n4_1"),
                     2, 4, 1, 0, "4-dimensional filiform nilpotent algebra, pair of type (1,0)"),
        AlgebraEntry("n6_12", LieAlgebra.from_brackets(6, {(1, 6): 5, (1, 5): 4, (2, 3): 4}, "n6_12"),
                     4, 6, 2, 0, "6-dimensional nilpotent algebra, pair of type (2,0)"),
        AlgebraEntry("n6_13",
                     LieAlgebra.from_brackets(6, {(1, 6): 5, (1, 5): 4, (1, 4): 3, (5, 6): 2}, "n6_13"),
                     2, 3, 1, 1, "6-dimensional nilpotent algebra, pair of type (1,1)"),
    ]


def catalog() -> list:
    return _entries()


def lookup(name: str) -> AlgebraEntry:
    for e in _entries():
        if e.id == name:
            return e
    raise KeyError(f"unknown Lie algebra {name!r}; known: {[e.id for e in _entries()]}")


# ----------------------------------------------------------------------------
# coordinates on the group of n4_1


def n4_1_coordinates():
    """Left-invariant coframe and frame of the n4_1 group on a Euclidean chart.

    ``w1 = dx1, w2 = dx2 - x1 dx3 + x1^2/2 dx4, w3 = dx3 - x1 dx4, w4 = dx4``
    with dual fields ``X1 = d1, X2 = d2, X3 = d3 + x1 d2, X4 = d4 + x1 d3 + x1^2/2 d2``.
    """
    from .forms import VectorField, one_form
    from .scalar import Chart

    chart = Chart.euclidean("x1", "x2", "x3", "x4")
    coframe = [
        one_form(chart, {"x1": 1}),
        one_form(chart, {"x2": 1, "x3": "-x1", "x4": "x1^2/2"}),
        one_form(chart, {"x3": 1, "x4": "-x1"}),
        one_form(chart, {"x4": 1}),
    ]
    frame = [
        VectorField.from_dict(chart, {"x1": 1}),
        VectorField.from_dict(chart, {"x2": 1}),
        VectorField.from_dict(chart, {"x3": 1, "x2": "x1"}),
        VectorField.from_dict(chart, {"x4": 1, "x3": "x1", "x2": "x1^2/2"}),
    ]
    return chart, coframe, frame


def transport(form: InvariantForm, coframe: list):
    """Express an invariant form through a concrete coframe on a chart."""
    from .forms import DifferentialForm, wedge_all

    chart = coframe[0].chart
    out = DifferentialForm.zero(chart, form.degree)
    for idx, c in form.terms.items():
        if idx:
            piece = wedge_all(*[coframe[i] for i in idx])
        else:
            piece = DifferentialForm.scalar(chart, 1)
        out = out + c * piece
    return out
