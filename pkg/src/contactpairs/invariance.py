"""Invariance of forms under chart maps, and contact conditions."""

from __future__ import annotations

from fractions import Fraction

from .forms import ChartMap, DifferentialForm, exterior_derivative, form_power, pullback, top_coefficient, wedge
from .report import SYMBOLIC_FAIL, SYMBOLIC_PASS, Condition, VerificationReport, nonvanishing_condition


def pullback_check(phi: ChartMap, a: DifferentialForm, name: str = "pullback") -> VerificationReport:
    """Exact test of ``phi^* a = a``; the witness is the first non-zero residual coefficient."""
    if phi.source != phi.target:
        raise ValueError("invariance needs a map from a chart to itself")
    residual = pullback(phi, a) - a
    if residual.is_zero():
        cond = Condition("pullback_invariant", SYMBOLIC_PASS)
    else:
        idx = min(residual.terms)
        cond = Condition("pullback_invariant", SYMBOLIC_FAIL,
                         witness={"idx": [i + 1 for i in idx], "coef": str(residual.terms[idx])})
    return VerificationReport(name, [cond])


def contact_condition(a: DifferentialForm, grid: int = 17, tol: float = 1e-9,
                      region=(-1.0, 1.0)) -> Condition:
    """``a ^ (da)^m`` never vanishes on a chart of dimension ``2m + 1``."""
    n = a.chart.dim
    if n % 2 == 0:
        raise ValueError("contact forms live in odd dimension")
    top = wedge(a, form_power(exterior_derivative(a), (n - 1) // 2))
    return nonvanishing_condition("contact", top_coefficient(top), a.chart, grid, tol, region)


def _det(M):
    n = len(M)
    M = [list(r) for r in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def orientation_condition(phi: ChartMap) -> Condition:
    """Sign of the Jacobian determinant when it is constant."""
    J = [[e.rational_value() for e in row] for row in phi.jacobian()]
    if any(v is None for row in J for v in row):
        return Condition("orientation_preserving", SYMBOLIC_FAIL, witness="non-constant Jacobian")
    det = _det(J)
    return Condition("orientation_preserving", SYMBOLIC_PASS if det > 0 else SYMBOLIC_FAIL,
                     detail={"jacobian_determinant": str(det)})
