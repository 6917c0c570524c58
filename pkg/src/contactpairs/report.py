"""Verification reports and the shared closedness / non-vanishing checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forms import DifferentialForm
from .scalar import Chart, ScalarExpr

SYMBOLIC_PASS = "symbolic_pass"
SYMBOLIC_FAIL = "symbolic_fail"
NUMERIC_PASS = "numeric_pass"
NUMERIC_FAIL = "numeric_fail"
PASSING = (SYMBOLIC_PASS, NUMERIC_PASS)


@dataclass
class Condition:
    name: str
    status: str
    min_abs: float | None = None
    argmin: list | None = None
    grid: int | None = None
    tol: float | None = None
    witness: object = None
    detail: object = None

    @property
    def passed(self) -> bool:
        return self.status in PASSING

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        for key in ("min_abs", "argmin", "grid", "tol", "witness", "detail"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


@dataclass
class VerificationReport:
    pair: str
    conditions: list = field(default_factory=list)
    grid: int | None = None
    tol: float | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def failing(self) -> list:
        return [c for c in self.conditions if not c.passed]

    def to_dict(self) -> dict:
        out = {"pair": self.pair, "conditions": [c.to_dict() for c in self.conditions]}
        out.update(self.extra)
        if self.grid is not None:
            out["grid"] = self.grid
        if self.tol is not None:
            out["tol"] = self.tol
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    def summary(self) -> str:
        lines = [f"{self.pair}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.conditions:
            line = f"  [{'ok' if c.passed else '!!'}] {c.name}: {c.status}"
            if c.min_abs is not None:
                line += f" (min |.| = {c.min_abs:.3g}" + (f" at {c.argmin})" if c.argmin is not None else ")")
            if c.witness is not None and not c.passed:
                line += f" witness: {c.witness}"
            lines.append(line)
        return "\n".join(lines)


def closed_condition(name: str, form: DifferentialForm) -> Condition:
    """Symbolic vanishing of a form; the witness is its first non-zero coefficient."""
    if form.is_zero():
        return Condition(name, SYMBOLIC_PASS)
    idx = min(form.terms)
    return Condition(
        name,
        SYMBOLIC_FAIL,
        witness={"idx": [i + 1 for i in idx], "coef": str(form.terms[idx])},
    )


def zero_condition(name: str, e: ScalarExpr) -> Condition:
    if not e:
        return Condition(name, SYMBOLIC_PASS)
    return Condition(name, SYMBOLIC_FAIL, witness=str(e))


def nonvanishing_condition(name: str, value: ScalarExpr, chart: Chart, grid: int = 17,
                           tol: float = 1e-9, region=(-1.0, 1.0)) -> Condition:
    """Certify that a scalar never vanishes.

    A non-zero constant passes symbolically.  Otherwise the scalar is sampled
    on a grid over the coordinates it actually depends on; it passes when
    every sample has magnitude above ``tol`` and no sign change occurs (a
    sign change forces a zero on the connected chart).
    """
    if value.is_constant():
        if value:
            return Condition(name, SYMBOLIC_PASS, detail={"value": str(value)})
        return Condition(name, SYMBOLIC_FAIL, witness="identically zero", detail={"value": "0"})
    free = [n for n in chart.names if n in value.free_symbols()]
    axes = [chart.grid_axis(n, grid, region) for n in free]
    mesh = np.meshgrid(*axes, indexing="ij")
    env = dict(zip(free, mesh))
    vals = np.broadcast_to(np.asarray(value.evaluate(env), dtype=float), mesh[0].shape)
    mags = np.abs(vals)
    flat = int(np.argmin(mags))
    where = np.unravel_index(flat, mags.shape)
    argmin = [0.0] * chart.dim
    for n, m in zip(free, mesh):
        argmin[chart.index(n)] = float(m[where])
    min_abs = float(mags[where])
    sign_change = bool(np.any(vals > 0) and np.any(vals < 0))
    ok = min_abs > tol and not sign_change
    detail = {"free": free}
    if sign_change:
        detail["sign_change"] = True
    return Condition(
        name,
        NUMERIC_PASS if ok else NUMERIC_FAIL,
        min_abs=min_abs,
        argmin=[round(x, 12) for x in argmin],
        grid=grid,
        tol=tol,
        witness=None if ok else {"point": [round(x, 12) for x in argmin], "value": float(vals[where])},
        detail=detail,
    )
