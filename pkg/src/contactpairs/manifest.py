"""JSON manifests describing charts, forms, maps, curves, pairs and checks.

A manifest looks like::

    {
      "chart": {"names": ["th1", "th2", "th3", "phi"], "periodic": [true, true, true, true]},
      "forms": {
        "alpha": {"degree": 1, "terms": [{"idx": [1], "coef": "sin(th3)"},
                                         {"idx": [2], "coef": "-cos(th3)"}]},
        "eta": {"degree": 1, "terms": [{"idx": [4], "coef": "1"}]}
      },
      "maps": {"f": ["th2", "th1", "pi/2 - th3", "phi"]},
      "curves": {"c": {"components": ["0", "0", "1", "t"], "param": "t", "interval": [0, 1]}},
      "pairs": {"main": {"alpha": "alpha", "eta": "eta", "h": 1, "k": 0,
                         "frames": {"eta": [["1", "0", "0", "0"], ...]}}},
      "checks": [{"check": "verify"}, {"check": "reeb"}, {"check": "pullback", "map": "f", "form": "alpha"}],
      "settings": {"grid": 17, "tol": 1e-9, "seed": 42, "region": [-1, 1]}
    }

Indices in ``idx`` are 1-based.  Coefficients use the expression grammar
of :mod:`contactpairs.parse`.  An ``"algebra"`` block
(``{"dim": n, "brackets": [...]}``) with a ``"pair"`` of 1-based dual
indices describes a left-invariant pair instead of a chart pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .forms import ChartMap, CurveSpec, DifferentialForm, VectorField
from .lie import InvariantForm, InvariantPair, LieAlgebra, JacobiError, check_jacobi
from .pair import ContactPair
from .parse import ParseError
from .scalar import Chart, ExpressionClassError, check_torus_function, to_expr

CHECKS = ("verify", "reeb", "distributions", "involutivity", "legendrian", "pullback", "flow")


class ManifestError(ValueError):
    pass


@dataclass
class Manifest:
    chart: Chart | None = None
    forms: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    frames: dict = field(default_factory=dict)  # pair name -> {which: [VectorField]}
    checks: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)
    algebra_pair: InvariantPair | None = None

    def pair(self, name: str | None = None) -> ContactPair:
        if name is None:
            if len(self.pairs) != 1:
                raise ManifestError(f"manifest declares {len(self.pairs)} pairs; name one of {sorted(self.pairs)}")
            return next(iter(self.pairs.values()))
        try:
            return self.pairs[name]
        except KeyError:
            raise ManifestError(f"unknown pair {name!r}; declared: {sorted(self.pairs)}") from None

    def pair_name(self, name: str | None = None) -> str:
        return self.pair(name).name

    def form(self, name: str) -> DifferentialForm:
        try:
            return self.forms[name]
        except KeyError:
            raise ManifestError(f"unknown form {name!r}; declared: {sorted(self.forms)}") from None

    def map(self, name: str) -> ChartMap:
        try:
            return self.maps[name]
        except KeyError:
            raise ManifestError(f"unknown map {name!r}; declared: {sorted(self.maps)}") from None

    def curve(self, name: str) -> CurveSpec:
        try:
            return self.curves[name]
        except KeyError:
            raise ManifestError(f"unknown curve {name!r}; declared: {sorted(self.curves)}") from None


def _expr(text, where: str, chart: Chart | None = None):
    try:
        e = to_expr(str(text) if not isinstance(text, str) else text)
    except (ParseError, ExpressionClassError) as exc:
        raise ManifestError(f"{where}: {exc}") from exc
    if chart is not None:
        unknown = e.free_symbols() - set(chart.names)
        if unknown:
            raise ManifestError(f"{where}: unknown symbols {sorted(unknown)}")
        try:
            check_torus_function(e, chart)
        except (ExpressionClassError, ValueError) as exc:
            raise ManifestError(f"{where}: {exc}") from exc
    return e


def parse_chart(data) -> Chart:
    if not isinstance(data, dict) or "names" not in data:
        raise ManifestError("chart needs a 'names' list")
    names = list(data["names"])
    periodic = data.get("periodic", [False] * len(names))
    if isinstance(periodic, bool):
        periodic = [periodic] * len(names)
    try:
        return Chart(tuple(names), tuple(bool(p) for p in periodic))
    except ValueError as exc:
        raise ManifestError(f"chart: {exc}") from exc


def parse_form(data, chart: Chart, where: str = "form") -> DifferentialForm:
    if not isinstance(data, dict) or "degree" not in data:
        raise ManifestError(f"{where}: expected {{'degree': k, 'terms': [...]}}")
    degree = int(data["degree"])
    terms = {}
    for n, t in enumerate(data.get("terms", [])):
        idx = t.get("idx", [])
        if len(idx) != degree:
            raise ManifestError(f"{where}: term {n} has {len(idx)} indices for degree {degree}")
        if any(not (1 <= int(i) <= chart.dim) for i in idx):
            raise ManifestError(f"{where}: term {n} index out of range 1..{chart.dim}")
        key = tuple(int(i) - 1 for i in idx)
        if tuple(sorted(key)) in {tuple(sorted(k)) for k in terms}:
            raise ManifestError(f"{where}: repeated index set {idx}")
        terms[key] = _expr(t.get("coef", "0"), f"{where} term {n}", chart)
    try:
        return DifferentialForm.from_terms(chart, degree, terms)
    except (ValueError, KeyError) as exc:
        raise ManifestError(f"{where}: {exc}") from exc


def form_to_json(a: DifferentialForm) -> dict:
    return {"degree": a.degree,
            "terms": [{"idx": [i + 1 for i in idx], "coef": str(c)} for idx, c in sorted(a.terms.items())]}


def _vector(comps, chart: Chart, where: str) -> VectorField:
    if len(comps) != chart.dim:
        raise ManifestError(f"{where}: {len(comps)} components for dimension {chart.dim}")
    return VectorField(chart, [_expr(c, where, chart) for c in comps])


def load(source) -> Manifest:
    """Load from a path, a JSON string or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        try:
            if text.lstrip().startswith("{"):
                data = json.loads(text)
            else:
                data = json.loads(Path(text).read_text())
        except FileNotFoundError as exc:
            raise ManifestError(f"manifest not found: {text}") from exc
        except json.JSONDecodeError as exc:
            raise ManifestError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    m = Manifest(settings=dict(data.get("settings", {})))
    if "algebra" in data:
        m.algebra_pair = _load_algebra(data)
    if "chart" in data:
        chart = m.chart = parse_chart(data["chart"])
        for name, f in data.get("forms", {}).items():
            m.forms[name] = parse_form(f, chart, f"form {name!r}")
        for name, comps in data.get("maps", {}).items():
            if not isinstance(comps, list):
                raise ManifestError(f"map {name!r}: expected a list of expressions")
            try:
                m.maps[name] = ChartMap(chart, chart, [_expr(c, f"map {name!r}") for c in comps])
            except (ValueError, ExpressionClassError) as exc:
                raise ManifestError(f"map {name!r}: {exc}") from exc
        for name, c in data.get("curves", {}).items():
            param = c.get("param", "t")
            try:
                m.curves[name] = CurveSpec(chart, [_expr(x, f"curve {name!r}") for x in c["components"]],
                                           param, tuple(c.get("interval", (0.0, 1.0))))
            except (ValueError, KeyError) as exc:
                raise ManifestError(f"curve {name!r}: {exc}") from exc
        for name, p in data.get("pairs", {}).items():
            try:
                cp = ContactPair(chart, m.form(p["alpha"]), m.form(p["eta"]), int(p["h"]), int(p["k"]),
                                 name=name)
            except KeyError as exc:
                raise ManifestError(f"pair {name!r}: missing {exc}") from exc
            except ValueError as exc:
                raise ManifestError(f"pair {name!r}: {exc}") from exc
            m.pairs[name] = cp
            frames = {}
            for which, vecs in p.get("frames", {}).items():
                if which not in ("alpha", "eta"):
                    raise ManifestError(f"pair {name!r}: frame key must be 'alpha' or 'eta'")
                frames[which] = [_vector(v, chart, f"pair {name!r} frame") for v in vecs]
            m.frames[name] = frames
    elif any(k in data for k in ("forms", "maps", "curves", "pairs")):
        raise ManifestError("forms, maps, curves and pairs need a 'chart'")
    if m.chart is None and m.algebra_pair is None:
        raise ManifestError("manifest needs a 'chart' or an 'algebra'")
    for n, chk in enumerate(data.get("checks", [])):
        if isinstance(chk, str):
            chk = {"check": chk}
        kind = chk.get("check")
        if kind not in CHECKS:
            raise ManifestError(f"check {n}: unknown kind {kind!r}; supported: {list(CHECKS)}")
        m.checks.append(dict(chk))
    return m


def _load_algebra(data) -> InvariantPair:
    alg = data["algebra"]
    try:
        g = LieAlgebra.from_manifest(alg, name=str(alg.get("name", "algebra")))
    except (KeyError, ValueError, TypeError) as exc:
        raise ManifestError(f"algebra: {exc}") from exc
    if not check_jacobi(g):
        raise ManifestError("algebra: structure constants violate the Jacobi identity")
    p = data.get("pair")
    if p is None:
        raise ManifestError("algebra manifests need a 'pair' block")

    def covector(spec, label):
        if isinstance(spec, int):
            spec = {str(spec): 1}
        try:
            terms = {(int(i) - 1,): c for i, c in spec.items()}
            return InvariantForm(g.dim, 1, terms)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ManifestError(f"pair {label}: {exc}") from exc

    h, k = int(p["h"]), int(p["k"])
    if 2 * h + 2 * k + 2 != g.dim or h + k < 1:
        raise ManifestError(f"pair type ({h}, {k}) does not fit dimension {g.dim}")
    return InvariantPair(g, covector(p["alpha"], "alpha"), covector(p["eta"], "eta"), h, k)


__all__ = ["Manifest", "ManifestError", "load", "parse_form", "parse_chart", "form_to_json", "CHECKS",
           "JacobiError"]
