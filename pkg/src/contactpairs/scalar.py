"""Exact trigonometric-polynomial expressions over a coordinate chart.

Every :class:`ScalarExpr` is kept in canonical form: a finite sum of
monomials ``c * pi^p * x1^e1 * ... * trig(L)`` with ``c`` rational and at
most one ``sin``/``cos`` factor whose argument ``L`` is a rational linear
combination of coordinates plus a rational multiple of pi.  Products of
trigonometric factors are rewritten with the product-to-sum identities and
arguments are sign- and phase-normalized.  Constant phases that are
rational multiples of pi are reduced to a basis of the smallest cyclotomic
field containing their sum, so an identically zero expression collapses to
the empty sum.

The parser in :mod:`contactpairs.parse` builds a raw expression tree which
:func:`normalize` turns into this canonical form.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

Rational = Fraction

# A linear argument: sorted ((name, coeff), ...) with non-zero coefficients.
Linear = tuple
# ('cos' | 'sin', linear part, pi offset)
TrigKey = tuple
# (pi power, sorted ((name, exponent), ...), TrigKey or None)
MonoKey = tuple

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)
_SIXTH = Fraction(1, 6)

# cos/sin(x + q*pi/2) rewritten as (+/-) cos/sin(x)
_ROTATE = {
    "cos": [("cos", 1), ("sin", -1), ("cos", -1), ("sin", 1)],
    "sin": [("sin", 1), ("cos", 1), ("sin", -1), ("cos", -1)],
}


class ExpressionClassError(ValueError):
    """An operation would leave the trigonometric-polynomial class."""


class IncompleteNormalFormWarning(UserWarning):
    """Sampling suggests a non-zero normal form is actually identically zero."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, ScalarExpr):
        q = value.rational_value()
        if q is None:
            raise ExpressionClassError(f"{value} is not a rational constant")
        return q
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


# ----------------------------------------------------------------------------
# canonical trigonometric factors


def _lin_combine(a: Linear, b: Linear, sb: int = 1) -> Linear:
    acc = dict(a)
    for name, c in b:
        acc[name] = acc.get(name, _ZERO) + sb * c
    return tuple(sorted((n, c) for n, c in acc.items() if c != 0))


def _canon_trig(kind: str, lin: Linear, off: Fraction) -> list:
    """Canonical ``[(factor, trig_or_None)]`` for ``kind(lin + off*pi)``.

    An empty list means the value is zero.
    """
    sign = 1
    if lin and lin[0][1] < 0:
        lin = tuple((n, -c) for n, c in lin)
        off = -off
        if kind == "sin":
            sign = -sign
    off = off % 2
    q = math.floor(off * 2)
    r = off - Fraction(q, 2)
    kind, s = _ROTATE[kind][q]
    sign *= s
    if lin:
        return [(Fraction(sign), (kind, lin, r))]
    # constant argument r*pi with 0 <= r < 1/2; store as sin(s*pi), 0 < s <= 1/2
    if kind == "cos":
        kind, r = "sin", _HALF - r
    if r == 0:
        return []
    if r == _HALF:
        return [(Fraction(sign), None)]
    if r == _SIXTH:
        return [(Fraction(sign, 2), None)]
    return [(Fraction(sign), ("sin", (), r))]


# ----------------------------------------------------------------------------
# phase reduction
#
# For a fixed linear part L, sum_j c_j sin(L + r_j pi) = Im(e^{iL} z) with
# z = sum_j c_j e^{i r_j pi} in the cyclotomic field Q(zeta_M), and the sum
# vanishes identically iff z = 0.  Writing z in the power basis of the
# smallest cyclotomic field containing it gives a unique representation, so
# offsets that are not multiples of pi/2 still normalize completely.


@functools.lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(_cyclotomic(d)))
    return tuple(num)


def _poly_div_exact(num: list, den: list) -> list:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // den[-1]
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    return out


def _reduce_mod(coeffs: dict, M: int) -> list:
    """Power-basis coordinates of ``sum_e coeffs[e] zeta_M^e`` modulo Phi_M."""
    phi = _cyclotomic(M)
    deg = len(phi) - 1
    poly = [_ZERO] * max(M, deg)
    for e, c in coeffs.items():
        poly[e % M] += c
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            for j, p in enumerate(phi):
                poly[i - deg + j] -= c * p
    return poly[:deg]


def _solve_rational(columns: list, target: list):
    """Exact solution ``a`` of ``sum_j a_j columns[j] = target`` or None."""
    n = len(columns)
    rows = [[col[r] for col in columns] + [target[r]] for r in range(len(target))]
    piv_cols, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    a = [_ZERO] * n
    for i, c in enumerate(piv_cols):
        a[c] = rows[i][-1]
    return a


def _phase_coordinates(z: dict, M: int):
    """``(d, coords)``: z in the power basis of the smallest Q(zeta_d) containing it."""
    full = _reduce_mod(z, M)
    if not any(full):
        return None
    for d in range(1, M + 1):
        if M % d or d % 4 == 2:
            continue
        step = M // d
        deg = len(_cyclotomic(d)) - 1
        cols = [_reduce_mod({j * step: _ONE}, M) for j in range(deg)]
        a = _solve_rational(cols, full)
        if a is not None:
            return d, a
    raise AssertionError("element not found in its own cyclotomic field")


def _exponent(kind: str, r: Fraction, M: int) -> int:
    # sin(L + r pi) <-> zeta_M^(r M / 2); cos adds a quarter turn
    e = r * M / 2
    if kind == "cos":
        e += Fraction(M, 4)
    assert e.denominator == 1
    return int(e)


def _reduce_phases(terms: dict) -> dict:
    groups: dict = {}
    for key, c in terms.items():
        p, pw, t = key
        if t is None:
            groups.setdefault((p, pw, None), []).append((key, c))
        else:
            groups.setdefault((p, pw, t[1]), []).append((key, c))
    out: dict = {}
    for (p, pw, lin), items in groups.items():
        trig = [(k[2], c) for k, c in items if k[2] is not None]
        needs = any(t[2] != 0 for t, _ in trig) if lin else bool(trig)
        if lin is None:
            # rational terms join the constant-trig group of the same monomial when there is one
            if (p, pw, ()) not in groups:
                for k, c in items:
                    out[k] = out.get(k, _ZERO) + c
            continue
        if not needs:
            for k, c in items:
                out[k] = out.get(k, _ZERO) + c
            continue
        if lin == ():
            # constants: rational part plus sin(r pi) values; encode i * value
            rational = sum((c for k, c in groups.get((p, pw, None), [])), _ZERO)
            M = 4
            for t, _ in trig:
                M = math.lcm(M, 2 * t[2].denominator)
            # encode i*w = (u - conj u)/2 where Im u = w
            z: dict = {}
            half: dict = {}
            if rational:
                half[M // 4] = half.get(M // 4, _ZERO) + rational
            for t, c in trig:
                e = _exponent(t[0], t[2], M)
                half[e % M] = half.get(e % M, _ZERO) + c
            for e, c in half.items():
                z[e] = z.get(e, _ZERO) + c / 2
                z[(-e) % M] = z.get((-e) % M, _ZERO) - c / 2
        else:
            M = 4
            for t, _ in trig:
                M = math.lcm(M, 2 * t[2].denominator)
            z = {}
            for t, c in trig:
                e = _exponent(t[0], t[2], M)
                z[e] = z.get(e, _ZERO) + c
        res = _phase_coordinates(z, M)
        if res is None:
            continue
        d, coords = res
        for j, a in enumerate(coords):
            if not a:
                continue
            for f, t in _canon_trig("sin", lin, Fraction(2 * j, d)):
                k = (p, pw, t)
                out[k] = out.get(k, _ZERO) + a * f
    return {k: v for k, v in out.items() if v != 0}


def _trig_product(t1: TrigKey, t2: TrigKey) -> list:
    k1, l1, o1 = t1
    k2, l2, o2 = t2
    lp, op = _lin_combine(l1, l2, 1), o1 + o2
    lm, om = _lin_combine(l1, l2, -1), o1 - o2
    if k1 == "cos" and k2 == "cos":
        parts = [(_HALF, "cos", lm, om), (_HALF, "cos", lp, op)]
    elif k1 == "sin" and k2 == "sin":
        parts = [(_HALF, "cos", lm, om), (-_HALF, "cos", lp, op)]
    elif k1 == "sin":
        parts = [(_HALF, "sin", lp, op), (_HALF, "sin", lm, om)]
    else:
        parts = [(_HALF, "sin", lp, op), (-_HALF, "sin", lm, om)]
    out = []
    for c, kind, lin, off in parts:
        for f, t in _canon_trig(kind, lin, off):
            out.append((c * f, t))
    return out


def _merge_powers(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for name, e in b:
        acc[name] = acc.get(name, 0) + e
    return tuple(sorted(acc.items()))


def _mul_keys(k1: MonoKey, k2: MonoKey) -> list:
    p = k1[0] + k2[0]
    pw = _merge_powers(k1[1], k2[1])
    t1, t2 = k1[2], k2[2]
    if t1 is None:
        return [(_ONE, (p, pw, t2))]
    if t2 is None:
        return [(_ONE, (p, pw, t1))]
    return [(c, (p, pw, t)) for c, t in _trig_product(t1, t2)]


def _sort_key(key: MonoKey):
    p, pw, t = key
    if t is None:
        t = ("", (), _ZERO)
    return (sum(e for _, e in pw), p, pw, t)


# ----------------------------------------------------------------------------


class ScalarExpr:
    """Immutable canonical trigonometric polynomial.

    Supports ``+ - *``, integer powers, division by rational constants,
    differentiation, substitution and vectorized evaluation.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[MonoKey, Fraction] | None = None):
        clean = {k: v for k, v in (terms or {}).items() if v != 0}
        if any(t is not None and (t[2] or not t[1]) for _, _, t in clean):
            clean = _reduce_phases(clean)
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def const(cls, value) -> "ScalarExpr":
        return cls({(0, (), None): as_rational(value)})

    @classmethod
    def pi(cls) -> "ScalarExpr":
        return cls({(1, (), None): _ONE})

    @classmethod
    def symbol(cls, name: str) -> "ScalarExpr":
        return cls({(0, ((name, 1),), None): _ONE})

    @classmethod
    def _trig(cls, kind: str, arg) -> "ScalarExpr":
        arg = to_expr(arg)
        lin = arg.as_linear()
        if lin is None:
            raise ExpressionClassError(
                f"{kind}({arg}) needs a linear argument in the coordinates plus a rational multiple of pi"
            )
        coeffs, off = lin
        return cls({(0, (), t): f for f, t in _canon_trig(kind, coeffs, off)})

    @classmethod
    def sin(cls, arg) -> "ScalarExpr":
        return cls._trig("sin", arg)

    @classmethod
    def cos(cls, arg) -> "ScalarExpr":
        return cls._trig("cos", arg)

    # -- structure ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[MonoKey, Fraction]:
        return self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def free_symbols(self) -> frozenset:
        names = set()
        for _, pw, t in self._terms:
            names.update(n for n, _ in pw)
            if t is not None:
                names.update(n for n, _ in t[1])
        return frozenset(names)

    def is_constant(self) -> bool:
        return not self.free_symbols()

    def rational_value(self) -> Fraction | None:
        """The value as a Fraction if this is a pi-free rational constant."""
        if not self._terms:
            return _ZERO
        if len(self._terms) == 1:
            (key, c), = self._terms.items()
            if key == (0, (), None):
                return c
        return None

    def as_linear(self) -> tuple | None:
        """``(coeffs, pi_offset)`` if this is linear in coordinates plus a pi multiple."""
        coeffs = []
        off = _ZERO
        for (p, pw, t), c in self._terms.items():
            if t is not None:
                return None
            if p == 1 and not pw:
                off += c
            elif p == 0 and len(pw) == 1 and pw[0][1] == 1:
                coeffs.append((pw[0][0], c))
            else:
                return None
        return tuple(sorted(coeffs)), off

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, _ZERO) + v
        return ScalarExpr(acc)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return ScalarExpr()
        acc: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                c = c1 * c2
                for f, k in _mul_keys(k1, k2):
                    acc[k] = acc.get(k, _ZERO) + c * f
        return ScalarExpr(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = as_rational(other)
        if q == 0:
            raise ZeroDivisionError("division of an expression by zero")
        return ScalarExpr({k: v / q for k, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ExpressionClassError("only non-negative integer powers stay in class")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, str)):
            other = _coerce(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus -------------------------------------------------------------

    def diff(self, name: str) -> "ScalarExpr":
        acc: dict = {}
        for (p, pw, t), c in self._terms.items():
            powers = dict(pw)
            e = powers.get(name, 0)
            if e:
                rest = dict(powers)
                if e == 1:
                    del rest[name]
                else:
                    rest[name] = e - 1
                key = (p, tuple(sorted(rest.items())), t)
                acc[key] = acc.get(key, _ZERO) + c * e
            if t is not None:
                a = dict(t[1]).get(name, _ZERO)
                if a:
                    kind, lin, off = t
                    if kind == "cos":
                        nk, f = ("sin", lin, off), -a
                    else:
                        nk, f = ("cos", lin, off), a
                    key = (p, pw, nk)
                    acc[key] = acc.get(key, _ZERO) + c * f
        return ScalarExpr(acc)

    def subs(self, mapping: Mapping[str, "ScalarExpr"]) -> "ScalarExpr":
        """Substitute expressions for coordinates; trig arguments must stay linear."""
        mapping = {k: to_expr(v) for k, v in mapping.items()}
        if not mapping or not (self.free_symbols() & mapping.keys()):
            return self
        power_cache: dict = {}

        def power(name, e):
            key = (name, e)
            if key not in power_cache:
                base = mapping.get(name)
                base = ScalarExpr.symbol(name) if base is None else base
                power_cache[key] = base ** e
            return power_cache[key]

        result = ScalarExpr()
        for (p, pw, t), c in self._terms.items():
            term = ScalarExpr({(p, (), None): c})
            for name, e in pw:
                term = term * power(name, e)
            if t is not None:
                kind, lin, off = t
                arg = ScalarExpr({(1, (), None): off}) if off else ScalarExpr()
                for name, a in lin:
                    sub = mapping.get(name)
                    arg = arg + a * (ScalarExpr.symbol(name) if sub is None else sub)
                term = term * ScalarExpr._trig(kind, arg)
            result = result + term
        return result

    def exact_div(self, other: "ScalarExpr") -> "ScalarExpr | None":
        """Exact quotient when ``other`` is a single trig-free monomial or
        ``self`` is a constant multiple of ``other``, else None."""
        other = to_expr(other)
        if not other:
            raise ZeroDivisionError("exact_div by zero")
        if len(other._terms) != 1:
            key, c0 = next(iter(other._terms.items()))
            ratio = self._terms.get(key, Fraction(0)) / c0
            if not (self - ScalarExpr.const(ratio) * other):
                return ScalarExpr.const(ratio)
            return None
        (p0, pw0, t0), c0 = next(iter(other._terms.items()))
        if t0 is not None:
            return None
        out = {}
        for (p, pw, t), c in self._terms.items():
            powers = dict(pw)
            if p < p0:
                return None
            for name, e in pw0:
                if powers.get(name, 0) < e:
                    return None
                powers[name] -= e
            key = (p - p0, tuple(sorted((n, e) for n, e in powers.items() if e)), t)
            out[key] = c / c0
        return ScalarExpr(out)

    # -- numerics -------------------------------------------------------------

    def evaluate(self, env: Mapping[str, float | np.ndarray]):
        """Value at a point; ``env`` values may be numpy arrays (broadcast)."""
        total = 0.0
        for (p, pw, t), c in self._terms.items():
            v = float(c) * math.pi ** p
            for name, e in pw:
                v = v * np.asarray(env[name], dtype=float) ** e
            if t is not None:
                kind, lin, off = t
                arg = float(off) * math.pi
                for name, a in lin:
                    arg = arg + float(a) * np.asarray(env[name], dtype=float)
                v = v * (np.cos(arg) if kind == "cos" else np.sin(arg))
            total = total + v
        if np.ndim(total) == 0:
            return float(total)
        return total

    # -- display --------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for key in sorted(self._terms, key=_sort_key):
            c = self._terms[key]
            body = _render_mono(key)
            mag = abs(c)
            if body:
                text = body if mag == 1 else f"{_render_rational(mag)}*{body}"
            else:
                text = _render_rational(mag)
            pieces.append(("-" if c < 0 else "+", text))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"ScalarExpr({str(self)!r})"


def _render_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _render_linear(lin: Linear, off: Fraction) -> str:
    parts = [(c, n) for n, c in lin]
    if off:
        parts.append((off, "pi"))
    out = ""
    for i, (c, name) in enumerate(parts):
        mag = abs(c)
        text = name if mag == 1 else f"{_render_rational(mag)}*{name}"
        if i == 0:
            out = ("-" if c < 0 else "") + text
        else:
            out += (" - " if c < 0 else " + ") + text
    return out or "0"


def _render_mono(key: MonoKey) -> str:
    p, pw, t = key
    factors = []
    if p:
        factors.append("pi" if p == 1 else f"pi^{p}")
    for name, e in pw:
        factors.append(name if e == 1 else f"{name}^{e}")
    if t is not None:
        kind, lin, off = t
        factors.append(f"{kind}({_render_linear(lin, off)})")
    return "*".join(factors)


ZERO = ScalarExpr()
ONE = ScalarExpr.const(1)


def _coerce(value):
    if isinstance(value, ScalarExpr):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return ScalarExpr.const(value)
    return NotImplemented


ExprLike = Union["ScalarExpr", int, Fraction, str]


def to_expr(value: ExprLike) -> ScalarExpr:
    """Coerce ints, Fractions, expression strings and trees to ScalarExpr."""
    if isinstance(value, ScalarExpr):
        return value
    if isinstance(value, str):
        from .parse import parse_expr

        return parse_expr(value).normalize()
    if hasattr(value, "normalize"):
        return value.normalize()
    out = _coerce(value)
    if out is NotImplemented:
        raise TypeError(f"cannot build an exact expression from {value!r}")
    return out


# ----------------------------------------------------------------------------
# module-level operations


def normalize(e) -> ScalarExpr:
    """Canonical form of an expression tree, string or ScalarExpr."""
    return to_expr(e)


def differentiate(e: ExprLike, x: str, chart: "Chart | None" = None) -> ScalarExpr:
    if chart is not None and x not in chart.names:
        raise KeyError(f"unknown coordinate {x!r} for chart {chart.names}")
    return to_expr(e).diff(x)


def evaluate(e: ExprLike, p) -> float:
    """Evaluate at a :class:`Point` or a name-to-value mapping."""
    env = p.env if isinstance(p, Point) else p
    if not isinstance(e, ScalarExpr) and hasattr(e, "evaluate"):
        return e.evaluate(env)
    return to_expr(e).evaluate(env)


def is_zero(e: ExprLike, *, crosscheck: bool = True, samples: int = 12,
            tol: float = 1e-9, seed: int = 42) -> bool:
    """Symbolic zero test; optionally cross-checked by seeded sampling.

    The normal form decides.  When it is non-zero but every sample is
    numerically zero, an :class:`IncompleteNormalFormWarning` is issued.
    """
    e = to_expr(e)
    if not e:
        return True
    if crosscheck:
        names = sorted(e.free_symbols())
        rng = np.random.default_rng(seed)
        env = {n: rng.uniform(-math.pi, math.pi, samples) for n in names}
        vals = np.broadcast_to(np.asarray(e.evaluate(env), dtype=float), (samples,))
        scale = sum(abs(float(c)) * math.pi ** p for (p, _, _), c in e.terms.items())
        if np.max(np.abs(vals)) < tol * max(scale, 1.0):
            warnings.warn(
                f"normal form {e} is non-zero but vanishes at {samples} sample points",
                IncompleteNormalFormWarning,
                stacklevel=2,
            )
    return False


@dataclass(frozen=True)
class TorusIntegral:
    """Exact integral ``coefficient * (2*pi)**power``."""

    coefficient: ScalarExpr
    power: int

    @property
    def value(self) -> float:
        return self.coefficient.evaluate({}) * (2 * math.pi) ** self.power

    def rational(self) -> Fraction:
        q = self.coefficient.rational_value()
        if q is None:
            raise ExpressionClassError(f"mean value {self.coefficient} is not rational")
        return q


def integrate_torus(e: ExprLike, chart: "Chart") -> TorusIntegral:
    """Exact integral over the full torus ``[0, 2pi)^dim``."""
    if not all(chart.periodic):
        raise ValueError("torus integration needs every chart coordinate periodic")
    e = to_expr(e)
    check_torus_function(e, chart)
    mean = ScalarExpr()
    for key, c in e.terms.items():
        p, pw, t = key
        if t is None or not t[1]:
            mean = mean + ScalarExpr({key: c})
    return TorusIntegral(mean, chart.dim)


def check_torus_function(e: ScalarExpr, chart: "Chart") -> None:
    """Reject expressions that are not well defined on the periodic coordinates."""
    periodic = {n for n, per in zip(chart.names, chart.periodic) if per}
    unknown = e.free_symbols() - set(chart.names)
    if unknown:
        raise ValueError(f"symbols {sorted(unknown)} are not chart coordinates")
    for (p, pw, t), c in e.terms.items():
        for name, _ in pw:
            if name in periodic:
                raise ExpressionClassError(
                    f"polynomial factor in periodic coordinate {name!r} is not a torus function"
                )
        if t is not None:
            for name, a in t[1]:
                if name in periodic and a.denominator != 1:
                    raise ExpressionClassError(
                        f"non-integer frequency {a} in periodic coordinate {name!r}"
                    )


def antiderivative(e: ExprLike, x: str) -> ScalarExpr:
    """Primitive in ``x`` of a sum of trig monomials with non-zero frequency in ``x``."""
    acc: dict = {}
    for (p, pw, t), c in to_expr(e).terms.items():
        if any(n == x for n, _ in pw):
            raise ExpressionClassError(f"polynomial in {x!r}: no trig primitive")
        a = dict(t[1]).get(x, _ZERO) if t is not None else _ZERO
        if not a:
            raise ExpressionClassError(f"term has zero frequency in {x!r}")
        kind, lin, off = t
        if kind == "cos":
            nk, f = ("sin", lin, off), 1 / a
        else:
            nk, f = ("cos", lin, off), -1 / a
        key = (p, pw, nk)
        acc[key] = acc.get(key, _ZERO) + c * f
    return ScalarExpr(acc)


def split_by(e: ExprLike, predicate) -> tuple:
    """Split into (terms where ``predicate(key)`` holds, the rest)."""
    yes, no = {}, {}
    for key, c in to_expr(e).terms.items():
        (yes if predicate(key) else no)[key] = c
    return ScalarExpr(yes), ScalarExpr(no)


def frequency(key: MonoKey, x: str) -> Fraction:
    t = key[2]
    return dict(t[1]).get(x, _ZERO) if t is not None else _ZERO


# ----------------------------------------------------------------------------
# charts and points

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names; periodic coordinates have period 2*pi."""

    names: tuple
    periodic: tuple = ()

    def __post_init__(self):
        names = tuple(self.names)
        periodic = tuple(bool(p) for p in self.periodic) or (False,) * len(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        if len(periodic) != len(names):
            raise ValueError("one periodicity flag per coordinate")
        for n in names:
            if not n.isidentifier() or n in ("pi", "sin", "cos"):
                raise ValueError(f"invalid coordinate name {n!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "periodic", periodic)

    @classmethod
    def torus(cls, *names: str) -> "Chart":
        return cls(names, (True,) * len(names))

    @classmethod
    def euclidean(cls, *names: str) -> "Chart":
        return cls(names, (False,) * len(names))

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown coordinate {name!r} for chart {self.names}") from None

    def coordinate(self, name: str) -> ScalarExpr:
        self.index(name)
        return ScalarExpr.symbol(name)

    def coordinates(self) -> list:
        return [ScalarExpr.symbol(n) for n in self.names]

    def point(self, values: Sequence[float]) -> "Point":
        return Point(self, values)

    def random_points(self, n: int, seed: int = 42, region=(-1.0, 1.0)) -> list:
        rng = np.random.default_rng(seed)
        lo = np.array([0.0 if per else region[0] for per in self.periodic])
        hi = np.array([TWO_PI if per else region[1] for per in self.periodic])
        vals = rng.uniform(lo, hi, size=(n, self.dim))
        return [Point(self, v) for v in vals]

    def grid_axis(self, name: str, resolution: int, region=(-1.0, 1.0)) -> np.ndarray:
        if self.periodic[self.index(name)]:
            return np.linspace(0.0, TWO_PI, resolution, endpoint=False)
        return np.linspace(region[0], region[1], resolution)


@dataclass(frozen=True)
class Point:
    chart: Chart
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != self.chart.dim:
            raise ValueError(f"point has {vals.shape[0]} coordinates, chart has {self.chart.dim}")
        for i, per in enumerate(self.chart.periodic):
            if per:
                vals[i] = vals[i] % TWO_PI
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def env(self) -> dict:
        return dict(zip(self.chart.names, self.values))

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)


def eval_on(e: ScalarExpr, env: Mapping, shape: tuple) -> np.ndarray:
    """Evaluate and broadcast to ``shape`` (constants included)."""
    return np.broadcast_to(np.asarray(e.evaluate(env), dtype=float), shape)


def parse_pi_multiple(text: str) -> Fraction:
    """``'pi/2'`` -> 1/2; the value must be a rational multiple of pi."""
    e = to_expr(text)
    if not e:
        return _ZERO
    if len(e.terms) == 1:
        (key, c), = e.terms.items()
        if key == (1, (), None):
            return c
    raise ExpressionClassError(f"{text!r} is not a rational multiple of pi")


def symbols(names: Iterable[str]) -> list:
    return [ScalarExpr.symbol(n) for n in names]
