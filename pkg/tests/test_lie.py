import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp

import forms_oracle as oracle
from contactpairs.forms import exterior_derivative
from contactpairs.lie import (
    InvariantForm,
    JacobiError,
    LieAlgebra,
    catalog,
    ce_differential,
    check_jacobi,
    invariant_cp_check,
    invariant_distribution,
    invariant_involutive,
    invariant_reeb_fields,
    invariant_reeb_properties,
    is_nilpotent,
    lookup,
    n4_1_coordinates,
    nullspace,
    rank,
    transport,
)
from contactpairs.pair import ContactPair, verify

from generators import random_lie_algebra

N4_1 = LieAlgebra.from_brackets(4, {(1, 4): 3, (1, 3): 2})


def w(n, i):
    return InvariantForm.basis(n, i - 1)


# ----------------------------------------------------------------------------
# independent oracles: adjoint matrices and the dual CE formula


def adjoint_jacobi(g: LieAlgebra) -> bool:
    """Jacobi holds iff ad is a homomorphism: ad[x,y] = [ad x, ad y] on basis pairs."""
    n = g.dim
    ad = [sp.Matrix(n, n, lambda r, c: g.bracket_basis(i, c)[r]) for i in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        v = g.bracket_basis(i, j)
        lhs = sum((v[k] * ad[k] for k in range(n)), sp.zeros(n, n))
        if lhs != ad[i] * ad[j] - ad[j] * ad[i]:
            return False
    return True


def evaluate_invariant(form: InvariantForm, vectors) -> Fraction:
    """Determinant formula for a constant-coefficient form on vectors."""
    total = Fraction(0)
    for idx, c in form.terms.items():
        M = sp.Matrix([[v[i] for v in vectors] for i in idx])
        total += c * Fraction(str(M.det()))
    return total


def ce_oracle_on_basis(g: LieAlgebra, a: InvariantForm, vecs) -> Fraction:
    """``dw(X_0..X_k) = sum_{i<j} (-1)^{i+j} w([X_i, X_j], X_0, ^i, ^j, ..)`` for invariant w."""
    total = Fraction(0)
    for i, j in itertools.combinations(range(len(vecs)), 2):
        rest = [v for t, v in enumerate(vecs) if t not in (i, j)]
        total += (-1) ** (i + j) * evaluate_invariant(a, [g.bracket(vecs[i], vecs[j])] + rest)
    return total


# ----------------------------------------------------------------------------
# Jacobi


def test_jacobi_examples():
    assert check_jacobi(N4_1)
    assert check_jacobi(LieAlgebra(5))
    fabricated = LieAlgebra.from_brackets(3, {(1, 2): 3, (1, 3): 2, (2, 3): 1})
    assert check_jacobi(fabricated) == adjoint_jacobi(fabricated)


def test_jacobi_agrees_with_adjoint_oracle_on_random_constants():
    rng = random.Random(61)
    seen = set()
    for _ in range(120):
        n = rng.randint(3, 5)
        consts = {}
        for i, j in itertools.combinations(range(n), 2):
            if rng.random() < 0.35:
                consts[(i, j)] = {rng.randrange(n): rng.choice((-1, 1, 2))}
        g = LieAlgebra(n, consts)
        got = check_jacobi(g)
        assert got == adjoint_jacobi(g)
        seen.add(got)
    assert seen == {True, False}


def test_ce_rejects_jacobi_violation():
    bad = LieAlgebra.from_brackets(3, {(1, 2): 3, (2, 3): 3, (1, 3): 1})
    if not check_jacobi(bad):
        with pytest.raises(JacobiError):
            ce_differential(bad, w(3, 1))


# ----------------------------------------------------------------------------
# CE differential


def test_ce_examples():
    assert ce_differential(N4_1, w(4, 2)) == -w(4, 1).wedge(w(4, 3))
    assert ce_differential(N4_1, w(4, 4)).is_zero()
    ab = LieAlgebra(3)
    assert all(ce_differential(ab, w(3, i)).is_zero() for i in (1, 2, 3))


def test_ce_matches_dual_formula():
    rng = random.Random(67)
    for _ in range(30):
        g = random_lie_algebra(rng)
        n = g.dim
        deg = rng.randint(1, min(3, n - 1))
        idx = tuple(sorted(rng.sample(range(n), deg)))
        a = InvariantForm(n, deg, {idx: rng.randint(1, 3)})
        da = ce_differential(g, a)
        for J in itertools.combinations(range(n), deg + 1):
            vecs = [g.basis_vector(j) for j in J]
            assert da.coefficient(J) == ce_oracle_on_basis(g, a, vecs)


def test_ce_squares_to_zero():
    rng = random.Random(71)
    algebras = [e.algebra for e in catalog()] + [random_lie_algebra(rng) for _ in range(20)]
    for g in algebras:
        for deg in range(0, g.dim):
            for idx in itertools.combinations(range(g.dim), deg):
                a = InvariantForm(g.dim, deg, {idx: 1})
                assert ce_differential(g, ce_differential(g, a)).is_zero()


# ----------------------------------------------------------------------------
# nilpotency


def test_nilpotency_examples():
    assert is_nilpotent(lookup("n6_13").algebra)[0]
    assert is_nilpotent(LieAlgebra(3)) == (True, 1)
    assert is_nilpotent(LieAlgebra.from_brackets(2, {(1, 2): 2})) == (False, 2)
    assert is_nilpotent(N4_1) == (True, 3)


def test_nilpotency_invariant_under_basis_change():
    rng = random.Random(73)
    for _ in range(20):
        g = random_lie_algebra(rng)
        # Killing form of a nilpotent algebra vanishes identically
        n = g.dim
        ad = [sp.Matrix(n, n, lambda r, c: g.bracket_basis(i, c)[r]) for i in range(n)]
        nilp = is_nilpotent(g)[0]
        power = sp.zeros(n, n)
        if nilp:
            for A in ad:
                assert A ** n == power


# ----------------------------------------------------------------------------
# invariant pairs


@pytest.mark.parametrize("name, alpha, eta, h, k, volume", [
    ("n4_1", 2, 4, 1, 0, "1"),
    ("n6_12", 4, 6, 2, 0, "-2"),
    ("n6_13", 2, 3, 1, 1, "1"),
])
def test_catalog_pairs(name, alpha, eta, h, k, volume):
    e = lookup(name)
    assert (e.alpha_index, e.eta_index, e.h, e.k) == (alpha, eta, h, k)
    rep = invariant_cp_check(e.algebra, w(e.algebra.dim, alpha), w(e.algebra.dim, eta), h, k)
    assert rep.passed
    assert rep.extra["volume_constant"] == volume
    assert check_jacobi(e.algebra) and is_nilpotent(e.algebra)[0]


def test_volume_constants_match_dense_oracle():
    for e in catalog():
        g, n = e.algebra, e.algebra.dim

        def d_dense(i):
            return {(a, b): -c[i] for (a, b), c in g.constants.items() if i in c}

        def basis(i):
            return {(i,): 1}

        def power(f, m):
            out = {(): 1}
            for _ in range(m):
                out = oracle.wedge(out, f)
            return out

        da, de = d_dense(e.alpha_index - 1), d_dense(e.eta_index - 1)
        top = oracle.wedge(oracle.wedge(oracle.wedge(basis(e.alpha_index - 1), power(da, e.h)),
                                        basis(e.eta_index - 1)), power(de, e.k))
        assert str(top.get(tuple(range(n)), 0)) == invariant_cp_check(
            g, w(n, e.alpha_index), w(n, e.eta_index), e.h, e.k).extra["volume_constant"]


def test_closed_alpha_fails_volume():
    rep = invariant_cp_check(N4_1, w(4, 1), w(4, 4), 1, 0)
    assert not rep.passed
    assert rep.condition("volume").witness == "identically zero"


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        invariant_cp_check(N4_1, w(4, 2), w(4, 4), 1, 1)


def test_lookup():
    e = lookup("n4_1")
    assert e.algebra.constants == {(0, 3): {2: 1}, (0, 2): {1: 1}}
    e = lookup("n6_13")
    assert e.algebra.constants == {(0, 5): {4: 1}, (0, 4): {3: 1}, (0, 3): {2: 1}, (4, 5): {1: 1}}
    assert (e.alpha_index, e.eta_index) == (2, 3)
    with pytest.raises(KeyError):
        lookup("n8_1")


def test_invariant_reeb_properties_and_distributions():
    for e in catalog():
        cp = e.pair()
        assert invariant_reeb_properties(cp).passed
        Xa, Xe = invariant_reeb_fields(cp)
        assert cp.alpha(Xa) == 1 and cp.eta(Xe) == 1
        assert len(invariant_distribution(cp, "alpha")) == 2 * e.k + 1
        assert len(invariant_distribution(cp, "eta")) == 2 * e.h + 1
        assert invariant_involutive(cp, "alpha") and invariant_involutive(cp, "eta")


def test_n4_1_chart_realization_agrees():
    chart, coframe, frame = n4_1_coordinates()
    g = N4_1
    for i in range(4):
        assert exterior_derivative(coframe[i]) == transport(ce_differential(g, w(4, i + 1)), coframe)
    cp = ContactPair(chart, coframe[1], coframe[3], 1, 0)
    chart_report = verify(cp)
    inv_report = invariant_cp_check(g, w(4, 2), w(4, 4), 1, 0)
    assert chart_report.passed == inv_report.passed is True
    # also the failing pair agrees
    bad = ContactPair(chart, coframe[0], coframe[3], 1, 0)
    assert verify(bad).passed == invariant_cp_check(g, w(4, 1), w(4, 4), 1, 0).passed is False


def test_manifest_round_trip():
    for e in catalog():
        g = e.algebra
        assert LieAlgebra.from_manifest(g.to_manifest()).constants == g.constants


def test_rational_linear_algebra():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    assert rank(rows) == 1
    ns = nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert sum(a * b for a, b in zip(rows[0], v)) == 0
