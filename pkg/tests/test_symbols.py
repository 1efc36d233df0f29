"""Tests for the Gaussian and polynomial star products."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moyalkit.core import ExteriorBasis, make_standard_space, number_operator
from moyalkit.symbols import (
    GaussianSymbol,
    QuadratureError,
    WeylPoly,
    build_A_symbol,
    fourier_iso_check,
    mehler,
    moyal_gauss,
    moyal_poly,
    moyal_poly_matrix,
    scaling_iso,
    scaling_prefactor_defect,
    vacuum_symbol,
)

rationals = st.fractions(
    min_value=Fraction(0), max_value=Fraction(4), max_denominator=8
)
positive_rationals = st.fractions(
    min_value=Fraction(1, 8), max_value=Fraction(4), max_denominator=8
)


def test_known_composition():
    # (1, 1/2) #_2 (1, 1/4) = (2/3, 1/2) at lam = 2, n = 1
    f = GaussianSymbol(1, Fraction(1, 2), 1)
    g = GaussianSymbol(1, Fraction(1, 4), 1)
    out = moyal_gauss(f, g, 2)
    assert out.coef == Fraction(2, 3)
    assert out.alpha == Fraction(1, 2)


@given(rationals, rationals, rationals, rationals)
@settings(max_examples=60, deadline=None)
def test_gauss_associative_exact(alpha, beta, gamma, lam):
    f = GaussianSymbol(1, alpha, 1)
    g = GaussianSymbol(1, beta, 1)
    h = GaussianSymbol(1, gamma, 1)
    lhs = moyal_gauss(moyal_gauss(f, g, lam), h, lam)
    rhs = moyal_gauss(f, moyal_gauss(g, h, lam), lam)
    assert lhs == rhs


@given(rationals, rationals, rationals)
@settings(max_examples=30, deadline=None)
def test_gauss_commutative_isotropic(alpha, beta, lam):
    # isotropic Gaussians commute under the star product
    f = GaussianSymbol(1, alpha, 2)
    g = GaussianSymbol(1, beta, 2)
    assert moyal_gauss(f, g, lam) == moyal_gauss(g, f, lam)


def test_lam_zero_is_pointwise_product():
    f = GaussianSymbol(2.0, 0.3, 1)
    g = GaussianSymbol(0.5, 1.1, 1)
    out = moyal_gauss(f, g, 0.0)
    assert out.coef == pytest.approx(1.0)
    assert out.alpha == pytest.approx(1.4)


@pytest.mark.parametrize("lam", [Fraction(1, 2), 1, 2])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_vacuum_idempotent_exact(lam, n):
    s = vacuum_symbol(lam, n)
    assert s.coef == 2**n
    assert moyal_gauss(s, s, lam) == s


def test_vacuum_absorbs_gaussians():
    # s_lam # f # s_lam is a multiple of s_lam
    lam = Fraction(1)
    s = vacuum_symbol(lam, 1)
    f = GaussianSymbol(1, Fraction(1, 3), 1)
    out = moyal_gauss(moyal_gauss(s, f, lam), s, lam)
    assert out.alpha == s.alpha


def test_mehler_limits_and_semigroup():
    # lam -> 0 limit: K_0(tau) = exp(-tau |x|^2)
    k = mehler(1.7, 0.0, 2)
    assert complex(k.coef) == pytest.approx(1.0)
    assert float(k.alpha) == pytest.approx(1.7)
    for lam in (0.2, 1.0):
        a, b = mehler(0.9, lam, 2), mehler(1.4, lam, 2)
        ab = moyal_gauss(a, b, lam)
        c = mehler(2.3, lam, 2)
        assert complex(ab.coef) == pytest.approx(complex(c.coef), abs=1e-14)
        assert float(ab.alpha) == pytest.approx(float(c.alpha), abs=1e-14)


def test_mehler_saturates_at_vacuum():
    # tanh saturation: alpha -> 1/lam and coef/2^n * (stuff) -> vacuum shape
    k = mehler(40.0, 1.0, 1)
    assert float(k.alpha) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_serialization_roundtrip():
    s = GaussianSymbol(1.5, 0.25, 2)
    assert GaussianSymbol.from_json(s.to_json()) == s


# ---------------------------------------------------------------------------
# polynomial star product


def test_canonical_commutator():
    n, lam = 2, 0.7
    for j in (1, 2):
        for k in (1, 2):
            e = WeylPoly.coordinate(n, j, "e")
            f = WeylPoly.coordinate(n, k, "f")
            comm = moyal_poly(e, f, lam) - moyal_poly(f, e, lam)
            want = WeylPoly.constant(n, 1j * lam if j == k else 0.0)
            assert comm.max_abs_diff(want) == 0.0


def test_first_order_term():
    # e1 # f1 = e1 f1 + i lam / 2
    e = WeylPoly.coordinate(1, 1, "e")
    f = WeylPoly.coordinate(1, 1, "f")
    prod = moyal_poly(e, f, 0.5)
    assert prod.terms[(1, 1)] == pytest.approx(1.0)
    assert prod.terms[(0, 0)] == pytest.approx(0.25j)


small_polys = st.builds(
    lambda coeffs: WeylPoly(
        n=1,
        terms={
            (a, b): c
            for (a, b), c in zip([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)], coeffs)
        },
    ),
    st.lists(
        st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
        min_size=5,
        max_size=5,
    ),
)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=40, deadline=None)
def test_poly_star_associative(f, g, h):
    lam = 0.5  # dyadic, so the finite series is numerically exact
    lhs = moyal_poly(moyal_poly(f, g, lam), h, lam)
    rhs = moyal_poly(f, moyal_poly(g, h, lam), lam)
    scale = (
        1.0
        + max((abs(c) for p in (f, g, h) for c in p.terms.values()), default=0.0) ** 3
    )
    assert lhs.max_abs_diff(rhs) <= 1e-12 * scale


@given(small_polys, small_polys)
@settings(max_examples=30, deadline=None)
def test_poly_star_degree_bound(f, g):
    out = moyal_poly(f, g, 1.0)
    assert out.degree <= f.degree + g.degree


def test_poly_serialization_roundtrip():
    f = WeylPoly(n=2, terms={(1, 0, 2, 0): 1 + 2j, (0, 0, 0, 0): -0.5})
    assert WeylPoly.from_json(f.to_json()).max_abs_diff(f) == 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_clifford_symbol_square_exact(n):
    space = make_standard_space(n)
    basis = ExteriorBasis(n)
    A = build_A_symbol(space, basis)
    lam = 1.0
    sq = moyal_poly_matrix(A, A, lam)
    Q = None
    for j in range(1, n + 1):
        e = WeylPoly.coordinate(n, j, "e")
        f = WeylPoly.coordinate(n, j, "f")
        term = moyal_poly(e, e, lam) + moyal_poly(f, f, lam)
        Q = term if Q is None else Q + term
    want = Q.tensor(np.eye(basis.dim)) + WeylPoly.constant(n, lam).tensor(
        number_operator(basis)
    )
    assert sq.max_abs_diff(want) == 0.0


# ---------------------------------------------------------------------------
# scaling family and Fourier picture


@given(positive_rationals, positive_rationals, positive_rationals)
@settings(max_examples=30, deadline=None)
def test_scaling_multiplicative(alpha, beta, lam):
    f = GaussianSymbol(1, alpha, 1)
    g = GaussianSymbol(1, beta, 1)
    lhs = scaling_iso(moyal_gauss(f, g, 1), lam)
    rhs = moyal_gauss(scaling_iso(f, lam), scaling_iso(g, lam), lam)
    assert lhs == rhs


def test_prefactor_breaks_multiplicativity():
    f = GaussianSymbol(1, 1, 1)
    assert scaling_prefactor_defect(f, f, 2.0) > 1e-3


def test_fourier_isomorphism_quadrature():
    g = GaussianSymbol(1.0, 1.0, 1)
    h = GaussianSymbol(1.0, 0.5, 1)
    assert fourier_iso_check(g, h, 1.0) < 1e-6
    assert fourier_iso_check(g, h, 0.0) < 1e-8


def test_fourier_quadrature_convergence_guard():
    g = GaussianSymbol(1.0, 1.0, 1)
    with pytest.raises(QuadratureError):
        fourier_iso_check(g, g, 1.0, order=3, convergence_tol=1e-14)
