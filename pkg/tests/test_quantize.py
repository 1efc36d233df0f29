"""Tests for Weyl quantization on truncated Hermite bases."""

from math import factorial

import numpy as np
import pytest
from scipy.linalg import expm

from moyalkit.core import ExteriorBasis, make_standard_space, number_operator
from moyalkit.quantize import (
    A_minus_block,
    A_plus_block,
    HermiteBasisSpec,
    KernelGapError,
    MehlerRangeError,
    OperatorMatrix,
    bargmann_basis,
    bargmann_fock_matrices,
    bargmann_gram,
    build_A_operator,
    kernel_analysis,
    ladder_matrices,
    oscillator_diagonal,
    position_matrices,
    quantize_gaussian,
    quantize_poly,
)
from moyalkit.symbols import GaussianSymbol, WeylPoly, mehler, moyal_poly, vacuum_symbol

RNG = np.random.default_rng(42)


def test_ladder_commutators():
    spec = HermiteBasisSpec(n=2, lam=1.0, N_max=10)
    mask = spec.interior_mask(1)
    sub = np.ix_(mask, mask)
    for a, adag in ladder_matrices(spec):
        comm = (a @ adag - adag @ a).data
        assert np.allclose(comm[sub], np.eye(spec.dim)[sub])


@pytest.mark.parametrize("lam", [0.5, 1.0, -1.0])
def test_position_momentum_commutator(lam):
    spec = HermiteBasisSpec(n=1, lam=lam, N_max=12)
    mask = spec.interior_mask(1)
    sub = np.ix_(mask, mask)
    (x, p), = position_matrices(spec)
    comm = (x.data @ p.data - p.data @ x.data)[sub]
    assert np.allclose(comm, 1j * lam * np.eye(spec.dim)[sub])


def test_oscillator_spectrum():
    spec = HermiteBasisSpec(n=2, lam=1.0, N_max=10)
    Q = sum(
        (x.data @ x.data + p.data @ p.data for x, p in position_matrices(spec)),
        np.zeros((spec.dim, spec.dim), dtype=complex),
    )
    mask = spec.interior_mask(1)
    assert np.allclose(np.diag(Q).real[mask], oscillator_diagonal(spec)[mask])
    # off-diagonal vanishes on the interior
    sub = np.ix_(mask, mask)
    assert np.max(np.abs(Q[sub] - np.diag(np.diag(Q))[sub])) < 1e-12


def test_weyl_ordering_symmetrizes():
    # pi(x xi) = (X P + P X)/2
    spec = HermiteBasisSpec(n=1, lam=1.0, N_max=12)
    f = WeylPoly(n=1, terms={(1, 1): 1.0})
    (x, p), = position_matrices(spec)
    want = (x.data @ p.data + p.data @ x.data) / 2
    assert np.allclose(quantize_poly(f, spec).data, want)


def test_homomorphism_interior():
    spec = HermiteBasisSpec(n=2, lam=1.0, N_max=12)
    mask = spec.interior_mask(6)
    sub = np.ix_(mask, mask)
    for _ in range(10):
        fa = {}
        for _ in range(3):
            e = tuple(int(v) for v in RNG.integers(0, 2, size=4))
            fa[e] = complex(RNG.normal(), RNG.normal())
        f = WeylPoly(n=2, terms=fa)
        g = WeylPoly(n=2, terms={(1, 0, 1, 0): 1.0, (0, 1, 0, 1): 0.5j})
        lhs = quantize_poly(moyal_poly(f, g, 1.0), spec).data
        rhs = quantize_poly(f, spec).data @ quantize_poly(g, spec).data
        assert np.max(np.abs((lhs - rhs)[sub])) < 1e-10


def test_degree_guard():
    spec = HermiteBasisSpec(n=1, lam=1.0, N_max=8)
    f = WeylPoly(n=1, terms={(7, 0): 1.0})
    with pytest.raises(ValueError):
        quantize_poly(f, spec)


def test_vacuum_quantizes_to_ground_projection():
    spec = HermiteBasisSpec(n=2, lam=0.5, N_max=8)
    P = quantize_gaussian(vacuum_symbol(0.5, 2), spec).data
    assert np.trace(P).real == pytest.approx(1.0)
    assert np.linalg.matrix_rank(P) == 1
    want = np.zeros_like(P)
    want[0, 0] = 1.0
    assert np.allclose(P, want)


def test_mehler_heat_semigroup_oracle():
    # pi(K_lam(tau)) must match expm(-tau Q_hat) built from the truncated
    # ladder matrices -- an independent route to the same operator
    spec = HermiteBasisSpec(n=1, lam=1.0, N_max=24)
    tau = 0.8
    K = quantize_gaussian(mehler(tau, 1.0, 1), spec).data
    (x, p), = position_matrices(spec)
    Q = x.data @ x.data + p.data @ p.data
    ref = expm(-tau * Q)
    mask = spec.interior_mask(4)
    sub = np.ix_(mask, mask)
    assert np.max(np.abs((K - ref)[sub])) < 1e-10


def test_gaussian_out_of_range():
    spec = HermiteBasisSpec(n=1, lam=1.0, N_max=8)
    with pytest.raises(MehlerRangeError):
        quantize_gaussian(GaussianSymbol(1.0, 2.0, 1), spec)


def test_operator_matrix_roundtrip():
    spec = HermiteBasisSpec(n=1, lam=1.0, N_max=4)
    m = OperatorMatrix(RNG.normal(size=(4, 4)) + 1j * RNG.normal(size=(4, 4)), spec)
    back = OperatorMatrix.from_json(m.to_json())
    assert np.allclose(back.data, m.data)
    assert back.spec == m.spec


@pytest.mark.parametrize("n", [1, 2])
def test_A_operator_structure(n):
    spec = HermiteBasisSpec(n=n, lam=1.0, N_max=10)
    space = make_standard_space(n)
    basis = ExteriorBasis(n)
    A = build_A_operator(space, basis, spec)
    assert np.allclose(A.data, A.data.conj().T)
    gamma = np.kron(basis.grading_matrix(), np.eye(spec.dim))
    assert np.allclose(gamma @ A.data + A.data @ gamma, 0)
    # A^2 = Q (x) 1 + lam 1 (x) N on the interior
    ideal = np.kron(np.eye(basis.dim), np.diag(oscillator_diagonal(spec))).astype(
        complex
    ) + np.kron(number_operator(basis), np.eye(spec.dim))
    fm = A.full_mask(2)
    sub = np.ix_(fm, fm)
    assert np.max(np.abs((A.data @ A.data - ideal)[sub])) < 1e-12


def test_index_kernel_and_cokernel():
    n = 2
    spec = HermiteBasisSpec(n=n, lam=1.0, N_max=10)
    A = build_A_operator(make_standard_space(n), ExteriorBasis(n), spec)
    basis = ExteriorBasis(n)
    dim_ker, kb = kernel_analysis(A_plus_block(A, basis, margin=2), 1e-6)
    assert dim_ker == 1
    assert abs(kb[0, 0]) > 1 - 1e-8  # ground (x) Lambda^0
    dim_coker, _ = kernel_analysis(A_minus_block(A, basis, margin=2), 1e-6)
    assert dim_coker == 0


def test_kernel_analysis_known_and_gapless():
    mat = np.diag([3.0, 2.0, 1e-9, 1e-10])
    dim, kb = kernel_analysis(mat, 1e-6)
    assert dim == 2
    assert kb.shape == (4, 2)
    with pytest.raises(KernelGapError):
        # smallest kept (5e-6) vs largest discarded (1e-7): ratio only 50
        kernel_analysis(np.diag([5e-6, 1e-7]), 1e-6)


def test_bargmann_gram_quadrature_oracle():
    # <z^a, z^b> = delta_ab a! for the Gaussian inner product; verified by
    # polar-coordinate quadrature of (1/pi) int z^a conj(z)^b e^{-|z|^2}
    rs = np.linspace(0, 8, 4001)
    thetas = np.linspace(0, 2 * np.pi, 257)[:-1]
    for a in range(4):
        for b in range(4):
            vals = np.zeros(len(rs), dtype=complex)
            ang = np.mean(np.exp(1j * (a - b) * thetas))
            vals = rs ** (a + b) * np.exp(-(rs**2)) * rs * ang
            integral = 2 * np.trapezoid(vals, rs)
            want = factorial(a) if a == b else 0.0
            assert integral.real == pytest.approx(want, abs=1e-6)
    gram = bargmann_gram(1, 3)
    assert np.allclose(np.diag(gram), [factorial(a) for a in range(4)])


def test_bargmann_ladder_structure():
    n, deg = 2, 5
    zs, dzs = bargmann_fock_matrices(n, deg)
    basis = bargmann_basis(n, deg)
    degs = np.array([sum(a) for a in basis])
    low = degs < deg
    sub = np.ix_(low, low)
    for z, dz in zip(zs, dzs):
        assert np.allclose(z.conj().T, dz)
        comm = dz @ z - z @ dz
        assert np.allclose(comm[sub], np.eye(len(basis))[sub])
    # number operator spectrum = polynomial degree
    num = sum(z @ dz for z, dz in zip(zs, dzs))
    assert np.allclose(np.diag(num).real, degs)
