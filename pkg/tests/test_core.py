"""Tests for the symplectic/Hermitian structure and the Clifford action."""

import numpy as np
import pytest

from moyalkit.core import (
    ExteriorBasis,
    clifford_c,
    clifford_ct,
    eps_matrix,
    exterior_power_unitary,
    hermitian_form,
    iota_matrix,
    make_standard_space,
    number_operator,
)

RNG = np.random.default_rng(20250825)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_standard_space_invariants(n):
    space = make_standard_space(n)
    eye = np.eye(2 * n)
    assert np.allclose(space.J @ space.J, -eye)
    assert np.allclose(space.omega.T, -space.omega)
    assert np.allclose(space.g, space.omega @ space.J)
    # omega is J-invariant and the associated form is positive definite
    assert np.allclose(space.J.T @ space.omega @ space.J, space.omega)
    assert np.all(np.linalg.eigvalsh(space.g) > 0)


def test_hermitian_form_on_frame():
    space = make_standard_space(2)
    # <e_j, e_k> = delta_jk, <e_j, f_j> = -i in the g - i omega convention
    assert hermitian_form(space, space.basis_e(1), space.basis_e(1)) == pytest.approx(1)
    assert hermitian_form(space, space.basis_e(1), space.basis_e(2)) == pytest.approx(0)
    assert hermitian_form(space, space.basis_e(1), space.basis_f(1)) == pytest.approx(-1j)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exterior_basis_parity_blocks(n):
    basis = ExteriorBasis(n)
    assert basis.dim == 2**n
    sizes = [len(s) for s in basis.subsets]
    # even-parity subsets come first, contiguously
    parities = [c % 2 for c in sizes]
    assert parities == sorted(parities)
    assert basis.plus_dim == sum(1 for p in parities if p == 0)
    gamma = np.diag([(-1.0) ** c for c in sizes])
    assert np.allclose(basis.grading_matrix(), gamma)


def test_creation_annihilation_relations():
    n = 3
    basis = ExteriorBasis(n)
    z = RNG.normal(size=n) + 1j * RNG.normal(size=n)
    w = RNG.normal(size=n) + 1j * RNG.normal(size=n)
    eps_z, eps_w = eps_matrix(basis, z), eps_matrix(basis, w)
    iota_z = iota_matrix(basis, z)
    # CAR: eps_z eps_w + eps_w eps_z = 0, iota_z eps_w + eps_w iota_z = <w, z>
    assert np.allclose(eps_z @ eps_w + eps_w @ eps_z, 0)
    anti = iota_z @ eps_w + eps_w @ iota_z
    assert np.allclose(anti, complex(np.vdot(z, w)) * np.eye(basis.dim))
    # iota is the adjoint of eps
    assert np.allclose(eps_z.conj().T, iota_z)


@pytest.mark.parametrize("n", [1, 2])
def test_clifford_square_and_grading(n):
    basis = ExteriorBasis(n)
    z = RNG.normal(size=n) + 1j * RNG.normal(size=n)
    c = clifford_c(basis, z)
    assert np.allclose(c @ c, float(np.vdot(z, z).real) * np.eye(basis.dim))
    gamma = basis.grading_matrix()
    # Clifford multiplication is odd
    assert np.allclose(gamma @ c + c @ gamma, 0)
    t = 0.7
    ct = clifford_ct(basis, z, t)
    assert np.allclose(
        ct @ ct, (float(np.vdot(z, z).real) + t * t) * np.eye(basis.dim)
    )


def test_number_operator_eigenvalues():
    basis = ExteriorBasis(2)
    diag = np.diag(number_operator(basis)).real
    assert sorted(diag) == [-2, 0, 0, 2]
    # N = sum_j eps_j iota_j - iota_j eps_j
    acc = np.zeros((basis.dim, basis.dim), dtype=complex)
    for j in range(2):
        unit = np.zeros(2, dtype=complex)
        unit[j] = 1.0
        e, i = eps_matrix(basis, unit), iota_matrix(basis, unit)
        acc += e @ i - i @ e
    assert np.allclose(acc, number_operator(basis))


def test_exterior_power_functorial():
    n = 3
    basis = ExteriorBasis(n)
    U = np.linalg.qr(RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n)))[0]
    V = np.linalg.qr(RNG.normal(size=(n, n)) + 1j * RNG.normal(size=(n, n)))[0]
    LU, LV = exterior_power_unitary(basis, U), exterior_power_unitary(basis, V)
    LUV = exterior_power_unitary(basis, U @ V)
    assert np.allclose(LU @ LV, LUV, atol=1e-12)
    assert np.allclose(LU.conj().T @ LU, np.eye(basis.dim), atol=1e-12)
    # intertwines the Clifford action
    z = RNG.normal(size=n) + 1j * RNG.normal(size=n)
    assert np.allclose(
        clifford_c(basis, U @ z), LU @ clifford_c(basis, z) @ LU.conj().T, atol=1e-12
    )


def test_exterior_power_rejects_nonunitary():
    basis = ExteriorBasis(2)
    with pytest.raises(ValueError):
        exterior_power_unitary(basis, np.array([[1.0, 0.5], [0.0, 1.0]]))
