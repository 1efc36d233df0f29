"""Symplectic linear algebra and the exterior/Clifford algebra on Lambda V^{1,0}.

Conventions:
  * The standard symplectic space has basis (e_1..e_n, f_1..f_n) with
    omega(e_j, f_k) = delta_jk, J e_j = f_j, J f_j = -e_j and g = omega(., J.).
  * V^{1,0} is identified with C^n via e_j -> standard basis, f_j -> i e_j.
    A real vector (x, xi) in R^{2n} corresponds to z = x + i xi in C^n.
  * The exterior algebra basis is indexed by subsets of {1..n}.  Subsets are
    ordered parity-major (even cardinality first), then by cardinality, then
    lexicographically, so that the Lambda^+ / Lambda^- blocks are contiguous.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np


@dataclass(frozen=True)
class SymplecticSpace:
    """R^{2n} with compatible symplectic form, complex structure and metric."""

    n: int
    omega: np.ndarray
    J: np.ndarray
    g: np.ndarray

    def basis_e(self, j):
        """Unit vector e_j, 1-indexed."""
        v = np.zeros(2 * self.n)
        v[j - 1] = 1.0
        return v

    def basis_f(self, j):
        """Unit vector f_j = J e_j, 1-indexed."""
        v = np.zeros(2 * self.n)
        v[self.n + j - 1] = 1.0
        return v

    def to_complex(self, x):
        """Map a real vector (x, xi) in R^{2n} to z = x + i xi in C^n."""
        x = np.asarray(x, dtype=float)
        if x.shape != (2 * self.n,):
            raise ValueError(f"expected a vector of length {2 * self.n}")
        return x[: self.n] + 1j * x[self.n :]


def make_standard_space(n):
    """Standard symplectic R^{2n} in the basis (e_1..e_n, f_1..f_n)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    omega = np.block([[zero, eye], [-eye, zero]])
    J = np.block([[zero, -eye], [eye, zero]])
    g = omega @ J
    return SymplecticSpace(n=n, omega=omega, J=J, g=g)


def hermitian_form(space, v, w):
    """Hermitian form h(v, w) = g(v, w) - i omega(v, w)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != (2 * space.n,) or w.shape != (2 * space.n,):
        raise ValueError(f"expected vectors of length {2 * space.n}")
    return v @ space.g @ w - 1j * (v @ space.omega @ w)


def _subset_order(n):
    """Subsets of {1..n}: even cardinality first, then cardinality, then lex."""
    subsets = []
    for parity in (0, 1):
        for k in range(parity, n + 1, 2):
            subsets.extend(combinations(range(1, n + 1), k))
    return tuple(subsets)


@dataclass(frozen=True)
class ExteriorBasis:
    """Canonical ordered basis of Lambda V^{1,0}, indexed by subsets of {1..n}."""

    n: int
    subsets: tuple = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "subsets", _subset_order(self.n))

    @property
    def dim(self):
        return 2**self.n

    @property
    def plus_dim(self):
        """Dimension of the even part Lambda^+ (listed first in the ordering)."""
        return 2 ** (self.n - 1)

    def index(self, subset):
        return self.subsets.index(tuple(sorted(subset)))

    def degree(self, i):
        return len(self.subsets[i])

    def grading_matrix(self):
        """+1 on Lambda^+, -1 on Lambda^-."""
        return np.diag([(-1.0) ** len(s) for s in self.subsets]).astype(complex)


def _check_z(basis, z):
    z = np.asarray(z, dtype=complex)
    if z.shape != (basis.n,):
        raise ValueError(f"expected a complex vector of length {basis.n}")
    return z


def eps_matrix(basis, z):
    """Exterior multiplication alpha -> z wedge alpha on the subset basis."""
    z = _check_z(basis, z)
    dim = basis.dim
    out = np.zeros((dim, dim), dtype=complex)
    for col, s in enumerate(basis.subsets):
        for j in range(1, basis.n + 1):
            if j in s or z[j - 1] == 0:
                continue
            sign = (-1.0) ** sum(1 for k in s if k < j)
            row = basis.index(s + (j,))
            out[row, col] += sign * z[j - 1]
    return out


def iota_matrix(basis, z):
    """Interior multiplication (contraction) by z; adjoint of eps_matrix."""
    z = _check_z(basis, z)
    dim = basis.dim
    out = np.zeros((dim, dim), dtype=complex)
    for col, s in enumerate(basis.subsets):
        for pos, j in enumerate(s):
            if z[j - 1] == 0:
                continue
            sign = (-1.0) ** pos
            row = basis.index(tuple(k for k in s if k != j))
            out[row, col] += sign * np.conj(z[j - 1])
    return out


def clifford_c(basis, z):
    """Clifford multiplication c(z) = eps_z + iota_z; squares to |z|^2."""
    return eps_matrix(basis, z) + iota_matrix(basis, z)


def clifford_ct(basis, z, t):
    """Clifford multiplication by (z, t) on V x R.

    In the Lambda^+ (+) Lambda^- block ordering this is
    [[t, c(z)], [c(z), -t]], i.e. t times the grading operator plus c(z).
    """
    return float(t) * basis.grading_matrix() + clifford_c(basis, z)


def number_operator(basis):
    """Diagonal operator acting on Lambda^k by 2k - n."""
    return np.diag([2.0 * len(s) - basis.n for s in basis.subsets]).astype(complex)


def exterior_power_unitary(basis, U, tol=1e-10):
    """Induced action of a unitary U on wedge products, as a 2^n x 2^n matrix."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (basis.n, basis.n):
        raise ValueError(f"expected a {basis.n} x {basis.n} matrix")
    defect = np.linalg.norm(U.conj().T @ U - np.eye(basis.n))
    if defect > tol:
        raise ValueError(f"matrix is not unitary: ||U*U - I|| = {defect:.3e} > {tol}")
    dim = basis.dim
    out = np.zeros((dim, dim), dtype=complex)
    for row, t in enumerate(basis.subsets):
        for col, s in enumerate(basis.subsets):
            if len(t) != len(s):
                continue
            if not t:
                out[row, col] = 1.0
                continue
            sub = U[np.ix_([i - 1 for i in t], [j - 1 for j in s])]
            out[row, col] = np.linalg.det(sub)
    return out
