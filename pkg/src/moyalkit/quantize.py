"""Finite-dimensional operator representations on truncated Hermite bases.

The basis per coordinate is the |lam|-scaled Hermite/oscillator basis, so the
harmonic oscillator symbol ||x||^2 quantizes to the exact diagonal
lam (n + 2|k|) on the interior of the truncation.  Algebraic identities hold
exactly on the interior mask: multi-indices whose components all stay at
least `margin` levels below the cutoff.
"""

from dataclasses import dataclass, field
from functools import reduce
from itertools import product as iter_product

import numpy as np


@dataclass(frozen=True)
class HermiteBasisSpec:
    """Truncated oscillator basis: multi-indices k in {0..N_max-1}^n."""

    n: int
    lam: float
    N_max: int
    interior_margin: int = 2

    def __post_init__(self):
        if self.n < 1 or self.N_max < 2:
            raise ValueError("need n >= 1 and N_max >= 2")
        if self.lam == 0:
            raise ValueError("lam = 0 has no operator representation; use the symbol algebra")
        if self.interior_margin < 1:
            raise ValueError("interior_margin must be >= 1")

    @property
    def dim(self):
        return self.N_max**self.n

    def multi_indices(self):
        return list(iter_product(range(self.N_max), repeat=self.n))

    def interior_mask(self, margin=None):
        """Boolean mask of multi-indices with every component < N_max - margin."""
        m = self.interior_margin if margin is None else margin
        cut = self.N_max - m
        return np.array([all(k < cut for k in idx) for idx in self.multi_indices()])


@dataclass
class OperatorMatrix:
    """Dense complex matrix on the truncated basis, with its descriptor."""

    data: np.ndarray
    spec: HermiteBasisSpec
    exterior_dim: int = 1  # 2^n when tensored with Lambda, else 1

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        expect = self.spec.dim * self.exterior_dim
        if self.data.shape != (expect, expect):
            raise ValueError(f"matrix shape {self.data.shape} != ({expect}, {expect})")

    def full_mask(self, margin=None):
        return np.tile(self.spec.interior_mask(margin), self.exterior_dim)

    def interior(self, margin=None):
        """Submatrix on interior-safe rows and columns."""
        m = self.full_mask(margin)
        return self.data[np.ix_(m, m)]

    def assert_hermitian(self, tol=1e-12):
        defect = np.linalg.norm(self.data - self.data.conj().T)
        if defect > tol:
            raise ValueError(f"matrix is not Hermitian: defect {defect:.3e}")

    def _check_compatible(self, other):
        if self.spec != other.spec or self.exterior_dim != other.exterior_dim:
            raise ValueError("basis descriptors do not match")

    def __matmul__(self, other):
        self._check_compatible(other)
        return OperatorMatrix(self.data @ other.data, self.spec, self.exterior_dim)

    def __add__(self, other):
        self._check_compatible(other)
        return OperatorMatrix(self.data + other.data, self.spec, self.exterior_dim)

    def __sub__(self, other):
        self._check_compatible(other)
        return OperatorMatrix(self.data - other.data, self.spec, self.exterior_dim)

    def to_json(self):
        flat = self.data.ravel()
        return {
            "dims": list(self.data.shape),
            "basis": {
                "n": self.spec.n,
                "lam": self.spec.lam,
                "N_max": self.spec.N_max,
                "interior_margin": self.spec.interior_margin,
                "exterior_dim": self.exterior_dim,
            },
            "entries": [[v.real, v.imag] for v in flat],
        }

    @staticmethod
    def from_json(data):
        b = data["basis"]
        spec = HermiteBasisSpec(
            n=b["n"], lam=b["lam"], N_max=b["N_max"], interior_margin=b["interior_margin"]
        )
        mat = np.array([complex(re, im) for re, im in data["entries"]])
        return OperatorMatrix(mat.reshape(data["dims"]), spec, b["exterior_dim"])


def _single_ladder(N):
    a = np.zeros((N, N), dtype=complex)
    for k in range(1, N):
        a[k - 1, k] = np.sqrt(k)
    return a


def _lift(spec, op, j):
    """Place a single-coordinate operator at position j (1-indexed) via kron."""
    mats = [np.eye(spec.N_max, dtype=complex)] * spec.n
    mats[j - 1] = op
    return reduce(np.kron, mats)


def ladder_matrices(spec):
    """Per-coordinate annihilation/creation pairs (a_j, a_j^dagger)."""
    a1 = _single_ladder(spec.N_max)
    out = []
    for j in range(1, spec.n + 1):
        a = _lift(spec, a1, j)
        out.append(
            (OperatorMatrix(a, spec), OperatorMatrix(a.conj().T, spec))
        )
    return out


def position_matrices(spec):
    """Position/momentum pairs (x_j, p_j) in the |lam|-scaled basis.

    x_j = sqrt(|lam|/2)(a_j + a_j^dag), p_j = sign(lam) i sqrt(|lam|/2)(a_j^dag - a_j);
    [x_j, p_j] = i lam on the interior.
    """
    scale = np.sqrt(abs(spec.lam) / 2.0)
    sgn = 1.0 if spec.lam > 0 else -1.0
    out = []
    for a, adag in ladder_matrices(spec):
        x = scale * (a.data + adag.data)
        p = sgn * 1j * scale * (adag.data - a.data)
        out.append((OperatorMatrix(x, spec), OperatorMatrix(p, spec)))
    return out


class _WeylQuantizer:
    """Memoized symmetrized-word quantizer for one basis spec.

    The Weyl ordering of a monomial is the average of its operator words over
    all letter orderings; grouping by first letter gives the recursion
    Sym(S) = (1/|S|) sum_j mult_j * M_j @ Sym(S - j), memoized on the
    exponent pair.  Letters on different coordinates commute, so the
    multi-coordinate word factorizes as a Kronecker product of
    single-coordinate words, which keeps all matrix products at size N_max.
    """

    def __init__(self, spec):
        self.spec = spec
        a1 = _single_ladder(spec.N_max)
        scale = np.sqrt(abs(spec.lam) / 2.0)
        sgn = 1.0 if spec.lam > 0 else -1.0
        self.x1 = scale * (a1 + a1.conj().T)
        self.p1 = sgn * 1j * scale * (a1.conj().T - a1)
        self.memo = {}

    def _word1(self, a, b):
        """Symmetrized single-coordinate word x^a p^b on the N_max basis."""
        cached = self.memo.get((a, b))
        if cached is not None:
            return cached
        total = a + b
        if total == 0:
            out = np.eye(self.spec.N_max, dtype=complex)
        else:
            out = np.zeros((self.spec.N_max, self.spec.N_max), dtype=complex)
            if a:
                out += (a / total) * (self.x1 @ self._word1(a - 1, b))
            if b:
                out += (b / total) * (self.p1 @ self._word1(a, b - 1))
        self.memo[(a, b)] = out
        return out

    def word(self, exp):
        n = self.spec.n
        return reduce(np.kron, (self._word1(exp[j], exp[n + j]) for j in range(n)))


_QUANTIZER_CACHE = {}


def _quantizer(spec):
    q = _QUANTIZER_CACHE.get(spec)
    if q is None:
        q = _WeylQuantizer(spec)
        _QUANTIZER_CACHE[spec] = q
    return q


def quantize_poly(f, spec, max_degree=6):
    """Weyl quantization of a (possibly matrix-valued) Weyl polynomial.

    Each monomial maps to the average over all orderings of the corresponding
    word in the position/momentum matrices; pi(f #_lam g) = pi(f) pi(g) holds
    on the interior mask with margin >= max(deg f, deg g).
    """
    if f.n != spec.n:
        raise ValueError("polynomial and basis dimensions differ")
    if f.degree > max_degree:
        raise ValueError(f"degree {f.degree} exceeds the cost guard {max_degree}")
    q = _quantizer(spec)
    if f.matrix_shape is None:
        out = np.zeros((spec.dim, spec.dim), dtype=complex)
        for exp, c in f.terms.items():
            out += complex(c) * q.word(exp)
        return OperatorMatrix(out, spec)
    ext = f.matrix_shape[0]
    out = np.zeros((ext * spec.dim, ext * spec.dim), dtype=complex)
    for exp, c in f.terms.items():
        out += np.kron(np.asarray(c), q.word(exp))
    return OperatorMatrix(out, spec, exterior_dim=ext)


def oscillator_diagonal(spec):
    """Exact interior diagonal of the quantized ||x||^2: lam (n + 2|k|)."""
    return np.array(
        [spec.lam * (spec.n + 2 * sum(idx)) for idx in spec.multi_indices()]
    )


class MehlerRangeError(ValueError):
    pass


def quantize_gaussian(sym, spec):
    """Spectral quantization of an isotropic Gaussian symbol.

    For alpha < 1/lam the symbol is a Mehler kernel at time
    tau = artanh(lam alpha)/lam, and quantizes to the diagonal
    coef (cosh lam tau)^n exp(-tau lam (n + 2|k|)).  At alpha = 1/lam it is a
    multiple of the vacuum projection.
    """
    if spec.lam <= 0:
        raise ValueError("quantize_gaussian needs lam > 0 (lam < 0 via conjugation symmetry)")
    if sym.n != spec.n:
        raise ValueError("symbol and basis dimensions differ")
    lam = spec.lam
    alpha = float(sym.alpha)
    coef = complex(sym.coef)
    if alpha > 1.0 / lam:
        raise MehlerRangeError(
            f"alpha = {alpha} outside Mehler range (0, {1.0 / lam}]"
        )
    indices = spec.multi_indices()
    if np.isclose(alpha, 1.0 / lam, rtol=1e-13, atol=0.0):
        diag = np.array(
            [coef * 2.0**-spec.n if sum(idx) == 0 else 0.0 for idx in indices]
        )
        return OperatorMatrix(np.diag(diag), spec)
    tau = np.arctanh(lam * alpha) / lam
    diag = coef * np.cosh(lam * tau) ** spec.n * np.exp(
        -tau * oscillator_diagonal(spec)
    )
    return OperatorMatrix(np.diag(diag.astype(complex)), spec)


def build_A_operator(space, basis, spec):
    """The quantized Clifford symbol: sum_j x_j (x) c(e_j) + p_j (x) c(f_j).

    Acts on Hermite (x) Lambda with the Lambda factor major (so the
    Lambda^+ / Lambda^- blocks are contiguous); Hermitian and odd in the
    grading; squares to Q (x) 1 + lam 1 (x) N on the interior.
    """
    from .core import clifford_c

    if space.n != basis.n or basis.n != spec.n:
        raise ValueError("space, basis and spec dimensions differ")
    n = spec.n
    out = np.zeros((basis.dim * spec.dim,) * 2, dtype=complex)
    for j, (x, p) in enumerate(position_matrices(spec), start=1):
        unit = np.zeros(n, dtype=complex)
        unit[j - 1] = 1.0
        out += np.kron(clifford_c(basis, unit), x.data)
        out += np.kron(clifford_c(basis, 1j * unit), p.data)
    return OperatorMatrix(out, spec, exterior_dim=basis.dim)


def A_plus_block(A, basis, margin=None, interior_cols=True):
    """The Lambda^+ -> Lambda^- block of the odd operator A.

    Columns are restricted to interior-supported states so truncation does
    not produce spurious kernel vectors; rows are kept in full.
    """
    half = basis.plus_dim * A.spec.dim
    block = A.data[half:, :half]
    if interior_cols:
        mask = np.tile(A.spec.interior_mask(margin), basis.plus_dim)
        block = block[:, mask]
    return block


def A_minus_block(A, basis, margin=None, interior_cols=True):
    half = basis.plus_dim * A.spec.dim
    block = A.data[:half, half:]
    if interior_cols:
        mask = np.tile(A.spec.interior_mask(margin), basis.dim - basis.plus_dim)
        block = block[:, mask]
    return block


class KernelGapError(RuntimeError):
    """Spectral gap too small to certify a kernel dimension."""


def kernel_analysis(op, gap_threshold, min_ratio=100.0):
    """Count near-zero singular values and return an orthonormal kernel basis.

    The kernel dimension is the number of singular values below
    gap_threshold; the smallest retained singular value must exceed the
    largest discarded one by min_ratio, otherwise the dimension is reported
    as indeterminate.
    """
    mat = op.data if isinstance(op, OperatorMatrix) else np.asarray(op)
    _, s, vh = np.linalg.svd(mat)
    small = s < gap_threshold
    dim_ker = int(np.sum(small)) + (mat.shape[1] - len(s))
    counted_max = float(np.max(s[small])) if np.any(small) else gap_threshold / min_ratio**2
    uncounted_min = float(np.min(s[~small])) if np.any(~small) else np.inf
    ratio = uncounted_min / max(counted_max, np.finfo(float).tiny)
    if ratio < min_ratio:
        raise KernelGapError(
            f"indeterminate kernel dimension (gap ratio {ratio:.1f} < {min_ratio}); raise N_max"
        )
    kernel = vh[len(s) - int(np.sum(small)):].conj().T if np.any(small) else np.zeros(
        (mat.shape[1], 0)
    )
    return dim_ker, kernel


# ---------------------------------------------------------------------------
# Bargmann-Fock representation on truncated polynomial bases


def bargmann_basis(n, deg_max):
    """Monomial exponents a in N^n with |a| <= deg_max, degree-major then lex."""
    out = []
    for d in range(deg_max + 1):
        out.extend(
            sorted(a for a in iter_product(range(d + 1), repeat=n) if sum(a) == d)
        )
    return out


def bargmann_gram(n, deg_max):
    """Gram matrix of the monomials z^a: diagonal with entries a!."""
    from math import factorial

    basis = bargmann_basis(n, deg_max)
    return np.diag([float(np.prod([factorial(ai) for ai in a])) for a in basis])


def bargmann_fock_matrices(n, deg_max):
    """Multiplication z_j and differentiation d/dz_j on the orthonormalized
    monomial basis; dz_j is the adjoint of z_j and [dz_j, z_k] = delta_jk on
    degrees below deg_max."""
    if deg_max < 1:
        raise ValueError("deg_max must be >= 1")
    basis = bargmann_basis(n, deg_max)
    index = {a: i for i, a in enumerate(basis)}
    dim = len(basis)
    zs, dzs = [], []
    for j in range(n):
        z = np.zeros((dim, dim), dtype=complex)
        for a, col in index.items():
            if sum(a) == deg_max:
                continue
            up = tuple(ai + 1 if i == j else ai for i, ai in enumerate(a))
            z[index[up], col] = np.sqrt(a[j] + 1.0)
        zs.append(z)
        dzs.append(z.conj().T)
    return zs, dzs
