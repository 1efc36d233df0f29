"""Exact star products: isotropic Gaussians, Weyl-ordered polynomials, Mehler family.

The Gaussian symbol (coef, alpha) denotes x -> coef * exp(-alpha ||x||^2) on
V* = R^{2n}.  All Gaussian operations are rational identities: if coef and
alpha are Fractions the results are exact.

Polynomial star products use the finite bidifferential series

    f # g = sum_{s,t} (i*lam/2)^{|s|+|t|} (-1)^{|t|} / (s! t!)
            (d_x^s d_xi^t f) (d_xi^s d_x^t g)

which terminates for polynomials.  The sign is fixed so that the coordinate
commutator is [e_j, f_j] = i*lam, and cross-validated against operator
composition in the quantize module.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import comb, cosh, tanh, factorial

import numpy as np
from numpy.polynomial.hermite import hermgauss


def _exact_inverse(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1, 1) / x
    return 1.0 / x


@dataclass(frozen=True)
class GaussianSymbol:
    """Isotropic Gaussian coef * exp(-alpha ||x||^2) on V* = R^{2n}."""

    coef: object
    alpha: object
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return complex(self.coef) * np.exp(-float(self.alpha) * np.sum(x * x))

    def to_json(self):
        c = complex(self.coef)
        return {"n": self.n, "coef": [c.real, c.imag], "alpha": float(self.alpha)}

    @staticmethod
    def from_json(data):
        re, im = data["coef"]
        coef = complex(re, im) if im else re
        return GaussianSymbol(coef=coef, alpha=data["alpha"], n=data["n"])


def moyal_gauss(a, b, lam):
    """Closed-form Moyal product of two isotropic Gaussians.

    (c_a e^{-alpha|x|^2}) #_lam (c_b e^{-beta|x|^2})
        = c_a c_b (1 + lam^2 alpha beta)^{-n}
          e^{-(alpha+beta)/(1+lam^2 alpha beta) |x|^2}

    At lam = 0 this is the pointwise product.
    """
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: n={a.n} vs n={b.n}")
    d = 1 + lam * lam * a.alpha * b.alpha
    coef = a.coef * b.coef / d**a.n
    return GaussianSymbol(coef=coef, alpha=(a.alpha + b.alpha) / d, n=a.n)


def vacuum_symbol(lam, n):
    """The Gaussian idempotent s_lam = 2^n exp(-||x||^2 / lam), lam > 0."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    return GaussianSymbol(coef=2**n, alpha=_exact_inverse(lam), n=n)


def mehler(tau, lam, n):
    """Mehler kernel K_lam(tau): the star-exponential of -tau ||x||^2.

    lam = 0:  exp(-tau ||x||^2)
    lam != 0: (cosh lam*tau)^{-n} exp(-(tanh(lam*tau)/lam) ||x||^2)
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    if lam == 0:
        return GaussianSymbol(coef=1, alpha=tau, n=n)
    lt = float(lam) * float(tau)
    return GaussianSymbol(coef=cosh(lt) ** (-n), alpha=tanh(lt) / float(lam), n=n)


def scaling_iso(f, lam):
    """Scaling map between the lam = 1 and general-lam Gaussian algebras.

    (coef, alpha) -> (coef, alpha / lam); multiplicative from #_1 to #_lam.
    The lam^{-n} prefactor sometimes attached to this map breaks
    multiplicativity for the closed-form product; see scaling_prefactor_defect.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    return GaussianSymbol(coef=f.coef, alpha=f.alpha / lam, n=f.n)


def scaling_prefactor_defect(a, b, lam):
    """Multiplicativity defect of the prefactored map (c, alpha) -> (c/lam^n, alpha/lam).

    Returns |phi(a #_1 b) - phi(a) #_lam phi(b)| measured on the coefficient
    (the alpha parts always agree).  Zero only at lam = 1; reported so the
    discrepancy between the two published forms of the map is on record.
    """

    def phi(f):
        return GaussianSymbol(coef=f.coef / lam**f.n, alpha=f.alpha / lam, n=f.n)

    lhs = phi(moyal_gauss(a, b, 1))
    rhs = moyal_gauss(phi(a), phi(b), lam)
    return abs(complex(lhs.coef) - complex(rhs.coef))


# ---------------------------------------------------------------------------
# Weyl-ordered polynomials


def _canon(terms, is_matrix):
    out = {}
    for exp, c in terms.items():
        if is_matrix:
            c = np.asarray(c, dtype=complex)
            if np.any(c != 0):
                out[tuple(exp)] = out.get(tuple(exp), 0) + c
        elif c != 0:
            out[tuple(exp)] = out.get(tuple(exp), 0) + c
    return out


@dataclass(frozen=True)
class WeylPoly:
    """Polynomial on V* as a map from exponent vectors (a, b) in N^n x N^n.

    Exponents index powers of the coordinates x_j = e_j and xi_j = f_j.
    Coefficients are complex scalars, or complex matrices of a fixed shape
    for End(Lambda)-valued polynomials.  The denoted object is the fully
    symmetrized (Weyl-ordered) tensor.
    """

    n: int
    terms: dict
    matrix_shape: tuple = None

    def __post_init__(self):
        object.__setattr__(
            self, "terms", _canon(self.terms, self.matrix_shape is not None)
        )
        for exp in self.terms:
            if len(exp) != 2 * self.n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for n={self.n}")
        if self.matrix_shape is not None:
            for c in self.terms.values():
                if c.shape != tuple(self.matrix_shape):
                    raise ValueError("inconsistent matrix coefficient shapes")

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    @staticmethod
    def coordinate(n, j, kind):
        """The linear coordinate e_j (kind 'e') or f_j (kind 'f'), 1-indexed."""
        exp = [0] * (2 * n)
        exp[(j - 1) if kind == "e" else (n + j - 1)] = 1
        return WeylPoly(n=n, terms={tuple(exp): 1})

    @staticmethod
    def constant(n, c, matrix_shape=None):
        return WeylPoly(n=n, terms={(0,) * (2 * n): c}, matrix_shape=matrix_shape)

    def __add__(self, other):
        self._check_compatible(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return WeylPoly(n=self.n, terms=terms, matrix_shape=self.matrix_shape)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return WeylPoly(
            n=self.n,
            terms={e: c * v for e, v in self.terms.items()},
            matrix_shape=self.matrix_shape,
        )

    def _check_compatible(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if (self.matrix_shape is None) != (other.matrix_shape is None):
            raise ValueError("cannot mix scalar and matrix-valued polynomials")
        if self.matrix_shape is not None and tuple(self.matrix_shape) != tuple(
            other.matrix_shape
        ):
            raise ValueError("shape mismatch")

    def tensor(self, mat):
        """Scalar polynomial times a constant matrix coefficient."""
        if self.matrix_shape is not None:
            raise ValueError("already matrix-valued")
        mat = np.asarray(mat, dtype=complex)
        return WeylPoly(
            n=self.n,
            terms={e: complex(c) * mat for e, c in self.terms.items()},
            matrix_shape=mat.shape,
        )

    def __call__(self, point):
        """Evaluate pointwise at (x, xi) in R^{2n}."""
        point = np.asarray(point, dtype=float)
        if self.matrix_shape is None:
            acc = 0.0 + 0.0j
        else:
            acc = np.zeros(self.matrix_shape, dtype=complex)
        for exp, c in self.terms.items():
            acc = acc + c * float(np.prod(point ** np.array(exp)))
        return acc

    def max_abs_diff(self, other):
        """Largest coefficient deviation between two polynomials."""
        self._check_compatible(other)
        keys = set(self.terms) | set(other.terms)
        worst = 0.0
        for k in keys:
            a = self.terms.get(k)
            b = other.terms.get(k)
            if a is None:
                a = 0 if self.matrix_shape is None else np.zeros(self.matrix_shape)
            if b is None:
                b = 0 if self.matrix_shape is None else np.zeros(self.matrix_shape)
            worst = max(worst, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))
        return worst

    def to_json(self):
        if self.matrix_shape is not None:
            raise ValueError("only scalar polynomials serialize to JSON")
        return {
            "n": self.n,
            "terms": [
                {"exp": list(e), "coef": [complex(c).real, complex(c).imag]}
                for e, c in sorted(self.terms.items())
            ],
        }

    @staticmethod
    def from_json(data):
        terms = {
            tuple(t["exp"]): complex(t["coef"][0], t["coef"][1])
            for t in data["terms"]
        }
        return WeylPoly(n=data["n"], terms=terms)


def _falling(m, k):
    return factorial(m) // factorial(m - k)


def _star_monomials(n, p, q, lam, mul):
    """Bidifferential star product of two monomials; yields (exp, coef) pairs."""
    px, pxi = p[:n], p[n:]
    qx, qxi = q[:n], q[n:]
    half = 1j * lam / 2
    s_range = [range(min(px[j], qxi[j]) + 1) for j in range(n)]
    t_range = [range(min(pxi[j], qx[j]) + 1) for j in range(n)]
    for s in iter_product(*s_range):
        for t in iter_product(*t_range):
            k = sum(s) + sum(t)
            num = 1
            for j in range(n):
                num *= comb(px[j], s[j]) * _falling(qxi[j], s[j])
                num *= comb(pxi[j], t[j]) * _falling(qx[j], t[j])
            if num == 0:
                continue
            coef = (half**k) * ((-1) ** sum(t)) * num
            exp = tuple(
                px[j] + qx[j] - s[j] - t[j] for j in range(n)
            ) + tuple(pxi[j] + qxi[j] - s[j] - t[j] for j in range(n))
            yield exp, coef


def _star(f, g, lam, mul):
    terms = {}
    for p, cf in f.terms.items():
        for q, cg in g.terms.items():
            prod = mul(cf, cg)
            for exp, coef in _star_monomials(f.n, p, q, lam, mul):
                cur = terms.get(exp)
                terms[exp] = coef * prod if cur is None else cur + coef * prod
    return terms


def moyal_poly(f, g, lam):
    """Moyal product of scalar Weyl polynomials; exact and finite."""
    f._check_compatible(g)
    if f.matrix_shape is not None:
        raise ValueError("use moyal_poly_matrix for matrix-valued polynomials")
    return WeylPoly(n=f.n, terms=_star(f, g, lam, lambda a, b: a * b))


def moyal_poly_matrix(f, g, lam):
    """Moyal product of End(Lambda)-valued Weyl polynomials (entrywise star,
    matrix multiplication on coefficients)."""
    f._check_compatible(g)
    if f.matrix_shape is None:
        raise ValueError("inputs are scalar; use moyal_poly")
    terms = _star(f, g, lam, lambda a, b: a @ b)
    return WeylPoly(n=f.n, terms=terms, matrix_shape=f.matrix_shape)


def build_A_symbol(space, basis):
    """The matrix-valued linear symbol z -> c(z):

    A = sum_j e_j (x) c(e_j) + f_j (x) c(f_j),
    odd with respect to the Lambda grading and Hermitian-matrix valued.
    """
    from .core import clifford_c

    if space.n != basis.n:
        raise ValueError("space and basis dimensions differ")
    n = basis.n
    acc = None
    for j in range(1, n + 1):
        unit = np.zeros(n, dtype=complex)
        unit[j - 1] = 1.0
        te = WeylPoly.coordinate(n, j, "e").tensor(clifford_c(basis, unit))
        tf = WeylPoly.coordinate(n, j, "f").tensor(clifford_c(basis, 1j * unit))
        acc = te + tf if acc is None else acc + te + tf
    return acc


# ---------------------------------------------------------------------------
# Quadrature check of the Fourier isomorphism (n = 1)


class QuadratureError(RuntimeError):
    """Raised when the twisted-convolution quadrature fails to converge."""

    def __init__(self, estimate):
        self.estimate = estimate
        super().__init__(f"quadrature not converged, error estimate {estimate:.3e}")


def _gauss_fourier_transform(sym):
    """Closed-form Fourier transform of a Gaussian on V = R^2 (n = 1):
    FT(c e^{-a|v|^2}) = (c pi / a) e^{-|x|^2/(4a)} with FT f = int e^{-ixv} f dv."""
    a = float(sym.alpha)
    return GaussianSymbol(coef=complex(sym.coef) * np.pi / a, alpha=1.0 / (4 * a), n=sym.n)


def _twisted_conv_grid(g, h, lam, v_nodes, order):
    """Twisted convolution (g *_lam h) evaluated at an array of points of V = R^2.

    Gauss-Hermite quadrature adapted to the Gaussian factor of the integrand:
    the w-integral is centered at alpha_g v / (alpha_g + alpha_h).
    """
    ag, ah = float(g.alpha), float(h.alpha)
    if ag <= 0 or ah <= 0:
        raise ValueError("twisted convolution check needs strictly positive alphas")
    x, w = hermgauss(order)
    s = ag + ah
    # tensor nodes u in R^2 for int e^{-|u|^2} F(u) du
    u1, u2 = np.meshgrid(x, x, indexing="ij")
    ww = np.outer(w, w)
    out = np.empty(len(v_nodes), dtype=complex)
    for i, v in enumerate(v_nodes):
        c = ag * np.asarray(v) / s
        w1 = c[0] + u1 / np.sqrt(s)
        w2 = c[1] + u2 / np.sqrt(s)
        # omega(v, w) = v1 w2 - v2 w1
        phase = np.exp(0.5j * lam * (v[0] * w2 - v[1] * w1))
        gauss = np.exp(-(ag * ah / s) * (v[0] ** 2 + v[1] ** 2))
        out[i] = complex(g.coef) * complex(h.coef) * gauss / s * np.sum(ww * phase)
    return out


def _fourier_of_samples(values, v_nodes, gh_weights, x_points):
    """FT(x) = int e^{-i x v} f(v) dv from Gauss-Hermite samples of f."""
    out = np.empty(len(x_points), dtype=complex)
    v = np.asarray(v_nodes)
    for i, xp in enumerate(x_points):
        phase = np.exp(-1j * (v[:, 0] * xp[0] + v[:, 1] * xp[1]))
        out[i] = np.sum(gh_weights * phase * values)
    return out


def _fourier_iso_residual(g, h, lam, order):
    ag, ah = float(g.alpha), float(h.alpha)
    # v-grid for the outer Fourier integral, weighted by the Gaussian envelope
    # beta |v|^2 of the convolution.
    beta = ag * ah / (ag + ah)
    x, w = hermgauss(order)
    v1, v2 = np.meshgrid(x / np.sqrt(beta), x / np.sqrt(beta), indexing="ij")
    v_nodes = np.column_stack([v1.ravel(), v2.ravel()])
    conv = _twisted_conv_grid(g, h, lam, v_nodes, order)
    envelope = np.exp(-beta * (v_nodes[:, 0] ** 2 + v_nodes[:, 1] ** 2))
    # GH weights absorb the envelope: f = envelope * smooth, integrate smooth part.
    gh_w = np.outer(w, w).ravel() / beta
    smooth = conv / envelope

    grid = np.linspace(-2.0, 2.0, 5)
    x_points = [(a, b) for a in grid for b in grid]
    numeric = _fourier_of_samples(smooth, v_nodes, gh_w, x_points)

    expected_sym = moyal_gauss(_gauss_fourier_transform(g), _gauss_fourier_transform(h), lam)
    expected = np.array([expected_sym(np.asarray(p)) for p in x_points])
    return float(np.max(np.abs(numeric - expected)))


def fourier_iso_check(g, h, lam, order=40, convergence_tol=1e-6):
    """Residual of FT(g *_lam h) = FT(g) #_lam FT(h) for Gaussians on R^2.

    Computes the twisted convolution and its Fourier transform by
    Gauss-Hermite quadrature and compares with the closed-form Moyal product
    on a sample grid.  Raises QuadratureError if doubling the quadrature
    order moves the residual by more than convergence_tol.
    """
    if g.n != 1 or h.n != 1:
        raise ValueError("fourier_iso_check is implemented for n = 1 only")
    res = _fourier_iso_residual(g, h, lam, order)
    res_hi = _fourier_iso_residual(g, h, lam, order + order // 2)
    if abs(res - res_hi) > convergence_tol:
        raise QuadratureError(abs(res - res_hi))
    return res_hi
