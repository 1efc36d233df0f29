"""The deformation family connecting the Bott projector to the vacuum projection.

Two verifiable routes:
  * lam = 0: exact pointwise matrix fields on V*.
  * lam != 0: finite operator matrices on the truncated Hermite (x) Lambda basis,
    assembled spectrally (the heat family and the interpolation weights are
    diagonal in the oscillator product basis, so no quadrature is needed; the
    zero mode gets the analytic limit weight tau).

Block conventions follow the contiguous Lambda^+ (+) Lambda^- ordering of the
exterior basis:

    A = [[0, a*], [a, 0]]   R = [[r+, 0], [0, r-]]   B = [[0, b*], [b, 0]]

    e(tau) = [[ (r+)^2,  b* (1 + r-) ],
              [ a r+,    1 - (r-)^2  ]]

e(tau) is an idempotent but not self-adjoint (its diagonal blocks are, its
off-diagonal blocks are not adjoints of each other).
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .core import ExteriorBasis, clifford_c, make_standard_space, number_operator
from .projectors import ProjectionField, _parity_projectors
from .quantize import (
    HermiteBasisSpec,
    OperatorMatrix,
    build_A_operator,
    oscillator_diagonal,
    quantize_gaussian,
)
from .symbols import mehler


def _with_lam(spec, lam):
    if lam == 0:
        raise ValueError("operator route needs lam != 0; use pointwise_family_e0")
    return spec if spec.lam == lam else replace(spec, lam=lam)


@dataclass
class DeformationFamily:
    """Cached operators and blocks of the family at one (lam, tau) cell."""

    lam: float
    tau: float
    spec: HermiteBasisSpec

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        self.spec = _with_lam(self.spec, self.lam)
        self.basis = ExteriorBasis(self.spec.n)
        space = make_standard_space(self.spec.n)
        self.A = build_A_operator(space, self.basis, self.spec)
        self.R = self._heat_operator(self.tau)
        self.B = self._interpolation_operator()
        half = self.basis.plus_dim * self.spec.dim
        self._half = half
        self.a = self.A.data[half:, :half]
        self.r_plus = self.R.data[:half, :half]
        self.r_minus = self.R.data[half:, half:]
        self.b = self.B.data[half:, :half]
        self.b_star = self.B.data[:half, half:]

    def _heat_operator(self, tau):
        """R(tau) = K(tau) (x) exp(-lam tau N), diagonal in the product basis."""
        K = quantize_gaussian(mehler(tau, self.lam, self.spec.n), self.spec)
        N = number_operator(self.basis)
        exp_n = np.diag(np.exp(-self.lam * tau * np.real(np.diag(N))))
        return OperatorMatrix(
            np.kron(exp_n, K.data), self.spec, exterior_dim=self.basis.dim
        )

    def _mode_decay_rates(self):
        """Diagonal of A^2 in the product basis: lam (n + 2|k|) + lam (2|S| - n)."""
        osc = oscillator_diagonal(self.spec)
        n_diag = np.real(np.diag(number_operator(self.basis)))
        return np.concatenate([osc + self.lam * q for q in n_diag])

    def _interpolation_operator(self):
        """B(tau) = A * int_tau^{2 tau} K(t) exp(-lam t N) dt, assembled from the
        eigenvalue weights (exp(-tau mu) - exp(-2 tau mu))/mu, with weight tau
        on the zero mode."""
        mu = self._mode_decay_rates()
        weights = np.empty_like(mu)
        zero = np.isclose(mu, 0.0, atol=1e-12)
        weights[zero] = self.tau
        m = mu[~zero]
        weights[~zero] = (np.exp(-self.tau * m) - np.exp(-2 * self.tau * m)) / m
        return OperatorMatrix(
            self.A.data @ np.diag(weights), self.spec, exterior_dim=self.basis.dim
        )

    def idempotent(self):
        """The block idempotent e(tau)."""
        half = self._half
        eye = np.eye(half, dtype=complex)
        e = np.block(
            [
                [self.r_plus @ self.r_plus, self.b_star @ (eye + self.r_minus)],
                [self.a @ self.r_plus, eye - self.r_minus @ self.r_minus],
            ]
        )
        return OperatorMatrix(e, self.spec, exterior_dim=self.basis.dim)

    def block_residuals(self, margin=None):
        """Interior residuals of the block compatibility relations."""
        mask = np.tile(self.spec.interior_mask(margin), self.basis.plus_dim)
        sub = np.ix_(mask, mask)

        def res(m):
            return float(np.max(np.abs(m[sub])))

        return {
            "a_rplus_minus_rminus_a": res(self.a @ self.r_plus - self.r_minus @ self.a),
            "bstar_rminus_minus_rplus_bstar": res(
                self.b_star @ self.r_minus - self.r_plus @ self.b_star
            ),
        }


def R_operator(tau, lam, spec):
    """The heat-family element R(tau) = K(tau) (x) exp(-lam tau N)."""
    return DeformationFamily(lam=lam, tau=tau, spec=spec).R


def B_operator(tau, lam, spec):
    """The odd interpolation element B(tau) with A B = B A = R - R^2."""
    return DeformationFamily(lam=lam, tau=tau, spec=spec).B


def idempotent_e(tau, lam, spec):
    """The idempotent e_lam(tau) on Hermite (x) Lambda."""
    return DeformationFamily(lam=lam, tau=tau, spec=spec).idempotent()


def limit_idempotent(spec):
    """The tau -> infinity endpoint: ground-state projection tensor the
    Lambda^0 line on the even block, identity on the odd block."""
    basis = ExteriorBasis(spec.n)
    nh = spec.dim
    p0_h = np.zeros((nh, nh), dtype=complex)
    p0_h[0, 0] = 1.0  # multi-index (0,..,0) is first in lex order
    lam_diag = np.zeros(basis.dim)
    lam_diag[basis.index(())] = 1.0
    p0_lam = np.diag(lam_diag).astype(complex)
    odd_lam = (np.eye(basis.dim) - ((np.eye(basis.dim) + basis.grading_matrix()) / 2)).astype(complex)
    e_inf = np.kron(p0_lam, p0_h) + np.kron(odd_lam, np.eye(nh, dtype=complex))
    return OperatorMatrix(e_inf, spec, exterior_dim=basis.dim)


def pointwise_family_e0(tau, n=1):
    """The lam = 0 member of the family as an exact pointwise field.

    With r(z) = exp(-tau |z|^2) and w(z) = (r - r^2)/|z|^2 (w(0) = tau):
        e0(tau)(z) = r^2 P+ + (1 - r^2) P- + r c(z) P+ + w (1 + r) c(z) P-
    Pointwise idempotent; not self-adjoint; limit [[0,0],[0,1]] at infinity.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    basis = ExteriorBasis(n)
    p_plus, p_minus = _parity_projectors(basis)

    def evaluate(point):
        z = point[:n] + 1j * point[n:]
        mu = float(np.sum(point * point))
        r = np.exp(-tau * mu)
        w = tau if mu == 0 else (r - r * r) / mu
        c = clifford_c(basis, z)
        return (
            r * r * p_plus
            + (1.0 - r * r) * p_minus
            + r * (c @ p_plus)
            + w * (1.0 + r) * (c @ p_minus)
        )

    return ProjectionField(
        n=n,
        evaluator=evaluate,
        limit=p_minus,
        domain="plane",
        hermitian_expected=False,
    )


def tau_convergence(tau_grid, spec, lam=1.0):
    """Interior operator-norm distance from e_lam(tau) to the limit idempotent,
    with a least-squares fit of the log-distance slope."""
    spec = _with_lam(spec, lam)
    e_inf = limit_idempotent(spec)
    rows = []
    for tau in tau_grid:
        e = idempotent_e(tau, lam, spec)
        mask = e.full_mask()
        diff = (e.data - e_inf.data)[np.ix_(mask, mask)]
        rows.append({"tau": float(tau), "distance": float(np.linalg.norm(diff, 2))})
    dists = [r["distance"] for r in rows]
    monotone = all(b < a for a, b in zip(dists, dists[1:]))
    slope = float(
        np.polyfit([r["tau"] for r in rows], np.log([max(d, 1e-300) for d in dists]), 1)[0]
    )
    return {"rows": rows, "monotone": monotone, "log_slope": slope}


def dilation_matrix(spec, factor):
    """Change of basis from the factor-scaled oscillator basis to the unscaled
    one, computed from the ladder algebra: expm(-ln(factor) (a^2 - a+^2)/2)
    per coordinate (truncation makes this exact only away from the edge)."""
    from .quantize import ladder_matrices
    from functools import reduce

    gens = []
    for a, adag in ladder_matrices(replace(spec, lam=1.0)):
        gens.append((a.data @ a.data - adag.data @ adag.data) / 2.0)
    L = sum(gens)
    return expm(-np.log(factor) * L)


def lambda_continuity(lambda_grid, spec, tau=1.0):
    """Norm increments of e_lam(tau) along a lambda grid, compared in a common
    (lam = 1) basis via the explicit dilation change of basis."""
    lams = sorted(float(x) for x in lambda_grid)
    if any(x <= 0 for x in lams):
        raise ValueError("lambda grid must be positive")
    basis = ExteriorBasis(spec.n)
    mask = np.tile(spec.interior_mask(max(spec.interior_margin, spec.N_max // 3)), basis.dim)
    sub = np.ix_(mask, mask)

    def common(lam):
        e = idempotent_e(tau, lam, spec).data
        D = np.kron(np.eye(basis.dim), dilation_matrix(spec, np.sqrt(lam)))
        return (D @ e @ D.T)[sub]

    mats = [common(lam) for lam in lams]
    rows = []
    for (l1, m1), (l2, m2) in zip(zip(lams, mats), zip(lams[1:], mats[1:])):
        rows.append(
            {
                "lam_from": l1,
                "lam_to": l2,
                "increment": float(np.linalg.norm(m2 - m1, 2)),
            }
        )
    steps = [r["lam_to"] - r["lam_from"] for r in rows]
    incs = [r["increment"] for r in rows]
    lipschitz = max(i / s for i, s in zip(incs, steps)) if rows else 0.0
    return {"rows": rows, "lipschitz_estimate": lipschitz}


def boundary_idempotent(x, y):
    """The generic boundary idempotent built from x and a parametrix y:

        r = 1 - x y,  s = 1 - y x,
        e = [[s^2, y r (1 + r)], [x s, 1 - r^2]]

    e^2 = e follows from s y = y r and r x = x s, which hold by construction.
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    m2, m1 = x.shape
    if y.shape != (m1, m2):
        raise ValueError("x and y shapes are not transpose-compatible")
    r = np.eye(m2, dtype=complex) - x @ y
    s = np.eye(m1, dtype=complex) - y @ x
    return np.block(
        [[s @ s, y @ r @ (np.eye(m2) + r)], [x @ s, np.eye(m2) - r @ r]]
    )


def family_parametrix(family):
    """The parametrix block y = b* (r-)^{-1} that reproduces the family
    idempotent through the generic boundary construction with x = a."""
    return family.b_star @ np.linalg.inv(family.r_minus)


def equivariant_conjugation(family, thetas):
    """Conjugation of the family idempotent by the diagonal torus action
    exp(i theta_j) on coordinate j: Lambda U on the exterior factor tensored
    with the number-operator phases on the oscillator factor."""
    from .core import exterior_power_unitary
    from functools import reduce

    spec = family.spec
    basis = family.basis
    U = np.diag(np.exp(1j * np.asarray(thetas, dtype=float)))
    W_lam = exterior_power_unitary(basis, U)
    phases = [
        np.exp(1j * sum(t * k for t, k in zip(thetas, idx)))
        for idx in spec.multi_indices()
    ]
    W_h = np.diag(phases)
    W = np.kron(W_lam, W_h)
    e = family.idempotent().data
    mask = family.idempotent().full_mask()
    sub = np.ix_(mask, mask)
    return float(np.max(np.abs((W @ e @ W.conj().T - e)[sub])))
