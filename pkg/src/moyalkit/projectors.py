"""Pointwise projection fields: the Bott projector, its sphere form, and
numerical Chern-number integration.

Fields evaluate to 2^n x 2^n matrices over the graded exterior basis
(Lambda^+ block first).  Idempotency is checked lazily at every evaluated
point; defects are recorded on the field rather than raised, so that
non-self-adjoint idempotent families can flow through the same machinery.
"""

import csv
from dataclasses import dataclass, field as dc_field

import numpy as np

from .core import ExteriorBasis, clifford_c, clifford_ct, exterior_power_unitary

#: Marker for the point at infinity of the compactified plane.
POINT_AT_INFINITY = "infinity"


@dataclass
class ProjectionField:
    """Matrix-valued idempotent function on R^{2n} (or a sphere)."""

    n: int
    evaluator: callable
    limit: np.ndarray
    domain: str = "plane"  # "plane" (compactified) or "sphere"
    check_tol: float = 1e-12
    hermitian_expected: bool = True
    defects: list = dc_field(default_factory=list)

    def __call__(self, point):
        if isinstance(point, str) and point == POINT_AT_INFINITY:
            return self.limit
        point = np.asarray(point, dtype=float)
        mat = self.evaluator(point)
        idem = np.max(np.abs(mat @ mat - mat))
        if idem > self.check_tol:
            self.defects.append(("idempotency", tuple(point), float(idem)))
        if self.hermitian_expected:
            herm = np.max(np.abs(mat - mat.conj().T))
            if herm > self.check_tol:
                self.defects.append(("hermiticity", tuple(point), float(herm)))
        return mat


def _parity_projectors(basis):
    gamma = basis.grading_matrix()
    eye = np.eye(basis.dim, dtype=complex)
    return (eye + gamma) / 2, (eye - gamma) / 2


def bott_projector(n):
    """The Bott projector field e(z) = (1 + |z|^2)^{-1} [[1, c(z)], [c(z), |z|^2]]
    over the Lambda^+ (+) Lambda^- block split; limit [[0,0],[0,1]] at infinity."""
    basis = ExteriorBasis(n)
    p_plus, p_minus = _parity_projectors(basis)

    def evaluate(point):
        space_dim = 2 * n
        if point.shape != (space_dim,):
            raise ValueError(f"expected a point of R^{space_dim}")
        z = point[:n] + 1j * point[n:]
        r2 = float(np.sum(point * point))
        return (p_plus + r2 * p_minus + clifford_c(basis, z)) / (1.0 + r2)

    return ProjectionField(n=n, evaluator=evaluate, limit=p_minus, domain="plane")


def stereographic(point, tol=1e-10):
    """Stereographic projection of the unit sphere in R^{2n+1} through the
    south pole: (z, t) -> z / (1 + t); the south pole maps to infinity."""
    point = np.asarray(point, dtype=float)
    norm = np.linalg.norm(point)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"point is off the unit sphere: |norm - 1| = {abs(norm - 1):.3e}")
    z, t = point[:-1], point[-1]
    if 1.0 + t <= tol:
        return POINT_AT_INFINITY
    return z / (1.0 + t)


def sphere_projector(n):
    """The field e(z, t) = (1 + c(z, t)) / 2 on the unit sphere of R^{2n+1};
    equals the Bott projector pulled back through stereographic projection."""
    basis = ExteriorBasis(n)
    _, p_minus = _parity_projectors(basis)

    def evaluate(point):
        if point.shape != (2 * n + 1,):
            raise ValueError(f"expected a point of R^{2 * n + 1}")
        z = point[:n] + 1j * point[n : 2 * n]
        t = point[2 * n]
        return (np.eye(basis.dim, dtype=complex) + clifford_ct(basis, z, t)) / 2.0

    return ProjectionField(n=n, evaluator=evaluate, limit=p_minus, domain="sphere")


def _curvature_form(field, point, tangent1, tangent2, h):
    """tr(e [d1 e, d2 e]) by central differences along two tangent directions."""
    e = field(point)
    d1 = (field(point + h * tangent1) - field(point - h * tangent1)) / (2 * h)
    d2 = (field(point + h * tangent2) - field(point - h * tangent2)) / (2 * h)
    return np.trace(e @ (d1 @ d2 - d2 @ d1))


class ChernIntegrationError(RuntimeError):
    pass


def _chern_plane(field, grid_size, n_theta):
    ex = np.array([1.0, 0.0])
    ey = np.array([0.0, 1.0])
    thetas = np.arange(n_theta) * (2 * np.pi / n_theta)
    # radial substitution r = s / (1 - s) covers [0, infinity); the
    # transformed integrand vanishes at s = 1, so the cutoff tail is O(ds^2).
    ds = 1.0 / grid_size
    s_nodes = np.arange(1, grid_size) * ds
    total = 0.0 + 0.0j
    for s in s_nodes:
        r = s / (1.0 - s)
        jac = r / (1.0 - s) ** 2
        h = 1e-5 * (1.0 + r)
        ring = 0.0 + 0.0j
        for th in thetas:
            p = np.array([r * np.cos(th), r * np.sin(th)])
            ring += _curvature_form(field, p, ex, ey, h)
        total += ring * jac
    integral = total * ds * (2 * np.pi / n_theta)
    return integral / (2j * np.pi)


def _chern_sphere(field, grid_size, n_theta):
    # parametrize by (u, phi): point = (sin u cos phi, sin u sin phi, cos u)
    du = np.pi / grid_size
    dphi = 2 * np.pi / n_theta
    total = 0.0 + 0.0j
    h = 1e-5
    for iu in range(grid_size):
        u = (iu + 0.5) * du
        for ip in range(n_theta):
            phi = ip * dphi

            def chart(uu, pp):
                return np.array(
                    [np.sin(uu) * np.cos(pp), np.sin(uu) * np.sin(pp), np.cos(uu)]
                )

            e = field(chart(u, phi))
            d1 = (field(chart(u + h, phi)) - field(chart(u - h, phi))) / (2 * h)
            d2 = (field(chart(u, phi + h)) - field(chart(u, phi - h))) / (2 * h)
            total += np.trace(e @ (d1 @ d2 - d2 @ d1)) * du * dphi
    return total / (2j * np.pi)


def chern_number(field, grid_size=512, n_theta=None, integrality_tol=1e-3):
    """First Chern number of a projection field over a 2-dimensional base.

    Integrates tr(e [d1 e, d2 e]) / (2 pi i) on an adaptive radial-angular
    grid (plane fields use the substitution r = s/(1-s), so the tail beyond
    the cutoff is covered analytically).  The result must land within
    integrality_tol of an integer.
    """
    if field.n != 1:
        raise ValueError("chern_number is implemented for n = 1 (2-dimensional base)")
    if n_theta is None:
        n_theta = max(64, grid_size // 4)
    if field.domain == "plane":
        value = _chern_plane(field, grid_size, n_theta)
    else:
        value = _chern_sphere(field, grid_size, n_theta)
    value = float(np.real(value))
    if abs(value - round(value)) > integrality_tol:
        raise ChernIntegrationError(
            f"chern integral {value:.6f} is not within {integrality_tol} of an "
            "integer; grid too coarse, increase grid_size"
        )
    return value


def conjugated_field(field, U):
    """The field x -> W e(x) W* for a constant unitary W = Lambda^bullet U."""
    basis = ExteriorBasis(field.n)
    W = exterior_power_unitary(basis, U)

    def evaluate(point):
        return W @ field.evaluator(point) @ W.conj().T

    return ProjectionField(
        n=field.n,
        evaluator=evaluate,
        limit=W @ field.limit @ W.conj().T,
        domain=field.domain,
    )


def _rotate_point(point, U):
    n = U.shape[0]
    z = point[:n] + 1j * point[n:]
    w = U @ z
    return np.concatenate([w.real, w.imag])


def equivariance_check(field, U, samples):
    """max over samples of || e(U x) - (Lambda U) e(x) (Lambda U)* ||."""
    basis = ExteriorBasis(field.n)
    W = exterior_power_unitary(basis, U)
    worst = 0.0
    for x in samples:
        x = np.asarray(x, dtype=float)
        lhs = field(_rotate_point(x, U))
        rhs = W @ field(x) @ W.conj().T
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def export_field_csv(field, points, path):
    """Write field samples to CSV: coordinates followed by re/im of entries."""
    points = [np.asarray(p, dtype=float) for p in points]
    dim = field(points[0]).shape[0]
    header = [f"x{i}" for i in range(len(points[0]))]
    for r in range(dim):
        for c in range(dim):
            header += [f"re_{r}{c}", f"im_{r}{c}"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for p in points:
            mat = field(p)
            row = list(map(float, p))
            for r in range(dim):
                for c in range(dim):
                    row += [mat[r, c].real, mat[r, c].imag]
            writer.writerow(row)
