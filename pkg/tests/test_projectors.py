"""Tests for projection fields, stereographic pullback and Chern numbers."""

import numpy as np
import pytest

from moyalkit.projectors import (
    POINT_AT_INFINITY,
    ChernIntegrationError,
    ProjectionField,
    _curvature_form,
    bott_projector,
    chern_number,
    conjugated_field,
    equivariance_check,
    export_field_csv,
    sphere_projector,
    stereographic,
)

RNG = np.random.default_rng(7)


@pytest.mark.parametrize("n", [1, 2])
def test_bott_pointwise_projection(n):
    e = bott_projector(n)
    for _ in range(100):
        z = RNG.normal(size=2 * n) * 2
        m = e(z)
        assert np.max(np.abs(m @ m - m)) < 1e-12
        assert np.max(np.abs(m - m.conj().T)) < 1e-12
    assert e.defects == []


def test_bott_rank_and_limit():
    e = bott_projector(1)
    # rank 1 everywhere, converging to the odd-degree projection at infinity
    assert np.trace(e(np.array([0.3, -1.2]))).real == pytest.approx(1.0)
    assert np.allclose(e(POINT_AT_INFINITY), np.diag([0.0, 1.0]))
    far = e(np.array([80.0, 0.0]))
    assert np.max(np.abs(far - np.diag([0.0, 1.0]))) < 0.02


def test_defect_recording():
    bad = ProjectionField(
        n=1, evaluator=lambda p: np.diag([0.5, 0.5]), limit=np.eye(2)
    )
    bad(np.array([1.0, 0.0]))
    kinds = [d[0] for d in bad.defects]
    assert "idempotency" in kinds


def test_stereographic_round_trip():
    for _ in range(50):
        p = RNG.normal(size=3)
        p /= np.linalg.norm(p)
        if p[2] < -0.99:
            continue
        z = stereographic(p)
        # invert: t = (1 - |z|^2)/(1 + |z|^2), x = 2z/(1 + |z|^2)
        r2 = float(z @ z)
        back = np.append(2 * z / (1 + r2), (1 - r2) / (1 + r2))
        assert np.allclose(back, p, atol=1e-12)
    assert stereographic(np.array([0.0, 0.0, -1.0])) == POINT_AT_INFINITY
    with pytest.raises(ValueError):
        stereographic(np.array([0.0, 0.0, 0.5]))


def test_sphere_pullback_identity():
    eb, es = bott_projector(1), sphere_projector(1)
    for _ in range(200):
        p = RNG.normal(size=3)
        p /= np.linalg.norm(p)
        z = stereographic(p)
        assert np.max(np.abs(eb(z) - es(p))) < 1e-12


def test_curvature_closed_form_oracle():
    # for the rank-1 Bott projector the curvature density is 2i/(1+r^2)^2
    e = bott_projector(1)
    ex, ey = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    for r in (0.0, 0.7, 1.9, 3.5):
        p = np.array([r * np.cos(0.3), r * np.sin(0.3)])
        val = _curvature_form(e, p, ex, ey, 1e-5)
        assert val == pytest.approx(2j / (1 + r * r) ** 2, abs=1e-6)


def test_chern_numbers():
    c_plane = chern_number(bott_projector(1), grid_size=192)
    assert round(c_plane) == 1
    assert abs(c_plane - 1) < 1e-3
    c_sphere = chern_number(sphere_projector(1), grid_size=96)
    assert round(c_sphere) == round(c_plane)


def test_chern_invariance_and_coarse_grid():
    U = np.array([[np.exp(0.9j)]])
    c = chern_number(conjugated_field(bott_projector(1), U), grid_size=192)
    assert abs(c - 1) < 1e-3
    with pytest.raises(ChernIntegrationError):
        chern_number(bott_projector(1), grid_size=4, n_theta=3)


def test_equivariance():
    e = bott_projector(2)
    U = np.diag(np.exp(1j * RNG.uniform(0, 2 * np.pi, size=2)))
    samples = [RNG.normal(size=4) for _ in range(10)]
    assert equivariance_check(e, U, samples) < 1e-10
    # a non-equivariant comparison unitary must show a visible residual
    V = np.linalg.qr(RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2)))[0]
    shifted = ProjectionField(
        n=2,
        evaluator=lambda p: e.evaluator(p + 0.5),
        limit=e.limit,
    )
    assert equivariance_check(shifted, V, samples) > 1e-3


def test_export_csv(tmp_path):
    path = tmp_path / "field.csv"
    pts = [np.array([0.0, 0.0]), np.array([1.0, 2.0])]
    export_field_csv(bott_projector(1), pts, str(path))
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 3
    assert lines[0].startswith("x0,x1,re_00,im_00")
