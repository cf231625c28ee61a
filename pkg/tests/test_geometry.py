import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monopole_lab.errors import DegeneracyError, NumericsError
from monopole_lab.geometry import (
    HamiltonianFamily,
    dirac_monopole_geometry,
    dirac_qgt_numeric,
    metric_analytic,
    metric_grid_perturbation,
    qgt_finite_difference,
    qgt_perturbation,
    signed_curvature_grid,
    tensor_curvature,
)
from monopole_lab.qudit import HyperPoint

angles = st.floats(0.05, np.pi - 0.05)
full_circle = st.floats(0.0, 2 * np.pi)
FAM = HamiltonianFamily()


@given(angles, angles, full_circle)
@settings(max_examples=60)
def test_perturbation_matches_closed_form(t1, t2, phi):
    p = HyperPoint(1.0, t1, t2, phi)
    g_closed = metric_analytic(p).metric
    g_pert = qgt_perturbation(FAM, p).metric
    assert np.max(np.abs(g_closed - g_pert)) < 1e-10


@given(angles, angles, full_circle)
@settings(max_examples=40)
def test_metric_symmetric_psd_berry_antisymmetric(t1, t2, phi):
    gt = qgt_perturbation(FAM, HyperPoint(1.0, t1, t2, phi))
    g, f = gt.metric, gt.berry
    assert np.allclose(g, g.T, atol=1e-14)
    assert np.allclose(f, -f.T, atol=1e-14)
    assert np.min(np.linalg.eigvalsh(g)) > -1e-12


@given(angles, angles)
@settings(max_examples=40)
def test_curvature_identity(t1, t2):
    g = metric_analytic(HyperPoint(1.0, t1, t2, 0.0)).metric
    h = tensor_curvature(g)
    assert abs(h - np.sin(t1) ** 2 * np.sin(t2)) < 1e-10


def test_finite_difference_accuracy_and_order():
    p = HyperPoint(1.0, 0.7, 1.1, 2.3)
    g_ref = metric_analytic(p).metric
    err = {s: np.max(np.abs(qgt_finite_difference(FAM, p, s).metric - g_ref))
           for s in (4e-3, 2e-3, 1e-3)}
    assert err[1e-3] < 1e-5
    # second-order convergence: quartering the error when halving the step
    assert err[4e-3] / err[2e-3] > 2.5
    assert err[2e-3] / err[1e-3] > 2.5


def test_finite_difference_step_validation():
    p = HyperPoint(1.0, 0.7, 1.1, 0.0)
    with pytest.raises(ValueError):
        qgt_finite_difference(FAM, p, 0.0)
    with pytest.raises(ValueError):
        qgt_finite_difference(FAM, p, 0.5)


def test_degenerate_point_raises():
    fam = HamiltonianFamily(lambda_offset=-1.0)
    with pytest.raises(DegeneracyError):
        qgt_perturbation(fam, HyperPoint(1.0, 0.0, 0.5, 0.0))


def test_tensor_curvature_clamp_and_error():
    assert tensor_curvature(np.diag([1e-14, 1e-14, -1e-14])) == 0.0
    with pytest.raises(NumericsError):
        tensor_curvature(np.diag([1.0, 1.0, -1.0]))


def test_signed_curvature_orientation():
    t1 = np.linspace(0.2, np.pi - 0.2, 9)
    t2 = np.linspace(0.2, np.pi - 0.2, 9)
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    ideal = (np.sin(T1) ** 2 * np.sin(T2)).ravel()
    plus = signed_curvature_grid(T1.ravel(), T2.ravel())
    minus = signed_curvature_grid(T1.ravel(), T2.ravel(), charge=-1)
    assert np.max(np.abs(plus - ideal)) < 1e-10
    assert np.max(np.abs(minus + ideal)) < 1e-10


def test_signed_curvature_odd_permutation_flips_sign():
    t1, t2 = np.array([0.8]), np.array([1.3])
    base = signed_curvature_grid(t1, t2)
    swapped = signed_curvature_grid(t1, t2, coordinate_order=(1, 0, 2))
    cycled = signed_curvature_grid(t1, t2, coordinate_order=(1, 2, 0))
    assert swapped[0] == pytest.approx(-base[0], abs=1e-12)
    assert cycled[0] == pytest.approx(base[0], abs=1e-12)


def test_curvature_vanishes_at_chart_poles():
    vals = signed_curvature_grid(np.array([0.0, np.pi]), np.array([0.5, 0.5]))
    assert np.allclose(vals, 0.0)


def test_metric_grid_matches_pointwise():
    t1 = np.array([0.5, 1.4, 2.2])
    t2 = np.array([1.0, 0.4, 2.8])
    g, sign = metric_grid_perturbation(t1, t2)
    assert np.all(sign == 1.0)
    for i in range(3):
        ref = metric_analytic(HyperPoint(1.0, t1[i], t2[i], 0.0)).metric
        assert np.max(np.abs(g[i] - ref)) < 1e-10


def test_dirac_geometry_closed_form_vs_numeric():
    th = np.linspace(0.1, np.pi - 0.1, 11)
    chi = dirac_qgt_numeric(th, np.zeros_like(th))
    g = chi.real
    f = -2.0 * chi.imag
    assert np.max(np.abs(g[:, 0, 0] - 0.25)) < 1e-12
    assert np.max(np.abs(g[:, 1, 1] - np.sin(th) ** 2 / 4)) < 1e-12
    assert np.max(np.abs(f[:, 0, 1] - np.sin(th) / 2)) < 1e-12
    ref = dirac_monopole_geometry(th[3])
    assert np.allclose(ref.g, g[3], atol=1e-12)
    assert ref.f_theta_phi == pytest.approx(f[3, 0, 1], abs=1e-12)
