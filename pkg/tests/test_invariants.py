import numpy as np
import pytest

from monopole_lab.errors import ConfigError
from monopole_lab.invariants import (
    ChargeResult,
    QuadratureGrid,
    chern1,
    dd_invariant,
    lambda_sweep,
)


def test_grid_validation():
    QuadratureGrid(60, 60, 16, "simpson")
    QuadratureGrid(7, 9, 3, "midpoint")
    with pytest.raises(ConfigError):
        QuadratureGrid(61, 60, 16, "simpson")
    with pytest.raises(ConfigError):
        QuadratureGrid(0, 60, 16, "midpoint")
    with pytest.raises(ConfigError):
        QuadratureGrid(60, 60, 16, "gauss")


def test_grid_axis_nodes():
    g = QuadratureGrid(4, 4, 4, "midpoint")
    nodes, w = g.axis("theta1")
    assert len(nodes) == 4 and np.isclose(np.sum(w), np.pi)
    g = QuadratureGrid(4, 4, 4, "simpson")
    nodes, w = g.axis("phi")
    assert len(nodes) == 5 and np.isclose(np.sum(w), 2 * np.pi)
    with pytest.raises(ConfigError):
        g.axis("r")


def test_chern1_midpoint():
    r = chern1(100, 100, rule="midpoint")
    assert abs(r.value - 1.0) < 1e-3


def test_chern1_simpson_tight():
    r = chern1(100, 100, rule="simpson")
    assert abs(r.value - 1.0) < 1e-6


def test_chern1_orientation_and_charge():
    assert chern1(60, 60, reverse_orientation=True).value == pytest.approx(-1, abs=1e-3)
    assert chern1(60, 60, charge=-1).value == pytest.approx(-1, abs=1e-3)


def test_dd_default_grid_quantized():
    r = dd_invariant(0.0)
    assert isinstance(r, ChargeResult)
    assert abs(r.value - 1.0) < 1e-3
    assert abs(dd_invariant(2.0).value) < 1e-3


def test_dd_anti_monopole_signed():
    assert dd_invariant(0.0, charge=-1).value == pytest.approx(-1.0, abs=1e-3)


def test_dd_quantization_pattern():
    for lam, want in [(0.0, 1), (0.5, 1), (-0.5, 1), (2.0, 0), (-2.0, 0),
                      (3.0, 0), (-3.0, 0)]:
        v = dd_invariant(lam, QuadratureGrid(80, 80)).value
        assert abs(v - want) < 1e-3, (lam, v)


def test_dd_grid_doubling_convergence():
    a = dd_invariant(0.0, QuadratureGrid(60, 60)).value
    b = dd_invariant(0.0, QuadratureGrid(120, 120)).value
    assert abs(a - b) < 1e-4


def test_dd_transition_point_intermediate():
    r = dd_invariant(1.0, QuadratureGrid(60, 60))
    assert 0.1 < r.value < 0.9
    assert "midpoint" in r.note


def test_dd_full_phi_integration_agrees():
    a = dd_invariant(0.0, QuadratureGrid(40, 40, 8), collapse_phi=False).value
    b = dd_invariant(0.0, QuadratureGrid(40, 40, 8), collapse_phi=True).value
    assert abs(a - b) < 1e-6


def test_dd_quench_requires_delta_q():
    with pytest.raises(ConfigError):
        dd_invariant(0.0, method="quench")
    with pytest.raises(ConfigError):
        dd_invariant(0.0, method="bogus")


def test_lambda_sweep_ordering_and_threads():
    lams = [-0.5, 0.0, 0.5, 2.0]
    grid = QuadratureGrid(40, 40)
    one = lambda_sweep(lams, grid=grid, threads=1)
    four = lambda_sweep(lams, grid=grid, threads=4)
    assert one.columns == ("lambda_offset", "q_dd")
    assert [r[0] for r in one.rows] == lams
    assert one.rows == four.rows
