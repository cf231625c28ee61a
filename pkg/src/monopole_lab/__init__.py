"""Numerical laboratory for a three-band 4D Weyl-like model: spin-1
Hamiltonians, quantum geometry, 3-form topological charges, lattice band
spectra, and sudden-quench measurement protocols.
"""

from .bands import BandCut, BrightnessRecord, band_cut, brightness, find_weyl_points
from .errors import ConfigError, DegeneracyError, NumericsError
from .geometry import (
    DiracGeometry,
    GeometricTensor,
    HamiltonianFamily,
    dirac_monopole_geometry,
    metric_analytic,
    qgt_finite_difference,
    qgt_perturbation,
    signed_curvature_grid,
    tensor_curvature,
)
from .invariants import ChargeResult, QuadratureGrid, chern1, dd_invariant, lambda_sweep
from .qudit import (
    BlochPoint,
    DressedStates,
    Eigensystem3,
    HyperPoint,
    build_bloch,
    build_h4d,
    build_hexp,
    dressed_states,
    eigensystem,
    gell_mann,
    ground_state_analytic,
)
from .quench import (
    FrameRotation,
    QuenchOutcome,
    QuenchSchedule,
    estimate_metric_diag,
    estimate_metric_offdiag,
    evolve,
    frame_rotation,
    quench_metric_field,
    quench_metric_grid,
    ramp_hamiltonian,
    transmon_2020,
)
from .sweep import SweepResult, export, __version__

__all__ = [name for name in dir() if not name.startswith("_")]
