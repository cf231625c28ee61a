"""Measurement-protocol simulation: linear parameter ramps, piecewise-exact
unitary evolution, excitation probabilities, metric estimation from
probabilities, and the frame rotation that pins the initial ground state to
a basis level.

Physical units enter only here: the drive amplitude omega0 (rad/s) and the
ramp time (s) combine into the dimensionless strength omega0 * ramp_time.
ramp_time = 0 is the ideal sudden quench.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigError, DegeneracyError
from .geometry import HamiltonianFamily, _matrices
from .qudit import HyperPoint, coupling_matrix, eigensystem
from .sweep import SweepResult

AXES = ("theta1", "theta2", "phi")
DEFAULT_OMEGA0 = 2.0 * np.pi * 5.0e6   # rad/s
CONVERGENCE_TOL = 1e-8
MAX_STEPS = 1 << 15


@dataclass(frozen=True)
class QuenchSchedule:
    """One quench run: which coordinates step, by how much, and how fast.

    ``axes`` is one or two distinct coordinate names; each named coordinate
    advances by the full delta_q over the ramp (raw coordinate increments,
    no metric normalization).
    """

    axes: tuple = ("theta1",)
    delta_q: float = np.pi / 1024.0
    ramp_time: float = 0.0
    n_steps: int = 256
    omega0: float = DEFAULT_OMEGA0

    def __post_init__(self):
        axes = tuple(self.axes) if not isinstance(self.axes, str) else (self.axes,)
        object.__setattr__(self, "axes", axes)
        if not 1 <= len(axes) <= 2 or len(set(axes)) != len(axes):
            raise ConfigError("axes must be one or two distinct coordinates")
        for a in axes:
            if a not in AXES:
                raise ConfigError(f"unknown axis {a!r}; choose from {AXES}")
        if self.delta_q <= 0:
            raise ConfigError("delta_q must be positive")
        if self.n_steps < 1:
            raise ConfigError("n_steps must be at least 1")
        if self.ramp_time < 0:
            raise ConfigError("ramp_time must be non-negative")

    @property
    def direction(self) -> np.ndarray:
        """Coordinate increment direction as a (theta1, theta2, phi) vector."""
        e = np.zeros(3)
        for a in self.axes:
            e[AXES.index(a)] = 1.0
        return e


def transmon_2020(axes=("theta1",), delta_q: float = np.pi / 8.0,
                  n_steps: int = 256) -> QuenchSchedule:
    """Preset with the published hardware timings: 9 ns ramps at a
    2 pi * 5 MHz drive (omega0 * T ~ 0.283 rad)."""
    return QuenchSchedule(axes=axes, delta_q=delta_q, ramp_time=9e-9,
                          n_steps=n_steps, omega0=DEFAULT_OMEGA0)


def _coords(point: HyperPoint) -> np.ndarray:
    return np.array([point.theta1, point.theta2, point.phi])


def _point_at(point: HyperPoint, coords) -> HyperPoint:
    return replace(point, theta1=float(coords[0]), theta2=float(coords[1]),
                   phi=float(coords[2]))


def ramp_hamiltonian(start: HyperPoint, schedule: QuenchSchedule,
                     t: float, charge: int = +1) -> np.ndarray:
    """Dimensionless Hamiltonian q(t) . lambda along the linear ramp
    x(t) = x(0) + (t/T) * delta_q * e."""
    T = schedule.ramp_time
    if not 0.0 <= t <= max(T, 0.0):
        raise ValueError(f"time {t} outside the ramp interval [0, {T}]")
    frac = t / T if T > 0 else 0.0
    x = _coords(start) + frac * schedule.delta_q * schedule.direction
    fam = HamiltonianFamily(lambda_offset=start.lambda_offset, charge=charge,
                            r=start.r)
    return coupling_matrix(fam.cartesian(*x)[0])


@dataclass(frozen=True)
class QuenchOutcome:
    p_excited: float
    final_state: np.ndarray
    schedule: QuenchSchedule
    note: str = ""


def _propagate(h_dimless_at, psi, T, n, omega0, frame=None):
    """Piecewise-constant evolution: exact exponential of the midpoint
    Hamiltonian on each of n equal slices."""
    dt = T / n
    for k in range(n):
        h = 0.5 * omega0 * h_dimless_at((k + 0.5) * dt)
        if frame is not None:
            h = frame @ h @ frame.conj().T
        e, v = np.linalg.eigh(h)
        psi = (v * np.exp(-1j * e * dt)) @ (v.conj().T @ psi)
    return psi


def evolve(start: HyperPoint, schedule: QuenchSchedule, charge: int = +1,
           frame: Optional[np.ndarray] = None) -> QuenchOutcome:
    """Run one quench from the ground state at ``start``.

    ramp_time = 0 bypasses evolution entirely (identity propagator);
    otherwise the integrator doubles n_steps until p_excited is stable to
    1e-8.  ``frame`` conjugates the whole protocol by a fixed unitary; all
    probabilities are invariant under it.
    """
    x0 = _coords(start)
    x1 = x0 + schedule.delta_q * schedule.direction
    es0 = eigensystem(ramp_hamiltonian(start, schedule, 0.0, charge))
    if es0.gap < 1e-12:
        raise DegeneracyError("degenerate initial point")
    fam = HamiltonianFamily(lambda_offset=start.lambda_offset, charge=charge,
                            r=start.r)
    u_end = eigensystem(coupling_matrix(fam.cartesian(*x1)[0])).ground
    psi0 = es0.ground
    if frame is not None:
        psi0 = frame @ psi0
        u_end = frame @ u_end

    note = ""
    if schedule.ramp_time == 0.0:
        psi = psi0
    else:
        def h_at(t):
            frac = t / schedule.ramp_time
            x = x0 + frac * schedule.delta_q * schedule.direction
            return coupling_matrix(fam.cartesian(*x)[0])

        n = schedule.n_steps
        psi = _propagate(h_at, psi0, schedule.ramp_time, n,
                         schedule.omega0, frame)
        while True:
            psi2 = _propagate(h_at, psi0, schedule.ramp_time, 2 * n,
                              schedule.omega0, frame)
            p_a = 1.0 - np.abs(np.vdot(u_end, psi)) ** 2
            p_b = 1.0 - np.abs(np.vdot(u_end, psi2)) ** 2
            if abs(p_a - p_b) < CONVERGENCE_TOL:
                psi = psi2
                break
            n *= 2
            psi = psi2
            if n >= MAX_STEPS:
                note = (f"integrator not self-consistent to {CONVERGENCE_TOL}"
                        f" at n_steps={n}")
                break
    p = 1.0 - np.abs(np.vdot(u_end, psi)) ** 2
    return QuenchOutcome(p_excited=float(min(max(p, 0.0), 1.0)),
                         final_state=psi, schedule=schedule, note=note)


def estimate_metric_diag(point: HyperPoint, axis: str,
                         schedule: QuenchSchedule, charge: int = +1) -> float:
    """g_{mu mu} ~ p_excited / delta_q^2 from a single-axis quench."""
    sched = replace(schedule, axes=(axis,))
    out = evolve(point, sched, charge=charge)
    return out.p_excited / sched.delta_q ** 2


def estimate_metric_offdiag(point: HyperPoint, axes,
                            schedule: QuenchSchedule, charge: int = +1) -> float:
    """g_{mu nu} ~ (P_{mu nu} - P_{mu mu} - P_{nu nu}) / (2 delta_q^2) from
    one joint and two single-axis quenches with identical settings."""
    mu, nu = axes
    if mu == nu:
        raise ConfigError("off-diagonal estimator needs two distinct axes")
    p_joint = evolve(point, replace(schedule, axes=(mu, nu)), charge=charge).p_excited
    p_mu = evolve(point, replace(schedule, axes=(mu,)), charge=charge).p_excited
    p_nu = evolve(point, replace(schedule, axes=(nu,)), charge=charge).p_excited
    return (p_joint - p_mu - p_nu) / (2.0 * schedule.delta_q ** 2)


@dataclass(frozen=True)
class FrameRotation:
    """Composite unitary built from two-level y/z rotations that maps the
    ground state at the anchor point to the basis state indexed 0.

    Angles use principal arctangent branches (quadrant-corrected); the z
    angles are half the accumulated relative phases because each z rotation
    applies e^{-i beta} / e^{+i beta} to its two levels.
    """

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    matrix: np.ndarray

    def __post_init__(self):
        u = self.matrix
        if np.max(np.abs(u.conj().T @ u - np.eye(3))) > 1e-12:
            raise ValueError("frame rotation is not unitary")


def _ry(angle, i, j):
    m = np.eye(3, dtype=complex)
    c, s = np.cos(angle), np.sin(angle)
    m[i, i] = c
    m[j, j] = c
    m[i, j] = -s
    m[j, i] = s
    return m


def _rz(angle, i, j):
    m = np.eye(3, dtype=complex)
    m[i, i] = np.exp(-1j * angle)
    m[j, j] = np.exp(1j * angle)
    return m


def frame_rotation(point: HyperPoint) -> FrameRotation:
    """U_R = Ry01(alpha2) Rz01(beta2) Ry02(alpha1) Rz02(beta1).

    Constructed from the ground-state components (a, -1, b)/sqrt(2):
    beta1 aligns the phases of levels 0 and 2, alpha1 folds level 2 into
    level 0, beta2 aligns levels 0 and 1, and alpha2 = -pi/4 folds level 1
    away, leaving the basis state indexed 0 up to a global phase.
    """
    if point.lambda_offset != 0.0:
        raise ConfigError("frame rotation anchors to the unit-sphere family")
    t1, t2, phi = point.theta1, point.theta2, point.phi
    a = np.cos(t1) - 1j * np.sin(t1) * np.cos(t2)
    b = np.sin(t1) * np.sin(t2) * np.exp(-1j * phi)
    chi_a, chi_b = np.angle(a), np.angle(b)
    beta1 = 0.5 * (chi_a - chi_b)
    alpha1 = np.arctan2(-np.abs(b), np.abs(a))
    chi = 0.5 * (chi_a + chi_b)
    beta2 = 0.5 * (chi - np.pi)
    alpha2 = -np.pi / 4.0
    u = (_ry(alpha2, 0, 1) @ _rz(beta2, 0, 1)
         @ _ry(alpha1, 0, 2) @ _rz(beta1, 0, 2))
    return FrameRotation(alpha1=float(alpha1), alpha2=float(alpha2),
                         beta1=float(beta1), beta2=float(beta2), matrix=u)


def _ground_batch(t1, t2, phi, lambda_offset, charge):
    fam = HamiltonianFamily(lambda_offset=lambda_offset, charge=charge)
    h = _matrices(fam.cartesian(t1, t2, phi))
    _, v = np.linalg.eigh(h)
    return v[..., 0]


def quench_metric_grid(t1, t2, delta_q: float, lambda_offset: float = 0.0,
                       charge: int = +1, phi=0.0,
                       schedule: Optional[QuenchSchedule] = None) -> np.ndarray:
    """Sudden-quench metric estimates on a broadcast grid of angles,
    shape (..., 3, 3).

    Probabilities come from exact eigenvector overlaps (the sudden limit);
    pass a schedule with ramp_time > 0 to use the time integrator instead
    (much slower, evaluated point by point).
    """
    t1, t2, phi = np.broadcast_arrays(*np.atleast_1d(t1, t2, phi))
    if schedule is not None and schedule.ramp_time > 0.0:
        out = np.zeros(t1.shape + (3, 3))
        it = np.nditer(t1, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            pt = HyperPoint(1.0, float(t1[idx]), float(t2[idx]),
                            float(phi[idx]), lambda_offset)
            sched = replace(schedule, delta_q=delta_q)
            for m, am in enumerate(AXES):
                out[idx][m, m] = estimate_metric_diag(pt, am, sched, charge)
                for n in range(m + 1, 3):
                    val = estimate_metric_offdiag(pt, (am, AXES[n]), sched, charge)
                    out[idx][m, n] = out[idx][n, m] = val
        return out

    u0 = _ground_batch(t1, t2, phi, lambda_offset, charge)

    def prob(d1, d2, dp):
        u = _ground_batch(t1 + d1, t2 + d2, phi + dp, lambda_offset, charge)
        return 1.0 - np.abs(np.einsum("...i,...i->...", u.conj(), u0)) ** 2

    dq = delta_q
    p_single = [prob(dq, 0, 0), prob(0, dq, 0), prob(0, 0, dq)]
    g = np.zeros(t1.shape + (3, 3))
    for m in range(3):
        g[..., m, m] = p_single[m] / dq ** 2
    offs = {(0, 1): prob(dq, dq, 0), (0, 2): prob(dq, 0, dq),
            (1, 2): prob(0, dq, dq)}
    for (m, n), p_mn in offs.items():
        val = (p_mn - p_single[m] - p_single[n]) / (2.0 * dq ** 2)
        g[..., m, n] = g[..., n, m] = val
    return g


def quench_metric_field(grid, schedule: QuenchSchedule,
                        lambda_offset: float = 0.0,
                        charge: int = +1) -> SweepResult:
    """Tabulated metric estimates over a (theta1, theta2) grid at phi = 0."""
    t1_nodes, _ = grid.axis("theta1")
    t2_nodes, _ = grid.axis("theta2")
    T1, T2 = np.meshgrid(t1_nodes, t2_nodes, indexing="ij")
    g = quench_metric_grid(T1.ravel(), T2.ravel(), delta_q=schedule.delta_q,
                           lambda_offset=lambda_offset, charge=charge,
                           schedule=schedule)
    rows = [
        (T1.ravel()[i], T2.ravel()[i],
         g[i, 0, 0], g[i, 1, 1], g[i, 2, 2],
         g[i, 0, 1], g[i, 0, 2], g[i, 1, 2])
        for i in range(g.shape[0])
    ]
    meta = {"delta_q": schedule.delta_q, "ramp_time": schedule.ramp_time,
            "lambda_offset": lambda_offset}
    return SweepResult(
        columns=("theta1", "theta2", "g_t1t1", "g_t2t2", "g_pp",
                 "g_t1t2", "g_t1p", "g_t2p"),
        rows=rows, metadata=meta)
