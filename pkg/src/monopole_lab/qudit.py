"""Spin-1 (qutrit) Hamiltonians and exact eigensystems.

All Hamiltonians are dimensionless: energies are measured in units of the
total Rabi frequency Omega_0 (hbar = 1).  Physical units enter only through
the quench simulator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError

HERMITICITY_TOL = 1e-12

_GELL_MANN = {
    1: np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
    2: np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
    6: np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex),
    7: np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex),
}


def gell_mann(index: int) -> np.ndarray:
    """Return the Gell-Mann matrix lambda_index for index in {1, 2, 6, 7}.

    These four span the couplings of the three-band Weyl-like model; the
    model uses the complex conjugate of lambda_7 for its fourth component.
    """
    try:
        return _GELL_MANN[index].copy()
    except KeyError:
        raise ValueError(f"unsupported Gell-Mann index {index}; "
                         "supported: 1, 2, 6, 7") from None


@dataclass(frozen=True)
class HyperPoint:
    """A point of the 4D parameter space in hyperspherical coordinates.

    The Cartesian image is
        qx = r cos(theta1) + lambda_offset
        qy = r sin(theta1) cos(theta2)
        qz = r sin(theta1) sin(theta2) cos(phi)
        qw = r sin(theta1) sin(theta2) sin(phi)
    where lambda_offset is the tunable offset added to the first coupling.
    """

    r: float = 1.0
    theta1: float = 0.0
    theta2: float = 0.0
    phi: float = 0.0
    lambda_offset: float = 0.0

    def to_cartesian(self) -> np.ndarray:
        s1, c1 = np.sin(self.theta1), np.cos(self.theta1)
        s2, c2 = np.sin(self.theta2), np.cos(self.theta2)
        return np.array([
            self.r * c1 + self.lambda_offset,
            self.r * s1 * c2,
            self.r * s1 * s2 * np.cos(self.phi),
            self.r * s1 * s2 * np.sin(self.phi),
        ])

    @staticmethod
    def from_cartesian(q, lambda_offset: float = 0.0) -> "HyperPoint":
        """Inverse of ``to_cartesian`` for the lambda_offset = 0 chart.

        phi is undefined when sin(theta1) sin(theta2) = 0 and theta2 is
        undefined when sin(theta1) = 0; in those cases 0.0 is returned for
        the undefined angle.
        """
        qx, qy, qz, qw = np.asarray(q, dtype=float) - np.array(
            [lambda_offset, 0.0, 0.0, 0.0])
        r = float(np.sqrt(qx * qx + qy * qy + qz * qz + qw * qw))
        if r == 0.0:
            return HyperPoint(0.0, 0.0, 0.0, 0.0, lambda_offset)
        theta1 = float(np.arccos(np.clip(qx / r, -1.0, 1.0)))
        rho1 = np.sqrt(qy * qy + qz * qz + qw * qw)
        theta2 = float(np.arccos(np.clip(qy / rho1, -1.0, 1.0))) if rho1 > 0 else 0.0
        phi = float(np.arctan2(qw, qz) % (2 * np.pi)) if qz * qz + qw * qw > 0 else 0.0
        return HyperPoint(r, theta1, theta2, phi, lambda_offset)


@dataclass(frozen=True)
class BlochPoint:
    """Lattice momentum (kx, ky, kz, kw) plus the band-tuning offset."""

    kx: float = 0.0
    ky: float = 0.0
    kz: float = 0.0
    kw: float = 0.0
    lambda_offset: float = 0.0


def coupling_matrix(q) -> np.ndarray:
    """q . (lambda_1, lambda_2, lambda_6, lambda_7*) for a 4-vector q."""
    qx, qy, qz, qw = q
    return np.array([
        [0.0, qx - 1j * qy, 0.0],
        [qx + 1j * qy, 0.0, qz + 1j * qw],
        [0.0, qz - 1j * qw, 0.0],
    ])


def build_h4d(point: HyperPoint, charge: int = +1) -> np.ndarray:
    """Three-band Weyl-like Hamiltonian q . lambda at a hyperspherical point.

    charge=-1 flips the sign of the first coupling (qx -> -qx), producing the
    anti-monopole family.
    """
    q = point.to_cartesian()
    if charge == -1:
        q = q * np.array([-1.0, 1.0, 1.0, 1.0])
    elif charge != +1:
        raise ValueError("charge must be +1 or -1")
    return coupling_matrix(q)


def build_hexp(omega1x: float, omega1y: float, omega2x: float,
               omega2y: float) -> np.ndarray:
    """Microwave-driven qutrit Hamiltonian (1/2) Omega . lambda.

    With (omega1x, ..., omega2y) = Omega_0 * (qx, qy, qz, qw) this equals
    (Omega_0 / 2) * build_h4d for the same q.
    """
    return 0.5 * coupling_matrix([omega1x, omega1y, omega2x, omega2y])


def build_bloch(point: BlochPoint) -> np.ndarray:
    """Three-band lattice Bloch Hamiltonian, in units of Omega_0 (so the
    matrix carries the same 1/2 prefactor as ``build_hexp``).

    The first coupling is d_x = 3 + lambda_offset - sum_u cos(k_u); the
    remaining three are sin(ky), sin(kz), sin(kw).
    """
    k = np.array([point.kx, point.ky, point.kz, point.kw])
    d_x = 3.0 + point.lambda_offset - np.sum(np.cos(k))
    return 0.5 * coupling_matrix([d_x, np.sin(point.ky), np.sin(point.kz),
                                  np.sin(point.kw)])


@dataclass(frozen=True)
class Eigensystem3:
    """Sorted, gauge-fixed eigensystem of a 3x3 Hermitian matrix.

    energies are ascending; states[:, i] belongs to energies[i].  The gauge
    makes the largest-magnitude component of each vector real and positive
    (ties broken by the lowest index).
    """

    energies: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)

    @property
    def ground(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def gap(self) -> float:
        """Energy distance from the ground state to the nearest other level."""
        return float(self.energies[1] - self.energies[0])


def fix_gauge(vec: np.ndarray) -> np.ndarray:
    """Rotate a state's global phase so its largest-magnitude component is
    real and positive; ties broken by the lowest index."""
    mags = np.abs(vec)
    idx = int(np.argmax(mags > mags.max() - 1e-14))
    phase = vec[idx] / mags[idx] if mags[idx] > 0 else 1.0
    return vec * np.conj(phase)


def _lex_key(vec: np.ndarray):
    return tuple(np.round(np.concatenate([vec.real, vec.imag]), 12))


def eigensystem(h: np.ndarray, hermiticity_tol: float = HERMITICITY_TOL
                ) -> Eigensystem3:
    """Exact eigensystem of a 3x3 Hermitian matrix, deterministic across
    calls.  Degenerate levels (|dE| < 1e-12) are ordered lexicographically
    by their gauge-fixed eigenvectors."""
    h = np.asarray(h, dtype=complex)
    if np.max(np.abs(h - h.conj().T)) > hermiticity_tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    energies, states = np.linalg.eigh(h)
    states = np.column_stack([fix_gauge(states[:, i]) for i in range(3)])
    # stable ordering inside (near-)degenerate groups
    i = 0
    while i < 3:
        j = i + 1
        while j < 3 and energies[j] - energies[i] < 1e-12:
            j += 1
        if j - i > 1:
            order = sorted(range(i, j), key=lambda c: _lex_key(states[:, c]))
            states[:, i:j] = states[:, order]
            energies[i:j] = energies[order]
        i = j
    return Eigensystem3(energies=energies, states=states)


def ground_state_analytic(point: HyperPoint) -> np.ndarray:
    """Closed-form ground state of ``build_h4d`` (lambda_offset = 0, r > 0):

        (1/sqrt 2) * (cos t1 - i cos t2 sin t1, -1, sin t1 sin t2 e^{-i phi})
    """
    if point.lambda_offset != 0.0:
        raise ValueError("closed form only valid for lambda_offset = 0")
    if point.r <= 0.0:
        raise DegeneracyError("ground state undefined at the degenerate point r = 0")
    t1, t2, phi = point.theta1, point.theta2, point.phi
    return np.array([
        np.cos(t1) - 1j * np.cos(t2) * np.sin(t1),
        -1.0,
        np.sin(t1) * np.sin(t2) * np.exp(-1j * phi),
    ]) / np.sqrt(2.0)


@dataclass(frozen=True)
class DressedStates:
    """Closed-form eigenstates of the driven qutrit, labelled by energy
    (+Omega/2, 0, -Omega/2) about the shifted zero point.

    Components are listed in the spectroscopy (bare-level) order, which is
    the reverse of the matrix basis of ``build_hexp``; the first component
    is the amplitude on the probed bare level.
    """

    psi_plus: np.ndarray
    psi_zero: np.ndarray
    psi_minus: np.ndarray
    energies: tuple  # (+Omega/2, 0, -Omega/2)


def dressed_states(omega1x: float, omega1y: float, omega2x: float,
                   omega2y: float) -> DressedStates:
    """Dressed states of ``build_hexp`` for a nonzero drive."""
    om0 = float(np.sqrt(omega1x ** 2 + omega1y ** 2
                        + omega2x ** 2 + omega2y ** 2))
    if om0 == 0.0:
        raise DegeneracyError("dressed states undefined for an all-zero drive")
    o1 = (omega1x - 1j * omega1y) / om0
    o2 = (omega2x - 1j * omega2y) / om0
    psi_plus = np.array([o2, 1.0, o1]) / np.sqrt(2.0)
    psi_minus = np.array([o2, -1.0, o1]) / np.sqrt(2.0)
    psi_zero = np.array([-np.conj(o1), 0.0, np.conj(o2)])
    return DressedStates(psi_plus=psi_plus, psi_zero=psi_zero,
                         psi_minus=psi_minus,
                         energies=(om0 / 2.0, 0.0, -om0 / 2.0))
