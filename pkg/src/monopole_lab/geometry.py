"""Quantum geometric tensor, quantum metric and generalized curvature.

Coordinates are the three hypersphere angles (theta1, theta2, phi).  The
geometric tensor chi of the ground band splits into the metric g = Re(chi)
and the Berry 2-form F_{mu nu} = -2 Im(chi_{mu nu}).  The 3-form curvature
of the three-band model equals 4 sqrt(det g) up to an orientation sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, NumericsError
from .qudit import HyperPoint, coupling_matrix, eigensystem

COORDS = ("theta1", "theta2", "phi")
GAP_TOL = 1e-8
DET_CLAMP = 1e-12

# epsilon_{mnl} as a dense array
_LEVI = np.zeros((3, 3, 3))
for _p, _s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
               ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
    _LEVI[_p] = _s


@dataclass(frozen=True)
class GeometricTensor:
    """Ground-band geometric tensor over (theta1, theta2, phi)."""

    chi: np.ndarray  # (3, 3) complex

    @property
    def metric(self) -> np.ndarray:
        return self.chi.real.copy()

    @property
    def berry(self) -> np.ndarray:
        return -2.0 * self.chi.imag


@dataclass(frozen=True)
class HamiltonianFamily:
    """A qutrit Hamiltonian parameterized by the hypersphere angles, with
    analytic coordinate derivatives.

    ``charge=-1`` flips the sign of the first Cartesian coupling, giving the
    family with opposite topological charge.
    """

    lambda_offset: float = 0.0
    charge: int = +1
    r: float = 1.0

    def cartesian(self, t1, t2, phi):
        t1, t2, phi = np.broadcast_arrays(*np.atleast_1d(t1, t2, phi))
        s1, c1 = np.sin(t1), np.cos(t1)
        s2, c2 = np.sin(t2), np.cos(t2)
        q = np.stack([
            self.r * c1 + self.lambda_offset,
            self.r * s1 * c2,
            self.r * s1 * s2 * np.cos(phi),
            self.r * s1 * s2 * np.sin(phi),
        ], axis=-1)
        if self.charge == -1:
            q[..., 0] *= -1.0
        return q

    def gradients(self, t1, t2, phi):
        """d q / d(theta1, theta2, phi), shape (..., 3, 4)."""
        t1, t2, phi = np.broadcast_arrays(*np.atleast_1d(t1, t2, phi))
        s1, c1 = np.sin(t1), np.cos(t1)
        s2, c2 = np.sin(t2), np.cos(t2)
        sp, cp = np.sin(phi), np.cos(phi)
        z = np.zeros_like(t1)
        r = self.r
        dq = np.stack([
            np.stack([-r * s1, r * c1 * c2, r * c1 * s2 * cp, r * c1 * s2 * sp], axis=-1),
            np.stack([z, -r * s1 * s2, r * s1 * c2 * cp, r * s1 * c2 * sp], axis=-1),
            np.stack([z, z, -r * s1 * s2 * sp, r * s1 * s2 * cp], axis=-1),
        ], axis=-2)
        if self.charge == -1:
            dq[..., 0] *= -1.0
        return dq

    def matrix(self, point: HyperPoint) -> np.ndarray:
        q = self.cartesian(point.theta1, point.theta2, point.phi)[0]
        return coupling_matrix(q)


def _matrices(q):
    """coupling_matrix applied along the last axis of q, shape (..., 3, 3)."""
    shape = q.shape[:-1]
    h = np.zeros(shape + (3, 3), dtype=complex)
    qx, qy, qz, qw = (q[..., i] for i in range(4))
    h[..., 0, 1] = qx - 1j * qy
    h[..., 1, 0] = qx + 1j * qy
    h[..., 1, 2] = qz + 1j * qw
    h[..., 2, 1] = qz - 1j * qw
    return h


def _qgt_batch(family: HamiltonianFamily, t1, t2, phi, pole_tol=1e-9,
               coordinate_order=(0, 1, 2)):
    """Batched ground-band QGT plus the orientation sign of the 3-form.

    Returns (chi, sign, gap) with shapes (N, 3, 3), (N,), (N,).  Points with
    gap < pole_tol get chi = 0 and sign = 0 (the curvature integrand
    vanishes in the chart-pole limit).  ``coordinate_order`` permutes the
    coordinate axes; an odd permutation flips the 3-form orientation.
    """
    t1, t2, phi = np.broadcast_arrays(*np.atleast_1d(t1, t2, phi))
    q = family.cartesian(t1, t2, phi)
    dq = family.gradients(t1, t2, phi)[..., list(coordinate_order), :]
    h = _matrices(q)
    dh = _matrices(dq)                              # (..., 3coord, 3, 3)
    e, v = np.linalg.eigh(h)
    gap = e[..., 1] - e[..., 0]
    ok = gap > pole_tol

    u0, u1, u2 = v[..., 0], v[..., 1], v[..., 2]
    # <u_k| dH_m |u_0> / (E0 - Ek): first-order derivative couplings
    a = np.einsum("...i,...mij,...j->...m", u1.conj(), dh, u0)
    a /= (e[..., 0] - np.where(ok, e[..., 1], 1.0))[..., None]
    b = np.einsum("...i,...mij,...j->...m", u2.conj(), dh, u0)
    b /= (e[..., 0] - np.where(ok, e[..., 2], 1.0))[..., None]
    c = np.einsum("...i,...mij,...j->...m", u2.conj(), dh, u1)
    denom = e[..., 1] - np.where(e[..., 2] - e[..., 1] > pole_tol,
                                 e[..., 2], e[..., 1] - 1.0)
    c /= denom[..., None]

    chi = (np.einsum("...m,...n->...mn", a.conj(), a)
           + np.einsum("...m,...n->...mn", b.conj(), b))
    # orientation: the gauge-invariant chain through both excited bands;
    # -2 Re of its Levi-Civita contraction is the signed 3-form
    tri = -2.0 * np.real(
        np.einsum("mnl,...m,...n,...l->...", _LEVI, a.conj(), b, c.conj()))
    sign = np.sign(tri)
    chi = np.where(ok[..., None, None], chi, 0.0)
    sign = np.where(ok, sign, 0.0)
    return chi, sign, gap


def metric_analytic(point: HyperPoint) -> GeometricTensor:
    """Closed-form ground-band metric on the unit hypersphere (the Berry
    part is not provided here; use ``qgt_perturbation`` for it)."""
    if point.lambda_offset != 0.0:
        raise ValueError("closed-form metric requires lambda_offset = 0")
    t1, t2 = point.theta1, point.theta2
    s1, c1 = np.sin(t1), np.cos(t1)
    s2, c2 = np.sin(t2), np.cos(t2)
    g = np.zeros((3, 3))
    g[0, 0] = (3.0 - np.cos(2.0 * t2)) / 8.0
    g[1, 1] = 0.25 * s1 ** 2 * (2.0 * c2 ** 2 - (c1 ** 2 - 2.0) * s2 ** 2)
    g[2, 2] = -0.25 * s1 ** 2 * s2 ** 2 * (s1 ** 2 * s2 ** 2 - 2.0)
    g[0, 1] = g[1, 0] = 0.25 * c1 * c2 * s1 * s2
    g[0, 2] = g[2, 0] = -0.25 * c2 * s1 ** 2 * s2 ** 2
    g[1, 2] = g[2, 1] = 0.25 * c1 * s1 ** 3 * s2 ** 3
    return GeometricTensor(chi=g.astype(complex))


def qgt_perturbation(family: HamiltonianFamily, point: HyperPoint,
                     gap_tol: float = GAP_TOL) -> GeometricTensor:
    """Ground-band QGT from the sum-over-states formula with analytic
    coordinate derivatives of the Hamiltonian."""
    chi, _, gap = _qgt_batch(family, point.theta1, point.theta2, point.phi,
                             pole_tol=gap_tol)
    if gap[0] <= gap_tol:
        raise DegeneracyError(
            f"ground-state gap {gap[0]:.3e} below tolerance {gap_tol:.1e}")
    return GeometricTensor(chi=chi[0])


def qgt_finite_difference(family: HamiltonianFamily, point: HyperPoint,
                          step: float, gap_tol: float = GAP_TOL
                          ) -> GeometricTensor:
    """Metric part of the QGT from overlaps of neighbouring ground states.

    Diagonal entries use the central second difference of
    ds^2 = 1 - |<u(x)|u(x + step e)>|^2; off-diagonals use the polarization
    identity along e_mu + e_nu.  Gauge invariant by construction.
    """
    if not 0.0 < step <= 0.1:
        raise ValueError("step must be in (0, 0.1]")
    x0 = np.array([point.theta1, point.theta2, point.phi])

    def ground(x):
        es = eigensystem(coupling_matrix(family.cartesian(*x)[0]))
        if es.gap <= gap_tol:
            raise DegeneracyError("degenerate point in finite-difference stencil")
        return es.ground

    u0 = ground(x0)

    def ds2(dx):
        return 1.0 - np.abs(np.vdot(ground(x0 + dx), u0)) ** 2

    eye = np.eye(3)
    g = np.zeros((3, 3))
    for m in range(3):
        g[m, m] = (ds2(step * eye[m]) + ds2(-step * eye[m])) / (2.0 * step ** 2)
    for m in range(3):
        for n in range(m + 1, 3):
            d = 0.5 * (ds2(step * (eye[m] + eye[n]))
                       + ds2(-step * (eye[m] + eye[n])))
            g[m, n] = g[n, m] = (d / step ** 2 - g[m, m] - g[n, n]) / 2.0
    return GeometricTensor(chi=g.astype(complex))


def tensor_curvature(metric, det_clamp: float = DET_CLAMP) -> float:
    """Generalized 3-form curvature magnitude 4 sqrt(det g).

    Accepts a GeometricTensor or a 3x3 metric array.  Determinants in
    (-det_clamp, 0) are floating-point noise at chart poles and clamp to 0;
    materially negative determinants raise NumericsError.
    """
    g = metric.metric if isinstance(metric, GeometricTensor) else np.asarray(metric)
    det = float(np.linalg.det(g))
    if det < -det_clamp:
        raise NumericsError(f"materially negative metric determinant {det:.3e}")
    return 4.0 * np.sqrt(max(det, 0.0))


def signed_curvature_grid(t1, t2, lambda_offset: float = 0.0,
                          charge: int = +1, phi: float = 0.0,
                          pole_tol: float = 1e-9,
                          coordinate_order=(0, 1, 2)) -> np.ndarray:
    """Signed 3-form curvature on a broadcast grid of angles.

    Magnitude is 4 sqrt(det g) from the perturbation metric; the sign is the
    orientation of the derivative triple, read off the excited-band chain.
    Degenerate points (all at chart poles for this family) contribute 0.
    """
    fam = HamiltonianFamily(lambda_offset=lambda_offset, charge=charge)
    chi, sign, _ = _qgt_batch(fam, t1, t2, phi, pole_tol=pole_tol,
                              coordinate_order=coordinate_order)
    det = np.linalg.det(chi.real)
    return sign * 4.0 * np.sqrt(np.clip(det, 0.0, None))


def metric_grid_perturbation(t1, t2, lambda_offset: float = 0.0,
                             charge: int = +1, phi: float = 0.0):
    """Batched perturbation-path metric; returns (g, orientation_sign)."""
    fam = HamiltonianFamily(lambda_offset=lambda_offset, charge=charge)
    chi, sign, _ = _qgt_batch(fam, t1, t2, phi)
    return chi.real, sign


@dataclass(frozen=True)
class DiracGeometry:
    """Ground-band metric and Berry curvature of the spin-1/2 Weyl model
    on the 2-sphere: g = diag(1/4, sin^2(theta)/4), F = sin(theta)/2."""

    g: np.ndarray       # (2, 2)
    f_theta_phi: float


def dirac_monopole_geometry(theta: float, phi: float = 0.0) -> DiracGeometry:
    g = np.array([[0.25, 0.0], [0.0, 0.25 * np.sin(theta) ** 2]])
    return DiracGeometry(g=g, f_theta_phi=0.5 * np.sin(theta))


def dirac_qgt_numeric(theta, phi, charge: int = +1):
    """Batched ground-band QGT of H = q . sigma over (theta, phi).

    charge=-1 flips qx, the conjugate model with monopole charge -1.
    Returns chi with shape (..., 2, 2).
    """
    theta, phi = np.broadcast_arrays(*np.atleast_1d(theta, phi))
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    sgn = -1.0 if charge == -1 else 1.0
    z = np.zeros_like(theta)
    h = np.zeros(theta.shape + (2, 2), dtype=complex)

    def pauli_vec(qx, qy, qz):
        m = np.zeros(theta.shape + (2, 2), dtype=complex)
        m[..., 0, 0] = qz
        m[..., 1, 1] = -qz
        m[..., 0, 1] = qx - 1j * qy
        m[..., 1, 0] = qx + 1j * qy
        return m

    h = pauli_vec(sgn * st * cp, st * sp, ct)
    dh = np.stack([
        pauli_vec(sgn * ct * cp, ct * sp, -st),
        pauli_vec(-sgn * st * sp, st * cp, z),
    ], axis=-3)
    e, v = np.linalg.eigh(h)
    u0, u1 = v[..., 0], v[..., 1]
    a = np.einsum("...i,...mij,...j->...m", u1.conj(), dh, u0)
    a /= (e[..., 0] - e[..., 1])[..., None]
    return np.einsum("...m,...n->...mn", a.conj(), a)
