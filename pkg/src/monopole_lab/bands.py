"""Lattice band structure along momentum cuts, gap-node location versus the
band offset, and spectral brightness of the dressed states.

Energies are reported in units of Omega_0 / 2 about the probe zero point,
so the three bands of the chiral three-band model read (-|d|, 0, +|d|).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .qudit import BlochPoint, build_bloch, dressed_states

WEYL_GAP_TOL = 1e-9
_REFINE_ITERS = 60


@dataclass(frozen=True)
class BandCut:
    """Energies (E_minus, E_zero, E_plus) along one momentum axis."""

    axis: str
    fixed: dict
    samples: np.ndarray = field(repr=False)  # (n, 4): k, E-, E0, E+
    lambda_offset: float = 0.0


_AXES = ("kx", "ky", "kz", "kw")


def _energies(k4, lambda_offset):
    """Sorted band energies in units of Omega_0 / 2 at one momentum."""
    h = build_bloch(BlochPoint(*k4, lambda_offset=lambda_offset))
    return 2.0 * np.linalg.eigvalsh(h)


def band_cut(lambda_offset: float = 0.0, axis: str = "kx",
             fixed: Optional[dict] = None, n_samples: int = 201,
             k_min: float = -np.pi, k_max: float = np.pi) -> BandCut:
    """Band energies along one momentum axis, the others held fixed."""
    if axis not in _AXES:
        raise ValueError(f"unknown momentum axis {axis!r}")
    if n_samples < 2:
        raise ValueError("need at least two samples")
    fixed = dict(fixed or {})
    for key in fixed:
        if key not in _AXES or key == axis:
            raise ValueError(f"bad fixed momentum {key!r}")
    ks = np.linspace(k_min, k_max, n_samples)
    rows = np.zeros((n_samples, 4))
    for i, k in enumerate(ks):
        k4 = {a: fixed.get(a, 0.0) for a in _AXES}
        k4[axis] = k
        rows[i, 0] = k
        rows[i, 1:] = _energies([k4[a] for a in _AXES], lambda_offset)
    return BandCut(axis=axis, fixed=fixed, samples=rows,
                   lambda_offset=lambda_offset)


def _gap(kx, lambda_offset):
    e = _energies([kx, 0.0, 0.0, 0.0], lambda_offset)
    return e[2] - e[1]


def find_weyl_points(lambda_offset: float) -> list:
    """Gap nodes of the lattice model on the kx axis.

    A dense scan locates gap minima; each is refined by golden-section
    search.  Minima whose refined gap stays above tolerance are discarded,
    so the result is a +/- pair for |offset| < 1, a single merged node at
    |offset| = 1, and empty beyond.
    """
    if abs(lambda_offset) > 3.0:
        raise ValueError("scan window covers |offset| <= 3")
    n = 2001
    ks = np.linspace(-np.pi, np.pi, n)
    gaps = np.array([_gap(k, lambda_offset) for k in ks])
    # local minima, endpoints included (the node at kx = +/- pi)
    idx = [i for i in range(n)
           if (i == 0 or gaps[i] <= gaps[i - 1])
           and (i == n - 1 or gaps[i] <= gaps[i + 1])]

    found = []
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    for i in idx:
        a = ks[max(i - 1, 0)]
        b = ks[min(i + 1, n - 1)]
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = _gap(c, lambda_offset), _gap(d, lambda_offset)
        for _ in range(_REFINE_ITERS):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = _gap(c, lambda_offset)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = _gap(d, lambda_offset)
        k_star = 0.5 * (a + b)
        if _gap(k_star, lambda_offset) < WEYL_GAP_TOL:
            found.append(k_star)

    # deduplicate (including the periodic images at +/- pi)
    nodes = []
    for k in sorted(found):
        if all(min(abs(k - k0), 2 * np.pi - abs(k - k0)) > 1e-6
               for k0 in nodes):
            nodes.append(k)
    return [BlochPoint(kx=float(k), lambda_offset=lambda_offset)
            for k in nodes]


@dataclass(frozen=True)
class BrightnessRecord:
    """Populations of the probed bare level in the three dressed states."""

    p_plus: float
    p_zero: float
    p_minus: float
    ratio: float           # p_plus / p_zero; inf when undefined
    ratio_defined: bool = True


def brightness(omega1x: float, omega1y: float, omega2x: float,
               omega2y: float) -> BrightnessRecord:
    """Spectral brightness from the dressed-state amplitudes on the probed
    level: P+- = (O2x^2 + O2y^2) / (2 Omega_0^2), P0 = (O1x^2 + O1y^2) /
    Omega_0^2."""
    ds = dressed_states(omega1x, omega1y, omega2x, omega2y)
    p_plus = float(np.abs(ds.psi_plus[0]) ** 2)
    p_zero = float(np.abs(ds.psi_zero[0]) ** 2)
    p_minus = float(np.abs(ds.psi_minus[0]) ** 2)
    defined = p_zero > 0.0
    ratio = p_plus / p_zero if defined else float("inf")
    return BrightnessRecord(p_plus=p_plus, p_zero=p_zero, p_minus=p_minus,
                            ratio=ratio, ratio_defined=defined)
