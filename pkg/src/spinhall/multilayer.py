"""Fresnel reflection of the three-layer glass / atomic-vapor / glass stack.

Layer 1 is the upper glass window the probe arrives through, layer 2 the
intracavity medium of thickness ``d``, layer 3 the lower window.  The
composite TM/TE amplitude coefficients are

    r = (r12 + r23 * exp(2i k2z d)) / (1 + r12 * r23 * exp(2i k2z d))

with the single-interface coefficients of each polarization.  Normal
wave-vector components are taken on the branch Im(kz) >= 0 so that
evanescent and absorbed waves decay into the stack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInterface, InvalidAngle, ResonantDenominator

__all__ = [
    "LayerStack",
    "WaveGeometry",
    "ReflectionPair",
    "wave_geometry",
    "fresnel_interface",
    "reflection_coefficients",
    "stack_reflection",
    "stack_reflection_derivative",
]

RESONANT_DENOMINATOR_FLOOR = 1e-14
DERIVATIVE_STEP = 1e-6  # radians


@dataclass(frozen=True)
class LayerStack:
    """Permittivities of the three layers and the inner thickness in meters.

    ``thickness_d = 0`` is allowed and collapses the stack to the single
    1->3 interface.
    """

    eps2: complex
    eps1: complex = 2.25 + 0j
    eps3: complex = 2.25 + 0j
    thickness_d: float = 0.4e-6

    def __post_init__(self):
        if self.thickness_d < 0:
            raise ValueError("thickness_d must be >= 0")
        if np.real(self.eps1) <= 0 or np.real(self.eps3) <= 0:
            raise ValueError("Re(eps1) and Re(eps3) must be > 0")

    def eps(self, layer: int) -> complex:
        return (self.eps1, self.eps2, self.eps3)[layer - 1]


@dataclass(frozen=True)
class WaveGeometry:
    """Wave-vector decomposition at a given incidence angle."""

    theta_i: float
    lam: float
    k0: float
    kx: float
    kz: tuple  # (k1z, k2z, k3z), each complex with Im >= 0


@dataclass(frozen=True)
class ReflectionPair:
    """Stack reflection coefficients and their angular derivatives."""

    rp: complex
    rs: complex
    dp_dtheta: complex
    ds_dtheta: complex


def _kz(eps, k0, kx):
    """Normal wave-vector component on the decaying branch Im >= 0."""
    z = np.sqrt(k0 ** 2 * eps - kx ** 2 + 0j)
    return np.where(np.imag(z) < 0, -z, z)


def wave_geometry(theta_i: float, lam: float, stack: LayerStack) -> WaveGeometry:
    """Wave vectors for a plane wave incident at theta_i (radians)."""
    if not 0.0 < theta_i < np.pi / 2:
        raise InvalidAngle(f"theta_i must lie in (0, pi/2), got {theta_i}")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    k0 = 2 * np.pi / lam
    kx = float(np.real(np.sqrt(stack.eps1)) * k0 * np.sin(theta_i))
    kz = tuple(complex(_kz(stack.eps(i), k0, kx)) for i in (1, 2, 3))
    return WaveGeometry(theta_i, lam, k0, kx, kz)


def fresnel_interface(i: int, j: int, g: WaveGeometry, stack: LayerStack):
    """Single-interface TM and TE coefficients (rp_ij, rs_ij) for the
    i -> j interface, layers numbered 1..3."""
    kiz, kjz = g.kz[i - 1], g.kz[j - 1]
    ei, ej = stack.eps(i), stack.eps(j)
    den_p = kiz / ei + kjz / ej
    den_s = kiz + kjz
    if abs(den_p) == 0 or abs(den_s) == 0:
        raise DegenerateInterface(f"vanishing Fresnel denominator at interface {i}-{j}")
    return (kiz / ei - kjz / ej) / den_p, (kiz - kjz) / den_s


def reflection_coefficients(theta_i, lam: float, stack: LayerStack):
    """Composite (rp, rs) of the three-layer stack.

    ``theta_i`` may be a scalar or an ndarray of angles in radians; the
    return values match its shape.  Raises ResonantDenominator when a
    composite denominator falls below the numeric floor.
    """
    rp, rs, dmin = _amplitudes(theta_i, lam, stack)
    if np.any(dmin < RESONANT_DENOMINATOR_FLOOR):
        raise ResonantDenominator("stack denominator below floor "
                                  f"{RESONANT_DENOMINATOR_FLOOR}")
    return rp, rs


def _amplitudes(theta_i, lam, stack):
    """Vectorized core: (rp, rs, min |denominator|) without error checks."""
    k0 = 2 * np.pi / lam
    kx = np.real(np.sqrt(stack.eps1)) * k0 * np.sin(theta_i)
    k1z = _kz(stack.eps1, k0, kx)
    k2z = _kz(stack.eps2, k0, kx)
    k3z = _kz(stack.eps3, k0, kx)
    e1, e2, e3 = stack.eps1, stack.eps2, stack.eps3
    with np.errstate(divide="ignore", invalid="ignore"):
        rp12 = (k1z / e1 - k2z / e2) / (k1z / e1 + k2z / e2)
        rp23 = (k2z / e2 - k3z / e3) / (k2z / e2 + k3z / e3)
        rs12 = (k1z - k2z) / (k1z + k2z)
        rs23 = (k2z - k3z) / (k2z + k3z)
        phase = np.exp(2j * k2z * stack.thickness_d)
        den_p = 1 + rp12 * rp23 * phase
        den_s = 1 + rs12 * rs23 * phase
        rp = (rp12 + rp23 * phase) / den_p
        rs = (rs12 + rs23 * phase) / den_s
    return rp, rs, np.minimum(np.abs(den_p), np.abs(den_s))


def stack_reflection(theta_i: float, lam: float, stack: LayerStack) -> ReflectionPair:
    """Stack coefficients plus angular derivatives at a single angle."""
    if not 0.0 < theta_i < np.pi / 2:
        raise InvalidAngle(f"theta_i must lie in (0, pi/2), got {theta_i}")
    rp, rs = reflection_coefficients(theta_i, lam, stack)
    drp, drs = stack_reflection_derivative(theta_i, lam, stack)
    return ReflectionPair(complex(rp), complex(rs), complex(drp), complex(drs))


def stack_reflection_derivative(theta_i, lam: float, stack: LayerStack,
                                h: float = DERIVATIVE_STEP):
    """d(rp)/dtheta and d(rs)/dtheta by Richardson-extrapolated central
    differences (stencils h and h/2, leading error O(h^4))."""
    def pair(t):
        rp, rs, _ = _amplitudes(t, lam, stack)
        return rp, rs

    rp_a, rs_a = pair(theta_i + h)
    rp_b, rs_b = pair(theta_i - h)
    rp_c, rs_c = pair(theta_i + h / 2)
    rp_d, rs_d = pair(theta_i - h / 2)
    coarse_p = (rp_a - rp_b) / (2 * h)
    coarse_s = (rs_a - rs_b) / (2 * h)
    fine_p = (rp_c - rp_d) / h
    fine_s = (rs_c - rs_d) / h
    return (4 * fine_p - coarse_p) / 3, (4 * fine_s - coarse_s) / 3
