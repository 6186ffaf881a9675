"""Steady-state optical response of the five-level atomic medium.

Four control fields (two on the lower tripod legs, two on the upper
Lambda legs) reduce, in the internal dark/bright ground-state basis, to
an effective chain: the probe couples a-b, the bright superposition
couples to b with strength ``alpha`` and to the second excited state
with the total upper Rabi frequency ``omega_total``, and the dark
superposition couples to b with strength ``beta``.  The weak-probe
steady state of that chain gives a closed rational expression for the
probe coherence per unit probe Rabi frequency; susceptibility and
permittivity follow from it.

All frequencies (detuning, Rabi amplitudes, decay rates, density
parameter) are expressed in units of the excited-state decay rate gamma.
The sign convention is such that absorption appears as a positive
imaginary part of the susceptibility.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import tau

import numpy as np

from .errors import DegenerateBrightState, SingularDenominator

__all__ = [
    "ControlField",
    "ControlFieldSet",
    "EffectiveCouplings",
    "MediumParams",
    "Configuration",
    "effective_couplings",
    "classify",
    "coherence_ratio",
    "susceptibility",
    "permittivity",
    "refractive_index",
]

DEFAULT_CLASSIFY_TOL = 1e-6


@dataclass(frozen=True)
class ControlField:
    """One control field: non-negative amplitude (units of gamma) and a
    phase stored normalized to [0, 2*pi)."""

    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.amplitude) or self.amplitude < 0:
            raise ValueError(f"amplitude must be finite and >= 0, got {self.amplitude}")
        if not np.isfinite(self.phase):
            raise ValueError(f"phase must be finite, got {self.phase}")
        object.__setattr__(self, "phase", self.phase % tau)

    @property
    def value(self) -> complex:
        """Complex Rabi frequency |Omega| * exp(i*phi)."""
        return self.amplitude * np.exp(1j * self.phase)


@dataclass(frozen=True)
class ControlFieldSet:
    """The four control fields, ordered (lower-leg 1, lower-leg 2,
    upper-leg 3, upper-leg 4)."""

    field1: ControlField
    field2: ControlField
    field3: ControlField
    field4: ControlField

    @classmethod
    def from_amplitudes(cls, a1, a2, a3, a4, p1=0.0, p2=0.0, p3=0.0, p4=0.0):
        return cls(ControlField(a1, p1), ControlField(a2, p2),
                   ControlField(a3, p3), ControlField(a4, p4))

    @property
    def relative_phase(self) -> float:
        """Closed-loop phase (phi1 - phi2) - (phi3 - phi4), recomputed
        from the stored phases."""
        return ((self.field1.phase - self.field2.phase)
                - (self.field3.phase - self.field4.phase))


@dataclass(frozen=True)
class EffectiveCouplings:
    """Reduced couplings of the dark/bright four-level chain.

    ``alpha`` couples bright <-> first excited state, ``beta`` couples
    dark <-> first excited state, ``omega_total`` is the (real,
    non-negative) bright <-> second excited link.  Construct directly
    when the bright link vanishes and :func:`effective_couplings` cannot
    decide the decomposition (e.g. the natural Lambda limit uses
    alpha = conj(Omega1), beta = 0, omega_total = 0).
    """

    alpha: complex
    beta: complex
    omega_total: float

    def __post_init__(self):
        if not np.isfinite(self.omega_total) or self.omega_total < 0:
            raise ValueError(f"omega_total must be finite and >= 0, got {self.omega_total}")

    @property
    def zeta(self) -> float:
        """|alpha|^2 + |beta|^2 (units gamma^2)."""
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


@dataclass(frozen=True)
class MediumParams:
    """Decay rates, density parameter and effective couplings of the
    intracavity medium (all in units of gamma)."""

    gamma_b: float
    gamma_e: float
    eta: float
    couplings: EffectiveCouplings

    def __post_init__(self):
        if self.gamma_b <= 0 or self.gamma_e <= 0:
            raise ValueError("decay rates gamma_b, gamma_e must be > 0")
        if self.eta < 0:
            raise ValueError("density parameter eta must be >= 0")


class Configuration(enum.Enum):
    """Effective atom-light configuration implied by the couplings."""

    CTL = "ctl"
    LAMBDA = "lambda"
    N_TYPE = "n"
    DEGENERATE = "degenerate"


def effective_couplings(fields: ControlFieldSet) -> EffectiveCouplings:
    """Project the four control fields onto the dark/bright basis.

    Returns couplings with
    ``alpha = (conj(O1)*O3 + conj(O2)*O4) / Omega`` and
    ``beta  = (conj(O1)*conj(O4) - conj(O2)*conj(O3)) / Omega`` where
    ``Omega = sqrt(|O3|^2 + |O4|^2)``.  This is the exact bright-state
    projection: it leaves ``alpha`` invariant under a common phase
    offset and satisfies
    ``(|alpha|^2+|beta|^2) * Omega^2 = (|O1|^2+|O2|^2) * Omega^2``
    identically, for arbitrary phases.

    Raises DegenerateBrightState when Omega = 0 while a lower-leg field
    is still on; supply the couplings directly in that case.
    """
    o1, o2 = fields.field1.value, fields.field2.value
    o3, o4 = fields.field3.value, fields.field4.value
    omega = float(np.hypot(fields.field3.amplitude, fields.field4.amplitude))
    if omega == 0.0:
        if fields.field1.amplitude > 0 or fields.field2.amplitude > 0:
            raise DegenerateBrightState(
                "upper-leg fields are zero: the dark/bright split is "
                "direction-dependent; construct EffectiveCouplings directly")
        return EffectiveCouplings(0j, 0j, 0.0)
    alpha = (np.conj(o1) * o3 + np.conj(o2) * o4) / omega
    beta = (np.conj(o1) * np.conj(o4) - np.conj(o2) * np.conj(o3)) / omega
    return EffectiveCouplings(complex(alpha), complex(beta), omega)


def classify(c: EffectiveCouplings, tol: float = DEFAULT_CLASSIFY_TOL) -> Configuration:
    """Classify the configuration from |alpha|, |beta| against tol*Omega."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    thr = tol * c.omega_total
    a_on = abs(c.alpha) > thr
    b_on = abs(c.beta) > thr
    if a_on and b_on:
        return Configuration.CTL
    if b_on:
        return Configuration.LAMBDA
    if a_on:
        return Configuration.N_TYPE
    return Configuration.DEGENERATE


def _resonance_limit(m: MediumParams) -> complex:
    """Value of the coherence ratio at exact probe resonance.

    The numerator carries a factor delta_p, so the ratio vanishes unless
    the denominator constant term |Omega|^2 |beta|^2 vanishes too; the
    removable 0/0 is resolved by one (or two) rounds of l'Hopital.
    """
    c = m.couplings
    omega2 = c.omega_total ** 2
    if omega2 * abs(c.beta) ** 2 > 0:
        return 0j
    lead = m.gamma_e * c.zeta + m.gamma_b * omega2
    if lead > 0:
        return 2j * omega2 / lead
    return 2j / m.gamma_b


def coherence_ratio(delta_p, m: MediumParams):
    """Probe coherence divided by the probe Rabi frequency (units 1/gamma).

    Accepts a scalar detuning or an ndarray; returns matching shape.
    """
    c = m.couplings
    dp = np.asarray(delta_p, dtype=float)
    omega2 = c.omega_total ** 2
    zeta = c.zeta
    gb2 = m.gamma_b / 2
    ge2 = m.gamma_e / 2
    num = dp * (-omega2 + 1j * dp * (ge2 - 1j * dp))
    den = (1j * dp * (ge2 - 1j * dp) * zeta
           + 1j * omega2 * dp * (gb2 - 1j * dp)
           + (gb2 - 1j * dp) * (ge2 - 1j * dp) * dp ** 2
           - omega2 * abs(c.beta) ** 2)
    at_zero = dp == 0.0
    bad = (den == 0) & ~at_zero
    if np.any(bad):
        raise SingularDenominator(
            f"coherence denominator vanished at delta_p={dp[bad].flat[0]!r}")
    out = np.where(at_zero, _resonance_limit(m),
                   num / np.where(at_zero, 1.0, den))
    if np.ndim(delta_p) == 0:
        return complex(out)
    return out


def susceptibility(delta_p, m: MediumParams):
    """chi = eta * coherence ratio; Re = dispersion, Im = absorption."""
    return m.eta * coherence_ratio(delta_p, m)


def permittivity(delta_p, m: MediumParams):
    """Relative permittivity of the medium, 1 + chi."""
    return 1.0 + susceptibility(delta_p, m)


def refractive_index(delta_p, m: MediumParams):
    """sqrt(1 + chi) on the branch with non-negative imaginary part."""
    n = np.sqrt(np.asarray(permittivity(delta_p, m), dtype=complex))
    n = np.where(np.imag(n) < 0, -n, n)
    if np.ndim(delta_p) == 0:
        return complex(n)
    return n
