"""Grid sweeps, Brewster / sign-flip location and window finding.

Every grid point is an independent pure evaluation; rows are written by
index, so tables are bit-identical no matter how many worker threads
run the sweep.  Singular points (Brewster floor, resonant stack
denominator) are flagged in their row instead of aborting the sweep.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NoMinimumInWindow, NoSignChange
from .medium import ControlFieldSet, MediumParams, effective_couplings, susceptibility
from .multilayer import LayerStack, _amplitudes, RESONANT_DENOMINATOR_FLOOR
from .shifts import BeamParams, BREWSTER_FLOOR, shift_kernel

__all__ = [
    "ScanContext",
    "SweepGrid",
    "SweepTable",
    "sweep",
    "find_brewster",
    "find_sign_flip",
    "find_transparency_windows",
    "max_shift_vs_detuning",
    "shift_vs_density",
]

GOLDEN_TOL_DEG = 1e-4
WINDOW_REFINE_TOL = 1e-3  # gamma units
FLAG_BREWSTER = "brewster_singularity"
FLAG_RESONANT = "resonant_denominator"

COLUMNS = ("theta_deg", "detuning", "eta", "chi1", "chi2", "abs_rp", "abs_rs",
           "ratio_sp", "delta_plus_lambda", "theta_minus", "flags")


@dataclass(frozen=True)
class ScanContext:
    """Physics bundle for pointwise evaluation at a fixed detuning."""

    medium: MediumParams
    stack: LayerStack
    beam: BeamParams
    delta_p: float = 0.0

    def stack_at(self) -> LayerStack:
        """Stack with the intracavity permittivity set for this detuning."""
        chi = susceptibility(self.delta_p, self.medium)
        return replace(self.stack, eps2=1.0 + chi)

    def coefficients(self, theta):
        """(rp, rs) at angle(s) theta in radians."""
        rp, rs, _ = _amplitudes(theta, self.beam.lam, self.stack_at())
        return rp, rs

    def abs_rp(self, theta):
        return np.abs(self.coefficients(theta)[0])

    def delta_plus(self, theta):
        """Spatial shift (meters) of the right-circular component."""
        rp, rs = self.coefficients(theta)
        return shift_kernel(theta, rp, rs, self.beam)[0]

    def theta_minus(self, theta):
        """Angular tilt of the left-circular component."""
        rp, rs = self.coefficients(theta)
        return shift_kernel(theta, rp, rs, self.beam)[1]


@dataclass(frozen=True)
class SweepGrid:
    """Evaluation grid; angles in degrees, detunings in gamma units.

    ``eta_list`` expands the density column; ``amplitude_list`` (control
    field sets) stacks whole sub-tables in order, slowest axis first:
    rows run (amplitude, eta, detuning, theta) from slow to fast.
    """

    theta_range: tuple  # (min_deg, max_deg, count)
    detuning_range: tuple  # (min_gamma, max_gamma, count)
    eta_list: Optional[Sequence[float]] = None
    amplitude_list: Optional[Sequence[ControlFieldSet]] = None

    def __post_init__(self):
        for name, (lo, hi, count) in (("theta_range", self.theta_range),
                                      ("detuning_range", self.detuning_range)):
            if count < 2:
                raise ValueError(f"{name} count must be >= 2")
            if not lo < hi:
                raise ValueError(f"{name} needs min < max")

    def thetas_deg(self):
        lo, hi, n = self.theta_range
        return np.linspace(lo, hi, int(n))

    def detunings(self):
        lo, hi, n = self.detuning_range
        return np.linspace(lo, hi, int(n))


@dataclass
class SweepTable:
    """Column store of sweep results; one row per grid point."""

    theta_deg: np.ndarray
    detuning: np.ndarray
    eta: np.ndarray
    chi1: np.ndarray
    chi2: np.ndarray
    abs_rp: np.ndarray
    abs_rs: np.ndarray
    ratio_sp: np.ndarray
    delta_plus_lambda: np.ndarray
    theta_minus: np.ndarray
    flags: list

    def __len__(self):
        return len(self.theta_deg)

    @property
    def flagged_count(self) -> int:
        return sum(1 for f in self.flags if f)

    def column(self, name: str):
        return getattr(self, name)

    def rows(self):
        for i in range(len(self)):
            yield tuple(self.column(c)[i] for c in COLUMNS)

    @classmethod
    def empty(cls, n: int) -> "SweepTable":
        z = [np.zeros(n) for _ in range(10)]
        return cls(*z, flags=[""] * n)


def _fill_block(table: SweepTable, start: int, thetas_rad, theta_deg,
                dp: float, eta: float, medium: MediumParams,
                stack: LayerStack, beam: BeamParams):
    """Evaluate one (medium, eta, detuning) block over the theta grid and
    write rows [start, start+len)."""
    m = replace(medium, eta=eta)
    chi = susceptibility(dp, m)
    layered = replace(stack, eps2=1.0 + chi)
    rp, rs, dmin = _amplitudes(thetas_rad, beam.lam, layered)
    with np.errstate(invalid="ignore", divide="ignore"):
        delta_plus, theta_minus = shift_kernel(thetas_rad, rp, rs, beam)
        ratio = np.abs(rs) / np.abs(rp)
    n = len(thetas_rad)
    sl = slice(start, start + n)
    table.theta_deg[sl] = theta_deg
    table.detuning[sl] = dp
    table.eta[sl] = eta
    table.chi1[sl] = chi.real
    table.chi2[sl] = chi.imag
    table.abs_rp[sl] = np.abs(rp)
    table.abs_rs[sl] = np.abs(rs)
    table.ratio_sp[sl] = ratio
    table.delta_plus_lambda[sl] = delta_plus / beam.lam
    table.theta_minus[sl] = theta_minus
    resonant = dmin < RESONANT_DENOMINATOR_FLOOR
    brewster = (np.abs(rp) < BREWSTER_FLOOR) & ~resonant
    if np.any(resonant) or np.any(brewster):
        bad = resonant | brewster
        table.delta_plus_lambda[sl][bad] = np.nan
        table.theta_minus[sl][bad] = np.nan
        table.ratio_sp[sl][bad] = np.nan
        for i in np.nonzero(bad)[0]:
            table.flags[start + i] = FLAG_RESONANT if resonant[i] else FLAG_BREWSTER


def sweep(grid: SweepGrid, medium: MediumParams, stack: LayerStack,
          beam: BeamParams, threads: int = 1) -> SweepTable:
    """Evaluate susceptibility, reflection and shifts over the full grid.

    Row order is (amplitude set, eta, detuning, theta), theta fastest.
    Per-point singularities are flagged, never raised.
    """
    theta_deg = grid.thetas_deg()
    thetas_rad = np.radians(theta_deg)
    detunings = grid.detunings()
    etas = list(grid.eta_list) if grid.eta_list else [medium.eta]
    if grid.amplitude_list:
        media = [replace(medium, couplings=effective_couplings(fs))
                 for fs in grid.amplitude_list]
    else:
        media = [medium]
    n_theta = len(theta_deg)
    blocks = [(m, eta, dp) for m in media for eta in etas for dp in detunings]
    table = SweepTable.empty(len(blocks) * n_theta)

    def run(idx_block):
        idx, (m, eta, dp) = idx_block
        _fill_block(table, idx * n_theta, thetas_rad, theta_deg,
                    float(dp), float(eta), m, stack, beam)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, enumerate(blocks)))
    else:
        for item in enumerate(blocks):
            run(item)
    return table


def _golden_minimize(f: Callable[[float], float], a: float, b: float,
                     tol: float) -> float:
    """Golden-section minimum of f on [a, b] to an abscissa tolerance."""
    inv_phi = (np.sqrt(5) - 1) / 2
    inv_phi2 = (3 - np.sqrt(5)) / 2
    c = a + inv_phi2 * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + inv_phi2 * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def find_brewster(theta_window_deg: tuple, ctx: ScanContext,
                  coarse: int = 201, tol_deg: float = GOLDEN_TOL_DEG) -> float:
    """Angle (degrees) minimizing |rp| inside the window.

    The window is scanned on a coarse grid; the minimum must be interior
    (otherwise NoMinimumInWindow) and is then refined by golden section
    inside its bracketing cell.
    """
    lo, hi = theta_window_deg
    grid = np.linspace(lo, hi, coarse)
    vals = ctx.abs_rp(np.radians(grid))
    i = int(np.argmin(vals))
    if i == 0 or i == coarse - 1 or not (vals[i] < vals[0] and vals[i] < vals[-1]):
        raise NoMinimumInWindow(f"|rp| has no interior minimum in {theta_window_deg}")
    f = lambda t_deg: float(ctx.abs_rp(np.radians(t_deg)))
    return _golden_minimize(f, grid[i - 1], grid[i + 1], tol_deg)


def find_sign_flip(theta_deg, delta, ctx: ScanContext,
                   tol_deg: float = GOLDEN_TOL_DEG) -> float:
    """Angle (degrees) where the tabulated spatial shift changes sign.

    ``theta_deg``/``delta`` are a table slice providing the bracket; the
    crossing is refined by bisection on the sign of the shift.
    """
    theta_deg = np.asarray(theta_deg, dtype=float)
    delta = np.asarray(delta, dtype=float)
    sign = np.sign(delta)
    ok = np.isfinite(delta) & (sign != 0)
    idx = None
    prev = None
    for i in range(len(delta)):
        if not ok[i]:
            continue
        if prev is not None and sign[i] != sign[prev]:
            idx = (prev, i)
            break
        prev = i
    if idx is None:
        raise NoSignChange("no sign change in the supplied slice")
    a, b = theta_deg[idx[0]], theta_deg[idx[1]]
    fa = float(ctx.delta_plus(np.radians(a)))
    while b - a > tol_deg:
        mid = 0.5 * (a + b)
        fm = float(ctx.delta_plus(np.radians(mid)))
        if np.isnan(fm) or fm == 0.0:
            return mid
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def _refine_minimum(f: Callable[[float], float], a: float, b: float, c: float,
                    tol: float, max_iter: int = 60):
    """Successive parabolic refinement of a bracketed minimum (a < b < c,
    f(b) smallest); falls back to a golden step when the parabola
    degenerates or leaves the bracket."""
    fa, fb, fc = f(a), f(b), f(c)
    for _ in range(max_iter):
        if c - a < tol:
            break
        denom = (b - a) * (fb - fc) - (b - c) * (fb - fa)
        if denom != 0:
            x = b - 0.5 * ((b - a) ** 2 * (fb - fc) - (b - c) ** 2 * (fb - fa)) / denom
        else:
            x = np.nan
        if not (a < x < c) or not np.isfinite(x) or abs(x - b) < 1e-15:
            x = 0.5 * (a + c) if abs(b - a) > abs(c - b) else 0.5 * (b + c)
            if abs(x - b) < 1e-15:
                break
        fx = f(x)
        if fx < fb:
            if x < b:
                c, fc = b, fb
            else:
                a, fa = b, fb
            b, fb = x, fx
        else:
            if x < b:
                a, fa = x, fx
            else:
                c, fc = x, fx
    return b


def find_transparency_windows(medium: MediumParams, detuning_range: tuple,
                              n_grid: int = 4801,
                              tol: float = WINDOW_REFINE_TOL) -> list:
    """Detunings where the medium is closest to transparent.

    Interior local minima of |chi(delta_p)| on a dense grid, each refined
    by successive parabolic interpolation to better than ``tol`` gamma.
    The magnitude (rather than the absorption alone) is used so the
    located windows are the points of minimal total response, where both
    dispersion and absorption are small; for this medium those are the
    operating points of enhanced beam shift.  May return an empty list.
    """
    lo, hi = detuning_range
    if medium.eta == 0:
        return []
    dps = np.linspace(lo, hi, n_grid)
    mag = np.abs(susceptibility(dps, medium))
    f = lambda dp: float(np.abs(susceptibility(float(dp), medium)))
    out = []
    for i in range(1, n_grid - 1):
        if mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]:
            out.append(_refine_minimum(f, dps[i - 1], dps[i], dps[i + 1], tol))
    return sorted(out)


def max_shift_vs_detuning(kind: str, detunings, ctx_base: ScanContext,
                          theta_window_deg: tuple = (30.0, 38.0),
                          coarse: int = 801):
    """Per-detuning extremum over incidence angle.

    ``kind`` is "spatial" (largest |delta_plus|, returned in units of
    the wavelength) or "angular" (largest theta_minus).  Each detuning
    is scanned on a coarse grid and the best point refined by golden
    section.
    """
    if kind not in ("spatial", "angular"):
        raise ValueError("kind must be 'spatial' or 'angular'")
    lo, hi = theta_window_deg
    grid_deg = np.linspace(lo, hi, coarse)
    grid_rad = np.radians(grid_deg)
    detunings = np.asarray(detunings, dtype=float)
    out = np.empty_like(detunings)
    for j, dp in enumerate(detunings):
        ctx = replace(ctx_base, delta_p=float(dp))
        if kind == "spatial":
            objective = lambda t: -np.abs(ctx.delta_plus(t))
        else:
            objective = lambda t: -ctx.theta_minus(t)
        vals = objective(grid_rad)
        vals = np.where(np.isfinite(vals), vals, np.inf)
        i = int(np.argmin(vals))
        a = grid_rad[max(i - 1, 0)]
        b = grid_rad[min(i + 1, coarse - 1)]
        t_best = _golden_minimize(lambda t: float(objective(t)), a, b,
                                  np.radians(GOLDEN_TOL_DEG))
        grid_best = -float(vals[i])
        refined = -float(objective(t_best))
        best = grid_best if np.isnan(refined) else max(grid_best, refined)
        out[j] = best / ctx.beam.lam if kind == "spatial" else best
    return detunings, out


def shift_vs_density(etas, theta_fixed_deg: float, ctx: ScanContext):
    """delta_plus (units of the wavelength) versus density parameter at a
    fixed angle and the context's detuning."""
    etas = np.asarray(etas, dtype=float)
    theta = np.radians(theta_fixed_deg)
    out = np.empty_like(etas)
    for i, eta in enumerate(etas):
        c = replace(ctx, medium=replace(ctx.medium, eta=float(eta)))
        out[i] = float(c.delta_plus(theta)) / ctx.beam.lam
    return etas, out
