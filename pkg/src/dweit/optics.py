"""Susceptibility, dispersion and group velocity of the probe.

chi = 2 C gamma_ab rho_ab e^{+i phi_ab} / omega_ab is the plotted,
phase-free susceptibility in units of the optical-density constant C;
Im chi is proportional to absorption, Re chi sets the refractive index
n = sqrt(1 + Re chi).  The probe detuning is delta_p = omega_a - omega_b -
omega_p, so derivatives with respect to the optical frequency flip sign:
d/d omega_p = -d/d delta_p.

A spectrum scan evaluates the closed form on a grid, automatically refined
around the predicted narrow resonances at +/- g_b_eff / 2 (their linewidth
Gamma_n = 2 (g_c_eff / omega_ac)^2 gamma_ab is orders of magnitude below any
uniform grid one would reasonably afford), and peak analysis measures
centers, heights and widths against the predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import StepTooLarge, UnphysicalIndex, UnresolvedFeature
from .model import SystemParams
from .steady import closed_form_coherence

_H_FLOOR_FACTOR = 1.0e-8  # times gamma_ab, lower clip for difference steps
_RICHARDSON_RTOL = 0.01
_REFINE_HALF_WIDTHS = 20.0  # refinement window half-width in units of Gamma_n
_POINTS_PER_WIDTH = 8  # grid steps per Gamma_n inside refinement windows


def susceptibility(coh, p: SystemParams):
    """Linear susceptibility from a steady-state coherence.

    chi = 2 C gamma_ab (coh e^{+i phi_ab}) / omega_ab; dimensionless,
    independent of the probe phase and exactly linear in C.
    """
    return 2.0 * p.prefactor * p.gamma_ab * coh * np.exp(1j * p.phi_ab) / p.omega_ab


def chi_at(p: SystemParams, delta_p):
    """Susceptibility of the closed-form coherence at one or many detunings."""
    return susceptibility(closed_form_coherence(p, delta_p), p)


def refractive_index(chi):
    """n = sqrt(1 + Re chi); raises UnphysicalIndex when Re chi < -1."""
    re = np.real(chi)
    if np.any(re < -1.0):
        raise UnphysicalIndex("Re chi < -1; susceptibility prefactor is unphysically large")
    return np.sqrt(1.0 + re)


def narrow_linewidth(p: SystemParams) -> float:
    """Predicted FWHM of the tunneling resonances, 2 (g_c_eff/omega_ac)^2 gamma_ab."""
    if p.omega_ac == 0.0:
        return 0.0
    g_c_eff = math.hypot(p.delta_cc, p.g_c)
    return 2.0 * (g_c_eff / p.omega_ac) ** 2 * p.gamma_ab


def predicted_centers(p: SystemParams) -> tuple[float, ...]:
    """Detunings of the narrow resonances, +/- g_b_eff / 2 (merged at zero)."""
    if narrow_linewidth(p) == 0.0:
        return ()
    g_b_eff = math.hypot(p.delta_bb, p.g_b)
    if g_b_eff == 0.0:
        return (0.0,)
    return (-0.5 * g_b_eff, 0.5 * g_b_eff)


def _default_step(p: SystemParams) -> float:
    h = max(p.g_c, narrow_linewidth(p)) / 100.0
    return max(h, _H_FLOOR_FACTOR * p.gamma_ab)


def _re_chi(p: SystemParams, dps) -> np.ndarray:
    return np.real(chi_at(p, dps))


def _slope_estimates(p: SystemParams, delta_p, h):
    """Central differences at h, h/2, h/4 plus their Richardson combinations.

    Returns (refined_slope, relative_inconsistency) with respect to omega_p.
    """
    dps = np.asarray(delta_p, dtype=float)
    h = np.asarray(h, dtype=float)
    d_est = []
    for step in (h, 0.5 * h, 0.25 * h):
        f_plus = _re_chi(p, dps + step)
        f_minus = _re_chi(p, dps - step)
        d_est.append((f_plus - f_minus) / (2.0 * step))
    r1 = (4.0 * d_est[1] - d_est[0]) / 3.0
    r2 = (4.0 * d_est[2] - d_est[1]) / 3.0
    scale = np.maximum(np.abs(r2), 1.0e-300)
    mismatch = np.abs(r2 - r1) / scale
    # d Re chi / d omega_p = - d Re chi / d delta_p
    return -r2, mismatch


def dispersion_slope(p: SystemParams, delta_p: float, h: float | None = None) -> float:
    """d Re chi / d omega_p by Richardson-refined central differences.

    The default step is max(g_c, Gamma_n)/100, clipped from below at
    1e-8 gamma_ab.  Raises StepTooLarge when successive Richardson
    estimates disagree by more than 1%, which signals that ``h`` straddles
    spectral structure.
    """
    if h is None:
        h = _default_step(p)
    if not h > 0.0:
        raise ValueError(f"step h must be positive, got {h!r}")
    slope, mismatch = _slope_estimates(p, delta_p, h)
    if mismatch > _RICHARDSON_RTOL:
        raise StepTooLarge(
            f"Richardson estimates differ by {float(mismatch):.2e} (> 1%) at delta_p={delta_p!r}, h={h!r}"
        )
    return float(slope)


def adaptive_step(p: SystemParams, delta_p) -> np.ndarray:
    """Difference step shrunk near the narrow resonances.

    Within a distance d of a predicted center the step is capped at d/8 so
    the stencil never straddles the resonance core; elsewhere the default
    max(g_c, Gamma_n)/100 applies.
    """
    dps = np.asarray(delta_p, dtype=float)
    h = np.full(dps.shape, _default_step(p))
    centers = predicted_centers(p)
    if centers:
        dist = np.min(np.abs(dps[..., None] - np.asarray(centers)), axis=-1)
        floor = _H_FLOOR_FACTOR * p.gamma_ab
        h = np.minimum(h, np.maximum(dist / 8.0, floor))
    return h


def standard_eit_reference(p: SystemParams) -> SystemParams:
    """The same configuration with every tunnel coupling removed.

    Well asymmetries and the preparation angle are zeroed as well, so the
    reference is a single-well medium with all population behind the probe.
    """
    return replace(p, g_a=0.0, g_b=0.0, g_c=0.0, delta_bb=0.0, delta_cc=0.0, phi_prep=0.0)


def _vg_denominator(n, slope, omega_p):
    return n + (omega_p / (2.0 * n)) * slope


def group_velocity_ratio(p: SystemParams, delta_p: float, h: float | None = None) -> float:
    """v_g(delta_p) relative to the line-center group velocity of the
    standard EIT reference (same control, no tunneling).

    Both velocities use v_g = c / (n + (omega_p / 2n) dRe chi/d omega_p)
    with the shared carrier scale ``p.omega_p``, so the ratio is
    dimensionless and equals 1 by construction for the reference itself.
    """
    if h is None:
        h = float(adaptive_step(p, delta_p))
    n = float(refractive_index(chi_at(p, delta_p)))
    slope = dispersion_slope(p, delta_p, h)
    ref = standard_eit_reference(p)
    n0 = float(refractive_index(chi_at(ref, 0.0)))
    s0 = dispersion_slope(ref, 0.0)
    return _vg_denominator(n0, s0, p.omega_p) / _vg_denominator(n, slope, p.omega_p)


# ---------------------------------------------------------------------------
# spectrum scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectrumPoint:
    """Susceptibility and derived optical quantities at one probe detuning."""

    delta_p: float
    chi: complex
    alpha: float
    n: float
    dre_chi_domega: float
    vg_ratio: float


@dataclass(frozen=True, eq=False)
class SpectrumScan:
    """Ordered spectrum with its generating parameters and grid description."""

    params: SystemParams
    grid_min: float
    grid_max: float
    grid_count: int
    refined: bool
    delta_p: np.ndarray
    chi: np.ndarray
    alpha: np.ndarray
    n: np.ndarray
    dre_chi_domega: np.ndarray
    vg_ratio: np.ndarray

    @property
    def points(self) -> list[SpectrumPoint]:
        return [
            SpectrumPoint(float(d), complex(c), float(al), float(nn), float(s), float(v))
            for d, c, al, nn, s, v in zip(
                self.delta_p, self.chi, self.alpha, self.n, self.dre_chi_domega, self.vg_ratio
            )
        ]


def scan_grid(p: SystemParams, grid_min: float, grid_max: float, count: int, refine: bool) -> np.ndarray:
    """Base grid plus, when refining, dense windows over each narrow resonance.

    Windows span +/- 20 Gamma_n around each predicted center at a spacing of
    Gamma_n / 8, enough for sub-linewidth peak location and half-height
    interpolation.
    """
    if count < 2:
        raise ValueError("grid count must be >= 2")
    if not grid_min < grid_max:
        raise ValueError("grid min must be below grid max")
    pieces = [np.linspace(grid_min, grid_max, count)]
    if refine:
        width = narrow_linewidth(p)
        if width > 0.0:
            half = _REFINE_HALF_WIDTHS * width
            n_window = 2 * int(_REFINE_HALF_WIDTHS * _POINTS_PER_WIDTH) + 1
            for center in predicted_centers(p):
                window = center + np.linspace(-half, half, n_window)
                window = window[(window >= grid_min) & (window <= grid_max)]
                if window.size:
                    pieces.append(window)
    return np.unique(np.concatenate(pieces))


def scan_spectrum(
    p: SystemParams,
    grid_min: float,
    grid_max: float,
    count: int,
    refine: bool = True,
    k_p: float = 1.0,
) -> SpectrumScan:
    """Evaluate the spectrum on a (possibly refined) detuning grid.

    Every column is evaluated through the closed form; the dispersion slope
    uses the adaptive difference step and the group-velocity column shares
    one standard-EIT reference denominator across the scan.  Evaluation is
    vectorized and order-independent, so results are deterministic.
    """
    if k_p < 0.0:
        raise ValueError("k_p must be >= 0")
    grid = scan_grid(p, grid_min, grid_max, count, refine)
    chi = np.asarray(chi_at(p, grid))
    n = refractive_index(chi)
    slope, _ = _slope_estimates(p, grid, adaptive_step(p, grid))

    ref = standard_eit_reference(p)
    n0 = float(refractive_index(chi_at(ref, 0.0)))
    s0 = dispersion_slope(ref, 0.0)
    denom0 = _vg_denominator(n0, s0, p.omega_p)
    vg = denom0 / _vg_denominator(n, slope, p.omega_p)

    return SpectrumScan(
        params=p,
        grid_min=grid_min,
        grid_max=grid_max,
        grid_count=count,
        refined=refine,
        delta_p=grid,
        chi=chi,
        alpha=k_p * np.imag(chi),
        n=n,
        dre_chi_domega=slope,
        vg_ratio=vg,
    )


@dataclass(frozen=True)
class PeakReport:
    """One absorption maximum with measured and predicted linewidth."""

    center: float
    height: float
    fwhm: float
    predicted_fwhm: float


def _parabolic_vertex(x0, x1, x2, y0, y1, y2):
    s1 = (y1 - y0) / (x1 - x0)
    f2 = ((y2 - y1) / (x2 - x1) - s1) / (x2 - x0)
    if f2 >= 0.0:  # not concave; keep the sample
        return x1, y1
    xv = 0.5 * (x0 + x1) - s1 / (2.0 * f2)
    yv = y0 + s1 * (xv - x0) + f2 * (xv - x0) * (xv - x1)
    return xv, yv


def _half_crossing(x, y, i_peak, half, direction):
    i = i_peak
    while 0 <= i + direction < len(y):
        j = i + direction
        if y[j] <= half:
            # linear interpolation between j and i
            frac = (half - y[j]) / (y[i] - y[j])
            return x[j] + frac * (x[i] - x[j])
        i = j
    return None


def _check_resolved(p: SystemParams, x: np.ndarray) -> None:
    width = narrow_linewidth(p)
    if width == 0.0:
        return
    max_step = width / _POINTS_PER_WIDTH
    for center in predicted_centers(p):
        if not (x[0] <= center <= x[-1]):
            continue
        j = int(np.searchsorted(x, center))
        j = min(max(j, 1), len(x) - 1)
        local = x[j] - x[j - 1]
        if local > max_step * (1.0 + 1.0e-9):
            raise UnresolvedFeature(
                f"grid spacing {local:g} near predicted center {center:g} exceeds Gamma_n/8 = {max_step:g}"
            )


def find_peaks(scan: SpectrumScan, rel_floor: float = 1.0e-9) -> list[PeakReport]:
    """Local maxima of Im chi with sub-grid refinement and measured FWHM.

    Plateaus resolve to their leftmost sample before quadratic refinement;
    maxima below ``rel_floor`` of the global maximum are discarded as float
    noise, and a peak whose half-height crossings are not bracketed by the
    scan is dropped.  Raises UnresolvedFeature if the grid near a predicted
    narrow resonance is coarser than Gamma_n / 8.
    """
    x = scan.delta_p
    y = np.imag(scan.chi)
    _check_resolved(scan.params, x)
    y_max = float(np.max(y)) if y.size else 0.0
    reports = []
    predicted = narrow_linewidth(scan.params)
    for i in range(1, len(y) - 1):
        if not (y[i] > y[i - 1] and y[i] >= y[i + 1]):
            continue
        if y[i] <= 0.0 or y[i] < rel_floor * y_max:
            continue
        center, height = _parabolic_vertex(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1])
        half = 0.5 * height
        left = _half_crossing(x, y, i, half, -1)
        right = _half_crossing(x, y, i, half, +1)
        if left is None or right is None:
            continue
        reports.append(
            PeakReport(center=float(center), height=float(height), fwhm=float(right - left), predicted_fwhm=predicted)
        )
    return reports
