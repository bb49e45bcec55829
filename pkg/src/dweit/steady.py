"""First-order coherences of the probed well, by linear solve and in closed form.

To first order in the probe, the eight nonzero optical coherences split into
two decoupled blocks of four, one sourced by the initial population of the
dressed state |B> and one by |B'>.  Each block is a driven, damped linear
system dX/dt = -M X + A whose steady state is M^-1 A; the probed-well
coherence is assembled from the two leading components as
rho_ab = cos(theta_b) x_B[0] - sin(theta_b) x_B'[0].

The same steady state has an explicit closed form: per branch

    x1 = omega_ab e^{-i phi_ab} (amplitude) P Q / zeta,

with P the product of the two C-coherence detunings, Q the complex
excited-coherence detuning, and zeta the full denominator including control
and a-a' tunneling couplings.  The closed form is the fast evaluation path
for spectra; the linear solve and a time integrator (see ``oracle``) exist
so it is never trusted unchecked.

Variable order in every 4-vector is (rho_aX, rho_CX, rho_C'X, rho_a'X).
All functions here are pure in (params, delta_p) and safe to evaluate
concurrently; results do not depend on evaluation order.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dressed import DressedFrame, frame_for
from .errors import (
    DegenerateSubspace,
    IllConditioned,
    NotDegenerate,
    PoleEncountered,
    SingularSystem,
)
from .model import SystemParams, with_probe_detuning_shifts

_COND_LIMIT = 1.0e12
_RESIDUAL_LIMIT = 1.0e-12


class Branch(enum.Enum):
    """Which dressed ground state sources the coherence block."""

    B = "B"
    BPRIME = "Bprime"


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """One 4x4 coherence block in dX/dt = -m X + a form."""

    m: np.ndarray
    a: np.ndarray
    branch: Branch


@dataclass(frozen=True, eq=False)
class SteadyCoherences:
    """Both solved branches plus the assembled observables."""

    x_b: np.ndarray
    x_bp: np.ndarray
    rho_ab: complex
    rho_aa: float


def _branch_sign(branch: Branch) -> float:
    # +1 for branch B (dressed energy -g_eff/2 below the doublet center,
    # hence +g_eff/2 in every detuning), -1 for branch B'.
    return 1.0 if branch is Branch.B else -1.0


def _initial_population(p: SystemParams, frame: DressedFrame, branch: Branch) -> float:
    d = frame.theta_b - p.phi_prep
    return math.cos(d) ** 2 if branch is Branch.B else math.sin(d) ** 2


def build_linear_system(p: SystemParams, delta_p: float, branch: Branch) -> LinearSystem:
    """Coefficient matrix and drive vector of one coherence block.

    The initial dressed populations cos^2(theta_b - phi_prep) and
    sin^2(theta_b - phi_prep) are baked into the drive; dressed-state
    coherences start (and, to this order, stay) zero, so only the first
    component of ``a`` is nonzero.
    """
    frame = frame_for(p)
    dp, dm = with_probe_detuning_shifts(p, delta_p)
    s = _branch_sign(branch)
    geb, gec = frame.g_b_eff, frame.g_c_eff

    d_a = dp + s * 0.5 * geb - 1j * p.gamma_ab
    d_c = dp - dm + s * 0.5 * geb - 0.5 * gec
    d_cp = dp - dm + s * 0.5 * geb + 0.5 * gec

    half_ac = 0.5 * p.omega_ac
    drive = half_ac * cmath.exp(-1j * p.phi_ac)
    drive_c = half_ac * cmath.exp(1j * p.phi_ac)

    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = d_a
    h[0, 1] = -drive * frame.cos_c
    h[0, 2] = drive * frame.sin_c
    h[0, 3] = -0.5 * p.g_a
    h[1, 0] = -drive_c * frame.cos_c
    h[1, 1] = d_c
    h[2, 0] = drive_c * frame.sin_c
    h[2, 2] = d_cp
    h[3, 0] = -0.5 * p.g_a
    h[3, 3] = d_a

    pop = _initial_population(p, frame, branch)
    probe = 0.5 * p.omega_ab * cmath.exp(-1j * p.phi_ab)
    if branch is Branch.B:
        source = -probe * frame.cos_b * pop
    else:
        source = probe * frame.sin_b * pop

    a = np.zeros(4, dtype=complex)
    a[0] = -1j * source
    return LinearSystem(m=1j * h, a=a, branch=branch)


def solve_steady(sys: LinearSystem) -> np.ndarray:
    """Steady state M^-1 A by LU with partial pivoting (LAPACK).

    Warns :class:`IllConditioned` above a condition estimate of 1e12 and
    raises :class:`SingularSystem` on an exactly singular matrix.  One step
    of iterative refinement keeps the relative residual at or below 1e-12
    whenever the matrix allows it.
    """
    m, a = sys.m, sys.a
    cond = np.linalg.cond(m)
    if not np.isfinite(cond):
        raise SingularSystem("coefficient matrix is singular")
    if cond > _COND_LIMIT:
        warnings.warn(f"condition estimate {cond:.3e} > 1e12", IllConditioned, stacklevel=2)
    try:
        x = np.linalg.solve(m, a)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    norm_a = np.linalg.norm(a)
    if norm_a > 0.0 and np.linalg.norm(m @ x - a) > _RESIDUAL_LIMIT * norm_a:
        x = x + np.linalg.solve(m, a - m @ x)
    return x


def steady_coherences(p: SystemParams, delta_p: float) -> SteadyCoherences:
    """Solve both branches and assemble rho_ab and the excited population."""
    frame = frame_for(p)
    x_b = solve_steady(build_linear_system(p, delta_p, Branch.B))
    x_bp = solve_steady(build_linear_system(p, delta_p, Branch.BPRIME))
    rho_ab = frame.cos_b * x_b[0] - frame.sin_b * x_bp[0]
    rho_aa = population_from_coherence(p, rho_ab)
    return SteadyCoherences(x_b=x_b, x_bp=x_bp, rho_ab=complex(rho_ab), rho_aa=rho_aa)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _branch_pieces(p, frame, dp, dm, sign):
    """P, Q, W, zeta of one branch; sign=+1 is branch B, -1 is B'.

    W is the control-coupling detuning factor of the full denominator.  The
    population-weighted average of the two C-coherence detunings gives
    W = 2 dm - 2 dp -/+ g_b_eff + delta_cc, which reduces to the familiar
    -/+ g_b form in the symmetric-well case.
    """
    geb, gec = frame.g_b_eff, frame.g_c_eff
    big_p = (2.0 * dm - 2.0 * dp - sign * geb) ** 2 - gec**2
    big_q = 2.0 * dp + sign * geb - 2j * p.gamma_ab
    big_w = 2.0 * dm - 2.0 * dp - sign * geb + p.delta_cc
    zeta = big_p * (big_q**2 - p.g_a**2) + big_q * big_w * p.omega_ac**2
    return big_p, big_q, big_w, zeta


def _safe_ratio(num, zeta, gamma_ab):
    """num / zeta guarding the zeta = 0 corner.

    With gamma_ab > 0 an exactly vanishing denominator can only be the
    removable transparency point of a decoupled C row (the numerator's P
    factor vanishes quadratically there), so the limit is 0.  Without
    damping the zero is a genuine pole and is raised.
    """
    num = np.asarray(num, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    if gamma_ab <= 0.0 and np.any(zeta == 0):
        raise PoleEncountered("closed-form denominator underflowed to zero")
    out = np.zeros(np.broadcast(num, zeta).shape, dtype=complex)
    np.divide(num, zeta, out=out, where=(zeta != 0))
    return out


def branch_amplitudes(p: SystemParams, frame: DressedFrame) -> tuple[float, float]:
    """Population-and-projection weights of the two branch terms."""
    d = frame.theta_b - p.phi_prep
    amp_b = (frame.cos_b * math.cos(d)) ** 2
    amp_bp = (frame.sin_b * math.sin(d)) ** 2
    return amp_b, amp_bp


def branch_coherence_terms(p: SystemParams, delta_p):
    """The two additive contributions to rho_ab (branch B, branch B').

    Accepts a scalar or array of probe detunings; the assembled coherence is
    the sum of the two returned terms.
    """
    frame = frame_for(p)
    dp, dm = with_probe_detuning_shifts(p, np.asarray(delta_p, dtype=float))
    amp_b, amp_bp = branch_amplitudes(p, frame)
    front = p.omega_ab * cmath.exp(-1j * p.phi_ab)
    pb, qb, _, zb = _branch_pieces(p, frame, dp, dm, +1.0)
    pp, qp, _, zp = _branch_pieces(p, frame, dp, dm, -1.0)
    term_b = front * amp_b * _safe_ratio(pb * qb, zb, p.gamma_ab)
    term_bp = front * amp_bp * _safe_ratio(pp * qp, zp, p.gamma_ab)
    return term_b, term_bp


def closed_form_coherence(p: SystemParams, delta_p):
    """Steady-state rho_ab, evaluated in closed form.

    Exactly equal (to rounding) to the assembly of :func:`solve_steady`
    outputs; scalar in, complex out; array in, array out.
    """
    term_b, term_bp = branch_coherence_terms(p, delta_p)
    total = term_b + term_bp
    if np.isscalar(delta_p) or np.ndim(delta_p) == 0:
        return complex(total)
    return total


def closed_form_vector(p: SystemParams, delta_p: float, branch: Branch) -> np.ndarray:
    """Full 4-vector of one branch reconstructed from the closed form.

    Back-substitutes the leading component through the decoupled rows.  The
    divisors cancel analytically (P = 4 d_C d_C' and Q = 2 d_a), so the
    vector stays finite straight through the transparency points; it is used
    as an independent residual cross-check of the assembled system.
    """
    frame = frame_for(p)
    dp, dm = with_probe_detuning_shifts(p, delta_p)
    s = _branch_sign(branch)
    front = p.omega_ab * cmath.exp(-1j * p.phi_ab)
    big_p, big_q, _, zeta = _branch_pieces(p, frame, dp, dm, s)
    if zeta == 0:
        raise PoleEncountered("closed-form denominator underflowed to zero")
    d = frame.theta_b - p.phi_prep
    if branch is Branch.B:
        common = front * frame.cos_b * math.cos(d) ** 2 / zeta
    else:
        common = -front * frame.sin_b * math.sin(d) ** 2 / zeta

    geb, gec = frame.g_b_eff, frame.g_c_eff
    d_c = dp - dm + s * 0.5 * geb - 0.5 * gec
    d_cp = dp - dm + s * 0.5 * geb + 0.5 * gec
    drive_c = 0.5 * p.omega_ac * cmath.exp(1j * p.phi_ac)
    x1 = common * big_p * big_q
    x2 = drive_c * frame.cos_c * common * 4.0 * d_cp * big_q
    x3 = -drive_c * frame.sin_c * common * 4.0 * d_c * big_q
    x4 = p.g_a * common * big_p
    return np.array([x1, x2, x3, x4], dtype=complex)


def degenerate_coherence(p: SystemParams, delta_p):
    """rho_ab for symmetric wells, via the simplified Z+/Z- expression.

    Requires delta_bb = delta_cc = 0 (mixing angles pi/4) with nonzero
    tunneling in both doublets; an independent formula route used to
    cross-check :func:`closed_form_coherence`.  The two resonance amplitudes
    carry the (1 -/+ sin 2 phi_prep) preparation factors explicitly.
    """
    if p.delta_bb != 0.0 or p.delta_cc != 0.0:
        raise NotDegenerate("symmetric-well expression needs delta_bb = delta_cc = 0")
    if p.g_b == 0.0 or p.g_c == 0.0:
        raise DegenerateSubspace("symmetric-well expression needs g_b > 0 and g_c > 0")
    dp, dm = with_probe_detuning_shifts(p, np.asarray(delta_p, dtype=float))
    s2phi = math.sin(2.0 * p.phi_prep)

    def z_term(sig, amp):
        big_p = (2.0 * dm - 2.0 * dp + sig * p.g_b) ** 2 - p.g_c**2
        big_q = 2.0 * dp - sig * p.g_b - 2j * p.gamma_ab
        zeta = big_p * (big_q**2 - p.g_a**2) + big_q * (2.0 * dm - 2.0 * dp + sig * p.g_b) * p.omega_ac**2
        return amp * _safe_ratio(big_p * big_q, zeta, p.gamma_ab)

    z_plus = z_term(+1.0, 1.0 - s2phi)
    z_minus = z_term(-1.0, 1.0 + s2phi)
    total = 0.25 * p.omega_ab * cmath.exp(-1j * p.phi_ab) * (z_plus + z_minus)
    if np.isscalar(delta_p) or np.ndim(delta_p) == 0:
        return complex(total)
    return total


def population_from_coherence(p: SystemParams, rho_ab: complex) -> float:
    """Excited population implied by a first-order coherence.

    Steady-state balance of probe pumping against gamma_a decay:
    rho_aa = omega_ab Im(e^{+i phi_ab} rho_ab) / gamma_a, quadratic in the
    probe since rho_ab itself carries one factor of omega_ab.
    """
    t = rho_ab * cmath.exp(1j * p.phi_ab)
    return p.omega_ab * float(np.imag(t)) / p.gamma_a


def population_aa(p: SystemParams, delta_p):
    """Excited-state population to second order in the probe."""
    coh = closed_form_coherence(p, delta_p)
    if np.ndim(coh) == 0:
        return population_from_coherence(p, coh)
    t = coh * cmath.exp(1j * p.phi_ab)
    return p.omega_ab * np.imag(t) / p.gamma_a


def standard_eit_coherence(delta_p, omega_ac: float, gamma_ab: float, omega_ab: float, phi_ab: float):
    """Textbook single-well EIT coherence (no tunneling, resonant control).

    rho_ab = delta_p omega_ab e^{-i phi_ab}
             / (2 (delta_p (delta_p - i gamma_ab) - (omega_ac/2)^2)).
    """
    dp = np.asarray(delta_p, dtype=float)
    denom = 2.0 * (dp * (dp - 1j * gamma_ab) - (0.5 * omega_ac) ** 2)
    out = dp * omega_ab * cmath.exp(-1j * phi_ab) / denom
    if np.isscalar(delta_p) or np.ndim(delta_p) == 0:
        return complex(out)
    return out
