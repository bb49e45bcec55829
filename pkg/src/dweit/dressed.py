"""Dressed bases for the tunnel-coupled ground doublets and the control-laser
eigensystem.

Tunneling couples each internal level to its twin in the neighboring well.
Diagonalizing the b/b' and c/c' two-state blocks gives delocalized dressed
states |B>, |B'>, |C>, |C'> separated by the effective splittings
g_eff = sqrt(delta^2 + g^2), with mixing angle components on the principal
branch (cos, sin >= 0).  The excited state |a>, the control-coupled |c> and
its twin |c'> form a three-state chain whose zero-energy eigenstate contains
no |c> component at all - the dark state responsible for the ultranarrow
absorption resonances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSubspace
from .model import SystemParams


def mixing(delta: float, g: float) -> tuple[float, float, float]:
    """Mixing-angle components and effective splitting of a two-state block.

    Returns ``(cos_theta, sin_theta, g_eff)`` with
    ``cos_theta = sqrt((1 - delta/g_eff)/2)``,
    ``sin_theta = sqrt((1 + delta/g_eff)/2)`` and
    ``g_eff = sqrt(delta**2 + g**2)``.  For ``delta = 0`` this is the
    symmetric/antisymmetric pair ``(1/sqrt(2), 1/sqrt(2), g)``.

    Raises :class:`DegenerateSubspace` when both arguments vanish: any basis
    then diagonalizes the block and a silent default would hide a
    configuration mistake.
    """
    g_eff = math.hypot(delta, g)
    if g_eff == 0.0:
        raise DegenerateSubspace("mixing angle undefined at delta = g = 0")
    x = delta / g_eff
    # Evaluate the larger component by its square root and recover the
    # smaller one from 2 cos sin = g / g_eff, which avoids the cancellation
    # in (1 -/+ x)/2 when |delta| >> g.
    if x >= 0.0:
        sin_t = math.sqrt(0.5 * (1.0 + x))
        cos_t = 0.0 if g == 0.0 else g / (2.0 * g_eff * sin_t)
    else:
        cos_t = math.sqrt(0.5 * (1.0 - x))
        sin_t = 0.0 if g == 0.0 else g / (2.0 * g_eff * cos_t)
    return cos_t, sin_t, g_eff


@dataclass(frozen=True)
class DressedFrame:
    """Mixing angles and effective splittings of the b/b' and c/c' doublets."""

    cos_b: float
    sin_b: float
    cos_c: float
    sin_c: float
    g_b_eff: float
    g_c_eff: float

    @property
    def theta_b(self) -> float:
        return math.atan2(self.sin_b, self.cos_b)

    @property
    def theta_c(self) -> float:
        return math.atan2(self.sin_c, self.cos_c)


def _block(delta: float, g: float) -> tuple[float, float, float]:
    # An exactly decoupled doublet (delta = g = 0) has no interwell physics;
    # the bare basis (theta = 0) is the correct limit and keeps the
    # no-tunneling configuration equal to a standard single-well medium.
    if delta == 0.0 and g == 0.0:
        return 1.0, 0.0, 0.0
    return mixing(delta, g)


def frame_for(p: SystemParams) -> DressedFrame:
    """Dressed frame of a validated parameter set."""
    cos_b, sin_b, g_b_eff = _block(p.delta_bb, p.g_b)
    cos_c, sin_c, g_c_eff = _block(p.delta_cc, p.g_c)
    return DressedFrame(cos_b, sin_b, cos_c, sin_c, g_b_eff, g_c_eff)


def rotation_matrix(frame: DressedFrame) -> np.ndarray:
    """6x6 orthogonal map from the bare basis (a, b, c, a', b', c') to the
    dressed basis (a, B, C, a', B', C')."""
    cb, sb = frame.cos_b, frame.sin_b
    cc, sc = frame.cos_c, frame.sin_c
    d = np.zeros((6, 6))
    d[0, 0] = 1.0
    d[3, 3] = 1.0
    d[1, 1] = cb
    d[1, 4] = sb
    d[4, 1] = -sb
    d[4, 4] = cb
    d[2, 2] = cc
    d[2, 5] = sc
    d[5, 2] = -sc
    d[5, 5] = cc
    return d


@dataclass(frozen=True)
class AccEigensystem:
    """Eigensystem of the {|a>, |c>, |c'>} chain, energies relative to the
    bare excited state."""

    e_plus: float
    e_minus: float
    e_zero: float
    v_plus: np.ndarray
    v_minus: np.ndarray
    v_zero: np.ndarray


def acc_hamiltonian(omega_ac: float, g_c: float) -> np.ndarray:
    """Traceless 3x3 Hamiltonian of the a-c-c' chain over (|a>, |c>, |c'>)."""
    return 0.5 * np.array(
        [
            [0.0, omega_ac, 0.0],
            [omega_ac, 0.0, -g_c],
            [0.0, -g_c, 0.0],
        ]
    )


def _sign_fixed(v: np.ndarray) -> np.ndarray:
    # Deterministic eigenvector sign: first nonzero component positive.
    for comp in v:
        if comp != 0.0:
            return -v if comp < 0.0 else v
    return v


def acc_eigensystem(omega_ac: float, g_c: float) -> AccEigensystem:
    """Closed-form eigenpairs of the control-laser/tunneling chain.

    The mixing angle obeys tan(theta) = -omega_ac / g_c; the zero-energy
    eigenvector is a superposition of |a> and |c'> with exactly no |c>
    component, so it is dark with respect to the control laser.
    """
    r = math.hypot(omega_ac, g_c)
    if r == 0.0:
        raise DegenerateSubspace("a-c-c' chain undefined at omega_ac = g_c = 0")
    sin_t = omega_ac / r
    cos_t = -g_c / r
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    v_plus = _sign_fixed(np.array([sin_t, 1.0, cos_t]) * inv_sqrt2)
    v_minus = _sign_fixed(np.array([sin_t, -1.0, cos_t]) * inv_sqrt2)
    v_zero = _sign_fixed(np.array([cos_t, 0.0, -sin_t]))
    return AccEigensystem(
        e_plus=0.5 * r,
        e_minus=-0.5 * r,
        e_zero=0.0,
        v_plus=v_plus,
        v_minus=v_minus,
        v_zero=v_zero,
    )
