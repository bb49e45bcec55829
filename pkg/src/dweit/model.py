"""Parameter model for a three-level Lambda medium in a tunnel-coupled double well.

One ``SystemParams`` instance describes one physical configuration: probe and
control Rabi frequencies and phases, excited-state and coherence decay,
per-level interwell tunneling frequencies, well asymmetries, control
detuning, preparation angle, and optional mean-field shifts.  All rates are
stored in units of the coherence decay ``gamma_ab`` (the CLI converts s^-1
inputs); the probe detuning is deliberately *not* a field here - it is the
scan variable passed to every evaluation.

Instances are immutable after :func:`validate_params`, so a single
configuration can be shared freely between concurrent evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import NegativeRate, NonFinite, NonPositiveRate, UnknownConfigKey

#: Fields carrying a rate (divided by gamma_ab when converting SI input).
RATE_FIELDS = (
    "omega_ac",
    "omega_ab",
    "gamma_a",
    "gamma_ab",
    "g_a",
    "g_b",
    "g_c",
    "delta_bb",
    "delta_cc",
    "delta_mu",
    "u_bb",
    "u_cb",
    "u_ab",
    "omega_p",
)

#: Fields that are non-negative by definition.
_NONNEGATIVE_FIELDS = ("omega_ac", "g_a", "g_b", "g_c")


@dataclass(frozen=True)
class SystemParams:
    """All physical rates, detunings and angles defining one configuration.

    Attributes
    ----------
    omega_ac, omega_ab:
        Control and probe Rabi frequencies.  The probe enters the linear
        response only as an overall factor; keeping omega_ab << gamma_ab is
        the caller's contract and is not enforced.
    phi_ab, phi_ac:
        Laser phases in radians.
    gamma_a, gamma_ab:
        Excited-state population decay and optical coherence decay.  With
        pure dephasing and ground-state decay set to zero, gamma_ab defaults
        to gamma_a / 2.
    g_a, g_b, g_c:
        Interwell tunneling frequencies per internal level (twice the
        Josephson coupling energy over hbar).
    delta_bb, delta_cc:
        Mean-field well asymmetries of the b/b' and c/c' doublets.
    delta_mu:
        Control-laser detuning (already including any static shift).
    phi_prep:
        Preparation angle: initial dressed populations are
        cos^2(theta_b - phi_prep) and sin^2(theta_b - phi_prep).
    u_bb, u_cb, u_ab:
        Optional mean-field shifts, applied as detuning substitutions
        delta_p -> delta_p - u_bb/2 + u_ab and
        delta_mu -> delta_mu - u_cb/2 + u_ab (no population feedback).
    prefactor:
        Dimensionless optical-density constant multiplying the plotted
        susceptibility.
    omega_p:
        Optical carrier scale entering only the group-velocity denominator.
    """

    omega_ac: float = 0.0
    omega_ab: float = 1.0
    phi_ab: float = 0.0
    phi_ac: float = 0.0
    gamma_a: float = 2.0
    gamma_ab: float | None = None
    g_a: float = 0.0
    g_b: float = 0.0
    g_c: float = 0.0
    delta_bb: float = 0.0
    delta_cc: float = 0.0
    delta_mu: float = 0.0
    phi_prep: float = 0.0
    u_bb: float = 0.0
    u_cb: float = 0.0
    u_ab: float = 0.0
    prefactor: float = 1.0
    omega_p: float = 1.0e8


FIELD_NAMES = tuple(f.name for f in fields(SystemParams))


def violations(p: SystemParams) -> list[str]:
    """Return a list of violated invariants (empty when p is valid)."""
    bad = []
    for name in FIELD_NAMES:
        value = getattr(p, name)
        if value is None:
            continue
        if not math.isfinite(value):
            bad.append(f"{name} is not finite: {value!r}")
    if bad:
        # Finiteness failures make the remaining checks meaningless.
        return bad
    if p.gamma_a <= 0.0:
        bad.append(f"gamma_a must be > 0, got {p.gamma_a!r}")
    if p.gamma_ab is not None and p.gamma_ab <= 0.0:
        bad.append(f"gamma_ab must be > 0, got {p.gamma_ab!r}")
    if p.omega_ab <= 0.0:
        bad.append(f"omega_ab must be > 0, got {p.omega_ab!r}")
    for name in _NONNEGATIVE_FIELDS:
        if getattr(p, name) < 0.0:
            bad.append(f"{name} must be >= 0, got {getattr(p, name)!r}")
    return bad


def validate_params(p: SystemParams) -> SystemParams:
    """Check invariants and fill defaults; idempotent.

    Returns a new instance with every field coerced to float and with
    ``gamma_ab = gamma_a / 2`` filled in when unset.

    Raises
    ------
    NonFinite
        if any field is NaN or infinite.
    NonPositiveRate
        if gamma_a, gamma_ab or omega_ab is not strictly positive.
    NegativeRate
        if a tunneling frequency or omega_ac is negative.
    """
    bad = violations(p)
    if bad:
        if any("not finite" in b for b in bad):
            raise NonFinite(bad)
        if any("must be > 0" in b for b in bad):
            raise NonPositiveRate(bad)
        raise NegativeRate(bad)
    values = {name: float(getattr(p, name)) for name in FIELD_NAMES if getattr(p, name) is not None}
    if p.gamma_ab is None:
        values["gamma_ab"] = values["gamma_a"] / 2.0
    return SystemParams(**values)


def params_to_config(p: SystemParams) -> dict[str, float]:
    """Flat mapping of field name -> value, the external config format."""
    q = validate_params(p)
    return {name: getattr(q, name) for name in FIELD_NAMES}


def params_from_config(config: dict) -> SystemParams:
    """Build validated params from a flat config mapping.

    Unknown keys are an error; missing keys take their defaults.
    """
    unknown = sorted(set(config) - set(FIELD_NAMES))
    if unknown:
        raise UnknownConfigKey(f"unknown config keys: {', '.join(unknown)}")
    return validate_params(SystemParams(**config))


def to_si_free(config: dict, gamma_ab_si: float) -> dict:
    """Divide every rate-valued entry of a config mapping by gamma_ab_si.

    Used by the CLI --units si path; non-rate keys pass through untouched.
    """
    if not (gamma_ab_si > 0.0) or not math.isfinite(gamma_ab_si):
        raise NonPositiveRate(f"si units need gamma_ab > 0, got {gamma_ab_si!r}")
    out = {}
    for key, value in config.items():
        if key in RATE_FIELDS and value is not None:
            out[key] = float(value) / gamma_ab_si
        else:
            out[key] = value
    return out


def with_probe_detuning_shifts(p: SystemParams, delta_p: float) -> tuple[float, float]:
    """Apply the mean-field detuning substitutions.

    Returns the shifted (delta_p, delta_mu) pair used by every steady-state
    expression: delta_p - u_bb/2 + u_ab and delta_mu - u_cb/2 + u_ab.
    """
    dp = delta_p - 0.5 * p.u_bb + p.u_ab
    dm = p.delta_mu - 0.5 * p.u_cb + p.u_ab
    return dp, dm


def scaled(p: SystemParams, **changes) -> SystemParams:
    """replace() that re-validates, for building derived configurations."""
    return validate_params(replace(p, **changes))
