"""Exception and warning types shared across the package."""


class ParamError(ValueError):
    """A parameter set violates a model invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NonFinite(ParamError):
    """A parameter is NaN or infinite."""


class NonPositiveRate(ParamError):
    """A rate that must be strictly positive is zero or negative."""


class NegativeRate(ParamError):
    """A rate that must be non-negative is negative."""


class UnknownConfigKey(ValueError):
    """A config mapping contains a key that is not a known field."""


class DegenerateSubspace(ValueError):
    """Both the asymmetry and the coupling of a two-state subspace vanish,
    so the mixing angle is undefined."""


class NotDegenerate(ValueError):
    """The simplified symmetric-well expression was requested with nonzero
    well asymmetries."""


class SingularSystem(RuntimeError):
    """The steady-state coefficient matrix is singular."""


class IllConditioned(RuntimeWarning):
    """The steady-state coefficient matrix has a condition estimate above
    1e12; the returned solution may lose digits."""


class PoleEncountered(ArithmeticError):
    """A closed-form denominator underflowed to zero (possible only at
    gamma_ab = 0)."""


class UnphysicalIndex(ValueError):
    """Re chi < -1, so (1 + Re chi)**0.5 is not a real refractive index."""


class StepTooLarge(RuntimeError):
    """Finite-difference step failed the Richardson consistency check."""


class UnresolvedFeature(RuntimeError):
    """Grid spacing near a predicted narrow resonance is too coarse to
    resolve its linewidth."""


class StepUnstable(RuntimeError):
    """Fixed-step integration grew in norm over many consecutive steps."""
