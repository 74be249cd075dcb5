"""Exception types shared across the package."""


class MobiusminError(Exception):
    """Base class for all package errors."""


class DomainError(MobiusminError):
    """Evaluation outside an annulus of validity, or incompatible annuli."""


class PoleError(MobiusminError):
    """Evaluation at (or through) a pole of the data."""


class NonExactFormError(MobiusminError):
    """A 1-form with nonvanishing residue cannot be integrated single-valuedly."""


class InvalidPunctureError(MobiusminError):
    """Puncture pair is zero, coincident, or antipodally coincident."""


class UnitAnnulusError(MobiusminError):
    """Puncture moduli violate the |alpha|, |beta| > 1 requirement."""


class ZeroInAnnulusError(MobiusminError):
    """A zero of the multiplier lies inside the closed working annulus."""


class ParameterError(MobiusminError):
    """Structural parameter violates a hypothesis (parity, degree, grid size)."""


class NoValidRootError(MobiusminError):
    """The quadratic for the second multiplier parameter has no usable root."""


class RegularityError(MobiusminError):
    """All three form densities vanish at a point (non-immersed point)."""


class ConfigError(MobiusminError):
    """Run configuration is unparseable or violates a cross-constraint."""
