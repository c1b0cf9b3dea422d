"""Exception hierarchy shared by all hopflattice modules."""


class HopfLatticeError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(HopfLatticeError, ValueError):
    pass


class NotAGroup(HopfLatticeError, ValueError):
    pass


class NoSolution(HopfLatticeError):
    """The Haar system does not have a one-dimensional solution space."""


class NormalizationFailure(HopfLatticeError):
    pass


class NotSemisimple(HopfLatticeError):
    pass


class RandomizationExhausted(HopfLatticeError):
    pass


class NotAMorphism(HopfLatticeError, ValueError):
    pass


class ConstructionFailure(HopfLatticeError):
    def __init__(self, axiom, residual):
        super().__init__(f"axiom {axiom!r} fails with residual {residual:.3e}")
        self.axiom = axiom
        self.residual = residual


class Mismatch(HopfLatticeError):
    pass


class QuasitriangularityFailure(HopfLatticeError):
    def __init__(self, basis_index, residual):
        super().__init__(
            f"R·Δ(b) != Δ^op(b)·R for basis element {basis_index} (residual {residual:.3e})")
        self.basis_index = basis_index
        self.residual = residual


class UnknownSurface(HopfLatticeError, ValueError):
    pass


class InvalidSite(HopfLatticeError, ValueError):
    pass


class SitesNotDisjoint(HopfLatticeError, ValueError):
    pass


class NonIntegerTrace(HopfLatticeError):
    def __init__(self, value, context=""):
        msg = f"projector trace {value!r} is not an integer"
        super().__init__(f"{context}: {msg}" if context else msg)
        self.value = value
        self.context = context


class NonIntegerMultiplicity(HopfLatticeError):
    pass


class TooLarge(HopfLatticeError):
    pass


class UnsupportedFlavor(HopfLatticeError, ValueError):
    pass


class SpecError(HopfLatticeError, ValueError):
    """A command-line algebra/surface/site spec string could not be parsed."""
