"""Exception hierarchy shared by all foilvpp modules."""


class FoilVppError(ValueError):
    """Base class for every error raised by this package."""


# polar ingestion / lookup
class MalformedRow(FoilVppError):
    pass


class DuplicateAlpha(FoilVppError):
    pass


class TooFewPoints(FoilVppError):
    pass


class OutOfRange(FoilVppError):
    """Angle of attack requested outside the tabulated polar range."""

    def __init__(self, alpha, bounds):
        self.alpha = alpha
        self.bounds = bounds
        super().__init__(f"alpha={alpha:g} deg outside polar range [{bounds[0]:g}, {bounds[1]:g}]")


# finite-wing corrections
class NonPositiveAR(FoilVppError):
    pass


class NonMonotoneSequence(FoilVppError):
    pass


class ZeroDifference(FoilVppError):
    pass


class ZeroAsymptote(FoilVppError):
    pass


class NonGeometricSequence(FoilVppError):
    pass


# fitting
class RankDeficient(FoilVppError):
    pass


class TooFewSamples(FoilVppError):
    pass


# hull / equilibrium / sweep
class OutOfDomain(FoilVppError):
    """A speed or displacement lies outside the fitted hull-data domain."""

    def __init__(self, quantity, value, bounds):
        self.quantity = quantity
        self.value = value
        self.bounds = bounds
        super().__init__(f"{quantity}={value:g} outside [{bounds[0]:g}, {bounds[1]:g}]")


class NoVerticalBalance(FoilVppError):
    pass


class MismatchedSpeedGrids(FoilVppError):
    pass


class ConfigError(FoilVppError):
    pass
