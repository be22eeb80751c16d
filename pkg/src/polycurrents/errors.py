class PolyCurrentsError(ValueError):
    """Base class for invalid inputs to this package."""


class UnsupportedGeodesicError(PolyCurrentsError):
    """A straight chord or coordinate evaluation was requested on a non-embedded space."""


class SpaceMismatchError(PolyCurrentsError):
    pass


class NotAcyclicError(PolyCurrentsError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"current is not acyclic; directed cycle through vertices {self.cycle}")


class UnbalancedError(PolyCurrentsError):
    def __init__(self, plus_total, minus_total):
        self.plus_total = plus_total
        self.minus_total = minus_total
        super().__init__(
            f"unequal total masses: plus={plus_total!r}, minus={minus_total!r}"
        )


class LipschitzError(PolyCurrentsError):
    pass


class InfeasibleFlowError(PolyCurrentsError):
    pass
