"""Exception types shared across the toolkit."""


class HppError(Exception):
    """Base class for all toolkit errors."""


class SizeMismatch(HppError):
    pass


class EmptyBases(HppError):
    pass


class ExchangeAxiomViolation(HppError):
    def __init__(self, b1, b2, x):
        self.b1, self.b2, self.x = b1, b2, x
        super().__init__(
            f"exchange axiom fails for B1={sorted(b1)}, B2={sorted(b2)}, x={x}"
        )


class EmptyGroundSet(HppError):
    pass


class NotACircuitHyperplane(HppError):
    pass


class NotAFlat(HppError):
    pass


class ZeroMatrix(HppError):
    pass


class DimensionMismatch(HppError):
    pass


class NotMultiaffine(HppError):
    pass


class EqualIndices(HppError):
    pass


class EmptyFace(HppError):
    pass


class ZeroPolynomial(HppError):
    pass


class NotRepresentable(HppError):
    pass


class RationalizationFailed(HppError):
    pass


class UnknownName(HppError):
    pass


class ParseError(HppError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


class ValidationError(HppError):
    pass
