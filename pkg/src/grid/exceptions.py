INVALID_EXPONENT = 'exponent must be > 1, got {exponent}'
NEGATIVE_POTENTIAL = 'potential is negative at {count} grid nodes (min {minimum:.6g})'
NONZERO_BOUNDARY = 'grid field must vanish on the boundary, max boundary value {value:.6g}'
NON_FINITE_FIELD = 'grid field contains {count} non-finite values'


class GridError(ValueError):
    ...


class FieldInvariantError(ValueError):
    ...


class ExponentRangeError(ValueError):
    def __init__(self, exponent: float) -> None:
        super().__init__(INVALID_EXPONENT.format(exponent=exponent))
        self.exponent = exponent

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.exponent,)
