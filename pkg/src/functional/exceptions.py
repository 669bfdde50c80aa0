IDENTITY_VIOLATED = 'exponent identity violated: alpha/p + beta/q = {value:.6g} != 1'
NON_FINITE_TERM = 'non-finite value in the {term} term'
SUPERCRITICAL = '{name} nonlinearity is not subcritical: critical exponent {critical:.6g}'
ZERO_COUPLING = 'coupling coefficient vanishes on the grid, delta cannot be rescaled'


class ConfigValidationError(ValueError):
    ...


class NumericError(ArithmeticError):
    def __init__(self, term: str) -> None:
        super().__init__(NON_FINITE_TERM.format(term=term))
        self.term = term

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.term,)
