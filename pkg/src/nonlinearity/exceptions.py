NON_FINITE_ARGUMENT = 'nonlinearity argument must be finite'
SINGULAR_DERIVATIVE = 'derivative is singular at t=0 for paired exponent {exponent} < 2'
UNSORTED_SAMPLES = 'probe samples must be strictly increasing and positive'
TOO_FEW_SAMPLES = 'probe set needs at least {count} samples spanning {decades} decades'


class NonlinearityDomainError(ValueError):
    def __init__(self, msg: str = NON_FINITE_ARGUMENT) -> None:
        super().__init__(msg)


class SingularDerivativeError(ValueError):
    def __init__(self, exponent: float) -> None:
        super().__init__(SINGULAR_DERIVATIVE.format(exponent=exponent))
        self.exponent = exponent

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.exponent,)


class SamplePreconditionError(ValueError):
    ...
