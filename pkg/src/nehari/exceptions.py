from src.nehari.typings import TraceEntry

ZERO_STATE = 'state (0, 0) has no projection onto the Nehari manifold'
NO_BRACKET = (
    'no sign change of the fibering derivative within {steps} steps from t=1 (last t={t:.6g})'
)
NONPOSITIVE_LHS = (
    'fibering derivative is nonpositive for small t: norm part minus coupling = {value:.6g}'
)
INVALID_SCALE = 'fiber scale must be {bound}, got {t}'
STALLED = 'line search stalled after {halvings} halvings at iteration {iteration}'
BLOW_UP = 'energy {energy:.6g} dropped below {limit:.6g} at iteration {iteration}'
NEGATIVE_COUPLING = 'operation requires lambda >= 0 on the grid, min value {minimum:.6g}'


class ZeroStateError(ValueError):
    def __init__(self) -> None:
        super().__init__(ZERO_STATE)

    def __reduce__(self):  # type: ignore
        return self.__class__, ()


class FiberParameterError(ValueError):
    def __init__(self, t: float, bound: str) -> None:
        super().__init__(INVALID_SCALE.format(t=t, bound=bound))
        self.t = t
        self.bound = bound

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.t, self.bound)


class ProjectionError(RuntimeError):
    ...


class NegativeCouplingError(ValueError):
    def __init__(self, minimum: float) -> None:
        super().__init__(NEGATIVE_COUPLING.format(minimum=minimum))
        self.minimum = minimum

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.minimum,)


class LineSearchStalledError(RuntimeError):
    def __init__(self, halvings: int, iteration: int, trace: list[TraceEntry]) -> None:
        super().__init__(STALLED.format(halvings=halvings, iteration=iteration))
        self.halvings = halvings
        self.iteration = iteration
        self.trace = trace

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.halvings, self.iteration, self.trace)


class BlowUpError(RuntimeError):
    def __init__(self, energy: float, limit: float, iteration: int) -> None:
        super().__init__(BLOW_UP.format(energy=energy, limit=limit, iteration=iteration))
        self.energy = energy
        self.limit = limit
        self.iteration = iteration

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.energy, self.limit, self.iteration)


class EnergyComparisonError(ArithmeticError):
    ...
