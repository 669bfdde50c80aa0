NEGATIVE_COEFFICIENT = '{role} potential must be nonnegative, min value {minimum:.6g}'
INFEASIBLE_COUPLING = (
    'coupling bound unattainable: lambda != 0 at {count} nodes where a or b vanishes'
)
INFEASIBLE_BUDGET = (
    'coupling budget infeasible: delta = {delta:.6g}, margin 1/q - delta*max(alpha/p, beta/q)'
    ' = {margin:.6g}'
)
PERTURBATION_SIGN = '{role} perturbation must be strictly {sign} at every node'
SPECTRAL_FLOOR = '{role} side spectral bound {value:.6g} does not exceed floor {floor:.6g}'


class PotentialSignError(ValueError):
    ...


class InfeasibleCouplingError(ValueError):
    ...


class PerturbationSignError(ValueError):
    def __init__(self, role: str, sign: str) -> None:
        super().__init__(PERTURBATION_SIGN.format(role=role, sign=sign))
        self.role = role
        self.sign = sign

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.role, self.sign)


class SpectralFloorError(ValueError):
    def __init__(self, role: str, value: float, floor: float) -> None:
        super().__init__(SPECTRAL_FLOOR.format(role=role, value=value, floor=floor))
        self.role = role
        self.value = value
        self.floor = floor

    def __reduce__(self):  # type: ignore
        return self.__class__, (self.role, self.value, self.floor)
