import copy
from pathlib import Path
from typing import Any, Sequence

import click
import tomli
import tomli_w

from src.common.utils import format_error
from src.config.defaults import DEFAULT_CONFIG
from src.functional.typings import ProblemConfig
from src.grid.typings import GridSpec
from src.nehari.typings import SolverOptions
from src.nonlinearity.typings import NonlinearityKind, NonlinearitySpec
from src.potential.typings import (
    DecayProfile,
    Perturbation,
    PotentialFamily,
    PotentialRole,
    PotentialSpec,
)
from src.verify.typings import VerifyOptions


class ProblemFile:
    """
    Problem definition in TOML: the built-in defaults, then the file, then
    `key=value` overrides with dotted keys. Every key must exist in the defaults.
    """

    def __init__(
        self,
        config_path: Path | None = None,
        overrides: Sequence[tuple[str, Any]] = (),
    ):
        self.config_path = Path(config_path) if config_path else None
        self.overrides = list(overrides)
        self.data: dict = copy.deepcopy(DEFAULT_CONFIG)

    def load(self) -> None:
        if self.config_path is not None:
            if not self.config_path.is_file():
                raise click.ClickException(f'Config file {self.config_path} does not exist.')
            with self.config_path.open('rb') as f:
                try:
                    loaded = tomli.load(f)
                except tomli.TOMLDecodeError as e:
                    raise click.ClickException(f'Invalid config file {self.config_path}: {e}')
            _merge(self.data, loaded, prefix='')

        for key, value in self.overrides:
            self.set(key, value)
        self._validate()

    def set(self, key: str, value: Any) -> None:
        *parents, leaf = key.split('.')
        section = self.data
        for name in parents:
            section = section.get(name) if isinstance(section, dict) else None
            if not isinstance(section, dict):
                raise click.ClickException(f'Unknown config key "{key}".')
        if leaf not in section or isinstance(section[leaf], dict):
            raise click.ClickException(f'Unknown config key "{key}".')
        section[leaf] = _coerce(key, section[leaf], value)

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('wb') as f:
            tomli_w.dump(self.data, f)

    def problem_config(self) -> ProblemConfig:
        problem = self.data['problem']
        p, q = problem['p'], problem['q']
        dimension = problem['effective_dimension']
        potential = self.data['potential']
        nonlinearity = self.data['nonlinearity']
        return ProblemConfig(
            p=p,
            q=q,
            alpha=problem['alpha'],
            beta=problem['beta'],
            effective_dimension=dimension,
            grid=GridSpec(**self.data['grid']),
            a=_potential(potential['a'], PotentialRole.A),
            b=_potential(potential['b'], PotentialRole.B),
            lam=_potential(potential['lambda'], PotentialRole.LAMBDA),
            f=_nonlinearity(nonlinearity['f'], p, dimension),
            g=_nonlinearity(nonlinearity['g'], q, dimension),
            reg_eps=self.data['solver']['reg_eps'],
        )

    def solver_options(self) -> SolverOptions:
        solver = dict(self.data['solver'])
        del solver['reg_eps']
        return SolverOptions(
            **solver,
            mass_fraction=self.data['verify']['mass_fraction'],
            positivity_tol=self.data['verify']['positivity_tol'],
        )

    def perturbations(self) -> tuple[Perturbation, Perturbation, Perturbation]:
        section = self.data['asymptotic']
        profile = DecayProfile(section['profile'])
        return (
            Perturbation(section['a_amplitude'], section['rate'], profile),
            Perturbation(section['b_amplitude'], section['rate'], profile),
            Perturbation(section['lambda_amplitude'], section['rate'], profile),
        )

    def verify_options(self) -> VerifyOptions:
        return VerifyOptions(
            **self.data['verify'],
            perturbations=self.perturbations(),
            solver=self.solver_options(),
        )

    def _validate(self) -> None:
        """Builds every typed object once so a bad file fails before any computation."""
        try:
            self.problem_config()
            self.verify_options()
        except (ValueError, TypeError) as e:
            raise click.ClickException(f'Invalid problem configuration. {format_error(e)}')


def _merge(target: dict, loaded: dict, prefix: str) -> None:
    for key, value in loaded.items():
        name = f'{prefix}{key}'
        if key not in target:
            raise click.ClickException(f'Unknown config key "{name}".')
        if isinstance(target[key], dict):
            if not isinstance(value, dict):
                raise click.ClickException(f'Expected section "{name}", got {value!r}.')
            _merge(target[key], value, prefix=f'{name}.')
        else:
            target[key] = _coerce(name, target[key], value)


def _coerce(key: str, default: Any, value: Any) -> Any:
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
    elif isinstance(default, int):
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif isinstance(default, float):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif isinstance(default, str):
        if isinstance(value, str):
            return value
    elif isinstance(default, list):
        if isinstance(value, list):
            return value
    raise click.ClickException(
        f'Expected "{key}" to be {type(default).__name__}, got {type(value).__name__}.'
    )


def _potential(section: dict, role: PotentialRole) -> PotentialSpec:
    family = PotentialFamily(section['family'])
    perturbation = None
    if family == PotentialFamily.ASYMPTOTICALLY_PERIODIC:
        perturbation = Perturbation(
            section['perturbation_amplitude'],
            section['perturbation_rate'],
            DecayProfile(section['perturbation_profile']),
        )
    return PotentialSpec(
        family=family,
        role=role,
        base_level=section['base_level'],
        modulation_amplitude=section['modulation_amplitude'],
        perturbation=perturbation,
        ball_radius=section['ball_radius'],
        ball_floor=section['ball_floor'],
    )


def _nonlinearity(section: dict, exponent: float, dimension: float) -> NonlinearitySpec:
    return NonlinearitySpec(
        kind=NonlinearityKind(section['family']),
        exponent=exponent,
        dimension=dimension,
        gamma=section['gamma'],
        power=section['power'],
        table=tuple(tuple(float(x) for x in row) for row in section['table']),
    )
