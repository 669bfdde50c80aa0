from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.grid.exceptions import (
    NON_FINITE_FIELD,
    NONZERO_BOUNDARY,
    FieldInvariantError,
    GridError,
)

MIN_NODES_PER_AXIS = 16


@dataclass(frozen=True)
class GridSpec:
    """Box [center - L, center + L]^dimension with zero values on the boundary."""

    dimension: int
    half_width: float
    nodes_per_axis: int
    center: float = 0.0

    def __post_init__(self) -> None:
        if self.dimension not in (1, 2, 3):
            raise GridError(f'grid dimension must be 1, 2 or 3, got {self.dimension}')
        if not self.half_width > 0:
            raise GridError(f'grid half width must be positive, got {self.half_width}')
        if self.nodes_per_axis < MIN_NODES_PER_AXIS:
            raise GridError(
                f'nodes per axis must be at least {MIN_NODES_PER_AXIS}, got {self.nodes_per_axis}'
            )

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / (self.nodes_per_axis - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.nodes_per_axis,) * self.dimension

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dimension

    @cached_property
    def axis(self) -> np.ndarray:
        return np.linspace(
            self.center - self.half_width, self.center + self.half_width, self.nodes_per_axis
        )

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Node coordinates, shape (dimension, n, ..., n)."""
        return np.stack(np.meshgrid(*([self.axis] * self.dimension), indexing='ij'))

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(np.sum(self.coordinates**2, axis=0))

    @cached_property
    def interior(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[(slice(1, -1),) * self.dimension] = True
        return mask

    @cached_property
    def weights(self) -> np.ndarray:
        """Tensor-product trapezoid weights."""
        w1 = np.full(self.nodes_per_axis, self.spacing)
        w1[0] = w1[-1] = self.spacing / 2
        w = w1
        for _ in range(self.dimension - 1):
            w = np.multiply.outer(w, w1)
        return w

    def core(self, collar: int) -> tuple[slice, ...]:
        """Index of the nodes at least `collar + 1` cells away from the boundary."""
        return (slice(collar + 1, self.nodes_per_axis - collar - 1),) * self.dimension

    def to_dict(self) -> dict:
        return {
            'dimension': self.dimension,
            'half_width': self.half_width,
            'nodes_per_axis': self.nodes_per_axis,
            'center': self.center,
        }


@dataclass
class GridField:
    values: np.ndarray
    grid: GridSpec

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise FieldInvariantError(
                f'field shape {self.values.shape} does not match grid shape {self.grid.shape}'
            )
        bad = np.count_nonzero(~np.isfinite(self.values))
        if bad:
            raise FieldInvariantError(NON_FINITE_FIELD.format(count=bad))
        boundary = self.values[~self.grid.interior]
        if np.any(boundary != 0):
            raise FieldInvariantError(NONZERO_BOUNDARY.format(value=np.max(np.abs(boundary))))

    @classmethod
    def zeros(cls, grid: GridSpec) -> 'GridField':
        return cls(np.zeros(grid.shape), grid)

    @classmethod
    def from_function(cls, grid: GridSpec, values: np.ndarray) -> 'GridField':
        """Samples node values and clamps the boundary layer to zero."""
        values = np.where(grid.interior, values, 0.0)
        return cls(values, grid)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)
