import csv
from pathlib import Path

import numpy as np

from src.grid.exceptions import FieldInvariantError
from src.grid.typings import GridField, GridSpec

VALUE_COLUMN = 'value'


def coordinate_columns(grid: GridSpec) -> list[str]:
    return [f'x{k}' for k in range(grid.dimension)]


def dump_field(field: GridField, path: Path) -> None:
    """Writes one row per node: coordinates then value, in C order. repr() keeps floats exact."""
    grid = field.grid
    coords = grid.coordinates.reshape(grid.dimension, -1)
    values = field.values.reshape(-1)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(coordinate_columns(grid) + [VALUE_COLUMN])
        for index, value in enumerate(values):
            writer.writerow([repr(float(c)) for c in coords[:, index]] + [repr(float(value))])


def load_field(path: Path, grid: GridSpec) -> GridField:
    with path.open('r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        expected = coordinate_columns(grid) + [VALUE_COLUMN]
        if header != expected:
            raise FieldInvariantError(f'unexpected field header {header}, expected {expected}')
        rows = [[float(item) for item in row] for row in reader]

    data = np.asarray(rows, dtype=float)
    if data.shape != (int(np.prod(grid.shape)), grid.dimension + 1):
        raise FieldInvariantError(f'field file {path} does not match grid {grid.to_dict()}')

    coords = grid.coordinates.reshape(grid.dimension, -1).T
    if not np.allclose(data[:, :-1], coords, rtol=0, atol=1e-9 * grid.half_width):
        raise FieldInvariantError(f'node coordinates in {path} do not match the grid')

    return GridField(data[:, -1].reshape(grid.shape), grid)
