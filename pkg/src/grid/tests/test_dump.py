from pathlib import Path

import numpy as np
import pytest

from src.grid.dump import dump_field, load_field
from src.grid.exceptions import FieldInvariantError
from src.grid.typings import GridField, GridSpec


class TestFieldDump:
    @pytest.mark.parametrize('dimension', [1, 2])
    def test_reload_is_exact(self, temp_dir: Path, dimension: int):
        grid = GridSpec(dimension=dimension, half_width=3.0, nodes_per_axis=17)
        rng = np.random.default_rng(7)
        field = GridField.from_function(grid, rng.standard_normal(grid.shape) / 3)
        path = temp_dir / 'u.csv'

        dump_field(field, path)
        loaded = load_field(path, grid)

        assert np.array_equal(loaded.values, field.values)

    def test_header(self, temp_dir: Path):
        grid = GridSpec(dimension=2, half_width=1.0, nodes_per_axis=16)
        path = temp_dir / 'u.csv'
        dump_field(GridField.zeros(grid), path)
        with path.open(encoding='utf-8') as f:
            assert f.readline().strip() == 'x0,x1,value'

    def test_grid_mismatch(self, temp_dir: Path):
        grid = GridSpec(dimension=1, half_width=1.0, nodes_per_axis=16)
        path = temp_dir / 'u.csv'
        dump_field(GridField.zeros(grid), path)
        with pytest.raises(FieldInvariantError):
            load_field(path, GridSpec(dimension=1, half_width=1.0, nodes_per_axis=17))
