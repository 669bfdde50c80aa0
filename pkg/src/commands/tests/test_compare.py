import json
from pathlib import Path
from typing import Callable

from click.testing import CliRunner

from src.commands.compare import compare
from src.config.settings import REPORT_FILENAME
from src.scalar.typings import FULLY_NONTRIVIAL


class TestCompare:
    def test_without_asymptotic(
        self, runner: CliRunner, temp_dir: Path, write_problem: Callable[..., Path]
    ):
        args = [
            '--config',
            str(write_problem()),
            '--out',
            str(temp_dir),
            '--pool-size',
            '1',
            '--no-asymptotic',
        ]
        result = runner.invoke(compare, args)

        assert result.exit_code == 0, result.output
        assert f'verdict {FULLY_NONTRIVIAL}' in result.output
        report = json.loads((temp_dir / REPORT_FILENAME).read_text(encoding='utf-8'))
        assert report['semitrivial']['verdict'] == FULLY_NONTRIVIAL
        assert [scalar['side'] for scalar in report['scalar']] == ['a', 'b']
        assert report['trial_state_bound']['holds'] is True
        assert 'asymptotic' not in report
        assert 'truncation' not in report

    def test_with_asymptotic(
        self, runner: CliRunner, temp_dir: Path, write_problem: Callable[..., Path]
    ):
        args = [
            '--config',
            str(write_problem()),
            '--out',
            str(temp_dir),
            '--pool-size',
            '1',
        ]
        result = runner.invoke(compare, args)

        assert result.exit_code == 0, result.output
        report = json.loads((temp_dir / REPORT_FILENAME).read_text(encoding='utf-8'))
        assert report['asymptotic']['strict'] is True
        assert report['asymptotic']['consistent'] is True
        assert len(report['gap_trend']['gaps']) == 4

    def test_infeasible_budget(
        self, runner: CliRunner, temp_dir: Path, write_problem: Callable[..., Path]
    ):
        args = ['--config', str(write_problem(lam=2.0, level=1.0)), '--out', str(temp_dir)]
        result = runner.invoke(compare, args)
        assert result.exit_code == 1
        assert 'coupling budget infeasible' in result.output
