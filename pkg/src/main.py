import multiprocessing
import warnings

import click

import src
from src.commands.compare import compare
from src.commands.project import project
from src.commands.solve import solve
from src.commands.sweep import sweep
from src.commands.verify import verify


@click.version_option(version=src.__version__, prog_name='pq-nehari ground-state solver')
@click.group()
def cli() -> None:
    pass


cli.add_command(solve)
cli.add_command(project)
cli.add_command(verify)
cli.add_command(compare)
cli.add_command(sweep)

if __name__ == '__main__':
    warnings.filterwarnings('ignore', category=DeprecationWarning)
    multiprocessing.freeze_support()
    cli()
