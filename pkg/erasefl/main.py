"""
Command-line entry point.

    python -m erasefl.main run --config configs/fig1.yaml --out results/fig1
"""

import click

from erasefl.commands import bounds_command, dataset_command, run_command, sweep_command
from erasefl.exceptions import ErasureFLError
from erasefl.logging_config import configure_logging


class ErasureFLGroup(click.Group):
    """Group that turns simulator errors into a message and an exit code."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except ErasureFLError as e:
            click.echo(f"error: {e.detail}", err=True)
            ctx.exit(e.exit_code)


@click.group(cls=ErasureFLGroup)
@click.option("--quiet", is_flag=True, help="Only log warnings and errors")
def cli(quiet: bool):
    """Federated learning over packet-erasure uplinks."""
    configure_logging(quiet=quiet)


cli.add_command(run_command)
cli.add_command(sweep_command)
cli.add_command(bounds_command)
cli.add_command(dataset_command)


if __name__ == "__main__":
    cli()
