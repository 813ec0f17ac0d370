"""
`bounds`: Poisson-approximation check for an erasure profile.
"""

from pathlib import Path

import click

from erasefl.commands.options import format_row
from erasefl.dependencies import load_config
from erasefl.models.channel import LinkBudget
from erasefl.repositories.results import ResultRepository
from erasefl.schemas.experiment import RunConfig
from erasefl.schemas.reports import ErasureProfile
from erasefl.services.analysis import le_cam_check
from erasefl.services.channel import average_erasure_probability


@click.command("bounds")
@click.option("--eps", default=None, help="Comma-separated erasure probabilities, e.g. 0.1,0.2")
@click.option(
    "--config", "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Derive the profile from a config's fading-averaged erasure probability",
)
@click.option(
    "--out", "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Also write bounds.csv to this directory",
)
@click.pass_context
def bounds_command(ctx: click.Context, eps: str | None, config_path: Path | None, output_dir: Path | None):
    """
    Print lambda, tv_sum, bound and holds.

    Exits 0 when the bound holds and 1 when it does not.
    """
    if (eps is None) == (config_path is None):
        raise click.UsageError("give exactly one of --eps and --config")
    if eps is not None:
        profile = ErasureProfile.parse(eps)
    else:
        config = load_config(config_path, RunConfig)
        mean_eps = average_erasure_probability(LinkBudget.from_config(config.channel))
        profile = ErasureProfile(eps=[mean_eps] * config.num_users)

    report = le_cam_check(profile)
    click.echo(format_row(report))
    if output_dir is not None:
        ResultRepository(output_dir).write_bounds(report)
    ctx.exit(0 if report.holds else 1)
