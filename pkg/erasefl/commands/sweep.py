"""
`sweep`: final MSE over a grid of rates, SNRs and memory depths.
"""

from pathlib import Path

import click

from erasefl.commands.options import config_option, format_row, out_option, replicas_option, seed_option
from erasefl.dependencies import get_simulation_service, load_config, warn_if_short_packet
from erasefl.models.channel import LinkBudget
from erasefl.schemas.experiment import SweepConfig
from erasefl.repositories.results import ResultRepository
from erasefl.services.simulation import derive_rounds


@click.command("sweep")
@config_option
@out_option
@seed_option
@replicas_option
def sweep_command(config_path: Path, output_dir: Path, seed: int | None, replicas: int | None):
    """Sweep the grid in the config's `sweep` section and write sweep.csv."""
    config = load_config(config_path, SweepConfig, seed=seed, replicas=replicas)
    spec = config.sweep
    base = config.experiments()[0]
    time_budget = spec.time_budget if spec.time_budget is not None else base.time_budget

    # reject grid points with no rounds before anything runs
    for rate in dict.fromkeys(spec.rates):
        channel = base.channel.model_copy(update={"rate": rate})
        derive_rounds(base.model_copy(update={"time_budget": time_budget}), LinkBudget.from_config(channel))
        warn_if_short_packet(channel)

    service = get_simulation_service()
    rows = []
    for experiment in config.experiments():
        for row in service.sweep(spec, experiment):
            rows.append(row)
            click.echo(format_row(row))

    ResultRepository(output_dir).write_sweep(rows)
