"""
`run`: Monte Carlo experiment for every scheme in a config file.
"""

from pathlib import Path

import click

from erasefl.commands.options import config_option, format_row, out_option, replicas_option, seed_option
from erasefl.dependencies import get_simulation_service, load_config, warn_if_short_packet
from erasefl.models.channel import LinkBudget
from erasefl.repositories.results import ResultRepository
from erasefl.schemas.experiment import RunConfig
from erasefl.services.simulation import derive_rounds


@click.command("run")
@config_option
@out_option
@seed_option
@replicas_option
def run_command(config_path: Path, output_dir: Path, seed: int | None, replicas: int | None):
    """Run the Monte Carlo experiment and write rounds.csv and summary.csv."""
    config = load_config(config_path, RunConfig, seed=seed, replicas=replicas)
    experiments = config.experiments()
    # every scheme shares the channel, so one check covers the file
    derive_rounds(experiments[0], LinkBudget.from_config(config.channel))
    warn_if_short_packet(config.channel)

    service = get_simulation_service()
    results = []
    summary = []
    for experiment in experiments:
        result = service.run_monte_carlo(experiment)
        row = service.summarize(experiment, result)
        results.append((experiment.scheme.label, result))
        summary.append(row)
        click.echo(format_row(row))

    repository = ResultRepository(output_dir)
    repository.write_rounds(results)
    repository.write_summary(summary)
