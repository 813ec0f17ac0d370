"""
`dataset`: dump replica 0's non-i.i.d. training data for plotting.
"""

from pathlib import Path

import click

from erasefl.commands.options import config_option, out_option, seed_option
from erasefl.dependencies import load_config
from erasefl.repositories.results import ResultRepository
from erasefl.schemas.experiment import RunConfig
from erasefl.services.simulation import build_feature_map, generate_noniid_datasets, replica_streams


@click.command("dataset")
@config_option
@out_option
@seed_option
def dataset_command(config_path: Path, output_dir: Path, seed: int | None):
    """Write dataset.csv with the samples replica 0 trains on."""
    config = load_config(config_path, RunConfig, seed=seed)
    data_rng, _ = replica_streams(config.base_seed, 0)
    datasets = generate_noniid_datasets(
        config.num_users,
        config.dataset_sizes(),
        data_rng,
        interval_width=config.dataset.interval_width,
        noise_variance=config.dataset.noise_variance,
        feature_map=build_feature_map(config),
    )
    path = ResultRepository(output_dir).write_dataset(datasets)
    click.echo(f"wrote {sum(d.size for d in datasets)} samples to {path}")
