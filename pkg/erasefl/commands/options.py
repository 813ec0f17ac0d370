"""
Options shared by several commands.
"""

from pathlib import Path

import click

from erasefl.config import settings

config_option = click.option(
    "--config", "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Experiment config file (YAML or JSON)",
)
out_option = click.option(
    "--out", "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=lambda: settings.output_dir,
    show_default="ERASEFL_OUTPUT_DIR or results",
    help="Directory for result files",
)
seed_option = click.option(
    "--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Override base_seed",
)
replicas_option = click.option(
    "--replicas", type=click.IntRange(min=1), default=None, help="Override the replica count",
)


def format_row(row) -> str:
    """Render a result row as space-separated key=value pairs."""
    parts = []
    for key, value in row.model_dump().items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        elif isinstance(value, bool):
            value = str(value).lower()
        parts.append(f"{key.rstrip('_')}={value}")
    return " ".join(parts)
