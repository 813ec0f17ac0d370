"""
Config repository: reads YAML/JSON experiment files into validated schemas.
"""

import logging
from pathlib import Path
from typing import TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from erasefl.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

ConfigT = TypeVar("ConfigT", bound=BaseModel)


def _locate(node: yaml.Node | None, loc: tuple) -> int | None:
    """1-based line of the deepest node on the error path present in the file."""
    if node is None:
        return None
    line = node.start_mark.line + 1
    for key in loc:
        child = None
        if isinstance(node, yaml.MappingNode):
            child = next((value for k, value in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            child = node.value[key]
        if child is None:
            # missing key or renamed field: report the enclosing node
            break
        node = child
        line = node.start_mark.line + 1
    return line


class ConfigRepository:
    """Loads experiment configuration files."""

    def __init__(self, path: Path | str):
        self.path = Path(path)

    def read_text(self) -> str:
        try:
            return self.path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {self.path}")
        except UnicodeDecodeError as e:
            raise ConfigurationError(f"config file {self.path} is not UTF-8 text: invalid byte at offset {e.start}")
        except OSError as e:
            raise ConfigurationError(f"cannot read config file {self.path}: {e.strerror}")

    def load_raw(self) -> tuple[dict, yaml.Node | None]:
        """
        Parse the file into plain data plus its node tree.

        Returns:
            The mapping at the top of the document and the composed node
            tree used to attach line numbers to validation errors
        """
        text = self.read_text()
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" line {mark.line + 1}" if mark is not None else ""
            raise ConfigurationError(f"{self.path}:{where} not valid YAML/JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigurationError(f"{self.path}: top level must be a mapping")
        return data, node

    def load(self, model: type[ConfigT], overrides: dict | None = None) -> ConfigT:
        """
        Load and validate the file as `model`.

        Args:
            model: Schema to validate against
            overrides: Top-level keys replacing the file's values

        Returns:
            Validated config

        Raises:
            ConfigurationError: If the file is missing, unparsable or invalid
        """
        data, node = self.load_raw()
        if overrides:
            data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            config = model.model_validate(data)
        except ValidationError as e:
            raise ConfigurationError(self._describe(e, node))
        logger.debug("loaded %s from %s", model.__name__, self.path)
        return config

    def _describe(self, error: ValidationError, node: yaml.Node | None) -> str:
        lines = [f"invalid config {self.path}:"]
        for item in error.errors():
            loc = tuple(item["loc"])
            line = _locate(node, loc)
            field = ".".join(str(part) for part in loc) or "<root>"
            where = f"line {line}: " if line is not None else ""
            lines.append(f"  {where}{field}: {item['msg']}")
        return "\n".join(lines)
