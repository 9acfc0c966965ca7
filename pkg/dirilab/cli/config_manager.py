"""
Loading and saving of experiment configuration files.
"""

import json
import os
from pathlib import Path
from typing import Optional

from dirilab.cli.models.config import ExperimentConfig
from dirilab.cli.utils.errors import ConfigurationError, FileSystemError
from dirilab.cli.utils.fs import safe_read, safe_write
from dirilab.src.config import OUTPUT_DIR_ENV


class ConfigManager:
    """
    Reads an ExperimentConfig from a JSON file, or supplies defaults.

    The DIRILAB_OUTPUT_DIR environment variable (also read from .env) overrides
    the output directory of whatever configuration is loaded.
    """

    def __init__(self):
        self._config: Optional[ExperimentConfig] = None
        self._source: Optional[Path] = None

    def load(self, path: Optional[Path] = None) -> ExperimentConfig:
        """
        Load configuration from a JSON file, or defaults when path is None.

        Args:
            path: JSON file path

        Returns:
            The loaded (not yet validated) configuration

        Raises:
            ConfigurationError: If the file is unreadable or not valid JSON
        """
        if path is None:
            config = ExperimentConfig()
        else:
            try:
                data = json.loads(safe_read(Path(path)))
            except json.JSONDecodeError as e:
                raise ConfigurationError(f"Malformed JSON in {path}: {e}")
            except FileSystemError as e:
                raise ConfigurationError(f"Failed to load configuration: {e.message}")
            config = ExperimentConfig.from_dict(data)
            self._source = Path(path)

        env_output = os.getenv(OUTPUT_DIR_ENV)
        if env_output:
            config.output_dir = env_output
        self._config = config
        return config

    def save(self, path: Path, config: Optional[ExperimentConfig] = None) -> Path:
        """
        Write a configuration as pretty JSON.

        Raises:
            ConfigurationError: If nothing is loaded or the file cannot be written
        """
        config = config or self._config
        if config is None:
            raise ConfigurationError("No configuration to save")
        try:
            return safe_write(Path(path), json.dumps(config.to_dict(), indent=2, sort_keys=True))
        except FileSystemError as e:
            raise ConfigurationError(f"Failed to save configuration: {e.message}")

    @property
    def source(self) -> Optional[Path]:
        return self._source
