"""
Configuration service for zerolab.

This module provides a configuration service that loads environment variables
from .env and .env.zerolab files and provides access to configuration values.
"""

import logging
import math
import os
from dotenv import load_dotenv
from typing import Callable, Dict, Any, List, Optional

logger = logging.getLogger("zerolab.configuration")


def _as_count(text: str) -> int:
    """Integer setting; scientific notation such as 5e7 is accepted."""
    return int(float(text))


class ConfigurationService:
    """
    Configuration service for zerolab.

    This class loads environment variables from .env and .env.zerolab files
    and provides access to configuration values grouped by section.

    Attributes:
        _config: Dictionary containing all configuration values.
        invalid_keys: Variables whose values could not be converted.
    """

    def __init__(self):
        """
        Initialize the configuration service.

        Loads environment variables from .env and .env.zerolab files.
        """
        load_dotenv()
        load_dotenv(".env.zerolab", override=True)

        self._config = {}
        self.invalid_keys: List[str] = []
        self._load_config()

    def _read(self, name: str, default: str, convert: Callable[[str], Any]) -> Any:
        """Convert an environment variable, recording it and using the default when it is malformed."""
        raw = os.getenv(name, default)
        try:
            return convert(raw)
        except (ValueError, OverflowError):
            logger.warning("%s=%r could not be converted, using %s", name, raw, default)
            self.invalid_keys.append(name)
            return convert(default)

    def _load_config(self):
        """
        Load configuration values from environment variables.
        """
        # Random matrix sampling
        self._config["rmt"] = {
            "threads": self._read("ZEROLAB_THREADS", "4", int),
            "unitarity_tol": self._read("ZEROLAB_UNITARITY_TOL", "1e-8", float),
            "default_seed": self._read("ZEROLAB_DEFAULT_SEED", "0", int),
        }

        # Prime tables and tail majorants
        self._config["arith"] = {
            "prime_limit_max": self._read("ZEROLAB_PRIME_LIMIT_MAX", "5e7", _as_count),
            "tail_prime_limit": self._read("ZEROLAB_TAIL_PRIME_LIMIT", "1e6", _as_count),
        }

        # Adaptive quadrature
        self._config["quadrature"] = {
            "limit": self._read("ZEROLAB_QUAD_LIMIT", "500", int),
            "tol": self._read("ZEROLAB_QUAD_TOL", "1e-10", float),
            "horizon": self._read("ZEROLAB_QUAD_HORIZON", "2000", float),
        }

        # Logging
        self._config["log"] = {
            "level": os.getenv("LOG_LEVEL", "WARNING"),
            "verbose": os.getenv("LOG_VERBOSE", "false").lower() in ("1", "true", "yes"),
            "file": os.getenv("LOG_FILE") or None,
        }

    def get_rmt_config(self) -> Dict[str, Any]:
        """
        Get the random matrix configuration.

        Returns:
            Dict[str, Any]: Thread count, unitarity tolerance and default seed.
        """
        return self._config["rmt"]

    def get_arith_config(self) -> Dict[str, Any]:
        """
        Get the arithmetic configuration.

        Returns:
            Dict[str, Any]: Prime sieve budgets.
        """
        return self._config["arith"]

    def get_thread_count(self, requested: Optional[int] = None) -> int:
        """
        Worker count for a thread pool.

        Args:
            requested: Threads asked for, ZEROLAB_THREADS when None

        Returns:
            int: The request capped at ZEROLAB_THREADS.
        """
        cap = self._config["rmt"]["threads"]
        if not requested:
            return cap
        return max(1, min(int(requested), cap))

    def get_quadrature_config(self) -> Dict[str, Any]:
        """Get the quadrature configuration."""
        return self._config["quadrature"]

    def get_log_config(self) -> Dict[str, Any]:
        """Get the logging configuration."""
        return self._config["log"]

    def get_config_value(self, section: str, key: str, default: Optional[Any] = None) -> Any:
        """
        Get a specific configuration value.

        Args:
            section: Configuration section.
            key: Configuration key.
            default: Default value if the key is not found.

        Returns:
            Any: Configuration value.
        """
        if section not in self._config:
            return default

        return self._config[section].get(key, default)

    def validate_config(self) -> bool:
        """
        Validate the configuration.

        Returns:
            bool: True if the configuration is valid, False otherwise.
        """
        if self.invalid_keys:
            return False

        if self._config["rmt"]["threads"] < 1:
            return False

        if not 0 < self._config["rmt"]["unitarity_tol"] < 1:
            return False

        if self._config["arith"]["prime_limit_max"] < 2:
            return False

        if self._config["arith"]["tail_prime_limit"] < 2:
            return False

        if self._config["quadrature"]["limit"] < 1 or not 0 < self._config["quadrature"]["horizon"] < math.inf:
            return False

        return True


_service: Optional[ConfigurationService] = None


def get_configuration() -> ConfigurationService:
    """Return the process-wide configuration service, creating it on first use."""
    global _service
    if _service is None:
        _service = ConfigurationService()
    return _service
