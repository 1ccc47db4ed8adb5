"""Configuration management for fraclap experiments.

Loads and persists YAML config with deep-copied defaults and a deep-merge.
Command-line flags are layered on top with :meth:`ConfigManager.overlay`
and never persisted unless ``config --save`` asks for it.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field
from typing import Any

from core.errors import ConfigError
from storage.file_store import YAMLFileStore

logger = logging.getLogger(__name__)


DEFAULT_CONFIG: dict[str, Any] = {
    "weights": {
        "family": "PER",
        "alpha": 1.0,
        # Truncation length. None sizes it from the window (and the
        # extension radius when a far-field tail is used).
        "m": None,
    },
    "grid": {
        "h": 0.125,
        # Half-width of the computational window [-L, L].
        "L": 8.0,
    },
    "far_field": {
        "enabled": False,
        # Decay exponent of the far field; None fits it from the data.
        "beta": None,
        # Extension radius; None means 3L.
        "L_M": None,
    },
    "apply": {
        "oracle": "gaussian0",
    },
    "dirichlet": {
        # Beta-bump order of the manufactured solution; "one" solves f = 1.
        "rhs": "bump",
        "k": 1,
        "halfwidth": 1.0,
    },
    "evolve": {
        # None picks 0.1 h^α (over κ and within the advective bound for
        # Burgers) and 1e-4 for the thin film.
        "dt": None,
        "t_final": 0.5,
        "kappa": 1.0,
        "lambda": None,
        "flux": "godunov",
        # sign | minus_sign | cosine | thinfilm; None picks thinfilm for the
        # thin-film equation and sign otherwise.
        "initial": None,
        "snapshots": [],
    },
    "converge": {
        "target": "gaussian0",
        "h_list": [0.25, 0.125, 0.0625, 0.03125, 0.015625],
        "workers": 4,
    },
    "selftest": {
        "seed": 0,
        "trials": 100,
        # Empty means every family.
        "families": [],
        "alphas": [0.4, 1.0, 1.6],
    },
    "output": {
        "path": "-",
        "precision": 17,
    },
    "logging": {
        "level": "INFO",
    },
}


def _deep_merge(base: dict[str, Any], overlay: dict[str, Any]) -> dict[str, Any]:
    """Recursively merge `overlay` into a deep copy of `base`.

    Lists and scalars in `overlay` replace their counterparts; nested dicts
    merge key-by-key. The original inputs are not mutated.

    Example::

        base    = {"grid": {"h": 0.125, "L": 8.0}}
        overlay = {"grid": {"h": 0.0625}}
        result  = {"grid": {"h": 0.0625, "L": 8.0}}
    """
    out = copy.deepcopy(base)
    for key, value in overlay.items():
        if key in out and isinstance(out[key], dict) and isinstance(value, dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def section(config: dict[str, Any], name: str) -> dict[str, Any]:
    """A config section, failing loudly when a file replaced it with a scalar."""
    value = config.get(name, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"config section {name!r} must be a mapping, got {type(value).__name__}")
    return value


@dataclass
class ConfigManager:
    """YAML-backed experiment configuration.

    The file is optional; whatever it sets is merged over
    :data:`DEFAULT_CONFIG`. A file that exists but cannot be read as a
    mapping raises :class:`ConfigError`, since running an experiment on
    silently substituted defaults would produce a mislabelled table.
    ``version`` increases on every load and every :meth:`update`.
    """

    path: str
    _store: YAMLFileStore = field(init=False)
    _config: dict[str, Any] = field(init=False, default_factory=dict)
    version: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        self._store = YAMLFileStore(self.path)

    def load(self, create_missing: bool = False) -> dict[str, Any]:
        """Defaults merged with the file at :attr:`path`, if there is one."""
        if self._store.exists():
            data = self._store.read()
            if data is None:
                raise ConfigError(f"config file {self.path} is not a YAML mapping")
            unknown = sorted(set(data) - set(DEFAULT_CONFIG))
            if unknown:
                logger.warning("ignoring unknown config sections in %s: %s", self.path, ", ".join(map(str, unknown)))
            merged = _deep_merge(DEFAULT_CONFIG, data)
        else:
            merged = copy.deepcopy(DEFAULT_CONFIG)
            if create_missing:
                logger.info("writing default config to %s", self.path)
                self._store.write(merged)
        self._config = merged
        self.version += 1
        return merged

    def get(self) -> dict[str, Any]:
        """The loaded configuration (live reference)."""
        return self._config

    def overlay(self, overrides: dict[str, Any]) -> dict[str, Any]:
        """The loaded config with ``overrides`` merged in; nothing is persisted."""
        return _deep_merge(self._config, overrides)

    def update(self, new_config: dict[str, Any]) -> None:
        """Persist ``new_config`` (deep-copied) as the current configuration."""
        self._config = copy.deepcopy(new_config)
        self._store.write(self._config)
        self.version += 1
        logger.info("saved config to %s", self.path)
