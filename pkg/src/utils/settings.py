"""
Settings Loader

This module loads matnet settings from config/matnet.yaml, applies
environment-variable overrides and exposes them as a frozen Settings object.
"""

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).parent.parent.parent / 'config'
DEFAULT_CONFIG_PATH = CONFIG_DIR / 'matnet.yaml'

BACKEND_CHOICES = ('auto', 'exact', 'float')
UNION_A_FACTOR_CHOICES = ('t', '1')

_FALLBACK = {
    'backend': 'auto',
    'float_tolerance': None,
    'union_a_factor': 't',
    'log_level': 'INFO',
    'certificate_max_dim': 16,
    'report_schema': 'matnet.report/v1',
}


@dataclass(frozen=True)
class Settings:
    """Resolved runtime settings."""

    backend: str = 'auto'
    float_tolerance: Optional[float] = None
    union_a_factor: str = 't'
    log_level: str = 'INFO'
    certificate_max_dim: int = 16
    report_schema: str = 'matnet.report/v1'

    def with_overrides(self, **overrides: Any) -> 'Settings':
        """Return a copy with every non-None override applied."""
        applied = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **applied)


def load_matnet_config(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Load the YAML settings file.

    Args:
        config_path: Explicit path; defaults to $MATNET_CONFIG or config/matnet.yaml

    Returns:
        Dict[str, Any]: Raw settings merged over the built-in fallback
    """
    if config_path is None:
        config_path = Path(os.environ.get('MATNET_CONFIG', DEFAULT_CONFIG_PATH))

    try:
        with open(config_path, 'r') as f:
            loaded = yaml.safe_load(f) or {}
        logger.debug(f"Loaded matnet settings from {config_path}")
    except Exception as e:
        logger.error(f"Failed to load matnet settings from {config_path}: {e}")
        loaded = {}

    merged = dict(_FALLBACK)
    merged.update({key: value for key, value in loaded.items() if key in _FALLBACK})
    return merged


def get_settings(config_path: Optional[Path] = None) -> Settings:
    """
    Resolve settings from the YAML file and environment variables.

    Environment variables MATNET_BACKEND and MATNET_UNION_A_FACTOR override
    the file; CLI flags are applied later through Settings.with_overrides.

    Args:
        config_path: Optional explicit YAML path

    Returns:
        Settings: Resolved settings
    """
    raw = load_matnet_config(config_path)

    env_backend = os.environ.get('MATNET_BACKEND')
    if env_backend:
        raw['backend'] = env_backend.strip().lower()

    env_factor = os.environ.get('MATNET_UNION_A_FACTOR')
    if env_factor:
        raw['union_a_factor'] = env_factor.strip()

    if raw['backend'] not in BACKEND_CHOICES:
        logger.warning(f"Unknown backend '{raw['backend']}', using auto")
        raw['backend'] = 'auto'

    raw['union_a_factor'] = str(raw['union_a_factor'])
    if raw['union_a_factor'] not in UNION_A_FACTOR_CHOICES:
        logger.warning(f"Unknown union_a_factor '{raw['union_a_factor']}', using t")
        raw['union_a_factor'] = 't'

    if raw['float_tolerance'] is not None:
        raw['float_tolerance'] = float(raw['float_tolerance'])

    return Settings(
        backend=raw['backend'],
        float_tolerance=raw['float_tolerance'],
        union_a_factor=raw['union_a_factor'],
        log_level=str(raw['log_level']).upper(),
        certificate_max_dim=int(raw['certificate_max_dim']),
        report_schema=str(raw['report_schema']),
    )
