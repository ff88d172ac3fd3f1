"""
Package-wide settings: ``DEFAULT_CONFIG`` overlaid with ``set_config``.

Every override is validated against ``Settings``; unknown keys and
out-of-range values raise ``ValueError`` and leave the current settings
untouched.
"""

from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

import bellprocess.default_config as default_config


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    results_dir: str
    log_level: str = "WARNING"
    hbar: float = Field(gt=0)
    node_eps: float = Field(gt=0, lt=1)
    dimension_cap: int = Field(ge=1)
    hazard_cap: float = Field(gt=0)
    max_jumps: int = Field(ge=1)
    quad_tol: float = Field(gt=0)
    root_tol: float = Field(gt=0)
    hazard_step: float = Field(gt=0)
    mc_sigmas: float = Field(gt=0)
    retry_factor: int = Field(ge=1)
    jobs: Optional[int] = Field(None, ge=1)


_settings: Optional[Settings] = None


def _validate(values: Mapping[str, Any]) -> Settings:
    try:
        return Settings.model_validate(dict(values))
    except ValidationError as err:
        problems = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in err.errors())
        raise ValueError(f"invalid bellprocess settings ({problems})") from None


def initialize_config():
    """Initialize the configuration with default values."""
    global _settings
    if _settings is None:
        _settings = _validate(default_config.DEFAULT_CONFIG)


def set_config(config: Mapping[str, Any]):
    """Overlay ``config`` on the current settings after validating the result."""
    global _settings
    initialize_config()
    _settings = _validate({**_settings.model_dump(), **config})


def reset_config():
    """Drop all overrides and return to the defaults."""
    global _settings
    _settings = _validate(default_config.DEFAULT_CONFIG)


def get_config() -> Dict[str, Any]:
    """Get the current configuration as a plain dict."""
    initialize_config()
    return _settings.model_dump()


initialize_config()
