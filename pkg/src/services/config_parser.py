"""Run configuration text format.

One ``section.key = value`` entry per line; ``#`` starts a comment; blank
lines are ignored. Lists are comma separated and ``none`` clears an optional
value. Every problem is reported as a ``ConfigError`` carrying the line
number it came from.
"""

import logging
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ValidationError

from src.exceptions import ConfigError
from src.models.run_config import RunConfig

logger = logging.getLogger(__name__)


def _section_fields(section: str) -> Optional[Dict[str, Any]]:
    field = RunConfig.model_fields.get(section)
    if field is None:
        return None
    return field.annotation.model_fields


def _split_line(raw: str, lineno: int) -> Optional[Tuple[str, str, str]]:
    """Return (section, key, value) or None for blank and comment lines."""
    line = raw.split("#", 1)[0].strip()
    if not line:
        return None
    if "=" not in line:
        raise ConfigError(f"expected 'section.key = value', got {line!r}", line=lineno)
    name, value = (part.strip() for part in line.split("=", 1))
    if name.count(".") != 1:
        raise ConfigError(f"key must look like 'section.key', got {name!r}", line=lineno)
    section, key = (part.strip().lower() for part in name.split("."))
    if not value:
        raise ConfigError(f"missing value for {name}", line=lineno)
    return section, key, value


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration.

    Omitted keys take their defaults, so empty text yields the default run.

    Args:
        text: Configuration file contents

    Returns:
        RunConfig: Validated configuration

    Raises:
        ConfigError: On unknown keys, duplicates, malformed lines or values
            violating a constraint
    """
    data: Dict[str, Dict[str, Any]] = {}
    lines: Dict[Tuple[str, ...], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        parsed = _split_line(raw, lineno)
        if parsed is None:
            continue
        section, key, value = parsed
        fields = _section_fields(section)
        if fields is None:
            raise ConfigError(f"unknown section {section!r}", line=lineno)
        if key not in fields:
            raise ConfigError(f"unknown key {section}.{key}", line=lineno)
        if (section, key) in lines:
            raise ConfigError(
                f"duplicate key {section}.{key} (first set on line {lines[(section, key)]})",
                line=lineno,
            )
        lines[(section, key)] = lineno
        lines.setdefault((section,), lineno)
        data.setdefault(section, {})[key] = None if value.lower() == "none" else value

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        location = tuple(str(part) for part in error["loc"])
        line = lines.get(location[:2]) or lines.get(location[:1])
        where = ".".join(location) or "config"
        raise ConfigError(f"{where}: {error['msg']}", line=line) from e

    logger.debug("Parsed run config with %d explicit keys", len(lines) - len(data))
    return config


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_format(item) for item in value)
    return str(value)


def dump_config(config: RunConfig) -> str:
    """Serialize every set key so that ``parse_config`` restores an equal config.

    Optional keys that are unset are left out.
    """
    out = ["# regfm run configuration"]
    for section in RunConfig.model_fields:
        model: BaseModel = getattr(config, section)
        out.append("")
        for key in type(model).model_fields:
            value = getattr(model, key)
            if value is None:
                continue
            out.append(f"{section}.{key} = {_format(value)}")
    return "\n".join(out) + "\n"
