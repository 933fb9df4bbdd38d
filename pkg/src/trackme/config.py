"""Project configuration: plain ``key = value`` lines in ``trackme.conf``.

Recognized keys (all optional):

    gpr.signal_variance   gpr.length_scale   gpr.alpha   gpr.noise_variance
    assoc.iou_threshold   assoc.max_age      assoc.min_hits

Unknown keys are ignored so projects can carry settings for other tools.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ValidationError

CONFIG_FILENAME = "trackme.conf"


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks are skipped."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_project_config(directory: str | Path) -> dict[str, str]:
    """Read the project's config file; empty dict when absent."""
    path = Path(directory) / CONFIG_FILENAME
    if not path.exists():
        return {}
    return parse_config(path.read_text(encoding="utf-8"))


def get_float(cfg: dict[str, str], key: str, default: float) -> float:
    if key not in cfg:
        return default
    try:
        return float(cfg[key])
    except ValueError as e:
        raise ValidationError(f"config key {key}: not a number: {cfg[key]!r}") from e


def get_int(cfg: dict[str, str], key: str, default: int) -> int:
    if key not in cfg:
        return default
    try:
        return int(cfg[key])
    except ValueError as e:
        raise ValidationError(f"config key {key}: not an integer: {cfg[key]!r}") from e
