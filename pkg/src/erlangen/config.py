"""Run configuration: a line-oriented key = value text format.

The format is deliberately minimal (UTF-8, '#' starts a comment, one
``key = value`` pair per line) so any tooling can parse it.  Unknown
keys are errors: a typo must never silently fall back to a default.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["RunConfig", "ConfigError", "load_config", "parse_config_text"]

_KNOWN_KEYS = ("seed", "trials", "tolerance", "group", "dimension")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int
    trials: int
    tolerance: float
    group: str
    dimension: int

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if not (-(1 << 63) <= self.seed < (1 << 64)):
            raise ConfigError("seed must fit in 64 bits")
        if self.dimension < 1:
            raise ConfigError("dimension must be >= 1")
        if not self.group.replace("_", "").replace("-", "").isalnum():
            raise ConfigError(f"group is not an identifier: {self.group!r}")


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        values[key] = (value, lineno)

    for key in _KNOWN_KEYS:
        if key not in values:
            raise ConfigError(f"{source}: missing key {key!r}")

    def parse_int(key):
        text_value, lineno = values[key]
        try:
            return int(text_value, 10)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} must be an integer, "
                              f"got {text_value!r}") from None

    def parse_float(key):
        text_value, lineno = values[key]
        try:
            return float(text_value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: {key} must be a number, "
                              f"got {text_value!r}") from None

    try:
        return RunConfig(seed=parse_int("seed"), trials=parse_int("trials"),
                         tolerance=parse_float("tolerance"),
                         group=values["group"][0], dimension=parse_int("dimension"))
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return parse_config_text(text, source=str(path))
