"""Run configuration: defaults, file parsing, validation.

The config file is flat ``key = value`` text; ``#`` starts a comment.
Every key is optional and falls back to the default below.  List-valued
keys (excluded_sources, effects) take comma-separated values.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Mapping

from .errors import ParseError, ValidationError
from .genealogy import Source

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}

EFFECT_SETS = ("year", "alma", "field")


@dataclass(frozen=True)
class RunConfig:
    """Everything a pipeline run needs to know."""

    scholars_path: str = "data/scholars.csv"
    edges_path: str = "data/edges.csv"
    citations_path: str = ""
    first_year: int = 1970
    last_year: int = 2021
    exponent: float = -1.0
    max_peer_degree: int = 2
    recent_window: int = 10
    excluded_sources: tuple[str, ...] = ()
    effects: tuple[str, ...] = ()
    link: str = "logit"
    output_dir: str = "out"
    rescale_after_filter: bool = False

    def validate(self) -> None:
        if not 1970 <= self.first_year <= self.last_year <= 2022:
            raise ValidationError(
                f"panel years [{self.first_year}, {self.last_year}] must lie "
                "within [1970, 2022]"
            )
        if self.exponent == 0:
            raise ValidationError("exponent must be non-zero")
        if self.max_peer_degree < 1:
            raise ValidationError("max_peer_degree must be >= 1")
        if self.recent_window < 1:
            raise ValidationError("recent_window must be >= 1")
        if self.link not in ("logit", "probit"):
            raise ValidationError(f"link must be logit or probit, not {self.link!r}")
        for source in self.excluded_sources:
            if source not in {member.value for member in Source}:
                raise ValidationError(f"unknown source {source!r}")
        if Source.LAUREATE.value in self.excluded_sources:
            raise ValidationError("the laureate source cannot be excluded")
        for effect in self.effects:
            if effect not in EFFECT_SETS:
                raise ValidationError(
                    f"unknown effect set {effect!r}; choose from "
                    + ", ".join(EFFECT_SETS)
                )

    @property
    def years(self) -> range:
        return range(self.first_year, self.last_year + 1)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, text: str, path: str, line: int):
    kind = _FIELD_TYPES[key]
    if kind == "int":
        try:
            return int(text)
        except ValueError:
            raise ParseError(path, line, f"{key}: not an integer: {text!r}") from None
    if kind == "float":
        try:
            return float(text)
        except ValueError:
            raise ParseError(path, line, f"{key}: not a number: {text!r}") from None
    if kind == "bool":
        lowered = text.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ParseError(path, line, f"{key}: not a boolean: {text!r}")
    if kind == "tuple[str, ...]":
        return tuple(part.strip() for part in text.split(",") if part.strip())
    return text


def parse_config(path: str) -> RunConfig:
    """Read a key = value file into a validated RunConfig."""
    try:
        handle = open(path, encoding="utf-8")
    except OSError as err:
        raise ParseError(path, 0, str(err)) from None
    values: dict[str, object] = {}
    with handle:
        for line_no, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ParseError(path, line_no, f"expected key = value, got {text!r}")
            key, _, value_text = text.partition("=")
            key = key.strip()
            if key not in _FIELD_TYPES:
                raise ParseError(path, line_no, f"unknown config key {key!r}")
            if key in values:
                raise ParseError(path, line_no, f"duplicate config key {key!r}")
            values[key] = _parse_value(key, value_text.strip(), path, line_no)
    config = RunConfig(**values)
    config.validate()
    return config


def with_overrides(config: RunConfig, **overrides) -> RunConfig:
    """A copy of the config with some fields replaced, re-validated."""
    cleaned = {key: value for key, value in overrides.items() if value is not None}
    updated = replace(config, **cleaned)
    updated.validate()
    return updated
