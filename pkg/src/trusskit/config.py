from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Iterator, Mapping
from typing_extensions import Literal, Self

import yaml


@dataclass(frozen=True)
class Settings:
    """Limits and seeds shared by every computation.

    * Immutable, mutate with [`mutate()`][trusskit.config.Settings.mutate].
    * Loadable from yaml or json so the cli can take a `--config` file.
    * The active value is process wide, see
      [`use_settings()`][trusskit.config.use_settings].
    """

    max_carrier: int = 64
    """Largest carrier any heap may have."""

    enumeration_cap: int = 12
    """Largest carrier on which sub-structures and isomorphisms are enumerated."""

    crosscheck_cap: int = 8
    """Largest carrier on which the universal paragon test is also run."""

    sample_size: int = 10_000
    """Number of sampled tuples for law checks on larger carriers."""

    seed: int = 133_077
    """Seed for every sampled check."""

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{f.name} must be a positive integer, got {value!r}")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Self:
        """Create from a dict or mapping object."""
        field_names = {f.name for f in fields(cls)}
        if not field_names.issuperset(d.keys()):
            raise ValueError(f"Dict keys {d.keys()} must be a subset of {field_names}")

        return cls(**{f.name: d[f.name] for f in fields(cls) if f.name in d})

    def as_dict(self) -> dict[str, Any]:
        """As a raw dictionary."""
        return asdict(self)

    def mutate(self, **kwargs: Any) -> Self:
        """Copy the settings, replacing the given fields."""
        return replace(self, **kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> Self:
        """Load settings from a yaml or json file."""
        path = Path(path)
        if path.suffix in (".yaml", ".yml"):
            return cls.from_yaml(path)
        if path.suffix == ".json":
            return cls.from_json(path)

        raise ValueError(f"Unsupported file format {path.suffix} of {path}")

    @classmethod
    def from_yaml(cls, path: str | Path) -> Self:
        """Load settings from a yaml file."""
        with Path(path).open("r") as f:
            d = yaml.safe_load(f) or {}
            return cls.from_dict(d)

    @classmethod
    def from_json(cls, path: str | Path) -> Self:
        """Load settings from a json file."""
        with Path(path).open("r") as f:
            d = json.load(f)
            return cls.from_dict(d)

    def save(
        self,
        path: str | Path,
        format: Literal["yaml", "json"] | None = None,
    ) -> None:
        """Save the settings.

        Args:
            path: Where to save to. Will infer json or yaml based on filename
            format: The format to save as. Will use file suffix if not provided
        """
        d = self.as_dict()
        path = Path(path)
        if format is None:
            format = "json" if path.suffix == ".json" else "yaml"

        with path.open("w") as f:
            if format == "yaml":
                yaml.dump(d, f, sort_keys=True)
            elif format == "json":
                json.dump(d, f, sort_keys=True)
            else:
                raise ValueError(f"unknown format `format={format}`")


_active = Settings()


def get_settings() -> Settings:
    """The settings currently in effect."""
    return _active


@contextmanager
def use_settings(settings: Settings) -> Iterator[Settings]:
    """Make `settings` the active settings for the duration of the block."""
    global _active  # noqa: PLW0603
    previous = _active
    _active = settings
    try:
        yield settings
    finally:
        _active = previous
