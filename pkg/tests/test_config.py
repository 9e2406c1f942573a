from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from pytest_cases import parametrize

from trusskit.config import Settings, get_settings, use_settings
from trusskit.util import closure, first_failure, pairs


def test_defaults() -> None:
    s = Settings()
    assert s.max_carrier == 64
    assert s.enumeration_cap == 12
    assert s.as_dict()["seed"] == 133_077


@parametrize("name", ["settings.yaml", "settings.json"])
def test_save_and_load(tmp_path: Path, name: str) -> None:
    s = Settings(max_carrier=10, sample_size=50)
    s.save(tmp_path / name)
    assert Settings.from_file(tmp_path / name) == s


def test_from_dict_rejects_unknown_keys() -> None:
    assert Settings.from_dict({"seed": 1}).seed == 1
    with pytest.raises(ValueError):
        Settings.from_dict({"seeds": 1})


@parametrize("value", [0, -3, 2.5, "8"])
def test_limits_must_be_positive_integers(value: object) -> None:
    with pytest.raises(ValueError):
        Settings(crosscheck_cap=value)  # type: ignore


def test_unsupported_suffix(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        Settings.from_file(tmp_path / "settings.toml")


def test_use_settings_restores_previous() -> None:
    before = get_settings()
    narrow = before.mutate(max_carrier=4)
    with use_settings(narrow) as active:
        assert active is narrow
        assert get_settings().max_carrier == 4
    assert get_settings() is before

    with pytest.raises(RuntimeError), use_settings(narrow):
        raise RuntimeError
    assert get_settings() is before


def test_pairs() -> None:
    assert list(pairs([1, 2, 3])) == [(1, 2), (2, 3)]
    assert list(pairs([1])) == []


def test_first_failure() -> None:
    ok = np.ones((2, 3), dtype=bool)
    assert first_failure(ok) is None
    ok[1, 0] = ok[1, 2] = False
    assert first_failure(ok) == (1, 0)


def test_closure() -> None:
    doubling = lambda m: (2 * m) % 12  # noqa: E731
    assert closure([1], doubling) == (1, 2, 4, 8)
    assert closure([3], doubling) == (0, 3, 6)
