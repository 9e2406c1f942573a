"""Structure documents, the yaml and json files the cli reads and writes.

Every document is a mapping with a `kind` and a payload:

* `heap`: `carrier: n` and exactly one of `cyclic: [2, 2]`, `add_table: [[...]]`
    (group table with neutral `0`) or `ternary_table: [[[...]]]`. `carrier` may be
    left out when reading, it is always written.
* `truss`: a heap payload, either inline or under `heap:`, plus `mul: [[...]]` and
    optionally `labels: [...]`.
* `module`: `truss:`, optionally `heap:` (defaults to the heap of the truss) and
    `action: [[...]]` with one row per truss element.
* `morphism`: `domain:`, `codomain:` (both heaps or both trusses) and `image: [...]`.
* `zparams`: `variant: commutative | left | right` and integers `a`, `b`, `c`.

Nested structures are either mappings or paths relative to the referring file.
Saving always writes everything inline with sorted keys, so a saved file loads
and saves again to the same bytes.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence, Union
from typing_extensions import Literal

import numpy as np
import yaml

from trusskit.errors import ParseError
from trusskit.heap import FiniteHeap, HeapMorphism, build_heap
from trusskit.module import TrussModule, build_module
from trusskit.truss import FiniteTruss, TrussMorphism, build_truss
from trusskit.ztruss import ZTrussParams

logger = logging.getLogger(__name__)

Kind = Literal["heap", "truss", "module", "morphism", "zparams"]
KINDS: tuple[Kind, ...] = ("heap", "truss", "module", "morphism", "zparams")

Structure = Union[
    FiniteHeap,
    FiniteTruss,
    TrussModule,
    HeapMorphism,
    TrussMorphism,
    ZTrussParams,
]


@dataclass(frozen=True)
class StructureDocument:
    """A parsed and validated document."""

    kind: Kind
    obj: Structure
    path: Path | None = None
    labels: tuple[str, ...] | None = None
    """Display names of the elements, for trusses."""


def read_mapping(path: str | Path) -> dict[str, Any]:
    """The raw mapping in a yaml or json file."""
    path = Path(path)
    try:
        with path.open("r") as f:
            if path.suffix == ".json":
                d = json.load(f)
            elif path.suffix in (".yaml", ".yml"):
                d = yaml.safe_load(f)
            else:
                raise ParseError(f"Unsupported file format {path.suffix} of {path}")
    except (OSError, json.JSONDecodeError, yaml.YAMLError) as e:
        raise ParseError(f"Could not read {path}: {e}") from e

    if not isinstance(d, dict):
        raise ParseError(f"{path} does not hold a mapping")
    return d


def _int_array(value: Any, name: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(value)
    except ValueError as e:
        raise ParseError(f"`{name}` is not a rectangular table") from e
    if arr.ndim != ndim or arr.dtype.kind not in "iu":
        raise ParseError(f"`{name}` must be a {ndim}-dimensional table of integers")
    return arr.astype(np.int64)


def _require(d: Mapping[str, Any], key: str, kind: str) -> Any:
    if key not in d:
        raise ParseError(f"A {kind} document needs `{key}`")
    return d[key]


def _nested(
    value: Any,
    base: Path | None,
    expected: Sequence[Kind],
) -> StructureDocument:
    if isinstance(value, str):
        path = Path(value) if base is None else base / value
        doc = load(path)
    elif isinstance(value, dict):
        doc = from_dict(value, base=base)
    else:
        raise ParseError(f"Expected a path or a mapping, got {type(value).__name__}")

    if doc.kind not in expected:
        raise ParseError(f"Expected a {' or '.join(expected)}, got a {doc.kind}")
    return doc


HEAP_PAYLOADS = ("cyclic", "add_table", "ternary_table", "heap")


def _heap_payload(d: Mapping[str, Any], base: Path | None) -> FiniteHeap:
    given = [key for key in HEAP_PAYLOADS if key in d]
    if len(given) != 1:
        raise ParseError(
            f"A heap needs exactly one of {', '.join(HEAP_PAYLOADS)}, got {given}"
        )

    key = given[0]
    if key == "cyclic":
        shape = d["cyclic"]
        if not isinstance(shape, list) or not all(isinstance(s, int) for s in shape):
            raise ParseError("`cyclic` must be a list of integers")
        heap = FiniteHeap.from_cyclic(shape)
    elif key == "add_table":
        heap = build_heap(_int_array(d[key], key, 2))
    elif key == "ternary_table":
        heap = build_heap(_int_array(d[key], key, 3))
    else:
        nested = _nested(d["heap"], base, ("heap",)).obj
        assert isinstance(nested, FiniteHeap)
        heap = nested

    carrier = d.get("carrier", heap.size)
    if not isinstance(carrier, int) or isinstance(carrier, bool):
        raise ParseError(f"`carrier` must be an integer, got {carrier!r}")
    if carrier != heap.size:
        raise ParseError(f"`carrier: {carrier}` but the heap has {heap.size} elements")
    return heap


def _truss_payload(value: Any, base: Path | None) -> FiniteTruss:
    truss = _nested(value, base, ("truss",)).obj
    assert isinstance(truss, FiniteTruss)
    return truss


def from_dict(d: Mapping[str, Any], base: Path | None = None) -> StructureDocument:
    """Parse and validate a document mapping.

    Args:
        d: The mapping
        base: The directory that relative paths inside `d` are resolved against

    Returns:
        The document
    """
    kind = d.get("kind")
    if kind not in KINDS:
        raise ParseError(f"Unknown document kind {kind!r}, expected one of {KINDS}")

    obj: Structure
    labels = None
    if kind == "heap":
        obj = _heap_payload(d, base)
    elif kind == "truss":
        mul = _int_array(_require(d, "mul", kind), "mul", 2)
        obj = build_truss(_heap_payload(d, base), mul)
        if "labels" in d:
            labels = tuple(str(label) for label in d["labels"])
    elif kind == "module":
        T = _truss_payload(_require(d, "truss", kind), base)
        H = _heap_payload(d, base) if "heap" in d else T.heap
        obj = build_module(T, H, _int_array(_require(d, "action", kind), "action", 2))
    elif kind == "morphism":
        expected: tuple[Kind, ...] = ("heap", "truss")
        domain = _nested(_require(d, "domain", kind), base, expected)
        codomain = _nested(_require(d, "codomain", kind), base, expected)
        image = _int_array(_require(d, "image", kind), "image", 1)
        if domain.kind != codomain.kind:
            raise ParseError("A morphism needs a domain and codomain of one kind")
        src, dst = domain.obj, codomain.obj
        if isinstance(src, FiniteTruss) and isinstance(dst, FiniteTruss):
            obj = TrussMorphism(src, dst, image).require()
        elif isinstance(src, FiniteHeap) and isinstance(dst, FiniteHeap):
            obj = HeapMorphism(src, dst, image).require()
        else:
            raise ParseError("A morphism needs heaps or trusses at both ends")
    else:
        params = {key: d.get(key, 0) for key in ("a", "b", "c")}
        if not all(isinstance(v, int) for v in params.values()):
            raise ParseError("`a`, `b` and `c` must be integers")
        obj = ZTrussParams(d.get("variant", "commutative"), **params)

    return StructureDocument(kind=kind, obj=obj, labels=labels)


def load(path: str | Path) -> StructureDocument:
    """Load and validate the document at `path`."""
    path = Path(path)
    doc = from_dict(read_mapping(path), base=path.parent)
    logger.debug(f"Loaded a {doc.kind} from {path}")
    return StructureDocument(kind=doc.kind, obj=doc.obj, path=path, labels=doc.labels)


def _table(a: np.ndarray) -> list[Any]:
    return a.tolist()


def _heap_dict(H: FiniteHeap) -> dict[str, Any]:
    if H.factor_shape is not None:
        return {"carrier": H.size, "cyclic": list(H.factor_shape)}
    return {"carrier": H.size, "add_table": _table(H.add_table)}


def to_dict(obj: Structure, labels: Sequence[str] | None = None) -> dict[str, Any]:
    """The canonical document mapping of a structure."""
    if isinstance(obj, FiniteHeap):
        return {"kind": "heap", **_heap_dict(obj)}
    if isinstance(obj, FiniteTruss):
        d = {"kind": "truss", **_heap_dict(obj.heap), "mul": _table(obj.mul_table)}
        if labels is not None:
            d["labels"] = [str(label) for label in labels]
        return d
    if isinstance(obj, TrussModule):
        return {
            "kind": "module",
            "truss": to_dict(obj.truss),
            "heap": to_dict(obj.heap),
            "action": _table(obj.action),
        }
    if isinstance(obj, (HeapMorphism, TrussMorphism)):
        return {
            "kind": "morphism",
            "domain": to_dict(obj.domain),
            "codomain": to_dict(obj.codomain),
            "image": _table(obj.image),
        }
    if isinstance(obj, ZTrussParams):
        a, b, c = obj.triple
        return {"kind": "zparams", "variant": obj.variant, "a": a, "b": b, "c": c}

    raise TypeError(f"Cannot save {type(obj).__name__}")


def dumps(
    obj: Structure,
    format: Literal["yaml", "json"] = "yaml",
    labels: Sequence[str] | None = None,
) -> str:
    """The canonical text of a document."""
    d = to_dict(obj, labels)
    if format == "json":
        return json.dumps(d, sort_keys=True, separators=(",", ":")) + "\n"
    if format == "yaml":
        return yaml.safe_dump(d, sort_keys=True, default_flow_style=None)
    raise ValueError(f"unknown format `format={format}`")


def save(
    obj: Structure,
    path: str | Path,
    labels: Sequence[str] | None = None,
) -> Path:
    """Save `obj` as json or yaml, chosen by the suffix of `path`."""
    path = Path(path)
    format: Literal["yaml", "json"] = "json" if path.suffix == ".json" else "yaml"
    path.write_text(dumps(obj, format, labels))
    logger.debug(f"Saved a {type(obj).__name__} to {path}")
    return path
