from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
import yaml
from pytest_cases import case, parametrize, parametrize_with_cases

from trusskit.document import dumps, from_dict, load, save, to_dict
from trusskit.errors import (
    ConstraintViolated,
    NotLeftDistributive,
    NotTrussMorphism,
    ParseError,
)
from trusskit.heap import FiniteHeap, HeapMorphism, build_heap
from trusskit.module import regular_module
from trusskit.truss import FiniteTruss, build_truss
from trusskit.ztruss import ZTrussParams, zn_truss


def _write(path: Path, d: dict) -> Path:
    path.write_text(yaml.safe_dump(d))
    return path


@parametrize("name", ["v4.yaml", "v4.json"])
def test_save_load_save_is_byte_identical(
    tmp_path: Path,
    v4: FiniteHeap,
    v4_table: list,
    v4_labels: tuple,
    name: str,
) -> None:
    T = build_truss(v4, v4_table)
    first = save(T, tmp_path / name, labels=v4_labels)

    doc = load(first)
    assert doc.kind == "truss"
    assert doc.obj == T
    assert doc.labels == v4_labels
    assert doc.path == first

    second = save(doc.obj, tmp_path / f"again-{name}", labels=doc.labels)
    assert first.read_bytes() == second.read_bytes()


def test_every_kind_round_trips(tmp_path: Path, z4_ring: FiniteTruss) -> None:
    z4 = z4_ring.heap
    structures = [
        z4,
        z4_ring,
        regular_module(z4_ring),
        HeapMorphism(z4, z4, [0, 2, 0, 2]),
        ZTrussParams.commutative(6, 3, 1),
        ZTrussParams.right(),
    ]
    for i, obj in enumerate(structures):
        path = save(obj, tmp_path / f"{i}.yaml")
        assert load(path).obj == obj
        assert dumps(load(path).obj) == path.read_text()


def test_zparams_document() -> None:
    doc = from_dict({"kind": "zparams", "a": 6, "b": 3, "c": 1})
    assert doc.obj == ZTrussParams.commutative(6, 3, 1)
    assert from_dict({"kind": "zparams", "variant": "left"}).obj == ZTrussParams.left()

    with pytest.raises(ConstraintViolated):
        from_dict({"kind": "zparams", "a": 1, "b": 1, "c": 1})


def test_heap_payloads_agree(z4: FiniteHeap) -> None:
    add = {"kind": "heap", "add_table": z4.add_table.tolist()}
    ternary = {"kind": "heap", "ternary_table": z4.bracket_table.tolist()}
    assert from_dict(add).obj == z4
    assert from_dict(ternary).obj == z4


def test_heap_document_with_carrier() -> None:
    d = {"kind": "heap", "carrier": 3, "add_table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}
    H = from_dict(d).obj
    assert H == FiniteHeap.from_cyclic([3])
    assert from_dict({"kind": "heap", "carrier": 6, "cyclic": [2, 3]}).obj.size == 6


def test_saved_heaps_carry_their_size(z4: FiniteHeap) -> None:
    table = build_heap(z4.add_table)
    assert to_dict(table) == {
        "kind": "heap",
        "carrier": 4,
        "add_table": z4.add_table.tolist(),
    }
    assert to_dict(z4) == {"kind": "heap", "carrier": 4, "cyclic": [4]}


def test_invalid_table_reports_witness() -> None:
    d = {"kind": "truss", "cyclic": [3], "mul": [[0, 1, 1]] * 3}
    with pytest.raises(NotLeftDistributive) as e:
        from_dict(d)
    assert e.value.witness == (0, 0, 1, 0)


def test_invalid_morphism() -> None:
    mul = zn_truss(4, 1, 0, 0).mul_table.tolist()
    ring = {"kind": "truss", "cyclic": [4], "mul": mul}
    d = {"kind": "morphism", "domain": ring, "codomain": ring, "image": [0, 2, 0, 2]}
    with pytest.raises(NotTrussMorphism):
        from_dict(d)


def test_nested_paths_resolve_against_the_file(tmp_path: Path) -> None:
    sub = tmp_path / "parts"
    sub.mkdir()
    _write(sub / "heap.yaml", {"kind": "heap", "cyclic": [4]})
    ring = zn_truss(4, 1, 0, 0)
    _write(
        sub / "ring.yaml",
        {"kind": "truss", "heap": "heap.yaml", "mul": ring.mul_table.tolist()},
    )
    path = _write(
        tmp_path / "module.yaml",
        {
            "kind": "module",
            "truss": "parts/ring.yaml",
            "action": ring.mul_table.tolist(),
        },
    )

    doc = load(path)
    assert doc.obj == regular_module(ring)


@case
def case_unknown_kind() -> dict:
    return {"kind": "ring", "cyclic": [2]}


@case
def case_ragged_table() -> dict:
    return {"kind": "truss", "cyclic": [2], "mul": [[0, 1], [0]]}


@case
def case_missing_table() -> dict:
    return {"kind": "truss", "cyclic": [2]}


@case
def case_heap_without_payload() -> dict:
    return {"kind": "heap"}


@case
def case_text_parameters() -> dict:
    return {"kind": "zparams", "a": "one"}


@case
def case_heap_where_truss_expected() -> dict:
    heap = {"kind": "heap", "cyclic": [2]}
    return {"kind": "module", "truss": heap, "action": [[0, 1]]}


@case
def case_mixed_morphism() -> dict:
    heap = {"kind": "heap", "cyclic": [2]}
    truss = {"kind": "truss", "cyclic": [2], "mul": [[0, 0], [0, 1]]}
    return {"kind": "morphism", "domain": heap, "codomain": truss, "image": [0, 1]}


@case
def case_carrier_disagrees_with_table() -> dict:
    return {"kind": "heap", "carrier": 4, "add_table": [[0, 1], [1, 0]]}


@case
def case_text_carrier() -> dict:
    return {"kind": "heap", "carrier": "2", "cyclic": [2]}


@case
def case_two_heap_payloads() -> dict:
    return {"kind": "heap", "cyclic": [2], "add_table": [[0, 1], [1, 0]]}


@case
def case_truss_with_two_heap_payloads() -> dict:
    mul = [[0, 0], [0, 1]]
    return {"kind": "truss", "cyclic": [2], "ternary_table": [[[0]]], "mul": mul}


@parametrize_with_cases("d", cases=".")
def test_malformed_documents(d: dict) -> None:
    with pytest.raises(ParseError):
        from_dict(d)


def test_unreadable_files(tmp_path: Path) -> None:
    with pytest.raises(ParseError):
        load(tmp_path / "missing.yaml")

    (tmp_path / "table.txt").write_text("kind: heap\n")
    with pytest.raises(ParseError):
        load(tmp_path / "table.txt")

    (tmp_path / "list.yaml").write_text("- 1\n- 2\n")
    with pytest.raises(ParseError):
        load(tmp_path / "list.yaml")


def test_json_is_compact(z4_ring: FiniteTruss) -> None:
    text = dumps(z4_ring, "json")
    assert text.startswith('{"carrier":4,"cyclic":[4],"kind":"truss"')
    assert text.endswith("\n")
    np.testing.assert_array_equal(
        from_dict(json.loads(text)).obj.mul_table,
        z4_ring.mul_table,
    )
