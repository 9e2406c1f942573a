from __future__ import annotations

import json
from pathlib import Path

import pytest
import yaml
from pytest_cases import fixture, parametrize

from trusskit.__main__ import main
from trusskit.config import Settings
from trusskit.document import load, save
from trusskit.heap import FiniteHeap
from trusskit.module import regular_module
from trusskit.truss import FiniteTruss, build_truss
from trusskit.ztruss import ZTrussParams


@fixture
def ring_file(tmp_path: Path, z4_ring: FiniteTruss) -> Path:
    return save(z4_ring, tmp_path / "z4.yaml")


@fixture
def v4_file(tmp_path: Path, v4: FiniteHeap, v4_table: list, v4_labels: tuple) -> Path:
    return save(build_truss(v4, v4_table), tmp_path / "v4.yaml", labels=v4_labels)


def run(capsys: pytest.CaptureFixture, *argv: str) -> tuple[int, list[str]]:
    status = main([str(a) for a in argv])
    return status, capsys.readouterr().out.splitlines()


def test_verify_v4(capsys: pytest.CaptureFixture, v4_file: Path) -> None:
    status, lines = run(capsys, "verify", v4_file)
    assert status == 0
    assert lines == [
        "truss: valid; identity: none; absorber: none; right-braceable: yes"
    ]


def test_verify_other_kinds(
    capsys: pytest.CaptureFixture,
    tmp_path: Path,
    z4_ring: FiniteTruss,
) -> None:
    path = save(regular_module(z4_ring), tmp_path / "module.yaml")
    expected = ["module: valid; size: 4; normalised: yes"]
    assert run(capsys, "verify", path) == (0, expected)

    path = save(ZTrussParams.commutative(6, 3, 1), tmp_path / "p.yaml")
    assert run(capsys, "verify", path) == (0, ["zparams: valid; canonical: (6,3,1)"])


def test_verify_invalid_table(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    path = tmp_path / "bad.yaml"
    bad = {"kind": "truss", "cyclic": [3], "mul": [[0, 1, 1]] * 3}
    path.write_text(yaml.safe_dump(bad))

    status, lines = run(capsys, "verify", path)
    assert status == 2
    assert lines == ["invalid: NotLeftDistributive witness (0, 0, 1, 0)"]

    status = main(["--format", "json", "verify", str(path)])
    report = json.loads(capsys.readouterr().out)
    assert status == 2
    assert report["status"] == 2
    assert report["findings"] == {
        "error": "NotLeftDistributive",
        "witness": [0, 0, 1, 0],
    }


@parametrize("a, expected", [(6, "(3,1) (4,2)"), (4, "none")])
def test_type3(capsys: pytest.CaptureFixture, a: int, expected: str) -> None:
    assert run(capsys, "type3", "--a", a) == (0, [expected])


@parametrize(
    "argv",
    [[], ["type3"], ["frobnicate"], ["classify-z"], ["construct", "alpha"]],
)
def test_usage_errors(capsys: pytest.CaptureFixture, argv: list[str]) -> None:
    assert main(argv) == 3


def test_classify_z(capsys: pytest.CaptureFixture) -> None:
    status, lines = run(capsys, "classify-z", "--params", "1,3,6")
    assert status == 0
    assert lines[:5] == [
        "params: (1,3,6)",
        "canonical: (1,0,0)",
        "witness: (3,+)",
        "unital: yes; identity: -2",
        "ring-type: yes; absorber: -3",
    ]
    assert lines[5].startswith("note:")

    status, lines = run(capsys, "classify-z", "--params=-6,-2,-1")
    assert lines[1:3] == ["canonical: (6,4,2)", "witness: (0,-) (-1,+)"]

    status, lines = run(capsys, "classify-z", "--variant", "left")
    assert lines[:3] == ["params: left", "canonical: left", "witness: identity"]


def test_classify_z_rejects_constraint(capsys: pytest.CaptureFixture) -> None:
    status, lines = run(capsys, "classify-z", "--params", "1,1,1")
    assert status == 2
    assert lines[0].startswith("invalid: ConstraintViolated witness (1, 1, 1)")


def test_orbit(capsys: pytest.CaptureFixture) -> None:
    status, lines = run(capsys, "orbit", "--params", "1,0,0", "--auto", "3,+")
    assert status == 0
    assert lines == ["(1,0,0) -> (1,-3,12)", "isomorphic: yes"]

    argv = ["orbit", "--params", "2,1,0", "--auto=-1,-", "--auto", "2,+"]
    _, lines = run(capsys, *argv)
    assert lines[1] == "isomorphic: yes"


def test_quotient(
    capsys: pytest.CaptureFixture,
    ring_file: Path,
    tmp_path: Path,
) -> None:
    out = tmp_path / "q.yaml"
    argv = ["quotient", ring_file, "--subheap", "1,3", "--out", out]
    status, lines = run(capsys, *argv)
    assert status == 0
    assert lines[0] == "quotient by {1,3}: size 2"
    assert lines[-1] == f"saved: {out}"

    Q = load(out).obj
    assert isinstance(Q, FiniteTruss)
    assert Q.mul_table.tolist() == [[0, 0], [0, 1]]


def test_quotient_by_non_paragon(capsys: pytest.CaptureFixture, v4_file: Path) -> None:
    status, lines = run(capsys, "quotient", v4_file, "--subheap", "0,3")
    assert status == 2
    assert lines[0].startswith("invalid: NotParagon")

    status, lines = run(capsys, "quotient", v4_file, "--subheap", "0,1,2")
    assert status == 2
    assert lines[0].startswith("invalid: NotSubHeap")

    assert main(["quotient", str(v4_file), "--subheap", "0,7"]) == 3


def test_module_commands(
    capsys: pytest.CaptureFixture,
    tmp_path: Path,
    z4_ring: FiniteTruss,
) -> None:
    path = save(regular_module(z4_ring), tmp_path / "m.yaml")

    status, lines = run(capsys, "homset", path, path)
    assert status == 0
    assert lines[0] == "4 module morphisms"
    assert "(0, 1, 2, 3)" in lines

    out = tmp_path / "induced.yaml"
    status, lines = run(capsys, "induce", path, "--e", "1", "--out", out)
    assert status == 0
    assert lines[0] == "induced at 1"
    assert load(out).kind == "module"

    status, lines = run(capsys, "quotient", path, "--subheap", "1,3")
    assert lines[0] == "quotient by {1,3}: size 2"


def test_enumerate(capsys: pytest.CaptureFixture, ring_file: Path) -> None:
    status, lines = run(capsys, "enumerate", ring_file, "--kind", "ideals")
    assert status == 0
    assert lines == ["{0}", "{0,2}", "{0,1,2,3}", "3 ideals"]


def test_report(capsys: pytest.CaptureFixture, ring_file: Path) -> None:
    status, lines = run(capsys, "report", ring_file)
    assert status == 0
    assert "identity: 1" in lines
    assert "absorber: 0" in lines
    assert "brace: yes; two-sided: no" in lines
    assert "size: 4; commutative: yes" in lines


def test_endotruss(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    status, lines = run(capsys, "endotruss", "--carrier", "cyclic:2")
    assert status == 0
    assert lines[0] == "E(H): 4 elements"

    out = tmp_path / "semi.yaml"
    argv = ["endotruss", "--carrier", "cyclic:3", "--semidirect", "--out", out]
    status, lines = run(capsys, *argv)
    assert status == 0
    assert lines[0].startswith("H ⋊ End(H, +_0): 9 elements")
    assert load(out).labels is not None


def test_zn_enumerate(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    out = tmp_path / "z3"
    status = main(["--format", "json", "zn-enumerate", "--n", "3", "--out", str(out)])
    report = json.loads(capsys.readouterr().out)
    assert status == 0

    files = sorted(out.glob("z3_*.yaml"))
    assert len(files) == report["findings"]["count"]
    assert files[0].name == "z3_000.yaml"
    assert all(load(f).kind == "truss" for f in files)


def test_construct(
    capsys: pytest.CaptureFixture,
    tmp_path: Path,
    v4_table: list,
) -> None:
    out = tmp_path / "v4.yaml"
    argv = ["construct", "endo-pair", "--carrier", "cyclic:2x2"]
    argv += ["--alpha", "0,0,2,2", "--a", "1", "--out", out]
    status, lines = run(capsys, *argv)
    assert status == 0
    assert lines[0] == "endo-pair: 4 elements"
    T = load(out).obj
    assert isinstance(T, FiniteTruss)
    assert T.mul_table.tolist() == v4_table

    status, lines = run(capsys, "construct", "zn", "--m", "4", "--params", "1,0,0")
    assert lines[0] == "zn: 4 elements"

    argv = ["construct", "matrix", "--m", "2", "--k", "2", "--matrix", "1,1;0,1"]
    status, lines = run(capsys, *argv)
    assert status == 2


def test_caps(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    assert main(["--max-carrier", "4", "zn-enumerate", "--n", "5"]) == 3

    config = tmp_path / "settings.yaml"
    Settings(max_carrier=4, enumeration_cap=4).save(config)
    assert main(["--config", str(config), "zn-enumerate", "--n", "5"]) == 3
    assert main(["--config", str(config), "zn-enumerate", "--n", "4"]) == 0


def test_carrier_follows_the_active_caps(capsys: pytest.CaptureFixture) -> None:
    argv = ["construct", "constant", "--carrier", "cyclic:70"]
    assert main(argv) == 3

    status, lines = run(capsys, "--max-carrier", "100", *argv)
    assert status == 0
    assert lines[0] == "constant: 70 elements"

    argv = ["--max-carrier", "4", "construct", "constant", "--carrier", "cyclic:8"]
    assert main(argv) == 3
    assert main(["--max-carrier", "4", "endotruss", "--carrier", "cyclic:8"]) == 3


def test_invalid_carrier_document(
    capsys: pytest.CaptureFixture,
    tmp_path: Path,
) -> None:
    path = tmp_path / "heap.yaml"
    bad = {"kind": "heap", "carrier": 2, "add_table": [[0, 1], [1, 1]]}
    path.write_text(yaml.safe_dump(bad))

    status, lines = run(capsys, "construct", "constant", "--carrier", path)
    assert status == 2
    assert lines[0].startswith("invalid: NotAGroup witness (1,)")

    status, lines = run(capsys, "endotruss", "--carrier", path)
    assert status == 2
