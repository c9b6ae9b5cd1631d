import json
import math

import numpy as np
import pytest

from daqc import io
from daqc.cli import main
from daqc.compiler import compile
from daqc.errors import ParseError
from daqc.hamiltonian import CouplingKey, TwoBodyHamiltonian
from daqc.polytope import facet_enumeration
from daqc.signs import build_sign_matrix


def write(path, h):
    io.write_json(path, io.hamiltonian_to_dict(h))
    return str(path)


def test_hamiltonian_round_trip(rng):
    for n, model in [(4, "zz"), (3, "general")]:
        h = TwoBodyHamiltonian.uniform(n, model)
        h = TwoBodyHamiltonian.from_vector(n, model, rng.normal(size=len(h.couplings)))
        assert io.hamiltonian_from_dict(json.loads(json.dumps(io.hamiltonian_to_dict(h)))) == h


def test_zz_axes_default():
    h = io.hamiltonian_from_dict({"n": 3, "model": "zz", "couplings": [{"i": 1, "j": 3, "value": 0.5}]})
    assert h[CouplingKey(1, 3)] == 0.5


@pytest.mark.parametrize("data", [
    {"model": "zz"},
    {"n": 3, "model": "zz", "couplings": [{"i": 1, "j": 2, "value": 1}, {"i": 1, "j": 2, "value": 2}]},
    {"n": 2, "model": "general", "couplings": [{"i": 1, "j": 2, "value": 1}]},
    {"n": 3, "model": "zz", "couplings": [{"i": 1, "j": 2, "value": "big"}]},
])
def test_malformed_hamiltonians(data):
    with pytest.raises(ParseError):
        io.hamiltonian_from_dict(data)


def test_schedule_and_facet_round_trip():
    s = compile(TwoBodyHamiltonian.uniform(3, "zz", -1.0), TwoBodyHamiltonian.uniform(3, "zz"), 0.5)
    assert io.schedule_from_dict(json.loads(json.dumps(io.schedule_to_dict(s)))) == s
    f = facet_enumeration(build_sign_matrix(4, "zz"))
    assert io.facets_from_list(json.loads(json.dumps(io.facets_to_list(f)))) == f


def test_read_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        io.load_hamiltonian(bad)
    with pytest.raises(ParseError):
        io.load_schedule(tmp_path / "missing.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_compile_worst_case(tmp_path, capsys):
    hp, hs = tmp_path / "hp.json", tmp_path / "hs.json"
    code, out, _ = run(capsys, "worst-case", "--n", 3, "--hp-out", hp, "--hs-out", hs)
    assert code == 0 and json.loads(out)["achieved"] == pytest.approx(3.0)
    sched = tmp_path / "s.json"
    code, out, _ = run(capsys, "compile", "--hp", hp, "--hs", hs, "--out", sched)
    report = json.loads(out)
    assert code == 0
    assert report["achieved"] == pytest.approx(3.0, abs=1e-9)
    assert report["upper"] == pytest.approx(3.0, abs=1e-12)
    assert report["lower"] <= report["achieved"] <= report["legacy"]
    data = json.loads(sched.read_text())
    assert data["total_time"] == pytest.approx(3.0)
    assert data["axis_order"] == "xx,xy,xz,yx,yy,yz,zx,zy,zz"
    code, out, _ = run(capsys, "verify", "--schedule", sched)
    assert code == 0 and json.loads(out)["ok"]

    data["blocks"][0]["time"] += 0.1
    sched.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--schedule", sched)
    assert code == 1 and not json.loads(out)["ok"]


def test_cli_identity_single_block(tmp_path, capsys):
    h = write(tmp_path / "h.json", TwoBodyHamiltonian.uniform(4, "zz", 0.7))
    out_path = tmp_path / "s.json"
    code, out, _ = run(capsys, "compile", "--hp", h, "--hs", h, "--T", 2, "--out", out_path)
    assert code == 0
    blocks = json.loads(out_path.read_text())["blocks"]
    assert blocks == [{"layer": "IIII", "time": pytest.approx(2.0)}]


def test_cli_incompatible(tmp_path, capsys):
    hs = TwoBodyHamiltonian.from_vector(3, "zz", [1.0, 0.0, 1.0])
    hp = TwoBodyHamiltonian.uniform(3, "zz")
    code, out, err = run(capsys, "compile", "--hp", write(tmp_path / "p.json", hp),
                         "--hs", write(tmp_path / "s.json", hs), "--out", tmp_path / "o.json")
    assert code == 3 and out == ""
    assert json.loads(err)["error"] == "incompatible_pair"


def test_cli_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    code, _, err = run(capsys, "bounds", "--hp", bad, "--hs", bad)
    assert code == 2 and "error" in json.loads(err)


def test_cli_bounds(tmp_path, capsys):
    hp = write(tmp_path / "p.json", TwoBodyHamiltonian.from_vector(3, "zz", [1.0, -2.0, 0.5]))
    hs = write(tmp_path / "s.json", TwoBodyHamiltonian.uniform(3, "zz"))
    code, out, _ = run(capsys, "bounds", "--hp", hp, "--hs", hs, "--solve")
    r = json.loads(out)
    assert code == 0
    assert r["lower"] == 2.0 and r["legacy"] == 7.0 and r["conjecture"] == 6.0
    assert r["upper"] == pytest.approx(math.sqrt(3 * 5.25))
    assert r["lower"] <= r["achieved"] <= r["upper"]


def test_cli_polytope(capsys):
    code, out, _ = run(capsys, "polytope", "--n", 3)
    r = json.loads(out)
    assert code == 0 and r["facets"] == 4 and r["valid"]
    assert abs(r["inradius"] - 0.5773503) <= 1e-6
    assert r["max_facet_center_time"] == pytest.approx(3.0)


def test_cli_polytope_cap(capsys):
    code, _, err = run(capsys, "polytope", "--n", 5, "--ray-cap", 5)
    assert code == 4 and json.loads(err)["error"]


def test_cli_sweep_deterministic(tmp_path, capsys):
    args = ("sweep", "--n", "3..4", "--samples", 15, "--seed", 4)
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args, "--workers", 2)
    assert first == second
    assert len(first.splitlines()) == 1 + 2 * 3
    out = tmp_path / "r.csv"
    run(capsys, *args, "--out", out)
    assert out.read_text() == first


def test_cli_sweep_cap(capsys):
    code, _, err = run(capsys, "sweep", "--model", "general", "--n", "2..6", "--samples", 1)
    assert code == 4


def test_cli_worst_case_all(capsys):
    code, out, _ = run(capsys, "worst-case", "--model", "general", "--n", 2, "--all")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(rows) == 6 * 4
    for r in rows:
        assert r["achieved"] == pytest.approx(r["upper"], abs=1e-6)


def test_cli_gap_search(tmp_path, capsys):
    out = tmp_path / "gap.jsonl"
    code, _, err = run(capsys, "gap-search", "--n", 4, "--samples", 10, "--out", out)
    summary = json.loads(err)
    assert code == 0 and summary["violations"] == 0
    assert summary["records"] == len(out.read_text().splitlines())


def test_cli_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compile"])
    assert exc.value.code == 2
