import json

import pytest

from nlsblocks.catalog import CHAIN_TYPES, EDGE_POLYS, chain, edge
from nlsblocks.cli import main
from nlsblocks.graphs import BLACK, RED, canonical_key


def run(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(path.read_text())


@pytest.fixture(scope="module")
def catalog3(tmp_path_factory):
    path = tmp_path_factory.mktemp("cat") / "n3.json"
    assert run("enumerate", "--n", 3, "--m", 6, "--out", path) == 0
    return path


def test_enumerate_n2_has_both_edges(tmp_path):
    out = tmp_path / "n2.json"
    assert run("enumerate", "--n", 2, "--m", 4, "--out", out) == 0
    data = load(out)
    chis = {b["chi"] for b in data["blocks"]}
    assert set(EDGE_POLYS.values()) <= chis
    assert data["manifest"]["command"] == "enumerate"
    assert "wall_time" not in data["manifest"]


def test_enumerate_n3_contains_named_chains(catalog3):
    keys = {b["key"] for b in load(catalog3)["blocks"]}
    for kind in CHAIN_TYPES:
        assert repr(canonical_key(chain(kind).vertices)) in keys


def test_enumerate_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("enumerate", "--n", 2, "--m", 4, "--out", a)
    run("enumerate", "--n", 2, "--m", 4, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_unwritable_output(tmp_path, capsys):
    assert run("enumerate", "--n", 2, "--m", 4, "--out", tmp_path / "no" / "x.json") == 2
    assert "cannot write" in capsys.readouterr().err


def test_timing_flag_records_wall_time(tmp_path):
    out = tmp_path / "t.json"
    run("enumerate", "--n", 2, "--m", 3, "--timing", "--out", out)
    assert "wall_time" in load(out)["manifest"]


def test_charpoly(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps(edge(RED).to_dict()))
    out = tmp_path / "c.json"
    assert run("charpoly", "--graph", g, "--out", out) == 0
    assert load(out)["chi"] == EDGE_POLYS[RED]
    pts = tmp_path / "p.json"
    pts.write_text(json.dumps({"points": [[0, 0], [1, -1]]}))
    assert run("charpoly", "--graph", pts, "--out", out) == 0
    assert load(out)["chi"] == EDGE_POLYS[BLACK]
    assert run("charpoly", "--graph", '{"points": [[0, 0], [-1, -1]]}', "--out", out) == 0
    assert load(out)["chi"] == EDGE_POLYS[RED]
    assert run("charpoly", "--graph", "{broken") == 2


def test_certify_and_replay(tmp_path, monkeypatch):
    cat = tmp_path / "n2.json"
    run("enumerate", "--n", 2, "--m", 4, "--out", cat)
    report = tmp_path / "r.json"
    assert run("certify", "--catalog", cat, "--out", report) == 0
    data = load(report)
    assert data["separation"]["verdict"] == "PASS"
    assert run("replay", report, "--out", tmp_path / "rep.json") == 0
    monkeypatch.setenv("NLSBLOCKS_WORKERS", "2")
    again = tmp_path / "r2.json"
    assert run("certify", "--catalog", cat, "--out", again) == 0
    assert again.read_bytes() == report.read_bytes()


def test_replay_flags_corruption(tmp_path, capsys):
    cat = tmp_path / "n2.json"
    run("enumerate", "--n", 2, "--m", 4, "--out", cat)
    report = tmp_path / "r.json"
    run("certify", "--catalog", cat, "--battery", "real-roots", "--out", report)
    data = load(report)
    entry = next(b for b in data["blocks"] if b["real_roots"])
    entry["real_roots"]["evidence"]["minors"][-1] = "1"
    report.write_text(json.dumps(data))
    assert run("replay", report, "--out", tmp_path / "x.json") == 1
    assert "replay mismatch" in capsys.readouterr().err


def test_malformed_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("certify", "--catalog", bad) == 2
    bad.write_text(json.dumps({"blocks": [{"nope": 1}]}))
    assert run("certify", "--catalog", bad) == 2
    assert run("replay", tmp_path / "missing.json") == 2
    assert run("certify", "--catalog", bad, "--battery", "magic") == 2


def test_generic_sites_roundtrip(tmp_path):
    sites = tmp_path / "s.json"
    assert run("gen-generic", "--n", 2, "--m", 4, "--out", sites) == 0
    rep = tmp_path / "check.json"
    assert run("check-generic", "--sites", sites, "--out", rep) == 0
    assert all(r["verdict"] == "PASS" for r in load(rep)["reports"])
    assert run("replay", rep, "--out", tmp_path / "x.json") == 0


def test_collinear_sites_fail(tmp_path):
    sites = tmp_path / "s.json"
    sites.write_text(json.dumps({"n": 2, "sites": [[1, 2], [2, 4], [7, 1], [-3, 5]]}))
    rep = tmp_path / "check.json"
    assert run("check-generic", "--sites", sites, "--out", rep) == 1
    assert run("replay", rep, "--out", tmp_path / "x.json") == 0


def test_melnikov_command(tmp_path):
    blocks = tmp_path / "b.json"
    blocks.write_text(json.dumps({"blocks": [{"graph": edge(BLACK).to_dict()},
                                             {"graph": edge(RED).to_dict()}]}))
    out = tmp_path / "m.json"
    assert run("melnikov", "--blocks", blocks, "--nu", "0,0", "--order", 2, "--n", 2,
               "--out", out) == 0
    assert load(out)["certificate"]["verdict"] == "PASS"
    assert run("replay", out, "--out", tmp_path / "x.json") == 0
    assert run("melnikov", "--nu", "1,-1", "--order", 0, "--out", out) == 0
    assert run("melnikov", "--nu", "0,0", "--order", 0, "--out", out) == 2
    assert run("melnikov", "--nu", "1,x", "--order", 0) == 2


def test_real_roots_and_realize(tmp_path):
    out = tmp_path / "r.json"
    assert run("real-roots", "--chi", EDGE_POLYS[RED], "--points", 30, "--out", out) == 0
    assert load(out)["disagreements"] == []
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"points": [[0, 0], [1, -1]]}))
    sites = tmp_path / "s.json"
    sites.write_text(json.dumps({"n": 2, "sites": [[1, 2], [4, -1]]}))
    assert run("realize", "--graph", g, "--sites", sites, "--out", out) == 0
    assert load(out)["kind"]
    assert run("realize", "--graph", g, "--sites", sites, "--root", "5,5") == 2
