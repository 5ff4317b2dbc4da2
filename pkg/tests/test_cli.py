"""CLI surface and JSON report round-trips."""

import json

import pytest

from gptlab import cli, reports, systems


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_build_squashed_gtrit(capsys):
    code, out = run(["system", "build", "--kind", "squashed-gtrit"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["kind"] == "squashed-gtrit"
    s = reports.system_from_descriptor(d)
    assert len(s.ray_extremes) == 5


def test_check_classical_trit(tmp_path, capsys):
    path = tmp_path / "trit.json"
    code, out = run(["system", "build", "--kind", "classical", "--n", "3",
                     "-o", str(path)], capsys)
    assert code == 0
    code, out = run(["system", "check", str(path)], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["counts"]["components"] == 3
    assert d["checks"]["dichotomic"] is False


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _ = run(["system", "check", str(bad)], capsys)
    assert code == 2


def test_missing_parameter_exits_2(capsys):
    code, _ = run(["system", "build", "--kind", "polygon"], capsys)
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    code, _ = run(["system", "build", "--kine", "cube"], capsys)
    assert code == 2


def test_compose_and_theorem1(tmp_path, capsys):
    sq = tmp_path / "sq.json"
    comp = tmp_path / "comp.json"
    rep = tmp_path / "rep.json"
    assert run(["system", "build", "--kind", "cube", "--d", "2",
                "-o", str(sq)], capsys)[0] == 0
    assert run(["compose", str(sq), str(sq), "-o", str(comp)], capsys)[0] \
        == 0
    code, out = run(["analyze", str(comp), "--theorem1", "-o", str(rep)],
                    capsys)
    assert code == 0
    d = json.loads(out)
    assert d["counts"]["reversibles"] == 128
    assert d["counts"]["trivial_group_order"] == 128
    assert d["checks"]["passed"] is True
    code, shown = run(["report", "show", str(rep)], capsys)
    assert code == 0
    assert "PASS" in shown


def test_cnot_report_includes_map_table(tmp_path, capsys):
    g = tmp_path / "g.json"
    comp = tmp_path / "gg.json"
    assert run(["system", "build", "--kind", "squashed-gtrit",
                "-o", str(g)], capsys)[0] == 0
    assert run(["compose", str(g), str(g), "-o", str(comp)], capsys)[0] == 0
    code, out = run(["analyze", str(comp), "--cnot", "--control", "1",
                     "--target", "2"], capsys)
    assert code == 0
    d = json.loads(out)
    table = {tuple(row) for row in d["witnesses"]["effect_map"]}
    assert ("(X)*(Y0)", "(X)*(Y1)") in table
    assert ("(X)*(X)", "(X)*(X)") in table
    moved = [r for r in table if r[0] != r[1]]
    assert len(moved) == 4


def test_budget_exceeded_exits_3(tmp_path, capsys):
    sq = tmp_path / "sq.json"
    comp = tmp_path / "comp.json"
    assert run(["system", "build", "--kind", "cube", "--d", "2",
                "-o", str(sq)], capsys)[0] == 0
    assert run(["compose", str(sq), str(sq), "-o", str(comp)], capsys)[0] \
        == 0
    rep = tmp_path / "partial.json"
    code, out = run(["analyze", str(comp), "--enumerate",
                     "--node-cap", "10", "-o", str(rep)], capsys)
    assert code == 3
    d = json.loads(out)
    assert d["partial"] is True


def test_report_roundtrip_byte_identical(tmp_path, capsys):
    g = tmp_path / "g.json"
    rep = tmp_path / "check.json"
    assert run(["system", "build", "--kind", "squashed-gtrit",
                "-o", str(g)], capsys)[0] == 0
    assert run(["system", "check", str(g), "-o", str(rep)], capsys)[0] == 0
    original = rep.read_text()
    loaded = reports.load_report(str(rep))
    assert reports.canonical_dumps(loaded.to_dict()) == original


def test_exact_descriptor_roundtrip(tmp_path):
    g = systems.build_squashed_gtrit()
    d = reports.descriptor_from_system(g)
    # force the explicit form by dropping the catalog reference
    explicit = {"name": g.name, "scalar_mode": g.scalar_mode,
                "dim": g.dim,
                "unit": reports.encode_vector(g.unit, g.scalar_mode),
                "ray_extremes": [reports.encode_vector(e, g.scalar_mode)
                                 for e in g.ray_extremes],
                "ray_labels": list(g.ray_labels)}
    path = tmp_path / "explicit.json"
    reports.save_descriptor(explicit, str(path))
    s2 = reports.system_from_descriptor(reports.load_descriptor(str(path)))
    assert s2.dim == g.dim
    for a, b in zip(g.ray_extremes, s2.ray_extremes):
        assert list(a) == list(b)
