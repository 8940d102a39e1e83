import json

import pytest

from g2fk.cli import main
from g2fk.runner import RunConfig, UsageError


def test_usage_errors(capsys):
    assert main(["verify", "--p", "3", "--model", "poly"]) == 2
    assert "model requires p ≥ 5" in capsys.readouterr().err
    assert main(["verify", "--p", "9"]) == 2
    assert main(["verify", "--p", "5", "--suite", "nope"]) == 2
    assert main(["verify", "--p", "5", "--suite", "p3"]) == 2
    assert main(["iso", "--p", "3"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_config_defaults():
    assert RunConfig(p=3).model == "chevalley"
    assert RunConfig(p=5).model == "poly"
    assert RunConfig(p=5).selected == ["structure", "aut", "chevalley"]
    assert RunConfig(p=3).selected == ["chevalley", "p3"]
    with pytest.raises(UsageError):
        RunConfig(p=5, jobs=0)


def test_verify_p3_report(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--p", "3", "--out", str(out), "--cache-dir", str(tmp_path / "c")]) == 0
    data = json.loads(out.read_text())
    assert list(data)[:5] == ["p", "model", "suite", "checks", "summary"]
    assert list(data["checks"][0]) == ["id", "status", "expected", "actual", "witness", "millis"]
    assert data["summary"]["fail"] == 0
    assert data["summary"]["finding"] == 2
    assert data["summary"]["skip"] == 1
    assert all(c["millis"] is None for c in data["checks"])
    assert (tmp_path / "c" / "chevalley-p3.g2fk").exists()


def test_timings_sidecar(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--p", "3", "--suite", "chevalley", "--out", str(out), "--timings",
                 "--cache-dir", str(tmp_path / "c")]) == 0
    side = json.loads((tmp_path / "r.timings.json").read_text())
    assert set(side) == {"total_millis", "cache_hits", "builds", "checks"}
    assert json.loads(out.read_text())["total_millis"] is None


def test_census_subsets(capsys):
    assert main(["census", "--subsets"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "orbit\tprinted\tleast\tlength"
    assert len(lines) == 14
    assert sum(int(line.split("\t")[3]) for line in lines[1:]) == 63


def test_census_orders(capsys, tmp_path):
    assert main(["census", "--orders", "--p", "3", "--cache-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "3\t404" in out and "9\t324" in out


def test_build(capsys, tmp_path):
    assert main(["build", "--p", "5", "--model", "both", "--cache-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[:3] for line in out] == [["5", "poly", "15625"], ["5", "chevalley", "15625"]]
    assert (tmp_path / "poly-p5.g2fk").stat().st_size == 15625 * 6 + 12


def test_iso(tmp_path, capsys):
    out = tmp_path / "iso.json"
    assert main(["iso", "--p", "5", "--out", str(out), "--cache-dir", str(tmp_path)]) == 0
    data = json.loads(out.read_text())
    assert data["suite"] == "iso"
    assert {c["status"] for c in data["checks"]} == {"pass"}


def test_report_renders(tmp_path):
    out = tmp_path / "rep"
    assert main(["report", "--p", "3", "--out", str(out), "--cache-dir", str(tmp_path / "c")]) == 0
    for name in ("report.json", "checks.tsv", "status.png", "subset_orbits.tsv", "subset_orbits.png",
                 "element_orders.tsv", "element_orders.png"):
        assert (out / name).stat().st_size > 0, name
    rows = (out / "checks.tsv").read_text().splitlines()
    assert rows[0].split("\t") == ["id", "status", "expected", "actual", "witness"]
    assert (out / "status.png").read_bytes()[:4] == b"\x89PNG"
    # rendering an existing report needs no suites
    again = tmp_path / "again"
    assert main(["report", "--p", "3", "--out", str(again), "--from", str(out / "report.json"),
                 "--cache-dir", str(tmp_path / "c")]) == 0
    assert (again / "checks.tsv").read_text() == (out / "checks.tsv").read_text()


def test_both_models_structure_p5(tmp_path):
    # structure checks on the matrix model use automorphisms carried over by the isomorphism
    from g2fk.runner import run

    report = run(RunConfig(p=5, model="both", suites=["structure"], cache_dir=tmp_path))
    ids = [r.id for r in report.checks]
    assert any(i.startswith("chevalley:charz.") for i in ids) and any(i.startswith("poly:charz.") for i in ids)
    assert report.summary["fail"] == 0, [r for r in report.checks if r.status == "fail"]


def test_transport_yields_automorphisms(tmp_path):
    from g2fk import groups as G
    from g2fk.runner import Runner

    runner = Runner(RunConfig(p=5, model="both", suites=["structure"], cache_dir=tmp_path))
    chev = runner.table("chevalley")
    for label, perm in runner._poly_auts():
        moved = runner._transport(perm)
        res = G.hom_check([int(moved[g]) for g in chev.generators], chev, chev)
        assert res.bijective and (res.mapping == moved).all(), label
