import json
import random

import pytest
from gmpy2 import mpq

from liouville.certify import loads
from liouville.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, fmt_rational, main, parse_digits, parse_schedule

from tamper import perturb


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pair(tmp_path, capsys):
    path = tmp_path / "pair.json"
    code, _, _ = run(capsys, "construct", "spiffy", "--schedule", "paper", "--digits", "all2", "--digits", "all2@2=0", "--levels", "2", "--out", path)
    assert code == EXIT_OK
    return path


@pytest.fixture
def jarnik(tmp_path, capsys):
    path = tmp_path / "jarnik.json"
    code, _, _ = run(capsys, "construct", "jarnik", "--forced", "2^(2^n)", "--filler", 2, "--stages", 4, "--out", path)
    assert code == EXIT_OK
    return path


def test_mini_language():
    assert parse_schedule("factorial").exponent_int(3) == 24
    assert parse_schedule("custom:2,5,9").exponent_int(2) == 5
    d = parse_digits("all2@2=0")
    assert d.digits(3) == (2, 0, 2)
    p = parse_digits("periodic:2,0")
    assert p.digits(4) == (2, 0, 2, 0)
    assert fmt_rational(mpq(2, 3**27)) == "2/3^27"


def test_construct_spiffy(tmp_path, capsys):
    path = tmp_path / "x.json"
    code, out, err = run(capsys, "construct", "spiffy", "--schedule", "factorial", "--digits", "all2", "--levels", 6, "--out", path)
    assert code == EXIT_OK
    doc = json.loads(path.read_text())
    assert doc["kind"] == "spiffy" and len(doc["levels"]) == 6
    assert doc["levels"][0]["truncation"] == "2/9"
    assert {"tail_generic", "tail_refined"} <= set(doc["levels"][5])
    assert "guaranteed" in out


def test_construct_jarnik(jarnik):
    doc = json.loads(jarnik.read_text())
    assert doc["kind"] == "jarnik" and len(doc["stages"]) == 4


def test_construct_tuned_params(capsys):
    code, out, _ = run(capsys, "construct", "tuned-params", "--j", 2)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert (doc["V"], doc["B"]) == ("2980", "8880400")


def test_certify_poly_rational_escape(pair, tmp_path, capsys):
    code, out, err = run(capsys, "certify", "poly", "--poly", "X-Y", "--inputs", pair, "--m", 2, "--out", tmp_path / "c.json")
    assert code == EXIT_OK
    assert "m=2: rational 2/3^27" in out


def test_certify_selfpower_target(jarnik, tmp_path, capsys):
    out_path = tmp_path / "sp.json"
    code, out, _ = run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 4, "--target-N", 2, "--out", out_path)
    assert code == EXIT_OK and "N=2: certified at stage 1" in out
    # the reference configuration does not reach N=10 (see acceptance notes)
    code, out, _ = run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 4, "--target-N", 10, "--out", out_path)
    assert code == EXIT_FAIL and "N=10: not reached" in out
    assert "achieved exponent" in out


def test_certify_pairwise_mismatch(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "construct", "spiffy", "--digits", "all2", "--levels", 1, "--out", a)
    run(capsys, "construct", "spiffy", "--digits", "all0@1=2", "--levels", 1, "--out", b)
    code, _, err = run(capsys, "certify", "pairwise", "--x", a, "--y", b, "--levels", "2,3")
    assert code == EXIT_INPUT
    assert json.loads(err.strip().splitlines()[-1])["error"] == "anchor-mismatch"


def test_verify_paths(jarnik, tmp_path, capsys):
    cert = tmp_path / "sp.json"
    run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 3, "--out", cert)
    code, out, _ = run(capsys, "verify", cert)
    assert code == EXIT_OK and "accepted" in out
    doc = loads(cert.read_text())
    doc["stages"][1]["P"] = str(int(doc["stages"][1]["P"]) + 1)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", bad)
    assert code == EXIT_FAIL and "rejected: stage 2: P" in out
    trunc = tmp_path / "trunc.json"
    trunc.write_text(cert.read_text()[:200])
    code, _, err = run(capsys, "verify", trunc)
    assert code == EXIT_INPUT and "malformed-certificate" in err


def test_verify_tamper_sample(jarnik, tmp_path, capsys):
    cert = tmp_path / "sp.json"
    run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 2, "--out", cert)
    doc = loads(cert.read_text())
    rng = random.Random(7)
    for i in range(10):
        d, path = perturb(doc, rng)
        p = tmp_path / f"t{i}.json"
        p.write_text(json.dumps(d))
        code, _, _ = run(capsys, "verify", p)
        assert code == EXIT_FAIL, path


def test_scan_examples(capsys):
    code, out, err = run(capsys, "scan", "--xi", "invert:3/4", "--tau", 3, "--bmax", 10)
    assert code == EXIT_OK
    rows = out.strip().splitlines()
    assert rows[0] == "a,b,gap_sign,certified_gap"
    assert [r.split(",")[:2] for r in rows[1:]] == [["3", "4"]]
    code, out, err = run(capsys, "scan", "--xi", "rational:1/2", "--tau", 3, "--bmax", 50)
    assert code == EXIT_OK and "violations=0" in err
    code, out, _ = run(capsys, "scan", "--xi", "rational:1/2", "--tau", 3, "--bmax", 0)
    assert code == EXIT_OK and len(out.strip().splitlines()) == 1


def test_scan_jobs_deterministic(capsys):
    args = ("scan", "--xi", "rational:9/16", "--tau", 3, "--bmax", 40)
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", 2)
    assert serial == parallel


def test_scan_undecided_exit(capsys):
    code, _, err = run(capsys, "scan", "--xi", "rational:1/2", "--tau", 3, "--bmax", 2000, "--budget", 32)
    assert code in (EXIT_OK, EXIT_RESOURCE)
    if code == EXIT_RESOURCE:
        assert "precision-insufficient" in err


def test_invalid_configs(capsys):
    for argv in (
        ("construct", "spiffy", "--schedule", "bogus"),
        ("construct", "spiffy", "--digits", "all3"),
        ("construct", "tuned-params"),
        ("scan", "--xi", "rational:1/5", "--tau", 3, "--bmax", 5),
        ("scan", "--xi", "rational:1/2", "--tau", 3, "--bmax", 5, "--jobs", 0),
        ("nonsense",),
    ):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_INPUT, argv


def test_unmaterializable_exit(capsys):
    code, _, err = run(capsys, "construct", "spiffy", "--schedule", "paper", "--levels", 3)
    assert code == EXIT_RESOURCE and "unmaterializable" in err


def test_determinism(tmp_path, capsys, jarnik):
    outs = []
    for i in range(2):
        p = tmp_path / f"run{i}.json"
        run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 3, "--out", p)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_precision_env(monkeypatch, tmp_path, capsys, jarnik):
    monkeypatch.setenv("LIOUVILLE_PRECISION", "128")
    p = tmp_path / "c.json"
    run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 1, "--out", p)
    assert loads(p.read_text())["budget"] == "128"
    code, _, _ = run(capsys, "verify", p)
    assert code == EXIT_OK


def test_reports(capsys, jarnik, tmp_path):
    code, out, _ = run(capsys, "report", "exponents", "--levels", 4)
    assert code == EXIT_OK and "grade" in out
    code, out, _ = run(capsys, "report", "hausdorff", "--s", "1/2", "--tau", 3, "--b-range", "1:50")
    assert code == EXIT_OK and "regime=" in out
    cert = tmp_path / "c.json"
    run(capsys, "certify", "selfpower", "--from", jarnik, "--stages", 2, "--out", cert)
    code, out, _ = run(capsys, "report", "certificate", cert)
    assert code == EXIT_OK
