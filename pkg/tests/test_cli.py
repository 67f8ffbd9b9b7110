import io
import json
import subprocess
import sys

import pytest

from lftdisk.cli import main

HYP_AUT = '{"a":[3,0],"b":[1,0],"c":[1,0],"d":[3,0]}'
MINUS_Z = '{"a":[-1,0],"b":[0,0],"c":[0,0],"d":[1,0]}'
NO_ROOT = '{"a":[-1,0],"b":[0,0],"c":[3,0],"d":[4,0]}'
HALF = '{"a":[1,0],"b":[1,0],"c":[0,0],"d":[2,0]}'
IDENT = '{"a":[1,0],"b":[0,0],"c":[0,0],"d":[1,0]}'


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify():
    code, out, _ = run("classify", HYP_AUT)
    res = json.loads(out)
    assert code == 0
    assert res["tag"] == "HyperbolicAut"
    assert res["dw_point"] == pytest.approx([1, 0])
    assert res["multiplier"] == pytest.approx([0.5, 0])
    assert res["tolerances"]["classify"] == 1e-9


def test_tolerance_override_is_echoed():
    _, out, _ = run("classify", HYP_AUT, "--tol-class", "1e-7")
    assert json.loads(out)["tolerances"]["classify"] == 1e-7


def test_embed_negative_verdict_exits_one():
    code, out, _ = run("embed", NO_ROOT, "--depth", "8")
    assert code == 1
    assert json.loads(out)["status"] == "NotEmbeddable"


def test_embed_with_time():
    code, out, _ = run("embed", HALF, "--time", "1/2^1")
    assert code == 0
    assert json.loads(out)["time"] == "1/2"


def test_roots_and_round_trip():
    code, out, _ = run("roots", "--n", "2", MINUS_Z)
    res = json.loads(out)
    assert code == 0 and res["count"] == 2
    for r in res["roots"]:
        code, out, _ = run("classify", json.dumps(r))
        assert code == 0 and json.loads(out)["tag"] == "EllipticAut"


def test_intertwine_check_and_solve():
    f = '{"a":[0,1],"b":[1,0],"c":[-1,0],"d":[2,1]}'
    psi = '{"a":[2,1],"b":[0,1],"c":[1,0],"d":[1,2]}'
    code, out, _ = run("intertwine", "check", f, HALF, psi)
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run("intertwine-check", IDENT, '{"a":[1,0],"b":[0,0],"c":[0,0],"d":[2,0]}',
                       '{"a":[1,0],"b":[0,0],"c":[0,0],"d":[4,0]}')
    assert code == 1 and json.loads(out)["failed"] == ["multiplier"]
    code, out, _ = run("intertwine-solve", HALF, psi, "--samples", "2")
    res = json.loads(out)
    assert code == 0 and res["kind"] == "TwoPointFamily" and len(res["samples"]) == 2
    code, out, _ = run("intertwine", "solve", HALF, psi, "--samples", "2")
    assert json.loads(out)["samples"] == res["samples"]


def test_intertwine_check_with_registry_map():
    phi = '{"a":[-1,0],"b":[0,0],"c":[0,0],"d":[1,0]}'
    code, out, _ = run("intertwine", "check", "example_2_1_square", phi, IDENT)
    assert code == 0 and json.loads(out)["residual"] < 1e-10
    code, _, err = run("intertwine", "check", "no_such_map", phi, IDENT)
    assert code == 2 and "no_such_map" in err


def test_orbit_formats():
    code, out, _ = run("orbit", HALF, "--n", "3", "--format", "csv")
    assert code == 0 and out.splitlines()[1].startswith("1,0.5,0,")
    code, out, _ = run("orbit", HALF, "--n", "3", "--format", "svg")
    assert code == 0 and out.startswith("<svg")


def test_fixed_points_and_iterate():
    code, out, _ = run("fixed-points", HYP_AUT)
    pts = sorted(p[0] for p in json.loads(out)["points"])
    assert pts == pytest.approx([-1, 1])
    code, out, _ = run("iterate", HALF, "--n", "3", "--point", "[0,0]")
    assert json.loads(out)["value"] == pytest.approx([0.875, 0])


def test_file_argument(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(HYP_AUT)
    code, out, _ = run("classify", f"@{p}", "--format", "table")
    assert code == 0 and "HyperbolicAut" in out


def test_usage_errors():
    assert run("classify", '{"a":[3,0]}')[0] == 2
    assert run("classify", "[1,2")[0] == 2
    assert run("roots", "--n", "0", MINUS_Z)[0] == 2
    assert run("frobnicate")[0] == 2
    code, _, err = run("classify", HYP_AUT, "--format", "svg")
    assert code == 2 and "orbit" in err
    assert run("embed", HALF, "--time", "1/3")[0] == 2


def test_mathematical_precondition_failure():
    code, _, err = run("classify", '{"a":[2,0],"b":[0,0],"c":[0,0],"d":[1,0]}')
    assert code == 1 and "NotSelfMap" in err


def test_corpus_replay_and_env_override(tmp_path, monkeypatch):
    code, out, _ = run("corpus", "--format", "table")
    assert code == 0 and out.strip().endswith("records pass")
    p = tmp_path / "c.json"
    p.write_text("[]")
    monkeypatch.setenv("LFTDISK_CORPUS", str(p))
    code, out, _ = run("corpus")
    assert code == 0 and json.loads(out)["n_records"] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lftdisk", "classify", HYP_AUT], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["tag"] == "HyperbolicAut"
