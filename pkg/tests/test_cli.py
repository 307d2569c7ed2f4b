import json

import pytest

from conftest import tri_of
from sl3skein.cli import MISMATCH, OK, USAGE, RunConfig, UsageError, run
from sl3skein.cone import peripheral_vectors
from sl3skein.ptrace import TriangleNetwork, default_network, dumps_network


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_surface_info(capsys):
    code, out, err = call(capsys, "surface", "info", "--genus", "1", "--punctures", "1")
    assert code == OK
    data = json.loads(out)
    assert data["vertices"] == 8 and data["triangles"] == 2
    assert "quiver vertices" in err


@pytest.mark.parametrize("argv", [
    ["surface", "info", "--genus", "0", "--punctures", "2"],
    ["surface", "info", "--genus", "1"],
    ["surface", "info", "--surface-file", "/nonexistent.json"],
    ["rank", "--genus", "1", "--punctures", "1", "--order", "0"],
    ["cone", "check", "--genus", "1", "--punctures", "1", "--k", "1,2"],
    ["cone", "check", "--genus", "1", "--punctures", "1", "--k", "a,b"],
    ["count", "simplex", "--genus", "0", "--punctures", "3", "--order", "4", "--k", "-1"],
    ["count", "simplex", "--genus", "0", "--punctures", "3", "--order", "4", "--budget", "0"],
    ["nonsense"],
    [],
])
def test_usage_errors(capsys, argv):
    assert call(capsys, *argv)[0] == USAGE


def test_rank_command(capsys):
    code, out, _ = call(capsys, "rank", "--genus", "1", "--punctures", "1", "--order", "20", "--check-closed-form")
    data = json.loads(out)
    assert code == OK
    assert data["N_prime"] == 10 and data["index"] == data["closed_form"] == 10 ** 6


def test_cone_check(capsys):
    tri = tri_of(0, 3)
    p = peripheral_vectors(tri)[0]
    code, out, _ = call(capsys, "cone", "check", "--genus", "0", "--punctures", "3", "--k", ",".join(map(str, p)))
    assert code == OK and json.loads(out)["in_cone"]
    code, out, _ = call(capsys, "cone", "check", "--genus", "0", "--punctures", "3", "--k", "1,0,0,0,0,0,0,0")
    assert code == MISMATCH and not json.loads(out)["in_cone"]


def test_hilbert(capsys):
    code, out, _ = call(capsys, "cone", "hilbert", "--genus", "0", "--punctures", "3", "--bound", "30")
    assert code == OK and len(json.loads(out)["generators"]) == 10


@pytest.mark.parametrize("order", [None, "4", "9"])
def test_center_enumerate(capsys, order):
    argv = ["center", "enumerate", "--genus", "1", "--punctures", "1", "--bound", "8"]
    if order:
        argv += ["--order", order]
    code, out, _ = call(capsys, *argv)
    data = json.loads(out)
    assert code == OK and data["matches_expected"]


def test_count_simplex(capsys):
    code, out, err = call(capsys, "count", "simplex", "--genus", "0", "--punctures", "3", "--order", "4", "--k", "12")
    assert code == OK
    lines = out.splitlines()
    assert lines[0] == "k,cone_count,omega_count,ratio" and len(lines) == 14
    code, out, err = call(capsys, "count", "simplex", "--genus", "0", "--punctures", "3", "--order", "4",
                          "--k", "40", "--budget", "200")
    assert code == OK and "truncated" in err


def test_verify_commands(capsys):
    assert call(capsys, "verify", "chebyshev", "--mmax", "12", "--samples", "100", "--seed", "7")[0] == OK
    assert call(capsys, "verify", "frobenius-p3", "--order", "5")[0] == OK
    code, out, _ = call(capsys, "verify", "roundtrip", "--genus", "1", "--punctures", "1", "--bound", "6",
                        "--samples", "50")
    assert code == OK and json.loads(out)["pass"]


def test_bad_network(capsys, tmp_path):
    paths = dict(default_network().paths)
    paths[(0, 1, 2)] = ((0,) * 7,)
    f = tmp_path / "bad.json"
    f.write_text(dumps_network(TriangleNetwork(paths)))
    code, out, _ = call(capsys, "verify", "frobenius-p3", "--order", "5", "--network", str(f))
    assert code == MISMATCH and not json.loads(out)["validation"]["pass"]
    f.write_text("{not json")
    assert call(capsys, "verify", "frobenius-p3", "--order", "5", "--network", str(f))[0] == USAGE


def test_surface_file(capsys, tmp_path):
    _, out, _ = call(capsys, "surface", "info", "--genus", "0", "--punctures", "3")
    f = tmp_path / "tri.json"
    f.write_text(json.dumps(json.loads(out)["triangulation"]))
    code, out2, _ = call(capsys, "surface", "info", "--surface-file", str(f))
    assert code == OK and json.loads(out2)["quiver"] == json.loads(out)["quiver"]


@pytest.mark.parametrize("argv", [
    ["verify", "chebyshev", "--samples", "20", "--seed", "3"],
    ["verify", "roundtrip", "--genus", "0", "--punctures", "3", "--samples", "30", "--seed", "9"],
    ["rank", "--genus", "0", "--punctures", "4", "--order", "36"],
])
def test_deterministic_output(capsys, argv):
    a = call(capsys, *argv)
    b = call(capsys, *argv)
    assert a == b


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("rank", bound=-1)
    with pytest.raises(UsageError):
        RunConfig("rank", budget=0)
    assert RunConfig("rank", order=4).root_data().N == 2
