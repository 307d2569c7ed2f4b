import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl3skein.cone import in_balanced
from sl3skein.errors import InvalidNetwork
from sl3skein.ptrace import (
    EXPECTED_COUNTS,
    TriangleNetwork,
    corner_arc_trace,
    default_network,
    derive_network,
    dumps_network,
    frobenius_compat_p3,
    load_network,
    rotate_vector,
    validate_network,
)
from sl3skein.qtorus import RootData
from sl3skein.surface import single_triangle


def with_paths(net, key, vecs):
    paths = dict(net.paths)
    paths[key] = tuple(vecs)
    return TriangleNetwork(paths)


def clauses(net):
    return {f["clause"] for f in validate_network(net)["failures"]}


def test_shipped_network_valid():
    rep = validate_network(default_network())
    assert rep == {"pass": True, "failures": []}


def test_shipped_network_is_derived():
    assert derive_network() == default_network()
    text = dumps_network(derive_network())
    assert TriangleNetwork.from_json(json.loads(text)) == default_network()


def test_path_counts():
    net = default_network()
    for p in range(3):
        for (i, j), want in EXPECTED_COUNTS.items():
            assert len(net.paths.get((p, i, j), ())) == want


def test_rotation_covariance():
    net = default_network()
    for p in range(3):
        for i, j in EXPECTED_COUNTS:
            rotated = sorted(rotate_vector(k, p) for k in net.paths.get((0, i, j), ()))
            assert rotated == sorted(net.paths.get((p, i, j), ()))
    k = tuple(range(7))
    assert rotate_vector(rotate_vector(rotate_vector(k, 1), 1), 1) == k


def test_traces():
    net = default_network()
    tri = single_triangle()
    for p in range(3):
        assert corner_arc_trace(net, p, 1, 2).is_zero()
        assert len(corner_arc_trace(net, p, 1, 1).terms) == 1
        u = corner_arc_trace(net, p, 3, 2)
        assert len(u.terms) == 2
        t1, t2 = sorted(u.terms)
        assert abs(u.torus.pairing(t1, t2)) == 18
        for i, j in EXPECTED_COUNTS:
            assert all(in_balanced(tri, t) for t in corner_arc_trace(net, p, i, j).terms)


def test_injected_path_fails_count():
    net = default_network()
    bad = with_paths(net, (0, 1, 2), [(0,) * 7])
    assert not validate_network(bad)["pass"]
    assert "path_count" in clauses(bad)
    with pytest.raises(InvalidNetwork):
        corner_arc_trace(bad, 0, 1, 1)


@pytest.mark.parametrize("key", [(0, 1, 1), (1, 2, 2), (2, 3, 3)])
def test_perturbed_diagonal_fails_balance(key):
    net = default_network()
    for idx in range(7):
        k = list(net.paths[key][0])
        k[idx] = 1 - k[idx]
        assert "balanced" in clauses(with_paths(net, key, [tuple(k)]))


def test_perturbed_binomial_path_fails_pairing():
    net = default_network()
    g1, g2 = net.paths[(0, 3, 2)]
    k = list(g1)
    k[6] = 1 - k[6]
    assert clauses(with_paths(net, (0, 3, 2), [tuple(k), g2])) == {"pairing_18"}


def test_shape_and_unknown_keys():
    net = default_network()
    assert "left_set_shape" in clauses(with_paths(net, (0, 1, 1), [(2,) + (0,) * 6]))
    assert "unknown_key" in clauses(with_paths(net, (5, 1, 1), [(0,) * 7]))


def test_malformed_json():
    with pytest.raises(InvalidNetwork):
        TriangleNetwork.from_json({"paths": {"a,b": [[0]]}})
    with pytest.raises(InvalidNetwork):
        TriangleNetwork.from_json({})


def test_load_network(tmp_path):
    f = tmp_path / "net.json"
    f.write_text(dumps_network(default_network()))
    assert load_network(str(f)) == default_network()


@pytest.mark.parametrize("M", [4, 8, 5, 7, 9, 36])
def test_frobenius_compatibility(M):
    rep = frobenius_compat_p3(default_network(), RootData(M))
    assert rep["pass"] and len(rep["cases"]) == 27


@pytest.mark.parametrize("M,N", [(4, 3), (5, 2), (7, 5)])
def test_wrong_exponent_detected(M, N):
    rep = frobenius_compat_p3(default_network(), RootData(M), N=N)
    assert not rep["pass"]
    bad = {(c["i"], c["j"]) for c in rep["cases"] if not c["ok"]}
    assert bad == {(3, 2)}


def test_compat_rejects_invalid():
    bad = with_paths(default_network(), (0, 1, 2), [(0,) * 7])
    with pytest.raises(InvalidNetwork):
        frobenius_compat_p3(bad, RootData(5))


@settings(max_examples=25)
@given(st.lists(st.integers(0, 1), min_size=7, max_size=7), st.lists(st.integers(0, 1), min_size=7, max_size=7),
       st.sampled_from([4, 5, 7]))
def test_compatibility_on_any_valid_network(a, b, M):
    # the single off-diagonal paths are not pinned by validation
    net = with_paths(with_paths(default_network(), (0, 2, 1), [tuple(a)]), (1, 3, 1), [tuple(b)])
    assert validate_network(net)["pass"]
    assert frobenius_compat_p3(net, RootData(M))["pass"]
