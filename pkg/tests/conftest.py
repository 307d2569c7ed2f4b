import functools

from hypothesis import HealthCheck, settings

from sl3skein.surface import SurfaceSpec, build_canonical_triangulation

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SURFACES = [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1)]


@functools.lru_cache(maxsize=None)
def tri_of(g, n, variant="fan"):
    return build_canonical_triangulation(SurfaceSpec(g, n), variant)


def column_identities(tri, k):
    """``k Q`` evaluated straight from the three column formulas."""
    n = tri.n_vertices
    out = [None] * n
    for t in range(tri.n_triangles):
        sv = lambda s, j: tri.side_vertex(t, s % 3, j)  # noqa: E731
        v = tri.interior_vertex(t)
        out[v] = 2 * sum(k[sv(i, 1)] - k[sv(i, 0)] for i in range(3))
    for edge in tri.edges:
        (t, s), (u, r) = edge.first, edge.second
        vt, vu = tri.interior_vertex(t), tri.interior_vertex(u)
        a = tri.side_vertex(t, s, 0)  # = u's second vertex on side r
        b = tri.side_vertex(t, s, 1)
        assert a == tri.side_vertex(u, r, 1) and b == tri.side_vertex(u, r, 0)
        out[a] = 2 * (k[vt] - k[tri.side_vertex(t, (s + 2) % 3, 1)]) + 2 * (
            k[tri.side_vertex(u, (r + 1) % 3, 0)] - k[vu]
        )
        out[b] = 2 * (k[tri.side_vertex(t, (s + 1) % 3, 0)] - k[vt]) + 2 * (
            k[vu] - k[tri.side_vertex(u, (r + 2) % 3, 1)]
        )
    return out


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
