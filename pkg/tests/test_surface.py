import json

import pytest
from hypothesis import given, settings, strategies as st

from hopflattice.errors import InvalidSite, SitesNotDisjoint, SpecError, UnknownSurface
from hopflattice.surface import (CellDecomposition, Site, auto_sites, build_standard,
                                 disjoint_sites, dual_decomposition, dual_site, flip_edge,
                                 from_dict, from_face_words, parse_sites, parse_surface,
                                 require_disjoint, torus_grid)

# (V, E, F) and genus of the standard decompositions
COUNTS = {
    "sphere:tetrahedron": ((4, 6, 4), 0),
    "sphere:cube": ((8, 12, 6), 0),
    "sphere:bigon": ((2, 2, 2), 0),
    "torus:square-1v": ((1, 2, 1), 1),
    "torus:grid-2x2": ((4, 8, 4), 1),
    "torus:grid-3x2": ((6, 12, 6), 1),
    "genus2:octagon-1v": ((1, 4, 1), 2),
}


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_standard_counts(name):
    C = parse_surface(name)
    counts, genus = COUNTS[name]
    assert C.counts == counts
    assert C.genus == genus
    assert C.euler_characteristic == 2 - 2 * genus


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_dual_swaps_counts(name):
    C = parse_surface(name)
    D = dual_decomposition(C)
    v, e, f = C.counts
    assert D.counts == (f, e, v)
    assert dual_decomposition(D).counts == C.counts
    assert D.genus == C.genus


@pytest.mark.parametrize("name", sorted(COUNTS))
def test_face_and_vertex_orbits_partition_darts(name):
    C = parse_surface(name)
    assert sorted(d for f in C.faces for d in f) == list(range(C.n_darts))
    assert sorted(d for v in C.vertices for d in v) == list(range(C.n_darts))
    for d in range(C.n_darts):
        assert C.vertex_darts(d)[-1] == d
        assert C.face_darts(d)[0] == d
        assert sum(C.is_positive(x) for x in (d, C.edge_pair[d])) == 1


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5))
def test_torus_grid_counts(n, m):
    C = torus_grid(n, m)
    assert C.counts == (n * m, 2 * n * m, n * m)
    assert C.genus == 1
    assert all(len(f) == 4 for f in C.faces)
    assert all(len(v) == 4 for v in C.vertices)


def test_bigon_face_degrees():
    C = build_standard("sphere:bigon")
    assert sorted(len(f) for f in C.faces) == [2, 2]
    assert sorted(len(v) for v in C.vertices) == [2, 2]


def test_one_vertex_torus_has_four_incidences():
    C = build_standard("torus:square-1v")
    assert len(C.sites_at_vertex(0)) == 4
    assert len(C.sites_at_face(0)) == 4
    assert C.incident(0, 0)


def test_invalid_maps_rejected():
    with pytest.raises(SpecError):
        from_face_words([[1, 2], [1, -2]])
    with pytest.raises(SpecError):
        from_face_words([[1, 2]])
    with pytest.raises(Exception):
        CellDecomposition((1, 0, 3, 2), (0, 1, 2, 3), (0, 2))   # disconnected


def test_unknown_surface():
    with pytest.raises(UnknownSurface):
        parse_surface("klein:bottle")
    with pytest.raises(UnknownSurface):
        parse_surface("torus:grid-1x3")


def test_json_roundtrip(tmp_path):
    C = build_standard("sphere:cube")
    path = tmp_path / "cube.json"
    path.write_text(json.dumps(C.to_dict()))
    D = parse_surface(f"json:{path}")
    assert D.counts == C.counts
    assert D.vertex_rot == C.vertex_rot
    with pytest.raises(SpecError):
        from_dict({"edge_pair": [1, 0]})


def test_site_validation():
    C = build_standard("sphere:tetrahedron")
    s = C.site(0, C.face_of[C.vertices[0][0]])
    assert C.vertex_of[s.anchor_dart] == 0
    with pytest.raises(InvalidSite):
        C.site(0, 99)
    bad_face = next(p for p in range(C.n_faces) if not C.incident(0, p))
    with pytest.raises(InvalidSite):
        C.site(0, bad_face)
    with pytest.raises(InvalidSite):
        C.check_site(Site(1, s.face, s.anchor_dart))


def test_dual_site_same_corner():
    for name in ("sphere:tetrahedron", "torus:grid-2x2", "torus:square-1v"):
        C = parse_surface(name)
        D = dual_decomposition(C)
        for d in range(C.n_darts):
            s = Site(C.vertex_of[d], C.face_of[d], d)
            t = dual_site(C, D, s)
            # the dual vertex is the primal face, and the dual face is the
            # orbit of primal vertex darts
            assert t.vertex == s.face
            assert {C.edge_of[x] for x in D.faces[t.face]} == C.vertex_edges(s.vertex)


def test_flip_edge_changes_orientation_only():
    C = build_standard("torus:grid-2x2")
    F = flip_edge(C, 3)
    assert F.positive_dart[3] == C.edge_pair[C.positive_dart[3]]
    assert F.vertex_rot == C.vertex_rot and F.counts == C.counts


def test_disjoint_sites():
    C = build_standard("sphere:cube")
    sites = auto_sites(C, 2)
    assert disjoint_sites(C, sites)
    s = sites[0]
    other = next(x for x in C.sites_at_vertex(s.vertex) if x.face != s.face)
    assert not disjoint_sites(C, [s, other])
    with pytest.raises(SitesNotDisjoint):
        require_disjoint(C, [s, other])
    with pytest.raises(SitesNotDisjoint):
        auto_sites(build_standard("torus:square-1v"), 2)


def test_parse_sites():
    C = build_standard("sphere:cube")
    assert parse_sites(C, "") == []
    assert len(parse_sites(C, "auto:2")) == 2
    s = parse_sites(C, f"0,{C.face_of[0]},0")[0]
    assert s == Site(0, C.face_of[0], 0)
    with pytest.raises(SpecError):
        parse_sites(C, "0;1")
    with pytest.raises(SpecError):
        parse_sites(C, "a,b")
