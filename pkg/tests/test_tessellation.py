import itertools
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor.errors import (
    NoComplexError,
    NotThreeColorableError,
    PairingIncompatibleError,
    PatchOverflowError,
    TooFewFacesError,
)
from hypercolor.hypgeo import Mobius, TessellationSignature, face_count, fundamental_polygon
from hypercolor.tessellation import (
    COLORS,
    CellComplex,
    adjacency_isomorphic,
    coloring_problems,
    make_complex,
    shrunk_lattice,
    three_color,
    validate_complex,
)
from hypercolor.tessellation.builder import build_complex
from hypercolor.tessellation.combinatorial import (
    Hypermap,
    combinatorial_search,
    complex_from_permutations,
    cover_search,
    cyclic_cover,
    cycles,
    enumerate_complexes,
    has_distinct_vertex_faces,
    inverse,
    is_transitive,
    iter_hypermaps,
    maps_isomorphic,
)
from hypercolor.tessellation.complex import coloring_from_faces, relabel_canonically
from hypercolor.tessellation.geometric import (
    build_geometric,
    build_universal_patch,
    patch_from_complex,
    quotient_by_pairings,
)
from hypercolor.tessellation.svg import render_schematic, render_svg

SEARCHABLE = [(8, 2), (10, 2), (10, 3), (14, 3), (12, 4), (18, 4), (14, 5), (22, 5), (16, 6)]


def _counts(cx):
    return cx.n_vertices, cx.n_edges, cx.n_faces


# -- geometric builder -------------------------------------------------------


def test_bolza_counts(bolza):
    assert _counts(bolza) == (16, 24, 6)
    assert bolza.meta["builder"] == "geometric"
    assert bolza.euler_characteristic == -2
    rep = validate_complex(bolza)
    assert rep.passed, rep.failures()
    assert rep.status("vertex_angles") == "pass"


def test_quotient_idempotent(bolza):
    again = quotient_by_pairings(patch_from_complex(bolza), expected_faces=6)
    assert _counts(again) == _counts(bolza)
    assert maps_isomorphic(again, bolza)
    np.testing.assert_allclose(
        np.array(again.vertex_coords), np.array(bolza.vertex_coords), atol=1e-9
    )


def test_identity_pairings_do_not_close(bolza):
    patch = patch_from_complex(bolza)
    with pytest.raises(PairingIncompatibleError, match="pairing-incompatible") as info:
        quotient_by_pairings(patch, pairings=[Mobius.identity()] * 4)
    assert info.value.diagnostics["open_edges"] > 0


def test_patch_faces_interior_disjoint():
    sig = TessellationSignature.of(8, 2)
    patch = build_universal_patch(sig, seed="face", rotation=bolza_rotation())
    centers = np.array([f.center for f in patch.faces])
    from hypercolor.hypgeo import inradius, hyperbolic_distance

    r_in = inradius(8, 3)
    for i, j in itertools.combinations(range(len(centers)), 2):
        assert hyperbolic_distance(centers[i], centers[j]) >= 2 * r_in - 1e-9


def bolza_rotation():
    return build_geometric(TessellationSignature.of(8, 2)).meta["rotation"]


def test_patch_overflow():
    with pytest.raises(PatchOverflowError, match="patch overflow"):
        build_universal_patch(TessellationSignature.of(8, 2), budget=5)


def test_geometric_fails_without_alignment():
    with pytest.raises(PairingIncompatibleError):
        build_geometric(TessellationSignature.of(10, 2))


def test_auto_falls_back_with_notice():
    cx = build_complex(TessellationSignature.of(10, 2))
    assert cx.meta["builder"] == "combinatorial"
    assert "geometric build failed" in cx.meta["notice"]


# -- permutations and combinatorial search ----------------------------------


def test_permutation_helpers():
    perm = [1, 2, 0, 4, 3]
    assert cycles(perm) == [[0, 1, 2], [3, 4]]
    assert [perm[i] for i in inverse(perm)] == list(range(5))
    assert not is_transitive(perm)
    assert is_transitive(perm, [0, 1, 3, 2, 4])


@pytest.mark.parametrize("p,g", SEARCHABLE)
def test_search_valid(p, g):
    sig = TessellationSignature.of(p, g)
    cx = combinatorial_search(sig)
    rep = validate_complex(cx, sig)
    assert rep.passed, rep.failures()
    nf = face_count(sig)
    assert _counts(cx) == (p * nf // 3, p * nf // 2, nf)
    assert cx.euler_characteristic == 2 - 2 * g
    assert not coloring_problems(cx, three_color(cx))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(8, 6), (10, 3), (10, 6), (14, 3)]), st.integers(0, 10**6))
def test_hypermap_faces_are_uniform(pn, seed):
    p, nf = pn
    maps = list(itertools.islice(iter_hypermaps(p, nf), 50))
    hm = random.Random(seed).choice(maps)
    m = p // 2
    for perm in (hm.beta, hm.gamma, hm.rho):
        assert all(len(c) == m for c in cycles(list(perm)))
    assert is_transitive(list(hm.beta), list(hm.gamma))


def test_enumeration_is_up_to_isomorphism():
    sig = TessellationSignature.of(8, 2)
    maps = enumerate_complexes(sig)
    assert len(maps) == 4
    for a, b in itertools.combinations(maps, 2):
        assert not maps_isomorphic(a, b)


def test_relabeling_is_isomorphic(bolza):
    rng = np.random.default_rng(3)
    perm = rng.permutation(bolza.n_vertices)
    eperm = rng.permutation(bolza.n_edges)
    shuffled = make_complex(
        bolza.p, bolza.genus,
        [[perm[v] for v in f] for f in bolza.faces][::-1],
        [[eperm[e] for e in f] for f in bolza.face_edges][::-1],
    )
    assert maps_isomorphic(shuffled, bolza)
    assert adjacency_isomorphic(shuffled, bolza)
    assert maps_isomorphic(relabel_canonically(bolza), bolza)


def test_builders_agree_on_bolza(bolza):
    combo = combinatorial_search(TessellationSignature.of(8, 2))
    assert _counts(combo) == _counts(bolza)
    found = [cx for cx in enumerate_complexes(TessellationSignature.of(8, 2)) if maps_isomorphic(cx, bolza)]
    assert len(found) == 1
    assert adjacency_isomorphic(found[0], bolza)


# -- errors ------------------------------------------------------------------


def test_too_few_faces():
    with pytest.raises(TooFewFacesError, match="fewer than 3 faces"):
        build_complex(TessellationSignature.of(18, 2))
    with pytest.raises(TooFewFacesError):
        build_complex(TessellationSignature.of(12, 2))


def test_odd_sides_not_colorable():
    with pytest.raises(NotThreeColorableError, match="not 3-colorable"):
        build_complex(TessellationSignature.of(7, 2))
    with pytest.raises(NotThreeColorableError, match="not 3-colorable"):
        build_complex(TessellationSignature.of(9, 2))


def test_search_limit():
    with pytest.raises(ValueError):
        combinatorial_search(TessellationSignature.of(8, 3))


def test_face_count_not_divisible_by_three():
    # {8,3} on genus 2 with 6 faces is fine; a {16,3} on genus 6 has 6 too. Use
    # a hand-made signature whose count is 4: {9,3} is odd, so take {12,3} on g=3
    sig = TessellationSignature.of(12, 3)
    assert face_count(sig) == 4
    with pytest.raises(NoComplexError):
        build_complex(sig)


# -- covers ------------------------------------------------------------------


@pytest.mark.parametrize("p,g", [(8, 3), (8, 5), (10, 4), (10, 5), (12, 7)])
def test_cover_valid(p, g):
    sig = TessellationSignature.of(p, g)
    cx = cover_search(sig)
    assert cx.meta["builder"] == "cover"
    rep = validate_complex(cx, sig)
    assert rep.passed, rep.failures()
    # with fewer face triples than vertices two vertices must share all three faces
    triples_available = (cx.n_faces // 3) ** 3
    if triples_available < cx.n_vertices:
        assert not has_distinct_vertex_faces(cx)
    if (p, g) in ((8, 3), (8, 5), (10, 5), (12, 7)):
        assert has_distinct_vertex_faces(cx)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_cyclic_cover_multiplies_counts(r, seed):
    base = next(iter_hypermaps(8, 6))
    lift = cyclic_cover(base, r, random.Random(seed))
    if lift is None:
        return
    assert lift.size == r * base.size
    cx, coloring = complex_from_permutations(8, list(lift.beta), list(lift.gamma))
    if not is_transitive(list(lift.beta), list(lift.gamma)):
        return
    assert cx.n_faces == 6 * r
    assert cx.euler_characteristic == -2 * r
    assert not coloring_problems(cx, coloring)


# -- coloring ----------------------------------------------------------------


def test_coloring_invariants(bolza, bolza_coloring):
    assert not coloring_problems(bolza, bolza_coloring)
    assert bolza_coloring.class_sizes() == (2, 2, 2)
    for v, fs in enumerate(bolza.vertex_faces()):
        assert sorted(bolza_coloring.face_color[f] for f in fs) == sorted(COLORS)
    for v, es in enumerate(bolza.vertex_edges()):
        assert sorted(bolza_coloring.edge_color[e] for e in es) == sorted(COLORS)


@pytest.mark.parametrize("perm", list(itertools.permutations(COLORS)))
def test_coloring_permutations_stay_valid(bolza, bolza_coloring, perm):
    mapped = bolza_coloring.permuted(dict(zip(COLORS, perm)))
    assert not coloring_problems(bolza, mapped)
    assert mapped.edge_color == coloring_from_faces(bolza, mapped.face_color).edge_color


def test_bad_coloring_reported(bolza, bolza_coloring):
    faces = list(bolza_coloring.face_color)
    f0, f1 = bolza.edge_faces[0]
    faces[f1] = faces[f0]
    with pytest.raises(ValueError):
        coloring_from_faces(bolza, faces)


def test_open_complex_not_colored(bolza):
    with pytest.raises(ValueError):
        three_color(_drop_face(bolza))


def _drop_face(cx: CellComplex) -> CellComplex:
    return make_complex(cx.p, cx.genus, cx.faces[1:], cx.face_edges[1:], n_vertices=cx.n_vertices)


# -- shrunk lattices ---------------------------------------------------------


@pytest.mark.parametrize("color", COLORS)
def test_shrunk_lattice_counts(bolza, bolza_coloring, color):
    sl = shrunk_lattice(bolza, bolza_coloring, color)
    assert len(sl.nodes) == 2
    assert len(sl.links) == 8
    # each qubit sits on exactly one link
    assert 2 * len(sl.links) == bolza.n_vertices
    assert sorted(v for link in sl.links for v in link.support) == list(range(16))
    assert sl.euler_characteristic == 2 - 2 * bolza.genus


@pytest.mark.parametrize("p,g", [(10, 3), (14, 3), (12, 4)])
def test_shrunk_lattice_euler(p, g):
    cx = build_complex(TessellationSignature.of(p, g))
    coloring = three_color(cx)
    for color in COLORS:
        sl = shrunk_lattice(cx, coloring, color)
        assert sl.euler_characteristic == 2 - 2 * g
        assert 2 * len(sl.links) == cx.n_vertices


# -- validation and serialization -------------------------------------------


def test_validation_flags_deleted_face(bolza):
    rep = validate_complex(_drop_face(bolza))
    assert not rep.passed
    failed = {c.name for c in rep.failures()}
    assert {"closed", "handshake", "euler", "face_count"} <= failed


def test_validation_flags_self_adjacency():
    cx = combinatorial_search(TessellationSignature.of(10, 2))
    rep = validate_complex(cx)
    assert rep.status("vertex_angles") == "skipped"
    assert rep.status("self_adjacency") in ("pass", "flagged")


def test_json_round_trip(bolza, bolza_coloring):
    data = json.loads(json.dumps(bolza.to_json(bolza_coloring)))
    back, coloring = CellComplex.from_json(data)
    assert back == bolza
    assert coloring == bolza_coloring


def test_json_round_trip_without_embedding():
    cx = combinatorial_search(TessellationSignature.of(10, 2))
    back, coloring = CellComplex.from_json(json.loads(json.dumps(cx.to_json())))
    assert back == cx and coloring is None


# -- drawing -----------------------------------------------------------------


def test_svg_renders(bolza, bolza_coloring):
    import xml.etree.ElementTree as ET

    svg = render_svg(bolza, bolza_coloring, fundamental_polygon(2), highlight=[0, 1])
    root = ET.fromstring(svg.split("\n", 1)[1])
    assert root.get("version") == "1.1"
    assert svg.count("#f5d200") >= 2


def test_schematic_without_embedding():
    cx = combinatorial_search(TessellationSignature.of(10, 2))
    svg = render_svg(cx, three_color(cx))
    assert svg == render_schematic(cx, three_color(cx))
    assert svg.count("<circle") == 3
