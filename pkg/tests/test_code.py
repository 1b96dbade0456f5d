import numpy as np
import pytest

from hypercolor import gf2
from hypercolor.code import (
    ColorCode,
    code_to_json,
    color_dependencies,
    from_alist,
    homology_class,
    link_incidence,
    logical_basis,
    logical_count,
    matching_string,
    nontrivial_string,
    string_operator,
    to_alist,
)
from hypercolor.errors import ColorDependencyError, ComplexCodeMismatchError, OpenStringError
from hypercolor.hypgeo import TessellationSignature
from hypercolor.tessellation import COLORS, shrunk_lattice
from hypercolor.tessellation.builder import build_complex
from hypercolor.code import code_for

CODES = [(8, 2), (10, 2), (10, 3), (14, 3), (8, 3), (12, 4), (18, 4)]


@pytest.fixture(scope="module", params=CODES, ids=lambda pg: f"p{pg[0]}g{pg[1]}")
def code(request):
    p, g = request.param
    return code_for(build_complex(TessellationSignature.of(p, g)))


def test_self_orthogonal(code):
    assert not ((code.H.astype(int) @ code.H.T.astype(int)) % 2).any()


def test_column_weight_three(code):
    assert (code.H.sum(axis=0) == 3).all()


def test_rank_and_k(code):
    assert code.rank == code.H.shape[0] - 2
    assert logical_count(code) == 4 * code.genus
    assert code.n == code.complex.n_vertices


def test_color_dependencies(code):
    rep = color_dependencies(code)
    assert rep.passed
    for c in COLORS:
        assert rep.row_sums[c].all()


def test_dependencies_negative_control(bolza_code):
    h = bolza_code.H.copy()
    # a face of one color gains a vertex: its class no longer multiplies to all-ones
    r = bolza_code.face_colors.index("R")
    v = int(np.nonzero(h[r] == 0)[0][0])
    h[r, v] = 1
    bad = ColorCode(h, bolza_code.face_colors, 2, 8)
    with pytest.raises(ColorDependencyError) as info:
        color_dependencies(bad)
    assert not info.value.report.passed
    assert info.value.report.offending_pairs()
    assert not color_dependencies(bad, strict=False).passed


def test_logical_count_mismatch(bolza_code):
    with pytest.raises(ComplexCodeMismatchError, match="complex/code inconsistency"):
        logical_count(bolza_code, genus=3)


def test_logical_basis(code):
    basis = logical_basis(code)
    assert basis.k == code.k
    np.testing.assert_array_equal(basis.pairing, np.eye(code.k, dtype=np.uint8))
    for ops in (basis.x_logicals, basis.z_logicals):
        assert not ((code.H.astype(int) @ ops.T.astype(int)) % 2).any()
        rs = gf2.RowSpace(code.H)
        assert all(not rs.contains(v) for v in ops)
    # independent modulo stabilizers
    assert gf2.rank(np.vstack([code.H, basis.x_logicals])) == code.rank + code.k


# -- strings -----------------------------------------------------------------


def _closed_strings(sl):
    return gf2.nullspace(link_incidence(sl))


@pytest.mark.parametrize("color", COLORS)
def test_closed_strings_commute(bolza, bolza_coloring, bolza_code, color):
    sl = shrunk_lattice(bolza, bolza_coloring, color)
    for t in _closed_strings(sl):
        v = string_operator(sl, list(np.nonzero(t)[0]))
        assert not ((bolza_code.H.astype(int) @ v) % 2).any()


@pytest.mark.parametrize("color", COLORS)
def test_string_logicals_span(bolza, bolza_coloring, bolza_code, color):
    # strings of one color span 2g logical classes
    sl = shrunk_lattice(bolza, bolza_coloring, color)
    ops = np.array([string_operator(sl, list(np.nonzero(t)[0])) for t in _closed_strings(sl)])
    gain = gf2.rank(np.vstack([bolza_code.H, ops])) - bolza_code.rank
    assert gain == 2 * bolza.genus


def test_trivial_string_in_rowspace(bolza, bolza_coloring, bolza_code):
    # the boundary of a non-red face, walked on the red lattice, is a stabilizer
    sl = shrunk_lattice(bolza, bolza_coloring, "R")
    f = next(f for f, c in enumerate(bolza_coloring.face_color) if c != "R")
    links = [i for i, link in enumerate(sl.links) if link.edge in bolza.face_edges[f]]
    v = string_operator(sl, links)
    assert gf2.in_rowspace(bolza_code.H, v)
    assert not homology_class(bolza, sl, links).any()


def test_open_string_rejected(bolza, bolza_coloring):
    sl = shrunk_lattice(bolza, bolza_coloring, "G")
    non_loop = next(i for i, link in enumerate(sl.links) if link.a != link.b)
    with pytest.raises(OpenStringError, match="open string"):
        string_operator(sl, [non_loop])


def test_empty_string_is_identity(bolza, bolza_coloring):
    sl = shrunk_lattice(bolza, bolza_coloring, "B")
    assert not string_operator(sl, []).any()


@pytest.mark.parametrize("source,target", [("R", "G"), ("G", "B"), ("B", "R")])
def test_three_color_relation(bolza, bolza_coloring, bolza_code, source, target):
    """Homologous strings of the three colors multiply to a stabilizer."""
    third = next(c for c in COLORS if c not in (source, target))
    s1 = shrunk_lattice(bolza, bolza_coloring, source)
    s2 = shrunk_lattice(bolza, bolza_coloring, target)
    s3 = shrunk_lattice(bolza, bolza_coloring, third)
    checked = 0
    for t in _closed_strings(s1):
        cyc = list(np.nonzero(t)[0])
        m2 = matching_string(bolza, s1, cyc, s2)
        m3 = matching_string(bolza, s1, cyc, s3)
        assert m2 is not None and m3 is not None
        prod = string_operator(s1, cyc) ^ string_operator(s2, m2) ^ string_operator(s3, m3)
        assert gf2.in_rowspace(bolza_code.H, prod)
        checked += 1
    assert checked == len(s1.links) - len(s1.nodes) + 1


def test_nontrivial_string(bolza_code):
    v = nontrivial_string(bolza_code, "G")
    assert v is not None
    assert v.sum() == 4
    assert not ((bolza_code.H.astype(int) @ v) % 2).any()
    assert not gf2.in_rowspace(bolza_code.H, v)


# -- exports -----------------------------------------------------------------


def test_alist_round_trip(code):
    text = to_alist(code.H)
    np.testing.assert_array_equal(from_alist(text), code.H)
    first = text.splitlines()[0].split()
    assert first == [str(code.H.shape[1]), str(code.H.shape[0])]


def test_code_json(bolza_code):
    data = code_to_json(bolza_code)
    assert data["n"] == 16 and data["rows"] == 6
    assert all(len(s) == 8 for s in data["supports"])
    assert data["builder"] == "geometric"


def test_shared_face_triple_gives_weight_two_logical(code):
    cx = code.complex
    seen = {}
    for v, fs in enumerate(cx.vertex_faces()):
        key = tuple(sorted(fs))
        if key in seen:
            e = np.zeros(code.n, np.uint8)
            e[[seen[key], v]] = 1
            assert not ((code.H.astype(int) @ e) % 2).any()
            assert not gf2.in_rowspace(code.H, e)
            return
        seen[key] = v
    # only possible when there are at least as many face triples as vertices
    assert (cx.n_faces // 3) ** 3 >= cx.n_vertices
