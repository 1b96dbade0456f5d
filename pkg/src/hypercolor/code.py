"""CSS color codes from face-colored trivalent complexes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import ColorDependencyError, ComplexCodeMismatchError, OpenStringError
from .tessellation.complex import (
    COLORS,
    CellComplex,
    Coloring,
    Link,
    ShrunkLattice,
    coloring_problems,
    face_vertex_matrix,
    shrunk_lattice,
)


@dataclass(frozen=True)
class ColorCode:
    """Qubits on vertices; one X and one Z plaquette per face, sharing ``H``."""

    H: np.ndarray
    face_colors: tuple[str, ...]
    genus: int
    p: int
    complex: CellComplex | None = field(default=None, compare=False, repr=False)
    coloring: Coloring | None = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def rank(self) -> int:
        return gf2.rank(self.H)

    @property
    def k(self) -> int:
        return self.n - 2 * self.rank

    def rows_of(self, color: str) -> np.ndarray:
        idx = [f for f, c in enumerate(self.face_colors) if c == color]
        return self.H[idx]


def plaquette_matrix(cx: CellComplex) -> np.ndarray:
    """Face-by-vertex incidence mod 2 (a vertex met twice by one face drops out)."""
    return face_vertex_matrix(cx)


def color_code(cx: CellComplex, coloring: Coloring) -> ColorCode:
    problems = coloring_problems(cx, coloring)
    if problems:
        raise ValueError(f"invalid coloring: {problems[0]}")
    return ColorCode(
        H=plaquette_matrix(cx),
        face_colors=coloring.face_color,
        genus=cx.genus,
        p=cx.p,
        complex=cx,
        coloring=coloring,
    )


def logical_count(code: ColorCode, genus: int | None = None) -> int:
    """k = n - 2 rank(H), cross-checked against 4g from the surface topology."""
    genus = code.genus if genus is None else genus
    k = code.k
    if k != 4 * genus:
        raise ComplexCodeMismatchError(
            f"complex/code inconsistency: n - 2 rank(H) = {k} but a genus-{genus} "
            f"surface gives {4 * genus} logical qubits"
        )
    return k


@dataclass(frozen=True)
class DependencyReport:
    row_sums: dict[str, np.ndarray]
    equal_pairs: dict[tuple[str, str], bool]
    all_ones: dict[str, bool]
    rank: int
    n_faces: int

    @property
    def rank_deficit(self) -> int:
        return self.n_faces - self.rank

    @property
    def passed(self) -> bool:
        return all(self.equal_pairs.values()) and all(self.all_ones.values()) and self.rank_deficit == 2

    def offending_pairs(self) -> list[tuple[str, str]]:
        return [pair for pair, ok in self.equal_pairs.items() if not ok]


def color_dependencies(code: ColorCode, strict: bool = True) -> DependencyReport:
    """Each color class of plaquettes multiplies to the all-ones operator.

    Those three equal products are the only relations: rank(H) = |F| - 2.
    With ``strict`` a failure raises, carrying the report.
    """
    sums = {c: code.rows_of(c).sum(axis=0, dtype=np.uint8) & 1 for c in COLORS}
    pairs = {
        (a, b): bool(np.array_equal(sums[a], sums[b]))
        for i, a in enumerate(COLORS)
        for b in COLORS[i + 1 :]
    }
    ones = {c: bool(sums[c].all()) for c in COLORS}
    report = DependencyReport(sums, pairs, ones, code.rank, code.H.shape[0])
    if strict and not report.passed:
        bad = report.offending_pairs()
        if bad:
            msg = f"color classes {bad[0][0]} and {bad[0][1]} have different plaquette products"
        elif not all(ones.values()):
            msg = "a color class does not multiply to the all-ones operator"
        else:
            msg = f"rank deficit {report.rank_deficit}, expected exactly 2"
        raise ColorDependencyError(msg, report)
    return report


# --------------------------------------------------------------------------
# Logical operators
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LogicalSet:
    x_logicals: np.ndarray
    z_logicals: np.ndarray

    @property
    def k(self) -> int:
        return self.x_logicals.shape[0]

    @property
    def pairing(self) -> np.ndarray:
        return (self.x_logicals.astype(np.int64) @ self.z_logicals.T.astype(np.int64) % 2).astype(np.uint8)


def logical_basis(code: ColorCode) -> LogicalSet:
    """Symplectic basis of ker(H) / rowspace(H), paired by odd overlap.

    X and Z candidates both start as the same complement basis; each step takes
    the first remaining X candidate, pairs it with the first Z candidate of odd
    overlap, and clears that overlap from the rest.
    """
    kernel = gf2.nullspace(code.H)
    reps = gf2.complement_basis(code.H, kernel)
    k = code.k
    if reps.shape[0] != k:
        raise ComplexCodeMismatchError(
            f"complex/code inconsistency: {reps.shape[0]} logical classes, expected {k}"
        )
    xs = [r.copy() for r in reps]
    zs = [r.copy() for r in reps]
    out_x, out_z = [], []
    while xs:
        a = xs.pop(0)
        hit = next((j for j, b in enumerate(zs) if int(a @ b) % 2), None)
        if hit is None:
            raise ComplexCodeMismatchError("logical pairing is degenerate")
        b = zs.pop(hit)
        xs = [x ^ a if int(x @ b) % 2 else x for x in xs]
        zs = [z ^ b if int(a @ z) % 2 else z for z in zs]
        out_x.append(a)
        out_z.append(b)
    n = code.n
    return LogicalSet(
        np.array(out_x, dtype=np.uint8).reshape(-1, n),
        np.array(out_z, dtype=np.uint8).reshape(-1, n),
    )


# --------------------------------------------------------------------------
# Strings on shrunk lattices
# --------------------------------------------------------------------------


def _as_links(sl: ShrunkLattice, cycle) -> list[Link]:
    return [sl.links[c] if isinstance(c, (int, np.integer)) else c for c in cycle]


def string_operator(sl: ShrunkLattice, cycle) -> np.ndarray:
    """Qubit support of a closed walk of links (links or link indices)."""
    links = _as_links(sl, cycle)
    parity: dict[int, int] = {}
    for link in links:
        parity[link.a] = parity.get(link.a, 0) ^ 1
        parity[link.b] = parity.get(link.b, 0) ^ 1
    odd = sorted(node for node, par in parity.items() if par)
    if odd:
        raise OpenStringError(f"open string: nodes {odd} are entered an odd number of times")
    v = np.zeros(sl.n_qubits, dtype=np.uint8)
    for link in links:
        v[list(link.support)] ^= 1
    return v


def link_incidence(sl: ShrunkLattice) -> np.ndarray:
    """Node-by-link incidence mod 2 (closed strings are its kernel)."""
    pos = {f: i for i, f in enumerate(sl.nodes)}
    m = np.zeros((len(sl.nodes), len(sl.links)), dtype=np.uint8)
    for j, link in enumerate(sl.links):
        m[pos[link.a], j] ^= 1
        m[pos[link.b], j] ^= 1
    return m


def _face_path(cx: CellComplex, f: int, u: int, v: int) -> list[int]:
    """Edges along face f from vertex u forward to vertex v."""
    cyc = cx.faces[f]
    k = len(cyc)
    i = cyc.index(u)
    out = []
    while cyc[i % k] != v:
        out.append(cx.face_edges[f][i % k])
        i += 1
    return out


def link_chains(cx: CellComplex, sl: ShrunkLattice) -> np.ndarray:
    """Edge chain of each link, from a base vertex of one face to that of the other.

    The chain of a closed string is then a cycle of the complex's graph, whose
    homology class (modulo face boundaries) is the string's class.
    """
    face_of = {}
    for v, fs in enumerate(cx.vertex_faces()):
        for f in fs:
            if f in sl.nodes:
                face_of[v] = f
    m = np.zeros((len(sl.links), cx.n_edges), dtype=np.uint8)
    for j, link in enumerate(sl.links):
        u, w = link.support
        fu, fw = face_of[u], face_of[w]
        m[j, link.edge] ^= 1
        for e in _face_path(cx, fu, cx.faces[fu][0], u):
            m[j, e] ^= 1
        for e in _face_path(cx, fw, w, cx.faces[fw][0]):
            m[j, e] ^= 1
    return m


def face_boundaries(cx: CellComplex) -> np.ndarray:
    m = np.zeros((cx.n_faces, cx.n_edges), dtype=np.uint8)
    for f, es in enumerate(cx.face_edges):
        for e in es:
            m[f, e] ^= 1
    return m


def homology_class(cx: CellComplex, sl: ShrunkLattice, cycle) -> np.ndarray:
    """Reduced edge-cycle representative of a closed string's homology class."""
    links = _as_links(sl, cycle)
    string_operator(sl, links)
    chains = link_chains(cx, sl)
    idx = [sl.links.index(link) for link in links]
    chain = np.bitwise_xor.reduce(chains[idx], axis=0) if idx else np.zeros(cx.n_edges, np.uint8)
    return gf2.RowSpace(face_boundaries(cx)).reduce(chain)


def matching_string(cx: CellComplex, source: ShrunkLattice, cycle, target: ShrunkLattice) -> list[int] | None:
    """Link indices of a closed string on ``target`` homologous to ``cycle`` on ``source``.

    Solves incidence(target) t = 0 and chains(target)^T t + boundaries^T y = chain(cycle).
    """
    want = homology_class(cx, source, cycle)
    inc = link_incidence(target)
    chains = link_chains(cx, target)
    bnd = face_boundaries(cx)
    n_links, n_faces = chains.shape[0], bnd.shape[0]
    top = np.hstack([chains.T, bnd.T])
    low = np.hstack([inc, np.zeros((inc.shape[0], n_faces), np.uint8)])
    rhs = np.concatenate([want, np.zeros(inc.shape[0], np.uint8)])
    sol = gf2.solve(np.vstack([top, low]), rhs)
    if sol is None:
        return None
    return [j for j in range(n_links) if sol[j]]


def nontrivial_string(code: ColorCode, color: str = "G") -> np.ndarray | None:
    """Lowest-weight logical string made of one looped link or two parallel links."""
    if code.complex is None or code.coloring is None:
        raise ValueError("code carries no complex")
    sl = shrunk_lattice(code.complex, code.coloring, color)
    rs = gf2.RowSpace(code.H)
    cycles = [[i] for i, link in enumerate(sl.links) if link.a == link.b]
    for i in range(len(sl.links)):
        for j in range(i + 1, len(sl.links)):
            if {sl.links[i].a, sl.links[i].b} == {sl.links[j].a, sl.links[j].b}:
                cycles.append([i, j])
    best = None
    for cyc in cycles:
        v = string_operator(sl, cyc)
        if v.any() and not rs.contains(v) and (best is None or v.sum() < best.sum()):
            best = v
    return best


# --------------------------------------------------------------------------
# Exports
# --------------------------------------------------------------------------


def to_alist(h: np.ndarray) -> str:
    """Sparse parity-check text: sizes, max weights, weights, then 1-based index lists."""
    h = gf2.as_gf2(h)
    m, n = h.shape
    cols = [np.nonzero(h[:, j])[0] + 1 for j in range(n)]
    rows = [np.nonzero(h[i])[0] + 1 for i in range(m)]
    cmax = max((len(c) for c in cols), default=0)
    rmax = max((len(r) for r in rows), default=0)

    def padded(idx, width):
        vals = [int(x) for x in idx] + [0] * (width - len(idx))
        return " ".join(str(x) for x in vals)

    lines = [f"{n} {m}", f"{cmax} {rmax}"]
    lines.append(" ".join(str(len(c)) for c in cols))
    lines.append(" ".join(str(len(r)) for r in rows))
    lines += [padded(c, cmax) for c in cols]
    lines += [padded(r, rmax) for r in rows]
    return "\n".join(lines) + "\n"


def from_alist(text: str) -> np.ndarray:
    nums = [list(map(int, line.split())) for line in text.strip().split("\n")]
    n, m = nums[0]
    h = np.zeros((m, n), dtype=np.uint8)
    for j, line in enumerate(nums[4 : 4 + n]):
        for i in line:
            if i:
                h[i - 1, j] = 1
    return h


def code_to_json(code: ColorCode) -> dict:
    meta = dict(code.complex.meta) if code.complex is not None else {}
    return {
        "n": code.n,
        "rows": int(code.H.shape[0]),
        "supports": [np.nonzero(r)[0].tolist() for r in code.H],
        "colors": list(code.face_colors),
        "qubit_order": "vertex index of the exported complex",
        "builder": meta.get("builder"),
    }


def code_for(cx: CellComplex, coloring: Coloring | None = None) -> ColorCode:
    """Color (if needed) and wrap a complex as a code."""
    from .tessellation.coloring import three_color

    return color_code(cx, coloring or three_color(cx))


__all__ = [
    "ColorCode",
    "DependencyReport",
    "LogicalSet",
    "code_for",
    "code_to_json",
    "color_code",
    "color_dependencies",
    "from_alist",
    "homology_class",
    "logical_basis",
    "logical_count",
    "matching_string",
    "plaquette_matrix",
    "shrunk_lattice",
    "string_operator",
    "to_alist",
]
