"""Cell complexes of closed surfaces, face colorings and shrunk lattices."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..hypgeo import TessellationSignature, angle_at, face_count

COLORS = ("R", "G", "B")


@dataclass(frozen=True)
class CellComplex:
    """Combinatorial surface map with optional disk-model coordinates.

    ``faces[f]`` is the cyclic vertex list of face ``f`` and ``face_edges[f][j]``
    the edge joining ``faces[f][j]`` to ``faces[f][j+1]``.  Parallel edges and
    faces meeting themselves are allowed; edges are therefore explicit.
    """

    p: int
    genus: int
    n_vertices: int
    faces: tuple[tuple[int, ...], ...]
    face_edges: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    edge_faces: tuple[tuple[int, ...], ...]
    vertex_coords: tuple[complex, ...] | None = None
    face_coords: tuple[tuple[complex, ...], ...] | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def q(self) -> int:
        return 3

    @property
    def signature(self) -> TessellationSignature:
        return TessellationSignature(p=self.p, q=3, g=self.genus)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def has_embedding(self) -> bool:
        return self.face_coords is not None

    def vertex_degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def vertex_faces(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for f, cyc in enumerate(self.faces):
            for v in cyc:
                out[v].append(f)
        return out

    def vertex_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e, (a, b) in enumerate(self.edges):
            out[a].append(e)
            out[b].append(e)
        return out

    def is_closed(self) -> bool:
        return all(len(fs) == 2 for fs in self.edge_faces)

    def self_adjacent_edges(self) -> list[int]:
        return [e for e, fs in enumerate(self.edge_faces) if len(fs) == 2 and fs[0] == fs[1]]

    def face_neighbors(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in range(self.n_faces)]
        for fs in self.edge_faces:
            if len(fs) == 2:
                nb[fs[0]].add(fs[1])
                nb[fs[1]].add(fs[0])
        return nb

    def is_connected(self) -> bool:
        if not self.faces:
            return False
        nb = self.face_neighbors()
        seen = {0}
        todo = deque([0])
        while todo:
            f = todo.popleft()
            for h in nb[f]:
                if h not in seen:
                    seen.add(h)
                    todo.append(h)
        return len(seen) == self.n_faces

    def face_adjacency_multigraph(self):
        import networkx as nx

        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n_faces))
        for e, fs in enumerate(self.edge_faces):
            if len(fs) == 2:
                graph.add_edge(fs[0], fs[1], key=e)
        return graph

    def corner_angles(self) -> list[float]:
        """Total interior angle at each vertex, summed over incident face corners."""
        if self.face_coords is None:
            raise ValueError("complex has no embedding")
        total = [0.0] * self.n_vertices
        for f, cyc in enumerate(self.faces):
            pts = self.face_coords[f]
            k = len(cyc)
            for j in range(k):
                total[cyc[j]] += angle_at(pts[j], pts[j - 1], pts[(j + 1) % k])
        return total

    # -- serialization ----------------------------------------------------

    def to_json(self, coloring: Coloring | None = None) -> dict:
        vertices = []
        for v in range(self.n_vertices):
            item: dict = {"id": v}
            if self.vertex_coords is not None:
                z = self.vertex_coords[v]
                item["x"], item["y"] = z.real, z.imag
            vertices.append(item)
        edges = [
            {"id": e, "v": list(self.edges[e]), "f": list(self.edge_faces[e])}
            for e in range(self.n_edges)
        ]
        faces = []
        for f in range(self.n_faces):
            item = {"id": f, "vertices": list(self.faces[f]), "edges": list(self.face_edges[f])}
            if coloring is not None:
                item["color"] = coloring.face_color[f]
            if self.face_coords is not None:
                item["coords"] = [[z.real, z.imag] for z in self.face_coords[f]]
            faces.append(item)
        meta = {k: v for k, v in self.meta.items() if isinstance(v, (str, int, float, bool))}
        return {
            "signature": {"p": self.p, "q": 3, "g": self.genus},
            "vertices": vertices,
            "edges": edges,
            "faces": faces,
            "meta": meta,
        }

    @classmethod
    def from_json(cls, data: dict) -> tuple[CellComplex, Coloring | None]:
        sig = data["signature"]
        verts = sorted(data["vertices"], key=lambda v: v["id"])
        edges = sorted(data["edges"], key=lambda e: e["id"])
        faces = sorted(data["faces"], key=lambda f: f["id"])
        vcoords = None
        if verts and all("x" in v for v in verts):
            vcoords = tuple(complex(v["x"], v["y"]) for v in verts)
        fcoords = None
        if faces and all("coords" in f for f in faces):
            fcoords = tuple(tuple(complex(x, y) for x, y in f["coords"]) for f in faces)
        cx = cls(
            p=sig["p"],
            genus=sig["g"],
            n_vertices=len(verts),
            faces=tuple(tuple(f["vertices"]) for f in faces),
            face_edges=tuple(tuple(f["edges"]) for f in faces),
            edges=tuple(tuple(e["v"]) for e in edges),
            edge_faces=tuple(tuple(e["f"]) for e in edges),
            vertex_coords=vcoords,
            face_coords=fcoords,
            meta=dict(data.get("meta", {})),
        )
        coloring = None
        if faces and all("color" in f for f in faces):
            coloring = coloring_from_faces(cx, [f["color"] for f in faces])
        return cx, coloring


def make_complex(
    p: int,
    genus: int,
    faces: Iterable[Iterable[int]],
    face_edges: Iterable[Iterable[int]],
    n_vertices: int | None = None,
    vertex_coords=None,
    face_coords=None,
    meta: dict | None = None,
) -> CellComplex:
    """Assemble a complex, deriving edge endpoints and incidences from the faces."""
    faces = tuple(tuple(int(v) for v in f) for f in faces)
    face_edges = tuple(tuple(int(e) for e in f) for f in face_edges)
    if n_vertices is None:
        n_vertices = 1 + max(v for f in faces for v in f)
    n_edges = 1 + max(e for f in face_edges for e in f)
    ends: list[tuple[int, int] | None] = [None] * n_edges
    inc: list[list[int]] = [[] for _ in range(n_edges)]
    for f, (cyc, es) in enumerate(zip(faces, face_edges)):
        if len(cyc) != len(es):
            raise ValueError(f"face {f}: {len(cyc)} vertices but {len(es)} edges")
        k = len(cyc)
        for j, e in enumerate(es):
            pair = tuple(sorted((cyc[j], cyc[(j + 1) % k])))
            if ends[e] is None:
                ends[e] = pair
            elif ends[e] != pair:
                raise ValueError(f"edge {e} has inconsistent endpoints {ends[e]} vs {pair}")
            inc[e].append(f)
    if any(x is None for x in ends):
        raise ValueError("edge ids must be contiguous")
    return CellComplex(
        p=p,
        genus=genus,
        n_vertices=n_vertices,
        faces=faces,
        face_edges=face_edges,
        edges=tuple(ends),
        edge_faces=tuple(tuple(x) for x in inc),
        vertex_coords=None if vertex_coords is None else tuple(complex(z) for z in vertex_coords),
        face_coords=None
        if face_coords is None
        else tuple(tuple(complex(z) for z in f) for f in face_coords),
        meta=dict(meta or {}),
    )


def relabel_canonically(cx: CellComplex) -> CellComplex:
    """Renumber vertices and edges by first appearance in face order."""
    vmap: dict[int, int] = {}
    emap: dict[int, int] = {}
    for cyc, es in zip(cx.faces, cx.face_edges):
        for v in cyc:
            vmap.setdefault(v, len(vmap))
        for e in es:
            emap.setdefault(e, len(emap))
    for v in range(cx.n_vertices):
        vmap.setdefault(v, len(vmap))
    vcoords = None
    if cx.vertex_coords is not None:
        inv = sorted(vmap, key=vmap.get)
        vcoords = [cx.vertex_coords[v] for v in inv]
    return make_complex(
        cx.p,
        cx.genus,
        [[vmap[v] for v in f] for f in cx.faces],
        [[emap[e] for e in f] for f in cx.face_edges],
        n_vertices=cx.n_vertices,
        vertex_coords=vcoords,
        face_coords=cx.face_coords,
        meta=cx.meta,
    )


# --------------------------------------------------------------------------
# Colorings
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Coloring:
    face_color: tuple[str, ...]
    edge_color: tuple[str, ...]

    def faces_of(self, color: str) -> list[int]:
        return [f for f, c in enumerate(self.face_color) if c == color]

    def edges_of(self, color: str) -> list[int]:
        return [e for e, c in enumerate(self.edge_color) if c == color]

    def class_sizes(self) -> tuple[int, int, int]:
        return tuple(self.face_color.count(c) for c in COLORS)

    def permuted(self, mapping: dict[str, str]) -> Coloring:
        return Coloring(
            tuple(mapping[c] for c in self.face_color),
            tuple(mapping[c] for c in self.edge_color),
        )


def induced_edge_colors(cx: CellComplex, face_color) -> tuple[str, ...]:
    out = []
    for e, fs in enumerate(cx.edge_faces):
        missing = [c for c in COLORS if c not in {face_color[f] for f in fs}]
        if len(missing) != 1:
            raise ValueError(f"edge {e} between faces {fs} has no unique edge color")
        out.append(missing[0])
    return tuple(out)


def coloring_from_faces(cx: CellComplex, face_color) -> Coloring:
    face_color = tuple(face_color)
    return Coloring(face_color, induced_edge_colors(cx, face_color))


def coloring_problems(cx: CellComplex, coloring: Coloring) -> list[str]:
    """Every violated coloring invariant, as human-readable strings."""
    problems = []
    if len(coloring.face_color) != cx.n_faces or len(coloring.edge_color) != cx.n_edges:
        return ["coloring size does not match complex"]
    for e, fs in enumerate(cx.edge_faces):
        cols = [coloring.face_color[f] for f in fs]
        if len(set(cols)) != len(cols):
            problems.append(f"edge {e}: adjacent faces {fs} share color {cols[0]}")
        if coloring.edge_color[e] in cols:
            problems.append(f"edge {e}: edge color {coloring.edge_color[e]} borders a same-colored face")
    for v, fs in enumerate(cx.vertex_faces()):
        if sorted(coloring.face_color[f] for f in fs) != sorted(COLORS):
            problems.append(f"vertex {v}: incident face colors are not one of each")
    for v, es in enumerate(cx.vertex_edges()):
        if sorted(coloring.edge_color[e] for e in es) != sorted(COLORS):
            problems.append(f"vertex {v}: incident edge colors are not one of each")
    return problems


# --------------------------------------------------------------------------
# Shrunk lattices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Link:
    a: int
    b: int
    support: tuple[int, int]
    edge: int


@dataclass(frozen=True)
class ShrunkLattice:
    """Per-color auxiliary graph: one node per face of ``color``.

    ``nodes`` and link endpoints are face indices of the parent complex; each
    link follows one edge of ``color`` and carries that edge's two vertices.
    """

    color: str
    nodes: tuple[int, ...]
    links: tuple[Link, ...]
    faces: tuple[int, ...]
    n_qubits: int = 0

    @property
    def euler_characteristic(self) -> int:
        return len(self.nodes) - len(self.links) + len(self.faces)


def shrunk_lattice(cx: CellComplex, coloring: Coloring, color: str) -> ShrunkLattice:
    if color not in COLORS:
        raise ValueError(f"unknown color {color!r}")
    problems = coloring_problems(cx, coloring)
    if problems:
        raise ValueError(f"invalid coloring: {problems[0]}")
    face_of = [0] * cx.n_vertices
    for v, fs in enumerate(cx.vertex_faces()):
        face_of[v] = next(f for f in fs if coloring.face_color[f] == color)
    links = []
    for e in coloring.edges_of(color):
        u, v = cx.edges[e]
        links.append(Link(face_of[u], face_of[v], (u, v), e))
    return ShrunkLattice(
        color=color,
        nodes=tuple(coloring.faces_of(color)),
        links=tuple(links),
        faces=tuple(f for f, c in enumerate(coloring.face_color) if c != color),
        n_qubits=cx.n_vertices,
    )


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # pass | fail | skipped | flagged
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def status(self, name: str) -> str:
        return next(c.status for c in self.checks if c.name == name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> list[dict]:
        return [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks]


def validate_complex(cx: CellComplex, sig: TessellationSignature | None = None) -> ValidationReport:
    checks = []

    def add(name, ok, detail=""):
        checks.append(Check(name, "pass" if ok else "fail", detail))

    V, E, F = cx.n_vertices, cx.n_edges, cx.n_faces
    bad_edges = [e for e, fs in enumerate(cx.edge_faces) if len(fs) != 2]
    add("closed", not bad_edges, f"{len(bad_edges)} edges without exactly two incidences")
    deg = cx.vertex_degrees()
    bad_v = [v for v, d in enumerate(deg) if d != 3]
    add("trivalent", not bad_v, f"{len(bad_v)} vertices of degree != 3")
    bad_f = [f for f, cyc in enumerate(cx.faces) if len(cyc) != cx.p]
    add("face_sides", not bad_f, f"{len(bad_f)} faces without {cx.p} sides")
    add("handshake", 2 * E == cx.p * F and 3 * V == 2 * E, f"V={V} E={E} F={F}")
    chi = V - E + F
    add("euler", chi == 2 - 2 * cx.genus, f"chi={chi}, expected {2 - 2 * cx.genus}")
    add("connected", cx.is_connected())
    sig = sig or TessellationSignature(p=cx.p, q=3, g=cx.genus)
    try:
        nf = face_count(sig)
        add("face_count", F == nf, f"F={F}, expected {nf}")
    except ValueError as exc:
        add("face_count", False, str(exc))
    selfadj = cx.self_adjacent_edges()
    checks.append(
        Check(
            "self_adjacency",
            "flagged" if selfadj else "pass",
            f"{len(selfadj)} edges with the same face on both sides",
        )
    )
    if cx.has_embedding:
        totals = cx.corner_angles()
        worst = max(abs(t - 2 * math.pi) for t in totals) if totals else 0.0
        add("vertex_angles", worst <= 1e-6, f"max |angle sum - 2pi| = {worst:.3g}")
    else:
        checks.append(Check("vertex_angles", "skipped", "no embedding"))
    return ValidationReport(tuple(checks))


def canonical_adjacency_form(cx: CellComplex) -> tuple:
    """Isomorphism-invariant certificate of the face-adjacency multigraph.

    Uses the networkx Weisfeiler-Lehman hash plus sorted degree data; equal
    certificates are confirmed by an explicit isomorphism test in
    :func:`adjacency_isomorphic`.
    """
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(cx.n_faces))
    mult: dict[tuple[int, int], int] = {}
    for fs in cx.edge_faces:
        if len(fs) == 2:
            key = tuple(sorted(fs))
            mult[key] = mult.get(key, 0) + 1
    for (a, b), m in mult.items():
        g.add_edge(a, b, m=m)
    return (
        cx.n_faces,
        tuple(sorted(mult.values())),
        nx.weisfeiler_lehman_graph_hash(g, edge_attr="m"),
    )


def adjacency_isomorphic(a: CellComplex, b: CellComplex) -> bool:
    import networkx as nx

    if canonical_adjacency_form(a) != canonical_adjacency_form(b):
        return False
    return nx.is_isomorphic(a.face_adjacency_multigraph(), b.face_adjacency_multigraph())


def face_vertex_matrix(cx: CellComplex) -> np.ndarray:
    """Face-by-vertex incidence counted mod 2."""
    h = np.zeros((cx.n_faces, cx.n_vertices), dtype=np.uint8)
    for f, cyc in enumerate(cx.faces):
        for v in cyc:
            h[f, v] ^= 1
    return h
