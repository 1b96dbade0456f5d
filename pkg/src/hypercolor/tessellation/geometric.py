"""Geometric construction: {p,3} patch in the disk, glued by side pairings."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import PairingIncompatibleError, PatchOverflowError
from ..hypgeo import (
    POINT_TOL,
    FundamentalPolygon,
    Mobius,
    TessellationSignature,
    circumdiameter,
    circumradius,
    disk_radius,
    distance_from_origin,
    face_count,
    fundamental_polygon,
    geodesic_midpoint,
    inradius,
)
from .complex import CellComplex, make_complex

SEEDS = ("face", "vertex", "edge")


@dataclass(frozen=True)
class PatchFace:
    center: complex
    vertices: tuple[complex, ...]


@dataclass(frozen=True)
class Patch:
    signature: TessellationSignature
    polygon: FundamentalPolygon
    faces: tuple[PatchFace, ...]
    seed: str
    rotation: float


class _Frame:
    """The seed face F0 (centred at 0) and the placement map of the tiling."""

    def __init__(self, p: int, seed: str, rotation: float):
        if seed not in SEEDS:
            raise ValueError(f"unknown seed {seed!r}; expected one of {SEEDS}")
        self.p = p
        rv = disk_radius(circumradius(p, 3))
        self.rm = disk_radius(inradius(p, 3))
        self.vertices = np.array([rv * cmath.exp(2j * math.pi * k / p) for k in range(p)])
        self.mid_angles = np.array([(2 * k + 1) * math.pi / p for k in range(p)])
        self.half_turns = [Mobius.half_turn(self.rm * cmath.exp(1j * t)) for t in self.mid_angles]
        # edge k of F0 lies on a circle orthogonal to the unit circle
        c = (1 + self.rm**2) / (2 * self.rm)
        self.edge_centres = c * np.exp(1j * self.mid_angles)
        self.edge_radius = c - self.rm
        if seed == "face":
            shift = Mobius.identity()
        elif seed == "vertex":
            shift = Mobius.from_origin(self.vertices[0]).inverse()
        else:
            shift = Mobius.from_origin(self.rm * cmath.exp(1j * self.mid_angles[0])).inverse()
        self.place = Mobius.rotation(rotation) @ shift
        self.unplace = self.place.inverse()

    def locate(self, z: complex, w: complex, max_steps: int = 100_000) -> tuple[complex, complex]:
        """Walk ``z`` into F0 by half-turns, carrying ``w`` along (standard frame)."""
        for _ in range(max_steps):
            depth = self.edge_radius - np.abs(z - self.edge_centres)
            k = int(np.argmax(depth))
            if depth[k] <= 1e-12:
                return z, w
            h = self.half_turns[k]
            z, w = complex(h(z)), complex(h(w))
        raise RuntimeError("point location in the tiling did not terminate")


def alignment_compatible(
    sig: TessellationSignature,
    polygon: FundamentalPolygon,
    seed: str = "face",
    rotation: float = 0.0,
    tol: float = 1e-7,
) -> bool:
    """True when every side pairing maps the placed {p,3} tiling to itself."""
    frame = _Frame(sig.p, seed, rotation)
    c0 = frame.place(0j)
    v0 = frame.place(frame.vertices[0])
    for t in polygon.pairings:
        z, w = frame.locate(complex(frame.unplace(t(c0))), complex(frame.unplace(t(v0))))
        if abs(z) > tol or np.min(np.abs(frame.vertices - w)) > tol:
            return False
    return True


class _PointIndex:
    """Spatial hash for approximate point lookup in the disk."""

    def __init__(self, tol: float):
        self.tol = tol
        self.cell = max(tol * 10, 1e-7)
        self.buckets: dict[tuple[int, int], list[int]] = {}
        self.points: list[complex] = []

    def _key(self, z: complex) -> tuple[int, int]:
        return (math.floor(z.real / self.cell), math.floor(z.imag / self.cell))

    def find(self, z: complex) -> int | None:
        kx, ky = self._key(z)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for i in self.buckets.get((kx + dx, ky + dy), ()):
                    if abs(self.points[i] - z) <= self.tol:
                        return i
        return None

    def add(self, z: complex) -> int:
        i = len(self.points)
        self.points.append(z)
        self.buckets.setdefault(self._key(z), []).append(i)
        return i


def build_universal_patch(
    sig: TessellationSignature,
    polygon: FundamentalPolygon | None = None,
    seed: str = "face",
    rotation: float = 0.0,
    budget: int | None = None,
) -> Patch:
    """Breadth-first {p,3} faces around 0 until the fundamental polygon is covered."""
    polygon = polygon or fundamental_polygon(sig.g)
    frame = _Frame(sig.p, seed, rotation)
    if budget is None:
        try:
            nf = face_count(sig)
        except ValueError:
            nf = 1
        budget = 10 * nf * (4 * sig.g + 1)
    reach = polygon.circumradius + circumdiameter(sig.p, 3)
    index = _PointIndex(1e-9)
    transforms: list[Mobius] = []

    def visit(m: Mobius):
        c = complex(m(0j))
        if distance_from_origin(c) > reach or index.find(c) is not None:
            return
        if len(transforms) >= budget:
            raise PatchOverflowError(
                f"patch overflow: more than {budget} faces within radius {reach:.4f}"
            )
        index.add(c)
        transforms.append(m)

    visit(frame.place)
    head = 0
    while head < len(transforms):
        m = transforms[head]
        head += 1
        for h in frame.half_turns:
            visit(m @ h)
    faces = tuple(
        PatchFace(center=complex(m(0j)), vertices=tuple(complex(z) for z in m(frame.vertices)))
        for m in transforms
    )
    return Patch(signature=sig, polygon=polygon, faces=faces, seed=seed, rotation=rotation)


def _words(gens: list[Mobius], max_len: int) -> list[Mobius]:
    out = [Mobius.identity()]
    for length in range(1, max_len + 1):
        for combo in itertools.product(gens, repeat=length):
            m = combo[0]
            for g in combo[1:]:
                m = m @ g
            out.append(m)
    return out


class _Quotienter:
    """Union-find of disk points under a finitely generated group action."""

    def __init__(self, pairings: list[Mobius], max_word: int, tol: float):
        self.gens = [t for t in pairings if abs(t.b) > 1e-12 or abs(t.a - t.d) > 1e-12]
        self.gens += [t.inverse() for t in self.gens]
        self.words = _words(self.gens, max_word)[1:]
        self.tol = tol

    def reduce(self, z: complex) -> complex:
        """Greedy Dirichlet reduction towards the origin."""
        for _ in range(10_000):
            d0 = abs(z)
            best, best_d = None, d0
            for g in self.gens:
                w = complex(g(z))
                if abs(w) < best_d - 1e-12:
                    best, best_d = w, abs(w)
            if best is None:
                return z
            z = best
        raise RuntimeError("reduction did not terminate")

    def classes(self, points: list[complex]) -> tuple[list[int], list[complex]]:
        """Label each point by its orbit; returns labels and reduced representatives."""
        index = _PointIndex(self.tol)
        reps: list[complex] = []
        slot = []
        for z in points:
            r = self.reduce(z)
            i = index.find(r)
            if i is None:
                i = index.add(r)
                reps.append(r)
            slot.append(i)
        parent = list(range(len(reps)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, r in enumerate(reps):
            for w in self.words:
                j = index.find(complex(w(r)))
                if j is not None:
                    parent[find(i)] = find(j)
        roots: dict[int, int] = {}
        labels = []
        for i in slot:
            labels.append(roots.setdefault(find(i), len(roots)))
        rep_of = [None] * len(roots)
        for i, r in enumerate(reps):
            lab = roots.get(find(i))
            if lab is not None and (rep_of[lab] is None or _order_key(r) < _order_key(rep_of[lab])):
                rep_of[lab] = r
        return labels, rep_of


def _order_key(z: complex) -> tuple[float, float]:
    ang = cmath.phase(z) % (2 * math.pi) if abs(z) > 1e-12 else 0.0
    return (round(ang, 9) % round(2 * math.pi, 9), round(abs(z), 9))


def quotient_by_pairings(
    patch: Patch,
    pairings: list[Mobius] | None = None,
    tol: float = POINT_TOL,
    max_word: int = 2,
    expected_faces: int | None = None,
) -> CellComplex:
    """Identify patch cells related by the pairing group; build a closed complex.

    Cells are matched after greedy reduction towards the origin plus words of
    length <= ``max_word``.  Any failure to close up raises
    :class:`PairingIncompatibleError` with diagnostics instead of forcing a gluing.
    """
    sig = patch.signature
    pairings = list(patch.polygon.pairings if pairings is None else pairings)
    q = _Quotienter(pairings, max_word, tol)
    centers = [f.center for f in patch.faces]
    reduced = [q.reduce(c) for c in centers]
    # a face belongs to the quotient when its center is already reduced
    chosen = [i for i, (c, r) in enumerate(zip(centers, reduced)) if abs(c - r) <= tol]
    face_labels, face_reps = q.classes([centers[i] for i in chosen])
    rep_face: dict[int, int] = {}
    for i, lab in zip(chosen, face_labels):
        cur = rep_face.get(lab)
        if cur is None or _order_key(centers[i]) < _order_key(centers[cur]):
            rep_face[lab] = i
    order = sorted(rep_face.values(), key=lambda i: _order_key(centers[i]))
    diagnostics = {"patch_faces": len(patch.faces), "face_orbits": len(order)}
    if expected_faces is not None and len(order) != expected_faces:
        raise PairingIncompatibleError(
            f"pairing-incompatible tessellation: {len(order)} face orbits, expected {expected_faces}",
            diagnostics,
        )
    p = sig.p
    vpts = [z for i in order for z in patch.faces[i].vertices]
    epts = []
    for i in order:
        vs = patch.faces[i].vertices
        epts += [geodesic_midpoint(vs[j], vs[(j + 1) % p]) for j in range(p)]
    vlab, vreps = q.classes(vpts)
    elab, _ = q.classes(epts)
    faces = [vlab[k * p : (k + 1) * p] for k in range(len(order))]
    fedges = [elab[k * p : (k + 1) * p] for k in range(len(order))]
    try:
        cx = make_complex(
            p,
            sig.g,
            faces,
            fedges,
            n_vertices=len(vreps),
            vertex_coords=vreps,
            face_coords=[patch.faces[i].vertices for i in order],
            meta={"builder": "geometric", "seed": patch.seed, "rotation": patch.rotation},
        )
    except ValueError as exc:
        raise PairingIncompatibleError(
            f"pairing-incompatible tessellation: {exc}", diagnostics
        ) from exc
    open_edges = sum(1 for fs in cx.edge_faces if len(fs) != 2)
    bad_deg = sum(1 for d in cx.vertex_degrees() if d != 3)
    diagnostics.update(
        vertices=cx.n_vertices, edges=cx.n_edges, open_edges=open_edges, bad_vertices=bad_deg
    )
    if open_edges:
        raise PairingIncompatibleError(
            f"pairing-incompatible tessellation: {open_edges} boundary edges remain "
            "(complex not closed)",
            diagnostics,
        )
    if bad_deg:
        raise PairingIncompatibleError(
            f"pairing-incompatible tessellation: {bad_deg} vertex orbits of degree != 3",
            diagnostics,
        )
    return cx


def patch_from_complex(cx: CellComplex, polygon: FundamentalPolygon | None = None) -> Patch:
    """Re-wrap an embedded complex's representative faces as a patch."""
    if cx.face_coords is None:
        raise ValueError("complex has no embedding")
    faces = tuple(
        PatchFace(center=polygon_center(pts), vertices=tuple(pts)) for pts in cx.face_coords
    )
    return Patch(
        signature=cx.signature,
        polygon=polygon or fundamental_polygon(cx.genus),
        faces=faces,
        seed=str(cx.meta.get("seed", "face")),
        rotation=float(cx.meta.get("rotation", 0.0)),
    )


def polygon_center(pts) -> complex:
    """Hyperboloid barycenter of the vertices; the exact centre of a regular polygon."""
    z = np.asarray(pts, dtype=complex)
    s = 1 - np.abs(z) ** 2
    t, x, y = ((1 + np.abs(z) ** 2) / s).sum(), (2 * z.real / s).sum(), (2 * z.imag / s).sum()
    norm = math.sqrt(t * t - x * x - y * y)
    t, x, y = t / norm, x / norm, y / norm
    return complex(x, y) / (1 + t)


def build_geometric(
    sig: TessellationSignature,
    seeds: tuple[str, ...] = ("face", "vertex", "edge"),
    max_rotations: int | None = None,
    tol: float = POINT_TOL,
) -> CellComplex:
    """Try seed placements and rotations until the pairings preserve the tiling.

    Rotations are ``k * pi / (2 p 4g)``; by default every k in one symmetry
    period of the seed is tried.
    """
    polygon = fundamental_polygon(sig.g)
    nf = face_count(sig)
    step = math.pi / (2 * sig.p * 4 * sig.g)
    tried, failures = 0, []
    for seed in seeds:
        period = {"face": 2 * math.pi / sig.p, "vertex": 2 * math.pi / 3, "edge": math.pi}[seed]
        n_rot = int(round(period / step))
        if max_rotations is not None:
            n_rot = min(n_rot, max_rotations)
        for k in range(n_rot):
            tried += 1
            rotation = k * step
            if not alignment_compatible(sig, polygon, seed, rotation):
                continue
            try:
                patch = build_universal_patch(sig, polygon, seed, rotation)
                return quotient_by_pairings(patch, tol=tol, expected_faces=nf)
            except (PairingIncompatibleError, PatchOverflowError) as exc:
                failures.append({"seed": seed, "k": k, "error": str(exc)})
    raise PairingIncompatibleError(
        f"pairing-incompatible tessellation: no alignment of {{{sig.p},3}} with the "
        f"{{{4 * sig.g},{4 * sig.g}}} polygon found ({tried} placements tried)",
        {"placements_tried": tried, "compatible_failures": failures},
    )
