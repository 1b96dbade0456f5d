"""Combinatorial construction of 3-colored trivalent maps.

A face-3-colored trivalent map on an orientable surface is encoded by two
permutations ``beta`` and ``gamma`` of ``W`` points.  Point ``i`` is a
"positive" vertex; it is joined by its R edge to the "negative" vertex
``W + i``.  With ``rho = gamma^-1 beta``:

* the R faces are the cycles of ``rho``;
* the G faces are the cycles of ``gamma^-1``;
* the B faces are the cycles of ``beta^-1``.

A {p,3} map needs every cycle of all three permutations to have length p/2,
and connectedness is transitivity of the group they generate.  Every
orientable face-3-colored trivalent map arises this way (positive and negative
vertices are the two orientation classes of the RGB corner order), so searching
pairs of permutations up to relabeling covers all gluings of the n_f p-gons
that close up into such a map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from ..errors import NoComplexError, NotThreeColorableError, TooFewFacesError
from ..hypgeo import TessellationSignature, face_count
from .complex import CellComplex, Coloring, coloring_from_faces, make_complex

DEFAULT_MAX_FACES = 8


def cycles(perm: list[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        out.append(cyc)
    return out


def inverse(perm: list[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, x in enumerate(perm):
        inv[x] = i
    return inv


def is_transitive(*perms: list[int]) -> bool:
    n = len(perms[0])
    if n == 0:
        return False
    seen = {0}
    todo = [0]
    invs = [inverse(p) for p in perms]
    while todo:
        i = todo.pop()
        for p in (*perms, *invs):
            j = p[i]
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return len(seen) == n


@dataclass(frozen=True)
class Hypermap:
    """The permutation pair describing a colored trivalent map."""

    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.beta)

    @property
    def rho(self) -> list[int]:
        ginv = inverse(list(self.gamma))
        return [ginv[b] for b in self.beta]


def complex_from_permutations(
    p: int, beta, gamma, meta: dict | None = None
) -> tuple[CellComplex, Coloring]:
    """Build the colored complex of a permutation pair (faces ordered R, G, B)."""
    beta, gamma = list(beta), list(gamma)
    w = len(beta)
    m = p // 2
    binv, ginv = inverse(beta), inverse(gamma)
    rho = [ginv[b] for b in beta]
    for name, perm in (("beta", beta), ("gamma", gamma), ("rho", rho)):
        bad = [c for c in cycles(perm) if len(c) != m]
        if bad:
            raise ValueError(f"{name} has a cycle of length {len(bad[0])}, expected {m}")
    if not is_transitive(beta, gamma):
        raise ValueError("permutations do not generate a transitive group")

    faces, face_edges, colors = [], [], []
    for color, step, nxt_vertex, first_edge, second_edge in (
        ("R", rho, lambda j: w + beta[j], lambda j: w + j, lambda j: 2 * w + rho[j]),
        ("G", ginv, lambda j: w + j, lambda j: j, lambda j: 2 * w + ginv[j]),
        ("B", binv, lambda j: w + j, lambda j: j, lambda j: w + binv[j]),
    ):
        for cyc in cycles(step):
            vs, es = [], []
            for j in cyc:
                vs += [j, nxt_vertex(j)]
                es += [first_edge(j), second_edge(j)]
            faces.append(vs)
            face_edges.append(es)
            colors.append(color)
    n_faces = len(faces)
    chi = 2 * w - 3 * w + n_faces
    if chi % 2:
        raise ValueError(f"odd Euler characteristic {chi}")
    genus = (2 - chi) // 2
    cx = make_complex(p, genus, faces, face_edges, n_vertices=2 * w, meta=meta)
    return cx, coloring_from_faces(cx, colors)


# --------------------------------------------------------------------------
# Exhaustive search
# --------------------------------------------------------------------------


def _search(m: int, t: int) -> Iterator[list[int]]:
    """Yield every beta (up to conjugation by the centralizer of gamma).

    gamma is fixed as ``t`` consecutive blocks of ``m``-cycles.  beta is built
    cycle by cycle; partial cycles of beta and of rho = gamma^-1 beta are
    pruned as soon as one closes early or grows too long.  An image landing in
    a block nobody has touched yet is only tried at that block's first point
    in the first such block, since relabeling untouched blocks (and rotating
    inside them) commutes with gamma.
    """
    w = m * t
    ginv = [(i // m) * m + (i % m - 1) % m for i in range(w)]
    beta = [-1] * w
    used = [False] * w
    rho = [-1] * w
    rho_inv = [-1] * w
    touched = [True] + [False] * (t - 1)

    def rho_ok(x: int, y: int) -> bool:
        # adding x -> y to rho: closed cycles must have length m, open paths <= m
        length = 1
        j = y
        while j != x and rho[j] != -1:
            j = rho[j]
            length += 1
            if length > m:
                return False
        if j == x:
            return length == m
        k = x
        while rho_inv[k] != -1:
            k = rho_inv[k]
            length += 1
            if length > m:
                return False
        return length + 1 <= m

    def candidates(x: int, start: int, length: int) -> list[int]:
        if length == m:
            return [start] if not used[start] else []
        out = []
        fresh_done = False
        for y in range(w):
            if used[y] or y == start:
                continue
            blk = y // m
            if not touched[blk]:
                if fresh_done or y % m:
                    continue
                fresh_done = True
            out.append(y)
        return out

    def grow(x: int, start: int, length: int) -> Iterator[list[int]]:
        for y in candidates(x, start, length):
            r = ginv[y]
            if not rho_ok(x, r):
                continue
            blk = y // m
            was = touched[blk]
            beta[x], used[y], rho[x], rho_inv[r], touched[blk] = y, True, r, x, True
            if y == start:
                yield from next_cycle()
            else:
                yield from grow(y, start, length + 1)
            beta[x], used[y], rho[x], rho_inv[r], touched[blk] = -1, False, -1, -1, was

    def next_cycle() -> Iterator[list[int]]:
        start = next((i for i in range(w) if beta[i] == -1), None)
        if start is None:
            yield list(beta)
            return
        blk = start // m
        if not touched[blk]:
            # touched blocks form a prefix and are fully assigned, so they are
            # closed under beta and gamma: the result could never be connected
            return
        yield from grow(start, start, 1)

    yield from next_cycle()


def _gamma(m: int, t: int) -> list[int]:
    return [(i // m) * m + (i % m + 1) % m for i in range(m * t)]


def _check_signature(sig: TessellationSignature) -> int:
    nf = face_count(sig)
    label = f"(p,g) = ({sig.p},{sig.g})"
    if nf < 3:
        raise TooFewFacesError(
            f"no trivalent 3-colorable complex for {label}: fewer than 3 faces "
            f"(n_f = {nf}); a face would be adjacent to itself or two faces would share a color"
        )
    if sig.p % 2:
        raise NotThreeColorableError(
            f"not 3-colorable: no trivalent 3-colorable complex for {label}; "
            f"faces with an odd number of sides ({sig.p}) cannot alternate two colors around them"
        )
    if nf % 3:
        raise NoComplexError(
            f"no trivalent 3-colorable complex for {label}: n_f = {nf} is not divisible by 3, "
            "but every vertex meets one face of each color so the color classes are equal"
        )
    return nf


def iter_hypermaps(p: int, n_faces: int) -> Iterator[Hypermap]:
    """All connected permutation pairs for n_faces p-gons, deterministic order."""
    m, t = p // 2, n_faces // 3
    gamma = tuple(_gamma(m, t))
    for beta in _search(m, t):
        if is_transitive(beta, list(gamma)):
            yield Hypermap(tuple(beta), gamma)


def combinatorial_search(
    sig: TessellationSignature, max_faces: int = DEFAULT_MAX_FACES
) -> CellComplex:
    """First valid colored complex for the signature in search order."""
    nf = _check_signature(sig)
    if nf > max_faces:
        raise ValueError(f"n_f = {nf} exceeds the exhaustive search limit {max_faces}")
    for hm in iter_hypermaps(sig.p, nf):
        cx, _ = complex_from_permutations(
            sig.p, hm.beta, hm.gamma, meta={"builder": "combinatorial"}
        )
        if cx.genus == sig.g:
            return cx
    raise NoComplexError(f"no trivalent 3-colorable complex for (p,g) = ({sig.p},{sig.g})")


def enumerate_complexes(
    sig: TessellationSignature, max_faces: int = DEFAULT_MAX_FACES
) -> list[CellComplex]:
    """Every pairwise non-isomorphic colorable complex for the signature."""
    nf = _check_signature(sig)
    if nf > max_faces:
        raise ValueError(f"n_f = {nf} exceeds the exhaustive search limit {max_faces}")
    found: dict[tuple, CellComplex] = {}
    for hm in iter_hypermaps(sig.p, nf):
        cx, _ = complex_from_permutations(
            sig.p, hm.beta, hm.gamma, meta={"builder": "combinatorial"}
        )
        found.setdefault(canonical_map_form(cx), cx)
    return list(found.values())


# --------------------------------------------------------------------------
# Map isomorphism via flags
# --------------------------------------------------------------------------


def _flag_involutions(cx: CellComplex) -> tuple[list[int], list[int], list[int]]:
    """Flag (f, j, s): face f, its edge j, at vertex faces[f][j + s]."""
    offset = [0]
    for cyc in cx.faces:
        offset.append(offset[-1] + 2 * len(cyc))

    def fid(f, j, s):
        k = len(cx.faces[f])
        return offset[f] + 2 * (j % k) + s

    n = offset[-1]
    r0, r1, r2 = [0] * n, [0] * n, [0] * n
    sites: dict[int, list[tuple[int, int]]] = {}
    for f, es in enumerate(cx.face_edges):
        for j, e in enumerate(es):
            sites.setdefault(e, []).append((f, j))
    for f, cyc in enumerate(cx.faces):
        k = len(cyc)
        for j in range(k):
            e = cx.face_edges[f][j]
            other = [x for x in sites[e] if x != (f, j)]
            if len(other) != 1:
                raise ValueError(f"edge {e} is not on exactly two face sides")
            g, i = other[0]
            for s in (0, 1):
                a = fid(f, j, s)
                r0[a] = fid(f, j, 1 - s)
                r1[a] = fid(f, j - 1, 1) if s == 0 else fid(f, j + 1, 0)
                v = cyc[(j + s) % k]
                gv = cx.faces[g]
                s2 = 0 if gv[i] == v else 1
                if gv[(i + s2) % len(gv)] != v:
                    raise ValueError("edge endpoints disagree between its two faces")
                r2[a] = fid(g, i, s2)
    return r0, r1, r2


def canonical_map_form(cx: CellComplex) -> tuple:
    """Relabeling- and reflection-invariant certificate of a closed map."""
    invs = _flag_involutions(cx)
    n = len(invs[0])
    best = None
    for root in range(n):
        label = {root: 0}
        order = [root]
        head = 0
        while head < len(order):
            a = order[head]
            head += 1
            for r in invs:
                b = r[a]
                if b not in label:
                    label[b] = len(order)
                    order.append(b)
        if len(order) != n:
            raise ValueError("map is not connected")
        code = tuple(label[r[a]] for a in order for r in invs)
        if best is None or code < best:
            best = code
    return best


def maps_isomorphic(a: CellComplex, b: CellComplex) -> bool:
    return canonical_map_form(a) == canonical_map_form(b)


# --------------------------------------------------------------------------
# Cyclic covers for large face counts
# --------------------------------------------------------------------------


def cyclic_cover(hm: Hypermap, r: int, rng: random.Random) -> Hypermap | None:
    """Random r-fold cyclic cover of a permutation pair, or None if disconnected.

    Voltages live on beta only; each beta cycle and each rho cycle must have
    voltage sum zero so all cycle lengths are preserved.  The constraint graph
    (beta cycles vs rho cycles, one edge per point) is solved by giving random
    values to non-tree edges and peeling leaves of a spanning forest.
    """
    w = hm.size
    beta, gamma, rho = list(hm.beta), list(hm.gamma), hm.rho
    bcyc = [0] * w
    for k, c in enumerate(cycles(beta)):
        for i in c:
            bcyc[i] = k
    nb = max(bcyc) + 1
    rcyc = [0] * w
    for k, c in enumerate(cycles(rho)):
        for i in c:
            rcyc[i] = nb + k
    n_nodes = max(rcyc) + 1
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for i in range(w):
        adj[bcyc[i]].append(i)
        adj[rcyc[i]].append(i)
    # spanning forest by BFS; tree edge = point
    parent_edge = [-1] * n_nodes
    seen = [False] * n_nodes
    order = []
    for root in range(n_nodes):
        if seen[root]:
            continue
        seen[root] = True
        todo = [root]
        while todo:
            u = todo.pop(0)
            order.append(u)
            for i in adj[u]:
                v = rcyc[i] if bcyc[i] == u else bcyc[i]
                if not seen[v]:
                    seen[v] = True
                    parent_edge[v] = i
                    todo.append(v)
    tree = {i for i in parent_edge if i >= 0}
    volt = [rng.randrange(r) if i not in tree else 0 for i in range(w)]
    # fix tree edges from the leaves up: node sum must vanish
    for u in reversed(order):
        i = parent_edge[u]
        if i < 0:
            continue
        s = sum(volt[j] for j in adj[u] if j != i) % r
        volt[i] = (-s) % r
    lift_beta = [0] * (w * r)
    lift_gamma = [0] * (w * r)
    for i in range(w):
        for a in range(r):
            lift_beta[a * w + i] = ((a + volt[i]) % r) * w + beta[i]
            lift_gamma[a * w + i] = a * w + gamma[i]
    if not is_transitive(lift_beta, lift_gamma):
        return None
    return Hypermap(tuple(lift_beta), tuple(lift_gamma))


def has_distinct_vertex_faces(cx: CellComplex) -> bool:
    """No two vertices lie on the same three faces (such a pair is a weight-2 logical)."""
    triples = [tuple(sorted(fs)) for fs in cx.vertex_faces()]
    return len(set(triples)) == len(triples)


def _cover_plan(sig: TessellationSignature, max_faces: int) -> tuple[int, int] | None:
    """Pick (base genus, sheets) with the fewest sheets and a searchable base."""
    g, p = sig.g, sig.p
    for r in range(2, g):
        if (g - 1) % r:
            continue
        g0 = (g - 1) // r + 1
        try:
            nf0 = face_count(TessellationSignature.of(p, g0))
        except ValueError:
            continue
        if 3 <= nf0 <= max_faces and nf0 % 3 == 0:
            return g0, r
    return None


def cover_search(
    sig: TessellationSignature,
    max_faces: int = DEFAULT_MAX_FACES,
    attempts: int = 20,
    seed: int = 0,
    max_bases: int = 600,
) -> CellComplex:
    """Colored complex with many faces, as a cyclic cover of a searched base map.

    Lifts whose vertices all lie on distinct face triples are preferred; a
    shared triple always gives a weight-2 logical operator.
    """
    nf = _check_signature(sig)
    plan = _cover_plan(sig, max_faces)
    if plan is None:
        raise NoComplexError(
            f"no trivalent 3-colorable complex for (p,g) = ({sig.p},{sig.g}) found: "
            "no cover of a searchable base map applies"
        )
    g0, r = plan
    base_sig = TessellationSignature.of(sig.p, g0)
    nf0 = face_count(base_sig)
    rng = random.Random(seed)
    fallback = None
    bases = 0
    # fewer face triples than vertices: some pair must share one, so take any lift
    forced_repeat = (nf // 3) ** 3 < sig.p * nf // 3
    for hm in iter_hypermaps(sig.p, nf0):
        bases += 1
        for _ in range(attempts):
            lift = cyclic_cover(hm, r, rng)
            if lift is None:
                continue
            meta = {"builder": "cover", "base_genus": g0, "sheets": r}
            cx, _ = complex_from_permutations(sig.p, lift.beta, lift.gamma, meta=meta)
            if cx.n_faces != nf:
                continue
            if forced_repeat or has_distinct_vertex_faces(cx):
                return cx
            fallback = fallback or cx
        if bases >= max_bases:
            break
    if fallback is not None:
        return fallback
    raise NoComplexError(
        f"no trivalent 3-colorable complex for (p,g) = ({sig.p},{sig.g}) found by covering"
    )
