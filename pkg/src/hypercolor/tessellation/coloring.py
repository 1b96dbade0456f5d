"""Proper face 3-coloring of closed trivalent complexes by backtracking."""

from __future__ import annotations

from collections import deque

from ..errors import NotThreeColorableError
from .complex import COLORS, CellComplex, Coloring, coloring_from_faces


def _bfs_order(neighbors: list[set[int]]) -> list[int]:
    order, seen = [], set()
    for root in range(len(neighbors)):
        if root in seen:
            continue
        seen.add(root)
        todo = deque([root])
        while todo:
            f = todo.popleft()
            order.append(f)
            for h in sorted(neighbors[f]):
                if h not in seen:
                    seen.add(h)
                    todo.append(h)
    return order


def three_color(cx: CellComplex) -> Coloring:
    """Color faces R/G/B so that faces sharing an edge differ.

    Faces are visited most-constrained first (ties by breadth-first rank from
    face 0), so the result is a deterministic function of the face order.
    """
    if not cx.is_closed():
        raise ValueError("three_color needs a closed complex")
    if cx.self_adjacent_edges():
        raise NotThreeColorableError(
            f"not 3-colorable: face {cx.edge_faces[cx.self_adjacent_edges()[0]][0]} "
            "is adjacent to itself"
        )
    if cx.p % 2:
        raise NotThreeColorableError(
            f"not 3-colorable: faces have an odd number of sides ({cx.p})"
        )
    nb = cx.face_neighbors()
    rank = {f: i for i, f in enumerate(_bfs_order(nb))}
    color: list[str | None] = [None] * cx.n_faces

    def pick() -> int | None:
        best, best_key = None, None
        for f in range(cx.n_faces):
            if color[f] is not None:
                continue
            used = {color[h] for h in nb[f] if color[h] is not None}
            key = (-len(used), rank[f])
            if best_key is None or key < best_key:
                best, best_key = f, key
        return best

    def solve() -> bool:
        f = pick()
        if f is None:
            return True
        used = {color[h] for h in nb[f]}
        for c in COLORS:
            if c in used:
                continue
            color[f] = c
            if solve():
                return True
        color[f] = None
        return False

    if not solve():
        raise NotThreeColorableError("not 3-colorable: no proper face 3-coloring exists")
    return coloring_from_faces(cx, color)
