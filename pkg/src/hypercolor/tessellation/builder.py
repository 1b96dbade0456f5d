"""Pick a construction route for a signature and record which one was used."""

from __future__ import annotations

from ..errors import PairingIncompatibleError
from ..hypgeo import TessellationSignature
from .combinatorial import (
    DEFAULT_MAX_FACES,
    _check_signature,
    combinatorial_search,
    cover_search,
)
from .complex import CellComplex
from .geometric import build_geometric

BUILDERS = ("geometric", "combinatorial", "auto")


def build_complex(
    sig: TessellationSignature,
    builder: str = "auto",
    max_faces: int = DEFAULT_MAX_FACES,
) -> CellComplex:
    """Closed colorable complex for ``sig``.

    ``auto`` tries the geometric quotient first and falls back to the
    combinatorial search (or a cyclic cover of a searched map when n_f is
    beyond the search limit).  ``meta["notice"]`` explains any fallback.
    """
    if builder not in BUILDERS:
        raise ValueError(f"unknown builder {builder!r}; expected one of {BUILDERS}")
    nf = _check_signature(sig)
    notice = None
    if builder in ("geometric", "auto"):
        try:
            return build_geometric(sig)
        except PairingIncompatibleError as exc:
            if builder == "geometric":
                raise
            notice = f"geometric build failed ({exc}); using combinatorial witness"
    if nf <= max_faces:
        cx = combinatorial_search(sig, max_faces=max_faces)
    else:
        cx = cover_search(sig, max_faces=max_faces)
    if notice:
        cx.meta["notice"] = notice
    return cx
