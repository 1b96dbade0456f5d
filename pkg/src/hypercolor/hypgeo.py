"""Closed-form hyperbolic geometry in the Poincare disk.

Everything here is a pure function of its arguments: Mobius isometries,
the length/area/face-count formulas for regular {p,q} tessellations, and the
regular {4g,4g} fundamental polygon with its opposite-side pairings.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import IncompatibleSignatureError, NotHyperbolicError

# Euclidean tolerance used when deciding that two disk points coincide.
POINT_TOL = 1e-9


@dataclass(frozen=True)
class Mobius:
    """Orientation-preserving isometry ``z -> (a z + b) / (c z + d)``.

    Disk isometries have ``d = conj(a)``, ``c = conj(b)`` and unit determinant.
    Instances compose with ``@`` and act on scalars or numpy arrays by calling.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if abs(self.determinant) < 1e-300:
            raise ValueError("singular Mobius transformation")

    @classmethod
    def from_matrix(cls, m) -> Mobius:
        m = np.asarray(m, dtype=complex)
        s = cmath.sqrt(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
        return cls(*(complex(x) / s for x in (m[0, 0], m[0, 1], m[1, 0], m[1, 1])))

    @classmethod
    def identity(cls) -> Mobius:
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def rotation(cls, theta: float) -> Mobius:
        """Rotation about the origin by ``theta`` radians."""
        h = cmath.exp(0.5j * theta)
        return cls(h, 0j, 0j, h.conjugate())

    @classmethod
    def translation(cls, distance: float, angle: float = 0.0) -> Mobius:
        """Hyperbolic translation by ``distance`` along the diameter at ``angle``."""
        ch, sh = math.cosh(distance / 2), math.sinh(distance / 2)
        t = cls(complex(ch), complex(sh), complex(sh), complex(ch))
        if angle == 0.0:
            return t
        return cls.rotation(angle) @ t @ cls.rotation(-angle)

    @classmethod
    def from_origin(cls, w: complex) -> Mobius:
        """The transvection carrying 0 to ``w`` along a diameter."""
        w = complex(w)
        r2 = abs(w) ** 2
        if r2 >= 1.0:
            raise ValueError(f"point {w} is not inside the unit disk")
        s = 1.0 / math.sqrt(1.0 - r2)
        return cls(complex(s), s * w, s * w.conjugate(), complex(s))

    @classmethod
    def half_turn(cls, w: complex) -> Mobius:
        """Rotation by pi about ``w``; a product of two reflections."""
        m = cls.from_origin(w)
        return m @ cls.rotation(math.pi) @ m.inverse()

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def inverse(self) -> Mobius:
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: Mobius) -> Mobius:
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        s = cmath.sqrt(a * d - b * c)
        return Mobius(a / s, b / s, c / s, d / s)

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def is_disk_isometry(self, tol: float = 1e-9) -> bool:
        scale = max(1.0, abs(self.a))
        return (
            abs(self.d - self.a.conjugate()) <= tol * scale
            and abs(self.c - self.b.conjugate()) <= tol * scale
        )

    def is_hyperbolic(self) -> bool:
        """True for a translation: real trace of modulus > 2, no fixed point inside."""
        return abs(self.trace.imag) < 1e-9 * max(1.0, abs(self.trace)) and abs(self.trace) > 2.0


def mobius_apply(t: Mobius, z: complex) -> complex:
    if abs(z) >= 1.0:
        raise ValueError(f"point {z} is not inside the unit disk")
    return complex(t(z))


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    z1, z2 = complex(z1), complex(z2)
    if abs(z1) >= 1.0 or abs(z2) >= 1.0:
        raise ValueError("points must lie strictly inside the unit disk")
    num = abs(z1 - z2)
    if num == 0.0:
        return 0.0
    den = abs(1.0 - z1.conjugate() * z2)
    return 2.0 * math.atanh(min(num / den, 1.0 - 1e-17))


def distance_from_origin(z) -> np.ndarray:
    return 2.0 * np.arctanh(np.abs(z))


def disk_radius(distance: float) -> float:
    """Euclidean radius of the hyperbolic circle of the given radius about 0."""
    return math.tanh(distance / 2.0)


def geodesic_midpoint(z1: complex, z2: complex) -> complex:
    m = Mobius.from_origin(z1)
    w = m.inverse()(z2)
    if w == 0:
        return complex(z1)
    half = math.tanh(math.atanh(abs(w)) / 2.0)
    return complex(m(half * w / abs(w)))


def angle_at(vertex: complex, u: complex, w: complex) -> float:
    """Interior angle at ``vertex`` between the geodesics towards u and w."""
    m = Mobius.from_origin(vertex).inverse()
    # the transvection has a real positive derivative at vertex: angles survive
    a = cmath.phase(m(u)) - cmath.phase(m(w))
    a = abs(a) % (2 * math.pi)
    return min(a, 2 * math.pi - a)


# --------------------------------------------------------------------------
# Gauss-Bonnet and the {p,q} formulas
# --------------------------------------------------------------------------


def triangle_area(alpha: float, beta: float, theta: float) -> float:
    if min(alpha, beta, theta) < 0:
        raise ValueError("angles must be non-negative")
    s = alpha + beta + theta
    if s >= math.pi:
        raise NotHyperbolicError(f"not hyperbolic: angle sum {s} >= pi")
    return math.pi - s


def regular_polygon_area(p: int, q: int) -> float:
    """Area of one face of the {p,q} tessellation (interior angle 2*pi/q)."""
    _check_hyperbolic(p, q)
    return (p - 2) * math.pi - p * (2 * math.pi / q)


def regular_polygon_area_by_triangles(p: int, q: int) -> float:
    # 2p right triangles with angles pi/p (centre), pi/q (vertex), pi/2
    return 2 * p * triangle_area(math.pi / p, math.pi / q, math.pi / 2)


def is_hyperbolic(p: int, q: int) -> bool:
    return p * q - 2 * p - 2 * q > 0


def _check_hyperbolic(p: int, q: int) -> None:
    if p < 3 or q < 3 or not is_hyperbolic(p, q):
        raise NotHyperbolicError(f"not hyperbolic: 1/{p} + 1/{q} >= 1/2")


@dataclass(frozen=True)
class TessellationSignature:
    """A {p,q} tessellation of a closed genus-g surface."""

    p: int
    q: int = 3
    g: int = 2

    def __post_init__(self):
        if self.g < 2:
            raise ValueError(f"genus must be >= 2, got {self.g}")
        _check_hyperbolic(self.p, self.q)

    @classmethod
    def of(cls, p: int, g: int, q: int = 3) -> TessellationSignature:
        return cls(p=p, q=q, g=g)


def face_count(sig: TessellationSignature) -> int:
    """Number of {p,q} faces whose total area equals that of the genus-g surface."""
    p, q, g = sig.p, sig.q, sig.g
    _check_hyperbolic(p, q)
    num, den = 4 * q * (g - 1), p * q - 2 * p - 2 * q
    if num % den:
        raise IncompatibleSignatureError(
            f"incompatible (p,g) = ({p},{g}): {num}/{den} is not an integer"
        )
    return num // den


def _acosh_checked(x: float) -> float:
    # rounding can push an exact 1 a hair below
    if x < 1.0 - 1e-12:
        raise NotHyperbolicError(f"arccosh argument {x} < 1")
    return math.acosh(max(x, 1.0))


def edge_length(p: int, q: int = 3) -> float:
    _check_hyperbolic(p, q)
    cq = math.cos(math.pi / q)
    sq = math.sin(math.pi / q)
    return _acosh_checked((cq * cq + math.cos(2 * math.pi / p)) / (sq * sq))


def circumradius(p: int, q: int = 3) -> float:
    _check_hyperbolic(p, q)
    return _acosh_checked(1.0 / (math.tan(math.pi / p) * math.tan(math.pi / q)))


def circumdiameter(p: int, q: int = 3) -> float:
    return 2.0 * circumradius(p, q)


def inradius(p: int, q: int = 3) -> float:
    _check_hyperbolic(p, q)
    return _acosh_checked(math.cos(math.pi / q) / math.sin(math.pi / p))


def shrunk_edge_bound(p: int, q: int = 3) -> float:
    """Upper bound on the length of one shrunk-lattice link."""
    return edge_length(p, q) + circumdiameter(p, q)


def paired_side_distance(g: int) -> float:
    """Distance between opposite sides of the regular {4g,4g} polygon."""
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    t = math.pi / (4 * g)
    return 2.0 * _acosh_checked(math.cos(t) / math.sin(t))


def distance_ratio(p: int, g: int) -> float:
    return paired_side_distance(g) / shrunk_edge_bound(p, 3)


def distance_estimate(p: int, g: int) -> int:
    """Geometric distance estimate ``2 * ceil(d_h / AR_{p,3})``.

    A ratio within 1e-9 of an integer is rounded to that integer.
    """
    face_count(TessellationSignature(p=p, q=3, g=g))
    ratio = distance_ratio(p, g)
    nearest = round(ratio)
    links = nearest if abs(ratio - nearest) <= 1e-9 else math.ceil(ratio)
    return 2 * int(links)


def admissible_sides(g: int, q: int = 3) -> list[tuple[int, int]]:
    """All (p, n_f) with an integer face count on the genus-g surface."""
    out = []
    p = 3
    while True:
        p += 1
        if not is_hyperbolic(p, q):
            continue
        den = p * q - 2 * p - 2 * q
        num = 4 * q * (g - 1)
        if den > num:
            break
        if num % den == 0:
            out.append((p, num // den))
    return out


# --------------------------------------------------------------------------
# Fundamental polygon
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FundamentalPolygon:
    """Regular {4g,4g} polygon centred at 0 with opposite sides paired.

    Side ``i`` joins vertices ``i`` and ``i+1``.  ``side_maps[i]`` carries side
    ``i`` onto side ``i + 2g`` (mod 4g), reversing its boundary orientation; the
    first 2g of these are the surface-group generators ``pairings``.
    """

    genus: int
    vertices: tuple[complex, ...]
    side_maps: tuple[Mobius, ...]

    @property
    def n_sides(self) -> int:
        return 4 * self.genus

    @property
    def pairings(self) -> tuple[Mobius, ...]:
        return self.side_maps[: 2 * self.genus]

    @cached_property
    def circumradius(self) -> float:
        return circumradius(self.n_sides, self.n_sides)

    @cached_property
    def inradius(self) -> float:
        return inradius(self.n_sides, self.n_sides)

    @cached_property
    def _side_circles(self):
        # side i is the geodesic orthogonal to the diameter at angle theta_i,
        # i.e. a circle of centre c*e^{i theta_i}, radius c - m
        m = disk_radius(self.inradius)
        c = (1 + m * m) / (2 * m)
        n = self.n_sides
        thetas = np.array([(2 * i + 1) * math.pi / n for i in range(n)])
        return c * np.exp(1j * thetas), c - m

    def side_midpoint(self, i: int) -> complex:
        m = disk_radius(self.inradius)
        return m * cmath.exp(1j * (2 * (i % self.n_sides) + 1) * math.pi / self.n_sides)

    def outside_depth(self, z) -> np.ndarray:
        """Per-side signed depth; positive entries mean ``z`` lies beyond that side."""
        centres, rad = self._side_circles
        z = np.asarray(z, dtype=complex)
        return rad - np.abs(z[..., None] - centres)

    def contains(self, z, tol: float = POINT_TOL):
        return np.all(self.outside_depth(z) <= tol, axis=-1)

    def reduce(self, z: complex, max_steps: int = 10_000) -> tuple[complex, list[int]]:
        """Move ``z`` into the closed polygon by side maps; returns point and word."""
        z = complex(z)
        word: list[int] = []
        for _ in range(max_steps):
            depth = self.outside_depth(z)
            i = int(np.argmax(depth))
            if depth[i] <= POINT_TOL:
                return z, word
            z = complex(self.side_maps[i](z))
            word.append(i)
        raise RuntimeError("reduction into the fundamental polygon did not terminate")

    def vertex_cycles(self) -> list[list[int]]:
        """Partition polygon vertices into cycles identified by the side maps."""
        n = self.n_sides
        verts = np.array(self.vertices)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for t in self.side_maps:
            images = t(verts)
            for i in range(n):
                j = int(np.argmin(np.abs(verts - images[i])))
                if abs(verts[j] - images[i]) < 1e-7:
                    parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def interior_angle(self, i: int) -> float:
        n = self.n_sides
        v = self.vertices
        return angle_at(v[i], v[(i - 1) % n], v[(i + 1) % n])

    def cycle_angle_sums(self) -> list[float]:
        return [sum(self.interior_angle(i) for i in cyc) for cyc in self.vertex_cycles()]


def fundamental_polygon(g: int) -> FundamentalPolygon:
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    n = 4 * g
    r = disk_radius(circumradius(n, n))
    vertices = tuple(r * cmath.exp(2j * math.pi * k / n) for k in range(n))
    dh = paired_side_distance(g)
    maps = []
    for i in range(n):
        # translate along the axis through the midpoint of side i+2g
        theta = (2 * (i + 2 * g) + 1) * math.pi / n
        maps.append(Mobius.translation(dh, theta))
    return FundamentalPolygon(genus=g, vertices=vertices, side_maps=tuple(maps))
