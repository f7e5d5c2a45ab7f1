"""Moebius maps of the extended complex plane and the sphere model.

Both families are supported: the fractional-linear maps
z' = (a z + b)/(c z + d) and the conjugating family
z' = (a conj(z) + b)/(c conj(z) + d).  Conjugation with the unit sphere
goes through stereographic projection from the north pole (0, 0, 1).
"""

from __future__ import annotations

import numpy as np

from .numerics import GeometryError, rng_from
from .projective import ProjMap, ProjPoint, Quadric

__all__ = [
    "ExtendedComplex",
    "INFINITY",
    "MoebiusMap",
    "moebius_apply",
    "SpherePoint",
    "stereographic",
    "inverse_stereographic",
    "sphere_point_homogeneous",
    "moebius_to_sphere",
    "unit_sphere_quadric",
    "chordal_distance",
    "circle_quadric",
    "circle_from_quadric",
    "moebius_transform_circle",
    "random_moebius",
]


class ExtendedComplex:
    """A complex value or the single point at infinity."""

    __slots__ = ("value", "infinite")

    def __init__(self, value=0j, infinite=False):
        if infinite:
            self.value = None
            self.infinite = True
        else:
            z = complex(value)
            if not (np.isfinite(z.real) and np.isfinite(z.imag)):
                raise GeometryError("finite ExtendedComplex requires finite value")
            self.value = z
            self.infinite = False

    def __repr__(self):
        return "ExtendedComplex(inf)" if self.infinite else f"ExtendedComplex({self.value!r})"

    def __eq__(self, other):
        other = as_extended(other)
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return self.value == other.value

    def __hash__(self):
        return hash(("inf",)) if self.infinite else hash(self.value)


INFINITY = ExtendedComplex(infinite=True)


def as_extended(z) -> ExtendedComplex:
    if isinstance(z, ExtendedComplex):
        return z
    return ExtendedComplex(complex(z))


def chordal_distance(z: ExtendedComplex, w: ExtendedComplex) -> float:
    """Riemann-sphere chordal metric; infinity-safe comparison tool."""
    z, w = as_extended(z), as_extended(w)
    if z.infinite and w.infinite:
        return 0.0
    if z.infinite or w.infinite:
        finite = w if z.infinite else z
        return 2.0 / np.sqrt(1.0 + abs(finite.value) ** 2)
    num = 2.0 * abs(z.value - w.value)
    return num / np.sqrt((1.0 + abs(z.value) ** 2) * (1.0 + abs(w.value) ** 2))


class MoebiusMap:
    """Coefficients (a, b, c, d) with ad - bc != 0, plus an optional
    pre-conjugation flag selecting the orientation-reversing family."""

    __slots__ = ("a", "b", "c", "d", "conjugating")

    def __init__(self, a, b, c, d, conjugating: bool = False):
        self.a, self.b, self.c, self.d = (complex(a), complex(b), complex(c), complex(d))
        self.conjugating = bool(conjugating)
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if scale == 0.0 or not np.isfinite(scale):
            raise GeometryError("MoebiusMap coefficients invalid")
        if abs(self.det) <= 1e-12 * scale * scale:
            raise GeometryError("MoebiusMap is singular (ad - bc ~ 0)")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def coeff_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def apply(self, z) -> ExtendedComplex:
        z = as_extended(z)
        if self.conjugating and not z.infinite:
            z = ExtendedComplex(np.conj(z.value))
        if z.infinite:
            if self.c == 0:
                return INFINITY
            return ExtendedComplex(self.a / self.c)
        denom = self.c * z.value + self.d
        if denom == 0:
            return INFINITY
        return ExtendedComplex((self.a * z.value + self.b) / denom)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other, with conjugation flags folded through."""
        g2 = other.coeff_matrix
        if self.conjugating:
            g2 = np.conj(g2)
        g = self.coeff_matrix @ g2
        return MoebiusMap(g[0, 0], g[0, 1], g[1, 0], g[1, 1],
                          conjugating=self.conjugating != other.conjugating)

    def inverse(self) -> "MoebiusMap":
        a, b, c, d = self.a, self.b, self.c, self.d
        if self.conjugating:
            a, b, c, d = np.conj(a), np.conj(b), np.conj(c), np.conj(d)
        return MoebiusMap(d, -b, -c, a, conjugating=self.conjugating)

    def equals(self, other: "MoebiusMap", tol: float = 1e-10) -> bool:
        if self.conjugating != other.conjugating:
            return False
        from .numerics import equal_up_to_scale
        return equal_up_to_scale(self.coeff_matrix, other.coeff_matrix, tol)

    def __repr__(self):
        tag = ", conj" if self.conjugating else ""
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r}{tag})"


def moebius_apply(m: MoebiusMap, z) -> ExtendedComplex:
    return m.apply(z)


def random_moebius(seed: int, conjugating=None) -> MoebiusMap:
    """Seeded draw from the full group; the conjugating family comes up
    with probability 1/2 unless the flag is forced."""
    rng = rng_from(seed)
    while True:
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        a, b, c, d = (coeffs / np.sqrt(2)).tolist()
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if abs(a * d - b * c) > 0.2 * scale * scale:
            break
    flag = bool(rng.random() < 0.5) if conjugating is None else bool(conjugating)
    return MoebiusMap(a, b, c, d, conjugating=flag)


class SpherePoint:
    """Point of the unit sphere in R^3 (unit norm to 1e-12)."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x, y, z):
        self.x, self.y, self.z = float(x), float(y), float(z)
        n = self.x**2 + self.y**2 + self.z**2
        if not np.isfinite(n) or abs(n - 1.0) > 1e-12:
            raise GeometryError("SpherePoint must have unit norm")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __repr__(self):
        return f"SpherePoint({self.x!r}, {self.y!r}, {self.z!r})"


def stereographic(p: SpherePoint) -> ExtendedComplex:
    """Projection from the north pole (0,0,1) to the equatorial plane."""
    if abs(1.0 - p.z) < 1e-15:
        return INFINITY
    return ExtendedComplex((p.x + 1j * p.y) / (1.0 - p.z))


def inverse_stereographic(z) -> SpherePoint:
    z = as_extended(z)
    if z.infinite:
        return SpherePoint(0.0, 0.0, 1.0)
    v = z.value
    s = abs(v) ** 2
    if s > 1e150:
        return SpherePoint(0.0, 0.0, 1.0)
    d = s + 1.0
    p = SpherePoint(2.0 * v.real / d, 2.0 * v.imag / d, (s - 1.0) / d)
    return p


def sphere_point_homogeneous(z) -> ProjPoint:
    """Riemann-sphere point as a homogeneous point of P^3 on the unit sphere."""
    p = inverse_stereographic(z)
    return ProjPoint([p.x, p.y, p.z, 1.0])


def unit_sphere_quadric() -> Quadric:
    """x^2 + y^2 + z^2 - w^2 = 0."""
    return Quadric(np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex))


_PROBE_VALUES = (0j, 1 + 0j, -1 + 0j, 1j, -1j, 1 + 1j, -2 + 0.5j,
                 0.3 - 1.7j, INFINITY, 2j)


def moebius_to_sphere(m: MoebiusMap) -> ProjMap:
    """The 4x4 projectivity of the sphere conjugate to a Moebius map.

    Constructed numerically from the images of fixed probe points: the
    unique (up to scale) map M with M . lift(z) ~ lift(m(z)); one
    mechanism covers the plain and conjugating families alike.
    """
    rows = []
    for z in _PROBE_VALUES:
        pv = sphere_point_homogeneous(z).coords
        qv = sphere_point_homogeneous(m.apply(z)).coords
        for i in range(4):
            for j in range(i + 1, 4):
                # (M p)_i q_j - (M p)_j q_i = 0, linear in the entries of M
                row = np.zeros(16, dtype=complex)
                row[4 * i:4 * i + 4] = qv[j] * pv
                row[4 * j:4 * j + 4] -= qv[i] * pv
                rows.append(row)
    a = np.array(rows)
    _, s, vh = np.linalg.svd(a)
    if s[-2] < 1e-8 * s[0]:
        raise GeometryError("sphere-map construction system is singular")
    mat = vh[-1].reshape(4, 4)
    return ProjMap(mat)


# ---------------------------------------------------------------------------
# circles of the plane as P^2 quadrics, and their Moebius images
#
# A circle A(x^2+y^2) - 2 a x - 2 b y + C = 0 is simultaneously
#   * the P^2 conic [[A,0,-a],[0,A,-b],[-a,-b,C]]  (lines have A = 0), and
#   * the Hermitian 2x2 matrix [[A, -(a+ib)],[-(a-ib), C]] acting on (z, 1).
# Moebius maps act on the Hermitian form by congruence, which gives the
# exact image circle without any point fitting.
# ---------------------------------------------------------------------------


def circle_quadric(center, radius: float) -> Quadric:
    """P^2 conic of the circle |z - center| = radius."""
    c = complex(center)
    r = float(radius)
    if r < 0 or not np.isfinite(r):
        raise GeometryError("radius must be a finite nonnegative real")
    a, b = c.real, c.imag
    cc = a * a + b * b - r * r
    return Quadric(np.array([[1.0, 0.0, -a], [0.0, 1.0, -b], [-a, -b, cc]],
                            dtype=complex))


def circle_from_quadric(q: Quadric, tol: float = 1e-9):
    """Extract (A, a, b, C) from a circle-shaped P^2 conic, rescaled to
    A = 1 for genuine circles (lines, A = 0, stay max-normalized).

    Raises if the conic is not a circle or line, i.e. unless the two
    leading diagonal entries agree and the xy cross term vanishes.
    """
    if q.dim != 2:
        raise GeometryError("circle quadrics live in P^2")
    mat = q.matrix / np.max(np.abs(q.matrix))
    if abs(mat[0, 0] - mat[1, 1]) > tol or abs(mat[0, 1]) > tol:
        raise GeometryError("conic is not a circle or line")
    im = float(np.max(np.abs(mat.imag)))
    if im > 1e-6:
        raise GeometryError("conic is not a real circle")
    mat = mat.real
    if abs(mat[0, 0]) > tol:
        mat = mat / mat[0, 0]
    return float(mat[0, 0]), float(-mat[0, 2]), float(-mat[1, 2]), float(mat[2, 2])


def _hermitian_from_circle(aa, a, b, cc) -> np.ndarray:
    return np.array([[aa, -(a + 1j * b)], [-(a - 1j * b), cc]], dtype=complex)


def _circle_from_hermitian(h) -> tuple:
    aa = float(h[0, 0].real)
    cc = float(h[1, 1].real)
    a = float(-h[0, 1].real)
    b = float(-h[0, 1].imag)
    return aa, a, b, cc


def moebius_transform_circle(m: MoebiusMap, q: Quadric) -> Quadric:
    """Image of a circle (or line) conic under a Moebius map."""
    aa, a, b, cc = circle_from_quadric(q)
    h = _hermitian_from_circle(aa, a, b, cc)
    ginv = np.linalg.inv(m.coeff_matrix)
    if m.conjugating:
        # pre-conjugation swaps H for its transpose in the congruence
        hp = np.conj(ginv).T @ h.T @ ginv
    else:
        hp = np.conj(ginv).T @ h @ ginv
    hp = (hp + np.conj(hp).T) / 2.0
    aa2, a2, b2, cc2 = _circle_from_hermitian(hp)
    return Quadric(np.array([[aa2, 0.0, -a2], [0.0, aa2, -b2], [-a2, -b2, cc2]],
                            dtype=complex))
