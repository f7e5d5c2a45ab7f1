"""Homogeneous-coordinate linear algebra over complex scalars.

Points, hyperplanes, quadrics and projective maps are all coordinate
vectors/matrices identified up to a nonzero complex scale.  Equality up
to scale is decided by normalizing to the largest-magnitude coordinate
and comparing with relative tolerance (1e-10 unless a call-site says
otherwise).  Points "at infinity" need no special casing: everything is
homogeneous, and affine charts are explicit where used.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    DimensionMismatch,
    GeometryError,
    as_complex_array,
    equal_up_to_scale,
    lex_key,
    normalize_leading,
)

__all__ = [
    "GeometryError",
    "DimensionMismatch",
    "GeneratorChord",
    "ProjPoint",
    "Hyperplane",
    "Quadric",
    "ProjMap",
    "apply_map",
    "cross_ratio",
    "line_quadric_intersections",
    "ChordIntersections",
    "on_quadric",
    "incident",
    "join_line",
    "meet_point",
]


class GeneratorChord(GeometryError):
    """The whole line lies in the quadric; chord data is indeterminate."""


class ProjPoint:
    """Point of P^n: n+1 complex homogeneous coordinates, not all zero."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        arr = as_complex_array(coords, "ProjPoint")
        if arr.ndim != 1 or arr.size < 2:
            raise GeometryError("ProjPoint needs a 1-d vector of length >= 2")
        if float(np.max(np.abs(arr))) == 0.0:
            raise GeometryError("ProjPoint coordinates must not all vanish")
        self.coords = arr

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    def normalized(self) -> np.ndarray:
        return normalize_leading(self.coords)

    def equals(self, other: "ProjPoint", tol: float = DEFAULT_TOL) -> bool:
        return equal_up_to_scale(self.coords, other.coords, tol)

    def __repr__(self):
        inner = ":".join(repr(z) for z in self.coords)
        return f"ProjPoint({inner})"


class Hyperplane:
    """Hyperplane of P^n given by its dual coefficient vector, up to scale."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = as_complex_array(coeffs, "Hyperplane")
        if arr.ndim != 1 or arr.size < 2:
            raise GeometryError("Hyperplane needs a 1-d vector of length >= 2")
        if float(np.max(np.abs(arr))) == 0.0:
            raise GeometryError("Hyperplane coefficients must not all vanish")
        self.coeffs = arr

    @property
    def dim(self) -> int:
        return self.coeffs.size - 1

    def equals(self, other: "Hyperplane", tol: float = DEFAULT_TOL) -> bool:
        return equal_up_to_scale(self.coeffs, other.coeffs, tol)

    def __repr__(self):
        inner = ",".join(repr(z) for z in self.coeffs)
        return f"Hyperplane({inner})"


class Quadric:
    """Quadric hypersurface x^T M x = 0 with M symmetric, up to scale.

    The matrix must be exactly symmetric; computed matrices should be
    symmetrized explicitly (``Quadric.from_matrix``) before construction.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        arr = as_complex_array(matrix, "Quadric")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
            raise GeometryError("Quadric needs a square matrix of size >= 2")
        if not np.array_equal(arr, arr.T):
            raise GeometryError("Quadric matrix must be exactly symmetric")
        if float(np.max(np.abs(arr))) == 0.0:
            raise GeometryError("Quadric matrix must not vanish")
        self.matrix = arr

    @classmethod
    def from_matrix(cls, matrix) -> "Quadric":
        """Build a quadric from a nearly-symmetric matrix by symmetrizing."""
        arr = as_complex_array(matrix, "Quadric")
        return cls((arr + arr.T) / 2.0)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] - 1

    def evaluate(self, p: ProjPoint) -> complex:
        return complex(p.coords @ self.matrix @ p.coords)

    def bilinear(self, p: ProjPoint, q: ProjPoint) -> complex:
        return complex(p.coords @ self.matrix @ q.coords)

    def equals(self, other: "Quadric", tol: float = DEFAULT_TOL) -> bool:
        return equal_up_to_scale(self.matrix, other.matrix, tol)

    def __repr__(self):
        return f"Quadric({self.matrix.tolist()!r})"


class ProjMap:
    """Projectivity of P^n given by an invertible matrix, up to scale."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, singular_tol: float = 1e-12):
        arr = as_complex_array(matrix, "ProjMap")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
            raise GeometryError("ProjMap needs a square matrix of size >= 2")
        scale = float(np.max(np.abs(arr)))
        if scale == 0.0:
            raise GeometryError("ProjMap matrix must not vanish")
        if abs(np.linalg.det(arr / scale)) <= singular_tol:
            raise GeometryError("ProjMap matrix is (numerically) singular")
        self.matrix = arr

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] - 1

    def inverse(self) -> "ProjMap":
        return ProjMap(np.linalg.inv(self.matrix))

    def apply(self, p: ProjPoint) -> ProjPoint:
        """Image point: matrix-vector product, renormalized to unit
        max-magnitude (phase preserved) so chained maps stay conditioned."""
        if p.dim != self.dim:
            raise DimensionMismatch(f"map on P^{self.dim} applied to P^{p.dim} point")
        out = self.matrix @ p.coords
        return ProjPoint(out / np.max(np.abs(out)))

    def apply_hyperplane(self, h: Hyperplane) -> Hyperplane:
        """Image hyperplane: coefficients transform by the inverse transpose."""
        if h.dim != self.dim:
            raise DimensionMismatch("hyperplane dimension mismatch")
        out = np.linalg.inv(self.matrix).T @ h.coeffs
        return Hyperplane(out / np.max(np.abs(out)))

    def apply_quadric(self, q: Quadric) -> Quadric:
        """Image quadric M^{-T} Q M^{-1} (so image points satisfy it)."""
        if q.dim != self.dim:
            raise DimensionMismatch("quadric dimension mismatch")
        inv = np.linalg.inv(self.matrix)
        return Quadric.from_matrix(inv.T @ q.matrix @ inv)

    def equals(self, other: "ProjMap", tol: float = DEFAULT_TOL) -> bool:
        return equal_up_to_scale(self.matrix, other.matrix, tol)

    def __repr__(self):
        return f"ProjMap({self.matrix.tolist()!r})"


def apply_map(m: ProjMap, p: ProjPoint) -> ProjPoint:
    return m.apply(p)


def _line_coordinates(points, tol):
    """Projective parameters (alpha_i : beta_i) of points on a common line.

    Returns None if the points fail the collinearity test: the stacked
    coordinate matrix must have numerical rank 2.
    """
    stack = np.array([p.coords for p in points])
    stack = stack / np.max(np.abs(stack))
    _, s, vh = np.linalg.svd(stack)
    if s.size > 2 and s[2] > max(tol, 1e-12) * s[0] * 100:
        return None
    u, v = vh[0], vh[1]
    alphas = stack @ np.conj(u)
    betas = stack @ np.conj(v)
    return alphas, betas


def cross_ratio(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint, p4: ProjPoint,
                tol: float = DEFAULT_TOL) -> complex:
    """Cross-ratio of four collinear points.

    Convention (fixed package-wide): with affine parameters t_i on the
    common line, CR = ((t1-t3)(t2-t4)) / ((t1-t4)(t2-t3)); computed via
    2x2 determinants of projective parameters, so parameter infinity is
    unexceptional.
    """
    pts = (p1, p2, p3, p4)
    dims = {p.dim for p in pts}
    if len(dims) != 1:
        raise DimensionMismatch("cross-ratio points live in different spaces")
    coords = _line_coordinates(pts, tol)
    if coords is None:
        raise GeometryError("cross-ratio requires collinear points")
    a, b = coords

    def det(i, j):
        return a[i] * b[j] - a[j] * b[i]

    num = det(0, 2) * det(1, 3)
    den = det(0, 3) * det(1, 2)
    m = max(abs(num), abs(den))
    if m == 0.0:
        raise GeometryError("cross-ratio is indeterminate (0/0 coincidence)")
    if abs(den) < 1e-14 * m:
        raise GeometryError("cross-ratio is infinite for this coincidence")
    return complex(num / den)


class ChordIntersections(NamedTuple):
    first: ProjPoint
    second: ProjPoint
    tangent: bool


def line_quadric_intersections(a: ProjPoint, b: ProjPoint, q: Quadric,
                               tol: float = DEFAULT_TOL,
                               tangent_tol: float = 1e-12) -> ChordIntersections:
    """Both intersections of the line a-b with a quadric.

    Solves the quadratic q(s*a + t*b) = 0 in the projective parameter
    (s:t).  A double root (relative discriminant below ``tangent_tol``)
    is returned twice with the tangent flag set.  A line lying entirely
    in the quadric raises GeneratorChord.  The two points are labeled
    deterministically (lexicographic on normalized coordinates).
    """
    if a.dim != b.dim or a.dim != q.dim:
        raise DimensionMismatch("line/quadric dimension mismatch")
    if a.equals(b, tol):
        raise GeometryError("chord endpoints coincide")
    av = a.coords / np.max(np.abs(a.coords))
    bv = b.coords / np.max(np.abs(b.coords))
    qm = q.matrix / np.max(np.abs(q.matrix))
    qa = complex(av @ qm @ av)
    qb = complex(bv @ qm @ bv)
    qab = complex(av @ qm @ bv)
    scale = max(abs(qa), abs(qb), abs(qab))
    if scale <= max(tol, 1e-13):
        raise GeneratorChord("line lies in the quadric (generator)")
    # roots of qa*s^2 + 2*qab*s*t + qb*t^2 = 0 as (s:t) pairs
    disc = qab * qab - qa * qb
    if abs(disc) <= tangent_tol * scale * scale:
        reps = [(-qab, qa), (qb, -qab)]
        s, t = max(reps, key=lambda r: abs(r[0]) + abs(r[1]))
        x = ProjPoint(s * av + t * bv)
        return ChordIntersections(x, x, True)
    root = np.sqrt(disc)
    pairs = []
    for sgn in (+1.0, -1.0):
        reps = [(-qab + sgn * root, qa), (qb, -qab - sgn * root)]
        s, t = max(reps, key=lambda r: abs(r[0]) + abs(r[1]))
        pairs.append(ProjPoint(s * av + t * bv))
    pairs.sort(key=lambda p: lex_key(p.coords))
    return ChordIntersections(pairs[0], pairs[1], False)


def on_quadric(p: ProjPoint, q: Quadric, tol: float = DEFAULT_TOL) -> bool:
    """Scale-free incidence test |p^T Q p| / (||Q|| ||p||^2) < tol."""
    if p.dim != q.dim:
        raise DimensionMismatch("point/quadric dimension mismatch")
    val = abs(p.coords @ q.matrix @ p.coords)
    denom = np.linalg.norm(q.matrix) * np.linalg.norm(p.coords) ** 2
    return bool(val / denom < tol)


def incident(p: ProjPoint, h: Hyperplane, tol: float = DEFAULT_TOL) -> bool:
    """Scale-free incidence test |<h, p>| / (||h|| ||p||) < tol."""
    if p.dim != h.dim:
        raise DimensionMismatch("point/hyperplane dimension mismatch")
    val = abs(h.coeffs @ p.coords)
    return bool(val / (np.linalg.norm(h.coeffs) * np.linalg.norm(p.coords)) < tol)


def join_line(p: ProjPoint, q: ProjPoint) -> Hyperplane:
    """Line through two plane points (P^2 only)."""
    if p.dim != 2 or q.dim != 2:
        raise DimensionMismatch("join_line is a P^2 operation")
    return Hyperplane(np.cross(p.coords, q.coords))


def meet_point(g: Hyperplane, h: Hyperplane) -> ProjPoint:
    """Intersection point of two plane lines (P^2 only)."""
    if g.dim != 2 or h.dim != 2:
        raise DimensionMismatch("meet_point is a P^2 operation")
    return ProjPoint(np.cross(g.coeffs, h.coeffs))
