"""Transformation groups as first-class values.

A GroupDescriptor packages identity, composition, inversion, a seeded
sampler and a numeric membership predicate.  Membership is decided with
tolerances, never algebraically: the groups here are continuous and the
substrate is floating point.  The randomized invariance classifier
reports "invariant" strictly as absence of a counterexample over the
executed trials, never as a proof.

Per-trial randomness is always derived from the run seed and the trial
index through the splitmix64 rule in numerics.mix_seed, which makes
every trial independently reproducible (and the loops embarrassingly
parallel, although this implementation runs them serially).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numerics import (
    GeometryError,
    equal_up_to_scale,
    haar_orthogonal,
    mix_seed,
    proportionality,
    rng_from,
)
from .projective import Hyperplane, ProjMap, ProjPoint, Quadric
from .moebius import MoebiusMap, moebius_transform_circle
from .transfers import random_inversive_map, random_lie_map

__all__ = [
    "Transformation",
    "Configuration",
    "GroupDescriptor",
    "PropertyUndefined",
    "builtin_group",
    "BUILTIN_GROUP_NAMES",
    "AxiomReport",
    "check_group_axioms",
    "stabilizes",
    "Invariant",
    "Violated",
    "invariance_test",
    "is_similarity_via_circular_points",
    "orbit_sample",
    "transform_configuration",
    "sample_quadric_preserving_map",
]


class PropertyUndefined(GeometryError):
    """Raised by property functionals on configurations outside their domain;
    invariance_test treats it as a skip signal rather than an error."""


class Transformation:
    """A concrete group element: a tagged forward/inverse pair.

    Kinds: 'projective' (ProjMap), 'moebius' (MoebiusMap),
    'pentaspherical' (complex matrix acting on circle coordinates) and
    'contact' (reference to a five-variable map; carried for
    completeness, not applicable to point configurations).
    """

    __slots__ = ("kind", "forward", "inverse_map")

    def __init__(self, kind: str, forward, inverse=None, check: bool = True):
        self.kind = kind
        self.forward = forward
        if kind == "projective":
            self.inverse_map = inverse if inverse is not None else forward.inverse()
            if check:
                prod = self.forward.matrix @ self.inverse_map.matrix
                _, resid = proportionality(prod, np.eye(prod.shape[0], dtype=complex))
                if resid > 1e-9:
                    raise GeometryError("inverse check failed for projective pair")
        elif kind == "moebius":
            self.inverse_map = inverse if inverse is not None else forward.inverse()
            if check and not forward.compose(self.inverse_map).equals(
                    MoebiusMap(1, 0, 0, 1), 1e-9):
                raise GeometryError("inverse check failed for moebius pair")
        elif kind == "pentaspherical":
            self.forward = np.asarray(forward, dtype=complex)
            self.inverse_map = (np.asarray(inverse, dtype=complex)
                                if inverse is not None else np.linalg.inv(self.forward))
            if check:
                prod = self.forward @ self.inverse_map
                _, resid = proportionality(prod, np.eye(prod.shape[0], dtype=complex))
                if resid > 1e-9:
                    raise GeometryError("inverse check failed for pentaspherical pair")
        elif kind == "contact":
            self.inverse_map = inverse
        else:
            raise GeometryError(f"unknown transformation kind: {kind}")

    # -- group structure ----------------------------------------------------

    def compose(self, other: "Transformation") -> "Transformation":
        """self after other."""
        if self.kind != other.kind:
            raise GeometryError("cannot compose transformations of different kinds")
        if self.kind == "projective":
            return Transformation(
                "projective",
                ProjMap(self.forward.matrix @ other.forward.matrix),
                ProjMap(other.inverse_map.matrix @ self.inverse_map.matrix),
                check=False)
        if self.kind == "moebius":
            return Transformation("moebius", self.forward.compose(other.forward),
                                  check=False)
        if self.kind == "pentaspherical":
            return Transformation(
                "pentaspherical",
                self.forward @ other.forward,
                other.inverse_map @ self.inverse_map,
                check=False)
        raise GeometryError("contact references do not compose here")

    def invert(self) -> "Transformation":
        if self.kind == "contact":
            raise GeometryError("contact references do not invert here")
        return Transformation(self.kind, self.inverse_map, self.forward, check=False)

    def approx_equal(self, other: "Transformation", tol: float = 1e-9) -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == "projective":
            return equal_up_to_scale(self.forward.matrix, other.forward.matrix, tol)
        if self.kind == "moebius":
            return self.forward.equals(other.forward, tol)
        if self.kind == "pentaspherical":
            return equal_up_to_scale(self.forward, other.forward, tol)
        return self.forward is other.forward

    def is_identity(self, tol: float = 1e-9) -> bool:
        if self.kind == "projective":
            n = self.forward.matrix.shape[0]
            return equal_up_to_scale(self.forward.matrix, np.eye(n), tol)
        if self.kind == "moebius":
            return (not self.forward.conjugating
                    and self.forward.equals(MoebiusMap(1, 0, 0, 1), tol))
        if self.kind == "pentaspherical":
            n = self.forward.shape[0]
            return equal_up_to_scale(self.forward, np.eye(n), tol)
        return False

    # -- action on configuration elements -----------------------------------

    def apply(self, element):
        if self.kind == "projective":
            if isinstance(element, ProjPoint):
                return self.forward.apply(element)
            if isinstance(element, Hyperplane):
                return self.forward.apply_hyperplane(element)
            if isinstance(element, Quadric):
                return self.forward.apply_quadric(element)
        elif self.kind == "moebius":
            if isinstance(element, ProjPoint) and element.dim == 2:
                return self._moebius_point(element)
            if isinstance(element, Quadric) and element.dim == 2:
                return moebius_transform_circle(self.forward, element)
        elif self.kind == "pentaspherical":
            if isinstance(element, Quadric) and element.dim == 2 \
                    and self.forward.shape == (4, 4):
                return self._pentaspherical_circle(element)
        raise GeometryError(
            f"{self.kind} transformation not applicable to {type(element).__name__}")

    def _moebius_point(self, p: ProjPoint) -> ProjPoint:
        v = p.normalized()
        if abs(v[2]) < 1e-14:
            raise PropertyUndefined("point at infinity is outside the affine chart")
        z = complex(v[0] / v[2] + 1j * v[1] / v[2])
        w = self.forward.apply(z)
        if w.infinite:
            raise PropertyUndefined("image at infinity not representable in P^2")
        return ProjPoint([w.value.real, w.value.imag, 1.0])

    def _pentaspherical_circle(self, q: Quadric) -> Quadric:
        from .moebius import circle_from_quadric

        aa, a, b, cc = circle_from_quadric(q)
        u4 = np.array([1j * a, 1j * b, 1j * (aa - cc) / 2.0, (aa + cc) / 2.0],
                      dtype=complex)
        img = self.forward @ u4
        # rebuild the circle equation from the image coordinates
        aa2 = complex(-1j * img[2] + img[3])
        if abs(aa2) < 1e-12 * np.max(np.abs(img)):
            raise PropertyUndefined("image circle degenerates to a line")
        img = img / aa2
        a2 = complex(-1j * img[0]).real
        b2 = complex(-1j * img[1]).real
        cc2 = complex(1j * img[2] + img[3]).real
        return Quadric(np.array([[1.0, 0, -a2], [0, 1.0, -b2], [-a2, -b2, cc2]],
                                dtype=complex))

    def __repr__(self):
        return f"Transformation({self.kind}, {self.forward!r})"


class Configuration:
    """Finite, nonempty heterogeneous list of points/hyperplanes/quadrics."""

    __slots__ = ("elements",)

    def __init__(self, elements):
        elements = tuple(elements)
        if not elements:
            raise GeometryError("Configuration must be nonempty")
        for e in elements:
            if not isinstance(e, (ProjPoint, Hyperplane, Quadric)):
                raise GeometryError(f"unsupported configuration element {type(e)}")
        self.elements = elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __repr__(self):
        return f"Configuration({list(self.elements)!r})"


def transform_configuration(t: Transformation, c: Configuration) -> Configuration:
    return Configuration([t.apply(e) for e in c])


@dataclass(frozen=True)
class GroupDescriptor:
    """A named transformation group with sampler and membership predicate.

    ``sample`` must be a pure function of its seed.  ``contains`` is a
    numeric predicate with tolerance; "invariant" verdicts built on it
    are statistical statements, not proofs.
    """

    name: str
    dimension: int
    identity: Transformation
    sample: Callable[[int], Transformation]
    contains: Callable[..., bool]

    def compose(self, t1: Transformation, t2: Transformation) -> Transformation:
        return t1.compose(t2)

    def invert(self, t: Transformation) -> Transformation:
        return t.invert()


BUILTIN_GROUP_NAMES = (
    "euclidean_isometries",
    "principal",
    "affine",
    "projective",
    "moebius",
    "inversive_pentaspherical",
    "lie_sphere_extended",
)


def _affine_from_parts(linear: np.ndarray, translation: np.ndarray) -> ProjMap:
    d = linear.shape[0]
    m = np.eye(d + 1, dtype=complex)
    m[:d, :d] = linear
    m[:d, d] = translation
    return ProjMap(m)


def _normalized_affine(matrix: np.ndarray, tol: float):
    """Affine normal form m / m[-1,-1], or None when the map moves the
    hyperplane at infinity."""
    scale = float(np.max(np.abs(matrix)))
    d = matrix.shape[0] - 1
    if abs(matrix[d, d]) < 1e-12 * scale:
        return None
    m = matrix / matrix[d, d]
    if float(np.max(np.abs(m[d, :d]))) > tol * float(np.max(np.abs(m))):
        return None
    return m


def _contains_isometry(t: Transformation, tol: float = 1e-8) -> bool:
    if t.kind != "projective":
        return False
    m = _normalized_affine(t.forward.matrix, tol)
    if m is None:
        return False
    d = m.shape[0] - 1
    lin = m[:d, :d]
    gram = lin.T @ lin
    return bool(np.max(np.abs(gram - np.eye(d))) <= tol)


def _contains_similarity(t: Transformation, tol: float = 1e-8) -> bool:
    if t.kind != "projective":
        return False
    m = _normalized_affine(t.forward.matrix, tol)
    if m is None:
        return False
    d = m.shape[0] - 1
    lin = m[:d, :d]
    gram = lin.T @ lin
    mu = np.trace(gram) / d
    if abs(mu) <= tol:
        return False
    return bool(np.max(np.abs(gram - mu * np.eye(d))) <= tol * max(1.0, abs(mu)))


def _contains_affine(t: Transformation, tol: float = 1e-8) -> bool:
    if t.kind != "projective":
        return False
    m = _normalized_affine(t.forward.matrix, tol)
    if m is None:
        return False
    d = m.shape[0] - 1
    lin = m[:d, :d] / np.max(np.abs(m))
    return bool(abs(np.linalg.det(lin)) > 1e-10)


def _contains_projective(t: Transformation, tol: float = 1e-8) -> bool:
    return t.kind == "projective"


def _contains_moebius(t: Transformation, tol: float = 1e-8) -> bool:
    return t.kind == "moebius"


def _contains_form_preserving(n: int):
    def contains(t: Transformation, tol: float = 1e-8) -> bool:
        if t.kind != "pentaspherical" or t.forward.shape != (n, n):
            return False
        _, resid = proportionality(t.forward.T @ t.forward, np.eye(n, dtype=complex))
        return resid <= tol
    return contains


def _sample_isometry(dim: int):
    def sample(seed: int) -> Transformation:
        rng = rng_from(seed)
        lin = haar_orthogonal(rng, dim)
        tr = rng.uniform(-1.0, 1.0, size=dim)
        return Transformation("projective", _affine_from_parts(lin, tr), check=False)
    return sample


def _sample_similarity(dim: int):
    def sample(seed: int) -> Transformation:
        rng = rng_from(seed)
        lin = haar_orthogonal(rng, dim)
        scale = np.exp(rng.uniform(np.log(0.25), np.log(4.0)))
        tr = rng.uniform(-1.0, 1.0, size=dim)
        return Transformation("projective", _affine_from_parts(scale * lin, tr),
                              check=False)
    return sample


def _sample_affine(dim: int):
    def sample(seed: int) -> Transformation:
        rng = rng_from(seed)
        q1 = haar_orthogonal(rng, dim)
        q2 = haar_orthogonal(rng, dim)
        s = np.exp(rng.uniform(np.log(0.25), np.log(4.0), size=dim))
        tr = rng.uniform(-1.0, 1.0, size=dim)
        return Transformation("projective", _affine_from_parts(q1 @ np.diag(s) @ q2, tr),
                              check=False)
    return sample


def _sample_projective(dim: int):
    def sample(seed: int) -> Transformation:
        rng = rng_from(seed)
        while True:
            m = rng.uniform(-1.0, 1.0, size=(dim + 1, dim + 1))
            if np.linalg.cond(m) < 50.0:
                return Transformation("projective", ProjMap(m), check=False)
    return sample


def _sample_moebius(seed: int) -> Transformation:
    from .moebius import random_moebius
    return Transformation("moebius", random_moebius(seed), check=False)


def _sample_pentaspherical(n: int):
    def sample(seed: int) -> Transformation:
        m = random_inversive_map(seed) if n == 4 else random_lie_map(seed)
        return Transformation("pentaspherical", m, check=False)
    return sample


def builtin_group(name: str, dimension: int = 2) -> GroupDescriptor:
    """Construct one of the built-in groups.

    Metric groups (euclidean_isometries, principal) support dimensions
    2 and 3; affine and projective any dimension >= 1; the circle
    geometries (moebius, inversive_pentaspherical, lie_sphere_extended)
    are planar.  Samplers draw rotations from the Haar measure on the
    orthogonal group (so reflections appear with probability 1/2),
    translations componentwise uniform in [-1, 1], scales log-uniform in
    [1/4, 4]; the conjugating family of moebius maps appears with
    probability 1/2.
    """
    if name not in BUILTIN_GROUP_NAMES:
        raise GeometryError(f"unknown builtin group: {name}")
    if name in ("euclidean_isometries", "principal") and dimension not in (2, 3):
        raise GeometryError(f"{name} supports dimensions 2 and 3 only")
    if name in ("affine", "projective") and dimension < 1:
        raise GeometryError(f"{name} needs dimension >= 1")
    if name in ("moebius", "inversive_pentaspherical", "lie_sphere_extended") \
            and dimension != 2:
        raise GeometryError(f"{name} is planar (dimension 2)")

    proj_identity = Transformation(
        "projective", ProjMap(np.eye(dimension + 1, dtype=complex)), check=False)
    if name == "euclidean_isometries":
        return GroupDescriptor(name, dimension, proj_identity,
                               _sample_isometry(dimension), _contains_isometry)
    if name == "principal":
        return GroupDescriptor(name, dimension, proj_identity,
                               _sample_similarity(dimension), _contains_similarity)
    if name == "affine":
        return GroupDescriptor(name, dimension, proj_identity,
                               _sample_affine(dimension), _contains_affine)
    if name == "projective":
        return GroupDescriptor(name, dimension, proj_identity,
                               _sample_projective(dimension), _contains_projective)
    if name == "moebius":
        identity = Transformation("moebius", MoebiusMap(1, 0, 0, 1), check=False)
        return GroupDescriptor(name, dimension, identity, _sample_moebius,
                               _contains_moebius)
    n = 4 if name == "inversive_pentaspherical" else 5
    identity = Transformation("pentaspherical", np.eye(n, dtype=complex), check=False)
    return GroupDescriptor(name, dimension, identity, _sample_pentaspherical(n),
                           _contains_form_preserving(n))


@dataclass
class AxiomReport:
    """Outcome of randomized group-axiom checking.

    Failure lists hold (trial index, seed1, seed2) triples; re-running
    the sampler on the recorded seeds reproduces the witnesses.
    """

    group: str
    trials: int
    tol: float
    closure_failures: list = field(default_factory=list)
    inverse_failures: list = field(default_factory=list)
    identity_failures: list = field(default_factory=list)

    @property
    def total_failures(self) -> int:
        return (len(self.closure_failures) + len(self.inverse_failures)
                + len(self.identity_failures))

    @property
    def ok(self) -> bool:
        return self.total_failures == 0


def check_group_axioms(g: GroupDescriptor, seed: int, trials: int,
                       tol: float = 1e-8) -> AxiomReport:
    """Sample-based checks of closure, inverses and the identity.

    Per trial: two elements are drawn; their composition must pass
    ``contains`` (closure), the inverse of the first must pass
    ``contains`` and compose with it to the identity (inverse axiom,
    which for infinite groups is an extra requirement and not a
    consequence of closure), and composing with the group identity must
    not change the element.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    report = AxiomReport(group=g.name, trials=trials, tol=tol)
    if not g.contains(g.identity, tol):
        report.identity_failures.append((-1, 0, 0))
    for i in range(trials):
        s1 = mix_seed(seed, 2 * i)
        s2 = mix_seed(seed, 2 * i + 1)
        t1 = g.sample(s1)
        t2 = g.sample(s2)
        if not g.contains(t1.compose(t2), tol):
            report.closure_failures.append((i, s1, s2))
        inv = t1.invert()
        if not g.contains(inv, tol) or not t1.compose(inv).is_identity(1e-8):
            report.inverse_failures.append((i, s1, s2))
        if not g.identity.compose(t1).approx_equal(t1, 1e-8):
            report.identity_failures.append((i, s1, s2))
    return report


def stabilizes(t: Transformation, c: Configuration, tol: float = 1e-8) -> bool:
    """True iff every element of the configuration is mapped to itself up
    to scale (quadrics compared as matrices up to scale)."""
    for e in c:
        img = t.apply(e)
        if isinstance(e, ProjPoint):
            ok = equal_up_to_scale(img.coords, e.coords, tol)
        elif isinstance(e, Hyperplane):
            ok = equal_up_to_scale(img.coeffs, e.coeffs, tol)
        else:
            ok = equal_up_to_scale(img.matrix, e.matrix, tol)
        if not ok:
            return False
    return True


@dataclass(frozen=True)
class Invariant:
    """No counterexample in the executed trials (statistical only)."""

    trials_executed: int
    trials_skipped: int
    tol: float

    @property
    def invariant(self) -> bool:
        return True


@dataclass(frozen=True)
class Violated:
    """A reproducible counterexample to invariance."""

    trial: int
    config_seed: int
    transform_seed: int
    before: object
    after: object
    config: Configuration
    transformation: Transformation
    trials_executed: int
    tol: float

    @property
    def invariant(self) -> bool:
        return False


def invariance_test(prop: Callable[[Configuration], object], g: GroupDescriptor,
                    config_sampler: Callable[[int], Configuration], seed: int,
                    trials: int, tol: float = 1e-9):
    """Randomized falsification of "prop is invariant under g".

    Numeric property values are compared with relative tolerance;
    boolean values must match exactly.  A property may raise
    PropertyUndefined to skip a trial; if more than 90% of trials are
    skipped the sampler does not fit the property and an error is
    raised.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    skipped = 0
    executed = 0
    for i in range(trials):
        cseed = mix_seed(seed, 3 * i)
        tseed = mix_seed(seed, 3 * i + 1)
        config = config_sampler(cseed)
        t = g.sample(tseed)
        try:
            before = prop(config)
            image = transform_configuration(t, config)
            after = prop(image)
        except PropertyUndefined:
            skipped += 1
            continue
        executed += 1
        if isinstance(before, (bool, np.bool_)) or isinstance(after, (bool, np.bool_)):
            agree = bool(before) == bool(after)
        else:
            b, a = complex(before), complex(after)
            agree = abs(b - a) <= tol * max(1.0, abs(b), abs(a))
        if not agree:
            return Violated(trial=i, config_seed=cseed, transform_seed=tseed,
                            before=before, after=after, config=config,
                            transformation=t, trials_executed=executed, tol=tol)
    if skipped > 0.9 * trials:
        raise GeometryError(
            f"property undefined on {skipped}/{trials} samples (sampler mismatch)")
    return Invariant(trials_executed=executed, trials_skipped=skipped, tol=tol)


_CIRCULAR_PLUS = np.array([1.0, 1.0j, 0.0])
_CIRCULAR_MINUS = np.array([1.0, -1.0j, 0.0])


def is_similarity_via_circular_points(m, tol: float = 1e-10) -> bool:
    """Similarity test by the fixed-pair characterization: a real plane
    projectivity is a similarity (possibly orientation-reversing) exactly
    when it maps the pair of circular points at infinity to itself as a
    set.  Reflections swap the two points but keep the pair."""
    mat = np.asarray(m.matrix if isinstance(m, ProjMap) else m, dtype=complex)
    if mat.shape != (3, 3):
        raise GeometryError("expected a 3x3 real matrix")
    if float(np.max(np.abs(mat.imag))) > 0:
        raise GeometryError("expected a real matrix")
    scale = float(np.max(np.abs(mat)))
    if scale == 0 or abs(np.linalg.det(mat / scale)) < 1e-12:
        raise GeometryError("matrix is singular")
    plus = mat @ _CIRCULAR_PLUS
    minus = mat @ _CIRCULAR_MINUS
    keeps = (equal_up_to_scale(plus, _CIRCULAR_PLUS, tol)
             and equal_up_to_scale(minus, _CIRCULAR_MINUS, tol))
    swaps = (equal_up_to_scale(plus, _CIRCULAR_MINUS, tol)
             and equal_up_to_scale(minus, _CIRCULAR_PLUS, tol))
    return keeps or swaps


def orbit_sample(c: Configuration, g: GroupDescriptor, seed: int,
                 count: int) -> list:
    """Deterministic sample of the orbit (the "body") of a configuration.

    Configurations fixed by a normal subgroup of g yield degenerate
    orbits that cannot separate the group elements; no automated
    detection of that situation is attempted here.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    return [transform_configuration(g.sample(mix_seed(seed, i)), c)
            for i in range(count)]


def sample_quadric_preserving_map(q: Quadric, seed: int) -> ProjMap:
    """Seeded projectivity preserving a nondegenerate quadric (exactly, up
    to rounding); used to exercise conjugation invariance of projective
    measurements."""
    from .numerics import sample_form_preserving
    return ProjMap(sample_form_preserving(q.matrix, seed))
