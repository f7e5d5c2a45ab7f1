"""Shared numeric helpers: seeding, scale-free comparisons, matrix sampling.

Scalars throughout the package are complex floats.  Constructors reject
non-finite values; all geometric comparisons are scale-free (projective)
and use explicit tolerances -- there is no ambient global state.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

#: default relative tolerance for equality-up-to-scale decisions
DEFAULT_TOL = 1e-10


class GeometryError(Exception):
    """Numeric-geometric failure: bad input, degenerate configuration."""


class DimensionMismatch(GeometryError):
    """Operands live in different ambient dimensions."""


def mix_seed(seed: int, index: int) -> int:
    """Derive a child seed from (seed, index) with the splitmix64 finalizer.

    This is the documented splitting rule used by every randomized routine
    in the package: trial k of a run seeded with s uses mix_seed(s, k).
    """
    z = (int(seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def rng_from(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def ensure_finite(arr: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(arr.view(np.float64) if arr.dtype == complex else arr)):
        raise GeometryError(f"{what}: non-finite entries")
    return arr


def as_complex_array(data, what: str = "array") -> np.ndarray:
    arr = np.array(data, dtype=complex)
    return ensure_finite(arr, what)


def equal_up_to_scale(v, w, tol: float = DEFAULT_TOL) -> bool:
    """Scale-free equality of coordinate vectors (or flattened matrices).

    Both vectors are normalized by the coordinate at which the first one
    attains its largest magnitude, then compared with relative tolerance.
    """
    v = np.asarray(v, dtype=complex).ravel()
    w = np.asarray(w, dtype=complex).ravel()
    if v.shape != w.shape:
        return False
    k = int(np.argmax(np.abs(v)))
    if abs(v[k]) == 0.0:
        return False
    wmax = float(np.max(np.abs(w)))
    if wmax == 0.0 or abs(w[k]) < 0.5 * wmax:
        return False
    vn = v / v[k]
    wn = w / w[k]
    return float(np.max(np.abs(vn - wn))) <= tol * max(1.0, float(np.max(np.abs(vn))))


def proportionality(a, b):
    """Best least-squares factor mu with a ~ mu*b plus the relative residual."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    denom = np.vdot(b, b)
    if abs(denom) == 0.0:
        return 0.0 + 0.0j, np.inf
    mu = np.vdot(b, a) / denom
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return mu, 0.0
    resid = np.linalg.norm(a - mu * b) / scale
    return mu, float(resid)


def normalize_leading(v) -> np.ndarray:
    """Projective normal form: divide by the largest-magnitude coordinate."""
    v = np.asarray(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    if abs(v[k]) == 0.0:
        raise GeometryError("cannot normalize the zero vector")
    return v / v[k]


def lex_key(v) -> tuple:
    """Deterministic ordering key on projective vectors (normalized, then
    lexicographic on interleaved real/imaginary parts, rounded to kill
    noise in the last bits)."""
    vn = normalize_leading(v)
    parts = []
    for z in vn:
        parts.append(round(float(z.real), 9))
        parts.append(round(float(z.imag), 9))
    return tuple(parts)


def haar_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-uniform sample from O(n) (both components, so reflections occur
    with probability 1/2 for n >= 1)."""
    g = rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d


def random_antisymmetric(rng: np.random.Generator, n: int, scale: float = 0.8,
                         complex_entries: bool = False) -> np.ndarray:
    if complex_entries:
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    else:
        g = rng.normal(size=(n, n))
    a = (g - g.T) / 2.0
    nrm = np.linalg.norm(a)
    if nrm > 0:
        a *= scale / nrm
    return a


def indefinite_orthogonal_sample(rng: np.random.Generator, p: int, q: int,
                                 reflections: bool = True) -> np.ndarray:
    """Sample from O(p, q): exp(G A) with A antisymmetric lands in the
    identity component; optional diagonal sign flips reach the others."""
    from scipy.linalg import expm

    n = p + q
    g = np.diag(np.concatenate([np.ones(p), -np.ones(q)]))
    m = expm(g @ random_antisymmetric(rng, n))
    if reflections:
        if p >= 1 and rng.random() < 0.5:
            flip = np.eye(n)
            flip[0, 0] = -1.0
            m = m @ flip
        if q >= 1 and rng.random() < 0.5:
            flip = np.eye(n)
            flip[n - 1, n - 1] = -1.0
            m = m @ flip
    return m


def _gram_candidates(n: int) -> list:
    cands = [np.eye(n, dtype=complex)[:, k] for k in range(n)]
    # mixing combinations rescues bases whose vectors are all isotropic
    for k in range(n):
        for j in range(k + 1, n):
            cands.append((cands[k] + cands[j]) / np.sqrt(2))
    return cands


def symmetric_gram_basis(qmat: np.ndarray) -> np.ndarray:
    """Basis B with B^T Q B = I for a nondegenerate complex symmetric Q.

    Gram-Schmidt with respect to the bilinear (not Hermitian) form, with
    pivoting on the largest self-pairing to dodge isotropic directions.
    """
    qmat = np.asarray(qmat, dtype=complex)
    n = qmat.shape[0]
    cands = _gram_candidates(n)
    basis = []
    for _ in range(n):
        best, best_val = None, -1.0
        for c in cands:
            v = c.copy()
            for b in basis:
                v = v - (b @ qmat @ v) * b
            val = abs(v @ qmat @ v)
            nv = np.linalg.norm(v)
            if nv > 1e-12 and val / nv**2 > best_val:
                best, best_val = v, val / nv**2
        if best is None or best_val < 1e-10:
            raise GeometryError("form is (numerically) degenerate")
        v = best
        basis.append(v / np.sqrt(complex(v @ qmat @ v)))
    return np.column_stack(basis)


def sample_form_preserving(qmat: np.ndarray, seed: int,
                           fixing: np.ndarray | None = None) -> np.ndarray:
    """Random M with M^T Q M = Q for a complex symmetric nondegenerate Q.

    With ``fixing`` given (a non-isotropic vector a), M additionally fixes
    a up to sign, i.e. it samples the stabilizer of [a] inside the
    orthogonal group of Q.
    """
    qmat = np.asarray(qmat, dtype=complex)
    n = qmat.shape[0]
    rng = rng_from(seed)
    if fixing is None:
        b = symmetric_gram_basis(qmat)
        o = _complex_orthogonal(rng, n)
        return b @ o @ np.linalg.inv(b)
    a = np.asarray(fixing, dtype=complex)
    qa = complex(a @ qmat @ a)
    if abs(qa) < 1e-12 * np.linalg.norm(a) ** 2 * np.linalg.norm(qmat):
        raise GeometryError("fixed vector is isotropic for the form")
    a0 = a / np.sqrt(qa)
    # orthonormalize a complement of a0 w.r.t. the form, pivoting greedily
    basis = [a0]
    cands = _gram_candidates(n)
    while len(basis) < n:
        best, best_val = None, -1.0
        for c in cands:
            v = c.copy()
            for b in basis:
                v = v - (b @ qmat @ v) * b
            nv = np.linalg.norm(v)
            if nv <= 1e-12:
                continue
            val = abs(v @ qmat @ v) / nv**2
            if val > best_val:
                best, best_val = v, val
        if best is None or best_val < 1e-10:
            raise GeometryError("could not complete a form-orthonormal basis")
        basis.append(best / np.sqrt(complex(best @ qmat @ best)))
    b = np.column_stack(basis)
    block = np.zeros((n, n), dtype=complex)
    block[0, 0] = 1.0
    block[1:, 1:] = _complex_orthogonal(rng, n - 1)
    return b @ block @ np.linalg.inv(b)


def _complex_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    from scipy.linalg import expm

    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    return expm(random_antisymmetric(rng, n, complex_entries=True))
