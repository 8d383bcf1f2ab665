"""Quadratic forms Q_{l,j} on GF(4)^{2l} and their quadrics.

Q_{l,j} is the sum of ``j`` elliptic blocks ``alpha*x^2 + x*y + y^2`` followed
by ``l - j`` hyperbolic blocks ``x*y``.  Vectors are sequences (or numpy rows)
of GF(4) codes.
"""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import ALPHA, GF4_MUL, GF4_SQ, gf4_inv, gf4_mul

Q = 4


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class FormSpec:
    ell: int
    j: int

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError(f"ell must be >= 1, got {self.ell}")
        if not 0 <= self.j <= self.ell:
            raise ValueError(f"need 0 <= j <= ell, got j={self.j}, ell={self.ell}")

    @property
    def dim(self) -> int:
        return 2 * self.ell

    @property
    def is_elliptic(self) -> bool:
        return self.j % 2 == 1


def _check_len(spec: FormSpec, v: Sequence[int]) -> None:
    if len(v) != spec.dim:
        raise DimensionError(f"Q_{{{spec.ell},{spec.j}}} takes {spec.dim} coordinates, got {len(v)}")


def q_eval(spec: FormSpec, v: Sequence[int]) -> int:
    _check_len(spec, v)
    acc = 0
    for i in range(spec.ell):
        x, y = v[2 * i], v[2 * i + 1]
        term = gf4_mul(x, y)
        if i < spec.j:
            term ^= gf4_mul(ALPHA, gf4_mul(x, x)) ^ gf4_mul(y, y)
        acc ^= term
    return acc


def q_values(spec: FormSpec, vectors: np.ndarray) -> np.ndarray:
    """Vectorized ``q_eval`` over the rows of an (N, 2l) code array."""
    vectors = np.asarray(vectors)
    if vectors.shape[-1] != spec.dim:
        raise DimensionError(f"expected rows of length {spec.dim}, got {vectors.shape[-1]}")
    acc = np.zeros(vectors.shape[:-1], dtype=np.uint8)
    for i in range(spec.ell):
        x, y = vectors[..., 2 * i], vectors[..., 2 * i + 1]
        acc ^= GF4_MUL[x, y]
        if i < spec.j:
            acc ^= GF4_MUL[ALPHA, GF4_SQ[x]] ^ GF4_SQ[y]
    return acc


def all_vectors(m: int) -> np.ndarray:
    """Every vector of GF(4)^m as a (4^m, m) array; row r has coordinate i = digit i of r in base 4."""
    idx = np.arange(Q**m, dtype=np.int64)
    return ((idx[:, None] >> (2 * np.arange(m))) & 3).astype(np.uint8)


def zero_count(spec: FormSpec) -> int:
    """Number of vectors (zero included) with Q = 0."""
    return int(np.count_nonzero(q_values(spec, all_vectors(spec.dim)) == 0))


def bilinear(spec: FormSpec, u: Sequence[int], v: Sequence[int]) -> int:
    """Polar form ``Q(u+v) - Q(u) - Q(v)``."""
    _check_len(spec, u)
    _check_len(spec, v)
    s = [a ^ b for a, b in zip(u, v)]
    return q_eval(spec, s) ^ q_eval(spec, u) ^ q_eval(spec, v)


def symplectic(u: Sequence[int], v: Sequence[int]) -> int:
    """Closed form ``sum x_{2i-1} x'_{2i} + x_{2i} x'_{2i-1}``."""
    acc = 0
    for i in range(0, len(u), 2):
        acc ^= gf4_mul(u[i], v[i + 1]) ^ gf4_mul(u[i + 1], v[i])
    return acc


def classify(spec: FormSpec) -> str:
    """'elliptic' or 'hyperbolic'; parity rule cross-checked against the zero count."""
    by_parity = "elliptic" if spec.is_elliptic else "hyperbolic"
    n = zero_count(spec)
    ell = spec.ell
    counts = {
        "elliptic": Q ** (2 * ell - 1) - (Q - 1) * Q ** (ell - 1),
        "hyperbolic": Q ** (2 * ell - 1) + (Q - 1) * Q ** (ell - 1),
    }
    by_count = [name for name, c in counts.items() if c == n]
    if by_count != [by_parity]:
        raise AssertionError(
            f"Q_{{{ell},{spec.j}}}: parity says {by_parity} but zero count {n} matches {by_count}"
        )
    return by_parity


# --- GF(4) linear algebra -------------------------------------------------


def gf4_rank(rows: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = gf4_inv(m[rank][col])
        m[rank] = [gf4_mul(inv, x) for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                c = m[r][col]
                m[r] = [x ^ gf4_mul(c, y) for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def unit_vector(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if t == i else 0 for t in range(n))


def gram_matrix(spec: FormSpec) -> list[list[int]]:
    n = spec.dim
    basis = [unit_vector(n, i) for i in range(n)]
    return [[bilinear(spec, u, v) for v in basis] for u in basis]


def radical_dimension(spec: FormSpec) -> int:
    """Dimension of ``{w : B(w, .) = 0}``; zero means B is nondegenerate."""
    return spec.dim - gf4_rank(gram_matrix(spec))


# --- the substitutions -----------------------------------------------------


def equivalence_map(spec: FormSpec, v: Sequence[int]) -> tuple[int, ...]:
    """Linear substitution with ``Q_{l,j}(equivalence_map(v)) == Q_{l,j-2}(v)``.

    Only coordinates ``2j-3 .. 2j`` (1-based) move.
    """
    if spec.j < 2:
        raise ValueError(f"equivalence map needs j >= 2, got j={spec.j}")
    _check_len(spec, v)
    out = list(v)
    p = 2 * spec.j - 4  # 0-based index of x_{2j-3}
    a, b, c, d = v[p : p + 4]
    aa = gf4_mul(ALPHA, a)
    out[p] = a ^ c ^ d
    out[p + 1] = aa ^ b
    out[p + 2] = c ^ d
    out[p + 3] = aa ^ b ^ d
    return tuple(out)


def equivalence_map_inverse(spec: FormSpec, v: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`equivalence_map`: ``Q_{l,j-2}(result) == Q_{l,j}(v)``."""
    if spec.j < 2:
        raise ValueError(f"equivalence map needs j >= 2, got j={spec.j}")
    _check_len(spec, v)
    out = list(v)
    p = 2 * spec.j - 4
    x1, x2, x3, x4 = v[p : p + 4]
    a = x1 ^ x3
    b = x2 ^ gf4_mul(ALPHA, a)
    d = x4 ^ x2
    c = x3 ^ d
    out[p : p + 4] = [a, b, c, d]
    return tuple(out)


def pair_flip(spec: FormSpec, v: Sequence[int], i: int) -> tuple[int, ...]:
    """Replace ``x_{2i}`` by ``x_{2i-1} + x_{2i}`` (1-based block ``i <= j``)."""
    if not 1 <= i <= spec.j:
        raise ValueError(f"block index must satisfy 1 <= i <= j={spec.j}, got {i}")
    _check_len(spec, v)
    out = list(v)
    out[2 * i - 1] = v[2 * i - 2] ^ v[2 * i - 1]
    return tuple(out)


def restricted_zero_count(spec: FormSpec) -> int:
    """Zeros (zero vector included) of ``Q(0, x_2, ..., x_{2l})`` over GF(4)^{2l-1}."""
    return int(np.count_nonzero(restricted_values(spec, all_vectors(spec.dim - 1)) == 0))


def restricted_values(spec: FormSpec, vectors: np.ndarray) -> np.ndarray:
    vectors = np.asarray(vectors)
    pad = np.zeros(vectors.shape[:-1] + (1,), dtype=vectors.dtype)
    return q_values(spec, np.concatenate([pad, vectors], axis=-1))


# --- projective geometry ---------------------------------------------------


def projective_points(m: int) -> np.ndarray:
    """Points of PG(m-1, 4), one row each.

    Each point is the lexicographically least (as a coordinate tuple of codes)
    of its three nonzero scalar multiples; rows come out in lexicographic order.
    """
    reps = []
    for v in itertools.product(range(4), repeat=m):
        if not any(v):
            continue
        multiples = [tuple(gf4_mul(s, x) for x in v) for s in (1, 2, 3)]
        if v == min(multiples):
            reps.append(v)
    return np.array(reps, dtype=np.uint8).reshape(-1, m)


def quadric_points(form: Callable[[np.ndarray], np.ndarray], m: int) -> np.ndarray:
    pts = projective_points(m)
    return pts[form(pts) == 0]


def elliptic_or_hyperbolic_quadric(spec: FormSpec) -> np.ndarray:
    return quadric_points(lambda x: q_values(spec, x), spec.dim)


def parabolic_section(spec: FormSpec) -> np.ndarray:
    """Quadric of ``Q(0, x_2, ..., x_{2l})`` in PG(2l-2, 4)."""
    return quadric_points(lambda x: restricted_values(spec, x), spec.dim - 1)


@dataclass
class HyperplaneProfile:
    m: int
    histogram: dict[int, int] = field(default_factory=dict)

    @property
    def hyperplanes(self) -> int:
        return sum(self.histogram.values())

    @property
    def incidences(self) -> int:
        return sum(size * mult for size, mult in self.histogram.items())

    def __eq__(self, other):
        if isinstance(other, HyperplaneProfile):
            return self.m == other.m and self.histogram == other.histogram
        if isinstance(other, dict):
            return self.histogram == other
        return NotImplemented


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """GF(4) dot products of rows of ``a`` (H, m) against rows of ``b`` (N, m) -> (H, N)."""
    acc = np.zeros((a.shape[0], b.shape[0]), dtype=np.uint8)
    for i in range(a.shape[1]):
        acc ^= GF4_MUL[a[:, i][:, None], b[:, i][None, :]]
    return acc


def hyperplane_profile(points: np.ndarray, m: int | None = None, workers: int = 1, chunk: int = 512) -> HyperplaneProfile:
    """Histogram of ``|H cap points|`` over every hyperplane H of PG(m-1, 4)."""
    points = np.asarray(points, dtype=np.uint8)
    if m is None:
        m = points.shape[1]
    normals = projective_points(m)

    def work(lo: int) -> Counter:
        hit = _dot(normals[lo : lo + chunk], points) == 0
        return Counter(hit.sum(axis=1).tolist())

    starts = range(0, len(normals), chunk)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(lo) for lo in starts]
    total: Counter = Counter()
    for p in parts:
        total.update(p)
    return HyperplaneProfile(m, dict(sorted(total.items())))


def n_hyperplanes(m: int) -> int:
    return (Q**m - 1) // (Q - 1)


def _two_size_multiplicities(m: int, n: int, s1: int, s2: int) -> dict[int, int]:
    # count equation and point-hyperplane incidence equation
    through_point = n_hyperplanes(m - 1)
    total = n_hyperplanes(m)
    num = n * through_point - s2 * total
    x, rem = divmod(num, s1 - s2)
    if rem:
        raise ArithmeticError("non-integral hyperplane multiplicity")
    return dict(sorted({s1: x, s2: total - x}.items()))


def predicted_profile(spec: FormSpec) -> HyperplaneProfile:
    """Hyperplane profile of the quadric of Q_{l,j} from the classical closed forms."""
    ell, q = spec.ell, Q
    m = 2 * ell
    if spec.is_elliptic:
        n = (q**ell + 1) * (q ** (ell - 1) - 1) // (q - 1)
        if n == 0:
            # l = 1: the elliptic quadric of PG(1, 4) is empty
            return HyperplaneProfile(m, {0: n_hyperplanes(m)})
        a = 1 + q * (q ** (ell - 1) + 1) * (q ** (ell - 2) - 1) // (q - 1)
        b = (q ** (2 * ell - 2) - 1) // (q - 1)
        sizes = (a, b)
    else:
        n = (q**ell - 1) * (q ** (ell - 1) + 1) // (q - 1)
        # character values q^l - (q^{l-1}+1) and -(q^{l-1}+1), size = (value + n) / q
        sizes = tuple((val + n) // q for val in (q**ell - q ** (ell - 1) - 1, -(q ** (ell - 1)) - 1))
    return HyperplaneProfile(m, _two_size_multiplicities(m, n, *sizes))


def predicted_parabolic_profile(ell: int) -> HyperplaneProfile:
    """Three-size profile of a nonsingular parabolic quadric in PG(2l-2, 4)."""
    if ell < 2:
        raise ValueError("parabolic sections need l >= 2")
    q = Q
    t = (q ** (2 * ell - 3) - 1) // (q - 1)
    T = (q ** (2 * ell - 2) - 1) // (q - 1)
    e, E = t - q ** (ell - 2), (q ** (2 * ell - 2) - q ** (ell - 1)) // 2
    h, H = t + q ** (ell - 2), (q ** (2 * ell - 2) + q ** (ell - 1)) // 2
    return HyperplaneProfile(2 * ell - 1, dict(sorted({t: T, e: E, h: H}.items())))


def projective_to_pds_params(n: int, m: int, h1: int, h2: int, q: int = Q) -> tuple[int, int, int, int]:
    """PDS parameters of the vector set of a projective (n, m, h1, h2) set."""
    if h1 == h2:
        raise ValueError("a projective two-intersection set needs h1 != h2")
    prod = (q * h1 - n) * (q * h2 - n)
    lam = (q - 1) * n + prod + q * (h1 + h2) - 2 * n
    mu = (q - 1) * n + prod
    return q**m, (q - 1) * n, lam, mu
