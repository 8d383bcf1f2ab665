"""Teichmuller-lift bijection F_k and the candidate sets D_{l,j,k}.

Group elements of Z4^{2k} x Z2^{4l-4k} are packed mixed-radix integers,
least significant digit first: ring coordinate ``i < k`` owns digits
``(a, b)`` of ``a + b*xi``, every remaining GF(4) coordinate owns the bits
``(b0, b1)`` of its code.  With ``k = 0`` the packing is the plain base-4
reading of the field vector.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import algebra
from .algebra import Gr42, pi, teich_decompose, teich_lift, teich_reconstruct
from .forms import DimensionError, FormSpec, all_vectors, equivalence_map_inverse, q_values


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class GroupShape:
    ell: int
    k: int

    def __post_init__(self):
        if self.ell < 1 or not 0 <= self.k <= self.ell:
            raise ParameterError(f"need 0 <= k <= ell and ell >= 1, got ell={self.ell}, k={self.k}")

    @property
    def order(self) -> int:
        return 4 ** (2 * self.ell)

    @property
    def n_z4(self) -> int:
        return 2 * self.k

    @property
    def n_z2(self) -> int:
        return 4 * self.ell - 4 * self.k

    @cached_property
    def radices(self) -> np.ndarray:
        return np.array([4] * self.n_z4 + [2] * self.n_z2, dtype=np.int64)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.concatenate([[1], np.cumprod(self.radices)[:-1]]).astype(np.int64)

    @cached_property
    def high_mask(self) -> int:
        """Top bit of every digit field in the packed integer (both bits of a Z2 pair count)."""
        m = sum(1 << (2 * i + 1) for i in range(self.n_z4))
        return m | (((1 << self.n_z2) - 1) << (2 * self.n_z4))

    def add_packed(self, x, y):
        """Group addition directly on packed integers, no unpacking.

        Within a Z4 field the low bits add with their carry landing in the
        (masked-out) high bit; Z2 fields have no low part and reduce to XOR.
        """
        h = self.high_mask
        x, y = np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)
        return ((x & ~h) + (y & ~h)) ^ ((x ^ y) & h)

    def describe(self) -> str:
        parts = []
        if self.n_z4:
            parts.append(f"Z4^{self.n_z4}")
        if self.n_z2:
            parts.append(f"Z2^{self.n_z2}")
        return " x ".join(parts)

    def pack(self, digits) -> np.ndarray | int:
        d = np.asarray(digits, dtype=np.int64)
        out = d @ self.weights
        return int(out) if d.ndim == 1 else out

    def unpack(self, packed) -> np.ndarray:
        p = np.asarray(packed, dtype=np.int64)
        return (p[..., None] // self.weights) % self.radices

    def add(self, x, y):
        return self.pack((self.unpack(x) + self.unpack(y)) % self.radices)

    def sub(self, x, y):
        return self.pack((self.unpack(x) - self.unpack(y)) % self.radices)

    def negate(self, x):
        return self.pack(-self.unpack(x) % self.radices)


def _check_vec(shape: GroupShape, n: int) -> None:
    if n != 2 * shape.ell:
        raise DimensionError(f"F_k on l={shape.ell} takes {2 * shape.ell} coordinates, got {n}")


def f_k(shape: GroupShape, v: Sequence[int]) -> int:
    """Packed image of a field vector under F_k."""
    _check_vec(shape, len(v))
    digits = []
    for i in range(shape.k):
        r = teich_reconstruct(teich_lift(v[2 * i]), teich_lift(v[2 * i + 1]))
        digits += [r.a, r.b]
    for x in v[2 * shape.k :]:
        digits += [x & 1, x >> 1]
    return shape.pack(digits)


def f_k_inverse(shape: GroupShape, g: int) -> tuple[int, ...]:
    digits = [int(d) for d in shape.unpack(g)]
    out = []
    for i in range(shape.k):
        beta1, beta2 = teich_decompose(Gr42(digits[2 * i], digits[2 * i + 1]))
        out += [pi(beta1), pi(beta2)]
    rest = digits[shape.n_z4 :]
    out += [rest[t] | (rest[t + 1] << 1) for t in range(0, len(rest), 2)]
    return tuple(out)


def f_k_many(shape: GroupShape, vectors: np.ndarray) -> np.ndarray:
    """Vectorized F_k over rows of an (N, 2l) code array."""
    x = np.asarray(vectors, dtype=np.int64)
    _check_vec(shape, x.shape[-1])
    cols = []
    for i in range(shape.k):
        lo, hi = x[..., 2 * i], x[..., 2 * i + 1]
        cols.append((algebra.LIFT_A[lo] + 2 * algebra.LIFT_A[hi]) % 4)
        cols.append((algebra.LIFT_B[lo] + 2 * algebra.LIFT_B[hi]) % 4)
    for c in range(2 * shape.k, 2 * shape.ell):
        cols.append(x[..., c] & 1)
        cols.append(x[..., c] >> 1)
    return shape.pack(np.stack(cols, axis=-1))


def _decompose_tables():
    # index a + 4b -> (pi(beta1), pi(beta2))
    t1 = np.zeros(16, dtype=np.int64)
    t2 = np.zeros(16, dtype=np.int64)
    for r in algebra.GR42:
        b1, b2 = teich_decompose(r)
        t1[r.index], t2[r.index] = pi(b1), pi(b2)
    return t1, t2


_DEC1, _DEC2 = _decompose_tables()


def f_k_inverse_many(shape: GroupShape, packed) -> np.ndarray:
    d = shape.unpack(packed)
    cols = []
    for i in range(shape.k):
        idx = d[..., 2 * i] + 4 * d[..., 2 * i + 1]
        cols += [_DEC1[idx], _DEC2[idx]]
    for t in range(shape.n_z4, shape.n_z4 + shape.n_z2, 2):
        cols.append(d[..., t] | (d[..., t + 1] << 1))
    return np.stack(cols, axis=-1).astype(np.uint8)


# --- candidates ------------------------------------------------------------


def pds_params(ell: int, j: int) -> tuple[tuple[int, int, int, int], int]:
    """Expected ``((v, k, lambda, mu), epsilon)`` for D_{l,j,k}; epsilon = -1 for odd j."""
    a, b = 4 ** (2 * ell - 2), 4 ** (ell - 1)
    v = 4 ** (2 * ell)
    if j % 2:
        return (v, (4**ell + 1) * (b - 1), a - 3 * b - 2, a - b), -1
    return (v, (4**ell - 1) * (b + 1), a + 3 * b - 2, a + b), 1


@dataclass
class PdsCandidate:
    shape: GroupShape
    j: int
    elements: np.ndarray
    expected_params: tuple[int, int, int, int]
    epsilon: int
    notes: list[str] = field(default_factory=list)

    @property
    def ell(self) -> int:
        return self.shape.ell

    @property
    def k(self) -> int:
        return self.shape.k

    @property
    def degenerate(self) -> bool:
        return len(self.elements) == 0

    def __len__(self) -> int:
        return len(self.elements)

    def indicator(self) -> np.ndarray:
        ind = np.zeros(self.shape.order, dtype=bool)
        ind[self.elements] = True
        return ind

    def check_structure(self) -> None:
        """Raise ValueError unless elements are sorted, distinct, identity-free and closed under negation."""
        e = np.asarray(self.elements, dtype=np.int64)
        if e.size and (np.any(np.diff(e) <= 0) or e[0] < 0 or e[-1] >= self.shape.order):
            raise ValueError("elements must be strictly ascending and inside the group")
        if e.size and e[0] == 0:
            raise ValueError("identity element lies in D")
        neg = np.sort(self.shape.negate(e)) if e.size else e
        if not np.array_equal(neg, e):
            raise ValueError("D is not closed under negation")

    def replace_elements(self, elements) -> "PdsCandidate":
        return PdsCandidate(self.shape, self.j, np.unique(np.asarray(elements, dtype=np.int64)),
                            self.expected_params, self.epsilon, list(self.notes))

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "j": self.j,
            "k": self.k,
            "epsilon": self.epsilon,
            "expected_params": list(self.expected_params),
            "elements": [int(x) for x in self.elements],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "PdsCandidate":
        shape = GroupShape(int(d["ell"]), int(d["k"]))
        return cls(shape, int(d["j"]), np.asarray(d["elements"], dtype=np.int64),
                   tuple(int(x) for x in d["expected_params"]), int(d["epsilon"]))

    @classmethod
    def from_json(cls, text: str) -> "PdsCandidate":
        return cls.from_dict(json.loads(text))


def _validate(ell: int, j: int, k: int) -> None:
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    if not 0 <= k <= j <= ell:
        raise ParameterError(f"need 0 <= k <= j <= ell, got ell={ell}, j={j}, k={k}")


def build_d(ell: int, j: int, k: int) -> PdsCandidate:
    """Nonzero zeros of Q_{l,j} pushed through F_k, sorted by packed value."""
    _validate(ell, j, k)
    shape = GroupShape(ell, k)
    spec = FormSpec(ell, j)
    vecs = all_vectors(spec.dim)[1:]  # row 0 is the zero vector
    zeros = vecs[q_values(spec, vecs) == 0]
    elements = np.sort(f_k_many(shape, zeros))
    params, eps = pds_params(ell, j)
    cand = PdsCandidate(shape, j, elements, params, eps)
    if cand.degenerate:
        cand.notes.append("degenerate: empty set, expected size 0")
    return cand


def phi(shape: GroupShape, j: int, packed) -> np.ndarray:
    """Automorphism of the group moving only field coordinates 2j-3..2j; needs k <= j-2."""
    if not 0 <= shape.k <= j - 2 or j > shape.ell:
        raise ParameterError(f"phi needs 0 <= k <= j-2 <= l-2, got l={shape.ell}, j={j}, k={shape.k}")
    spec = FormSpec(shape.ell, j)
    vecs = f_k_inverse_many(shape, np.atleast_1d(packed))
    moved = np.array([equivalence_map_inverse(spec, tuple(int(x) for x in v)) for v in vecs],
                     dtype=np.uint8).reshape(vecs.shape)
    return f_k_many(shape, moved)


def apply_phi(candidate: PdsCandidate) -> PdsCandidate:
    """Image of D_{l,j,k} under :func:`phi`; equals D_{l,j-2,k}."""
    ell, j = candidate.ell, candidate.j
    images = phi(candidate.shape, j, candidate.elements) if len(candidate) else candidate.elements
    params, eps = pds_params(ell, j - 2)
    return PdsCandidate(candidate.shape, j - 2, np.sort(images), params, eps)
