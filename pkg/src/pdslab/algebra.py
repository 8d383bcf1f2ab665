"""Exact arithmetic in GF(4) and the Galois ring GR(4,2).

GF(4) elements are two-bit integer codes ``b1*alpha + b0 -> 2*b1 + b0``, so
``0, 1, alpha, alpha^2`` are ``0, 1, 2, 3``.  Addition is XOR.

GR(4,2) = Z4[xi]/(xi^2 + xi + 1) elements are pairs ``(a, b)`` meaning
``a + b*xi`` with ``a, b`` in Z4.  The reduction map ``pi`` sends ``xi`` to
``alpha``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

ZERO, ONE, ALPHA, ALPHA2 = 0, 1, 2, 3
GF4 = (ZERO, ONE, ALPHA, ALPHA2)

# discrete log base alpha of the nonzero codes
_LOG = {ONE: 0, ALPHA: 1, ALPHA2: 2}
_EXP = (ONE, ALPHA, ALPHA2)


def _gf4_mul_slow(x: int, y: int) -> int:
    if x == 0 or y == 0:
        return 0
    return _EXP[(_LOG[x] + _LOG[y]) % 3]


GF4_MUL = np.array([[_gf4_mul_slow(x, y) for y in GF4] for x in GF4], dtype=np.uint8)
GF4_SQ = np.array([_gf4_mul_slow(x, x) for x in GF4], dtype=np.uint8)


def gf4_add(x: int, y: int) -> int:
    return x ^ y


def gf4_mul(x: int, y: int) -> int:
    return int(GF4_MUL[x, y])


def gf4_inv(x: int) -> int:
    if x == 0:
        raise ZeroDivisionError("0 has no inverse in GF(4)")
    return _EXP[(-_LOG[x]) % 3]


def gf4_tr(x: int) -> int:
    """Absolute trace GF(4) -> GF(2), ``x + x^2``."""
    t = x ^ _gf4_mul_slow(x, x)
    assert t in (0, 1)
    return t


GF4_TR = np.array([gf4_tr(x) for x in GF4], dtype=np.uint8)


class Gr42(NamedTuple):
    """``a + b*xi`` in GR(4,2), coefficients reduced mod 4."""

    a: int
    b: int

    @property
    def index(self) -> int:
        return self.a + 4 * self.b

    def __repr__(self) -> str:
        return f"Gr42({self.a}+{self.b}xi)"


def gr(a: int, b: int = 0) -> Gr42:
    return Gr42(a % 4, b % 4)


GR_ZERO = Gr42(0, 0)
GR_ONE = Gr42(1, 0)
XI = Gr42(0, 1)
XI2 = Gr42(3, 3)
GR42 = tuple(Gr42(a, b) for b in range(4) for a in range(4))
TEICHMULLER = (GR_ZERO, GR_ONE, XI, XI2)


def gr_add(x: Gr42, y: Gr42) -> Gr42:
    return Gr42((x.a + y.a) % 4, (x.b + y.b) % 4)


def gr_sub(x: Gr42, y: Gr42) -> Gr42:
    return Gr42((x.a - y.a) % 4, (x.b - y.b) % 4)


def gr_negate(x: Gr42) -> Gr42:
    return Gr42(-x.a % 4, -x.b % 4)


def gr_scale(n: int, x: Gr42) -> Gr42:
    return Gr42(n * x.a % 4, n * x.b % 4)


def _gr_mul_slow(x: Gr42, y: Gr42) -> Gr42:
    # xi^2 = 3 + 3 xi
    bd = x.b * y.b
    return Gr42((x.a * y.a + 3 * bd) % 4, (x.a * y.b + x.b * y.a + 3 * bd) % 4)


_GR_MUL = [[_gr_mul_slow(x, y) for y in GR42] for x in GR42]


def gr_mul(x: Gr42, y: Gr42) -> Gr42:
    return _GR_MUL[x.index][y.index]


def gr_pow(x: Gr42, n: int) -> Gr42:
    out = GR_ONE
    for _ in range(n):
        out = gr_mul(out, x)
    return out


def pi(x: Gr42) -> int:
    """Reduction GR(4,2) -> GF(4) mod the maximal ideal 2R, with xi -> alpha."""
    return ((x.b & 1) << 1) | (x.a & 1)


_LIFT = {ZERO: GR_ZERO, ONE: GR_ONE, ALPHA: XI, ALPHA2: XI2}


def teich_lift(x: int) -> Gr42:
    """The unique Teichmuller element reducing to ``x``."""
    return _LIFT[x]


def teich_decompose(x: Gr42) -> tuple[Gr42, Gr42]:
    """2-adic digits ``(beta1, beta2)`` in T x T with ``x = beta1 + 2*beta2``."""
    beta1 = teich_lift(pi(x))
    rest = gr_sub(x, beta1)
    # rest lies in 2R; halve it to get a representative gamma
    gamma = Gr42(rest.a // 2, rest.b // 2)
    return beta1, teich_lift(pi(gamma))


def teich_reconstruct(beta1: Gr42, beta2: Gr42) -> Gr42:
    return gr_add(beta1, gr_scale(2, beta2))


def gr_frobenius(x: Gr42) -> Gr42:
    beta1, beta2 = teich_decompose(x)
    return teich_reconstruct(gr_mul(beta1, beta1), gr_mul(beta2, beta2))


def gr_trace(x: Gr42) -> int:
    """Trace GR(4,2) -> Z4, ``x + f(x)``."""
    t = gr_add(x, gr_frobenius(x))
    if t.b != 0:
        raise ArithmeticError(f"trace of {x!r} left the base ring: {t!r}")
    return t.a


# numpy lookup tables used by the vectorized lift code
LIFT_A = np.array([teich_lift(x).a for x in GF4], dtype=np.int64)
LIFT_B = np.array([teich_lift(x).b for x in GF4], dtype=np.int64)


def i_pow(n: int) -> tuple[int, int]:
    """``sqrt(-1)**n`` as a Gaussian integer ``(re, im)``."""
    return ((1, 0), (0, 1), (-1, 0), (0, -1))[n % 4]
