"""Two independent PDS verifiers: difference counting and the character spectrum.

Characters are labelled by packed mixed-radix digits in the same layout as
group elements: label digit ``c`` on a Z4 coordinate ``x`` contributes
``i**(c*x)``, label bit ``w`` on a Z2 coordinate contributes ``(-1)**(w*x)``.
Character sums are Gaussian integers held as ``(re, im)`` int64 pairs.
"""
from __future__ import annotations

import json
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import ALPHA, TEICHMULLER, XI, Gr42, gf4_mul, gf4_tr, gr_mul, gr_scale, gr_trace, pi
from .lift import GroupShape, PdsCandidate

GaussianInt = tuple[int, int]


class VerificationError(Exception):
    """The candidate is not a PDS with its expected parameters."""

    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class DegenerateCandidate(Exception):
    """Empty candidate: the PDS question is vacuous."""


class PreconditionError(ValueError):
    pass


# --- eigenvalue bookkeeping -----------------------------------------------


def expected_eigenvalues(params: Sequence[int]) -> tuple[int, int]:
    """Nonprincipal character values ``((lam-mu) +/- sqrt((lam-mu)^2 + 4(k-mu))) / 2``."""
    v, k, lam, mu = params
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    root = math.isqrt(disc) if disc >= 0 else -1
    if root < 0 or root * root != disc or (lam - mu + root) % 2:
        raise ValueError(f"{tuple(params)}: discriminant {disc} is not an integral square")
    return (lam - mu + root) // 2, (lam - mu - root) // 2


def eigenvalue_multiplicities(params: Sequence[int]) -> dict[int, int]:
    """``{k: 1, r: f, s: g}`` from ``1 + f + g = v`` and ``k + f*r + g*s = 0``."""
    v, k = params[0], params[1]
    r, s = expected_eigenvalues(params)
    f, rem = divmod(-k - s * (v - 1), r - s)
    if rem:
        raise ValueError(f"{tuple(params)}: non-integral eigenvalue multiplicity")
    return {k: 1, r: f, s: v - 1 - f}


def srg_identity_holds(params: Sequence[int]) -> bool:
    v, k, lam, mu = params
    return k * (k - lam - 1) == (v - k - 1) * mu


# --- labels ---------------------------------------------------------------


def ring_label_digits(beta: Gr42) -> tuple[int, int]:
    """Digit labels of ``x -> i**Tr(beta*x)``: ``(Tr(beta), Tr(beta*xi))``."""
    return gr_trace(beta), gr_trace(gr_mul(beta, XI))


def field_label_bits(w: int) -> tuple[int, int]:
    """Bit labels of ``x -> (-1)**tr(w*x)``: ``(tr(w), tr(w*alpha))``."""
    return gf4_tr(w), gf4_tr(gf4_mul(w, ALPHA))


def character_label(shape: GroupShape, betas: Sequence[Gr42], ws: Sequence[int]) -> int:
    """Packed label of the character ``psi_(betas) (x) chi_(ws)``."""
    if len(betas) != shape.k or len(ws) != 2 * (shape.ell - shape.k):
        raise ValueError("need k ring labels and 2l-2k field labels")
    digits: list[int] = []
    for b in betas:
        digits += ring_label_digits(b)
    for w in ws:
        digits += field_label_bits(w)
    return shape.pack(digits)


def even_label_to_field_label(shape: GroupShape, label: int) -> int:
    """For a label with all Z4 digits even, the matching label on GF(4)^{2l}.

    Ring label ``2*beta2`` becomes the field label ``(pi(beta2), 0)`` on its
    coordinate pair; field labels carry over unchanged.
    """
    d = [int(x) for x in shape.unpack(label)]
    if any(x % 2 for x in d[: shape.n_z4]):
        raise ValueError("label has an odd Z4 digit (character of order 4)")
    by_digits = {ring_label_digits(gr_scale(2, b)): b for b in TEICHMULLER}
    out: list[int] = []
    for i in range(shape.k):
        beta2 = by_digits[(d[2 * i], d[2 * i + 1])]
        out += list(field_label_bits(pi(beta2))) + [0, 0]
    out += d[shape.n_z4 :]
    return GroupShape(shape.ell, 0).pack(out)


# --- character sums -------------------------------------------------------


def character_sum(candidate: PdsCandidate, label: int) -> GaussianInt:
    """Direct sum of one character over the candidate."""
    shape = candidate.shape
    if len(candidate) == 0:
        return (0, 0)
    c = shape.unpack(label)
    scale = np.where(shape.radices == 4, 1, 2)
    # exponent of i for every element
    expo = (shape.unpack(candidate.elements) * (c * scale)).sum(axis=1) % 4
    n = np.bincount(expo, minlength=4)
    return int(n[0] - n[2]), int(n[1] - n[3])


def _stage(re: np.ndarray, im: np.ndarray, axis: int, radix: int):
    r = np.moveaxis(re, axis, 0)
    m = np.moveaxis(im, axis, 0)
    if radix == 2:
        out_r = np.stack([r[0] + r[1], r[0] - r[1]])
        out_m = np.stack([m[0] + m[1], m[0] - m[1]])
    else:
        # X[c] = sum_x i^{cx} f[x]; multiplying (r, m) by i gives (-m, r)
        s02r, d02r = r[0] + r[2], r[0] - r[2]
        s02m, d02m = m[0] + m[2], m[0] - m[2]
        s13r, d13r = r[1] + r[3], r[1] - r[3]
        s13m, d13m = m[1] + m[3], m[1] - m[3]
        out_r = np.stack([s02r + s13r, d02r - d13m, s02r - s13r, d02r + d13m])
        out_m = np.stack([s02m + s13m, d02m + d13r, s02m - s13m, d02m - d13r])
    return np.moveaxis(out_r, 0, axis), np.moveaxis(out_m, 0, axis)


def mixed_radix_transform(values: np.ndarray, radices: Sequence[int], imag: np.ndarray | None = None):
    """All character sums of ``values`` (indexed by packed element) at once.

    Returns ``(re, im)`` int64 arrays indexed by packed label.
    """
    radices = list(radices)
    shape = tuple(reversed(radices))  # C order: last axis is the least significant digit
    re = np.asarray(values, dtype=np.int64).reshape(shape)
    im = np.zeros_like(re) if imag is None else np.asarray(imag, dtype=np.int64).reshape(shape)
    nd = len(radices)
    for t, radix in enumerate(radices):
        re, im = _stage(re, im, nd - 1 - t, radix)
    return re.reshape(-1), im.reshape(-1)


def character_table(candidate: PdsCandidate) -> tuple[np.ndarray, np.ndarray]:
    return mixed_radix_transform(candidate.indicator().astype(np.int64), candidate.shape.radices)


@dataclass
class SpectrumReport:
    values: dict[GaussianInt, int]
    principal_value: int

    @property
    def group_order(self) -> int:
        return sum(self.values.values())

    @property
    def is_real(self) -> bool:
        return all(im == 0 for _, im in self.values)

    @property
    def histogram(self) -> dict[int, int]:
        """Value -> multiplicity, principal character included; needs real values."""
        if not self.is_real:
            raise ValueError("spectrum has non-real character sums")
        return {re: n for (re, _), n in sorted(self.values.items(), reverse=True)}

    def parseval(self) -> int:
        return sum((re * re + im * im) * n for (re, im), n in self.values.items())


def fast_spectrum(candidate: PdsCandidate) -> SpectrumReport:
    re, im = character_table(candidate)
    counts = Counter(zip(re.tolist(), im.tolist()))
    return SpectrumReport(dict(counts), int(re[0]))


# --- certificates ---------------------------------------------------------


@dataclass
class PdsCertificate:
    params: tuple[int, int, int, int]
    epsilon: int
    methods_passed: list[str]
    spectrum: SpectrumReport | None = None
    elapsed_ms: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        hist = None
        if self.spectrum is not None:
            hist = {str(v): n for v, n in self.spectrum.histogram.items()}
        return {
            "params": list(self.params),
            "epsilon": self.epsilon,
            "methods_passed": sorted(self.methods_passed),
            "spectrum_histogram": hist,
            "elapsed_ms": {m: round(t, 3) for m, t in sorted(self.elapsed_ms.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _preconditions(candidate: PdsCandidate) -> None:
    if candidate.degenerate:
        raise DegenerateCandidate("empty candidate: degenerate, vacuous")
    try:
        candidate.check_structure()
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc


def difference_counts(candidate: PdsCandidate, workers: int = 1, block: int = 1 << 22) -> np.ndarray:
    """Multiplicity of every group element in ``{d1 - d2 : d1 != d2 in D}``."""
    shape = candidate.shape
    digits = shape.unpack(candidate.elements).astype(np.int16)
    n = len(digits)
    rows = max(1, block // max(1, n * digits.shape[1]))
    radices = shape.radices.astype(np.int16)
    weights = shape.weights

    def work(lo: int) -> np.ndarray:
        diff = (digits[lo : lo + rows, None, :] - digits[None, :, :]) % radices
        packed = diff.reshape(-1, diff.shape[-1]).astype(np.int64) @ weights
        return np.bincount(packed, minlength=shape.order).astype(np.int32)

    starts = range(0, n, rows)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(lo) for lo in starts]
    counts = np.sum(parts, axis=0, dtype=np.int32)
    counts[0] -= n  # drop the d1 == d2 pairs
    return counts


def brute_force_verify(candidate: PdsCandidate, workers: int = 1) -> PdsCertificate:
    """Ground-truth check by counting every difference ``d1 - d2``."""
    _preconditions(candidate)
    t0 = time.perf_counter()
    counts = difference_counts(candidate, workers)
    ind = candidate.indicator()
    v, k, lam, mu = candidate.expected_params
    if len(candidate) != k:
        raise VerificationError(f"|D| = {len(candidate)}, expected {k}")
    inside = counts[ind]
    outside_mask = ~ind
    outside_mask[0] = False
    outside = counts[outside_mask]
    for name, vals, want, mask in (("lambda", inside, lam, ind), ("mu", outside, mu, outside_mask)):
        bad = np.flatnonzero(vals != want)
        if bad.size:
            g = int(np.flatnonzero(mask)[bad[0]])
            raise VerificationError(
                f"{name}: element {g} occurs {int(counts[g])} times as a difference, expected {want}", g
            )
    elapsed = (time.perf_counter() - t0) * 1e3
    return PdsCertificate(tuple(candidate.expected_params), candidate.epsilon, ["brute"],
                          elapsed_ms={"brute": elapsed})


def spectral_verify(candidate: PdsCandidate) -> PdsCertificate:
    """PDS check through the two-valued nonprincipal character spectrum."""
    _preconditions(candidate)
    t0 = time.perf_counter()
    params = tuple(candidate.expected_params)
    r, s = expected_eigenvalues(params)
    re, im = character_table(candidate)
    if re[0] != params[1] or im[0] != 0:
        raise VerificationError(f"principal sum {int(re[0])}, expected |D| = {params[1]}", 0)
    off = (im != 0) | ((re != r) & (re != s))
    off[0] = False
    bad = np.flatnonzero(off)
    if bad.size:
        lab = int(bad[0])
        raise VerificationError(
            f"character {lab} sums to {int(re[lab])}+{int(im[lab])}i, outside {{{r}, {s}}}", lab
        )
    counts = Counter(zip(re.tolist(), im.tolist()))
    elapsed = (time.perf_counter() - t0) * 1e3
    return PdsCertificate(params, candidate.epsilon, ["spectral"], SpectrumReport(dict(counts), int(re[0])),
                          elapsed_ms={"spectral": elapsed})


def verify_both(candidate: PdsCandidate, workers: int = 1) -> PdsCertificate:
    """Run both verifiers; they must agree on pass/fail."""
    outcomes = {}
    for name, fn in (("brute", lambda c: brute_force_verify(c, workers)), ("spectral", spectral_verify)):
        try:
            outcomes[name] = fn(candidate)
        except VerificationError as exc:
            outcomes[name] = exc
    passed = [n for n, o in outcomes.items() if isinstance(o, PdsCertificate)]
    if len(passed) == 1:
        raise AssertionError(f"verifiers disagree: only {passed[0]} passed")
    if not passed:
        raise outcomes["brute"]
    brute, spec = outcomes["brute"], outcomes["spectral"]
    return PdsCertificate(spec.params, spec.epsilon, ["brute", "spectral"], spec.spectrum,
                          {**brute.elapsed_ms, **spec.elapsed_ms})
