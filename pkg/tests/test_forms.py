import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdslab.algebra import ALPHA, GF4, GF4_MUL, gf4_mul
from pdslab.forms import (
    DimensionError, FormSpec, all_vectors, bilinear, classify, elliptic_or_hyperbolic_quadric,
    equivalence_map, equivalence_map_inverse, gf4_rank, hyperplane_profile, n_hyperplanes,
    pair_flip, parabolic_section, predicted_parabolic_profile, predicted_profile,
    projective_points, projective_to_pds_params, q_eval, q_values, radical_dimension,
    restricted_zero_count, symplectic, unit_vector, zero_count,
)


def vectors(n):
    return itertools.product(GF4, repeat=n)


def slow_zero_count(spec):
    return sum(q_eval(spec, v) == 0 for v in vectors(spec.dim))


def slow_profile(points, m):
    """Pure-Python oracle: every nonzero normal, then divide by the 3 scalar multiples."""
    hist = Counter()
    for w in vectors(m):
        if any(w):
            hits = 0
            for p in points:
                acc = 0
                for a, b in zip(w, p):
                    acc ^= gf4_mul(a, b)
                hits += acc == 0
            hist[hits] += 1
    return {s: n // 3 for s, n in hist.items()}


def test_q_eval_examples():
    s = FormSpec(2, 1)
    assert q_eval(s, (1, 0, 0, 0)) == ALPHA
    assert q_eval(s, (0, 0, 1, 0)) == 0
    assert sum(q_eval(s, v) == 0 for v in vectors(4) if any(v)) == 51 == (4**2 + 1) * (4 - 1)


def test_q_eval_dimension_error():
    with pytest.raises(DimensionError):
        q_eval(FormSpec(2, 1), (1, 0, 0))
    with pytest.raises(ValueError):
        FormSpec(2, 3)


@pytest.mark.parametrize("ell,j", [(e, j) for e in (1, 2, 3) for j in range(e + 1)])
def test_vectorized_matches_scalar(ell, j):
    spec = FormSpec(ell, j)
    rng = np.random.default_rng(ell * 10 + j)
    vs = rng.integers(0, 4, size=(300, 2 * ell)).astype(np.uint8)
    assert list(q_values(spec, vs)) == [q_eval(spec, tuple(int(x) for x in v)) for v in vs]


def test_q_is_quadratic():
    spec = FormSpec(2, 1)
    for v in vectors(4):
        for a in GF4:
            assert q_eval(spec, [gf4_mul(a, x) for x in v]) == gf4_mul(gf4_mul(a, a), q_eval(spec, v))


def test_bilinear_examples():
    for j in range(3):
        s = FormSpec(2, j)
        e = [unit_vector(4, i) for i in range(4)]
        assert bilinear(s, e[0], e[1]) == 1
        assert bilinear(s, e[0], e[2]) == 0
        for v in vectors(4):
            assert bilinear(s, v, v) == 0


@pytest.mark.parametrize("j", [0, 1, 2])
def test_bilinear_is_symplectic_exhaustive_ell2(j):
    s = FormSpec(2, j)
    for u in vectors(4):
        for v in vectors(4):
            assert bilinear(s, u, v) == symplectic(u, v)


@pytest.mark.parametrize("ell", [3, 4])
def test_bilinear_is_symplectic_sampled(ell):
    rng = np.random.default_rng(ell)
    for j in range(ell + 1):
        s = FormSpec(ell, j)
        u = rng.integers(0, 4, size=(10_000, 2 * ell)).astype(np.uint8)
        v = rng.integers(0, 4, size=(10_000, 2 * ell)).astype(np.uint8)
        polar = q_values(s, u ^ v) ^ q_values(s, u) ^ q_values(s, v)
        closed = np.zeros(10_000, dtype=np.uint8)
        for i in range(0, 2 * ell, 2):
            closed ^= GF4_MUL[u[:, i], v[:, i + 1]] ^ GF4_MUL[u[:, i + 1], v[:, i]]
        assert np.array_equal(polar, closed)


def test_classify_examples():
    assert classify(FormSpec(2, 1)) == "elliptic" and zero_count(FormSpec(2, 1)) == 52 == 4**3 - 3 * 4
    assert classify(FormSpec(2, 0)) == "hyperbolic" and zero_count(FormSpec(2, 0)) == 76 == 4**3 + 3 * 4
    assert classify(FormSpec(1, 1)) == "elliptic" and zero_count(FormSpec(1, 1)) == 1


@pytest.mark.parametrize("ell,j", [(e, j) for e in (1, 2, 3) for j in range(e + 1)])
def test_zero_counts_match_type(ell, j):
    spec = FormSpec(ell, j)
    eps = -1 if j % 2 else 1
    assert zero_count(spec) == 4 ** (2 * ell - 1) + eps * 3 * 4 ** (ell - 1)
    if ell <= 2:
        assert slow_zero_count(spec) == zero_count(spec)
    assert classify(spec) == ("elliptic" if j % 2 else "hyperbolic")


@pytest.mark.parametrize("ell,j", [(e, j) for e in (1, 2, 3) for j in range(e + 1)])
def test_radical_is_trivial(ell, j):
    assert radical_dimension(FormSpec(ell, j)) == 0


def test_gf4_rank():
    assert gf4_rank([[1, 0], [0, 1]]) == 2
    assert gf4_rank([[1, ALPHA], [ALPHA, gf4_mul(ALPHA, ALPHA)]]) == 1


@pytest.mark.parametrize("ell,j", [(e, j) for e in (2, 3) for j in range(1, e + 1)])
def test_restriction_is_parabolic(ell, j):
    assert restricted_zero_count(FormSpec(ell, j)) == 4 ** (2 * ell - 2)


def test_restriction_of_purely_hyperbolic_form_is_singular():
    # with j = 0, x_2 spans a singular radical of Q(0, x_2, ...)
    assert restricted_zero_count(FormSpec(2, 0)) != 16


@pytest.mark.parametrize("ell,j", [(2, 2), (3, 2), (3, 3)])
def test_equivalence_map_exhaustive(ell, j):
    hi, lo = FormSpec(ell, j), FormSpec(ell, j - 2)
    for v in vectors(2 * ell):
        assert q_eval(hi, equivalence_map(hi, v)) == q_eval(lo, v)
        assert equivalence_map_inverse(hi, equivalence_map(hi, v)) == tuple(v)


@pytest.mark.parametrize("ell,j", [(2, 2), (3, 2), (3, 3)])
def test_equivalence_map_linear_invertible_local(ell, j):
    spec = FormSpec(ell, j)
    n = 2 * ell
    images = [equivalence_map(spec, unit_vector(n, i)) for i in range(n)]
    assert gf4_rank(images) == n
    moved = set(range(2 * j - 4, 2 * j))
    for i in range(n):
        if i not in moved:
            assert images[i] == unit_vector(n, i)


def test_equivalence_map_needs_j_at_least_2():
    with pytest.raises(ValueError):
        equivalence_map(FormSpec(2, 1), (0, 0, 0, 0))


def test_pair_flip_exhaustive_ell2():
    spec = FormSpec(2, 1)
    for v in vectors(4):
        w = pair_flip(spec, v, 1)
        assert q_eval(spec, w) == q_eval(spec, v)
        assert pair_flip(spec, w, 1) == tuple(v)
        if v[0] == 0:
            assert w == tuple(v)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_pair_flip_hypothesis(data):
    ell = data.draw(st.integers(1, 4))
    j = data.draw(st.integers(1, ell))
    i = data.draw(st.integers(1, j))
    v = data.draw(st.lists(st.sampled_from(GF4), min_size=2 * ell, max_size=2 * ell))
    spec = FormSpec(ell, j)
    assert q_eval(spec, pair_flip(spec, v, i)) == q_eval(spec, v)


def test_pair_flip_ell3_sampled():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        j = int(rng.integers(1, 4))
        i = int(rng.integers(1, j + 1))
        spec = FormSpec(3, j)
        v = tuple(int(x) for x in rng.integers(0, 4, size=6))
        assert q_eval(spec, pair_flip(spec, v, i)) == q_eval(spec, v)


def test_pair_flip_range():
    with pytest.raises(ValueError):
        pair_flip(FormSpec(2, 1), (0, 0, 0, 0), 2)


def test_projective_points():
    for m in (2, 3, 4):
        pts = projective_points(m)
        assert len(pts) == n_hyperplanes(m) == (4**m - 1) // 3
        assert [tuple(p) for p in pts] == sorted(tuple(p) for p in pts)


def test_profile_elliptic_ell2():
    pts = elliptic_or_hyperbolic_quadric(FormSpec(2, 1))
    assert len(pts) == 17
    prof = hyperplane_profile(pts)
    assert prof.histogram == {1: 17, 5: 68}
    assert prof.histogram == slow_profile([tuple(p) for p in pts], 4)


def test_profile_parabolic_conic():
    pts = parabolic_section(FormSpec(2, 1))
    prof = hyperplane_profile(pts)
    assert prof.histogram == {0: 6, 1: 5, 2: 10}
    assert prof.histogram == slow_profile([tuple(p) for p in pts], 3)
    assert predicted_parabolic_profile(2).histogram == {0: 6, 1: 5, 2: 10}


@pytest.mark.parametrize("ell,j", [(e, j) for e in (1, 2, 3) for j in range(e + 1)])
def test_profiles_match_closed_forms(ell, j):
    spec = FormSpec(ell, j)
    pts = elliptic_or_hyperbolic_quadric(spec)
    prof = hyperplane_profile(pts, spec.dim, workers=2, chunk=64)
    assert prof == predicted_profile(spec)
    m = spec.dim
    assert prof.hyperplanes == (4**m - 1) // 3
    assert prof.incidences == len(pts) * (4 ** (m - 1) - 1) // 3
    if ell >= 2 and j >= 1:
        sec = parabolic_section(spec)
        assert hyperplane_profile(sec) == predicted_parabolic_profile(ell)


def test_projective_to_pds_params():
    assert projective_to_pds_params(17, 4, 1, 5) == (256, 51, 2, 12)
    assert projective_to_pds_params(25, 4, 9, 5) == (256, 75, 26, 20)
    for args in [(17, 4, 1, 5), (25, 4, 9, 5), (325, 6, 69, 85), (357, 6, 101, 85)]:
        v, k, lam, mu = projective_to_pds_params(*args)
        assert k * (k - lam - 1) == (v - k - 1) * mu
    with pytest.raises(ValueError):
        projective_to_pds_params(17, 4, 5, 5)


def test_all_vectors_layout():
    av = all_vectors(3)
    assert av.shape == (64, 3)
    assert tuple(av[1]) == (1, 0, 0) and tuple(av[4]) == (0, 1, 0)
