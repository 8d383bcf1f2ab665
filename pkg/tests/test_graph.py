import networkx as nx
import numpy as np
import pytest

from conftest import ELL2_TRIPLES
from pdslab.graph import (
    Graph, SrgCheckError, cayley, count_triangles, export, fingerprint, parse_graph6,
    read_dimacs, read_edgelist, srg_check, to_graph6,
)
from pdslab.lift import GroupShape, PdsCandidate, build_d
from pdslab.verify import brute_force_verify


@pytest.fixture(scope="module")
def g211():
    return cayley(build_d(2, 1, 1))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return h


def test_cayley_basics(g211):
    c = g211.connection_set
    assert g211.order == 256
    assert set(g211.degrees().tolist()) == {51}
    assert g211.n_edges() == 256 * 51 // 2 == 6528
    assert np.array_equal(g211.neighbors(0), c.elements)
    s = c.shape
    for u in (0, 5, 77, 255):
        for w in (1, 9, 200):
            assert g211.adjacent(u, w) == (int(s.sub(u, w)) in set(c.elements.tolist()))
            assert g211.adjacent(u, w) == g211.adjacent(w, u)
        assert not g211.adjacent(u, u)


def test_cayley_rejects_degenerate():
    with pytest.raises(ValueError):
        cayley(build_d(1, 1, 1))


@pytest.mark.parametrize("ell,j,k", [t for t in ELL2_TRIPLES if t[1] > 0])
def test_srg_check_matches_certificate(ell, j, k):
    cand = build_d(ell, j, k)
    assert srg_check(cayley(cand)) == brute_force_verify(cand).params


def test_srg_check_matches_networkx_counts(g211):
    h = to_nx(g211)
    for u, w in [(0, 1), (0, int(g211.neighbors(0)[3])), (17, 200)]:
        common = len(set(h[u]) & set(h[w]))
        assert g211.common_neighbors(u, w) == common


def test_srg_check_rejects_random_regular():
    h = nx.random_regular_graph(51, 256, seed=3)
    g = Graph.from_edges(256, h.edges())
    with pytest.raises(SrgCheckError) as exc:
        srg_check(g)
    assert exc.value.witness is not None


def test_srg_check_rejects_random_cayley():
    s = GroupShape(2, 1)
    rng = np.random.default_rng(5)
    raw = set(rng.integers(1, 256, size=30).tolist())
    elems = sorted(raw | {int(s.negate(x)) for x in raw})
    g = cayley(PdsCandidate(s, 1, np.array(elems), (256, len(elems), 0, 0), -1))
    with pytest.raises(SrgCheckError):
        srg_check(g)


def test_srg_check_irregular():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    with pytest.raises(SrgCheckError, match="regular"):
        srg_check(g)


@pytest.mark.parametrize("j", [1, 2])
def test_complement_parameters(j):
    g = cayley(build_d(2, j, 1))
    v, k, lam, mu = srg_check(g)
    assert srg_check(g.complement()) == (v, v - k - 1, v - 2 - 2 * k + mu, v - 2 * k + lam)


def test_fingerprint(g211):
    fp = fingerprint(g211)
    assert fp.params == (256, 51, 2, 12)
    assert fp.eigenvalues == {51: 1, 3: 204, -13: 51}
    assert fp.triangles == 4352 == count_triangles(g211) == sum(nx.triangles(to_nx(g211)).values()) // 3
    f, g = fp.eigenvalues[3], fp.eigenvalues[-13]
    assert 1 + f + g == 256 and 51 + 3 * f - 13 * g == 0


def test_fingerprints_of_k0_k1_pair_share_parameters(g211):
    other = cayley(build_d(2, 1, 0))
    a, b = fingerprint(other), fingerprint(g211)
    assert a.params == b.params and a.eigenvalues == b.eigenvalues and a.triangles == b.triangles


def test_large_cayley_sampled():
    cand = build_d(4, 1, 1)
    g = cayley(cand)
    assert g.bits is None
    assert len(g.neighbors(12345)) == 16191
    assert srg_check(g, sample_pairs=300) == cand.expected_params


# --- export ---------------------------------------------------------------


def test_graph6_header_long_form(g211):
    data = to_graph6(g211)
    assert data[:4] == bytes([126, 63, 63 + 4, 63])  # n = 256 = 4 << 6
    assert data.endswith(b"\n")
    assert len(data) == 4 + (256 * 255 // 2 + 5) // 6 + 1


def test_graph6_matches_networkx(g211):
    assert to_graph6(g211).strip() == nx.to_graph6_bytes(to_nx(g211), header=False).strip()
    small = nx.petersen_graph()
    g = Graph.from_edges(10, small.edges())
    assert to_graph6(g).strip() == nx.to_graph6_bytes(small, header=False).strip()
    assert to_graph6(g)[0] == 10 + 63


def test_graph6_round_trip(g211):
    back = parse_graph6(to_graph6(g211))
    assert np.array_equal(back.bits, g211.bits)
    h = nx.from_graph6_bytes(to_graph6(g211).strip())
    assert sorted(tuple(sorted(e)) for e in h.edges()) == list(g211.edges())


def test_dimacs_and_edgelist(g211, tmp_path):
    dim = export(g211, "dimacs", tmp_path / "g.dimacs").decode()
    lines = dim.splitlines()
    assert len(lines) == 1 + 6528 and lines[0] == "p edge 256 6528"
    assert np.array_equal(read_dimacs(dim).bits, g211.bits)
    el = export(g211, "edgelist").decode()
    pairs = [tuple(map(int, ln.split())) for ln in el.splitlines()]
    assert pairs == sorted(pairs) and all(u < w for u, w in pairs)
    assert np.array_equal(read_edgelist(el, 256).bits, g211.bits)
    assert (tmp_path / "g.dimacs").read_text() == dim


def test_export_is_byte_stable():
    a = export(cayley(build_d(2, 1, 1)), "graph6")
    b = export(cayley(build_d(2, 1, 1)), "graph6")
    assert a == b


def test_export_unsupported_format(g211):
    with pytest.raises(ValueError, match="unsupported"):
        export(g211, "gml")


def test_large_cayley_default_million_pair_sample():
    cand = build_d(4, 4, 4)
    assert srg_check(cayley(cand)) == cand.expected_params == (65536, 16575, 4286, 4160)


def test_large_sampled_rejects_mutation():
    from conftest import symmetric_mutations

    bad = symmetric_mutations(build_d(4, 1, 1))["swap_pair"]
    with pytest.raises(SrgCheckError) as exc:
        srg_check(cayley(bad), sample_pairs=5000)
    u, w = exc.value.witness
    assert u != w


def test_batched_counts_match_scalar(g211):
    rng = np.random.default_rng(1)
    us, ws = rng.integers(0, 256, 50), rng.integers(0, 256, 50)
    big = cayley(build_d(4, 1, 1))
    assert np.array_equal(g211.common_neighbors_many(us, ws),
                          [g211.common_neighbors(int(u), int(w)) for u, w in zip(us, ws)])
    # on-demand path against explicit neighbor-set intersection
    for u, w in zip(us[:5] * 97, ws[:5] * 131):
        expect = np.intersect1d(big.neighbors(int(u)), big.neighbors(int(w))).size
        assert big.common_neighbors(int(u), int(w)) == expect
        assert big.adjacent(int(u), int(w)) == (int(w) in set(big.neighbors(int(u)).tolist()))
