"""Cayley graphs of PDS candidates, strongly-regular checks, fingerprints and export."""
from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .lift import GroupShape, PdsCandidate
from .verify import eigenvalue_multiplicities

BITMATRIX_MAX = 4096
FORMATS = ("graph6", "dimacs", "edgelist")


class SrgCheckError(Exception):
    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class Graph:
    """Undirected simple graph on ``0..order-1``.

    Adjacency is a packed uint64 bit-matrix when ``order <= 4096``; larger
    graphs answer ``neighbors`` from sorted per-vertex arrays.
    """

    def __init__(self, order: int, bits: np.ndarray | None = None, lists: list[np.ndarray] | None = None):
        self.order = order
        self.bits = bits
        self._lists = lists

    @classmethod
    def from_neighbor_function(cls, order: int, neighbors, force_lists: bool = False) -> "Graph":
        if order <= BITMATRIX_MAX and not force_lists:
            words = (order + 63) // 64
            dense = np.zeros((order, words * 64), dtype=bool)
            for u in range(order):
                dense[u, neighbors(u)] = True
            return cls(order, bits=_pack_rows(dense))
        return cls(order, lists=[np.sort(np.asarray(neighbors(u), dtype=np.int64)) for u in range(order)])

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[list[int]] = [[] for _ in range(order)]
        for u, w in edges:
            if u == w:
                raise ValueError(f"loop at {u}")
            adj[u].append(w)
            adj[w].append(u)
        return cls.from_neighbor_function(order, lambda u: np.unique(adj[u]).astype(np.int64))

    def neighbors(self, u: int) -> np.ndarray:
        if self.bits is not None:
            row = np.unpackbits(self.bits[u].view(np.uint8), bitorder="little")[: self.order]
            return np.flatnonzero(row)
        return self._lists[u]

    def degrees(self) -> np.ndarray:
        if self.bits is not None:
            return np.bitwise_count(self.bits).sum(axis=1).astype(np.int64)
        return np.array([len(x) for x in self._lists], dtype=np.int64)

    def adjacent(self, u: int, w: int) -> bool:
        if self.bits is not None:
            return bool((self.bits[u, w >> 6] >> np.uint64(w & 63)) & np.uint64(1))
        row = self._lists[u]
        i = np.searchsorted(row, w)
        return bool(i < len(row) and row[i] == w)

    def common_neighbors(self, u: int, w: int) -> int:
        if self.bits is not None:
            return int(np.bitwise_count(self.bits[u] & self.bits[w]).sum())
        return int(np.intersect1d(self._lists[u], self._lists[w], assume_unique=True).size)

    def adjacent_many(self, us: np.ndarray, ws: np.ndarray) -> np.ndarray:
        return np.array([self.adjacent(int(u), int(w)) for u, w in zip(us, ws)], dtype=bool)

    def common_neighbors_many(self, us: np.ndarray, ws: np.ndarray) -> np.ndarray:
        return np.array([self.common_neighbors(int(u), int(w)) for u, w in zip(us, ws)], dtype=np.int64)

    def edges(self) -> Iterable[tuple[int, int]]:
        """Edges ``(u, w)`` with ``u < w`` in lexicographic order."""
        for u in range(self.order):
            nb = self.neighbors(u)
            for w in nb[nb > u]:
                yield u, int(w)

    def n_edges(self) -> int:
        return int(self.degrees().sum()) // 2

    def complement(self) -> "Graph":
        if self.bits is None:
            raise NotImplementedError("complement needs the bit-matrix representation")
        dense = ~_unpack_rows(self.bits, self.order)
        np.fill_diagonal(dense, False)
        return Graph(self.order, bits=_pack_rows(_pad(dense)))


def _pad(dense: np.ndarray) -> np.ndarray:
    words = (dense.shape[1] + 63) // 64
    out = np.zeros((dense.shape[0], words * 64), dtype=bool)
    out[:, : dense.shape[1]] = dense
    return out


def _pack_rows(dense: np.ndarray) -> np.ndarray:
    packed = np.packbits(dense, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)


def _unpack_rows(bits: np.ndarray, order: int) -> np.ndarray:
    return np.unpackbits(bits.view(np.uint8), axis=1, bitorder="little")[:, :order].astype(bool)


class CayleyGraph(Graph):
    """Cayley graph ``u ~ w iff u - w in D``; neighbors of ``u`` are ``u + D``."""

    def __init__(self, candidate: PdsCandidate):
        self.connection_set = candidate
        self.shape: GroupShape = candidate.shape
        self._ind = candidate.indicator()
        self._d_digits = self.shape.unpack(candidate.elements)
        order = self.shape.order
        if order <= BITMATRIX_MAX:
            dense = np.zeros((order, ((order + 63) // 64) * 64), dtype=bool)
            all_digits = self.shape.unpack(np.arange(order))
            for lo in range(0, order, 256):
                nb = self.shape.pack((all_digits[lo : lo + 256, None, :] + self._d_digits[None]) % self.shape.radices)
                rows = np.repeat(np.arange(lo, lo + len(nb)), nb.shape[1])
                dense[rows, nb.reshape(-1)] = True
            super().__init__(order, bits=_pack_rows(dense))
        else:
            # rows are generated on demand; materializing v * |D| entries is too large
            super().__init__(order)

    def neighbors(self, u: int) -> np.ndarray:
        if self.bits is not None:
            return super().neighbors(u)
        digits = (self.shape.unpack(u) + self._d_digits) % self.shape.radices
        return np.sort(self.shape.pack(digits))

    def degrees(self) -> np.ndarray:
        if self.bits is not None:
            return super().degrees()
        return np.full(self.order, len(self.connection_set), dtype=np.int64)

    def adjacent(self, u: int, w: int) -> bool:
        return bool(self._ind[self.shape.sub(u, w)])

    def common_neighbors(self, u: int, w: int) -> int:
        if self.bits is not None:
            return super().common_neighbors(u, w)
        return int(self.common_neighbors_many(np.array([u]), np.array([w]))[0])

    def adjacent_many(self, us: np.ndarray, ws: np.ndarray) -> np.ndarray:
        return self._ind[self.shape.sub(us, ws)]

    def common_neighbors_many(self, us: np.ndarray, ws: np.ndarray, batch: int = 64) -> np.ndarray:
        # x = u + d is a neighbor of w iff (u - w) + d lies in D
        diff = self.shape.sub(np.asarray(us), np.asarray(ws))
        out = np.empty(len(diff), dtype=np.int64)
        d = self.connection_set.elements
        for lo in range(0, len(diff), batch):
            shifted = self.shape.add_packed(diff[lo : lo + batch, None], d[None, :])
            out[lo : lo + batch] = self._ind[shifted].sum(axis=1)
        return out


def cayley(candidate: PdsCandidate) -> CayleyGraph:
    if candidate.degenerate:
        raise ValueError("degenerate (empty) connection set has no Cayley graph worth checking")
    candidate.check_structure()
    return CayleyGraph(candidate)


def _full_common_counts(g: Graph, block: int = 32):
    """Yield ``(rows, counts, adjacency)`` blocks of the common-neighbor matrix."""
    bits = g.bits
    for lo in range(0, g.order, block):
        sub = bits[lo : lo + block]
        counts = np.bitwise_count(sub[:, None, :] & bits[None, :, :]).sum(axis=2, dtype=np.int64)
        yield lo, counts, _unpack_rows(sub, g.order)


def srg_check(g: Graph, sample_pairs: int = 1_000_000, seed: int = 0,
              chunk: int = 8192) -> tuple[int, int, int, int]:
    """Return ``(v, k, lambda, mu)`` or raise :class:`SrgCheckError` with a witness pair.

    Graphs held as bit-matrices are checked on every ordered pair; larger
    graphs on ``sample_pairs`` uniformly drawn pairs.
    """
    deg = g.degrees()
    if np.any(deg != deg[0]):
        u = int(np.flatnonzero(deg != deg[0])[0])
        raise SrgCheckError(f"not regular: deg(0)={deg[0]}, deg({u})={deg[u]}", (0, u))
    k = int(deg[0])
    lam = mu = None

    def record(kind: str, value: int, pair: tuple[int, int]):
        nonlocal lam, mu
        cur = lam if kind == "lambda" else mu
        if cur is None:
            if kind == "lambda":
                lam = value
            else:
                mu = value
        elif cur != value:
            raise SrgCheckError(f"{kind} not constant: pair {pair} has {value}, earlier {cur}", pair)

    if g.bits is not None:
        for lo, counts, adj in _full_common_counts(g):
            rows = np.arange(lo, lo + len(counts))
            offdiag = np.ones_like(adj)
            offdiag[np.arange(len(rows)), rows] = False
            for kind, mask in (("lambda", adj), ("mu", ~adj & offdiag)):
                vals = counts[mask]
                if vals.size:
                    record(kind, int(vals[0]), (0, 0))
                    bad = np.argwhere(mask & (counts != vals[0]))
                    if bad.size:
                        r, c = bad[0]
                        pair = (int(rows[r]), int(c))
                        raise SrgCheckError(f"{kind} not constant at pair {pair}: "
                                            f"{int(counts[r, c])} vs {int(vals[0])}", pair)
    else:
        rng = np.random.default_rng(seed)
        pairs = rng.integers(0, g.order, size=(sample_pairs, 2))
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        for lo in range(0, len(pairs), chunk):
            us, ws = pairs[lo : lo + chunk, 0], pairs[lo : lo + chunk, 1]
            adj = g.adjacent_many(us, ws)
            counts = g.common_neighbors_many(us, ws)
            for kind, mask in (("lambda", adj), ("mu", ~adj)):
                idx = np.flatnonzero(mask)
                if not idx.size:
                    continue
                first = int(idx[0])
                record(kind, int(counts[first]), (int(us[first]), int(ws[first])))
                bad = idx[counts[idx] != counts[first]]
                if bad.size:
                    i = int(bad[0])
                    pair = (int(us[i]), int(ws[i]))
                    raise SrgCheckError(f"{kind} not constant at pair {pair}: "
                                        f"{int(counts[i])} vs {int(counts[first])}", pair)
    if lam is None or mu is None:
        raise SrgCheckError("complete or empty graph: lambda or mu undefined")
    return g.order, k, lam, mu


@dataclass
class SrgFingerprint:
    params: tuple[int, int, int, int]
    eigenvalues: dict[int, int]
    triangles: int
    local_hash: str


def count_triangles(g: Graph) -> int:
    """Direct count: sum of common neighbors over edges, divided by 3."""
    total = 0
    for u in range(g.order):
        nb = g.neighbors(u)
        nb = nb[nb > u]
        total += sum(g.common_neighbors(u, int(w)) for w in nb)
    return total // 3


def fingerprint(g: Graph, params: tuple[int, int, int, int] | None = None, direct_triangles: bool | None = None) -> SrgFingerprint:
    """Spectral and local invariants of an SRG.

    ``local_hash`` digests the sorted common-neighbor counts, inside the
    first subconstituent of vertex 0, of every pair of neighbors of 0.
    """
    if params is None:
        params = srg_check(g)
    v, k, lam, mu = params
    eig = eigenvalue_multiplicities(params)
    triangles, rem = divmod(v * k * lam, 6)
    if rem:
        raise ValueError("v*k*lambda not divisible by 6")
    if direct_triangles is None:
        direct_triangles = v <= 1024
    if direct_triangles and count_triangles(g) != triangles:
        raise SrgCheckError("direct triangle count disagrees with v*k*lambda/6")
    nb = g.neighbors(0)
    inside = set(int(x) for x in nb)
    counts = []
    for a in range(len(nb)):
        na = set(int(x) for x in g.neighbors(int(nb[a]))) & inside
        for b in range(a + 1, len(nb)):
            nbb = set(int(x) for x in g.neighbors(int(nb[b])))
            counts.append(len(na & nbb))
    digest = hashlib.sha256(",".join(map(str, sorted(counts))).encode()).hexdigest()
    return SrgFingerprint(tuple(params), eig, triangles, digest)


# --- export -----------------------------------------------------------------


def _graph6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def to_graph6(g: Graph) -> bytes:
    """graph6 encoding (upper triangle, column by column), newline-terminated."""
    n = g.order
    if g.bits is not None:
        dense = _unpack_rows(g.bits, n)
    else:
        dense = np.zeros((n, n), dtype=bool)
        for u in range(n):
            dense[u, g.neighbors(u)] = True
    iu, ju = np.triu_indices(n, k=1)
    order = np.lexsort((iu, ju))  # column j ascending, then row i ascending
    bits = dense[iu[order], ju[order]].astype(np.uint8)
    pad = (-len(bits)) % 6
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 6)
    values = bits @ (1 << np.arange(5, -1, -1)) + 63
    return _graph6_size(n) + values.astype(np.uint8).tobytes() + b"\n"


def parse_graph6(data: bytes) -> Graph:
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if data[0] != 126:
        n, rest = data[0] - 63, data[1:]
    elif data[1] != 126:
        n = sum((c - 63) << s for c, s in zip(data[1:4], (12, 6, 0)))
        rest = data[4:]
    else:
        n = sum((c - 63) << s for c, s in zip(data[2:8], (30, 24, 18, 12, 6, 0)))
        rest = data[8:]
    vals = np.frombuffer(rest, dtype=np.uint8).astype(np.int64) - 63
    bits = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).reshape(-1)
    edges = []
    t = 0
    for j in range(1, n):
        for i in range(j):
            if bits[t]:
                edges.append((i, j))
            t += 1
    return Graph.from_edges(n, edges)


def write_dimacs(g: Graph, out: TextIO) -> None:
    edges = list(g.edges())
    out.write(f"p edge {g.order} {len(edges)}\n")
    for u, w in edges:
        out.write(f"e {u + 1} {w + 1}\n")


def write_edgelist(g: Graph, out: TextIO) -> None:
    for u, w in g.edges():
        out.write(f"{u} {w}\n")


def read_edgelist(text: str, order: int) -> Graph:
    edges = [tuple(int(x) for x in line.split()) for line in text.splitlines() if line.strip()]
    return Graph.from_edges(order, edges)


def read_dimacs(text: str) -> Graph:
    order, edges = 0, []
    for line in text.splitlines():
        if line.startswith("p"):
            order = int(line.split()[2])
        elif line.startswith("e"):
            _, u, w = line.split()
            edges.append((int(u) - 1, int(w) - 1))
    return Graph.from_edges(order, edges)


def export(g: Graph, fmt: str, path: str | Path | None = None) -> bytes:
    """Serialize ``g``; writes to ``path`` when given and returns the bytes either way."""
    if fmt == "graph6":
        data = to_graph6(g)
    elif fmt in ("dimacs", "edgelist"):
        buf = io.StringIO()
        (write_dimacs if fmt == "dimacs" else write_edgelist)(g, buf)
        data = buf.getvalue().encode()
    else:
        raise ValueError(f"unsupported format {fmt!r}; choose from {', '.join(FORMATS)}")
    if path is not None:
        Path(path).write_bytes(data)
    return data
