"""Immutable simple undirected graphs, random generators, and peeling tools.

Vertices are 0-based contiguous ints. Edges are stored canonically
(u < v, ascending lexicographic) next to a CSR adjacency structure, so
edge iteration, neighbor scans and membership tests are all cheap at the
scales the recoloring runs need (n up to a few 10^5, m in the millions).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError
from .rng import make_rng

PARTITION_RESAMPLE_CAP = 1000


def _comb2(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with canonical edge arrays and CSR adjacency."""

    n: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    indptr: np.ndarray
    nbrs: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edge_u.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor array of v (a view, do not mutate)."""
        return self.nbrs[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = int(np.searchsorted(row, v))
        return i < row.shape[0] and int(row[i]) == v

    def edges(self) -> np.ndarray:
        """(m, 2) array of canonical edges, ascending lexicographic."""
        return np.stack([self.edge_u, self.edge_v], axis=1)


def build_graph(n: int, edges) -> Graph:
    """Build a Graph from an iterable/array of vertex pairs.

    Rejects self-loops, duplicate edges and out-of-range endpoints.
    """
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                     dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edges must be pairs")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if arr.shape[0] > 0:
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
    u = np.minimum(arr[:, 0], arr[:, 1])
    v = np.maximum(arr[:, 0], arr[:, 1])
    codes = u * n + v
    order = np.argsort(codes, kind="stable")
    codes = codes[order]
    if codes.shape[0] > 1 and np.any(np.diff(codes) == 0):
        raise ValueError("duplicate edges are not allowed")
    return _graph_from_sorted_codes(n, codes)


class _Scratch:
    """Reusable numpy buffers. First-touch page faults are expensive in this
    environment, so generation hot paths borrow persistent arrays instead of
    allocating fresh ones per call."""

    def __init__(self):
        self._bufs: dict[str, np.ndarray] = {}

    def get(self, name: str, size: int, dtype) -> np.ndarray:
        buf = self._bufs.get(name)
        if buf is None or buf.size < size or buf.dtype != np.dtype(dtype):
            buf = np.empty(max(size, 16), dtype)
            self._bufs[name] = buf
        return buf[:size]


_scratch = _Scratch()


def _graph_from_sorted_codes(n: int, codes: np.ndarray,
                             ub: np.ndarray | None = None,
                             vb: np.ndarray | None = None) -> Graph:
    """Assemble CSR structure from strictly increasing canonical pair codes.

    ``ub``/``vb`` may carry the already-decoded endpoints of ``codes``.
    """
    m = int(codes.shape[0])
    if n == 0 or m == 0:
        return Graph(n=n, edge_u=np.zeros(0, np.int32), edge_v=np.zeros(0, np.int32),
                     indptr=np.zeros(n + 1, np.int64), nbrs=np.zeros(0, np.int32))
    if ub is None:
        ub = _scratch.get("g.u", m, np.int64)
        vb = _scratch.get("g.v", m, np.int64)
        np.floor_divide(codes, n, out=ub)
        np.remainder(codes, n, out=vb)
    edge_u = np.empty(m, np.int32)
    edge_v = np.empty(m, np.int32)
    np.copyto(edge_u, ub, casting="unsafe")
    np.copyto(edge_v, vb, casting="unsafe")
    # both directions as src*n+dst codes; one sort groups by src with dst ascending
    alldir = _scratch.get("g.alldir", 2 * m, np.int64)
    alldir[:m] = codes
    half = alldir[m:]
    np.multiply(vb, n, out=half)
    np.add(half, ub, out=half)
    alldir.sort()
    nbrs = np.empty(2 * m, np.int32)
    np.remainder(alldir, n, out=nbrs, casting="unsafe")
    counts = np.bincount(edge_u, minlength=n) + np.bincount(edge_v, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Graph(n=n, edge_u=edge_u, edge_v=edge_v, indptr=indptr, nbrs=nbrs)


_GEN_CHUNK = 6_000_000


def _decode_tri(n: int, codes: np.ndarray, ub: np.ndarray, vb: np.ndarray) -> None:
    """Decode triangular pair codes into endpoints, in place.

    Code k enumerates the pairs (u, v), u < v, in ascending lexicographic
    order; block u starts at offset(u) = u*(2n-1-u)/2. The float estimate of
    u is repaired by integer correction sweeps, so the decode is exact.
    """
    c = codes.shape[0]
    if c == 0:
        return
    f = _scratch.get("d.f", c, np.float64)
    np.multiply(codes, -8.0, out=f)
    np.add(f, float(2 * n - 1) ** 2, out=f)
    np.sqrt(f, out=f)
    np.subtract(float(2 * n - 1), f, out=f)
    np.multiply(f, 0.5, out=f)
    np.copyto(ub, f, casting="unsafe")
    np.clip(ub, 0, max(n - 2, 0), out=ub)
    off = _scratch.get("d.off", c, np.int64)
    mask = _scratch.get("d.mask", c, bool)

    def offsets_of(src: np.ndarray) -> None:
        np.subtract(2 * n - 1, src, out=off)
        np.multiply(off, src, out=off)
        np.floor_divide(off, 2, out=off)

    for _ in range(2):  # float error is below one, two sweeps are plenty
        offsets_of(ub)
        np.greater(off, codes, out=mask)
        np.subtract(ub, mask, out=ub)
    t = _scratch.get("d.t", c, np.int64)
    for _ in range(2):
        np.add(ub, 1, out=t)
        offsets_of(t)
        np.less_equal(off, codes, out=mask)
        np.add(ub, mask, out=ub)
    offsets_of(ub)
    np.subtract(codes, off, out=vb)
    np.add(vb, ub, out=vb)
    np.add(vb, 1, out=vb)


def _draw_tri_codes(rng, n: int, count: int, class_of: np.ndarray | None) -> np.ndarray:
    """``count`` uniform triangular pair codes, filtered to cross-class pairs
    when class_of is given. Intermediates live in scratch buffers."""
    allpairs = _comb2(n)
    parts: list[np.ndarray] = []
    remaining = count
    while remaining > 0:
        c = min(remaining, _GEN_CHUNK)
        remaining -= c
        f = _scratch.get("s.f", c, np.float64)
        codes = _scratch.get("s.codes", c, np.int64)
        rng.random(out=f)
        np.multiply(f, allpairs, out=f)
        np.copyto(codes, f, casting="unsafe")
        if class_of is None:
            parts.append(codes.copy())
            continue
        ub = _scratch.get("s.u", c, np.int64)
        vb = _scratch.get("s.v", c, np.int64)
        _decode_tri(n, codes, ub, vb)
        cu = _scratch.get("s.cu", c, class_of.dtype)
        cv = _scratch.get("s.cv", c, class_of.dtype)
        np.take(class_of, ub, out=cu)
        np.take(class_of, vb, out=cv)
        mask = _scratch.get("s.mask", c, bool)
        np.not_equal(cu, cv, out=mask)
        parts.append(codes[mask])
    return parts[0] if len(parts) == 1 else np.concatenate(parts)


def _dedupe_sorted(codes: np.ndarray) -> np.ndarray:
    if codes.shape[0] <= 1:
        return codes
    keep = np.empty(codes.shape[0], dtype=bool)
    keep[0] = True
    np.not_equal(codes[1:], codes[:-1], out=keep[1:])
    return codes[keep]


def _uniform_distinct_ints(rng, upper: int, k: int) -> np.ndarray:
    """Uniform k-subset of range(upper), unsorted."""
    if k >= upper:
        return np.arange(upper)
    if k > upper // 3:
        return rng.permutation(upper)[:k]
    picked = np.zeros(0, dtype=np.int64)
    while picked.shape[0] < k:
        draw = rng.integers(0, upper, size=int((k - picked.shape[0]) * 1.3) + 8)
        picked = np.unique(np.concatenate([picked, draw]))
    return picked[rng.permutation(picked.shape[0])[:k]]


def _sample_distinct_tri(rng, n: int, m: int, total: int,
                         class_of: np.ndarray | None) -> np.ndarray:
    """m distinct triangular pair codes forming a uniform m-subset of the
    acceptable pairs (all pairs, or cross-class pairs when class_of given).

    Batched rejection: candidates are drawn exchangeably, so replacing each
    batch's surplus by a uniformly chosen subset keeps the final set exactly
    uniform over m-subsets. ``total`` is the acceptable-pair count.
    """
    if m > total:
        raise InfeasibleError(f"requested {m} edges but only {total} pairs available")
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    allpairs = _comb2(n)
    batches: list[np.ndarray] = []
    merged: np.ndarray | None = None
    have = 0
    while have < m:
        need = m - have
        # expected acceptance = (valid fraction) * (fraction not yet chosen)
        frac = max((total / allpairs) * (1 - have / total), 1e-3)
        want = min(int(need / frac * 1.03) + 16, 6 * total + 64, 60_000_000)
        codes = _draw_tri_codes(rng, n, want, class_of)
        codes.sort()
        codes = _dedupe_sorted(codes)
        if merged is not None and merged.shape[0]:
            pos = np.searchsorted(merged, codes)
            pos[pos == merged.shape[0]] = merged.shape[0] - 1
            codes = codes[merged[pos] != codes]
        excess = codes.shape[0] - need
        if excess > 0:
            keep = np.ones(codes.shape[0], dtype=bool)
            keep[_uniform_distinct_ints(rng, codes.shape[0], excess)] = False
            codes = codes[keep]
        batches.append(codes)
        have += codes.shape[0]
        merged = batches[0] if len(batches) == 1 else np.sort(np.concatenate(batches))
    return merged


def _graph_from_tri_codes(n: int, tri_sorted: np.ndarray) -> Graph:
    m = int(tri_sorted.shape[0])
    if m == 0:
        return _graph_from_sorted_codes(n, np.zeros(0, dtype=np.int64))
    ub = _scratch.get("b.u", m, np.int64)
    vb = _scratch.get("b.v", m, np.int64)
    for lo in range(0, m, _GEN_CHUNK):  # chunked so decode scratch stays small
        hi = min(lo + _GEN_CHUNK, m)
        _decode_tri(n, tri_sorted[lo:hi], ub[lo:hi], vb[lo:hi])
    codes = _scratch.get("b.codes", m, np.int64)
    np.multiply(ub, n, out=codes)
    np.add(codes, vb, out=codes)
    return _graph_from_sorted_codes(n, codes, ub, vb)


def gen_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniformly random simple graph with exactly m edges."""
    total = _comb2(n)
    if not 0 <= m <= total:
        raise InfeasibleError(f"m={m} outside [0, {total}] for n={n}")
    rng = make_rng(seed)
    return _graph_from_tri_codes(n, _sample_distinct_tri(rng, n, m, total, None))


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Each of the C(n,2) pairs included independently with probability p.

    Implemented as Bin(C(n,2), p) edges followed by a uniform subset draw,
    which yields exactly the independent-inclusion distribution.
    """
    if not 0.0 <= p <= 1.0:
        raise InfeasibleError(f"p={p} outside [0, 1]")
    total = _comb2(n)
    rng = make_rng(seed)
    m = int(rng.binomial(total, p)) if total else 0
    return _graph_from_tri_codes(n, _sample_distinct_tri(rng, n, m, total, None))


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint classes covering [n]; class_of maps vertex -> class index."""

    q: int
    class_of: np.ndarray
    classes: list[np.ndarray] = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.class_of.shape[0])

    @property
    def class_sizes(self) -> list[int]:
        return [int(c.shape[0]) for c in self.classes]

    @property
    def has_empty_classes(self) -> bool:
        return any(c.shape[0] == 0 for c in self.classes)

    def internal_pair_count(self) -> int:
        return sum(_comb2(s) for s in self.class_sizes)

    def cross_pair_count(self) -> int:
        return _comb2(self.n) - self.internal_pair_count()


def partition_from_class_of(class_of, q: int | None = None) -> Partition:
    arr = np.asarray(class_of, dtype=np.int32)
    if q is None:
        q = int(arr.max()) + 1 if arr.size else 0
    if q < 1:
        raise InfeasibleError("q must be >= 1")
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise ValueError("class index out of range")
    classes = [np.flatnonzero(arr == j).astype(np.int32) for j in range(q)]
    return Partition(q=q, class_of=arr, classes=classes)


def balanced_partition(n: int, q: int, seed: int) -> Partition:
    """Random partition with class sizes differing by at most one."""
    if q < 1:
        raise InfeasibleError("q must be >= 1")
    rng = make_rng(seed)
    perm = rng.permutation(n)
    class_of = np.empty(n, dtype=np.int32)
    class_of[perm] = np.arange(n, dtype=np.int32) % q
    return partition_from_class_of(class_of, q)


def min_internal_pairs(n: int, q: int) -> int:
    """Minimum of sum_i C(|V_i|,2) over all partitions of [n] into q classes."""
    base, extra = divmod(n, q)
    return extra * _comb2(base + 1) + (q - extra) * _comb2(base)


def random_partition(n: int, q: int, m: int, seed: int) -> Partition:
    """Uniform class per vertex, resampled until the planted-size constraint
    sum_i C(|V_i|,2) <= C(n,2) - m holds.

    Raises InfeasibleError when no partition at all can satisfy it, and after
    PARTITION_RESAMPLE_CAP failed resamples (violations are vanishingly rare
    at sane parameters).
    """
    if q < 1:
        raise InfeasibleError("q must be >= 1")
    budget = _comb2(n) - m
    if m < 0 or budget < 0:
        raise InfeasibleError(f"m={m} outside [0, C({n},2)]")
    if min_internal_pairs(n, q) > budget:
        raise InfeasibleError(
            f"no partition of {n} vertices into {q} classes leaves room for {m} cross edges")
    rng = make_rng(seed)
    for _ in range(PARTITION_RESAMPLE_CAP):
        class_of = rng.integers(0, q, size=n, dtype=np.int32)
        part = partition_from_class_of(class_of, q)
        if part.internal_pair_count() <= budget:
            return part
    raise InfeasibleError(
        f"partition constraint still violated after {PARTITION_RESAMPLE_CAP} resamples")


@dataclass(frozen=True)
class GenParams:
    """Record of how a planted instance was generated."""

    n: int
    q: int
    model: str  # "m", "p", or "derived" for instances built from a coloring
    m: int | None = None
    p_hat: float | None = None
    d: float | None = None
    seed: int | None = None


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    """Graph + partition + the planted coloring sigma (class index per vertex)."""

    graph: Graph
    partition: Partition
    params: GenParams

    def __post_init__(self):
        g, part = self.graph, self.partition
        if g.n != part.n:
            raise ValueError("graph and partition sizes differ")
        if g.m:
            cu = _scratch.get("pi.cu", g.m, part.class_of.dtype)
            cv = _scratch.get("pi.cv", g.m, part.class_of.dtype)
            np.take(part.class_of, g.edge_u, out=cu)
            np.take(part.class_of, g.edge_v, out=cv)
            if bool(np.any(cu == cv)):
                raise ValueError("planted instance has an edge inside a color class")

    @property
    def sigma(self):
        from .coloring import Coloring
        return Coloring(self.partition.class_of.astype(np.int64),
                        palette_hint=self.partition.q)


def _planted_edges(rng, part: Partition, m: int) -> np.ndarray:
    return _sample_distinct_tri(rng, part.n, m, part.cross_pair_count(),
                                part.class_of)


def gen_planted_m(partition: Partition, m: int, seed: int,
                  d: float | None = None) -> PlantedInstance:
    """m distinct edges drawn uniformly from the cross-class pairs."""
    rng = make_rng(seed)
    codes = _planted_edges(rng, partition, m)
    g = _graph_from_tri_codes(partition.n, codes)
    params = GenParams(n=partition.n, q=partition.q, model="m", m=m,
                       d=d if d is not None else (2 * m / partition.n if partition.n else 0.0),
                       seed=seed)
    return PlantedInstance(graph=g, partition=partition, params=params)


def gen_planted_p(partition: Partition, p_hat: float, seed: int) -> PlantedInstance:
    """Each cross-class pair included independently with probability p_hat."""
    if not 0.0 <= p_hat <= 1.0:
        raise InfeasibleError(f"p_hat={p_hat} outside [0, 1]")
    rng = make_rng(seed)
    total = partition.cross_pair_count()
    m = int(rng.binomial(total, p_hat)) if total else 0
    codes = _planted_edges(rng, partition, m)
    g = _graph_from_tri_codes(partition.n, codes)
    params = GenParams(n=partition.n, q=partition.q, model="p", m=m,
                       p_hat=p_hat, seed=seed)
    return PlantedInstance(graph=g, partition=partition, params=params)


def gen_planted(n: int, q: int, m: int, seed: int,
                model: str = "m") -> PlantedInstance:
    """Random partition (constraint-checked) plus planted edges in one call.

    model "m": exactly m uniform cross edges. model "p": independent cross
    pairs with probability p_hat = d_hat / n computed from the partition.
    """
    part = random_partition(n, q, m, seed)
    if model == "m":
        return gen_planted_m(part, m, seed + 1 if seed is not None else None)
    if model == "p":
        nq = part.cross_pair_count()
        if nq == 0:
            raise InfeasibleError("no cross-class pairs")
        p_hat = min(m / nq, 1.0)
        return gen_planted_p(part, p_hat, seed + 1)
    raise ValueError(f"unknown planted model {model!r}")


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by ``vertices``.

    Returns (subgraph, vmap) where vmap[i] is the original label of local
    vertex i; local labels follow ascending original labels.
    """
    vmap = np.unique(np.asarray(vertices, dtype=np.int64))
    if vmap.size and (vmap[0] < 0 or vmap[-1] >= g.n):
        raise ValueError("vertex out of range")
    in_s = np.zeros(g.n, dtype=bool)
    in_s[vmap] = True
    keep = in_s[g.edge_u] & in_s[g.edge_v]
    lu = np.searchsorted(vmap, g.edge_u[keep])
    lv = np.searchsorted(vmap, g.edge_v[keep])
    k = int(vmap.size)
    codes = lu.astype(np.int64) * k + lv
    codes.sort()
    return _graph_from_sorted_codes(k, codes), vmap


def count_edges_within(g: Graph, vertices) -> int:
    """Number of edges with both endpoints in ``vertices``."""
    in_s = np.zeros(g.n, dtype=bool)
    idx = np.asarray(vertices, dtype=np.int64)
    if idx.size == 0:
        return 0
    in_s[idx] = True
    return int(np.count_nonzero(in_s[g.edge_u] & in_s[g.edge_v]))


def degeneracy_order(g: Graph) -> tuple[int, np.ndarray]:
    """Degeneracy and a matching vertex order.

    Peels a minimum-degree vertex repeatedly (lowest index on ties) and
    returns the reversed peel sequence, so each vertex has at most
    ``degeneracy`` neighbors among its predecessors in the order.
    """
    n = g.n
    deg = g.degrees.astype(np.int64).copy()
    removed = np.zeros(n, dtype=bool)
    heap = [(int(deg[v]), v) for v in range(n)]
    heapq.heapify(heap)
    peel: list[int] = []
    delta = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        delta = max(delta, d)
        peel.append(v)
        for u in g.neighbors(v).tolist():
            if not removed[u]:
                deg[u] -= 1
                heapq.heappush(heap, (int(deg[u]), u))
    order = np.array(peel[::-1], dtype=np.int64)
    return delta, order


def greedy_mis(g: Graph, order) -> np.ndarray:
    """Greedy maximal independent set: scan ``order``, add each vertex with
    no previously added neighbor. Returns the sorted member array."""
    order = np.asarray(order, dtype=np.int64)
    if order.shape[0] != g.n or (g.n and not np.array_equal(np.sort(order), np.arange(g.n))):
        raise ValueError("order must be a permutation of the vertices")
    blocked = np.zeros(g.n, dtype=bool)
    member = np.zeros(g.n, dtype=bool)
    for v in order.tolist():
        if not blocked[v]:
            member[v] = True
            blocked[g.neighbors(v)] = True
            blocked[v] = True
    return np.flatnonzero(member)
