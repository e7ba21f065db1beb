"""Greedy recoloring of planted instances, emitting verifiable traces.

A run sweeps rounds. Round r picks the lowest-indexed class k with
uncolored members, finalizes all of them to the round's palette color
(an independent set, so the batch is always safe), then repeatedly
extends with candidate vertices that have no neighbor already holding
the round color, until no candidate remains. Rounds stop once at most L
vertices are uncolored; the leftover set is recolored with fresh colors
by the residual pass.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .coloring import Coloring, Move, Trace
from .errors import InfeasibleError, InternalInvariantError, PaletteError
from .graphs import Partition, PlantedInstance, induced_subgraph
from .rng import make_rng

SELECTORS = ("lowest", "random", "highest_degree")


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from (n, m, q) and the actual class sizes.

    n_q is the exact cross-class pair count, d_hat = m*n/n_q the effective
    average degree of the independent-pair model, p_hat = d_hat/n its pair
    probability. l_cutoff is the residual threshold n/ln^2(d_hat), clamped
    to [0, n], and k_core_bound = 2*d_hat/ln^2(d_hat) + 1. q0 (the color
    budget the construction is compared against) exists only when
    ln d > 7 ln ln d and q > 1; q0_note says why it is absent otherwise.
    Natural logarithms throughout.
    """

    n: int
    m: int
    q: int
    d: float
    n_q: int
    d_hat: float
    p_hat: float
    l_cutoff: int
    k_core_bound: float
    q0: float | None
    q0_note: str | None


def derive_params(n: int, m: int, q: int, partition: Partition) -> DerivedParams:
    if q < 1:
        raise InfeasibleError("q must be >= 1")
    if partition.n != n or partition.q != q:
        raise ValueError("partition does not match (n, q)")
    n_q = partition.cross_pair_count()
    if n_q == 0 and m > 0:
        raise InfeasibleError("no cross-class pairs but m > 0")
    d = 2 * m / n if n else 0.0
    if n_q == 0 or m == 0:
        d_hat, p_hat = 0.0, 0.0
    else:
        d_hat = m * n / n_q
        p_hat = m / n_q
    if p_hat > 1.0:
        raise InfeasibleError(f"m={m} exceeds cross-pair count {n_q}")

    if d_hat > 1.0:
        log2 = math.log(d_hat) ** 2
        l_cutoff = min(math.ceil(n / log2), n)
        k_core_bound = 2 * d_hat / log2 + 1
    else:
        # ln^2 is zero or meaningless here; only the residual pass makes sense
        l_cutoff = n
        k_core_bound = math.inf if d_hat == 1.0 else 1.0

    q0 = None
    q0_note = None
    if q <= 1:
        q0_note = "q0 undefined: q <= 1"
    elif d <= 1.0:
        q0_note = "q0 undefined: d <= 1"
    else:
        denom = math.log(d) - 7 * math.log(math.log(d))
        if denom <= 0:
            q0_note = "q0 undefined: denominator <= 0 (ln d <= 7 ln ln d)"
        else:
            q0 = q / (q - 1) * d / denom
    return DerivedParams(n=n, m=m, q=q, d=d, n_q=n_q, d_hat=d_hat, p_hat=p_hat,
                         l_cutoff=l_cutoff, k_core_bound=k_core_bound,
                         q0=q0, q0_note=q0_note)


@dataclass(eq=False)
class GreedyReport:
    """Everything a run produced, plus accounting for the color budget.

    trajectory[t] is the number of not-yet-finalized vertices after t
    finalizations (trajectory[0] = n). round_pools holds, per round, the
    size of the round's remaining candidate pool after each finalization
    in that round, starting from the uncolored count at round entry; this
    is the series the binomial-decay recurrence models.
    """

    trace: Trace
    rounds: int
    phase1_colors: int
    residual_colors: int
    total_colors: int
    residual_size: int
    residual_degeneracy: int
    trajectory: list[int]
    round_pools: list[list[int]]
    round_classes: list[int]
    finalized: list[int]
    params: DerivedParams
    l_used: int
    residual_fresh_used: list[int] = field(default_factory=list)
    q0_comparison: float | None = None

    def formula_residual_budget(self) -> float:
        """Closed-form residual color budget, d_hat/ln^2(d_hat) + 2; the run
        itself budgets from the measured degeneracy instead."""
        if self.params.d_hat <= 1.0:
            return math.inf if self.params.d_hat == 1.0 else 2.0
        return self.params.d_hat / math.log(self.params.d_hat) ** 2 + 2


class _IdentityPalette:
    """Unbounded palette where color r is used for round r."""

    def __getitem__(self, i: int) -> int:
        return i


def _check_palette(palette, sigma_colors: np.ndarray, q: int) -> None:
    pal = list(palette)
    if len(set(pal)) != len(pal):
        raise PaletteError("palette colors must be distinct")
    if any(c < 0 for c in pal):
        raise PaletteError("palette colors must be nonnegative")
    # pal[r] == r is safe (class r is empty among uncolored vertices once
    # round r runs); any other entry must avoid the start coloring's colors,
    # or a round could recolor a vertex next to an untouched same-color one
    present = set(np.unique(sigma_colors).tolist())
    bad = sorted({c for i, c in enumerate(pal) if c != i and c in present})
    if bad:
        raise PaletteError(
            "palette entries off the identity must be disjoint from the start "
            f"coloring's colors; offending colors: {bad[:5]}")


def run_greedy_recolor(inst: PlantedInstance, palette=None, L: int | None = None,
                       selector: str = "lowest", selector_seed: int | None = None,
                       strict: bool = False) -> GreedyReport:
    """Run the full recoloring (rounds plus residual pass) on a planted
    instance, returning the trace and per-step statistics.

    palette: ordered color list; rounds consume a prefix, the residual pass
    draws its fresh colors from the unused remainder. None means the
    identity palette on class indices extended with fresh colors q, q+1, ...
    as needed. L overrides the derived residual threshold. selector picks
    the candidate order inside a round ("lowest" vertex id by default;
    "random" and "highest_degree" need no / a seed respectively and exist
    for experiments). strict re-checks properness at every emitted move.
    """
    from .residual import degeneracy_recolor_greedy

    g = inst.graph
    part = inst.partition
    n, q = g.n, part.q
    params = derive_params(n, g.m, q, part)
    if L is None:
        L = params.l_cutoff
    if L < 0:
        raise ValueError("L must be >= 0")

    colors = part.class_of.astype(np.int64).copy()
    auto_palette = palette is None
    if auto_palette:
        pal = _IdentityPalette()
    else:
        _check_palette(palette, colors, q)
        pal = list(palette)

    if selector not in SELECTORS:
        raise ValueError(f"selector must be one of {SELECTORS}")
    priority = None
    if selector == "random":
        priority = make_rng(selector_seed if selector_seed is not None else 0).random(n)
    degrees = g.degrees

    in_u = np.ones(n, dtype=bool)
    u_count = n
    class_remaining = np.array([c.shape[0] for c in part.classes], dtype=np.int64)
    trajectory = [n]
    round_pools: list[list[int]] = []
    round_classes: list[int] = []
    finalized: list[int] = []
    moves: list[Move] = []
    indptr, nbrs = g.indptr, g.nbrs
    rounds = 0
    k_ptr = 0

    def heap_key(v: int):
        if selector == "lowest":
            return v
        if selector == "random":
            return (priority[v], v)
        return (-int(degrees[v]), v)

    while u_count > L:
        while k_ptr < q and class_remaining[k_ptr] == 0:
            k_ptr += 1
        if k_ptr == q:
            raise InternalInvariantError("uncolored vertices left but all classes empty")
        if not auto_palette and rounds >= len(pal):
            raise PaletteError(
                f"palette exhausted after {rounds} rounds with {u_count} vertices uncolored",
                rounds_completed=rounds)
        target = int(pal[rounds])
        k = k_ptr

        members = part.classes[k]
        batch = members[in_u[members]]
        pool = [u_count]
        in_pool = in_u.copy()

        # line A: the whole remaining class becomes this round's color
        in_u[batch] = False
        class_remaining[k] = 0
        for v in batch.tolist():
            if strict:
                row = nbrs[indptr[v]:indptr[v + 1]]
                if row.shape[0] and bool(np.any(colors[row] == target)):
                    raise InternalInvariantError(f"move of {v} would be improper")
            if colors[v] != target:
                moves.append(Move(v, target))
                colors[v] = target
            finalized.append(v)
            u_count -= 1
            trajectory.append(u_count)
            # round pool: the finalized vertex leaves, and so do its
            # still-pooled neighbors (same-class members are never neighbors)
            removed = 1 if in_pool[v] else 0
            in_pool[v] = False
            row = nbrs[indptr[v]:indptr[v + 1]]
            if row.shape[0]:
                removed += int(np.count_nonzero(in_pool[row]))
                in_pool[row] = False
            pool.append(pool[-1] - removed)

        # candidate set: uncolored vertices with no neighbor in the batch
        in_cand = in_u.copy()
        for v in batch.tolist():
            in_cand[nbrs[indptr[v]:indptr[v + 1]]] = False
        cand = np.flatnonzero(in_cand)
        if selector == "lowest":
            heap = cand.tolist()  # ascending list is already a valid min-heap
        else:
            heap = [(heap_key(int(v)), int(v)) for v in cand.tolist()]
            heapq.heapify(heap)

        while heap:
            if selector == "lowest":
                v = heapq.heappop(heap)
            else:
                _, v = heapq.heappop(heap)
            if not in_cand[v]:
                continue
            if strict:
                row = nbrs[indptr[v]:indptr[v + 1]]
                if row.shape[0] and bool(np.any(colors[row] == target)):
                    raise InternalInvariantError(f"move of {v} would be improper")
            in_cand[v] = False
            in_u[v] = False
            u_count -= 1
            class_remaining[part.class_of[v]] -= 1
            moves.append(Move(v, target))
            colors[v] = target
            finalized.append(v)
            trajectory.append(u_count)
            removed = 1 if in_pool[v] else 0
            in_pool[v] = False
            row = nbrs[indptr[v]:indptr[v + 1]]
            if row.shape[0]:
                removed += int(np.count_nonzero(in_pool[row]))
                in_pool[row] = False
                in_cand[row] = False
            pool.append(pool[-1] - removed)
        rounds += 1
        round_pools.append(pool)
        round_classes.append(k)

    # residual pass on the leftover set
    residual_vertices = np.flatnonzero(in_u)
    residual_size = int(residual_vertices.shape[0])
    residual_moves: list[Move] = []
    residual_degeneracy = 0
    fresh_used: list[int] = []
    if residual_size:
        g_u, vmap = induced_subgraph(g, residual_vertices)
        current = Coloring(colors, max(int(colors.max()) + 1, q))
        present = set(np.unique(colors).tolist())
        if auto_palette:
            first_fresh = max(q, (max(present) + 1) if present else 0)
            fresh = list(range(first_fresh, first_fresh + residual_size + 1))
        else:
            fresh = [c for c in pal[rounds:] if c not in present]
        residual_moves, residual_degeneracy = degeneracy_recolor_greedy(
            g_u, vmap, current, fresh)
        fresh_used = sorted({c for _, c in residual_moves})
        for v, c in residual_moves:
            colors[v] = c

    trace = Trace(start=inst.sigma, moves=moves + residual_moves)
    phase1 = rounds
    residual_colors = len(fresh_used)
    total = phase1 + residual_colors
    report = GreedyReport(
        trace=trace, rounds=rounds, phase1_colors=phase1,
        residual_colors=residual_colors, total_colors=total,
        residual_size=residual_size, residual_degeneracy=residual_degeneracy,
        trajectory=trajectory, round_pools=round_pools,
        round_classes=round_classes, finalized=finalized,
        params=params, l_used=int(L), residual_fresh_used=fresh_used,
        q0_comparison=(total / params.q0 if params.q0 else None))
    return report


def simulate_recurrence(u0: int, p_hat: float, seed: int) -> list[int]:
    """Binomial-decay pool model: u_{t+1} = u_t - Bin(u_t, p_hat) - 1,
    iterated until the value reaches 0 (negative values clamp to 0).
    Returns the full sequence starting at u0.
    """
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError("p_hat outside [0, 1]")
    if u0 < 0:
        raise ValueError("u0 must be >= 0")
    rng = make_rng(seed)
    seq = [int(u0)]
    while seq[-1] > 0:
        u = seq[-1]
        nxt = u - int(rng.binomial(u, p_hat)) - 1
        seq.append(max(nxt, 0))
    return seq
