"""Greedy seed-and-grow detection of the largest balanced module.

For each of the highest-impact seed nodes the search partitions the seed's
strong neighbors into a positive faction A (seed included) and a negative
faction B, prunes both factions until every within-faction pair is +1 and
every cross pair is -1, then sweeps the remaining strongly-tied candidates
once, admitting each node whose signs align uniformly with one faction and
against the other.  The largest module over all seeds wins; ties keep the
earlier seed.

Pruning removes, repeatedly, the lowest-index member that still violates its
faction condition.  Because removals never create new violations, that
fixed point equals a single ascending pass with live-updated violation
counts, which is how it is implemented.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from balancenet.signedgraph import DEFAULT_SIGMA, MIN_MODULE_SIZE, Module, SignedGraph

DEFAULT_MAX_SEEDS = 100


@dataclass(frozen=True)
class DetectConfig:
    """Detection parameters: strength threshold, seed budget, size floor."""

    sigma: float = DEFAULT_SIGMA
    max_seeds: int = DEFAULT_MAX_SEEDS
    min_size: int = MIN_MODULE_SIZE

    def __post_init__(self) -> None:
        # sigma in (0, 1] also guarantees that the candidate-strength test
        # |S_ij| >= sigma on a {-1, 0, +1} matrix reduces to S_ij != 0.
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError("sigma must lie in (0, 1]")
        if self.max_seeds < 1:
            raise ValueError("max_seeds must be >= 1")
        if self.min_size < MIN_MODULE_SIZE:
            raise ValueError(f"min_size must be >= {MIN_MODULE_SIZE}")


def node_impacts(g: SignedGraph) -> np.ndarray:
    """Per-node count of nonzero incident signs (degree in the signed graph)."""
    return (g.signs != 0).sum(axis=1)


def _as_index_array(nodes: Iterable[int]) -> np.ndarray:
    return np.asarray(sorted(int(v) for v in nodes), dtype=np.intp)


def _intra_prune(
    members: np.ndarray,
    signs: np.ndarray,
    bad_pairs: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Ascending removal of members with a non-(+1) tie to the living faction.

    Removing the lowest-index violator and rescanning is equivalent to one
    ascending pass in which a member survives iff it has only +1 ties to the
    members after it (those are all still alive when it is visited) and to
    the members already kept.  Three strategies implement that same pass;
    they are chosen on density and must agree exactly.
    """
    k = members.size
    if k < 2:
        return members
    if bad_pairs is not None:
        return _intra_prune_sparse(members, signs.shape[0], bad_pairs)
    next_ok = signs[members[:-1], members[1:]] == 1
    if int(next_ok.sum()) <= max(8, k >> 3):
        return _intra_prune_probe(members, signs, next_ok)
    return _intra_prune_dense(members, signs)


def _intra_prune_dense(members: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Submatrix strategy: vectorized suffix counts, incremental keep counts."""
    k = members.size
    bad_tie = signs[members][:, members] != 1
    np.fill_diagonal(bad_tie, False)
    positions = np.arange(k)
    upper = positions[None, :] > positions[:, None]
    suffix_bad = (bad_tie & upper).sum(axis=1)
    kept_bad = np.zeros(k, dtype=np.int32)
    kept = np.zeros(k, dtype=bool)
    for pos in range(k):
        if suffix_bad[pos] == 0 and kept_bad[pos] == 0:
            kept[pos] = True
            kept_bad += bad_tie[pos]
    return members[kept]


def _intra_prune_probe(
    members: np.ndarray, signs: np.ndarray, next_ok: np.ndarray
) -> np.ndarray:
    """Probe strategy for factions whose +1 ties are rare.

    A suffix-clean member must be +1 to its immediate successor, so only
    positions passing that probe get the full suffix check; the keep scan
    then runs over the handful of survivors.
    """
    k = members.size
    kept: list[int] = []
    for pos in np.flatnonzero(next_ok).tolist() + [k - 1]:
        u = members[pos]
        if pos < k - 1 and not (signs[u, members[pos + 1 :]] == 1).all():
            continue
        if all(signs[u, v] == 1 for v in kept):
            kept.append(int(u))
    return np.asarray(kept, dtype=members.dtype)


def _intra_prune_sparse(
    members: np.ndarray, n: int, bad_pairs: tuple[np.ndarray, np.ndarray]
) -> np.ndarray:
    """Sparse strategy over a precomputed list of all non-(+1) ordered pairs.

    Useful when almost every tie in the graph is +1: the per-member suffix
    and keep conditions reduce to a few lookups in the pair list.
    """
    k = members.size
    src, dst = bad_pairs
    pos_of = np.full(n, -1, dtype=np.intp)
    pos_of[members] = np.arange(k)
    ps = pos_of[src]
    pd = pos_of[dst]
    sel = (ps >= 0) & (pd >= 0)
    ps = ps[sel]
    pd = pd[sel]

    suffix_dirty = np.zeros(k, dtype=bool)
    later = pd > ps
    suffix_dirty[ps[later]] = True

    # remaining pairs point backwards; group them by source position
    # (ps is non-decreasing because both src and members are sorted)
    eps = ps[~later]
    epd = pd[~later]
    bounds = np.searchsorted(eps, np.arange(k + 1))
    kept = np.zeros(k, dtype=bool)
    for pos in np.flatnonzero(~suffix_dirty):
        lo, hi = bounds[pos], bounds[pos + 1]
        if lo == hi or not kept[epd[lo:hi]].any():
            kept[pos] = True
    return members[kept]


def _cross_prune(
    a: np.ndarray, b: np.ndarray, signs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Drop members whose tie to any opposite-faction node is not -1.

    The A side is filtered against the full B first, then B against the
    surviving A, matching the two removal statements' order.  Within a side
    the outcome is scan-order independent because the condition only looks
    across factions.
    """
    if a.size == 0 or b.size == 0:
        return a, b
    cross = signs[np.ix_(a, b)] == -1
    keep_a = cross.all(axis=1)
    a = a[keep_a]
    if a.size == 0:
        return a, b
    keep_b = cross[keep_a].all(axis=0)
    return a, b[keep_b]


def _prune(
    a: np.ndarray,
    b: np.ndarray,
    signs: np.ndarray,
    bad_pairs: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    a = _intra_prune(a, signs, bad_pairs)
    b = _intra_prune(b, signs, bad_pairs)
    return _cross_prune(a, b, signs)


def _collect_bad_pairs(signs: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """All ordered off-diagonal pairs whose tie is not +1, if few enough.

    Worth materializing only for graphs dominated by +1 ties; returns None
    otherwise and callers fall back to the other pruning strategies.
    """
    n = signs.shape[0]
    ones = int((signs == 1).sum())
    bad = n * (n - 1) - ones
    if bad > (n * n) >> 3:
        return None
    src, dst = np.nonzero(signs != 1)
    off = src != dst
    return src[off], dst[off]


def prune_factions(
    a: Iterable[int], b: Iterable[int], g: SignedGraph
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Prune two disjoint factions to the deterministic fixed point.

    Within each faction of size >= 2 every surviving pair is +1; if both
    pruned factions are nonempty every surviving cross pair is -1.  Removal
    order is ascending node index, intra-faction (A then B) before cross.
    """
    a_idx = _as_index_array(a)
    b_idx = _as_index_array(b)
    if np.intersect1d(a_idx, b_idx).size:
        raise ValueError("factions must be disjoint")
    a_idx, b_idx = _prune(a_idx, b_idx, g.signs)
    return tuple(int(v) for v in a_idx), tuple(int(v) for v in b_idx)


def expand(
    a: Iterable[int],
    b: Iterable[int],
    g: SignedGraph,
    candidates: Sequence[int],
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Single ascending sweep admitting candidates into a faction.

    A candidate joins A iff its sign is +1 to every current member of A and
    -1 to every current member of B; it joins B under the mirror condition.
    Factions grow during the sweep, so later candidates are checked against
    earlier admissions too.  There is no second sweep.
    """
    signs = g.signs
    a_list = sorted(int(v) for v in a)
    b_list = sorted(int(v) for v in b)
    cand = np.asarray(sorted(set(int(v) for v in candidates)), dtype=np.intp)
    if cand.size == 0:
        return tuple(a_list), tuple(b_list)

    a_rows = signs[np.ix_(np.asarray(a_list, dtype=np.intp), cand)]
    b_rows = signs[np.ix_(np.asarray(b_list, dtype=np.intp), cand)]
    ok_a = (a_rows == 1).all(axis=0) & (b_rows == -1).all(axis=0)
    ok_b = (a_rows == -1).all(axis=0) & (b_rows == 1).all(axis=0)

    for pos in range(cand.size):
        joins_a = bool(ok_a[pos])
        if not joins_a and not ok_b[pos]:
            continue
        node = int(cand[pos])
        row = signs[node, cand]
        if joins_a:
            a_list.append(node)
            ok_a &= row == 1
            ok_b &= row == -1
        else:
            b_list.append(node)
            ok_a &= row == -1
            ok_b &= row == 1
    return tuple(sorted(a_list)), tuple(sorted(b_list))


def detect(g: SignedGraph, cfg: DetectConfig | None = None) -> Module:
    """Run the full seed loop and return the largest module found.

    Seeds are the top min(max_seeds, N) nodes by impact (ties broken by
    ascending index); zero-impact seeds are skipped.  Candidates for
    expansion must carry a nonzero sign to every current module member.
    Returns the empty module when nothing of size >= min_size is found.
    """
    if cfg is None:
        cfg = DetectConfig()
    signs = g.signs
    n = g.n
    impacts = node_impacts(g)
    order = np.argsort(-impacts, kind="stable")
    bad_pairs = _collect_bad_pairs(signs)

    best_size = 0
    best_a: tuple[int, ...] = ()
    best_b: tuple[int, ...] = ()
    for rank in range(min(cfg.max_seeds, n)):
        seed = int(order[rank])
        if impacts[seed] == 0:
            continue
        row = signs[seed]
        a0 = np.flatnonzero(row == 1)
        a0 = np.sort(np.append(a0, seed))
        b0 = np.flatnonzero(row == -1)
        a_idx, b_idx = _prune(a0, b0, signs, bad_pairs)

        module = np.concatenate([a_idx, b_idx])
        module.sort()
        cand_mask = np.ones(n, dtype=bool)
        cand_mask[module] = False
        cand_mask &= impacts >= module.size  # necessary for nonzero ties to all
        cand = np.flatnonzero(cand_mask)
        if cand.size and module.size:
            strong = (signs[np.ix_(cand, module)] != 0).all(axis=1)
            cand = cand[strong]
        a_fin, b_fin = expand(a_idx, b_idx, g, cand)

        size = len(a_fin) + len(b_fin)
        if size > best_size:
            best_size = size
            best_a, best_b = a_fin, b_fin

    if best_size < cfg.min_size:
        return Module.empty(cfg.sigma)
    return Module(best_a, best_b, cfg.sigma).canonical()
