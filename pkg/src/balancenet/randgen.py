"""Seeded random signed graphs and planted-module benchmark instances.

Per-pair randomness is counter-based: the value for pair (i, j) is a 64-bit
hash of (seed, stream, i*n + j), so the sample is independent of generation
order and safe to produce in parallel.  The mixing function is the
SplitMix64 finalizer, applied twice to decorrelate the seed from the pair
counter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from balancenet.corrnet import ValidatedCorrMatrix
from balancenet.signedgraph import SignedGraph

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MULT_A = 0xBF58476D1CE4E5B9
_MULT_B = 0x94D049BB133111EB

# stream tags keep the sign draw and the weak-weight draw independent
_STREAM_SIGN = 0
_STREAM_WEIGHT = 1

# planted weak-sector edge law: absent / weakly positive / weakly negative
_P_ABSENT = 0.30
_P_WEAK_POS = 0.35


def _mix64_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MULT_A) & _MASK
    z = ((z ^ (z >> 27)) * _MULT_B) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """Derive an independent 63-bit sub-seed from a master seed and indices."""
    h = _mix64_int(seed)
    for p in path:
        h = _mix64_int(h ^ _mix64_int((p + 1) * _GAMMA))
    return h >> 1


def _mix64_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MULT_A)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MULT_B)
        return z ^ (z >> np.uint64(31))


def _pair_words(seed: int, stream: int, keys: np.ndarray) -> np.ndarray:
    base = np.uint64(_mix64_int(seed ^ _mix64_int((stream + 1) * _GAMMA)))
    with np.errstate(over="ignore"):
        return _mix64_array(base + keys.astype(np.uint64) * np.uint64(_GAMMA))


def _pair_u01(seed: int, stream: int, keys: np.ndarray) -> np.ndarray:
    """Uniforms on [0, 1) with 53-bit resolution, one per key."""
    words = _pair_words(seed, stream, keys)
    return (words >> np.uint64(11)).astype(np.float64) * (0.5**53)


def _pair_u01_open(seed: int, stream: int, keys: np.ndarray) -> np.ndarray:
    """Uniforms on the open interval (0, 1): grid midpoints, never 0 or 1."""
    words = _pair_words(seed, stream, keys)
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * (0.5**53)


def pair_uniform(seed: int, i: int, j: int, n: int, stream: int = _STREAM_SIGN) -> float:
    """The [0, 1) uniform used for the unordered pair (i, j) of an n-node graph.

    Exposed so tests can confirm that samples are a pure function of
    (seed, i, j) regardless of how generation was batched.
    """
    if i == j:
        raise ValueError("pair requires two distinct nodes")
    if i > j:
        i, j = j, i
    keys = np.asarray([i * n + j], dtype=np.uint64)
    return float(_pair_u01(seed, stream, keys)[0])


@dataclass(frozen=True)
class SignedModelParams:
    """Edge law for the random signed graph: +1 w.p. alpha, -1 w.p. beta."""

    n: int
    alpha_edge: float
    beta_edge: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.alpha_edge <= 1.0:
            raise ValueError("alpha_edge must lie in (0, 1]")
        if not 0.0 <= self.beta_edge < 1.0:
            raise ValueError("beta_edge must lie in [0, 1)")
        if self.alpha_edge + self.beta_edge > 1.0 + 1e-15:
            raise ValueError("alpha_edge + beta_edge must not exceed 1")


@dataclass(frozen=True)
class PlantedInstance:
    """Synthetic validated matrix with a known ground-truth module.

    Core edges are exactly +1 inside factions and -1 across; every pair
    touching the remainder set is strictly weaker than ``sigma`` in absolute
    value, so the planted core is the unique largest balanced module.
    """

    matrix: ValidatedCorrMatrix
    truth_a: tuple[int, ...]
    truth_b: tuple[int, ...]
    sigma: float

    @property
    def truth_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.truth_a + self.truth_b))


def sample_signed(params: SignedModelParams) -> SignedGraph:
    """Draw a random signed graph under the given edge law.

    Each unordered pair independently becomes +1 with probability alpha,
    -1 with probability beta, and 0 otherwise.  Identical parameters and
    seed always reproduce the identical graph.
    """
    n = params.n
    alpha = params.alpha_edge
    beta = params.beta_edge
    signs = np.zeros((n, n), dtype=np.int8)
    for i in range(n - 1):
        j = np.arange(i + 1, n, dtype=np.uint64)
        u = _pair_u01(params.seed, _STREAM_SIGN, np.uint64(i) * np.uint64(n) + j)
        row = np.zeros(n - i - 1, dtype=np.int8)
        row[u < alpha] = 1
        row[(u >= alpha) & (u < alpha + beta)] = -1
        signs[i, i + 1 :] = row
        signs[i + 1 :, i] = row
    return SignedGraph(signs=signs)


def plant_lscbm(
    n: int, n_a: int, n_b: int, sigma: float, seed: int
) -> PlantedInstance:
    """Build a validated matrix whose largest balanced module is known.

    A random subset of n_a + n_b nodes is split into factions A and B with
    +1 edges inside each faction and -1 edges across.  Every pair touching
    the remaining nodes is absent with probability 0.3, weakly positive with
    probability 0.35, or weakly negative with probability 0.35, with weak
    magnitudes drawn from the open interval (0, sigma).
    """
    if n_a < 0 or n_b < 0 or n_a + n_b > n:
        raise ValueError("faction sizes must be nonnegative and fit in n")
    core = n_a + n_b
    if core != 0 and core < 3:
        raise ValueError("planted core needs at least 3 nodes (or none at all)")
    if not 0.0 < sigma <= 1.0:
        raise ValueError("sigma must lie in (0, 1]")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    perm = rng.permutation(n)
    truth_a = np.sort(perm[:n_a])
    truth_b = np.sort(perm[n_a : n_a + n_b])

    side = np.zeros(n, dtype=np.int8)  # +1 in A, -1 in B, 0 in remainder
    side[truth_a] = 1
    side[truth_b] = -1
    in_core = side != 0

    # weak weights must stay strictly inside (-sigma, sigma)
    top = np.nextafter(sigma, 0.0)

    values = np.zeros((n, n), dtype=np.float64)
    for i in range(n - 1):
        j = np.arange(i + 1, n, dtype=np.uint64)
        keys = np.uint64(i) * np.uint64(n) + j
        u_cat = _pair_u01(seed, _STREAM_SIGN, keys)
        u_mag = _pair_u01_open(seed, _STREAM_WEIGHT, keys)
        mag = np.clip(u_mag * sigma, np.nextafter(0.0, 1.0), top)
        row = np.where(
            u_cat < _P_ABSENT,
            0.0,
            np.where(u_cat < _P_ABSENT + _P_WEAK_POS, mag, -mag),
        )
        if in_core[i]:
            core_cols = in_core[i + 1 :]
            row[core_cols] = np.where(
                side[i + 1 :][core_cols] == side[i], 1.0, -1.0
            )
        values[i, i + 1 :] = row
        values[i + 1 :, i] = row
    np.fill_diagonal(values, 1.0)

    matrix = ValidatedCorrMatrix(values=values, t_len=None, alpha_level=None)
    return PlantedInstance(
        matrix=matrix,
        truth_a=tuple(int(v) for v in truth_a),
        truth_b=tuple(int(v) for v in truth_b),
        sigma=sigma,
    )
