"""
Benchmark Generator

Seeded generation of graphs with a planted community structure:

* planted partition: c near-equal communities, independent edges with
  probability p_in inside and p_out across communities;
* LFR-lite: power-law degrees and community sizes, each node keeping a
  fraction 1 - mu of its links inside its community, wired by stub
  matching followed by bounded rewiring sweeps.

All randomness comes from numpy's PCG64 bit generator seeded with the
configured 64-bit seed, so a configuration always yields the same graph.
Nodes are labelled 1..n and communities 1..c.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from src.graph.graph_model import Graph, serialize_edge_list
from src.partition.partition_model import Partition, serialize_partition
from src.utils.exceptions import ConfigurationError, GenerationError, InputError, UndefinedMeasureError

logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1
REWIRE_TRIES = 50


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


@dataclass(frozen=True)
class PlantedConfig:
    """Parameters of the planted-partition generator."""

    n: int = 1000
    c: int = 10
    mu: float = 0.3
    avg_degree: float = 20.0
    seed: int = 42

    def __post_init__(self):
        if not self.n >= self.c >= 1:
            raise ConfigurationError(f"need n >= c >= 1, got n={self.n}, c={self.c}")
        if not 0.0 <= self.mu < 1.0:
            raise ConfigurationError(f"mu must lie in [0, 1), got {self.mu}")
        if not 0.0 < self.avg_degree < self.n - 1:
            raise ConfigurationError(
                f"avg_degree must lie in (0, n-1), got {self.avg_degree}"
            )


@dataclass(frozen=True)
class LfrConfig:
    """Parameters of the LFR-lite generator."""

    n: int = 1000
    mu: float = 0.3
    gamma: float = 2.5
    beta_c: float = 2.0
    avg_degree: float = 20.0
    max_degree: int = 50
    min_community: int = 20
    max_community: int = 100
    seed: int = 42
    max_sweeps: int = 100
    max_retries: int = 20

    def __post_init__(self):
        if self.n < 2:
            raise ConfigurationError(f"n must be at least 2, got {self.n}")
        if not 0.0 <= self.mu < 1.0:
            raise ConfigurationError(f"mu must lie in [0, 1), got {self.mu}")
        if self.gamma <= 1.0 or self.beta_c <= 1.0:
            raise ConfigurationError("gamma and beta_c must be greater than 1")
        if not 1 <= self.max_degree < self.n:
            raise ConfigurationError(f"max_degree must lie in [1, n), got {self.max_degree}")
        if not 1.0 <= self.avg_degree <= self.max_degree:
            raise ConfigurationError(
                f"avg_degree must lie in [1, max_degree], got {self.avg_degree}"
            )
        if not 1 <= self.min_community <= self.max_community <= self.n:
            raise ConfigurationError(
                "need 1 <= min_community <= max_community <= n, got "
                f"{self.min_community}, {self.max_community}, n={self.n}"
            )
        if self.max_sweeps < 1 or self.max_retries < 1:
            raise ConfigurationError("max_sweeps and max_retries must be positive")


# Shared helpers ------------------------------------------------------------

def _build(n: int, edges: Sequence[Tuple[int, int]], membership: np.ndarray) -> Tuple[Graph, Partition]:
    """Graph and partition over nodes 1..n from 0-based edges and memberships."""
    edges = sorted(edges)
    sources = np.array([u for u, _ in edges], dtype=np.int64)
    targets = np.array([v for _, v in edges], dtype=np.int64)
    nodes = tuple(str(i + 1) for i in range(n))
    graph = Graph(nodes, sources, targets, np.ones(len(edges)))
    partition = Partition.from_assignment(
        (node, int(membership[i]) + 1) for i, node in enumerate(nodes)
    )
    return graph, partition


def empirical_mixing(g: Graph, p: Partition) -> float:
    """
    Fraction of edges whose endpoints lie in different communities.

    Raises:
        UndefinedMeasureError: If the graph has no edges
    """
    if g.edge_count == 0:
        raise UndefinedMeasureError("mixing of an edgeless graph")
    inside = g.internal_mask(p)
    return float(1.0 - inside.sum() / g.edge_count)


# Planted partition -----------------------------------------------------------

def planted_probabilities(cfg: PlantedConfig) -> Tuple[float, float, np.ndarray]:
    """
    Community sizes and the edge probabilities that hit the targets.

    The expected edge count is n·avg_degree/2, of which a fraction mu
    crosses communities.

    Returns:
        (p_in, p_out, sizes)

    Raises:
        GenerationError: If a probability falls outside [0, 1]
    """
    base, extra = divmod(cfg.n, cfg.c)
    sizes = np.array([base + 1] * extra + [base] * (cfg.c - extra), dtype=np.int64)
    pairs_in = int(np.sum(sizes * (sizes - 1) // 2))
    pairs_out = cfg.n * (cfg.n - 1) // 2 - pairs_in
    expected_edges = cfg.n * cfg.avg_degree / 2.0

    if pairs_in == 0:
        raise GenerationError("communities of one node cannot hold internal edges")
    p_in = (1.0 - cfg.mu) * expected_edges / pairs_in
    if pairs_out == 0:
        if cfg.mu > 0:
            raise GenerationError("a single community cannot have inter-community edges")
        p_out = 0.0
    else:
        p_out = cfg.mu * expected_edges / pairs_out

    for name, value in (('p_in', p_in), ('p_out', p_out)):
        if not 0.0 <= value <= 1.0:
            raise GenerationError(
                f"infeasible configuration: {name}={value:.4f} outside [0, 1]"
            )
    return p_in, p_out, sizes


def generate_planted(cfg: PlantedConfig) -> Tuple[Graph, Partition]:
    """
    Generate a planted-partition graph.

    Args:
        cfg: Generator configuration

    Returns:
        (graph, reference partition)

    Raises:
        GenerationError: If the configuration is infeasible
    """
    p_in, p_out, sizes = planted_probabilities(cfg)
    membership = np.repeat(np.arange(cfg.c), sizes)
    rng = make_rng(cfg.seed)

    edges: List[Tuple[int, int]] = []
    for u in range(cfg.n - 1):
        others = np.arange(u + 1, cfg.n)
        probabilities = np.where(membership[others] == membership[u], p_in, p_out)
        kept = others[rng.random(len(others)) < probabilities]
        edges.extend((u, int(v)) for v in kept)

    graph, partition = _build(cfg.n, edges, membership)
    logger.info(
        f"Planted partition: n={cfg.n}, c={cfg.c}, p_in={p_in:.4f}, "
        f"p_out={p_out:.5f}, m={graph.edge_count}"
    )
    return graph, partition


# LFR-lite ------------------------------------------------------------------

def _power_law_mean(a: float, b: float, exponent: float) -> float:
    """Mean of the continuous power law x^-exponent truncated to [a, b]."""
    if np.isclose(exponent, 1.0):
        return (b - a) / np.log(b / a)
    if np.isclose(exponent, 2.0):
        return np.log(b / a) / (1.0 / a - 1.0 / b)
    e1, e2 = 1.0 - exponent, 2.0 - exponent
    return (e1 / e2) * (b ** e2 - a ** e2) / (b ** e1 - a ** e1)


def sample_power_law(
    rng: np.random.Generator,
    size: int,
    exponent: float,
    low: float,
    high: float
) -> np.ndarray:
    """Inverse-CDF samples of x^-exponent on [low, high] (continuous)."""
    u = rng.random(size)
    if low == high:
        return np.full(size, float(low))
    e1 = 1.0 - exponent
    if np.isclose(exponent, 1.0):
        return low * (high / low) ** u
    return (low ** e1 + u * (high ** e1 - low ** e1)) ** (1.0 / e1)


def degree_lower_bound(avg_degree: float, max_degree: int, gamma: float) -> float:
    """
    Lower cutoff of the degree law whose truncated mean equals ``avg_degree``.

    Raises:
        GenerationError: If no cutoff in [1, max_degree] reaches the mean
    """
    if np.isclose(avg_degree, max_degree):
        return float(max_degree)
    if _power_law_mean(1.0, max_degree, gamma) > avg_degree:
        raise GenerationError(
            f"average degree {avg_degree} is below what gamma={gamma} allows with max_degree={max_degree}"
        )
    return brentq(
        lambda a: _power_law_mean(a, max_degree, gamma) - avg_degree,
        1.0, max_degree - 1e-9
    )


def sample_degrees(cfg: LfrConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Integer degree sequence in [1, max_degree] with an even sum.

    An odd sum is fixed by raising a degree below the cap or, when every
    node sits at the cap, by lowering a degree above 1.

    Raises:
        GenerationError: If neither adjustment is possible
    """
    low = degree_lower_bound(cfg.avg_degree, cfg.max_degree, cfg.gamma)
    raw = sample_power_law(rng, cfg.n, cfg.gamma, low, cfg.max_degree)
    degrees = np.clip(np.rint(raw), 1, cfg.max_degree).astype(np.int64)
    if degrees.sum() % 2:
        candidates = np.flatnonzero(degrees < cfg.max_degree)
        if len(candidates):
            degrees[candidates[rng.integers(len(candidates))]] += 1
        else:
            candidates = np.flatnonzero(degrees > 1)
            if not len(candidates):
                raise GenerationError("stub parity unresolvable")
            degrees[candidates[rng.integers(len(candidates))]] -= 1
    return degrees


def sample_community_sizes(cfg: LfrConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Community sizes from a power law within [min_community, max_community] summing to n.

    Raises:
        GenerationError: If the bounds cannot accommodate n nodes
    """
    sizes: List[int] = []
    total = 0
    while total < cfg.n:
        size = int(np.rint(sample_power_law(rng, 1, cfg.beta_c, cfg.min_community,
                                            cfg.max_community)[0]))
        if total + size > cfg.n:
            size = cfg.n - total
        sizes.append(size)
        total += size

    sizes_arr = np.array(sizes, dtype=np.int64)
    # a short tail community is folded into the others
    if sizes_arr[-1] < cfg.min_community and len(sizes_arr) > 1:
        leftover = int(sizes_arr[-1])
        sizes_arr = sizes_arr[:-1]
        while leftover:
            room = np.flatnonzero(sizes_arr < cfg.max_community)
            if len(room) == 0:
                raise GenerationError(
                    f"community size bounds [{cfg.min_community}, {cfg.max_community}] "
                    f"cannot hold {cfg.n} nodes"
                )
            sizes_arr[room[rng.integers(len(room))]] += 1
            leftover -= 1
    return sizes_arr


def split_degrees(
    degrees: np.ndarray,
    mu: float,
    rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """Internal/external split with E[k_in] = (1 - mu)·d (stochastic rounding)."""
    target = (1.0 - mu) * degrees
    internal = np.floor(target).astype(np.int64)
    internal += (rng.random(len(degrees)) < (target - internal)).astype(np.int64)
    return internal, degrees - internal


def assign_communities(
    internal: np.ndarray,
    sizes: np.ndarray,
    rng: np.random.Generator
) -> Optional[np.ndarray]:
    """
    Place every node in a community large enough for its internal degree.

    Nodes are placed by decreasing internal degree into a community chosen
    with probability proportional to its free slots.

    Returns:
        Membership array, or None when a node finds no suitable community
    """
    free = sizes.copy()
    membership = np.empty(len(internal), dtype=np.int64)
    order = np.argsort(-internal, kind='stable')
    for node in order:
        suitable = (free > 0) & (sizes - 1 >= internal[node])
        if not suitable.any():
            return None
        slots = np.where(suitable, free, 0).astype(np.float64)
        community = rng.choice(len(sizes), p=slots / slots.sum())
        membership[node] = community
        free[community] -= 1
    return membership


def _fix_parity(
    internal: np.ndarray,
    external: np.ndarray,
    membership: np.ndarray,
    sizes: np.ndarray
) -> bool:
    """
    Make every community's internal stub count and the external stub count even.

    An odd community first tries to turn one external stub of a member
    into an internal one, then drops one internal stub. Returns False when
    neither is possible.
    """
    for community in range(len(sizes)):
        members = np.flatnonzero(membership == community)
        if internal[members].sum() % 2 == 0:
            continue
        convertible = members[(external[members] > 0) & (internal[members] < sizes[community] - 1)]
        if len(convertible):
            node = convertible[0]
            internal[node] += 1
            external[node] -= 1
            continue
        droppable = members[internal[members] + external[members] >= 2]
        droppable = droppable[internal[droppable] > 0]
        if not len(droppable):
            return False
        internal[droppable[0]] -= 1

    if external.sum() % 2:
        droppable = np.flatnonzero((external > 0) & (internal + external >= 2))
        if not len(droppable):
            return False
        external[droppable[0]] -= 1
    return True


class _EdgePool:
    """Edge set with O(1) random picks and removals, insertion-ordered."""

    def __init__(self):
        self.edges: List[Tuple[int, int]] = []
        self.position: Dict[Tuple[int, int], int] = {}

    def __contains__(self, key: Tuple[int, int]) -> bool:
        return key in self.position

    def add(self, key: Tuple[int, int]) -> None:
        self.position[key] = len(self.edges)
        self.edges.append(key)

    def remove(self, key: Tuple[int, int]) -> None:
        index = self.position.pop(key)
        last = self.edges.pop()
        if index < len(self.edges):
            self.edges[index] = last
            self.position[last] = index


def _key(u: int, v: int) -> Tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _swap(
    pool: _EdgePool,
    pair: Tuple[int, int],
    rng: np.random.Generator,
    acceptable: Callable[[int, int], bool],
    tries: int
) -> bool:
    """Replace bad pair (a, b) and a good edge (c, d) by (a, c), (b, d) or (a, d), (b, c)."""
    a, b = pair
    for _ in range(min(tries, len(pool.edges))):
        c, d = pool.edges[rng.integers(len(pool.edges))]
        pool.remove((c, d))
        for (p, q), (r, s) in (((a, c), (b, d)), ((a, d), (b, c))):
            if acceptable(p, q) and _key(p, q) != _key(r, s) and acceptable(r, s):
                pool.add(_key(p, q))
                pool.add(_key(r, s))
                return True
        pool.add((c, d))
    return False


def match_stubs(
    stubs: np.ndarray,
    rng: np.random.Generator,
    allowed: Callable[[int, int], bool],
    existing: Optional[set] = None,
    max_sweeps: int = 100,
    tries_per_sweep: int = REWIRE_TRIES
) -> Optional[List[Tuple[int, int]]]:
    """
    Configuration-model matching of ``stubs`` with rewiring of bad pairs.

    A pair is bad when it is a self-loop, repeats an edge (also one in
    ``existing``) or is rejected by ``allowed``. Each sweep tries to
    resolve every bad pair by a double-edge swap with one of up to
    ``tries_per_sweep`` randomly drawn good edges.

    Returns:
        Edge list, or None when bad pairs remain after ``max_sweeps`` sweeps
    """
    existing = existing or set()
    stubs = stubs.copy()
    rng.shuffle(stubs)
    pool = _EdgePool()
    bad: List[Tuple[int, int]] = []

    def acceptable(u: int, v: int) -> bool:
        key = _key(u, v)
        return u != v and allowed(u, v) and key not in pool and key not in existing

    for u, v in stubs.reshape(-1, 2).tolist():
        if acceptable(u, v):
            pool.add(_key(u, v))
        else:
            bad.append((u, v))

    for _ in range(max_sweeps):
        if not bad:
            break
        bad = [pair for pair in bad if not _swap(pool, pair, rng, acceptable, tries_per_sweep)]

    if bad:
        return None
    return list(pool.edges)


def _wire(
    cfg: LfrConfig,
    internal: np.ndarray,
    external: np.ndarray,
    membership: np.ndarray,
    sizes: np.ndarray,
    rng: np.random.Generator
) -> Optional[List[Tuple[int, int]]]:
    """Intra-community matching per community, then inter-community matching."""
    edges: List[Tuple[int, int]] = []
    for community in range(len(sizes)):
        members = np.flatnonzero(membership == community)
        stubs = np.repeat(members, internal[members])
        if len(stubs) == 0:
            continue
        matched = match_stubs(stubs, rng, lambda u, v: True, max_sweeps=cfg.max_sweeps)
        if matched is None:
            logger.warning(f"Intra-community rewiring failed in community {community + 1}")
            return None
        edges.extend(matched)

    stubs = np.repeat(np.arange(cfg.n), external)
    if len(stubs):
        matched = match_stubs(
            stubs, rng,
            lambda u, v: membership[u] != membership[v],
            existing=set(edges),
            max_sweeps=cfg.max_sweeps,
        )
        if matched is None:
            logger.warning("Inter-community rewiring failed")
            return None
        edges.extend(matched)
    return edges


def generate_lfr(cfg: LfrConfig) -> Tuple[Graph, Partition]:
    """
    Generate an LFR-lite benchmark graph.

    Args:
        cfg: Generator configuration

    Returns:
        (graph, reference partition)

    Raises:
        GenerationError: If no valid graph is found within ``max_retries``
            attempts (community assignment or rewiring failure) or stub
            parity cannot be resolved
    """
    rng = make_rng(cfg.seed)
    last_reason = "no attempt made"

    for attempt in range(1, cfg.max_retries + 1):
        degrees = sample_degrees(cfg, rng)
        sizes = sample_community_sizes(cfg, rng)
        internal, external = split_degrees(degrees, cfg.mu, rng)

        membership = assign_communities(internal, sizes, rng)
        if membership is None:
            last_reason = "community assignment infeasible"
            logger.warning(f"LFR attempt {attempt}: {last_reason}, retrying")
            continue

        if not _fix_parity(internal, external, membership, sizes):
            raise GenerationError("stub parity unresolvable")

        edges = _wire(cfg, internal, external, membership, sizes, rng)
        if edges is None:
            last_reason = f"rewiring did not converge within {cfg.max_sweeps} sweeps"
            logger.warning(f"LFR attempt {attempt}: {last_reason}, retrying")
            continue

        graph, partition = _build(cfg.n, edges, membership)
        logger.info(
            f"LFR-lite: n={cfg.n}, communities={len(sizes)}, m={graph.edge_count}, "
            f"attempts={attempt}"
        )
        return graph, partition

    raise GenerationError(f"LFR generation failed after {cfg.max_retries} attempts: {last_reason}")


def write_benchmark(
    graph: Graph,
    partition: Partition,
    graph_path: Union[str, Path],
    communities_path: Union[str, Path]
) -> None:
    """
    Write the edge-list and partition files of a generated benchmark.

    Raises:
        InputError: If a file or its directory cannot be written
    """
    for path, text in ((graph_path, serialize_edge_list(graph)),
                       (communities_path, serialize_partition(partition))):
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8', newline='\n')
        except OSError as e:
            raise InputError(f"cannot write file: {e.strerror or e}", str(path)) from e
    logger.info(f"Wrote benchmark to {graph_path} and {communities_path}")
