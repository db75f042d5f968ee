"""Graph family catalog: generators, schedules, weights, source/sink repair.

Each family produces a sequence of graphs indexed by a single integer n.
Deterministic families are rebuilt from scratch; random families draw from a
per-instance PCG64 stream derived by hashing (base seed, family id, n), so
instances are reproducible and order-independent.  Exact edge sets of other
implementations' random streams are out of scope; only self-consistency and
family-level statistics are promised.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import networkx as nx
import numpy as np
import scipy.sparse
import scipy.sparse.linalg
from networkx.generators.directed import random_uniform_k_out_graph

from .graphs import Graph
from .growth import GrowthClass

log = logging.getLogger(__name__)

WEIGHT_RULES = ("unit", "log_rule", "linear_rule", "quadratic_rule")
DEFAULT_UNDIRECTED_SEED = 23
DEFAULT_DIRECTED_SEED = 19
REDRAW_LIMIT = 100
EXPANDER_RETRY_LIMIT = 200
RAMANUJAN_BOUND = 2.0 * math.sqrt(5.0)  # regularity 6

BuildResult = Union[Graph, tuple[Graph, tuple[str, ...]]]


def derive_seed(base_seed: int, family_id: str, n: int) -> int:
    """Stable 64-bit per-instance seed from (base seed, family, index)."""
    digest = hashlib.sha256(f"{base_seed}/{family_id}/{n}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# ---------------------------------------------------------------------------
# networkx conversion

def _index_map(nodes: Iterable) -> dict:
    return {v: i for i, v in enumerate(sorted(nodes))}


def _from_nx_undirected(g: "nx.Graph") -> Graph:
    idx = _index_map(g.nodes())
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int, float]] = []
    for u, v in g.edges():
        if u == v:
            continue
        a, b = idx[u], idx[v]
        if a > b:
            a, b = b, a
        if (a, b) in seen:
            continue
        seen.add((a, b))
        edges.append((a, b, 1.0))
    return Graph(len(idx), tuple(edges), directed=False)


def _from_nx_directed(g: "nx.DiGraph") -> Graph:
    # Self-loops, parallel duplicates, and the reverse of an already kept
    # edge are dropped in emission order; generator insertion order is
    # deterministic, so so is the surviving orientation.
    idx = _index_map(g.nodes())
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int, float]] = []
    for u, v in g.edges():
        if u == v:
            continue
        a, b = idx[u], idx[v]
        if (a, b) in seen or (b, a) in seen:
            continue
        seen.add((a, b))
        edges.append((a, b, 1.0))
    return Graph(len(idx), tuple(edges), directed=True)


# ---------------------------------------------------------------------------
# hand-built constructions

def _hypercube(n: int) -> Graph:
    size = 1 << n
    edges = []
    for v in range(size):
        for b in range(n):
            u = v | (1 << b)
            if u != v:
                edges.append((v, u, 1.0))
    return Graph(size, tuple(edges), directed=False)


def _generalized_hypercube(m: int, a: int) -> Graph:
    """Vertices are m-tuples over {0..a-1}; edges join tuples differing in
    exactly one coordinate.  Labels are base-a integer encodings."""
    if a < 2 or m < 1:
        raise ValueError("generalized hypercube needs a >= 2, m >= 1")
    size = a**m
    edges = []
    for v in range(size):
        for pos in range(m):
            p = a**pos
            digit = (v // p) % a
            for other in range(digit + 1, a):
                edges.append((v, v + (other - digit) * p, 1.0))
    return Graph(size, tuple(edges), directed=False)


def _modified_mgg(n: int) -> Graph:
    """Z_n x Z_n with the four affine neighbor rules, loops and parallel
    edges dropped.  Vertex (x, y) gets label x*n + y."""
    if n < 2:
        raise ValueError("grid side must be at least 2")
    seen: set[tuple[int, int]] = set()
    edges = []
    for x in range(n):
        for y in range(n):
            a = x * n + y
            for tx, ty in (
                ((x + 2 * y) % n, y),
                ((x + 2 * y + 1) % n, y),
                (x, (y + 2 * x) % n),
                (x, (y + 2 * x + 1) % n),
            ):
                b = tx * n + ty
                if a == b:
                    continue
                key = (min(a, b), max(a, b))
                if key in seen:
                    continue
                seen.add(key)
                edges.append((*key, 1.0))
    return Graph(n * n, tuple(edges), directed=False)


def _directed_hypercube(n: int) -> Graph:
    # edge toward the endpoint of larger Hamming weight
    size = 1 << n
    edges = []
    for v in range(size):
        for b in range(n):
            u = v | (1 << b)
            if u != v:
                edges.append((v, u, 1.0))
    return Graph(size, tuple(edges), directed=True)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def _paley(q: int) -> Graph:
    if not _is_prime(q) or q % 4 != 3:
        raise ValueError(f"paley needs a prime = 3 (mod 4), got {q}")
    residues = {pow(x, 2, q) for x in range(1, q)}
    edges = []
    for u in range(q):
        for w in range(q):
            if u != w and (u - w) % q in residues:
                edges.append((u, w, 1.0))
    return Graph(q, tuple(edges), directed=True)


def _adjacency_lambda2(g: "nx.Graph") -> float:
    n = g.number_of_nodes()
    a = nx.adjacency_matrix(g, nodelist=sorted(g.nodes())).astype(float)
    if n <= 400:
        vals = np.linalg.eigvalsh(a.toarray())
        return float(vals[-2])
    vals = scipy.sparse.linalg.eigsh(a, k=2, which="LA", return_eigenvectors=False)
    return float(np.sort(vals)[0])


def _expander(n: int, rng: np.random.Generator) -> BuildResult:
    for _ in range(EXPANDER_RETRY_LIMIT):
        cand = nx.random_regular_graph(6, n, seed=rng)
        if _adjacency_lambda2(cand) <= RAMANUJAN_BOUND + 1e-9:
            return _from_nx_undirected(cand)
    g = _from_nx_undirected(cand)
    return g, (f"no Ramanujan graph within {EXPANDER_RETRY_LIMIT} retries at n={n}",)


# ---------------------------------------------------------------------------
# source/sink repair

def _draw_from(rng: np.random.Generator, pool: Sequence[int], admissible) -> Optional[int]:
    for _ in range(REDRAW_LIMIT):
        y = pool[int(rng.integers(len(pool)))]
        if admissible(y):
            return y
    # Bounded redraws exhausted; scan deterministically so the postcondition
    # (no sources or sinks) still holds whenever a legal choice exists.
    for y in pool:
        if admissible(y):
            return y
    return None


def repair_sources_sinks(g: Graph, seed: int) -> Graph:
    """Rewire a digraph so every vertex has an incoming and outgoing edge.

    First pass fixes total-degree-1 vertices; then sources and sinks are
    paired off, with leftover vertices served by random partners.  Additions
    and reversals never create a bi-directed pair, and the vertex count is
    unchanged.  Idempotent: a clean graph comes back as-is.
    """
    if not g.directed:
        raise ValueError("repair applies to directed graphs")
    n = g.n_vertices
    if n < 3:
        raise ValueError("repair needs at least 3 vertices")
    edges: dict[tuple[int, int], float] = {(u, v): w for u, v, w in g.edges}
    indeg = [0] * n
    outdeg = [0] * n
    for u, v in edges:
        outdeg[u] += 1
        indeg[v] += 1
    rng = _rng(seed)

    def has(u: int, v: int) -> bool:
        return (u, v) in edges

    def add(u: int, v: int) -> None:
        edges[(u, v)] = 1.0
        outdeg[u] += 1
        indeg[v] += 1

    def reverse(u: int, v: int) -> None:
        del edges[(u, v)]
        outdeg[u] -= 1
        indeg[v] -= 1
        add(v, u)

    everyone = list(range(n))
    for v in range(n):
        if indeg[v] + outdeg[v] != 1:
            continue
        if indeg[v] == 1:
            u = next(a for (a, b) in edges if b == v)
            y = _draw_from(rng, everyone, lambda y: y not in (v, u) and not has(y, v))
            if y is not None:
                add(v, y)
        else:
            u = next(b for (a, b) in edges if a == v)
            y = _draw_from(rng, everyone, lambda y: y not in (v, u) and not has(v, y))
            if y is not None:
                add(y, v)

    sources = [v for v in range(n) if indeg[v] == 0]
    sinks = [v for v in range(n) if outdeg[v] == 0]

    def serve_sink(v: int, pool: Sequence[int]) -> None:
        # give sink v an outgoing edge; reversing an incoming edge is allowed
        # only when its tail keeps positive out-degree and v keeps positive
        # in-degree (else the reversal re-creates the defect it fixes)
        def ok(w: int) -> bool:
            if w == v:
                return False
            if has(w, v):
                return outdeg[w] > 1 and indeg[v] > 1
            return not has(v, w)

        w = _draw_from(rng, pool, ok)
        if w is None:
            return
        if has(w, v):
            reverse(w, v)
        else:
            add(v, w)

    def serve_source(v: int, pool: Sequence[int]) -> None:
        def ok(w: int) -> bool:
            if w == v:
                return False
            if has(v, w):
                return indeg[w] > 1 and outdeg[v] > 1
            return not has(w, v)

        w = _draw_from(rng, pool, ok)
        if w is None:
            return
        if has(v, w):
            reverse(v, w)
        else:
            add(w, v)

    if not sources and not sinks:
        log.debug("there are no source and sink vertices in the graph")
    elif not sources:
        non_sinks = [v for v in range(n) if outdeg[v] > 0]
        for v in sinks:
            serve_sink(v, non_sinks)
    elif not sinks:
        non_sources = [v for v in range(n) if indeg[v] > 0]
        for v in sources:
            serve_source(v, non_sources)
    else:
        # walk both lists in parallel: a single sink-to-source edge fixes
        # each pair unless it would collide with an existing edge; whatever
        # is left over draws random partners from the other list
        for src, snk in zip(sources, sinks):
            if src != snk and not has(snk, src) and not has(src, snk):
                add(snk, src)
        for src in sources:
            if indeg[src] == 0:
                serve_source(src, sinks)
            if indeg[src] == 0:
                serve_source(src, everyone)
        for snk in sinks:
            if outdeg[snk] == 0:
                serve_sink(snk, sources)
            if outdeg[snk] == 0:
                serve_sink(snk, everyone)

    return Graph(n, tuple((u, v, w) for (u, v), w in edges.items()), directed=True)


# ---------------------------------------------------------------------------
# weight rules

def apply_weight_rule(g: Graph, rule: str, family_id: str) -> Graph:
    """Reweight edges of a hypercube or modified-MGG graph.

    Hypercube: the rule value log(j+5), j+1 or j^2+1 (j the larger endpoint
    label) is the resistance of the edge, so the Laplacian weight stored here
    is its reciprocal.  High-label edges become weak links and the linear and
    quadratic rules open a condition-number gap that grows with N; direct
    weights cannot do that because every hypercube vertex touches a
    high-label edge.
    Modified MGG: with b = larger label + 1 (the rank n*r+s+1 of the
    lexicographically larger endpoint), the weights log(b)+1, b, b^2 enter
    the Laplacian directly.
    """
    if rule not in WEIGHT_RULES:
        raise ValueError(f"unknown weight rule {rule!r}")
    if rule == "unit":
        return g
    if family_id == "hypercube":
        def weigh(u: int, v: int) -> float:
            j = max(u, v)
            if rule == "log_rule":
                return 1.0 / math.log(j + 5)
            if rule == "linear_rule":
                return 1.0 / float(j + 1)
            return 1.0 / float(j * j + 1)
    elif family_id == "modified_mgg":
        def weigh(u: int, v: int) -> float:
            b = max(u, v) + 1
            if rule == "log_rule":
                return math.log(b) + 1.0
            if rule == "linear_rule":
                return float(b)
            return float(b * b)
    else:
        raise ValueError(f"weight rules are defined for hypercube and modified_mgg, not {family_id}")
    return Graph(
        g.n_vertices,
        tuple((u, v, weigh(u, v)) for u, v, _ in g.edges),
        directed=g.directed,
    )


# ---------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class CatalogEntry:
    family_id: str
    matrix_kind: str  # laplacian | incidence
    directed: bool
    random: bool
    size_growth: Union[GrowthClass, Callable[[Mapping], GrowthClass]]
    build: Callable[..., BuildResult]
    default_schedule: tuple[int, ...]
    default_params: Mapping = field(default_factory=dict)
    default_seed: Optional[int] = None
    weightable: bool = False

    def resolved_size_growth(self, params: Mapping) -> GrowthClass:
        if callable(self.size_growth):
            return self.size_growth(params)
        return self.size_growth


def _primes_3_mod_4(limit: int) -> tuple[int, ...]:
    return tuple(q for q in range(3, limit + 1) if q % 4 == 3 and _is_prime(q))


_N1 = GrowthClass.poly(1)
_N2 = GrowthClass.poly(2)
_EXP2 = GrowthClass.exponential(2)


def _und(fid, growth, build, schedule, params=None, seed=None, rand=False, weightable=False):
    return CatalogEntry(fid, "laplacian", False, rand, growth, build,
                        tuple(schedule), params or {}, seed, weightable)


def _dir(fid, growth, build, schedule, params=None, rand=False):
    seed = DEFAULT_DIRECTED_SEED if rand else None
    return CatalogEntry(fid, "incidence", True, rand, growth, build,
                        tuple(schedule), params or {}, seed)


def _nx_und(fn):
    return lambda n, params, rng: _from_nx_undirected(fn(n, params, rng))


def _nx_dir(fn):
    return lambda n, params, rng: _from_nx_directed(fn(n, params, rng))


_CATALOG_ENTRIES = [
    # -- undirected, deterministic ------------------------------------------
    _und("hypercube", _EXP2, lambda n, p, r: _hypercube(n), range(2, 15), weightable=True),
    CatalogEntry(
        "generalized_hypercube", "laplacian", False, False,
        lambda params: GrowthClass.exponential(int(params["a"])),
        lambda n, p, r: _generalized_hypercube(n, int(p["a"])),
        tuple(range(1, 8)), {"a": 2}, None, False,
    ),
    _und("modified_mgg", _N2, lambda n, p, r: _modified_mgg(n), range(5, 110), weightable=True),
    _und("sudoku", GrowthClass.poly(4), _nx_und(lambda n, p, r: nx.sudoku_graph(n)), range(2, 15)),
    _und("grid_2d", _N1, _nx_und(lambda n, p, r: nx.grid_2d_graph(102, n)), range(3, 52)),
    _und("grid_2d_square", GrowthClass.exponential(4),
         _nx_und(lambda n, p, r: nx.grid_2d_graph(2**n, 2**n)), range(2, 9)),
    _und("hexagonal", _N1, _nx_und(lambda n, p, r: nx.hexagonal_lattice_graph(n, 101)), range(1, 31)),
    _und("triangular", _N1, _nx_und(lambda n, p, r: nx.triangular_lattice_graph(n, 101)), range(1, 101)),
    _und("complete", _N1, _nx_und(lambda n, p, r: nx.complete_graph(n)), range(2, 5005)),
    _und("turan", _N1, _nx_und(lambda n, p, r: nx.turan_graph(n, 2)), range(5, 5004)),
    _und("harary_kn", _N1, _nx_und(lambda n, p, r: nx.hkn_harary_graph(3, n)), range(5, 5010)),
    _und("harary_mn", _N1, _nx_und(lambda n, p, r: nx.hnm_harary_graph(n, n + 1)), range(5, 5010)),
    _und("ladder", _N1, _nx_und(lambda n, p, r: nx.ladder_graph(n)), range(5, 2501)),
    _und("circular_ladder", _N1, _nx_und(lambda n, p, r: nx.circular_ladder_graph(n)), range(5, 2501)),
    _und("ring_of_cliques", _N1, _nx_und(lambda n, p, r: nx.ring_of_cliques(n, 3)), range(5, 1668)),
    _und("balanced_binary_tree", _EXP2, _nx_und(lambda n, p, r: nx.balanced_tree(2, n)), range(2, 15)),
    _und("balanced_ternary_tree", GrowthClass.exponential(3),
         _nx_und(lambda n, p, r: nx.balanced_tree(3, n)), range(2, 10)),
    _und("binomial_tree", _EXP2, _nx_und(lambda n, p, r: nx.binomial_tree(n)), range(2, 15)),
    # -- undirected, random (seed 23 unless noted) --------------------------
    _und("random_regular_expander", _N1, lambda n, p, r: _expander(n, r),
         range(9, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("barabasi_albert", _N1, _nx_und(lambda n, p, r: nx.barabasi_albert_graph(n, 3, seed=r)),
         range(5, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("newman_watts_strogatz", _N1,
         _nx_und(lambda n, p, r: nx.newman_watts_strogatz_graph(n, 3, 1.0, seed=r)),
         range(5, 5006), seed=19, rand=True),
    _und("random_regular", _N1, _nx_und(lambda n, p, r: nx.random_regular_graph(4, n, seed=r)),
         range(5, 5014), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("gnp", _N1, _nx_und(lambda n, p, r: nx.gnp_random_graph(n, 0.8, seed=r)),
         range(5, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("gaussian_random_partition", _N1,
         _nx_und(lambda n, p, r: nx.gaussian_random_partition_graph(n, 5, 5, 0.5, 0.4, seed=r)),
         range(5, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("geographical_threshold", _N1,
         _nx_und(lambda n, p, r: nx.geographical_threshold_graph(n, 10, seed=r)),
         range(5, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("soft_random_geometric", _N1,
         _nx_und(lambda n, p, r: nx.soft_random_geometric_graph(n, 1.0, seed=r)),
         range(5, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("thresholded_random_geometric", _N1,
         _nx_und(lambda n, p, r: nx.thresholded_random_geometric_graph(n, 1.0, 2.0, seed=r)),
         range(5, 5010), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("planted_partition", _N1,
         _nx_und(lambda n, p, r: nx.planted_partition_graph(2, n, 0.5, 0.4, seed=r)),
         range(5, 2508), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("random_geometric", _N1, _nx_und(lambda n, p, r: nx.random_geometric_graph(n, 1.0, seed=r)),
         range(7, 5009), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("uniform_random_intersection", _N1,
         _nx_und(lambda n, p, r: nx.uniform_random_intersection_graph(n, n - 3, 0.6, seed=r)),
         range(5, 3000), seed=DEFAULT_UNDIRECTED_SEED, rand=True),
    _und("random_lobster", _N1, _nx_und(lambda n, p, r: nx.random_lobster(n, 0.6, 0.5, seed=r)),
         range(10, 2001), seed=19, rand=True),
    # -- directed, deterministic --------------------------------------------
    _dir("paley", GrowthClass.poly(3), lambda n, p, r: _paley(n), _primes_3_mod_4(139)),
    _dir("directed_hypercube", _EXP2 * _N1, lambda n, p, r: _directed_hypercube(n), range(2, 15)),
    # -- directed, random (seed 19) -----------------------------------------
    _dir("gn", _N1, _nx_dir(lambda n, p, r: nx.gn_graph(n, kernel=lambda d: d, seed=r)),
         range(5, 5000), rand=True),
    _dir("gnc", _N2, _nx_dir(lambda n, p, r: nx.gnc_graph(n, seed=r)), range(5, 1201), rand=True),
    _dir("gnr", _N1, _nx_dir(lambda n, p, r: nx.gnr_graph(n, 0.5, seed=r)), range(5, 5000), rand=True),
    _dir("gaussian_random_partition_directed", _N2,
         _nx_dir(lambda n, p, r: nx.gaussian_random_partition_graph(
             n, 5, 5, 0.5, 0.4, directed=True, seed=r)),
         range(5, 171), rand=True),
    _dir("planted_partition_directed", _N2,
         _nx_dir(lambda n, p, r: nx.planted_partition_graph(n, 5, 0.8, 0.4, seed=r, directed=True)),
         range(5, 45), rand=True),
    _dir("navigable_small_world", _N2,
         _nx_dir(lambda n, p, r: nx.navigable_small_world_graph(n, seed=r)), range(5, 101),
         rand=True),
    _dir("gnp_directed", _N2,
         _nx_dir(lambda n, p, r: nx.gnp_random_graph(n, 0.8, seed=r, directed=True)),
         range(9, 299), rand=True),
    _dir("random_uniform_kout", _N1,
         _nx_dir(lambda n, p, r: random_uniform_k_out_graph(
             n, 2, self_loops=False, with_replacement=False, seed=r)),
         range(4, 3651), rand=True),
    _dir("scale_free", _N1,
         _nx_dir(lambda n, p, r: nx.scale_free_graph(
             n, alpha=0.41, beta=0.54, gamma=0.05, delta_in=0.2, delta_out=0, seed=r)),
         range(5, 3401), rand=True),
]

CATALOG: dict[str, CatalogEntry] = {e.family_id: e for e in _CATALOG_ENTRIES}


def catalog_entry(family_id: str) -> CatalogEntry:
    try:
        return CATALOG[family_id]
    except KeyError:
        raise ValueError(f"unknown family {family_id!r}") from None


def list_families() -> tuple[str, ...]:
    return tuple(CATALOG)


# ---------------------------------------------------------------------------
# specs and generation

@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    params: Mapping
    seed: Optional[int]
    schedule: tuple[int, ...]
    matrix_kind: str
    size_growth: GrowthClass
    weight_rule: str = "unit"

    def __post_init__(self) -> None:
        entry = catalog_entry(self.family_id)
        if any(b <= a for a, b in zip(self.schedule, self.schedule[1:])):
            raise ValueError("schedule must be strictly increasing")
        if entry.random and self.seed is None:
            raise ValueError(f"{self.family_id} is random and requires a seed")
        if self.weight_rule not in WEIGHT_RULES:
            raise ValueError(f"unknown weight rule {self.weight_rule!r}")
        if self.weight_rule != "unit" and not entry.weightable:
            raise ValueError(f"{self.family_id} has no weight rules")
        if self.matrix_kind != entry.matrix_kind:
            raise ValueError(f"{self.family_id} uses {entry.matrix_kind} systems")
        if self.size_growth != entry.resolved_size_growth(self.params):
            raise ValueError("declared size growth does not match the construction")


@dataclass(frozen=True)
class FamilyInstance:
    spec: FamilySpec
    n: int
    graph: Graph
    n_vertices: int
    n_edges: int
    system_size: int
    warnings: tuple[str, ...] = ()


def make_spec(
    family_id: str,
    *,
    schedule: Optional[Sequence[int]] = None,
    seed: Optional[int] = None,
    params: Optional[Mapping] = None,
    weight_rule: str = "unit",
    repair: bool = False,
) -> FamilySpec:
    """Assemble a validated spec with catalog defaults filled in."""
    entry = catalog_entry(family_id)
    merged = dict(entry.default_params)
    merged.update(params or {})
    if repair:
        if not entry.directed:
            raise ValueError("source/sink repair applies to directed families")
        merged["repair"] = True
    use_seed = seed if seed is not None else entry.default_seed
    return FamilySpec(
        family_id=family_id,
        params=merged,
        seed=use_seed,
        schedule=tuple(schedule if schedule is not None else entry.default_schedule),
        matrix_kind=entry.matrix_kind,
        size_growth=entry.resolved_size_growth(merged),
        weight_rule=weight_rule,
    )


def generate(spec: FamilySpec, n: int) -> FamilyInstance:
    if n not in spec.schedule:
        raise ValueError(f"n={n} not in schedule for {spec.family_id}")
    entry = catalog_entry(spec.family_id)
    rng = _rng(derive_seed(spec.seed, spec.family_id, n)) if entry.random else None
    built = entry.build(n, spec.params, rng)
    warnings: tuple[str, ...] = ()
    if isinstance(built, tuple):
        graph, warnings = built
    else:
        graph = built
    if spec.params.get("repair"):
        if spec.seed is None:
            raise ValueError("repair requires a seed")
        graph = repair_sources_sinks(graph, derive_seed(spec.seed, spec.family_id + "/repair", n))
    if spec.weight_rule != "unit":
        graph = apply_weight_rule(graph, spec.weight_rule, spec.family_id)
    system_size = graph.n_vertices
    if spec.matrix_kind == "incidence":
        system_size += graph.n_edges
    return FamilyInstance(
        spec=spec,
        n=n,
        graph=graph,
        n_vertices=graph.n_vertices,
        n_edges=graph.n_edges,
        system_size=system_size,
        warnings=warnings,
    )


def enumerate_schedule(spec: FamilySpec) -> list[FamilyInstance]:
    if not spec.schedule:
        raise ValueError("schedule is empty")
    return [generate(spec, n) for n in spec.schedule]
