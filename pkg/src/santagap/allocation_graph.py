"""Alpha-hyperedges and the partite allocation graph H / its thin part J.

A vertex of H is the pair (owner, resource set): the same set coveted by
two players yields two distinct vertices.  Edges join intersecting
hyperedges of distinct owners.  Each fat resource induces a clique
component, and J is H with those components removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph
from .instance import Instance
from .subsets import SubsetCapError, max_value_below, minimal_subsets_at_least

DEFAULT_TRANSVERSAL_VERTEX_CAP = 60
DEFAULT_TRANSVERSAL_PART_CAP = 8


class AllocationGraphError(ValueError):
    pass


class TransversalCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class AlphaHyperedge:
    """Inclusion-minimal coveted set of value >= alpha*T, fat iff a single
    resource of that value."""

    owner: str
    resources: frozenset[str]
    is_fat: bool

    def sorted_resources(self) -> tuple[str, ...]:
        return tuple(sorted(self.resources))

    @property
    def vertex(self) -> tuple[str, tuple[str, ...]]:
        return (self.owner, self.sorted_resources())


@dataclass(frozen=True)
class FatReport:
    """F(alpha) and the per-player-set restriction F_U."""

    fat_set: frozenset[str]
    threshold: Fraction

    def fat_for(self, inst: Instance, U) -> frozenset[str]:
        coveted = set()
        for p in U:
            coveted |= inst.covets[p]
        return frozenset(self.fat_set & coveted)


@dataclass(frozen=True)
class MAlpha:
    """m(alpha): the largest coveted subset value strictly below alpha*T."""

    m: Fraction
    threshold: Fraction


@dataclass
class AllocationGraph:
    alpha: Fraction
    target: Fraction
    parts: dict[str, tuple[tuple[str, tuple[str, ...]], ...]]
    hyperedges: dict[tuple[str, tuple[str, ...]], AlphaHyperedge]
    graph: Graph

    @property
    def players(self) -> tuple[str, ...]:
        return tuple(self.parts)

    def vertex_count(self) -> int:
        return len(self.graph.vertices)


def alpha_threshold(alpha: Fraction, target: Fraction) -> Fraction:
    return Fraction(alpha) * Fraction(target)


def enumerate_alpha_hyperedges(
    inst: Instance,
    target: Fraction,
    alpha: Fraction,
    player: str,
    *,
    max_pool: int = 20,
    max_edges: int = 100_000,
) -> list[AlphaHyperedge]:
    """All alpha-hyperedges of one player, fat/thin tagged, sorted."""
    threshold = alpha_threshold(alpha, target)
    if threshold <= 0:
        raise AllocationGraphError("alpha*T must be positive")
    pool = {rid: inst.resources[rid] for rid in inst.covets[player]}
    try:
        subsets = minimal_subsets_at_least(
            pool, threshold, max_items=max_pool, max_results=max_edges
        )
    except SubsetCapError as exc:
        raise AllocationGraphError(str(exc)) from exc
    out = []
    for s in subsets:
        fat = len(s) == 1 and inst.value(s) >= threshold
        out.append(AlphaHyperedge(player, s, fat))
    out.sort(key=lambda h: (len(h.resources), h.sorted_resources()))
    return out


def compute_fat(inst: Instance, target: Fraction, alpha: Fraction) -> FatReport:
    threshold = alpha_threshold(alpha, target)
    fat = frozenset(r for r, v in inst.resources.items() if v >= threshold)
    return FatReport(fat, threshold)


def compute_m(inst: Instance, target: Fraction, alpha: Fraction) -> MAlpha:
    """m = max over players of the best coveted subset value below alpha*T."""
    threshold = alpha_threshold(alpha, target)
    if threshold <= 0:
        raise AllocationGraphError("alpha*T must be positive")
    best = Fraction(0)
    for p in inst.players:
        pool = {rid: inst.resources[rid] for rid in inst.covets[p]}
        candidate = max_value_below(pool, threshold)
        if candidate > best:
            best = candidate
    return MAlpha(best, threshold)


def is_block(inst: Instance, m: MAlpha, resources) -> bool:
    return inst.value(resources) <= m.m


def build_H(inst: Instance, target: Fraction, alpha: Fraction, **caps) -> AllocationGraph:
    """The |P|-partite allocation graph on all alpha-hyperedge vertices."""
    parts: dict[str, tuple] = {}
    hyperedges: dict[tuple, AlphaHyperedge] = {}
    by_resource: dict[str, list[tuple]] = {}
    for p in inst.players:
        vertices = []
        for h in enumerate_alpha_hyperedges(inst, target, alpha, p, **caps):
            vertices.append(h.vertex)
            hyperedges[h.vertex] = h
            for rid in h.resources:
                by_resource.setdefault(rid, []).append(h.vertex)
        parts[p] = tuple(vertices)
    edges = set()
    for rid, touching in by_resource.items():
        for i in range(len(touching)):
            for j in range(i + 1, len(touching)):
                u, v = touching[i], touching[j]
                if u[0] != v[0]:
                    edges.add((u, v) if u < v else (v, u))
    graph = Graph(hyperedges.keys(), edges)
    return AllocationGraph(Fraction(alpha), Fraction(target), parts, hyperedges, graph)


def build_J(h: AllocationGraph) -> AllocationGraph:
    """The thin part: H minus every fat clique component."""
    thin = {v: he for v, he in h.hyperedges.items() if not he.is_fat}
    parts = {
        p: tuple(v for v in vs if v in thin) for p, vs in h.parts.items()
    }
    return AllocationGraph(h.alpha, h.target, parts, thin, h.graph.induced(thin.keys()))


def restrict(g: AllocationGraph, U) -> AllocationGraph:
    """Induced subgraph on the parts indexed by U (kept even when empty)."""
    U = set(U)
    unknown = U - set(g.parts)
    if unknown:
        raise AllocationGraphError(f"unknown players {sorted(unknown)}")
    parts = {p: vs for p, vs in g.parts.items() if p in U}
    keep = {v for vs in parts.values() for v in vs}
    hyperedges = {v: g.hyperedges[v] for v in keep}
    return AllocationGraph(g.alpha, g.target, parts, hyperedges, g.graph.induced(keep))


def fat_clique_components(h: AllocationGraph) -> dict[str, tuple]:
    """C_r for each fat resource r: the clique of fat vertices {r}^p."""
    cliques: dict[str, list] = {}
    for v, he in h.hyperedges.items():
        if he.is_fat:
            (rid,) = he.resources
            cliques.setdefault(rid, []).append(v)
    return {rid: tuple(sorted(vs)) for rid, vs in cliques.items()}


def find_independent_transversal(
    g: AllocationGraph,
    *,
    max_vertices: int = DEFAULT_TRANSVERSAL_VERTEX_CAP,
    max_parts: int = DEFAULT_TRANSVERSAL_PART_CAP,
) -> dict[str, AlphaHyperedge] | None:
    """One independent vertex per part, or None when provably impossible.

    Backtracking over parts in increasing size order, pruning vertices
    adjacent to the partial selection; exhausting the tree is a proof of
    non-existence.
    """
    if g.vertex_count() > max_vertices or len(g.parts) > max_parts:
        raise TransversalCapError(
            f"{g.vertex_count()} vertices / {len(g.parts)} parts exceed caps "
            f"{max_vertices}/{max_parts}"
        )
    order = sorted(g.parts, key=lambda p: (len(g.parts[p]), p))
    if any(not g.parts[p] for p in order):
        return None
    graph = g.graph
    chosen: list = []

    def dfs(k: int) -> bool:
        if k == len(order):
            return True
        for v in g.parts[order[k]]:
            if all(not graph.has_edge(v, u) for u in chosen):
                chosen.append(v)
                if dfs(k + 1):
                    return True
                chosen.pop()
        return False

    if not dfs(0):
        return None
    return {v[0]: g.hyperedges[v] for v in chosen}


def transversal_to_allocation(
    inst: Instance, transversal: dict[str, AlphaHyperedge]
):
    """Turn a transversal into a validated Allocation covering its players."""
    from .instance import Allocation

    assignment = {p: frozenset() for p in inst.players}
    for p, he in transversal.items():
        assignment[p] = frozenset(he.resources)
    alloc = Allocation(assignment)
    alloc.validate(inst)
    return alloc
