"""Independence complexes and reduced Z2 homology.

eta(G) is 1 plus the first dimension with nonvanishing reduced homology
of the independence complex over GF(2), and infinity when every rank
vanishes.  The empty graph has eta 0; a graph with an isolated vertex
has eta infinity, because the isolated vertex is a cone apex of the
complex and cones have no homology in any dimension.

Chain groups are enumerated dimension by dimension (independent sets of
size d+1 as bitmasks) and boundary ranks are computed by bitwise GF(2)
elimination, stopping as soon as the answer is decided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..graphs import Graph

INF = math.inf

DEFAULT_VERTEX_CAP = 24
DEFAULT_SIMPLEX_CAP = 500_000


class EtaCapError(RuntimeError):
    """Raised when a complex outgrows the configured caps."""


@dataclass(frozen=True)
class SimplicialComplex:
    """A complex given by its facets (maximal simplices)."""

    vertices: tuple
    facets: tuple[frozenset, ...]

    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced Z2 Betti numbers, dimension -1 up to the complex dimension."""

    ranks: dict[int, int]

    def first_nonvanishing(self) -> int | None:
        hits = [d for d, r in sorted(self.ranks.items()) if r > 0]
        return hits[0] if hits else None


def _adjacency_masks(g: Graph) -> list[int]:
    index = {v: i for i, v in enumerate(g.vertices)}
    adj = [0] * len(g.vertices)
    for u, v in g.edges:
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    return adj


def _rank_gf2(columns: list[int]) -> int:
    """Rank of a GF(2) matrix given as column bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            pivot = pivots.get(low)
            if pivot is None:
                pivots[low] = col
                rank += 1
                break
            col ^= pivot
    return rank


def _next_level(
    level: list[tuple[int, int, int]], adj: list[int], n: int, cap: int
) -> list[tuple[int, int, int]]:
    """Extend independent sets by one vertex each; entries are
    (member mask, last vertex, blocked mask)."""
    out = []
    for mask, last, blocked in level:
        for v in range(last + 1, n):
            if not (blocked >> v) & 1:
                out.append((mask | (1 << v), v, blocked | adj[v] | (1 << v)))
                if len(out) > cap:
                    raise EtaCapError(f"more than {cap} simplices in one dimension")
    return out


def _boundary_rank(
    level: list[tuple[int, int, int]], lower_index: dict[int, int]
) -> int:
    columns = []
    for mask, _, _ in level:
        col = 0
        mm = mask
        while mm:
            bit = mm & -mm
            col ^= 1 << lower_index[mask ^ bit]
            mm ^= bit
        columns.append(col)
    return _rank_gf2(columns)


def _first_hole(
    g: Graph, stop_dim: int | None, max_simplices: int
) -> tuple[int | None, bool]:
    """(first dimension with nonzero reduced homology, decided).

    Returns (None, True) when the whole complex was exhausted with every
    rank zero, and (None, False) when stop_dim was reached undecided.
    Assumes a nonempty graph with no isolated vertex.
    """
    n = len(g.vertices)
    adj = _adjacency_masks(g)
    level = [(1 << i, i, adj[i] | (1 << i)) for i in range(n)]
    rank_down = 1  # augmentation: every vertex maps to the empty simplex
    d = 0
    while True:
        if stop_dim is not None and d > stop_dim:
            return None, False
        nxt = _next_level(level, adj, n, max_simplices)
        lower_index = {mask: j for j, (mask, _, _) in enumerate(level)}
        rank_up = _boundary_rank(nxt, lower_index)
        betti = len(level) - rank_down - rank_up
        if betti > 0:
            return d, True
        if not nxt:
            return None, True
        level = nxt
        rank_down = rank_up
        d += 1


# Keyed by the full (vertices, edges) structure; plain dict get/set are
# atomic under the GIL, so concurrent eta calls may share this cache.
_ETA_CACHE: dict = {}


def clear_eta_cache() -> None:
    _ETA_CACHE.clear()


def eta(
    g: Graph,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
    max_simplices: int = DEFAULT_SIMPLEX_CAP,
) -> int | float:
    """1 + first nonvanishing reduced Z2 homology dimension, or infinity."""
    if len(g.vertices) > max_vertices:
        raise EtaCapError(f"{len(g.vertices)} vertices exceeds cap {max_vertices}")
    cached = _ETA_CACHE.get(g.key)
    if cached is not None:
        return cached
    if not g.vertices:
        value: int | float = 0
    elif g.has_isolated_vertex():
        value = INF
    else:
        hole, decided = _first_hole(g, None, max_simplices)
        value = INF if hole is None else hole + 1
        assert decided
    _ETA_CACHE[g.key] = value
    return value


def eta_at_least(
    g: Graph,
    t: int,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
    max_simplices: int = DEFAULT_SIMPLEX_CAP,
) -> bool:
    """Decide eta(g) >= t without computing homology past dimension t-2."""
    if t <= 0:
        return True
    if len(g.vertices) > max_vertices:
        raise EtaCapError(f"{len(g.vertices)} vertices exceeds cap {max_vertices}")
    cached = _ETA_CACHE.get(g.key)
    if cached is not None:
        return cached >= t
    if not g.vertices:
        return False
    if g.has_isolated_vertex():
        _ETA_CACHE[g.key] = INF
        return True
    hole, decided = _first_hole(g, t - 2, max_simplices)
    if hole is not None:
        _ETA_CACHE[g.key] = hole + 1
        return hole + 1 >= t
    if decided:
        _ETA_CACHE[g.key] = INF
    return True


def homology_profile(
    g: Graph,
    *,
    max_vertices: int = DEFAULT_VERTEX_CAP,
    max_simplices: int = DEFAULT_SIMPLEX_CAP,
) -> HomologyProfile:
    """Full reduced-homology rank profile of the independence complex.

    Deliberately avoids the cone shortcut so it can serve as an
    independent oracle for eta.
    """
    if len(g.vertices) > max_vertices:
        raise EtaCapError(f"{len(g.vertices)} vertices exceeds cap {max_vertices}")
    n = len(g.vertices)
    if n == 0:
        return HomologyProfile({-1: 1})
    ranks: dict[int, int] = {-1: 0}
    adj = _adjacency_masks(g)
    level = [(1 << i, i, adj[i] | (1 << i)) for i in range(n)]
    rank_down = 1
    d = 0
    while level:
        nxt = _next_level(level, adj, n, max_simplices)
        lower_index = {mask: j for j, (mask, _, _) in enumerate(level)}
        rank_up = _boundary_rank(nxt, lower_index)
        ranks[d] = len(level) - rank_down - rank_up
        level = nxt
        rank_down = rank_up
        d += 1
    return HomologyProfile(ranks)


def eta_from_profile(profile: HomologyProfile) -> int | float:
    hole = profile.first_nonvanishing()
    return INF if hole is None else hole + 1


# ---------------------------------------------------------------------------
# Maximal independent sets (facets of the independence complex)
# ---------------------------------------------------------------------------

def independence_complex(
    g: Graph, *, max_vertices: int = DEFAULT_VERTEX_CAP
) -> SimplicialComplex:
    """Facets = maximal independent sets, via pivoting Bron-Kerbosch on
    the complement graph."""
    n = len(g.vertices)
    if n > max_vertices:
        raise EtaCapError(f"{n} vertices exceeds cap {max_vertices}")
    if n == 0:
        return SimplicialComplex((), ())
    adj = _adjacency_masks(g)
    full = (1 << n) - 1
    comp = [full & ~adj[i] & ~(1 << i) for i in range(n)]
    found: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            found.append(r)
            return
        px = p | x
        best_u, best_cnt = -1, -1
        mm = px
        while mm:
            bit = mm & -mm
            u = bit.bit_length() - 1
            cnt = bin(p & comp[u]).count("1")
            if cnt > best_cnt:
                best_cnt, best_u = cnt, u
            mm ^= bit
        cand = p & ~comp[best_u]
        while cand:
            bit = cand & -cand
            v = bit.bit_length() - 1
            expand(r | bit, p & comp[v], x & comp[v])
            p &= ~bit
            x |= bit
            cand ^= bit

    expand(0, full, 0)
    labels = g.vertices
    facets = []
    for mask in found:
        members = frozenset(labels[i] for i in range(n) if (mask >> i) & 1)
        facets.append(members)
    facets.sort(key=lambda f: tuple(sorted(f)))
    return SimplicialComplex(labels, tuple(facets))
