"""Deletion/explosion sequences over eta: legality, covers, search.

A deletion is legal when eta does not increase; an explosion is legal
when eta drops by at least one, with infinity as the top value (so an
edge of a graph with eta infinity is explodable only if the exploded
graph also has eta infinity... which it trivially satisfies since
inf <= inf - 1 = inf).  Meshulam's theorem guarantees every edge admits
one of the two moves, which the property suites check empirically.

Cover accounting works on allocation-graph vertices, whose labels carry
their resource sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..graphs import Graph
from .homology import eta

DELETE = "delete"
EXPLODE = "explode"


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class DeStep:
    op: str
    edge: tuple

    def __post_init__(self):
        if self.op not in (DELETE, EXPLODE):
            raise SequenceError(f"unknown op {self.op!r}")

    def to_json(self) -> dict:
        from ..graphs import vertex_to_json

        u, v = self.edge
        return {"op": self.op, "edge": [vertex_to_json(u), vertex_to_json(v)]}


def step_from_json(obj: dict) -> DeStep:
    from ..graphs import vertex_from_json

    u, v = obj["edge"]
    return DeStep(obj["op"], (vertex_from_json(u), vertex_from_json(v)))


@dataclass(frozen=True)
class DeSequence:
    """An ordered list of steps tied to the graph they start from."""

    start: Graph
    steps: tuple[DeStep, ...]

    @property
    def ell(self) -> int:
        return sum(1 for s in self.steps if s.op == EXPLODE)

    def to_json(self) -> dict:
        return {
            "schema": "santa-trace/1",
            "steps": [s.to_json() for s in self.steps],
        }


def sequence_from_json(start: Graph, doc) -> DeSequence:
    """Accept either the enveloped {"steps": [...]} form or a bare step list."""
    steps = doc["steps"] if isinstance(doc, dict) else doc
    return DeSequence(start, tuple(step_from_json(s) for s in steps))


@dataclass(frozen=True)
class EdgeClassification:
    deletable: bool
    explodable: bool
    eta_before: int | float
    eta_deleted: int | float
    eta_exploded: int | float


def classify_edge(g: Graph, edge, **eta_caps) -> EdgeClassification:
    """Deletable iff eta(G-e) <= eta(G); explodable iff eta(G*e) <= eta(G)-1."""
    e = g.normalize_edge(edge)
    before = eta(g, **eta_caps)
    deleted = eta(g.delete_edge(e), **eta_caps)
    exploded = eta(g.explode_edge(e), **eta_caps)
    return EdgeClassification(
        deletable=deleted <= before,
        explodable=exploded <= before - 1,
        eta_before=before,
        eta_deleted=deleted,
        eta_exploded=exploded,
    )


@dataclass
class ExecutionResult:
    final: Graph
    valid: bool
    ell: int
    eta_drop_certified: bool
    failed_at: int | None
    eta_start: int | float | None = None
    eta_final: int | float | None = None


def execute_sequence(start: Graph, seq: DeSequence | tuple, **eta_caps) -> ExecutionResult:
    """Replay a sequence, checking each step's legality at its own graph.

    On success also certifies eta(start) >= eta(final) + ell directly;
    the per-step inequalities make that automatic, so a failure here
    would expose an eta bug rather than a bad sequence.
    """
    steps = seq.steps if isinstance(seq, DeSequence) else tuple(seq)
    g = start
    ell = 0
    for i, step in enumerate(steps):
        try:
            edge = g.normalize_edge(step.edge)
        except Exception:
            return ExecutionResult(g, False, ell, False, i)
        cls = classify_edge(g, edge, **eta_caps)
        if step.op == DELETE:
            if not cls.deletable:
                return ExecutionResult(g, False, ell, False, i)
            g = g.delete_edge(edge)
        else:
            if not cls.explodable:
                return ExecutionResult(g, False, ell, False, i)
            g = g.explode_edge(edge)
            ell += 1
    eta_start = eta(start, **eta_caps)
    eta_final = eta(g, **eta_caps)
    certified = eta_start >= eta_final + ell
    return ExecutionResult(g, True, ell, certified, None, eta_start, eta_final)


# ---------------------------------------------------------------------------
# Covers
# ---------------------------------------------------------------------------

def vertex_resources(v) -> frozenset[str]:
    if not (isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], tuple)):
        raise SequenceError(f"vertex {v!r} carries no resource set")
    return frozenset(v[1])


@dataclass(frozen=True)
class CoverRecord:
    cover: frozenset[str]
    start: Graph
    end: Graph
    star_verified: bool


def verify_star(start: Graph, end: Graph, cover) -> bool:
    """Property (*): every start vertex disjoint from the cover survives."""
    cover = frozenset(cover)
    end_vertices = set(end.vertices)
    for v in start.vertices:
        if not (vertex_resources(v) & cover) and v not in end_vertices:
            return False
    return True


def replay_structurally(start: Graph, steps) -> Graph:
    g = start
    for step in steps:
        edge = g.normalize_edge(step.edge)
        g = g.delete_edge(edge) if step.op == DELETE else g.explode_edge(edge)
    return g


def basic_cover(seq: DeSequence) -> CoverRecord:
    """Union of e u f over exploded edges, with the (*) check recorded."""
    g = seq.start
    cover: set[str] = set()
    for step in seq.steps:
        edge = g.normalize_edge(step.edge)
        if step.op == EXPLODE:
            u, v = edge
            cover |= vertex_resources(u) | vertex_resources(v)
            g = g.explode_edge(edge)
        else:
            g = g.delete_edge(edge)
    record = CoverRecord(frozenset(cover), seq.start, g, False)
    verified = verify_star(seq.start, g, record.cover)
    return CoverRecord(record.cover, seq.start, g, verified)


def shrink_cover(start: Graph, end: Graph, cover) -> frozenset[str]:
    """Greedily drop resources while property (*) still holds.

    An explosion often needs less than the full e u f to stay covered;
    re-verifying (*) after each drop finds such sub-basic covers without
    any case analysis.
    """
    current = set(cover)
    for rid in sorted(cover):
        trial = current - {rid}
        if verify_star(start, end, trial):
            current = trial
    return frozenset(current)


def cover_value(values, cover) -> Fraction:
    if hasattr(values, "value"):
        return values.value(cover)
    return sum((Fraction(values[r]) for r in cover), Fraction(0))


def is_cheap(values, cover, ell: int, m: Fraction) -> bool:
    """Cover value at most 2 m ell (deletion-only sequences pass with ell 0)."""
    return cover_value(values, cover) <= 2 * Fraction(m) * ell


def is_gamma(cover, ell: int, gamma: Fraction) -> bool:
    """Cover cardinality at most gamma * ell."""
    return Fraction(len(cover)) <= Fraction(gamma) * ell


def average_cost(cover, ell: int) -> Fraction:
    if ell == 0:
        raise SequenceError("average cost undefined for zero explosions")
    return Fraction(len(cover), ell)


# ---------------------------------------------------------------------------
# Bounded search
# ---------------------------------------------------------------------------

@dataclass
class SearchOutcome:
    sequence: DeSequence | None
    conclusive: bool
    nodes: int

    @property
    def found(self) -> bool:
        return self.sequence is not None


def search_de_sequence(
    start: Graph,
    objective: str,
    *,
    budget: int = 5000,
    max_explosions: int | None = None,
    values=None,
    m: Fraction | None = None,
    gamma: Fraction | None = None,
    avg_cap: Fraction | None = None,
    based_in: frozenset[str] | None = None,
    owner: str | None = None,
    shrink: bool = True,
    **eta_caps,
) -> SearchOutcome:
    """Depth-first search for a legal sequence meeting an objective.

    Objectives: ``ko`` (reach a graph with an isolated vertex),
    ``edgeless`` (reach a graph with no edges), ``cheap`` (>=1 explosion,
    some cover of value <= 2 m ell), ``gamma`` (>=1 explosion, cover
    cardinality <= gamma ell), ``based`` (every explosion consumes a
    fresh hyperedge inside ``based_in`` owned by ``owner``; average cover
    cost <= avg_cap).

    ``conclusive`` is True only when the search space was provably
    exhausted (graph-state objectives); for cover-dependent objectives a
    miss is always reported as inconclusive.
    """
    if objective not in ("ko", "edgeless", "cheap", "gamma", "based"):
        raise SequenceError(f"unknown objective {objective!r}")
    if objective == "cheap" and m is None:
        raise SequenceError("cheap objective needs m")
    if objective == "gamma" and gamma is None:
        raise SequenceError("gamma objective needs gamma")
    if objective == "based" and (based_in is None or owner is None or avg_cap is None):
        raise SequenceError("based objective needs based_in, owner, avg_cap")
    if max_explosions is None:
        max_explosions = {"ko": None, "edgeless": None, "cheap": 3, "gamma": 3, "based": 4}[
            objective
        ]
    graph_state_objective = objective in ("ko", "edgeless")
    nodes = 0
    exhausted = True
    seen: set = set()

    def accept(g: Graph, steps: list[DeStep], ell: int, cover: set[str]) -> bool:
        if objective == "ko":
            return g.has_isolated_vertex()
        if objective == "edgeless":
            return not g.edges
        if ell == 0:
            return False
        w: frozenset[str] = frozenset(cover)
        if shrink:
            w = shrink_cover(start, g, w)
        if objective == "cheap":
            return is_cheap(values, w, ell, m)
        if objective == "gamma":
            return is_gamma(w, ell, gamma)
        return average_cost(w, ell) <= avg_cap

    found: list[DeStep] | None = None

    def dfs(g: Graph, steps: list[DeStep], ell: int, cover: set[str]) -> bool:
        nonlocal nodes, exhausted, found
        if accept(g, steps, ell, cover):
            found = list(steps)
            return True
        nodes += 1
        if nodes > budget:
            exhausted = False
            return False
        if graph_state_objective:
            if g.key in seen:
                return False
            seen.add(g.key)
        first_deletion_done = False
        for edge in g.edges:
            cls = classify_edge(g, edge, **eta_caps)
            if cls.explodable and (max_explosions is None or ell < max_explosions):
                u, v = edge
                if objective == "based":
                    ok = (
                        u[0] == owner and vertex_resources(u) <= based_in
                    ) or (v[0] == owner and vertex_resources(v) <= based_in)
                else:
                    ok = True
                if ok:
                    extra = vertex_resources(u) | vertex_resources(v) if not graph_state_objective else set()
                    steps.append(DeStep(EXPLODE, edge))
                    if dfs(g.explode_edge(edge), steps, ell + 1, cover | set(extra)):
                        return True
                    steps.pop()
            if cls.deletable and not first_deletion_done:
                # One deletion branch per node keeps the tree finite for
                # cover objectives; completeness is only claimed for the
                # graph-state objectives, which branch over all deletions.
                if not graph_state_objective:
                    first_deletion_done = True
                steps.append(DeStep(DELETE, edge))
                if dfs(g.delete_edge(edge), steps, ell, cover):
                    return True
                steps.pop()
        return False

    hit = dfs(start, [], 0, set())
    if hit:
        assert found is not None
        return SearchOutcome(DeSequence(start, tuple(found)), True, nodes)
    conclusive = graph_state_objective and exhausted
    return SearchOutcome(None, conclusive, nodes)
