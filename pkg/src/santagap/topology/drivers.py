"""Hall-type eta checking and the four-phase DE-sequence driver.

The driver dismantles the thin allocation graph restricted to a player
set, phase by phase: cheap sequences (and plain deletions) first, then
7/3- and 5/2-sequences, then arbitrary legal steps, keeping the running
cover ledger that the dual certificates consume.  Budget exhaustion is
a first-class outcome: the search never claims nonexistence it cannot
prove.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..graphs import Graph
from .desequence import (
    DELETE,
    EXPLODE,
    DeSequence,
    DeStep,
    basic_cover,
    classify_edge,
    cover_value,
    search_de_sequence,
    shrink_cover,
)
from .homology import eta_at_least


@dataclass
class HallResult:
    holds: bool
    violating_U: tuple | None


def hall_eta_check(
    graph: Graph,
    parts: dict,
    *,
    max_parts: int = 10,
    **eta_caps,
) -> HallResult:
    """Check eta(J restricted to U) >= |U| for every nonempty part set U."""
    names = sorted(parts)
    if len(names) > max_parts:
        raise ValueError(f"{len(names)} parts exceeds cap {max_parts}")
    for size in range(1, len(names) + 1):
        for U in itertools.combinations(names, size):
            keep = {v for p in U for v in parts[p]}
            sub = graph.induced(keep)
            if not eta_at_least(sub, len(U), **eta_caps):
                return HallResult(False, U)
    return HallResult(True, None)


def all_deletions(g: Graph, **eta_caps) -> tuple[Graph, list[DeStep]]:
    """Perform deletable-edge deletions until none remains."""
    steps: list[DeStep] = []
    while True:
        for edge in g.edges:
            if classify_edge(g, edge, **eta_caps).deletable:
                steps.append(DeStep(DELETE, edge))
                g = g.delete_edge(edge)
                break
        else:
            return g, steps


@dataclass
class PhaseLedger:
    """Explosion counts and cover unions per accounting class."""

    n1: int = 0
    n2: int = 0
    n3: int = 0
    n4: int = 0
    w1: frozenset[str] = frozenset()
    w2: frozenset[str] = frozenset()
    w3: frozenset[str] = frozenset()
    w4: frozenset[str] = frozenset()

    @property
    def ell(self) -> int:
        return self.n1 + self.n2 + self.n3 + self.n4

    def checks(self, values, m: Fraction) -> dict[str, bool]:
        """The four cover inequalities the convex combination relies on."""
        m = Fraction(m)
        return {
            "value_w1": cover_value(values, self.w1) <= 2 * m * self.n1,
            "card_w2": Fraction(len(self.w2)) <= Fraction(7, 3) * self.n2,
            "card_w3": Fraction(len(self.w3)) <= Fraction(5, 2) * self.n3,
            "value_w2": cover_value(values, self.w2) <= Fraction(7, 3) * m * self.n2,
            "value_w3": cover_value(values, self.w3) <= Fraction(5, 2) * m * self.n3,
            "value_w4": cover_value(values, self.w4) <= 3 * m * self.n4,
        }


@dataclass
class FourPhaseResult:
    outcome: str  # "KO" | "edgeless" | "inconclusive"
    ledger: PhaseLedger
    sequence: DeSequence
    final: Graph
    phase_reached: int = 4
    notes: list[str] = field(default_factory=list)


def four_phase_driver(
    values,
    j_graph,
    m: Fraction,
    *,
    search_budget: int = 2000,
    step_budget: int = 2000,
    **eta_caps,
) -> FourPhaseResult:
    """Run the four dismantling phases on a thin allocation graph.

    ``values`` is an Instance (or resource->value map); ``j_graph`` may
    be an AllocationGraph or a plain Graph over resource-carrying
    vertices.  Returns the executed sequence, the phase ledger, and the
    outcome: KO as soon as a KO-sequence fires (or a vertex survives),
    edgeless when the graph is fully dismantled, inconclusive on budget
    exhaustion.
    """
    g = j_graph.graph if hasattr(j_graph, "graph") else j_graph
    m = Fraction(m if not hasattr(m, "m") else m.m)
    start = g
    ledger = PhaseLedger()
    steps: list[DeStep] = []
    notes: list[str] = []
    remaining = step_budget

    def perform(seq: DeSequence, bucket: str) -> None:
        nonlocal g
        record = basic_cover(seq)
        ell = seq.ell
        cover = shrink_cover(seq.start, record.end, record.cover)
        steps.extend(seq.steps)
        g = record.end
        if bucket == "ko":
            pass  # a KO-sequence certifies eta = infinity; no accounting needed
        elif bucket == "n1":
            ledger.n1 += ell
            ledger.w1 |= cover
        elif bucket == "n2":
            ledger.n2 += ell
            ledger.w2 |= cover
        elif bucket == "n3":
            ledger.n3 += ell
            ledger.w3 |= cover
        else:
            ledger.n4 += ell
            ledger.w4 |= record.cover

    def drain_cheap(allow_ko: bool = True) -> str | None:
        """Deletions, KO-sequences and cheap sequences until none remains."""
        nonlocal g, remaining
        while True:
            remaining -= 1
            if remaining < 0:
                return "budget"
            if g.has_isolated_vertex():
                return "ko"
            g2, dsteps = all_deletions(g, **eta_caps)
            if dsteps:
                steps.extend(dsteps)
                g = g2
                continue
            if not g.edges:
                return None
            if allow_ko:
                ko = search_de_sequence(g, "ko", budget=search_budget, **eta_caps)
                if ko.found:
                    perform(ko.sequence, "ko")
                    return "ko"
            cheap = search_de_sequence(
                g, "cheap", budget=search_budget, values=values, m=m, **eta_caps
            )
            if cheap.found:
                perform(cheap.sequence, "n1")
                continue
            return None

    # Phase 1
    status = drain_cheap()
    if status == "ko":
        return FourPhaseResult("KO", ledger, DeSequence(start, tuple(steps)), g, 1, notes)
    if status == "budget":
        return FourPhaseResult(
            "inconclusive", ledger, DeSequence(start, tuple(steps)), g, 1, notes
        )

    # Phases 2 and 3
    for phase, (gamma, bucket, maxexp) in (
        (2, (Fraction(7, 3), "n2", 3)),
        (3, (Fraction(5, 2), "n3", 2)),
    ):
        while g.edges:
            found = search_de_sequence(
                g,
                "gamma",
                budget=search_budget,
                gamma=gamma,
                max_explosions=maxexp,
                **eta_caps,
            )
            if not found.found:
                break
            perform(found.sequence, bucket)
            status = drain_cheap()
            if status == "ko":
                return FourPhaseResult(
                    "KO", ledger, DeSequence(start, tuple(steps)), g, phase, notes
                )
            if status == "budget":
                return FourPhaseResult(
                    "inconclusive",
                    ledger,
                    DeSequence(start, tuple(steps)),
                    g,
                    phase,
                    notes,
                )

    # Phase 4: arbitrary legal steps until no edge remains
    while g.edges:
        remaining -= 1
        if remaining < 0:
            return FourPhaseResult(
                "inconclusive", ledger, DeSequence(start, tuple(steps)), g, 4, notes
            )
        edge = g.edges[0]
        cls = classify_edge(g, edge, **eta_caps)
        if cls.deletable:
            steps.append(DeStep(DELETE, edge))
            g = g.delete_edge(edge)
        elif cls.explodable:
            seq = DeSequence(g, (DeStep(EXPLODE, edge),))
            perform(seq, "n4")
        else:
            notes.append(f"edge {edge!r} neither deletable nor explodable")
            return FourPhaseResult(
                "inconclusive", ledger, DeSequence(start, tuple(steps)), g, 4, notes
            )

    outcome = "KO" if g.vertices else "edgeless"
    return FourPhaseResult(outcome, ledger, DeSequence(start, tuple(steps)), g, 4, notes)
