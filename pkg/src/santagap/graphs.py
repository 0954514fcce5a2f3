"""A small immutable undirected graph over sortable vertex labels.

Allocation-graph vertices are (owner, sorted resource tuple) pairs;
generic test graphs use plain strings or ints.  Vertices and edges are
kept in sorted order so that every traversal, search, and hash is
deterministic.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

Vertex = Any
Edge = tuple[Vertex, Vertex]


class GraphError(ValueError):
    pass


class Graph:
    __slots__ = ("vertices", "edges", "_adj", "_key", "_hash")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Iterable[Vertex]] = ()):
        vs = sorted(set(vertices))
        vset = set(vs)
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in vs}
        eset: set[tuple[Vertex, Vertex]] = set()
        for e in edges:
            u, v = e
            if u not in vset or v not in vset:
                raise GraphError(f"edge {e!r} uses an undeclared vertex")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            a, b = (u, v) if u < v else (v, u)
            eset.add((a, b))
            adj[a].add(b)
            adj[b].add(a)
        self.vertices: tuple[Vertex, ...] = tuple(vs)
        self.edges: tuple[tuple[Vertex, Vertex], ...] = tuple(sorted(eset))
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._key = (self.vertices, self.edges)
        self._hash = hash(self._key)

    # -- basic queries ------------------------------------------------------

    def neighbors(self, v: Vertex) -> frozenset:
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self._adj.get(u, frozenset())

    def isolated_vertices(self) -> tuple[Vertex, ...]:
        return tuple(v for v in self.vertices if not self._adj[v])

    def has_isolated_vertex(self) -> bool:
        return any(not self._adj[v] for v in self.vertices)

    def normalize_edge(self, e: Iterable[Vertex]) -> tuple[Vertex, Vertex]:
        u, v = e
        a, b = (u, v) if u < v else (v, u)
        if not self.has_edge(a, b):
            raise GraphError(f"edge {e!r} not present")
        return (a, b)

    # -- derived graphs -----------------------------------------------------

    def delete_edge(self, e: Iterable[Vertex]) -> "Graph":
        """Remove the edge but keep both end vertices."""
        a, b = self.normalize_edge(e)
        return Graph(self.vertices, (x for x in self.edges if x != (a, b)))

    def explode_edge(self, e: Iterable[Vertex]) -> "Graph":
        """Remove both endpoints and all of their neighbors."""
        a, b = self.normalize_edge(e)
        gone = {a, b} | set(self._adj[a]) | set(self._adj[b])
        keep = [v for v in self.vertices if v not in gone]
        return self.induced(keep)

    def induced(self, keep: Iterable[Vertex]) -> "Graph":
        kset = set(keep)
        return Graph(
            (v for v in self.vertices if v in kset),
            ((u, v) for (u, v) in self.edges if u in kset and v in kset),
        )

    # -- identity -----------------------------------------------------------

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"


# ---------------------------------------------------------------------------
# JSON interchange (vertex descriptor = owner + sorted resource list, or a
# plain scalar for generic graphs; edges are index pairs)
# ---------------------------------------------------------------------------

def vertex_to_json(v: Vertex):
    if isinstance(v, tuple) and len(v) == 2 and isinstance(v[1], tuple):
        return {"owner": v[0], "resources": list(v[1])}
    return v


def vertex_from_json(obj) -> Vertex:
    if isinstance(obj, dict):
        return (obj["owner"], tuple(sorted(obj["resources"])))
    if isinstance(obj, list):
        raise GraphError(f"bad vertex descriptor {obj!r}")
    return obj


def graph_to_json(g: Graph, parts: dict[str, tuple] | None = None, **extra) -> dict:
    index = {v: i for i, v in enumerate(g.vertices)}
    doc = {
        "schema": "santa-graph/1",
        "vertices": [vertex_to_json(v) for v in g.vertices],
        "edges": [[index[u], index[v]] for (u, v) in g.edges],
    }
    if parts is not None:
        doc["parts"] = {p: [index[v] for v in vs] for p, vs in parts.items()}
    doc.update(extra)
    return doc


def graph_from_json(doc: dict) -> tuple[Graph, dict[str, tuple] | None]:
    vertices = [vertex_from_json(v) for v in doc["vertices"]]
    edges = []
    for e in doc.get("edges", ()):
        i, j = e
        edges.append((vertices[i], vertices[j]))
    g = Graph(vertices, edges)
    parts = None
    if "parts" in doc:
        parts = {
            p: tuple(sorted(vertices[i] for i in idxs))
            for p, idxs in doc["parts"].items()
        }
    return g, parts


def load_graph(path: str) -> tuple[Graph, dict[str, tuple] | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))
