"""Unit-length graph metrics: diameter, girth, generalized polygon test."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import Disconnected


class Graph:
    """Undirected multigraph on vertices ``0..n-1``.

    Edges keep their multiplicity so that parallel arcs show up as 2-cycles.
    ``parts`` optionally records a bipartition as consecutive blocks of sizes.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], parts: Optional[Sequence[int]] = None):
        self.n = n
        self.edges = [tuple(e) for e in edges]
        self.parts = tuple(parts) if parts is not None else None
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            if u != v:
                adj[v].append((u, eid))
        self._adj = adj

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self._adj[v]]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def __len__(self):
        return self.n

    def edge_set(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges}

    def to_edge_list(self) -> str:
        """``u v`` per line, with a bipartition comment header."""
        lines = []
        if self.parts is not None:
            lines.append("# bipartite parts: " + " ".join(str(s) for s in self.parts))
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w, _ in g._adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    best = 0
    for s in range(g.n):
        dist = bfs_distances(g, s)
        if min(dist) < 0:
            raise Disconnected(f"vertex {dist.index(-1)} unreachable from {s}")
        best = max(best, max(dist))
    return best


def girth(g: Graph) -> Optional[int]:
    """Length of a shortest cycle, or None for a forest.

    One BFS per source; a non-tree edge ``(u, w)`` closes a closed walk of
    length ``d(u) + d(w) + 1`` through the source, and the minimum over all
    sources is the girth.
    """
    best = None
    for s in range(g.n):
        dist = [-1] * g.n
        via = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w, eid in g._adj[u]:
                if eid == via[u]:
                    continue
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    via[w] = eid
                    queue.append(w)
                else:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
        if best is not None and best <= 2:
            break
    return best


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w, _ in g._adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


@dataclass(frozen=True)
class GonCheck:
    diameter: int
    girth: Optional[int]
    bipartite: bool
    degrees: tuple[int, ...]  # sorted distinct degrees

    @property
    def injectivity_radius(self) -> Optional[Fraction]:
        return None if self.girth is None else Fraction(self.girth, 2)

    @property
    def m(self) -> Optional[int]:
        """The polygon order when diameter == girth / 2, else None."""
        r = self.injectivity_radius
        if r is None or r.denominator != 1 or r != self.diameter:
            return None
        return self.diameter

    @property
    def is_gen_polygon(self) -> bool:
        return self.m is not None


def check_generalized_m_gon(g: Graph) -> GonCheck:
    """Diameter and injectivity radius of a connected graph.

    Raises Disconnected for disconnected input.  ``result.m`` is the ``m``
    for which ``g`` is a generalized m-gon, or None.
    """
    diam = diameter(g)
    return GonCheck(
        diameter=diam,
        girth=girth(g),
        bipartite=is_bipartite(g),
        degrees=tuple(sorted({g.degree(v) for v in range(g.n)})),
    )
