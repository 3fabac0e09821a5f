"""Metric trees: edges with lengths and potentials, boundary bookkeeping,
sheaf enumeration and topological peeling.

Conventions used everywhere downstream:

* every vertex has a stable string label; matrices index boundary vertices
  by the tree's ordered boundary list, root last;
* an edge's local coordinate runs over [0, length] from ends[0] to ends[1];
* "boundary edge" for sheaf purposes means an edge whose outer endpoint is a
  non-root boundary vertex (the root edge plays the surviving stem role).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (CycleDetected, Disconnected, NonPositiveLength, NotASheaf,
                     RootNotBoundary, UnknownVertex)
from .potential import PotentialProfile


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    length: float
    q: PotentialProfile = field(default_factory=PotentialProfile.zero)

    def other_end(self, v: str) -> str:
        if v == self.ends[0]:
            return self.ends[1]
        if v == self.ends[1]:
            return self.ends[0]
        raise UnknownVertex(f"vertex {v!r} is not an endpoint of edge {self.id!r}")

    def q_from(self, v: str) -> PotentialProfile:
        """Potential in the orientation whose x=0 sits at vertex v."""
        if v == self.ends[0]:
            return self.q
        if v == self.ends[1]:
            return self.q.reversed(self.length)
        raise UnknownVertex(f"vertex {v!r} is not an endpoint of edge {self.id!r}")


@dataclass(frozen=True)
class Sheaf:
    """An internal vertex all but one of whose edges lead to non-root
    boundary vertices. Lengths/potentials are oriented with x=0 at vertex."""

    vertex: str
    members: tuple[str, ...]      # boundary vertex labels, in boundary order
    edges: tuple[str, ...]        # boundary edge ids, aligned with members
    stem: str                     # the single surviving edge id
    lengths: tuple[float, ...]
    potentials: tuple[PotentialProfile, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class MetricTree:
    edges: tuple[Edge, ...]
    boundary: tuple[str, ...]   # ordered, root last
    root: str

    # --- structure queries ------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for e in self.edges:
            seen.setdefault(e.ends[0])
            seen.setdefault(e.ends[1])
        return tuple(seen)

    def incidence(self) -> dict[str, list[Edge]]:
        inc: dict[str, list[Edge]] = {}
        for e in self.edges:
            inc.setdefault(e.ends[0], []).append(e)
            inc.setdefault(e.ends[1], []).append(e)
        return inc

    def degree(self, v: str) -> int:
        return len(self.incidence()[v])

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def internal_vertices(self) -> tuple[str, ...]:
        b = set(self.boundary)
        return tuple(v for v in self.vertices if v not in b)

    def total_length(self) -> float:
        return sum(e.length for e in self.edges)


def validate(tree: MetricTree) -> MetricTree:
    """Check all MetricTree invariants; return the tree unchanged."""
    n_edges = len(tree.edges)
    if n_edges == 0:
        raise Disconnected("tree has no edges")
    for e in tree.edges:
        if not e.length > 0:
            raise NonPositiveLength(f"edge {e.id!r} has length {e.length}")
        if e.ends[0] == e.ends[1]:
            raise CycleDetected(f"edge {e.id!r} is a loop")
    ids = [e.id for e in tree.edges]
    if len(set(ids)) != n_edges:
        raise CycleDetected("duplicate edge ids")
    verts = tree.vertices
    if len(verts) != n_edges + 1:
        raise CycleDetected(f"|V| = {len(verts)} != |E|+1 = {n_edges + 1}")
    # connectivity by BFS (acyclicity then follows from the vertex count)
    inc = tree.incidence()
    seen = {verts[0]}
    frontier = [verts[0]]
    while frontier:
        v = frontier.pop()
        for e in inc[v]:
            w = e.other_end(v)
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    if len(seen) != len(verts):
        raise Disconnected("graph is not connected")
    # boundary classification
    bset = set(tree.boundary)
    if len(bset) != len(tree.boundary):
        raise RootNotBoundary("boundary list has repeats")
    for v in verts:
        deg = len(inc[v])
        if v in bset and deg != 1:
            raise CycleDetected(f"boundary vertex {v!r} has degree {deg}")
        if v not in bset and deg < 2:
            raise Disconnected(f"vertex {v!r} has degree 1 but is not in the boundary list")
    if tree.root not in bset:
        raise RootNotBoundary(f"root {tree.root!r} is not a boundary vertex")
    if tree.boundary[-1] != tree.root:
        raise RootNotBoundary("root must be the last entry of the boundary list")
    return tree


def path_vertices(tree: MetricTree, a: str, b: str) -> list[str]:
    """Vertices along the unique path from a to b, inclusive."""
    verts = set(tree.vertices)
    if a not in verts or b not in verts:
        raise UnknownVertex(f"unknown vertex in path query: {a!r} or {b!r}")
    if a == b:
        return [a]
    inc = tree.incidence()
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for v in frontier:
            for e in inc[v]:
                w = e.other_end(v)
                if w not in prev:
                    prev[w] = v
                    nxt.append(w)
        frontier = nxt
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def path_edges(tree: MetricTree, a: str, b: str) -> list[Edge]:
    verts = path_vertices(tree, a, b)
    inc = tree.incidence()
    out = []
    for v, w in zip(verts, verts[1:]):
        out.append(next(e for e in inc[v] if e.other_end(v) == w))
    return out


def path_distance(tree: MetricTree, a: str, b: str) -> float:
    return sum(e.length for e in path_edges(tree, a, b))


def enumerate_sheaves(tree: MetricTree) -> list[Sheaf]:
    """All sheaves: internal vertices where every incident edge but one leads
    to a non-root boundary vertex."""
    inc = tree.incidence()
    non_root_boundary = set(tree.boundary) - {tree.root}
    order = {v: i for i, v in enumerate(tree.boundary)}
    out = []
    for v in tree.internal_vertices():
        members, stems = [], []
        for e in inc[v]:
            w = e.other_end(v)
            if w in non_root_boundary:
                members.append((order[w], w, e))
            else:
                stems.append(e)
        if len(stems) == 1 and members:
            members.sort()
            out.append(Sheaf(
                vertex=v,
                members=tuple(w for _, w, _ in members),
                edges=tuple(e.id for _, _, e in members),
                stem=stems[0].id,
                lengths=tuple(e.length for _, _, e in members),
                potentials=tuple(e.q_from(v) for _, _, e in members),
            ))
    out.sort(key=lambda s: min(tree.boundary.index(m) for m in s.members))
    return out


def peel(tree: MetricTree, sheaf: Sheaf) -> MetricTree:
    """Remove the sheaf's boundary edges; its vertex becomes a boundary vertex
    occupying the first removed boundary slot. Root is unchanged."""
    if sheaf not in enumerate_sheaves(tree):
        raise NotASheaf(f"{sheaf.vertex!r} with members {sheaf.members} is not a sheaf of this tree")
    removed = set(sheaf.edges)
    kept = tuple(e for e in tree.edges if e.id not in removed)
    first_slot = min(tree.boundary.index(m) for m in sheaf.members)
    new_boundary = []
    for i, v in enumerate(tree.boundary):
        if v in sheaf.members:
            if i == first_slot:
                new_boundary.append(sheaf.vertex)
        else:
            new_boundary.append(v)
    return MetricTree(edges=kept, boundary=tuple(new_boundary), root=tree.root)


# --- small fixture builders (used by tests and docs) --------------------------


def star(lengths, qs=None, root_index=None, prefix="g") -> MetricTree:
    """A star with one internal vertex 'v0' and boundary g1..gn (root last)."""
    n = len(lengths)
    qs = qs or [PotentialProfile.zero()] * n
    root_index = n - 1 if root_index is None else root_index
    names = [f"{prefix}{i + 1}" for i in range(n)]
    edges = tuple(Edge(id=f"e{i + 1}", ends=("v0", names[i]), length=float(lengths[i]), q=qs[i])
                  for i in range(n))
    boundary = tuple(v for i, v in enumerate(names) if i != root_index) + (names[root_index],)
    return validate(MetricTree(edges=edges, boundary=boundary, root=names[root_index]))


def interval(length, q=None, prefix="g") -> MetricTree:
    e = Edge(id="e1", ends=(f"{prefix}1", f"{prefix}2"), length=float(length),
             q=q or PotentialProfile.zero())
    return validate(MetricTree(edges=(e,), boundary=(f"{prefix}1", f"{prefix}2"),
                               root=f"{prefix}2"))


def two_level_tree(lengths=(0.5, 0.7, 0.6, 0.8, 0.9), qs=None) -> MetricTree:
    """The 5-edge, two-level fixture: deep sheaf {g1, g2} at v1, shallow vertex
    v2 carrying boundary edge g3 and the root edge."""
    l1, l2, l0, l3, lr = lengths
    qs = qs or [PotentialProfile.zero()] * 5
    edges = (
        Edge(id="e1", ends=("v1", "g1"), length=float(l1), q=qs[0]),
        Edge(id="e2", ends=("v1", "g2"), length=float(l2), q=qs[1]),
        Edge(id="e0", ends=("v2", "v1"), length=float(l0), q=qs[2]),
        Edge(id="e3", ends=("v2", "g3"), length=float(l3), q=qs[3]),
        Edge(id="er", ends=("v2", "gr"), length=float(lr), q=qs[4]),
    )
    return validate(MetricTree(edges=edges, boundary=("g1", "g2", "g3", "gr"), root="gr"))
