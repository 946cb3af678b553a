"""Rooted directed control-flow multigraph with O(1) amortized edge updates.

Vertex ids are dense integers in [0, n); vertex 0 is the root unless another
id is passed at construction. Vertices are never deleted, only edges are
dynamic. Parallel edges and self edges are stored with multiplicity; deleting
removes the most recently inserted instance of the pair, which makes an
insert immediately followed by a delete a perfect undo.

Single-writer contract: mutating calls require exclusive access, reads may be
shared between updates.
"""

from __future__ import annotations

from .errors import MissingEdgeError, UnknownVertexError


class Cfg:
    """Control-flow graph: ordered successor/predecessor lists per vertex."""

    def __init__(self, vertices: int = 0, root: int = 0):
        if vertices < 0:
            raise ValueError("vertex count must be non-negative")
        self.root = root
        self.out_adj: list[list[int]] = [[] for _ in range(vertices)]
        self.in_adj: list[list[int]] = [[] for _ in range(vertices)]
        self._mult: dict[tuple[int, int], int] = {}
        self.m = 0
        if vertices and not 0 <= root < vertices:
            raise UnknownVertexError(f"root {root} outside [0, {vertices})")

    @property
    def n(self) -> int:
        return len(self.out_adj)

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self.out_adj):
            raise UnknownVertexError(f"vertex {v} outside [0, {len(self.out_adj)})")

    def add_vertex(self) -> int:
        """Allocate the next dense vertex id with empty adjacency."""
        self.out_adj.append([])
        self.in_adj.append([])
        return len(self.out_adj) - 1

    def insert_edge_raw(self, u: int, v: int) -> None:
        """Append one instance of (u, v); no tree or forest bookkeeping."""
        self._check(u)
        self._check(v)
        self.out_adj[u].append(v)
        self.in_adj[v].append(u)
        key = (u, v)
        self._mult[key] = self._mult.get(key, 0) + 1
        self.m += 1

    def delete_edge_raw(self, u: int, v: int) -> None:
        """Remove the last inserted instance of (u, v).

        Raises MissingEdgeError and leaves the graph unchanged when the edge
        is absent.
        """
        self._check(u)
        self._check(v)
        key = (u, v)
        count = self._mult.get(key, 0)
        if count == 0:
            raise MissingEdgeError(f"edge ({u}, {v}) not present")
        outs = self.out_adj[u]
        for i in range(len(outs) - 1, -1, -1):
            if outs[i] == v:
                del outs[i]
                break
        ins = self.in_adj[v]
        for i in range(len(ins) - 1, -1, -1):
            if ins[i] == u:
                del ins[i]
                break
        if count == 1:
            del self._mult[key]
        else:
            self._mult[key] = count - 1
        self.m -= 1

    def predecessors(self, v: int) -> list[int]:
        """Current in-list of v, duplicates included for parallel edges."""
        self._check(v)
        return self.in_adj[v]

    def successors(self, v: int) -> list[int]:
        self._check(v)
        return self.out_adj[v]

    def multiplicity(self, u: int, v: int) -> int:
        return self._mult.get((u, v), 0)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._mult

    def edge_pairs(self) -> list[tuple[int, int]]:
        """Distinct live edge pairs, sorted."""
        return sorted(self._mult)

    def edge_instances(self) -> list[tuple[int, int]]:
        """All live edge instances with multiplicity, sorted."""
        out = []
        for key in sorted(self._mult):
            out.extend([key] * self._mult[key])
        return out

    def copy(self) -> "Cfg":
        g = Cfg(root=self.root)
        g.out_adj = [list(a) for a in self.out_adj]
        g.in_adj = [list(a) for a in self.in_adj]
        g._mult = dict(self._mult)
        g.m = self.m
        return g

    def check_consistency(self) -> None:
        """Full-scan invariant check used by tests: out/in lists agree."""
        n = len(self.out_adj)
        assert len(self.in_adj) == n
        out_count: dict[tuple[int, int], int] = {}
        for u in range(n):
            for v in self.out_adj[u]:
                out_count[(u, v)] = out_count.get((u, v), 0) + 1
        in_count: dict[tuple[int, int], int] = {}
        for v in range(n):
            for u in self.in_adj[v]:
                in_count[(u, v)] = in_count.get((u, v), 0) + 1
        assert out_count == in_count == self._mult
        assert sum(len(a) for a in self.out_adj) == self.m
