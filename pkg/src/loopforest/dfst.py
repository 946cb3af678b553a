"""Depth-first spanning tree of the reachable subgraph.

The tree is always the canonical one: the tree a single depth-first search
from the root produces when it scans successor lists in insertion order,
stamping pre on entry and post on exit from one global counter. Repairs
reproduce exactly that tree for the updated graph, so interval queries and
edge classification never depend on update history. The cheap cases are
recognized without touching the tree:

- inserting an edge whose target is already visited when the scan would reach
  it (self, back, forward, back-cross, parallel-to-tree) changes nothing;
- inserting a forward-cross edge re-runs the search inside the subtree rooted
  at nca(u, v) only, reusing that subtree's timestamp range;
- deleting a non-tree edge instance changes nothing (deletion removes the
  most recently inserted instance, which the search never followed);
- everything else (attaching a detached target, deleting a tree edge) falls
  back to a full rebuild.

Every repair reports the exact set of vertices whose parent, timestamps, or
attachment changed; vertices outside the report are untouched, values
included.

Single-writer contract, same as the graph: repairs need exclusive access,
queries may be shared between updates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DetachedVertexError
from .graph import Cfg

NONE = -1


class EdgeClass(enum.Enum):
    TREE = "Tree"
    FORWARD = "Forward"
    SELF = "Self"
    BACK = "Back"
    CROSS = "Cross"
    FORWARD_CROSS = "ForwardCross"
    BACK_CROSS = "BackCross"


@dataclass(frozen=True)
class RepairReport:
    """What a repair changed.

    changed: vertices whose parent, pre, post, or attachment differ (sorted).
    attached_now / detached_now: attachment transitions, subsets of changed.
    inserted_is_tree: for insertions, whether (u, v) is a tree pair afterwards.
    renumbered: whether any timestamps were reassigned.
    """

    changed: tuple[int, ...] = ()
    attached_now: tuple[int, ...] = ()
    detached_now: tuple[int, ...] = ()
    inserted_is_tree: bool = False
    renumbered: bool = False

    @property
    def delta(self) -> int:
        return len(self.changed)


_NO_CHANGE = RepairReport()


@dataclass
class DepthFirstTree:
    parent: list[int] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    pre: list[int] = field(default_factory=list)
    post: list[int] = field(default_factory=list)
    depth: list[int] = field(default_factory=list)
    attached: list[bool] = field(default_factory=list)
    epoch: int = 0
    reverse_scan: bool = False
    visit_count: int = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, g: Cfg, reverse_scan: bool = False) -> "DepthFirstTree":
        tree = cls(reverse_scan=reverse_scan)
        tree.rebuild(g)
        return tree

    def rebuild(self, g: Cfg) -> None:
        """Recompute the whole tree from scratch."""
        n = g.n
        self.parent = [NONE] * n
        self.children = [[] for _ in range(n)]
        self.pre = [NONE] * n
        self.post = [NONE] * n
        self.depth = [NONE] * n
        self.attached = [False] * n
        if n:
            seen = [False] * n
            self._dfs(g, g.root, NONE, 0, 0, seen)
        self.epoch += 1

    def _dfs(self, g: Cfg, start: int, start_parent: int, start_depth: int,
             counter: int, seen: list[bool]) -> int:
        """Stamp the cone reachable from start through unseen vertices."""
        out = g.out_adj
        parent, children = self.parent, self.children
        pre, post, depth, attached = self.pre, self.post, self.depth, self.attached
        rev = self.reverse_scan
        visits = 0

        seen[start] = True
        parent[start] = start_parent
        depth[start] = start_depth
        attached[start] = True
        children[start] = []
        pre[start] = counter
        counter += 1
        visits += 1
        adj0 = out[start]
        stack = [[start, adj0[::-1] if rev else adj0, 0]]
        while stack:
            frame = stack[-1]
            v, adj, i = frame
            if i < len(adj):
                frame[2] = i + 1
                w = adj[i]
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    attached[w] = True
                    children[w] = []
                    children[v].append(w)
                    pre[w] = counter
                    counter += 1
                    visits += 1
                    adjw = out[w]
                    stack.append([w, adjw[::-1] if rev else adjw, 0])
            else:
                stack.pop()
                post[v] = counter
                counter += 1
        self.visit_count += visits
        return counter

    # -- queries -----------------------------------------------------------

    def _require_attached(self, v: int) -> None:
        if not (0 <= v < len(self.attached)) or not self.attached[v]:
            raise DetachedVertexError(f"vertex {v} is not attached to the tree")

    def is_ancestor(self, a: int, d: int) -> bool:
        """True iff d's interval is contained in a's; reflexive."""
        self._require_attached(a)
        self._require_attached(d)
        return self.pre[a] <= self.pre[d] and self.post[d] <= self.post[a]

    def nca(self, u: int, v: int) -> int:
        """Nearest common ancestor, by climbing parents to equal depth."""
        self._require_attached(u)
        self._require_attached(v)
        parent, depth = self.parent, self.depth
        while depth[u] > depth[v]:
            u = parent[u]
        while depth[v] > depth[u]:
            v = parent[v]
        while u != v:
            u = parent[u]
            v = parent[v]
        return u

    def classify_edge(self, u: int, v: int, refined: bool = True) -> EdgeClass:
        """Classify the pair (u, v) by interval tests on the current tree."""
        self._require_attached(u)
        self._require_attached(v)
        if u == v:
            return EdgeClass.SELF
        if self.parent[v] == u:
            return EdgeClass.TREE
        pre, post = self.pre, self.post
        if pre[v] < pre[u] and post[u] < post[v]:
            return EdgeClass.BACK
        if pre[u] < pre[v] and post[v] < post[u]:
            return EdgeClass.FORWARD
        if not refined:
            return EdgeClass.CROSS
        return EdgeClass.FORWARD_CROSS if post[u] < pre[v] else EdgeClass.BACK_CROSS

    # Unsafe predicates for inner loops: callers have checked attachment.

    def is_back_edge(self, u: int, v: int) -> bool:
        return u != v and self.pre[v] < self.pre[u] and self.post[u] < self.post[v]

    def is_descendant_edge(self, u: int, v: int) -> bool:
        """v strictly below u: a forward or tree edge."""
        return u != v and self.pre[u] < self.pre[v] and self.post[v] < self.post[u]

    def is_back_cross(self, u: int, v: int) -> bool:
        return self.post[v] < self.pre[u]

    # -- repair ------------------------------------------------------------

    def repair_after_insert(self, g: Cfg, u: int, v: int) -> RepairReport:
        """Bring the tree up to date after (u, v) was added to g."""
        if not self.attached[u]:
            return _NO_CHANGE
        if not self.attached[v]:
            report = self._rebuild_diff(g)
        else:
            kind = self.classify_edge(u, v, refined=True)
            if kind is EdgeClass.FORWARD_CROSS:
                report = self._rebuild_subtree(g, self.nca(u, v))
            else:
                return RepairReport(inserted_is_tree=kind is EdgeClass.TREE)
        is_tree = self.attached[v] and self.parent[v] == u
        return RepairReport(report.changed, report.attached_now,
                            report.detached_now, is_tree, report.renumbered)

    def repair_after_delete(self, g: Cfg, u: int, v: int, was_tree: bool) -> RepairReport:
        """Bring the tree up to date after one instance of (u, v) was removed.

        was_tree must be captured before the mutation: it is true iff the
        removed instance was the one the search followed (parent[v] == u and
        no parallel instance remains to stand in for it).
        """
        if not was_tree:
            return _NO_CHANGE
        return self._rebuild_diff(g)

    def _rebuild_subtree(self, g: Cfg, c: int) -> RepairReport:
        """Re-run the search inside T(c); timestamps outside never move.

        The vertex set of T(c) cannot change here (the triggering edge has
        both endpoints below c), so the subtree re-fills its old timestamp
        range exactly.
        """
        members = self.subtree_vertices(c)
        old = {w: (self.parent[w], self.pre[w], self.post[w]) for w in members}
        allowed = set(members)
        seen = [w not in allowed for w in range(g.n)]
        end = self._dfs(g, c, self.parent[c], self.depth[c], self.pre[c], seen)
        assert end == old[c][2] + 1, "subtree repair escaped its timestamp range"
        changed = tuple(sorted(
            w for w in members
            if (self.parent[w], self.pre[w], self.post[w]) != old[w]))
        self.epoch += 1
        return RepairReport(changed=changed, renumbered=True)

    def _rebuild_diff(self, g: Cfg) -> RepairReport:
        old_parent = self.parent
        old_pre, old_post = self.pre, self.post
        old_attached = self.attached
        self.rebuild(g)
        changed = []
        gained, lost = [], []
        for w in range(g.n):
            was, now = old_attached[w], self.attached[w]
            if was != now:
                changed.append(w)
                (gained if now else lost).append(w)
            elif now and (self.parent[w] != old_parent[w]
                          or self.pre[w] != old_pre[w]
                          or self.post[w] != old_post[w]):
                changed.append(w)
        return RepairReport(tuple(changed), tuple(gained), tuple(lost),
                            renumbered=True)

    # -- helpers / export --------------------------------------------------

    def subtree_vertices(self, c: int) -> list[int]:
        """Vertices of T(c) in discovery order."""
        self._require_attached(c)
        out = [c]
        stack = [c]
        children = self.children
        while stack:
            v = stack.pop()
            for w in reversed(children[v]):
                out.append(w)
                stack.append(w)
        # rebuild in preorder: the stack walk above appends children eagerly
        out.sort(key=self.pre.__getitem__)
        return out

    def check_intervals(self) -> None:
        """Assert interval sanity: nesting, children order, attachment."""
        n = len(self.pre)
        events = []
        for v in range(n):
            if self.attached[v]:
                assert self.pre[v] < self.post[v]
                events.append((self.pre[v], v))
                events.append((self.post[v], v))
            else:
                assert self.parent[v] == NONE
                assert self.pre[v] == NONE and self.post[v] == NONE
        events.sort()
        assert len({t for t, _ in events}) == len(events), "duplicate timestamps"
        stack: list[int] = []
        for _, v in events:
            if stack and stack[-1] == v:
                stack.pop()
            else:
                stack.append(v)
        assert not stack, "intervals partially overlap"
        for v in range(n):
            if self.attached[v]:
                kids = self.children[v]
                assert kids == sorted(kids, key=self.pre.__getitem__)
                for w in kids:
                    assert self.parent[w] == v

    def dump(self) -> str:
        """One line per vertex: id parent pre post depth attached."""
        def s(x: int) -> str:
            return "-" if x == NONE else str(x)

        lines = []
        for v in range(len(self.parent)):
            lines.append(f"{v} {s(self.parent[v])} {s(self.pre[v])} "
                         f"{s(self.post[v])} {s(self.depth[v])} "
                         f"{1 if self.attached[v] else 0}")
        return "\n".join(lines) + "\n"

    def to_dot(self, g: Cfg) -> str:
        """DOT text: tree edges solid, non-tree edges dashed with class tags."""
        lines = ["digraph dfst {"]
        for v in range(g.n):
            attrs = []
            if v == g.root:
                attrs.append("shape=doublecircle")
            if not self.attached[v]:
                attrs.append("style=dotted")
            suffix = f" [{' '.join(attrs)}]" if attrs else ""
            lines.append(f"  {v}{suffix};")
        for u, v in g.edge_instances():
            if not (self.attached[u] and self.attached[v]):
                lines.append(f'  {u} -> {v} [style=dotted label="Detached"];')
                continue
            kind = self.classify_edge(u, v, refined=True)
            if kind is EdgeClass.TREE:
                lines.append(f"  {u} -> {v};")
            else:
                lines.append(f'  {u} -> {v} [style=dashed label="{kind.value}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
