"""Loop nesting forest maintained under edge insertions and deletions.

State is two per-vertex maps plus a loop census:

- types[v]: NONHEADER, SELF (heads only a self loop), or REDUCIBLE (heads a
  reducible loop);
- headers[v]: the immediate enclosing loop header, NONE at top level. Header
  chains strictly ascend spanning-tree ancestry and encode the forest;
- counts: [number of SELF-typed vertices, number of REDUCIBLE-typed
  vertices], adjusted on every type transition.

Insertion handling depends on how the repaired tree classifies the new edge:
self edges flip the type locally; forward and cross edges into a loop body
are either no-ops (source already inside), absorptions (source below the
header), or a second entry into the region, which raises IrreducibleError;
back edges seed a membership flood that walks predecessors backwards, lifting
each through find_loop_head so nested loops are absorbed whole at the right
level. When a repair restructured the tree, every non-tree edge with an
endpoint in the repaired set is reprocessed the same way, in ascending
preorder.

Deletion locates the nearest enclosing header that may have lost membership
paths, reseeds from surviving back-edge sources, downgrades the header when
none survive, and rebuilds membership bottom-up through the enclosing-header
chain; displaced vertices that no fresh flood re-reaches drain to the nearest
still-valid enclosing header (or to top level). Deletions never make a
reducible graph irreducible, so this path has no error exit.

All worklists are FIFO queues with membership sets, which makes counters and
state evolution reproducible. Writes go through journaling setters so a
rejected insertion can be rolled back from a copy-on-write journal of touched
entries.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .dfst import NONE, DepthFirstTree, EdgeClass, RepairReport
from .errors import IrreducibleError, LatchedError
from .graph import Cfg


class LoopType(enum.Enum):
    NONHEADER = "NONHEADER"
    SELF = "SELF"
    REDUCIBLE = "REDUCIBLE"


@dataclass
class UpdateCounters:
    """Locality instrumentation for one update.

    k counts loop-assignment inspections and changes (each find_loop_head hop
    and each touched vertex increments it); touched is the set behind it, so
    k >= len(touched). delta is the size of the tree repair's changed set.
    """

    k: int = 0
    delta: int = 0
    touched: set[int] = field(default_factory=set)

    def touch(self, v: int) -> None:
        self.k += 1
        self.touched.add(v)


class LoopNestingForest:
    def __init__(self, n: int):
        self.types: list[LoopType] = [LoopType.NONHEADER] * n
        self.headers: list[int] = [NONE] * n
        self.counts: list[int] = [0, 0]
        self.irreducible = False
        self.memoize_lifts = False
        self._counters: UpdateCounters | None = None
        self._lift_cache: dict[tuple[int, int], int] | None = None
        self._journal: list[tuple[int, LoopType, int]] | None = None
        self._journaled: set[int] = set()
        self._journal_counts: tuple[int, int] = (0, 0)

    @classmethod
    def from_static(cls, static) -> "LoopNestingForest":
        forest = cls(len(static.header))
        forest.reset_from_static(static)
        return forest

    # -- journaling --------------------------------------------------------

    def begin_journal(self) -> None:
        self._journal = []
        self._journaled = set()
        self._journal_counts = (self.counts[0], self.counts[1])

    def rollback_journal(self) -> None:
        assert self._journal is not None
        for v, t, h in reversed(self._journal):
            self.types[v] = t
            self.headers[v] = h
        self.counts = list(self._journal_counts)
        self.discard_journal()

    def discard_journal(self) -> None:
        self._journal = None
        self._journaled = set()

    def _note(self, v: int) -> None:
        if self._journal is not None and v not in self._journaled:
            self._journaled.add(v)
            self._journal.append((v, self.types[v], self.headers[v]))

    def _set_type(self, v: int, t: LoopType) -> None:
        old = self.types[v]
        if old is t:
            return
        self._note(v)
        if self._counters is not None:
            self._counters.touch(v)
        self.types[v] = t
        if old is LoopType.SELF:
            self.counts[0] -= 1
        elif old is LoopType.REDUCIBLE:
            self.counts[1] -= 1
        if t is LoopType.SELF:
            self.counts[0] += 1
        elif t is LoopType.REDUCIBLE:
            self.counts[1] += 1

    def _set_header(self, v: int, h: int) -> None:
        if self.headers[v] == h:
            return
        self._note(v)
        if self._counters is not None:
            self._counters.touch(v)
        self.headers[v] = h

    # -- queries -----------------------------------------------------------

    def find_loop_head(self, tree: DepthFirstTree, x: int, head: int) -> int:
        """First vertex on x's header chain whose own header is NONE or an
        ancestor of head; terminates because chains are acyclic."""
        headers = self.headers
        pre, post = tree.pre, tree.post
        pre_head, post_head = pre[head], post[head]
        counters = self._counters
        cache = self._lift_cache
        if cache is not None:
            hit = cache.get((x, head))
            if hit is not None:
                return hit
        xs = x
        if counters is not None:
            counters.touch(xs)
        while True:
            lh = headers[xs]
            if lh == NONE or (pre[lh] <= pre_head and post_head <= post[lh]):
                break
            xs = lh
            if counters is not None:
                counters.touch(xs)
        if cache is not None:
            cache[(x, head)] = xs
        return xs

    def loop_body(self, h: int) -> set[int]:
        """Members of h's loop: h plus every vertex whose header chain
        reaches h."""
        if self.types[h] is not LoopType.REDUCIBLE:
            raise ValueError(f"vertex {h} does not head a reducible loop")
        headers = self.headers
        inside: dict[int, bool] = {h: True}
        for v in range(len(headers)):
            chain = []
            cur = v
            while cur != NONE and cur not in inside:
                chain.append(cur)
                cur = headers[cur]
            verdict = cur != NONE and inside[cur]
            for w in chain:
                inside[w] = verdict
        return {v for v, ok in inside.items() if ok}

    def census(self) -> tuple[int, int]:
        """Recount the loop census from types by full scan."""
        return (sum(t is LoopType.SELF for t in self.types),
                sum(t is LoopType.REDUCIBLE for t in self.types))

    def verify_against(self, static) -> bool:
        """Exact per-vertex agreement with a canonical static forest (any
        object with header and kind lists)."""
        return self.headers == static.header and self.types == static.kind

    def dump(self) -> str:
        """One line per vertex: id loop-type immediate-header (- for none)."""
        lines = []
        for v in range(len(self.types)):
            h = self.headers[v]
            lines.append(f"{v} {self.types[v].name} {'-' if h == NONE else h}")
        return "\n".join(lines) + "\n"

    def snapshot(self) -> tuple[tuple[LoopType, ...], tuple[int, ...]]:
        return tuple(self.types), tuple(self.headers)

    def reset_from_static(self, static) -> None:
        """Replace the state wholesale and clear the irreducible latch."""
        self.headers = list(static.header)
        self.types = list(static.kind)
        self.counts = [sum(t is LoopType.SELF for t in static.kind),
                       sum(t is LoopType.REDUCIBLE for t in static.kind)]
        self.irreducible = False

    # -- incremental update ------------------------------------------------

    def on_insert_edge(self, g: Cfg, tree: DepthFirstTree, x: int, y: int,
                       repair: RepairReport | None = None) -> UpdateCounters:
        """Repair the forest after (x, y) was inserted and the tree repaired.

        Raises IrreducibleError when the insertion creates a multi-entry
        region; state writes up to that point stay in the journal for the
        caller to roll back.
        """
        if self.irreducible:
            raise LatchedError("forest is latched; reset before updating")
        counters = UpdateCounters()
        if repair is not None:
            counters.delta = repair.delta
        self._counters = counters
        self._lift_cache = {} if self.memoize_lifts else None
        try:
            if tree.attached[x]:
                self._insert_case(g, tree, x, y)
                if repair is not None and repair.changed:
                    self._sweep_after_restructure(g, tree, repair)
            return counters
        finally:
            self._counters = None
            self._lift_cache = None

    def _insert_case(self, g: Cfg, tree: DepthFirstTree, x: int, y: int) -> None:
        counters = self._counters
        if x == y:
            counters.touch(x)
            if self.types[x] is LoopType.NONHEADER:
                self._set_type(x, LoopType.SELF)
            return
        kind = tree.classify_edge(x, y, refined=True)
        counters.touch(y)
        if kind in (EdgeClass.FORWARD, EdgeClass.FORWARD_CROSS, EdgeClass.BACK_CROSS):
            lhy = self.headers[y]
            if lhy == NONE:
                return
            if not tree.is_ancestor(lhy, x):
                raise IrreducibleError(x, y, "entry into a loop body bypassing its header")
            self._flood_insert(g, tree, lhy, x)
        elif kind is EdgeClass.BACK:
            self._flood_insert(g, tree, y, x)
        else:  # a tree edge
            lhy = self.headers[y]
            if lhy != NONE:
                self._flood_insert(g, tree, lhy, x)
            else:
                self._climb_for_seeds(g, tree, x, y)

    def _flood_insert(self, g: Cfg, tree: DepthFirstTree, h: int, x: int) -> None:
        """Absorb x (lifted) and its admissible reverse cone into h's loop."""
        counters = self._counters
        headers = self.headers
        xs = self.find_loop_head(tree, x, h)
        if xs == h or headers[xs] == h:
            return  # already the header or already a member
        if not tree.is_ancestor(h, xs):
            raise IrreducibleError(x, h, "loop body would gain a second entry")
        counters.touch(h)
        if self.types[h] is not LoopType.REDUCIBLE:
            self._set_type(h, LoopType.REDUCIBLE)
        queue = deque((xs,))
        queued = {xs}
        in_adj = g.in_adj
        attached = tree.attached
        while queue:
            v = queue.popleft()
            counters.touch(v)
            self._set_header(v, h)
            for w in in_adj[v]:
                if w == v or not attached[w] or tree.is_back_edge(w, v):
                    continue
                ws = self.find_loop_head(tree, w, h)
                if not tree.is_ancestor(h, ws):
                    raise IrreducibleError(w, v, "loop body would gain a second entry")
                if ws != h and headers[ws] != h and ws not in queued:
                    queued.add(ws)
                    queue.append(ws)

    def _climb_for_seeds(self, g: Cfg, tree: DepthFirstTree, x: int, y: int) -> None:
        """Tree-edge insertion: climb from x through nca(x, y) looking for
        unclaimed back-edge sources to seed a loop from."""
        counters = self._counters
        stop = tree.nca(x, y)
        headers = self.headers
        h = x
        while True:
            counters.touch(h)
            seeds = [z for z in g.in_adj[h]
                     if z != h and tree.attached[z] and tree.is_back_edge(z, h)
                     and headers[z] == NONE]
            if seeds:
                for z in seeds:
                    self._flood_insert(g, tree, h, z)
                return
            if h == stop:
                return
            h = tree.parent[h]
            if h == NONE:
                return

    def _sweep_after_restructure(self, g: Cfg, tree: DepthFirstTree,
                                 repair: RepairReport) -> None:
        """Reclassify and reprocess every edge with an endpoint in the
        repaired set, in ascending preorder.

        Tree pairs are included: a repair can turn an old non-tree edge into
        a tree edge whose target already belongs to a loop, and that edge
        must absorb its source like any other entry below the header. The
        case analysis is a no-op for edges whose situation did not change.
        """
        changed = set(repair.changed)
        pre = tree.pre
        attached = tree.attached
        pairs = []
        for u, v in g.edge_pairs():
            if (u in changed or v in changed) and attached[u] and attached[v]:
                pairs.append((pre[u], pre[v], u, v))
        pairs.sort()
        for _, _, u, v in pairs:
            self._insert_case(g, tree, u, v)

    # -- decremental update --------------------------------------------------

    def on_delete_edge(self, g: Cfg, tree: DepthFirstTree, x: int, y: int,
                       was_tree: bool, repair: RepairReport | None = None) -> UpdateCounters:
        """Repair the forest after one instance of (x, y) was deleted and the
        tree repaired. was_tree is the cached pre-mutation tree status."""
        if self.irreducible:
            raise LatchedError("forest is latched; reset before updating")
        counters = UpdateCounters()
        if repair is not None:
            counters.delta = repair.delta
        self._counters = counters
        self._lift_cache = {} if self.memoize_lifts else None
        try:
            if repair is not None and repair.detached_now:
                self._cleanup_after_detach(g, tree, x, y, repair.detached_now)
            if x == y:
                counters.touch(x)
                if self.types[x] is LoopType.SELF and g.multiplicity(x, x) == 0:
                    self._set_type(x, LoopType.NONHEADER)
                return counters
            if not tree.attached[x] or not tree.attached[y]:
                return counters
            self._delete_main(g, tree, x, y)
            return counters
        finally:
            self._counters = None
            self._lift_cache = None

    def _cleanup_after_detach(self, g: Cfg, tree: DepthFirstTree, x: int, y: int,
                              detached: tuple[int, ...]) -> None:
        """Handle the consequences of vertices detaching: clear their
        assignments, downgrade attached headers on their old chains that lost
        every back source, and when the deleted edge led into the detached
        cone, expel attached members whose membership paths ran through it.
        """
        counters = self._counters
        headers, types = self.headers, self.types
        # Only loops that contained the deleted edge (the attached headers on
        # y's old chain) can lose attached members; capture them before the
        # chains are cleared, outermost first.
        levels: list[int] = []
        if x != y and y in set(detached) and tree.attached[x]:
            c = headers[y]
            while c != NONE:
                if tree.attached[c]:
                    levels.append(c)
                c = headers[c]
            levels.reverse()

        hit: list[int] = []
        seen: set[int] = set()
        for d in sorted(detached):
            counters.touch(d)
            h = headers[d]
            while h != NONE and h not in seen:
                seen.add(h)
                counters.touch(h)
                if tree.attached[h]:
                    hit.append(h)
                h = headers[h]
        for d in sorted(detached):
            self._set_header(d, NONE)
            self._set_type(d, LoopType.NONHEADER)
        hit.sort(key=lambda h: (-tree.depth[h], h))  # innermost first
        for h in hit:
            if types[h] is LoopType.REDUCIBLE \
                    and not self._surviving_back_sources(g, tree, h):
                self._downgrade(g, h)

        for h in levels:
            if x == h:
                continue
            lifted = self.find_loop_head(tree, x, h)
            if lifted != h and headers[lifted] == h:
                self._rebuild_membership(g, tree, h, [lifted])

    def _downgrade(self, g: Cfg, h: int) -> None:
        """A header with no surviving back source stops heading a loop."""
        self._set_type(h, LoopType.SELF if g.multiplicity(h, h) else LoopType.NONHEADER)

    def _surviving_back_sources(self, g: Cfg, tree: DepthFirstTree, h: int) -> list[int]:
        """Back-edge sources of h, lifted, that are still members of h's loop."""
        headers = self.headers
        out: list[int] = []
        seen: set[int] = set()
        for z in g.in_adj[h]:
            if z == h or not tree.attached[z] or not tree.is_back_edge(z, h):
                continue
            v = self.find_loop_head(tree, z, h)
            if headers[v] == h and v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def _delete_main(self, g: Cfg, tree: DepthFirstTree, x: int, y: int) -> None:
        counters = self._counters
        headers = self.headers
        counters.touch(x)
        counters.touch(y)
        if tree.is_descendant_edge(x, y):
            return  # forward-positioned: no loop structure is affected
        back_cross = tree.post[y] < tree.pre[x]
        if back_cross and headers[y] == NONE:
            return
        if headers[x] == NONE:
            return
        if back_cross:
            h = headers[y]
            while h != NONE and not tree.is_ancestor(h, x):
                counters.touch(h)
                h = headers[h]
            if h == NONE:
                return
            displaced = [self.find_loop_head(tree, x, h)]
        elif headers[x] == y:
            # a back edge into the immediate header was removed
            h = y
            displaced = [x]
        elif headers[y] == x:
            # defensive: with a canonical tree an edge out of a header is
            # descendant-positioned and returned above
            h = x
            displaced = [y]
        else:
            # general removal: nearest loop head enclosing both endpoints
            anc_x: set[int] = set()
            s = x
            while s != NONE:
                anc_x.add(s)
                s = headers[s]
            h = y
            while h != NONE and h not in anc_x:
                counters.touch(h)
                h = headers[h]
            if h == NONE:
                return
            displaced = [self.find_loop_head(tree, x, h)]
        self._rebuild_membership(g, tree, h, displaced)

    def _rebuild_membership(self, g: Cfg, tree: DepthFirstTree, h: int,
                            displaced: list[int]) -> None:
        """Reseed h's loop from surviving back sources, climbing enclosing
        headers until every displaced vertex is either re-reached or drained
        to the nearest still-valid level."""
        counters = self._counters
        headers, types = self.headers, self.types
        in_adj = g.in_adj
        attached = tree.attached
        worklist = deque(displaced)
        in_worklist = set(displaced)

        seeds = self._surviving_back_sources(g, tree, h)
        if not seeds and types[h] is LoopType.REDUCIBLE:
            counters.touch(h)
            self._downgrade(g, h)
        wl = deque(seeds)
        wl_set = set(seeds)
        new_head = h
        loop_body: set[int] = set()

        while True:
            if all(any(tree.is_ancestor(z, w) for w in wl_set) for z in in_worklist):
                break
            while wl:
                v = wl.popleft()
                wl_set.discard(v)
                counters.touch(v)
                self._set_header(v, new_head)
                loop_body.add(v)
                in_worklist.discard(v)
                for w in in_adj[v]:
                    if w == v or not attached[w] or tree.is_back_edge(w, v):
                        continue
                    ws = self.find_loop_head(tree, w, h)
                    if headers[ws] in (h, new_head) and ws not in loop_body \
                            and ws not in wl_set:
                        wl_set.add(ws)
                        wl.append(ws)
            new_head = headers[new_head]
            if new_head == NONE or not in_worklist:
                break
            wl.clear()
            wl_set.clear()
            for z in in_adj[new_head]:
                if z == new_head or not attached[z] or not tree.is_back_edge(z, new_head):
                    continue
                v = self.find_loop_head(tree, z, h)
                if headers[v] in (h, new_head) and v not in loop_body \
                        and v not in wl_set:
                    wl_set.add(v)
                    wl.append(v)

        while worklist:
            v = worklist.popleft()
            if v not in in_worklist:
                continue
            in_worklist.discard(v)
            counters.touch(v)
            self._set_header(v, new_head)
            for w in in_adj[v]:
                if w == v or not attached[w] or tree.is_back_edge(w, v):
                    continue
                ws = self.find_loop_head(tree, w, h)
                if headers[ws] == h and ws not in loop_body and ws not in in_worklist:
                    in_worklist.add(ws)
                    worklist.append(ws)
