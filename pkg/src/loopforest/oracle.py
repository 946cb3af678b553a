"""Offline reference algorithms used as ground truth in differential tests.

Everything here recomputes from scratch and stays independent of the
incremental code paths: the forest builder is a bottom-up flood over
collapsed inner loops, the reducibility test is the classic T1/T2 collapse,
and dominators come in two flavors (iterative intersection on reverse
postorder, and a plain dataflow fixpoint over bitmask dominator sets kept as
a second-level oracle for small graphs). All functions are pure in their
inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dfst import NONE, DepthFirstTree
from .errors import IrreducibleError
from .forest import LoopType
from .graph import Cfg


@dataclass
class StaticLoopForest:
    """Canonical forest: immediate header and loop type per vertex."""

    header: list[int]
    kind: list[LoopType]
    flood_visits: int = 0

    def dump(self) -> str:
        lines = []
        for v in range(len(self.header)):
            h = self.header[v]
            lines.append(f"{v} {self.kind[v].name} {'-' if h == NONE else h}")
        return "\n".join(lines) + "\n"


@dataclass
class DomTree:
    """Immediate dominators; NONE for the root and for detached vertices."""

    idom: list[int]

    def dominates(self, u: int, v: int) -> bool:
        while v != NONE:
            if v == u:
                return True
            v = self.idom[v]
        return False


def build_loop_forest(g: Cfg, tree: DepthFirstTree) -> StaticLoopForest:
    """Bottom-up loop discovery over the supplied spanning tree.

    Potential headers are visited in reverse preorder so inner loops are
    found first. Each header with incoming back edges floods backwards from
    the back-edge sources; already-discovered loops are collapsed by climbing
    header links to their current top. A flood that reaches a vertex outside
    the candidate header's subtree witnesses a second entry and raises
    IrreducibleError.
    """
    n = g.n
    header = [NONE] * n
    kind = [LoopType.NONHEADER] * n
    pre, post, attached = tree.pre, tree.post, tree.attached
    in_adj = g.in_adj
    visits = 0

    order = sorted((v for v in range(n) if attached[v]),
                   key=pre.__getitem__, reverse=True)

    def top(v: int) -> int:
        while header[v] != NONE:
            v = header[v]
        return v

    for w in order:
        if g.multiplicity(w, w) and kind[w] is LoopType.NONHEADER:
            kind[w] = LoopType.SELF
        seeds = [z for z in in_adj[w]
                 if z != w and attached[z]
                 and pre[w] < pre[z] and post[z] < post[w]]
        if not seeds:
            continue
        kind[w] = LoopType.REDUCIBLE
        pre_w, post_w = pre[w], post[w]
        queue: list[int] = []
        queued = set()
        for z in seeds:
            r = top(z)
            if r != w and r not in queued:
                queued.add(r)
                queue.append(r)
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            visits += 1
            if not (pre_w < pre[v] and post[v] < post_w):
                raise IrreducibleError(v, w, "loop body entered outside its header")
            header[v] = w
            for z in in_adj[v]:
                if z == v or not attached[z]:
                    continue
                r = top(z)
                if r != w and r not in queued:
                    queued.add(r)
                    queue.append(r)

    return StaticLoopForest(header, kind, visits)


def reducibility_test(g: Cfg) -> bool:
    """True iff iterated T1/T2 transformations collapse the reachable
    subgraph to the root.

    T1 removes self loops; T2 merges a non-root vertex with a single distinct
    predecessor into that predecessor. Detached vertices are ignored.
    """
    n = g.n
    if n == 0:
        return True
    root = g.root
    reach = _reachable(g)
    alive = [reach[v] for v in range(n)]
    preds: list[set[int]] = [set() for _ in range(n)]
    succs: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        if not reach[u]:
            continue
        for v in g.out_adj[u]:
            if reach[v] and u != v:  # T1 up front: drop self loops
                preds[v].add(u)
                succs[u].add(v)

    worklist = [v for v in range(n) if reach[v] and v != root and len(preds[v]) == 1]
    remaining = sum(alive)
    while worklist:
        v = worklist.pop()
        if not alive[v] or v == root or len(preds[v]) != 1:
            continue
        (u,) = preds[v]
        # fold v into u
        alive[v] = False
        remaining -= 1
        succs[u].discard(v)
        for w in succs[v]:
            preds[w].discard(v)
            if w != u:
                preds[w].add(u)
                succs[u].add(w)
            if len(preds[w]) == 1 and w != root:
                worklist.append(w)
        succs[v].clear()
        preds[v].clear()
        if len(succs[u]) and u in succs[u]:  # new self loop from the fold
            succs[u].discard(u)
            preds[u].discard(u)
        for w in succs[u]:
            if len(preds[w]) == 1 and w != root:
                worklist.append(w)
    return remaining == 1


def _reachable(g: Cfg) -> list[bool]:
    n = g.n
    reach = [False] * n
    if n == 0:
        return reach
    reach[g.root] = True
    stack = [g.root]
    while stack:
        u = stack.pop()
        for v in g.out_adj[u]:
            if not reach[v]:
                reach[v] = True
                stack.append(v)
    return reach


def iterative_dominators(g: Cfg) -> DomTree:
    """Immediate dominators by iterated intersection on reverse postorder."""
    n = g.n
    idom = [NONE] * n
    if n == 0:
        return DomTree(idom)
    root = g.root
    # postorder over the reachable subgraph
    order: list[int] = []
    state = [0] * n  # 0 unseen, 1 on stack, 2 done
    state[root] = 1
    stack = [[root, 0]]
    while stack:
        frame = stack[-1]
        v, i = frame
        adj = g.out_adj[v]
        if i < len(adj):
            frame[1] = i + 1
            w = adj[i]
            if state[w] == 0:
                state[w] = 1
                stack.append([w, 0])
        else:
            stack.pop()
            state[v] = 2
            order.append(v)
    index = {v: i for i, v in enumerate(order)}
    rpo = order[::-1]

    idom[root] = root

    def intersect(a: int, b: int) -> int:
        while a != b:
            while index[a] < index[b]:
                a = idom[a]
            while index[b] < index[a]:
                b = idom[b]
        return a

    changed = True
    while changed:
        changed = False
        for v in rpo:
            if v == root:
                continue
            new = NONE
            for p in g.in_adj[v]:
                if p in index and idom[p] != NONE:
                    new = p if new == NONE else intersect(new, p)
            if new != NONE and idom[v] != new:
                idom[v] = new
                changed = True
    idom[root] = NONE
    return DomTree(idom)


def dominator_sets(g: Cfg) -> list[int]:
    """Dominator sets as bitmasks, by the plain dataflow fixpoint.

    Dom(root) = {root}; Dom(v) = {v} | AND over predecessors' Dom. Detached
    vertices get 0. Kept as a second-level oracle for small graphs.
    """
    n = g.n
    reach = _reachable(g)
    full = (1 << n) - 1
    dom = [full if reach[v] else 0 for v in range(n)]
    if n == 0:
        return dom
    root = g.root
    dom[root] = 1 << root
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if not reach[v] or v == root:
                continue
            acc = full
            for p in g.in_adj[v]:
                if reach[p]:
                    acc &= dom[p]
            acc |= 1 << v
            if acc != dom[v]:
                dom[v] = acc
                changed = True
    return dom


def idoms_from_dominator_sets(g: Cfg, dom: list[int]) -> DomTree:
    """Extract immediate dominators: the strict dominator with the largest
    dominator set is the closest one."""
    n = g.n
    idom = [NONE] * n
    for v in range(n):
        if dom[v] == 0 or v == g.root:
            continue
        strict = dom[v] & ~(1 << v)
        best = NONE
        best_size = -1
        d = strict
        while d:
            low = d & -d
            u = low.bit_length() - 1
            size = bin(dom[u]).count("1")
            if size > best_size:
                best, best_size = u, size
            d ^= low
        idom[v] = best
    return DomTree(idom)
