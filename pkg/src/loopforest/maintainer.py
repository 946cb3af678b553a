"""Update transactions over the graph, spanning tree, and loop forest.

One update is: mutate the graph, repair the tree, repair the forest. The
three never interleave with queries (single-writer contract). Irreducible
insertions follow the configured policy:

- reject: the insertion is undone atomically (edge removed, tree restored,
  forest rolled back from its journal) and IrreducibleError propagates; the
  state afterwards equals the state before.
- latch: the edge and the repaired tree are kept, the forest rolls back to
  its pre-update values and latches; further updates raise LatchedError until
  reset_from_static() is called on a reducible graph again.
"""

from __future__ import annotations

from .dfst import DepthFirstTree, RepairReport
from .errors import IrreducibleError
from .forest import LoopNestingForest, UpdateCounters
from .graph import Cfg

REJECT = "reject"
LATCH = "latch"


class LoopForestMaintainer:
    def __init__(self, g: Cfg, policy: str = REJECT):
        if policy not in (REJECT, LATCH):
            raise ValueError(f"unknown policy {policy!r}")
        self.g = g
        self.policy = policy
        self.tree = DepthFirstTree.build(g)
        self.forest = LoopNestingForest(g.n)
        self.epoch = 0
        self.last_counters = UpdateCounters()
        self.last_repair = RepairReport()

    def insert_edge(self, u: int, v: int) -> UpdateCounters:
        g, tree, forest = self.g, self.tree, self.forest
        g.insert_edge_raw(u, v)
        repair = tree.repair_after_insert(g, u, v)
        forest.begin_journal()
        try:
            counters = forest.on_insert_edge(g, tree, u, v, repair)
        except IrreducibleError:
            forest.rollback_journal()
            if self.policy == REJECT:
                g.delete_edge_raw(u, v)
                if repair.changed:
                    tree.rebuild(g)
            else:
                forest.irreducible = True
                self.epoch += 1
            raise
        forest.discard_journal()
        self.epoch += 1
        self.last_counters = counters
        self.last_repair = repair
        return counters

    def delete_edge(self, u: int, v: int) -> UpdateCounters:
        g, tree, forest = self.g, self.tree, self.forest
        was_tree = self.tree_edge_would_vanish(u, v)
        g.delete_edge_raw(u, v)
        repair = tree.repair_after_delete(g, u, v, was_tree)
        counters = forest.on_delete_edge(g, tree, u, v, was_tree, repair)
        self.epoch += 1
        self.last_counters = counters
        self.last_repair = repair
        return counters

    def tree_edge_would_vanish(self, u: int, v: int) -> bool:
        """True iff deleting one (u, v) instance removes the tree edge: the
        pair is the tree link into v and no parallel instance survives."""
        return (self.tree.attached[v] and self.tree.parent[v] == u
                and self.g.multiplicity(u, v) == 1)

    def reset_from_static(self, static) -> None:
        """Recover from a latched state once the graph is reducible again."""
        self.tree.rebuild(self.g)
        self.forest.reset_from_static(static)
        self.epoch += 1
