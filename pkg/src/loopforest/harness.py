"""Stream replay, differential checking, and fuzzing.

Modes:
- maintain: dynamic algorithms only;
- recompute: rebuild the spanning tree and the static forest from scratch
  after every event (the work baseline);
- differential: run both and fail fast on the first state mismatch.

The fuzz driver grows a random spanning skeleton first (uniform digraphs are
almost never reducible), then mixes back/forward/cross/self edge inserts,
deletes of live edges, and occasional skeleton-edge deletes. Insert
candidates are pre-screened with the reducibility oracle; a small fraction of
irreducible candidates is kept on purpose to exercise rejection. Every event
is followed by the full check battery (oracle forest equality, irreducibility
exactness, loop census, canonical-tree equality, classification, locality
containment). Failures shrink by greedy event removal. Everything is
deterministic in the seed.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from .dfst import DepthFirstTree
from .errors import IrreducibleError
from .graph import Cfg
from .maintainer import LATCH, REJECT, LoopForestMaintainer
from .oracle import build_loop_forest, reducibility_test
from .stream import UpdateEvent, UpdateStream, format_stream, validate_events

MAINTAIN = "maintain"
RECOMPUTE = "recompute"
DIFFERENTIAL = "differential"

OK = "ok"
REJECTED = "irreducible-rejected"
LATCHED = "irreducible-latched"


@dataclass(frozen=True)
class EventRow:
    seq: int
    kind: str
    src: int
    dst: int
    edge_class: str
    k: int
    delta: int
    outcome: str


@dataclass
class RunReport:
    mode: str
    policy: str
    n: int
    rows: list[EventRow] = field(default_factory=list)
    digest: str = ""
    mismatch: str | None = None
    final_dump: str = ""

    @property
    def total_k(self) -> int:
        return sum(r.k for r in self.rows)

    @property
    def max_k(self) -> int:
        return max((r.k for r in self.rows), default=0)

    @property
    def total_delta(self) -> int:
        return sum(r.delta for r in self.rows)

    @property
    def max_delta(self) -> int:
        return max((r.delta for r in self.rows), default=0)

    @property
    def outcome_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r.outcome] = out.get(r.outcome, 0) + 1
        return out


def state_digest(dump: str) -> str:
    return "sha256:" + hashlib.sha256(dump.encode("utf-8")).hexdigest()


def _edge_class_label(tree: DepthFirstTree, u: int, v: int) -> str:
    if not (tree.attached[u] and tree.attached[v]):
        return "Detached"
    return tree.classify_edge(u, v, refined=True).value


def run_stream(stream: UpdateStream, mode: str, policy: str = REJECT) -> RunReport:
    if mode == MAINTAIN:
        return _run_maintain(stream, policy)
    if mode == RECOMPUTE:
        return _run_recompute(stream, policy)
    if mode == DIFFERENTIAL:
        return _run_differential(stream, policy)
    raise ValueError(f"unknown mode {mode!r}")


def _run_maintain(stream: UpdateStream, policy: str) -> RunReport:
    report = RunReport(MAINTAIN, policy, stream.n)
    maint = LoopForestMaintainer(Cfg(stream.n, stream.root), policy)
    _drive_maintained(stream, maint, report.rows)
    report.final_dump = maint.forest.dump()
    report.digest = state_digest(report.final_dump)
    return report


def _drive_maintained(stream: UpdateStream, maint: LoopForestMaintainer,
                      rows: list[EventRow],
                      per_event=None) -> None:
    """Replay events into the maintainer, appending one row per processed
    event; stops after a latch. per_event(idx, row) may record extra state."""
    for ev in stream.events:
        if ev.kind == "+":
            try:
                counters = maint.insert_edge(ev.src, ev.dst)
                label = _edge_class_label(maint.tree, ev.src, ev.dst)
                row = EventRow(ev.seq, ev.kind, ev.src, ev.dst, label,
                               counters.k, counters.delta, OK)
            except IrreducibleError:
                outcome = REJECTED if maint.policy == REJECT else LATCHED
                row = EventRow(ev.seq, ev.kind, ev.src, ev.dst, "-", 0, 0, outcome)
        else:
            label = _edge_class_label(maint.tree, ev.src, ev.dst)
            counters = maint.delete_edge(ev.src, ev.dst)
            row = EventRow(ev.seq, ev.kind, ev.src, ev.dst, label,
                           counters.k, counters.delta, OK)
        rows.append(row)
        if per_event is not None:
            per_event(ev.seq, row)
        if row.outcome == LATCHED:
            break


def _run_recompute(stream: UpdateStream, policy: str) -> RunReport:
    """Baseline: raw graph mutation plus full tree and forest rebuilds.

    Rows reuse the counter columns for work measured in visited vertices:
    k = forest flood visits, delta = tree DFS visits.
    """
    report = RunReport(RECOMPUTE, policy, stream.n)
    g = Cfg(stream.n, stream.root)
    tree = DepthFirstTree.build(g)
    forest = build_loop_forest(g, tree)
    for ev in stream.events:
        outcome = OK
        label = "-"
        if ev.kind == "+":
            g.insert_edge_raw(ev.src, ev.dst)
            if not reducibility_test(g):
                outcome = REJECTED if policy == REJECT else LATCHED
                if policy == REJECT:
                    g.delete_edge_raw(ev.src, ev.dst)
        else:
            label = _edge_class_label(tree, ev.src, ev.dst)
            g.delete_edge_raw(ev.src, ev.dst)
        visits0 = tree.visit_count
        tree.rebuild(g)
        dfs_visits = tree.visit_count - visits0
        if outcome == LATCHED:
            report.rows.append(EventRow(ev.seq, ev.kind, ev.src, ev.dst, "-",
                                        0, dfs_visits, outcome))
            break
        forest = build_loop_forest(g, tree)
        if ev.kind == "+" and outcome == OK:
            label = _edge_class_label(tree, ev.src, ev.dst)
        report.rows.append(EventRow(ev.seq, ev.kind, ev.src, ev.dst, label,
                                    forest.flood_visits + stream.n, dfs_visits,
                                    outcome))
    report.final_dump = forest.dump()
    report.digest = state_digest(report.final_dump)
    return report


def _run_differential(stream: UpdateStream, policy: str) -> RunReport:
    """Maintain and recompute in lockstep; fail fast on first divergence."""
    report = RunReport(DIFFERENTIAL, policy, stream.n)
    maint = LoopForestMaintainer(Cfg(stream.n, stream.root), policy)

    def check(idx: int, row: EventRow) -> None:
        if report.mismatch is not None or row.outcome == LATCHED:
            return
        static = build_loop_forest(maint.g, maint.tree)
        if not maint.forest.verify_against(static):
            report.mismatch = (
                f"event {idx}: maintained forest diverges from recomputed\n"
                f"--- maintained ---\n{maint.forest.dump()}"
                f"--- recomputed ---\n{static.dump()}")

    _drive_maintained(stream, maint, report.rows, per_event=check)
    report.final_dump = maint.forest.dump()
    report.digest = state_digest(report.final_dump)
    return report


def render_report(report: RunReport) -> str:
    """Fixed-width event table plus a key=value section; byte-stable."""
    lines = [
        f"{'seq':>6} {'kind':<4} {'edge':<14} {'class':<13} {'k':>7} {'delta':>7} outcome",
    ]
    for r in report.rows:
        edge = f"({r.src},{r.dst})"
        lines.append(f"{r.seq:>6} {r.kind:<4} {edge:<14} {r.edge_class:<13} "
                     f"{r.k:>7} {r.delta:>7} {r.outcome}")
    lines.append("")
    lines.append(f"mode={report.mode}")
    lines.append(f"policy={report.policy}")
    lines.append(f"n={report.n}")
    lines.append(f"events={len(report.rows)}")
    lines.append(f"total_k={report.total_k}")
    lines.append(f"max_k={report.max_k}")
    lines.append(f"total_delta={report.total_delta}")
    lines.append(f"max_delta={report.max_delta}")
    for outcome, count in sorted(report.outcome_counts.items()):
        lines.append(f"outcome.{outcome}={count}")
    lines.append(f"digest={report.digest}")
    lines.append(f"status={'mismatch' if report.mismatch else 'ok'}")
    if report.mismatch:
        lines.append(report.mismatch)
    return "\n".join(lines) + "\n"


# -- fuzzing ----------------------------------------------------------------


@dataclass
class CaseResult:
    seed: int
    ok: bool
    events_run: int
    message: str = ""
    failing_index: int = -1
    stream: UpdateStream | None = None
    minimized: UpdateStream | None = None


def generate_stream(seed: int, n: int, events: int,
                    irreducible_share: float = 0.12) -> UpdateStream:
    """Random update stream, deterministic in the seed.

    A spanning skeleton is inserted first; churn then favors back edges (the
    loop makers), mixes in forward/cross/self edges and deletes, and keeps a
    small share of oracle-rejected insert candidates to exercise rejection.
    """
    rng = random.Random(seed)
    g = Cfg(n, 0)
    out: list[UpdateEvent] = []

    def emit(kind: str, u: int, v: int) -> None:
        out.append(UpdateEvent(kind, u, v, len(out)))

    order = list(range(1, n))
    rng.shuffle(order)
    placed = [0]
    skeleton_parent = [-1] * n
    for v in order:
        if len(out) >= events:
            break
        p = rng.choice(placed)
        skeleton_parent[v] = p
        placed.append(v)
        g.insert_edge_raw(p, v)
        emit("+", p, v)

    def skeleton_ancestors(v: int) -> list[int]:
        out_anc = []
        p = skeleton_parent[v]
        while p != -1:
            out_anc.append(p)
            p = skeleton_parent[p]
        return out_anc

    while len(out) < events:
        roll = rng.random()
        if roll < 0.30 and n > 1:
            v = rng.choice(placed)
            anc = skeleton_ancestors(v)
            if not anc:
                continue
            u, cand = v, rng.choice(anc)
        elif roll < 0.42 and n > 1:
            u = rng.choice(placed)
            cand = rng.randrange(n)  # forward-or-cross flavored
        elif roll < 0.52:
            u = cand = rng.randrange(n)
        elif roll < 0.80 and g.m > 0:
            instances = g.edge_instances()
            u, cand = instances[rng.randrange(len(instances))]
            g.delete_edge_raw(u, cand)
            emit("-", u, cand)
            continue
        elif n > 1:
            u, cand = rng.randrange(n), rng.randrange(n)
        else:
            u = cand = 0
        g.insert_edge_raw(u, cand)
        if reducibility_test(g):
            emit("+", u, cand)
        elif rng.random() < irreducible_share:
            emit("+", u, cand)
            g.delete_edge_raw(u, cand)  # rejected at run time
        else:
            g.delete_edge_raw(u, cand)
    return UpdateStream(n, 0, tuple(out))


def check_stream(stream: UpdateStream, policy: str = REJECT,
                 thorough_every: int = 8) -> tuple[int, str]:
    """Replay a stream with the full per-event check battery.

    Returns (-1, "") on success, else (failing event index, message).
    Checks after every event: oracle forest equality, irreducibility
    exactness, census consistency, canonical-tree equality, locality
    containment. Every thorough_every-th event additionally re-verifies
    per-edge classification, interval nesting, and scan-order independence
    of the oracle forest.
    """
    g = Cfg(stream.n, stream.root)
    maint = LoopForestMaintainer(g, policy)
    forest = maint.forest
    for idx, ev in enumerate(stream.events):
        types0, headers0 = forest.snapshot()
        counts0 = (forest.counts[0], forest.counts[1])
        rejected = False
        if ev.kind == "+":
            try:
                maint.insert_edge(ev.src, ev.dst)
            except IrreducibleError:
                rejected = True
                if policy == LATCH:
                    return (-1, "")  # latched: state frozen, nothing further to check
            # irreducibility exactness, both directions
            if rejected:
                g.insert_edge_raw(ev.src, ev.dst)
                oracle_ok = reducibility_test(g)
                g.delete_edge_raw(ev.src, ev.dst)
                if oracle_ok:
                    return (idx, "rejected an insert the reducibility oracle accepts")
            else:
                if not reducibility_test(g):
                    return (idx, "accepted an insert the reducibility oracle rejects")
        else:
            maint.delete_edge(ev.src, ev.dst)
            if not reducibility_test(g):
                return (idx, "deletion produced an irreducible graph")

        tree = maint.tree
        # canonical-tree equality: classification source of truth
        fresh = DepthFirstTree.build(g)
        if (tree.parent != fresh.parent or tree.pre != fresh.pre
                or tree.post != fresh.post or tree.attached != fresh.attached):
            return (idx, "maintained tree differs from a fresh search")

        try:
            static = build_loop_forest(g, tree)
        except IrreducibleError as exc:
            return (idx, f"oracle found the maintained graph irreducible: {exc}")
        if not forest.verify_against(static):
            return (idx, "forest state differs from the static oracle")

        if tuple(forest.counts) != forest.census():
            return (idx, "maintained loop census differs from a full scan")

        if rejected:
            if (types0, headers0) != forest.snapshot() or counts0 != tuple(forest.counts):
                return (idx, "rejected insert left residue in the forest state")
        else:
            changed = {v for v in range(stream.n)
                       if forest.types[v] is not types0[v]
                       or forest.headers[v] != headers0[v]}
            allowed = maint.last_counters.touched | set(maint.last_repair.changed)
            if not changed <= allowed:
                return (idx, f"locality violated: {sorted(changed - allowed)} "
                             "changed outside the touched and repaired sets")

        if idx % thorough_every == 0 or idx == len(stream.events) - 1:
            tree.check_intervals()
            for u, v in g.edge_pairs():
                if tree.attached[u] and tree.attached[v]:
                    if tree.classify_edge(u, v) is not fresh.classify_edge(u, v):
                        return (idx, f"classification of ({u}, {v}) diverges")
            alt_tree = DepthFirstTree.build(g, reverse_scan=True)
            try:
                alt = build_loop_forest(g, alt_tree)
            except IrreducibleError as exc:
                return (idx, f"oracle irreducible under reversed scan order: {exc}")
            if alt.header != static.header or alt.kind != static.kind:
                return (idx, "oracle forest depends on the search scan order")
    return (-1, "")


def fuzz_case(seed: int, n: int, events: int, policy: str = REJECT,
              shrink: bool = True) -> CaseResult:
    stream = generate_stream(seed, n, events)
    idx, message = check_stream(stream, policy)
    if idx < 0:
        return CaseResult(seed, True, len(stream.events))
    minimized = shrink_stream(stream, policy) if shrink else None
    return CaseResult(seed, False, len(stream.events), message, idx, stream, minimized)


def shrink_stream(stream: UpdateStream, policy: str = REJECT) -> UpdateStream:
    """Greedy event removal: drop any event whose removal keeps the failure."""
    current = list(stream.events)

    def still_fails(events: list[UpdateEvent]) -> bool:
        if not validate_events(stream.n, events):
            return False
        reseq = tuple(UpdateEvent(e.kind, e.src, e.dst, i)
                      for i, e in enumerate(events))
        idx, _ = check_stream(UpdateStream(stream.n, stream.root, reseq), policy)
        return idx >= 0

    progress = True
    while progress:
        progress = False
        i = len(current) - 1
        while i >= 0:
            candidate = current[:i] + current[i + 1:]
            if still_fails(candidate):
                current = candidate
                progress = True
            i -= 1
    reseq = tuple(UpdateEvent(e.kind, e.src, e.dst, i) for i, e in enumerate(current))
    return UpdateStream(stream.n, stream.root, reseq)


def fuzz_report(results: list[CaseResult]) -> str:
    lines = []
    failures = [r for r in results if not r.ok]
    lines.append(f"cases={len(results)}")
    lines.append(f"events={sum(r.events_run for r in results)}")
    lines.append(f"failures={len(failures)}")
    for r in failures:
        lines.append(f"failure seed={r.seed} event={r.failing_index}: {r.message}")
        if r.minimized is not None:
            lines.append("minimized reproducer:")
            lines.append(format_stream(r.minimized).rstrip("\n"))
    lines.append(f"status={'ok' if not failures else 'check-failure'}")
    return "\n".join(lines) + "\n"
