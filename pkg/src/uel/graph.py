"""Behavior graphs: precedence structure of an uncertain trace.

Event a strictly precedes event b when every possible timestamp of a falls
strictly before every possible timestamp of b, i.e. the effective support of
a ends before the support of b begins. Overlapping supports mean the two
events may have happened in either order, so no edge connects them. The
behavior graph is the transitive reduction of this strict-precedence partial
order.

Two constructions are provided: an O(n^2) all-pairs baseline and a sorted
sweep that exploits the interval structure of the order. They produce
structurally identical graphs on every input; the property tests and the
acceptance suite hold them to that.

All functions here are pure over immutable inputs; graphs for distinct traces
may be built concurrently.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .errors import CycleError
from .model import (
    DEFAULT_SUPPORT_MASS,
    ActivityPmf,
    ActivitySet,
    CertainActivity,
    UncertainEvent,
    UncertainTrace,
    support,
)


@dataclass(frozen=True)
class BehaviorGraph:
    """Transitive reduction of the strict-precedence order over a trace.

    Nodes are the trace's events (in storage order); indeterminate events are
    kept, never removed. Edges are pairs of event ids.
    """

    case_id: str
    events: tuple[UncertainEvent, ...]
    edges: frozenset[tuple[str, str]]

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(ev.event_id for ev in self.events)

    def event(self, event_id: str) -> UncertainEvent:
        for ev in self.events:
            if ev.event_id == event_id:
                return ev
        raise KeyError(event_id)


def strictly_precedes(a: UncertainEvent, b: UncertainEvent, mass: float = DEFAULT_SUPPORT_MASS) -> bool:
    """True iff a certainly happened before b.

    Comparison is strict: a shared boundary (or any overlap) leaves the pair
    unordered, and two identical certain timestamps are parallel.
    """
    _, a_hi = support(a.timestamp, mass)
    b_lo, _ = support(b.timestamp, mass)
    return a_hi < b_lo


def transitive_reduction(
    edges: Iterable[tuple[Hashable, Hashable]],
    nodes: Iterable[Hashable] = (),
) -> set[tuple[Hashable, Hashable]]:
    """Unique minimal edge set with the same reachability as the input DAG.

    ``nodes`` may add isolated nodes not mentioned by any edge. Raises
    :class:`CycleError` (with a witness cycle) if the input is not acyclic.
    """
    succ: dict[Hashable, list[Hashable]] = {}
    all_nodes: list[Hashable] = []
    seen: set[Hashable] = set()

    def add_node(n):
        if n not in seen:
            seen.add(n)
            all_nodes.append(n)
            succ[n] = []

    for n in nodes:
        add_node(n)
    edge_list = list(edges)
    for u, v in edge_list:
        add_node(u)
        add_node(v)
        succ[u].append(v)

    order = _topological_order(all_nodes, succ)

    index = {n: i for i, n in enumerate(all_nodes)}
    # Strict-descendant bitmask per node, filled in reverse topological order.
    reach = [0] * len(all_nodes)
    for n in reversed(order):
        mask = 0
        for m in succ[n]:
            mask |= reach[index[m]] | (1 << index[m])
        reach[index[n]] = mask

    kept: set[tuple[Hashable, Hashable]] = set()
    for u, vs in succ.items():
        for v in set(vs):
            vbit = 1 << index[v]
            redundant = any(w != v and reach[index[w]] & vbit for w in vs)
            if not redundant:
                kept.add((u, v))
    return kept


def _topological_order(nodes: Sequence[Hashable], succ: dict[Hashable, list[Hashable]]) -> list[Hashable]:
    indeg = {n: 0 for n in nodes}
    for u in nodes:
        for v in succ[u]:
            indeg[v] += 1
    queue = [n for n in nodes if indeg[n] == 0]
    order = []
    while queue:
        n = queue.pop()
        order.append(n)
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    if len(order) != len(nodes):
        remaining = {n for n in nodes if indeg[n] > 0}
        raise CycleError("input graph contains a cycle", _find_cycle(remaining, succ))
    return order


def _find_cycle(remaining: set, succ: dict) -> list:
    start = next(iter(remaining))
    path, at = [], start
    pos: dict = {}
    while at not in pos:
        pos[at] = len(path)
        path.append(at)
        at = next(v for v in succ[at] if v in remaining)
    return path[pos[at]:] + [at]


def build_baseline(trace: UncertainTrace, mass: float = DEFAULT_SUPPORT_MASS) -> BehaviorGraph:
    """All-pairs construction: compare every event pair, then reduce."""
    events = trace.events
    sup = [support(ev.timestamp, mass) for ev in events]
    full = set()
    for i, a in enumerate(events):
        for j, b in enumerate(events):
            if i != j and sup[i][1] < sup[j][0]:
                full.add((a.event_id, b.event_id))
    reduced = transitive_reduction(full, nodes=[ev.event_id for ev in events])
    return BehaviorGraph(trace.case_id, events, frozenset(reduced))


def build_optimized(trace: UncertainTrace, mass: float = DEFAULT_SUPPORT_MASS) -> BehaviorGraph:
    """Sorted-sweep construction, equivalent to :func:`build_baseline`.

    The precedence order induced by support intervals is transitive, so the
    reduction keeps an edge (a, b) exactly when hi(a) < lo(b) and no third
    event fits entirely between them. After sorting, the predecessors of each
    event form a contiguous run in the hi-sorted array, found by binary
    search; overall O(n log n) plus output size.
    """
    events = trace.events
    n = len(events)
    if n == 0:
        return BehaviorGraph(trace.case_id, events, frozenset())

    sup = [support(ev.timestamp, mass) for ev in events]
    by_lo = sorted(range(n), key=lambda i: sup[i][0])
    lo_sorted: list[Fraction] = [sup[i][0] for i in by_lo]
    # suffix_min_hi[k] = min hi over events with the k-th smallest lo onwards;
    # non-decreasing in k, which makes it binary-searchable.
    suffix_min_hi: list[Fraction] = [Fraction(0)] * n
    running = sup[by_lo[-1]][1]
    for k in range(n - 1, -1, -1):
        running = min(running, sup[by_lo[k]][1])
        suffix_min_hi[k] = running

    by_hi = sorted(range(n), key=lambda i: sup[i][1])
    hi_sorted: list[Fraction] = [sup[i][1] for i in by_hi]

    edges: set[tuple[str, str]] = set()
    for j in range(n):
        lo_b = sup[j][0]
        # Smallest k whose suffix fits entirely before b; predecessors are the
        # events ending in [lo_sorted[k-1], lo_b), none of which can be
        # shortcut by an intermediate event.
        k = bisect_left(suffix_min_hi, lo_b)
        left = 0 if k == 0 else bisect_left(hi_sorted, lo_sorted[k - 1])
        right = bisect_left(hi_sorted, lo_b)
        for idx in by_hi[left:right]:
            edges.add((events[idx].event_id, events[j].event_id))
    return BehaviorGraph(trace.case_id, events, frozenset(edges))


def predecessor_relation(trace: UncertainTrace, mass: float = DEFAULT_SUPPORT_MASS) -> dict[str, frozenset[str]]:
    """Full strict-precedence relation: event id -> ids that must come before it."""
    events = trace.events
    sup = [support(ev.timestamp, mass) for ev in events]
    out: dict[str, frozenset[str]] = {}
    for j, b in enumerate(events):
        out[b.event_id] = frozenset(
            a.event_id for i, a in enumerate(events) if i != j and sup[i][1] < sup[j][0]
        )
    return out


# --- export -----------------------------------------------------------------


def _activity_text(ev: UncertainEvent) -> str:
    act = ev.activity
    if isinstance(act, CertainActivity):
        return act.label
    if isinstance(act, ActivitySet):
        return "{" + "|".join(sorted(act.labels)) + "}"
    if isinstance(act, ActivityPmf):
        parts = [f"{label}:{p:g}" for label, p in sorted(act.entries.items())]
        return "{" + "|".join(parts) + "}"
    raise TypeError(f"not an activity: {act!r}")


def _dot_quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + escaped + '"'


def to_dot(bg: BehaviorGraph) -> str:
    """Render the behavior graph in DOT; indeterminate nodes get dashed borders."""
    lines = [f"digraph {_dot_quote('bg_' + bg.case_id)} {{"]
    for ev in bg.events:
        label = f"{ev.event_id}\n{_activity_text(ev)}"
        if ev.indeterminate:
            label += " ?"
        style = ', style="dashed"' if ev.indeterminate else ""
        lines.append(f"  {_dot_quote(ev.event_id)} [label={_dot_quote(label)}{style}];")
    for u, v in sorted(bg.edges):
        lines.append(f"  {_dot_quote(u)} -> {_dot_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
