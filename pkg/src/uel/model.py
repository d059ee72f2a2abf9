"""Immutable data model for uncertain events, traces and logs.

An uncertain event records what *might* have happened: its timestamp may be a
point, an interval, or a probability density; its activity may be a single
label, a set of candidate labels, or a discrete distribution; and the event
itself may be marked as possibly absent (indeterminate), with or without a
known absence probability.

Time values are exact rationals (:class:`fractions.Fraction`) so that all
ordering decisions are bit-stable; only densities and probabilities use real
arithmetic.

All types are frozen; instances can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Mapping, Union

Time = Fraction

#: Probability mass covered by the effective support of a density timestamp.
DEFAULT_SUPPORT_MASS = 0.9999

#: Tolerance for "probabilities sum to one" checks.
PMF_SUM_TOLERANCE = 1e-9


def as_time(value: int | str | Fraction) -> Fraction:
    """Coerce a number-like value to an exact rational time."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(
            f"refusing to build a time value from float {value!r}; "
            "pass an int, a Fraction, or a decimal string"
        )
    raise TypeError(f"cannot interpret {value!r} as a time value")


# --- timestamps -------------------------------------------------------------


@dataclass(frozen=True)
class CertainTime:
    value: Fraction


@dataclass(frozen=True)
class IntervalTime:
    """The timestamp lies somewhere in [lo, hi]; no distribution is known."""

    lo: Fraction
    hi: Fraction


@dataclass(frozen=True)
class NormalTime:
    """The timestamp follows a normal density with mean mu and stddev sigma."""

    mu: Fraction
    sigma: Fraction


@dataclass(frozen=True)
class UniformTime:
    """The timestamp is uniformly distributed on [lo, hi]."""

    lo: Fraction
    hi: Fraction


TimestampInfo = Union[CertainTime, IntervalTime, NormalTime, UniformTime]


# --- activities -------------------------------------------------------------


@dataclass(frozen=True)
class CertainActivity:
    label: str


@dataclass(frozen=True)
class ActivitySet:
    """One of several candidate labels, with no probabilities attached."""

    labels: frozenset[str]

    def __init__(self, labels: Iterable[str]):
        object.__setattr__(self, "labels", frozenset(labels))


@dataclass(frozen=True)
class ActivityPmf:
    """A discrete probability distribution over candidate labels."""

    entries: Mapping[str, float]

    def __init__(self, entries: Mapping[str, float]):
        object.__setattr__(self, "entries", dict(entries))


ActivityInfo = Union[CertainActivity, ActivitySet, ActivityPmf]


# --- indeterminacy ----------------------------------------------------------


@dataclass(frozen=True)
class Determinate:
    pass


@dataclass(frozen=True)
class Indeterminate:
    """Recorded but possibly absent; no absence probability is known."""


@dataclass(frozen=True)
class IndeterminateProb:
    """Recorded but absent with probability ``p_absent``."""

    p_absent: float


IndeterminacyInfo = Union[Determinate, Indeterminate, IndeterminateProb]

DETERMINATE = Determinate()
INDETERMINATE = Indeterminate()


# --- events, traces, logs ---------------------------------------------------


@dataclass(frozen=True)
class UncertainEvent:
    event_id: str
    timestamp: TimestampInfo
    activity: ActivityInfo
    indeterminacy: IndeterminacyInfo = DETERMINATE

    def possible_labels(self) -> tuple[str, ...]:
        """All labels this event may carry, in sorted order."""
        act = self.activity
        if isinstance(act, CertainActivity):
            return (act.label,)
        if isinstance(act, ActivitySet):
            return tuple(sorted(act.labels))
        return tuple(sorted(act.entries))

    @property
    def indeterminate(self) -> bool:
        return not isinstance(self.indeterminacy, Determinate)


@dataclass(frozen=True)
class UncertainTrace:
    case_id: str
    events: tuple[UncertainEvent, ...]

    def __init__(self, case_id: str, events: Iterable[UncertainEvent] = ()):
        object.__setattr__(self, "case_id", case_id)
        object.__setattr__(self, "events", tuple(events))

    def event(self, event_id: str) -> UncertainEvent:
        for ev in self.events:
            if ev.event_id == event_id:
                return ev
        raise KeyError(event_id)


@dataclass(frozen=True)
class UncertainLog:
    traces: tuple[UncertainTrace, ...]
    attributes: Mapping[str, str] = field(default_factory=dict)

    def __init__(self, traces: Iterable[UncertainTrace] = (), attributes: Mapping[str, str] | None = None):
        object.__setattr__(self, "traces", tuple(traces))
        object.__setattr__(self, "attributes", dict(attributes or {}))

    def trace(self, case_id: str) -> UncertainTrace:
        for tr in self.traces:
            if tr.case_id == case_id:
                return tr
        raise KeyError(case_id)

    def alphabet(self) -> frozenset[str]:
        """All activity labels mentioned anywhere in the log."""
        labels: set[str] = set()
        for tr in self.traces:
            for ev in tr.events:
                labels.update(ev.possible_labels())
        return frozenset(labels)


def event(
    event_id: str,
    timestamp,
    activity,
    indeterminate: bool | float = False,
) -> UncertainEvent:
    """Ergonomic event constructor used throughout tests and examples.

    ``timestamp`` accepts an int/str/Fraction (certain), a ``(lo, hi)`` tuple
    (interval) or a ready TimestampInfo. ``activity`` accepts a string
    (certain), a list/set of strings, a ``{label: prob}`` dict or a ready
    ActivityInfo. ``indeterminate`` accepts False, True or an absence
    probability in (0, 1).
    """
    if isinstance(timestamp, (CertainTime, IntervalTime, NormalTime, UniformTime)):
        ts = timestamp
    elif isinstance(timestamp, tuple):
        ts = IntervalTime(as_time(timestamp[0]), as_time(timestamp[1]))
    else:
        ts = CertainTime(as_time(timestamp))

    if isinstance(activity, (CertainActivity, ActivitySet, ActivityPmf)):
        act = activity
    elif isinstance(activity, str):
        act = CertainActivity(activity)
    elif isinstance(activity, dict):
        act = ActivityPmf(activity)
    else:
        act = ActivitySet(activity)

    if indeterminate is False:
        ind: IndeterminacyInfo = DETERMINATE
    elif indeterminate is True:
        ind = INDETERMINATE
    else:
        ind = IndeterminateProb(float(indeterminate))

    return UncertainEvent(event_id, ts, act, ind)


# --- operations -------------------------------------------------------------


def support(ts: TimestampInfo, mass: float = DEFAULT_SUPPORT_MASS) -> tuple[Fraction, Fraction]:
    """Effective time interval covering at least ``mass`` of the timestamp.

    Point and interval timestamps return their exact bounds regardless of
    ``mass``. A normal density returns the central interval mu +/- z*sigma
    with z the (1+mass)/2 quantile; a uniform density returns its full range.
    The returned bounds are exact rationals (the float quantile is converted
    exactly), so downstream ordering comparisons stay bit-stable.
    """
    if isinstance(ts, CertainTime):
        return ts.value, ts.value
    if isinstance(ts, IntervalTime):
        return ts.lo, ts.hi
    if isinstance(ts, UniformTime):
        return ts.lo, ts.hi
    if isinstance(ts, NormalTime):
        if not 0.0 < mass < 1.0:
            raise ValueError(f"support mass must be in (0, 1), got {mass}")
        z = Fraction(NormalDist().inv_cdf((1.0 + mass) / 2.0))
        spread = z * ts.sigma
        return ts.mu - spread, ts.mu + spread
    raise TypeError(f"not a timestamp: {ts!r}")


def classify(ev: UncertainEvent) -> dict[str, str]:
    """Which kind of uncertainty each attribute of the event carries.

    Returns a mapping from attribute name to a descriptor combining strength
    (strong = no probabilities, weak = stochastic) and domain (continuous for
    timestamps, discrete for activities). Certain attributes are omitted;
    a fully certain event yields an empty mapping.
    """
    out: dict[str, str] = {}
    ts = ev.timestamp
    if isinstance(ts, IntervalTime):
        out["timestamp"] = "strong-continuous"
    elif isinstance(ts, (NormalTime, UniformTime)):
        out["timestamp"] = "weak-continuous"
    act = ev.activity
    if isinstance(act, ActivitySet):
        out["activity"] = "strong-discrete"
    elif isinstance(act, ActivityPmf):
        out["activity"] = "weak-discrete"
    ind = ev.indeterminacy
    if isinstance(ind, Indeterminate):
        out["indeterminacy"] = "strong"
    elif isinstance(ind, IndeterminateProb):
        out["indeterminacy"] = "weak"
    return out


# --- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One invariant violation found in a log. Violations are data, not errors."""

    case_id: str | None
    event_id: str | None
    field: str
    rule: str
    message: str


def _check_timestamp(ts: TimestampInfo, case_id, event_id) -> list[Violation]:
    out = []
    if isinstance(ts, IntervalTime):
        if ts.lo > ts.hi:
            out.append(Violation(case_id, event_id, "timestamp", "interval-order",
                                 f"interval lo {ts.lo} > hi {ts.hi}"))
    elif isinstance(ts, NormalTime):
        if ts.sigma <= 0:
            out.append(Violation(case_id, event_id, "timestamp", "sigma-positive",
                                 f"normal sigma must be > 0, got {ts.sigma}"))
    elif isinstance(ts, UniformTime):
        if ts.lo >= ts.hi:
            out.append(Violation(case_id, event_id, "timestamp", "uniform-order",
                                 f"uniform density needs lo < hi, got [{ts.lo}, {ts.hi}]"))
    return out


def _check_activity(act: ActivityInfo, case_id, event_id) -> list[Violation]:
    out = []
    if isinstance(act, ActivitySet):
        if len(act.labels) == 0:
            out.append(Violation(case_id, event_id, "activity", "set-empty",
                                 "activity set is empty"))
        elif len(act.labels) == 1:
            out.append(Violation(case_id, event_id, "activity", "set-singleton",
                                 "singleton activity set should be a certain label"))
    elif isinstance(act, ActivityPmf):
        if len(act.entries) < 2:
            out.append(Violation(case_id, event_id, "activity", "pmf-size",
                                 "activity pmf needs at least 2 entries"))
        for label, p in act.entries.items():
            if not 0.0 < p <= 1.0:
                out.append(Violation(case_id, event_id, "activity", "pmf-range",
                                     f"probability of {label!r} must be in (0, 1], got {p}"))
        total = math.fsum(act.entries.values())
        if abs(total - 1.0) > PMF_SUM_TOLERANCE:
            out.append(Violation(case_id, event_id, "activity", "pmf-sum",
                                 f"pmf sum {total} != 1"))
    return out


def _check_indeterminacy(ind: IndeterminacyInfo, case_id, event_id) -> list[Violation]:
    if isinstance(ind, IndeterminateProb) and not 0.0 < ind.p_absent < 1.0:
        return [Violation(case_id, event_id, "indeterminacy", "indeterminate-range",
                          f"absence probability must be strictly between 0 and 1, got {ind.p_absent}")]
    return []


def validate_event(ev: UncertainEvent, case_id: str | None = None) -> list[Violation]:
    out = _check_timestamp(ev.timestamp, case_id, ev.event_id)
    out += _check_activity(ev.activity, case_id, ev.event_id)
    out += _check_indeterminacy(ev.indeterminacy, case_id, ev.event_id)
    return out


def validate_trace(trace: UncertainTrace) -> list[Violation]:
    out: list[Violation] = []
    seen: set[str] = set()
    for ev in trace.events:
        if ev.event_id in seen:
            out.append(Violation(trace.case_id, ev.event_id, "event_id", "duplicate-event-id",
                                 f"event id {ev.event_id!r} occurs more than once"))
        seen.add(ev.event_id)
        out += validate_event(ev, trace.case_id)
    return out


def validate_log(log: UncertainLog) -> list[Violation]:
    """All invariant violations in the log; empty iff the log is well-formed."""
    out: list[Violation] = []
    seen: set[str] = set()
    for tr in log.traces:
        if tr.case_id in seen:
            out.append(Violation(tr.case_id, None, "case_id", "duplicate-case-id",
                                 f"case id {tr.case_id!r} occurs more than once"))
        seen.add(tr.case_id)
        out += validate_trace(tr)
    return out
