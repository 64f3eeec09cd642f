"""Operating-hours constraints and relative time-cue resolution.

Windows are half-open minute intervals [open, close) on a single weekday:
a place closing at 7:00 PM is not open at 7:00 PM. Relative cues ("open
now", "tonight") resolve against an injected clock, never ambient time, so
everything here is a pure function.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Sequence, Union

if TYPE_CHECKING:
    from servicenav.kg import HoursWindowNode

MINUTES_PER_DAY = 1440
TIMEZONE = "America/New_York"

# "tonight" spans 18:00-24:00; adjust here if a deployment disagrees.
TONIGHT_START_MIN = 1080


class Day(Enum):
    Mon = 0
    Tue = 1
    Wed = 2
    Thu = 3
    Fri = 4
    Sat = 5
    Sun = 6

    @property
    def full_name(self) -> str:
        return _FULL_NAMES[self.value]

    def next(self) -> "Day":
        return Day((self.value + 1) % 7)


_FULL_NAMES = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]
_NAME_TO_DAY = {d.name.lower(): d for d in Day}
_NAME_TO_DAY.update({d.full_name.lower(): d for d in Day})

WEEKEND = frozenset({Day.Sat, Day.Sun})
ALL_DAYS = frozenset(Day)


class UnrecognizedTemporalCue(ValueError):
    """The cue text does not match any recognized relative time form."""


@dataclass(frozen=True)
class AnyTime:
    pass


@dataclass(frozen=True)
class OpenAt:
    day: Day
    minute: int

    def __post_init__(self):
        if not (0 <= self.minute < MINUTES_PER_DAY):
            raise ValueError(f"minute out of range: {self.minute}")


@dataclass(frozen=True)
class OpenDuring:
    days: frozenset[Day]
    start_min: int
    end_min: int

    def __post_init__(self):
        if not self.days:
            raise ValueError("day set must be nonempty")
        if not (0 <= self.start_min < self.end_min <= MINUTES_PER_DAY):
            raise ValueError(f"bad window [{self.start_min}, {self.end_min})")


TemporalConstraint = Union[AnyTime, OpenAt, OpenDuring]


@dataclass(frozen=True)
class ClockContext:
    """The injected 'now' every relative cue resolves against."""

    now_day: Day
    now_min: int
    timezone: str = TIMEZONE

    def __post_init__(self):
        if not (0 <= self.now_min < MINUTES_PER_DAY):
            raise ValueError(f"now_min out of range: {self.now_min}")

    @classmethod
    def from_datetime(cls, dt: datetime) -> "ClockContext":
        return cls(Day(dt.weekday()), dt.hour * 60 + dt.minute)


def satisfies(windows: Sequence["HoursWindowNode"], c: TemporalConstraint) -> bool:
    """Does any window satisfy the constraint?

    AnyTime is vacuously true. OpenAt needs a window containing the minute;
    OpenDuring needs a nonempty overlap with the [start, end) range on one
    of its days.
    """
    if isinstance(c, AnyTime):
        return True
    if isinstance(c, OpenAt):
        return any(
            w.day == c.day and w.open_min <= c.minute < w.close_min for w in windows
        )
    return any(
        w.day in c.days and max(w.open_min, c.start_min) < min(w.close_min, c.end_min)
        for w in windows
    )


def matching_windows(
    windows: Iterable["HoursWindowNode"], c: TemporalConstraint
) -> list["HoursWindowNode"]:
    """The windows that satisfy the constraint, week order."""
    if isinstance(c, AnyTime):
        matched = list(windows)
    elif isinstance(c, OpenAt):
        matched = [w for w in windows if w.day == c.day and w.open_min <= c.minute < w.close_min]
    else:
        matched = [
            w
            for w in windows
            if w.day in c.days and max(w.open_min, c.start_min) < min(w.close_min, c.end_min)
        ]
    matched.sort(key=lambda w: (w.day.value, w.open_min))
    return matched


_TIME_RE = re.compile(r"^(\d{1,2})(?::(\d{2}))?\s*(am|pm)$")


def _parse_clock(text: str) -> int:
    m = _TIME_RE.match(text.strip().lower())
    if not m:
        raise UnrecognizedTemporalCue(f"bad clock time: {text!r}")
    hour = int(m.group(1))
    minute = int(m.group(2) or 0)
    if not (1 <= hour <= 12) or minute > 59:
        raise UnrecognizedTemporalCue(f"bad clock time: {text!r}")
    hour = hour % 12
    if m.group(3) == "pm":
        hour += 12
    return hour * 60 + minute


_CUE_RE = re.compile(
    r"""^\s*(?:open\s+)?
    (?:
      (?P<now>now|right\s+now|earlier\s+today)
      |(?P<tonight>tonight)
      |(?P<today>today)
      |(?P<bound>after|before)\s+(?P<time>\d{1,2}(?::\d{2})?\s*(?:am|pm))
        (?:\s+on\s+(?P<bounddays>the\s+weekend|weekends?|[a-z]+?s?))?
      |(?:on\s+|this\s+)?(?P<days>the\s+weekend|weekends?|[a-z]+?s?)
        (?:\s+(?P<daybound>after|before)\s+(?P<daytime>\d{1,2}(?::\d{2})?\s*(?:am|pm)))?
    )\s*$""",
    re.IGNORECASE | re.VERBOSE,
)


def _parse_dayset(text: str) -> frozenset[Day]:
    t = text.strip().lower()
    if t in ("weekend", "weekends", "the weekend"):
        return WEEKEND
    day = _NAME_TO_DAY.get(t.rstrip("s")) or _NAME_TO_DAY.get(t)
    if day is None:
        raise UnrecognizedTemporalCue(f"unknown day: {text!r}")
    return frozenset({day})


def resolve_now(cue: str, clock: ClockContext) -> TemporalConstraint:
    """Map a relative temporal cue to a concrete constraint.

    Recognized forms: now / right now / earlier today, today, tonight,
    weekend(s), a named day (optionally plural, optionally "on ..."), and
    after/before HH[:MM] am|pm with an optional day qualifier. A bare
    after/before bound applies to every day of the week.
    """
    m = _CUE_RE.match(cue.strip().lower())
    if not m:
        raise UnrecognizedTemporalCue(cue)
    if m.group("now"):
        return OpenAt(clock.now_day, clock.now_min)
    if m.group("tonight"):
        return OpenDuring(frozenset({clock.now_day}), TONIGHT_START_MIN, MINUTES_PER_DAY)
    if m.group("today"):
        return OpenDuring(frozenset({clock.now_day}), 0, MINUTES_PER_DAY)
    if m.group("bound"):
        t = _parse_clock(m.group("time"))
        days = _parse_dayset(m.group("bounddays")) if m.group("bounddays") else ALL_DAYS
        if m.group("bound").lower() == "after":
            if t >= MINUTES_PER_DAY - 1:
                raise UnrecognizedTemporalCue(cue)
            return OpenDuring(days, t, MINUTES_PER_DAY)
        if t <= 0:
            raise UnrecognizedTemporalCue(cue)
        return OpenDuring(days, 0, t)
    days = _parse_dayset(m.group("days"))
    if m.group("daybound"):
        t = _parse_clock(m.group("daytime"))
        if m.group("daybound").lower() == "after":
            if t >= MINUTES_PER_DAY - 1:
                raise UnrecognizedTemporalCue(cue)
            return OpenDuring(days, t, MINUTES_PER_DAY)
        if t <= 0:
            raise UnrecognizedTemporalCue(cue)
        return OpenDuring(days, 0, t)
    return OpenDuring(days, 0, MINUTES_PER_DAY)
