"""Temporal constraints: satisfaction, cue resolution, boundary behavior."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from servicenav.hours import (
    ALL_DAYS,
    AnyTime,
    ClockContext,
    Day,
    OpenAt,
    OpenDuring,
    UnrecognizedTemporalCue,
    WEEKEND,
    resolve_now,
    satisfies,
)
from servicenav.kg import HoursWindowNode

from .gen import random_constraint, random_windows
from .oracles import brute_force_satisfies


def w(day, open_min, close_min, id=0):
    return HoursWindowNode(id, day, open_min, close_min)


class TestSatisfies:
    def test_tuesday_window_open_at_noon(self):
        assert satisfies([w(Day.Tue, 660, 1140)], OpenAt(Day.Tue, 720))

    def test_any_time_true_even_without_windows(self):
        assert satisfies([], AnyTime())
        assert satisfies([w(Day.Mon, 0, 60)], AnyTime())

    def test_saturday_day_window_misses_evening(self):
        # 8 AM - 8 PM windows do not satisfy "after 8pm on weekends".
        assert not satisfies([w(Day.Sat, 480, 1200)], OpenDuring(WEEKEND, 1200, 1440))
        assert not brute_force_satisfies([w(Day.Sat, 480, 1200)], OpenDuring(WEEKEND, 1200, 1440))

    def test_half_open_boundaries(self):
        window = [w(Day.Tue, 660, 1140)]
        assert satisfies(window, OpenAt(Day.Tue, 660))       # opening minute counts
        assert not satisfies(window, OpenAt(Day.Tue, 1140))  # closing minute does not
        assert not satisfies(window, OpenDuring(frozenset({Day.Tue}), 1140, 1200))
        assert satisfies(window, OpenDuring(frozenset({Day.Tue}), 1139, 1200))

    def test_oracle_equivalence_seeded(self):
        rng = random.Random(2024)
        for _ in range(300):
            windows = random_windows(rng)
            constraint = random_constraint(rng)
            assert satisfies(windows, constraint) == brute_force_satisfies(windows, constraint)

    def test_monotonicity_wider_window_keeps_truth(self):
        rng = random.Random(31)
        for _ in range(200):
            windows = random_windows(rng)
            days = frozenset(rng.sample(sorted(ALL_DAYS, key=lambda d: d.value), rng.randint(1, 7)))
            s = rng.randrange(0, 1438)
            e = rng.randrange(s + 2, 1441)
            inner = OpenDuring(days, s + 1, e - 1) if e - s > 2 else OpenDuring(days, s, e)
            outer = OpenDuring(days, s, e)
            if satisfies(windows, inner):
                assert satisfies(windows, outer)


@st.composite
def windows_strategy(draw):
    n = draw(st.integers(0, 4))
    windows = []
    used: dict[int, list[tuple[int, int]]] = {}
    for i in range(n):
        day = draw(st.integers(0, 6))
        o = draw(st.integers(0, 1438))
        c = draw(st.integers(o + 1, 1440))
        if any(max(o, a) < min(c, b) for a, b in used.get(day, [])):
            continue
        used.setdefault(day, []).append((o, c))
        windows.append(w(Day(day), o, c, id=i))
    return windows


@st.composite
def constraint_strategy(draw):
    kind = draw(st.integers(0, 2))
    if kind == 0:
        return AnyTime()
    if kind == 1:
        return OpenAt(Day(draw(st.integers(0, 6))), draw(st.integers(0, 1439)))
    days = frozenset(Day(i) for i in draw(st.sets(st.integers(0, 6), min_size=1)))
    s = draw(st.integers(0, 1439))
    e = draw(st.integers(s + 1, 1440))
    return OpenDuring(days, s, e)


class TestSatisfiesHypothesis:
    @given(windows_strategy(), constraint_strategy())
    @settings(max_examples=200, deadline=None)
    def test_matches_minute_scan(self, windows, constraint):
        assert satisfies(windows, constraint) == brute_force_satisfies(windows, constraint)


class TestResolveNow:
    def setup_method(self):
        self.clock = ClockContext(Day.Tue, 720)

    def test_open_now(self):
        assert resolve_now("open now", self.clock) == OpenAt(Day.Tue, 720)

    def test_earlier_today(self):
        assert resolve_now("earlier today", self.clock) == OpenAt(Day.Tue, 720)

    def test_after_8pm_on_weekends(self):
        expected = OpenDuring(WEEKEND, 1200, 1440)
        assert resolve_now("after 8pm on weekends", self.clock) == expected
        assert resolve_now("after 8pm on weekends", ClockContext(Day.Fri, 0)) == expected

    def test_on_tuesdays(self):
        assert resolve_now("on Tuesdays", self.clock) == OpenDuring(frozenset({Day.Tue}), 0, 1440)

    def test_tonight(self):
        assert resolve_now("tonight", self.clock) == OpenDuring(frozenset({Day.Tue}), 1080, 1440)

    def test_today(self):
        assert resolve_now("today", self.clock) == OpenDuring(frozenset({Day.Tue}), 0, 1440)

    def test_weekends(self):
        assert resolve_now("weekends", self.clock) == OpenDuring(WEEKEND, 0, 1440)
        assert resolve_now("this weekend", self.clock) == OpenDuring(WEEKEND, 0, 1440)

    def test_bare_after_applies_to_all_days(self):
        assert resolve_now("after 6pm", self.clock) == OpenDuring(ALL_DAYS, 1080, 1440)

    def test_before_time(self):
        assert resolve_now("before 9:30am", self.clock) == OpenDuring(ALL_DAYS, 0, 570)

    def test_day_with_time_bound(self):
        got = resolve_now("tuesdays after 6pm", self.clock)
        assert got == OpenDuring(frozenset({Day.Tue}), 1080, 1440)

    @pytest.mark.parametrize("cue", ["next blue moon", "after 99pm", "on funday", ""])
    def test_unrecognized(self, cue):
        with pytest.raises(UnrecognizedTemporalCue):
            resolve_now(cue, self.clock)

    def test_pure_function_of_cue_and_clock(self):
        a = resolve_now("tonight", ClockContext(Day.Fri, 100))
        b = resolve_now("tonight", ClockContext(Day.Fri, 100))
        assert a == b


class TestClockContext:
    def test_from_datetime(self):
        from datetime import datetime

        clock = ClockContext.from_datetime(datetime(2025, 6, 10, 12, 0))
        assert clock == ClockContext(Day.Tue, 720)

    def test_rejects_bad_minute(self):
        with pytest.raises(ValueError):
            ClockContext(Day.Mon, 1440)
