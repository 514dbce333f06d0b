"""Streaming gaze-to-event processor.

The engine consumes calibrated, timestamped gaze samples and emits
interaction events.  A grid layout selects the dwell machine (hold a cell
for dwell_ms), a circular layout selects the crossing machine (exit the
inner disk outward through a slice).  In both modes the gaze may roam the
menu interior freely without triggering anything: dwell needs sustained
stillness, crossing needs an outward boundary exit.

Blink handling is a retrospective filter: a blink shows up in tracker
output either as a short run of invalid samples or as a V-shaped downward
excursion (gaze dives, then snaps back near the pre-dip position).  The
filter holds samples in a delay buffer one blink-duration long, marks the
artifact windows, and the state machines freeze across marked samples
instead of reacting to them.  The filter is off by default: it adds its
buffer length of latency, which live use may not want, and unfiltered
behavior is the baseline the filter is measured against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from gazecross.layout import (
    CircularMenuLayout,
    GridMenuLayout,
    Region,
    hit_test,
    segment_crossing,
)

DWELL = "dwell"
CROSSING = "crossing"

# event kinds
ENTER = "enter"
EXIT = "exit"
DWELL_PROGRESS = "dwell_progress"
ACTIVATION = "activation"
BLINK_START = "blink_start"
BLINK_END = "blink_end"
CENTER_REACHED = "center_reached"

# dwell threshold comparison slack; sums of sample periods may land a hair
# under the exact threshold
_ACC_EPS = 1e-9


class StreamError(RuntimeError):
    """A sample violated the stream contract (non-increasing timestamp)."""


@dataclass(frozen=True)
class GazeSample:
    t_ms: float
    x_cm: float
    y_cm: float
    valid: bool = True

    @property
    def point(self) -> tuple[float, float]:
        return (self.x_cm, self.y_cm)


@dataclass(frozen=True)
class CalibrationModel:
    """Global mean-offset correction from a five-point calibration."""

    offsets: tuple[tuple[tuple[float, float], tuple[float, float]], ...]
    correction: tuple[float, float]


@dataclass(frozen=True)
class EngineConfig:
    dwell_ms: float = 500.0
    blink_filter_enabled: bool = False
    blink_max_duration_ms: float = 400.0
    blink_dip_min_cm: float = 4.0
    blink_return_tolerance_cm: float = 1.0
    sample_gap_timeout_ms: float = 100.0

    def __post_init__(self) -> None:
        if self.dwell_ms <= 0:
            raise ValueError("dwell_ms must be > 0")
        for name in ("blink_max_duration_ms", "blink_dip_min_cm",
                     "blink_return_tolerance_cm", "sample_gap_timeout_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class GazeEvent:
    t_ms: float
    kind: str
    label: str | None = None
    region: Region | None = None
    fraction: float | None = None
    technique: str | None = None


def fit_calibration(measurements) -> CalibrationModel:
    """Mean offset over exactly five (target, gaze) point pairs."""
    pairs = tuple((tuple(target), tuple(gaze)) for target, gaze in measurements)
    if len(pairs) != 5:
        raise ValueError(f"calibration needs exactly 5 point pairs, got {len(pairs)}")
    dx = sum(t[0] - g[0] for t, g in pairs) / 5.0
    dy = sum(t[1] - g[1] for t, g in pairs) / 5.0
    return CalibrationModel(offsets=pairs, correction=(dx, dy))


def apply_calibration(model: CalibrationModel, sample: GazeSample) -> GazeSample:
    return replace(sample,
                   x_cm=sample.x_cm + model.correction[0],
                   y_cm=sample.y_cm + model.correction[1])


class _BlinkFilter:
    """Delay buffer that marks blink artifacts before samples are released.

    A sample leaves the buffer once it is older than blink_max_duration_ms,
    at which point no future evidence can change its marking: a V-dip
    return must land within that window of its anchor, and an invalid run
    older than the window is already known to be too long to be a blink.
    """

    def __init__(self, config: EngineConfig):
        self._cfg = config
        self._buf: list[list] = []  # [sample, marked] pairs, oldest first
        self._run_start: float | None = None
        self._run_last: float = 0.0
        self._run_too_long = False

    def push(self, s: GazeSample) -> list[tuple[GazeSample, bool]]:
        self._buf.append([s, False])
        if s.valid:
            self._end_invalid_run()
            self._scan_dip()
        else:
            if self._run_start is None:
                self._run_start = s.t_ms
                self._run_too_long = False
            self._run_last = s.t_ms
            if s.t_ms - self._run_start >= self._cfg.blink_max_duration_ms:
                self._run_too_long = True
        return self._release(s.t_ms)

    def flush(self) -> list[tuple[GazeSample, bool]]:
        self._end_invalid_run()
        out = [(s, m) for s, m in self._buf]
        self._buf.clear()
        return out

    def _end_invalid_run(self) -> None:
        if self._run_start is None:
            return
        short = (not self._run_too_long
                 and self._run_last - self._run_start < self._cfg.blink_max_duration_ms)
        if short:
            for entry in self._buf:
                if not entry[0].valid and entry[0].t_ms >= self._run_start:
                    entry[1] = True
        self._run_start = None
        self._run_too_long = False

    def _scan_dip(self) -> None:
        """Mark a V-shaped downward excursion ending at the newest sample.

        Scanning backward from the return sample, the latest valid anchor
        wins: the gaze must have dived at least dip_min below the anchor in
        between and come back within the return tolerance, all inside one
        blink window.
        """
        i = len(self._buf) - 1
        ret = self._buf[i][0]
        max_y_between = -math.inf
        j = i - 1
        while j >= 0:
            cand, marked = self._buf[j]
            if ret.t_ms - cand.t_ms > self._cfg.blink_max_duration_ms:
                return
            if (cand.valid and not marked and j < i - 1
                    and math.dist(cand.point, ret.point)
                    <= self._cfg.blink_return_tolerance_cm
                    and max_y_between >= cand.y_cm + self._cfg.blink_dip_min_cm):
                for k in range(j + 1, i + 1):
                    self._buf[k][1] = True
                return
            max_y_between = max(max_y_between, cand.y_cm)
            j -= 1

    def _release(self, now_ms: float) -> list[tuple[GazeSample, bool]]:
        out = []
        while self._buf and now_ms - self._buf[0][0].t_ms > self._cfg.blink_max_duration_ms:
            s, m = self._buf.pop(0)
            out.append((s, m))
        return out


def filter_blinks(samples, config: EngineConfig | None = None):
    """Offline form of the blink filter: [(sample, in_blink), ...]."""
    f = _BlinkFilter(config or EngineConfig())
    out = []
    for s in samples:
        out.extend(f.push(s))
    out.extend(f.flush())
    return out


class GazeEngine:
    """Single-session state machine: feed samples in, collect events out.

    One instance owns one stream; drive it from one thread.  With the
    blink filter enabled, events for a sample may surface up to
    blink_max_duration_ms after it was fed; call flush() at stream end to
    drain the tail.
    """

    def __init__(self, layout: CircularMenuLayout | GridMenuLayout,
                 config: EngineConfig | None = None,
                 calibration: CalibrationModel | None = None):
        self.layout = layout
        self.config = config or EngineConfig()
        self.calibration = calibration
        self.technique = CROSSING if isinstance(layout, CircularMenuLayout) else DWELL
        self._filter = (_BlinkFilter(self.config)
                        if self.config.blink_filter_enabled else None)
        self._last_fed_t: float | None = None
        self._in_blink = False
        self._last_valid_t: float | None = None
        self._region: Region | None = None
        # dwell state
        self._dwell_label: str | None = None
        self._dwell_acc = 0.0
        self._counted_t: float | None = None
        self._dwell_done = False
        # crossing state
        self._prev_point: tuple[float, float] | None = None
        self._cross_done = False

    def feed(self, sample: GazeSample) -> list[GazeEvent]:
        if self._last_fed_t is not None and sample.t_ms <= self._last_fed_t:
            raise StreamError(
                f"timestamp {sample.t_ms} not after previous {self._last_fed_t}")
        self._last_fed_t = sample.t_ms
        if self.calibration is not None:
            sample = apply_calibration(self.calibration, sample)
        if self._filter is None:
            return self._step(sample, False)
        events = []
        for s, in_blink in self._filter.push(sample):
            events.extend(self._step(s, in_blink))
        return events

    def flush(self) -> list[GazeEvent]:
        """Drain the blink-filter delay buffer at end of stream."""
        if self._filter is None:
            return []
        events = []
        for s, in_blink in self._filter.flush():
            events.extend(self._step(s, in_blink))
        return events

    # ------------------------------------------------------------------

    def _step(self, s: GazeSample, in_blink: bool) -> list[GazeEvent]:
        ev: list[GazeEvent] = []
        if in_blink:
            if not self._in_blink:
                ev.append(GazeEvent(s.t_ms, BLINK_START))
                self._in_blink = True
                # freeze dwell accumulation and break the saccade segment:
                # positions under the artifact are not gaze
                self._counted_t = None
                self._prev_point = None
            return ev
        if self._in_blink:
            ev.append(GazeEvent(s.t_ms, BLINK_END))
            self._in_blink = False
            self._last_valid_t = s.t_ms  # the blink consumed the gap
        if not s.valid:
            return ev
        if (self._last_valid_t is not None
                and s.t_ms - self._last_valid_t > self.config.sample_gap_timeout_ms):
            ev.extend(self._reset(s.t_ms))
        self._last_valid_t = s.t_ms

        region = hit_test(self.layout, s.point)
        if region != self._region:
            if self._region is not None:
                ev.append(GazeEvent(s.t_ms, EXIT, region=self._region))
            ev.append(GazeEvent(s.t_ms, ENTER, region=region))
            if region.kind in (Region.CENTER_REGION, Region.CENTER_CELL):
                ev.append(GazeEvent(s.t_ms, CENTER_REACHED))
            self._region = region

        if self.technique == DWELL:
            ev.extend(self._step_dwell(s, region))
        else:
            ev.extend(self._step_crossing(s, region))
        return ev

    def _reset(self, t_ms: float) -> list[GazeEvent]:
        ev = []
        if self._region is not None:
            ev.append(GazeEvent(t_ms, EXIT, region=self._region))
        self._region = None
        self._dwell_label = None
        self._dwell_acc = 0.0
        self._counted_t = None
        self._dwell_done = False
        self._prev_point = None
        self._cross_done = False
        return ev

    def _step_dwell(self, s: GazeSample, region: Region) -> list[GazeEvent]:
        if region.kind != Region.CELL:
            self._dwell_label = None
            self._dwell_acc = 0.0
            self._counted_t = None
            self._dwell_done = False
            return []
        ev = []
        if region.label != self._dwell_label:
            self._dwell_label = region.label
            self._dwell_acc = 0.0
            self._counted_t = s.t_ms
            self._dwell_done = False
            ev.append(GazeEvent(s.t_ms, DWELL_PROGRESS, label=region.label,
                                fraction=0.0))
            return ev
        if self._counted_t is not None:
            self._dwell_acc += s.t_ms - self._counted_t
        self._counted_t = s.t_ms
        if self._dwell_done:
            return ev
        if self._dwell_acc + _ACC_EPS >= self.config.dwell_ms:
            ev.append(GazeEvent(s.t_ms, DWELL_PROGRESS, label=region.label,
                                fraction=1.0))
            ev.append(GazeEvent(s.t_ms, ACTIVATION, label=region.label,
                                technique=DWELL))
            self._dwell_done = True
        else:
            ev.append(GazeEvent(s.t_ms, DWELL_PROGRESS, label=region.label,
                                fraction=self._dwell_acc / self.config.dwell_ms))
        return ev

    def _step_crossing(self, s: GazeSample, region: Region) -> list[GazeEvent]:
        ev = []
        if region.kind in (Region.SLICE_INTERIOR, Region.CENTER_REGION):
            self._cross_done = False
        if self._prev_point is not None and not self._cross_done:
            label = segment_crossing(self.layout, self._prev_point, s.point)
            if label is not None:
                ev.append(GazeEvent(s.t_ms, ACTIVATION, label=label,
                                    technique=CROSSING))
                self._cross_done = True
        self._prev_point = s.point
        return ev


def process(layout, samples, config: EngineConfig | None = None,
            calibration: CalibrationModel | None = None) -> list[GazeEvent]:
    """Run a whole sample sequence through a fresh engine."""
    eng = GazeEngine(layout, config, calibration)
    events = []
    for s in samples:
        events.extend(eng.feed(s))
    events.extend(eng.flush())
    return events
