"""Synthetic gaze streams and scripted agents.

Replaces human participants for testing: fixations are isotropic Gaussian
jitter around a point, saccades follow a minimum-jerk profile with a
linear amplitude-to-duration law, and blinks appear as the downward
excursion artifact remote trackers produce (dive, held bottom, snap
back).  Every profile parameter here is an engineering default chosen to
be plausible, not a measured human value; treat agent timings as a test
bed, not as predictions.

All randomness flows from one random.Random seeded by the profile, so a
(seed, profile, script) triple always reproduces the identical stream.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from gazecross.engine import (
    CROSSING,
    DWELL,
    EngineConfig,
    GazeEvent,
    GazeSample,
    process,
)
from gazecross.experiment import TaskScript, TrialRecord, reduce
from gazecross.layout import (
    CircularMenuLayout,
    GridMenuLayout,
    slice_point,
)

Point = tuple[float, float]

BLINK_DURATION_MS = 120.0
BLINK_DEPTH_CM = 6.0
# a dip is only injected into a fixation with this much time left, so the
# artifact always completes inside the segment
_BLINK_SLACK_MS = 130.0
DWELL_HOLD_MARGIN_MS = 80.0


@dataclass(frozen=True)
class AgentProfile:
    """Movement parameters of a synthetic participant.

    saccade duration is saccade_base_ms + saccade_ms_per_deg * amplitude
    in visual degrees at viewing_distance_cm.  search_median_ms is the
    median of a lognormal search-time draw per trial; search_sigma 0
    degenerates to the median exactly.
    """

    saccade_base_ms: float = 20.0
    saccade_ms_per_deg: float = 2.0
    fixation_jitter_sd_cm: float = 0.15
    reaction_ms: float = 200.0
    search_median_ms: float = 800.0
    search_sigma: float = 0.4
    blink_rate_hz: float = 0.0
    sample_rate_hz: float = 90.0
    viewing_distance_cm: float = 55.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.sample_rate_hz <= 0 or self.viewing_distance_cm <= 0:
            raise ValueError("rates and distances must be > 0")
        if self.reaction_ms < 0 or self.search_median_ms < 0:
            raise ValueError("delays must be >= 0")

    @classmethod
    def perfect(cls, rng_seed: int = 0, **overrides) -> "AgentProfile":
        """No jitter, no blinks, deterministic search time."""
        defaults = dict(fixation_jitter_sd_cm=0.0, search_sigma=0.0,
                        blink_rate_hz=0.0, rng_seed=rng_seed)
        defaults.update(overrides)
        return cls(**defaults)

    def saccade_duration_ms(self, amplitude_cm: float) -> float:
        deg = math.degrees(
            2.0 * math.atan((amplitude_cm / 2.0) / self.viewing_distance_cm))
        return self.saccade_base_ms + self.saccade_ms_per_deg * deg


@dataclass(frozen=True)
class TrialPlan:
    """Ground truth for one trial: what was prescribed and when."""

    prescription: str
    shown_at_ms: float


@dataclass(frozen=True)
class SyntheticStream:
    samples: tuple[GazeSample, ...]
    ground_truth: tuple[TrialPlan, ...]
    blink_windows: tuple[tuple[float, float], ...] = ()


def _min_jerk(tau: float) -> float:
    return tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau)


def _dip_depth(tau: float) -> float:
    """Downward excursion shape: steep dive, held bottom, steep return."""
    if tau < 0.25:
        return BLINK_DEPTH_CM * tau / 0.25
    if tau <= 0.75:
        return BLINK_DEPTH_CM
    return BLINK_DEPTH_CM * (1.0 - tau) / 0.25


class _Builder:
    """Accumulates samples on the fixed-rate timestamp grid.

    Segments are half-open: a segment owns the grid ticks in
    [start, start + duration), so consecutive segments never collide and
    500 ms at 90 Hz is exactly 45 samples.
    """

    def __init__(self, profile: AgentProfile, rng: random.Random):
        self.profile = profile
        self.rng = rng
        self.period = 1000.0 / profile.sample_rate_hz
        self.samples: list[GazeSample] = []
        self.k = 0
        self.blink_windows: list[tuple[float, float]] = []
        self.next_blink_ms = (rng.expovariate(profile.blink_rate_hz) * 1000.0
                              if profile.blink_rate_hz > 0 else math.inf)

    @property
    def now_ms(self) -> float:
        return self.k * self.period

    def _emit(self, x: float, y: float, valid: bool = True) -> None:
        self.samples.append(GazeSample(self.k * self.period, x, y, valid))
        self.k += 1

    def fixate(self, center: Point, duration_ms: float) -> None:
        end = self.now_ms + duration_ms
        sd = self.profile.fixation_jitter_sd_cm
        while self.now_ms < end - 1e-9:
            if (self.now_ms >= self.next_blink_ms
                    and end - self.now_ms >= _BLINK_SLACK_MS):
                self._blink_dip(center)
                continue
            x, y = center
            if sd > 0:
                x += self.rng.gauss(0.0, sd)
                y += self.rng.gauss(0.0, sd)
            self._emit(x, y)

    def _blink_dip(self, center: Point) -> None:
        t0 = self.now_ms
        n = max(1, math.ceil((BLINK_DURATION_MS - 1e-9) / self.period))
        # tau is phased off the window edges so even the first and last
        # artifact samples sit visibly below the fixation
        for j in range(n):
            tau = (j + 1) / (n + 1)
            self._emit(center[0], center[1] + _dip_depth(tau))
        self.blink_windows.append((t0, self.now_ms))
        self.next_blink_ms = (self.now_ms + self.rng.expovariate(
            self.profile.blink_rate_hz) * 1000.0)

    def saccade(self, p0: Point, p1: Point) -> None:
        amp = math.dist(p0, p1)
        if amp < 1e-12:
            return
        dur = self.profile.saccade_duration_ms(amp)
        t0 = self.now_ms
        while self.now_ms < t0 + dur - 1e-9:
            tau = (self.now_ms - t0) / dur
            s = _min_jerk(tau)
            self._emit(p0[0] + s * (p1[0] - p0[0]),
                       p0[1] + s * (p1[1] - p0[1]))


# ---------------------------------------------------------------------------
# standalone generators

def gen_fixation(center: Point, duration_ms: float, profile: AgentProfile,
                 t0_ms: float = 0.0,
                 rng: random.Random | None = None) -> list[GazeSample]:
    """Jittered samples at center over [t0, t0 + duration)."""
    if duration_ms <= 0:
        raise ValueError("duration_ms must be > 0")
    rng = rng or random.Random(profile.rng_seed)
    period = 1000.0 / profile.sample_rate_hz
    sd = profile.fixation_jitter_sd_cm
    out = []
    k = 0
    while k * period < duration_ms - 1e-9:
        x, y = center
        if sd > 0:
            x += rng.gauss(0.0, sd)
            y += rng.gauss(0.0, sd)
        out.append(GazeSample(t0_ms + k * period, x, y))
        k += 1
    return out


def gen_saccade(p0: Point, p1: Point, profile: AgentProfile,
                t0_ms: float = 0.0) -> list[GazeSample]:
    """Minimum-jerk sweep from p0 to p1, endpoints included."""
    if p0 == p1:
        raise ValueError("saccade endpoints must differ")
    dur = profile.saccade_duration_ms(math.dist(p0, p1))
    period = 1000.0 / profile.sample_rate_hz
    out = []
    k = 0
    while k * period < dur - 1e-9:
        s = _min_jerk(k * period / dur)
        out.append(GazeSample(t0_ms + k * period,
                              p0[0] + s * (p1[0] - p0[0]),
                              p0[1] + s * (p1[1] - p0[1])))
        k += 1
    out.append(GazeSample(t0_ms + dur, p1[0], p1[1]))
    return out


def inject_blink(samples: list[GazeSample], at_ms: float,
                 profile: AgentProfile, kind: str = "dip") -> list[GazeSample]:
    """Overlay a blink artifact on ~120 ms of an existing stream.

    kind "dip" rewrites positions into the downward excursion; kind
    "dropout" flags the window's samples invalid instead.  The window is
    clamped into the stream's span.
    """
    if kind not in ("dip", "dropout"):
        raise ValueError(f"unknown blink kind {kind!r}")
    if not samples:
        return []
    t_first, t_last = samples[0].t_ms, samples[-1].t_ms
    start = min(max(at_ms, t_first), max(t_first, t_last - BLINK_DURATION_MS))
    end = start + BLINK_DURATION_MS
    idx = [i for i, s in enumerate(samples) if start <= s.t_ms < end]
    out = list(samples)
    n = len(idx)
    for j, i in enumerate(idx):
        s = out[i]
        if kind == "dropout":
            out[i] = GazeSample(s.t_ms, s.x_cm, s.y_cm, valid=False)
        else:
            tau = (j + 1) / (n + 1)
            out[i] = GazeSample(s.t_ms, s.x_cm, s.y_cm + _dip_depth(tau),
                                s.valid)
    return out


# ---------------------------------------------------------------------------
# scripted agent

def _target_point(layout, technique: str, label: str) -> Point:
    if technique == DWELL:
        return layout.cell_center(label)
    return slice_point(layout, label)


def run_agent(script: TaskScript, layout, profile: AgentProfile | None = None,
              engine_config: EngineConfig | None = None, user: str = "sim",
              ) -> tuple[SyntheticStream, list[GazeEvent], list[TrialRecord]]:
    """Play a task script and push the stream through the full engine.

    Per trial the agent reads the prescription at the center (reaction
    plus a search draw), saccades to the target, performs the technique
    (dwell: hold dwell_ms plus a margin; crossing: settle on the slice,
    then sweep through the band to the disc target), and returns to the
    center, which is where the next prescription appears.
    """
    profile = profile or AgentProfile()
    engine_config = engine_config or EngineConfig()
    if script.technique == DWELL and not isinstance(layout, GridMenuLayout):
        raise ValueError("dwell script needs a grid layout")
    if script.technique == CROSSING and not isinstance(layout, CircularMenuLayout):
        raise ValueError("crossing script needs a circular layout")

    rng = random.Random(profile.rng_seed)
    b = _Builder(profile, rng)
    center: Point = (0.0, 0.0)
    plans: list[TrialPlan] = []

    for prescription in script.trials:
        plans.append(TrialPlan(prescription, b.now_ms))
        search = (profile.search_median_ms if profile.search_sigma <= 0
                  else rng.lognormvariate(math.log(profile.search_median_ms),
                                          profile.search_sigma))
        b.fixate(center, profile.reaction_ms + search)
        if script.technique == DWELL:
            target = layout.cell_center(prescription)
            b.saccade(center, target)
            b.fixate(target, engine_config.dwell_ms + DWELL_HOLD_MARGIN_MS)
            b.saccade(target, center)
        else:
            approach = slice_point(layout, prescription)
            disc = layout.disc_for(prescription).center
            b.saccade(center, approach)
            b.fixate(approach, profile.reaction_ms)
            b.saccade(approach, disc)
            b.fixate(disc, profile.reaction_ms)
            b.saccade(disc, center)

    b.fixate(center, 400.0)  # settle so the last return is observable
    stream = SyntheticStream(tuple(b.samples), tuple(plans),
                             tuple(b.blink_windows))
    events = process(layout, stream.samples, engine_config)
    records = reduce(events, script, [p.shown_at_ms for p in plans], user=user)
    return stream, events, records
