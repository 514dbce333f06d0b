"""Task scripts, trial reduction, and summary statistics.

Two task kinds drive both menus.  Search-and-Select runs 55 prescriptions
covering the alphabet in a seeded pseudo-random order: three warm-up
letters appear three times each, the other 23 exactly twice.  Selection
alternates two letters of a pair, 20 prescriptions per pair, the first
two of each pair flagged warm-up.

reduce() turns an engine event stream back into per-trial records:
activation_time is prescription onset to the matching Activation,
return_time is Activation to the next CenterReached.  A trial is an
error when the first Activation in its window has the wrong label or
when nothing activates within the timeout.  Error and warm-up trials are
carried in the records but never enter any statistic.
"""

from __future__ import annotations

import csv
import io
import math
import random
import statistics
from dataclasses import dataclass, field, replace

from gazecross.engine import ACTIVATION, CENTER_REACHED, CROSSING, DWELL, GazeEvent

ALPHABET = tuple(chr(ord("A") + i) for i in range(26))

SEARCH_SELECT = "search_select"
SELECTION = "selection"

DEFAULT_PAIRS = (("A", "N"), ("G", "T"), ("H", "I"), ("J", "R"))

DEFAULT_TIMEOUT_MS = 10_000.0


@dataclass(frozen=True)
class TaskScript:
    kind: str
    technique: str
    trials: tuple[str, ...]
    warmup: tuple[bool, ...]  # parallel to trials
    block_index: int = 1
    seed: int | None = None

    def __post_init__(self) -> None:
        if len(self.trials) != len(self.warmup):
            raise ValueError("trials and warmup flags must align")
        if self.technique not in (DWELL, CROSSING):
            raise ValueError(f"unknown technique {self.technique!r}")


@dataclass(frozen=True)
class TrialRecord:
    user: str
    technique: str
    block: int
    trial: int  # 1-based position in the script
    prescription: str
    shown_at_ms: float
    activated_label: str | None
    activated_at_ms: float | None
    activation_time_ms: float | None
    center_return_at_ms: float | None
    return_time_ms: float | None
    error: bool
    warmup: bool


@dataclass(frozen=True)
class GroupStats:
    user: str
    technique: str
    block: int
    metric: str  # activation_time or return_time
    n: int
    mean_ms: float
    median_ms: float
    iqr_ms: float


@dataclass(frozen=True)
class LearningRate:
    user: str
    technique: str
    metric: str
    first_block: int
    second_block: int
    rate_pct: float  # 100 * (b1 - b2) / b1


@dataclass(frozen=True)
class TechniqueRatio:
    user: str
    metric: str
    ratio: float  # crossing mean / dwell mean, pooled over blocks


@dataclass(frozen=True)
class SummaryStats:
    groups: tuple[GroupStats, ...]
    learning: tuple[LearningRate, ...]
    ratios: tuple[TechniqueRatio, ...]
    warnings: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------------------
# scripts

def make_search_select_script(seed: int, technique: str,
                              block: int = 1) -> TaskScript:
    """55-prescription alphabet coverage script, deterministic in the seed.

    The first three trials are the warm-up letters, drawn by the seeded
    rng; after them the remaining multiset (warm-ups twice more, the rest
    twice) is shuffled.
    """
    rng = random.Random(f"search-select:{seed}:{technique}:{block}")
    warmups = rng.sample(ALPHABET, 3)
    rest = list(warmups) * 2 + [c for c in ALPHABET if c not in warmups] * 2
    rng.shuffle(rest)
    trials = tuple(warmups + rest)
    flags = tuple(i < 3 for i in range(len(trials)))
    return TaskScript(SEARCH_SELECT, technique, trials, flags, block, seed)


def make_selection_script(technique: str,
                          pairs=DEFAULT_PAIRS,
                          block: int = 1) -> TaskScript:
    """Alternating-pair script: 20 prescriptions per pair, first 2 warm-up."""
    trials: list[str] = []
    flags: list[bool] = []
    for a, b in pairs:
        if a == b:
            raise ValueError(f"pair letters must differ, got ({a!r}, {b!r})")
        for i in range(20):
            trials.append(a if i % 2 == 0 else b)
            flags.append(i < 2)
    return TaskScript(SELECTION, technique, tuple(trials), tuple(flags), block)


# ---------------------------------------------------------------------------
# reduction

def _infer_shown_times(events: list[GazeEvent], script: TaskScript,
                       timeout_ms: float) -> list[float]:
    """Prescription onset times when the runner did not record them.

    The session contract is: a prescription appears at stream start, the
    next one appears when the gaze returns to the center after an
    activation.  Trials that never activate advance the cursor by the
    timeout.
    """
    shown: list[float] = []
    cursor = events[0].t_ms if events else 0.0
    idx = 0
    for _ in script.trials:
        shown.append(cursor)
        act_i = next((k for k in range(idx, len(events))
                      if events[k].kind == ACTIVATION
                      and events[k].t_ms >= cursor), None)
        if act_i is None or events[act_i].t_ms > cursor + timeout_ms:
            cursor += timeout_ms
            continue
        idx = act_i + 1
        ret = next((e for e in events[idx:] if e.kind == CENTER_REACHED), None)
        cursor = ret.t_ms if ret is not None else events[act_i].t_ms + timeout_ms
    return shown


def reduce(events: list[GazeEvent], script: TaskScript,
           shown_at_ms: list[float] | None = None, *,
           user: str = "user",
           timeout_ms: float = DEFAULT_TIMEOUT_MS) -> list[TrialRecord]:
    """One TrialRecord per prescription, matched against the event stream."""
    ts = [e.t_ms for e in events]
    if ts != sorted(ts):
        raise ValueError("events out of order")
    if shown_at_ms is None:
        shown_at_ms = _infer_shown_times(events, script, timeout_ms)
    if len(shown_at_ms) != len(script.trials):
        raise ValueError(
            f"{len(shown_at_ms)} shown times for {len(script.trials)} trials")

    activation_events = [e for e in events if e.kind == ACTIVATION]
    center_events = [e for e in events if e.kind == CENTER_REACHED]
    records: list[TrialRecord] = []
    cursor = 0  # consumed activations
    for i, prescription in enumerate(script.trials):
        shown = shown_at_ms[i]
        window_end = shown + timeout_ms
        if i + 1 < len(shown_at_ms):
            window_end = min(window_end, shown_at_ms[i + 1])
        act = None
        while cursor < len(activation_events):
            cand = activation_events[cursor]
            if cand.t_ms < shown:
                cursor += 1  # stray activation before this prescription
                continue
            if cand.t_ms < window_end or math.isclose(cand.t_ms, window_end):
                act = cand
                cursor += 1
            break
        if act is None:
            records.append(TrialRecord(
                user, script.technique, script.block_index, i + 1, prescription,
                shown, None, None, None, None, None,
                error=True, warmup=script.warmup[i]))
            continue
        ret_end = shown_at_ms[i + 1] if i + 1 < len(shown_at_ms) else \
            act.t_ms + timeout_ms
        ret = next((e for e in center_events
                    if act.t_ms < e.t_ms <= ret_end), None)
        records.append(TrialRecord(
            user, script.technique, script.block_index, i + 1, prescription,
            shown, act.label, act.t_ms, act.t_ms - shown,
            ret.t_ms if ret else None,
            ret.t_ms - act.t_ms if ret else None,
            error=act.label != prescription, warmup=script.warmup[i]))
    return records


# ---------------------------------------------------------------------------
# statistics

_METRICS = ("activation_time", "return_time")


def _metric_values(records: list[TrialRecord], metric: str) -> list[float]:
    attr = f"{metric}_ms"
    return [getattr(r, attr) for r in records
            if not r.error and not r.warmup and getattr(r, attr) is not None]


def _iqr(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    q = statistics.quantiles(values, n=4, method="inclusive")
    return q[2] - q[0]


def summarize(records: list[TrialRecord]) -> SummaryStats:
    """Group statistics, per-metric learning rates, and technique ratios.

    Medians use the midpoint rule for even counts; the IQR uses linear
    interpolation between order statistics (the spreadsheet-style
    inclusive method).  Learning rates compare the two lowest block
    indices present for a (user, technique); ratios pool all blocks.
    """
    groups: list[GroupStats] = []
    warnings: list[str] = []
    keys = sorted({(r.user, r.technique, r.block) for r in records})
    for user, technique, block in keys:
        subset = [r for r in records
                  if (r.user, r.technique, r.block) == (user, technique, block)]
        emitted = False
        for metric in _METRICS:
            values = _metric_values(subset, metric)
            if not values:
                continue
            groups.append(GroupStats(
                user, technique, block, metric, len(values),
                statistics.fmean(values), statistics.median(values),
                _iqr(values)))
            emitted = True
        if not emitted:
            warnings.append(
                f"group user={user} technique={technique} block={block}: "
                "no usable trials, omitted")

    learning: list[LearningRate] = []
    for user, technique in sorted({(g.user, g.technique) for g in groups}):
        for metric in _METRICS:
            per_block = sorted(
                (g.block, g.mean_ms) for g in groups
                if (g.user, g.technique, g.metric) == (user, technique, metric))
            if len(per_block) < 2:
                continue
            (b1, m1), (b2, m2) = per_block[0], per_block[1]
            if m1 == 0:
                continue
            learning.append(LearningRate(
                user, technique, metric, b1, b2, 100.0 * (m1 - m2) / m1))

    ratios: list[TechniqueRatio] = []
    for user in sorted({r.user for r in records}):
        for metric in _METRICS:
            pools = {}
            for technique in (DWELL, CROSSING):
                vals = _metric_values(
                    [r for r in records
                     if r.user == user and r.technique == technique], metric)
                if vals:
                    pools[technique] = statistics.fmean(vals)
            if DWELL in pools and CROSSING in pools and pools[DWELL] != 0:
                ratios.append(TechniqueRatio(
                    user, metric, pools[CROSSING] / pools[DWELL]))

    return SummaryStats(tuple(groups), tuple(learning), tuple(ratios),
                        tuple(warnings))


# ---------------------------------------------------------------------------
# CSV

RECORD_CSV_HEADER = ("user,technique,block,trial,prescription,shown_ms,"
                     "activated,activated_ms,activation_time_ms,"
                     "return_time_ms,error,warmup")


def _fmt_ms(value: float | None) -> str:
    return "" if value is None else str(max(0, round(value)))


def records_to_csv(records: list[TrialRecord]) -> str:
    """Bit-stable trial CSV: times as integer ms, empty for absent, LF."""
    lines = [RECORD_CSV_HEADER]
    for r in records:
        lines.append(",".join([
            r.user, r.technique, str(r.block), str(r.trial), r.prescription,
            _fmt_ms(r.shown_at_ms), r.activated_label or "",
            _fmt_ms(r.activated_at_ms), _fmt_ms(r.activation_time_ms),
            _fmt_ms(r.return_time_ms),
            "1" if r.error else "0", "1" if r.warmup else "0",
        ]))
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str) -> list[TrialRecord]:
    """Inverse of records_to_csv; malformed rows name their line number."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []
    if ",".join(header) != RECORD_CSV_HEADER:
        raise ValueError(f"line 1: unexpected header {','.join(header)!r}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 12:
            raise ValueError(f"line {lineno}: expected 12 fields, got {len(row)}")
        try:
            def ms(s):
                return float(s) if s else None
            activated_at = ms(row[7])
            records.append(TrialRecord(
                user=row[0], technique=row[1], block=int(row[2]),
                trial=int(row[3]), prescription=row[4],
                shown_at_ms=float(row[5]),
                activated_label=row[6] or None,
                activated_at_ms=activated_at,
                activation_time_ms=ms(row[8]),
                center_return_at_ms=(activated_at + float(row[9])
                                     if row[9] and activated_at is not None
                                     else None),
                return_time_ms=ms(row[9]),
                error=row[10] == "1", warmup=row[11] == "1"))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return records


SUMMARY_CSV_HEADER = ("row_kind,user,technique,block,metric,n,"
                      "mean_ms,median_ms,iqr_ms,value")


def summary_to_csv(stats: SummaryStats) -> str:
    """One flat table: group rows, then learning rates, then ratios.

    The value column carries the learning-rate percentage or the
    crossing/dwell ratio, two decimals, empty on group rows.
    """
    lines = [SUMMARY_CSV_HEADER]
    for g in stats.groups:
        lines.append(",".join([
            "group", g.user, g.technique, str(g.block), g.metric, str(g.n),
            f"{g.mean_ms:.2f}", f"{g.median_ms:.2f}", f"{g.iqr_ms:.2f}", ""]))
    for lr in stats.learning:
        lines.append(",".join([
            "learning_rate", lr.user, lr.technique,
            f"{lr.first_block}-{lr.second_block}", lr.metric, "", "", "", "",
            f"{lr.rate_pct:.2f}"]))
    for ratio in stats.ratios:
        lines.append(",".join([
            "ratio_crossing_over_dwell", ratio.user, "", "", ratio.metric,
            "", "", "", "", f"{ratio.ratio:.2f}"]))
    return "\n".join(lines) + "\n"


def perturb_warmup_copy(records: list[TrialRecord],
                        delta_ms: float) -> list[TrialRecord]:
    """Copy with every warm-up trial's times shifted; a metamorphic probe."""
    out = []
    for r in records:
        if r.warmup and r.activation_time_ms is not None:
            out.append(replace(r, activation_time_ms=r.activation_time_ms + delta_ms))
        else:
            out.append(r)
    return out
