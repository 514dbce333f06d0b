import random

import pytest
from hypothesis import given, settings, strategies as st

from gazecross.engine import (
    ACTIVATION,
    BLINK_END,
    BLINK_START,
    CENTER_REACHED,
    CROSSING,
    DWELL,
    DWELL_PROGRESS,
    ENTER,
    EXIT,
    EngineConfig,
    GazeEngine,
    GazeSample,
    StreamError,
    apply_calibration,
    filter_blinks,
    fit_calibration,
    process,
)
from gazecross.geometry import GeometryConfig
from gazecross.layout import build_circular_layout, build_grid_layout, slice_point
from helpers import ALPHABET

CFG = GeometryConfig()


@pytest.fixture(scope="module")
def circ26():
    return build_circular_layout(ALPHABET, CFG)


@pytest.fixture(scope="module")
def grid26():
    return build_grid_layout(ALPHABET, CFG)


def fixation(t0, t1, p, step=10, valid=True):
    """Samples at p every step ms for t in [t0, t1)."""
    return [GazeSample(float(t), p[0], p[1], valid) for t in range(t0, t1, step)]


def kinds(events):
    return [e.kind for e in events]


def activations(events):
    return [e for e in events if e.kind == ACTIVATION]


class TestCalibration:
    def test_perfect_gaze(self):
        pts = [(0, 0), (10, 0), (0, 10), (10, 10), (5, 5)]
        model = fit_calibration([(p, p) for p in pts])
        assert model.correction == (0.0, 0.0)

    def test_constant_shift(self):
        pts = [(0, 0), (10, 0), (0, 10), (10, 10), (5, 5)]
        model = fit_calibration([(p, (p[0] + 1.0, p[1])) for p in pts])
        assert model.correction == pytest.approx((-1.0, 0.0))

    def test_mixed_offsets(self):
        offsets = [(1, 0), (1, 0), (1, 0), (0, 1), (0, -1)]
        pts = [(0, 0), (10, 0), (0, 10), (10, 10), (5, 5)]
        model = fit_calibration(
            [(p, (p[0] + ox, p[1] + oy)) for p, (ox, oy) in zip(pts, offsets)])
        assert model.correction == pytest.approx((-0.6, 0.0))

    def test_wrong_count(self):
        with pytest.raises(ValueError):
            fit_calibration([((0, 0), (0, 0))] * 4)

    def test_apply_identity(self):
        model = fit_calibration([((0, 0), (0, 0))] * 5)
        s = GazeSample(1.0, 10.0, 5.0)
        assert apply_calibration(model, s) == s

    def test_apply_shift(self):
        model = fit_calibration([((0, 0), (1.0, 0.0))] * 5)
        s = apply_calibration(model, GazeSample(1.0, 10.0, 5.0))
        assert (s.x_cm, s.y_cm) == pytest.approx((9.0, 5.0))

    def test_apply_keeps_validity(self):
        model = fit_calibration([((0, 0), (1.0, 0.0))] * 5)
        s = apply_calibration(model, GazeSample(1.0, 10.0, 5.0, valid=False))
        assert not s.valid and s.t_ms == 1.0


class TestBlinkFilter:
    def test_clean_fixation_unmarked(self):
        out = filter_blinks(fixation(0, 1000, (0.0, -4.0)))
        assert all(not m for _, m in out)
        assert len(out) == 100

    def test_short_invalid_run_marked(self):
        stream = (fixation(0, 300, (0, -4)) + fixation(300, 450, (0, -4), valid=False)
                  + fixation(450, 900, (0, -4)))
        marked = {s.t_ms for s, m in filter_blinks(stream) if m}
        assert marked == {float(t) for t in range(300, 450, 10)}

    def test_long_invalid_run_unmarked(self):
        stream = (fixation(0, 300, (0, -4)) + fixation(300, 800, (0, -4), valid=False)
                  + fixation(800, 1300, (0, -4)))
        assert all(not m for _, m in filter_blinks(stream))

    def test_downward_dip_marked(self):
        dip = [GazeSample(310.0, 0, 0.0), GazeSample(320.0, 0, 4.0),
               GazeSample(330.0, 0, 8.0), GazeSample(340.0, 0, 8.0),
               GazeSample(350.0, 0, 4.0), GazeSample(360.0, 0, 0.2)]
        stream = fixation(0, 310, (0.0, 0.0)) + dip + fixation(370, 900, (0.0, 0.0))
        marked = {s.t_ms for s, m in filter_blinks(stream) if m}
        # everything after the anchor up to and including the return sample
        assert {320.0, 330.0, 340.0, 350.0, 360.0} <= marked
        assert 300.0 not in marked

    def test_shallow_dip_unmarked(self):
        dip = [GazeSample(310.0, 0, 2.0), GazeSample(320.0, 0, 0.0)]
        stream = fixation(0, 310, (0.0, 0.0)) + dip + fixation(330, 800, (0.0, 0.0))
        assert all(not m for _, m in filter_blinks(stream))

    def test_upward_excursion_unmarked(self):
        # same shape mirrored upward: not a blink artifact
        dip = [GazeSample(310.0, 0, -4.0), GazeSample(320.0, 0, -8.0),
               GazeSample(330.0, 0, -4.0), GazeSample(340.0, 0, 0.1)]
        stream = fixation(0, 310, (0.0, 0.0)) + dip + fixation(350, 800, (0.0, 0.0))
        assert all(not m for _, m in filter_blinks(stream))

    def test_slow_return_unmarked(self):
        # dives and comes back, but outside the blink window
        dip = ([GazeSample(300.0 + k * 10, 0, min(8.0, k)) for k in range(1, 60)]
               + [GazeSample(900.0, 0, 0.1)])
        stream = fixation(0, 301, (0.0, 0.0)) + dip + fixation(910, 1500, (0.0, 0.0))
        assert all(not m for _, m in filter_blinks(stream))


class TestDwellMachine:
    def test_activation_at_500ms(self, grid26):
        events = process(grid26, fixation(0, 601, grid26.cell_center("A")))
        acts = activations(events)
        assert len(acts) == 1
        assert acts[0].label == "A" and acts[0].technique == DWELL
        assert acts[0].t_ms == pytest.approx(500.0)

    def test_progress_ramp(self, grid26):
        events = process(grid26, fixation(0, 501, grid26.cell_center("A")))
        prog = [e for e in events if e.kind == DWELL_PROGRESS]
        assert prog[0].fraction == 0.0
        assert prog[1].fraction == pytest.approx(0.02)
        assert prog[2].fraction == pytest.approx(0.04)
        assert prog[-1].fraction == 1.0

    def test_progress_one_precedes_activation(self, grid26):
        events = process(grid26, fixation(0, 501, grid26.cell_center("A")))
        idx = kinds(events).index(ACTIVATION)
        before = events[idx - 1]
        assert before.kind == DWELL_PROGRESS and before.fraction == 1.0
        assert before.t_ms == events[idx].t_ms

    def test_exit_resets_progress(self, grid26):
        a = grid26.cell_center("A")
        stream = (fixation(0, 300, a) + fixation(300, 350, (0.0, 100.0))
                  + fixation(350, 651, a))
        assert activations(process(grid26, stream)) == []

    def test_reentry_restarts_from_zero(self, grid26):
        a = grid26.cell_center("A")
        stream = (fixation(0, 300, a) + fixation(300, 350, (0.0, 100.0))
                  + fixation(350, 900, a))
        acts = activations(process(grid26, stream))
        assert len(acts) == 1
        assert acts[0].t_ms == pytest.approx(850.0)

    def test_hold_produces_single_activation(self, grid26):
        events = process(grid26, fixation(0, 2000, grid26.cell_center("A")))
        assert len(activations(events)) == 1

    def test_no_progress_spam_after_activation(self, grid26):
        events = process(grid26, fixation(0, 2000, grid26.cell_center("A")))
        idx = kinds(events).index(ACTIVATION)
        assert DWELL_PROGRESS not in kinds(events[idx + 1:])

    def test_exit_then_reenter_allows_second_activation(self, grid26):
        a = grid26.cell_center("A")
        stream = (fixation(0, 600, a) + fixation(600, 700, (0.0, 100.0))
                  + fixation(700, 1300, a))
        acts = activations(process(grid26, stream))
        assert [a_.t_ms for a_ in acts] == pytest.approx([500.0, 1200.0])

    def test_center_cell_never_activates(self, grid26):
        s = grid26.cell_size_cm
        center = (grid26.origin[0] + 4.5 * s, grid26.origin[1] + 1.5 * s)
        events = process(grid26, fixation(0, 1500, center))
        assert activations(events) == []
        assert CENTER_REACHED in kinds(events)

    def test_cell_switch_restarts(self, grid26):
        stream = (fixation(0, 400, grid26.cell_center("A"))
                  + fixation(400, 1000, grid26.cell_center("B")))
        acts = activations(process(grid26, stream))
        assert len(acts) == 1
        assert acts[0].label == "B"
        assert acts[0].t_ms == pytest.approx(900.0)

    def test_long_gap_resets(self, grid26):
        a = grid26.cell_center("A")
        stream = fixation(0, 310, a) + fixation(460, 1000, a)
        acts = activations(process(grid26, stream))
        assert len(acts) == 1
        assert acts[0].t_ms == pytest.approx(960.0)

    def test_short_gap_keeps_counting(self, grid26):
        a = grid26.cell_center("A")
        stream = fixation(0, 310, a) + fixation(390, 600, a)
        acts = activations(process(grid26, stream))
        assert len(acts) == 1
        assert acts[0].t_ms == pytest.approx(500.0)

    def test_invalid_samples_dropped(self, grid26):
        a = grid26.cell_center("A")
        stream = fixation(0, 310, a) + fixation(310, 390, a, valid=False) \
            + fixation(390, 600, a)
        acts = activations(process(grid26, stream))
        assert len(acts) == 1
        assert acts[0].t_ms == pytest.approx(500.0)


class TestCrossingMachine:
    def test_two_sample_crossing(self, circ26):
        label = circ26.slices[17].label
        stream = [GazeSample(0.0, *slice_point(circ26, label)),
                  GazeSample(11.0, *circ26.disc_for(label).center)]
        acts = activations(process(circ26, stream))
        assert len(acts) == 1
        assert acts[0].label == label and acts[0].technique == CROSSING
        assert acts[0].t_ms == 11.0

    def test_interior_walk_never_activates(self, circ26):
        rng = random.Random(7)
        limit = circ26.inner_radius_cm * 0.9
        x = y = 0.0
        stream = []
        for k in range(450):
            x += rng.uniform(-0.5, 0.5)
            y += rng.uniform(-0.5, 0.5)
            r = (x * x + y * y) ** 0.5
            if r > limit:
                x, y = x * limit / r, y * limit / r
            stream.append(GazeSample(k * 11.0, x, y))
        assert activations(process(circ26, stream)) == []

    def test_refractory_until_reentry(self, circ26):
        label = circ26.slices[0].label
        disc = circ26.disc_for(label).center
        far = (disc[0] * 1.5, disc[1] * 1.5)
        opposite = (-disc[0] * 1.5, -disc[1] * 1.5)
        # cross out, then sweep across the whole menu while still outside
        stream = [GazeSample(0.0, *slice_point(circ26, label)),
                  GazeSample(11.0, *disc),
                  GazeSample(22.0, *far),
                  GazeSample(33.0, *opposite)]
        acts = activations(process(circ26, stream))
        assert len(acts) == 1

    def test_second_crossing_after_return(self, circ26):
        a, b = circ26.slices[0].label, circ26.slices[13].label
        stream = [GazeSample(0.0, *slice_point(circ26, a)),
                  GazeSample(11.0, *circ26.disc_for(a).center),
                  GazeSample(22.0, 0.0, 0.0),
                  GazeSample(33.0, *slice_point(circ26, b)),
                  GazeSample(44.0, *circ26.disc_for(b).center)]
        acts = activations(process(circ26, stream))
        assert [x.label for x in acts] == [a, b]

    def test_center_reached(self, circ26):
        stream = [GazeSample(0.0, *slice_point(circ26, "A")),
                  GazeSample(11.0, 0.0, 0.0)]
        events = process(circ26, stream)
        assert CENTER_REACHED in kinds(events)

    def test_inbound_crossing_ignored(self, circ26):
        label = circ26.slices[5].label
        stream = [GazeSample(0.0, *circ26.disc_for(label).center),
                  GazeSample(11.0, *slice_point(circ26, label))]
        assert activations(process(circ26, stream)) == []


class TestBlinkIntegration:
    def test_dip_triggers_without_filter(self, circ26):
        dip = [GazeSample(310.0, 0, 4.0), GazeSample(320.0, 0, 8.0),
               GazeSample(330.0, 0, 4.0), GazeSample(340.0, 0, 0.1)]
        stream = fixation(0, 310, (0.0, 0.0)) + dip + fixation(350, 900, (0.0, 0.0))
        acts = activations(process(circ26, stream))
        assert len(acts) == 1
        assert acts[0].label == "N"  # bottom slice, straight down

    def test_dip_suppressed_with_filter(self, circ26):
        dip = [GazeSample(310.0, 0, 4.0), GazeSample(320.0, 0, 8.0),
               GazeSample(330.0, 0, 4.0), GazeSample(340.0, 0, 0.1)]
        stream = fixation(0, 310, (0.0, 0.0)) + dip + fixation(350, 900, (0.0, 0.0))
        events = process(circ26, stream,
                         EngineConfig(blink_filter_enabled=True))
        assert activations(events) == []
        assert BLINK_START in kinds(events) and BLINK_END in kinds(events)

    def test_dwell_progress_preserved_across_blink(self, grid26):
        a = grid26.cell_center("A")
        stream = (fixation(0, 310, a) + fixation(310, 460, a, valid=False)
                  + fixation(460, 900, a))
        events = process(grid26, stream, EngineConfig(blink_filter_enabled=True))
        acts = activations(events)
        assert len(acts) == 1
        # 300 ms banked before the blink, 200 more needed after resume
        assert acts[0].t_ms == pytest.approx(660.0)
        assert BLINK_START in kinds(events) and BLINK_END in kinds(events)
        between = [e for e in events
                   if 310 <= e.t_ms < 460 and e.kind not in (BLINK_START, BLINK_END)]
        assert between == []


class TestStreamContract:
    def test_stale_timestamp_rejected(self, grid26):
        eng = GazeEngine(grid26)
        eng.feed(GazeSample(10.0, 0.0, 0.0))
        with pytest.raises(StreamError):
            eng.feed(GazeSample(10.0, 0.0, 0.0))

    def test_events_non_decreasing(self, circ26):
        rng = random.Random(3)
        stream = [GazeSample(k * 11.0, rng.uniform(-8, 8), rng.uniform(-8, 8))
                  for k in range(400)]
        events = process(circ26, stream)
        ts = [e.t_ms for e in events]
        assert ts == sorted(ts)

    @given(st.integers(0, 2 ** 16))
    @settings(max_examples=30, deadline=None)
    def test_deterministic(self, seed):
        lay = build_circular_layout(ALPHABET, CFG)
        rng = random.Random(seed)
        stream = [GazeSample(k * 11.0, rng.uniform(-8, 8), rng.uniform(-8, 8),
                             rng.random() > 0.05)
                  for k in range(150)]
        cfg = EngineConfig(blink_filter_enabled=True)
        assert process(lay, stream, cfg) == process(lay, stream, cfg)

    def test_enter_exit_pairing(self, grid26):
        stream = (fixation(0, 200, grid26.cell_center("A"))
                  + fixation(200, 400, grid26.cell_center("B"))
                  + fixation(400, 600, (0.0, 100.0)))
        events = process(grid26, stream)
        seq = [(e.kind, e.region.kind if e.region else None,
                e.region.label if e.region else None)
               for e in events if e.kind in (ENTER, EXIT)]
        assert seq == [
            (ENTER, "cell", "A"),
            (EXIT, "cell", "A"), (ENTER, "cell", "B"),
            (EXIT, "cell", "B"), (ENTER, "outside", None),
        ]
