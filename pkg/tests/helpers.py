"""Shared test oracles.

The crossing oracle re-decides segment crossings by brute force: walk the
segment in small spatial steps, find the first inside-to-outside transition
of the inner circle, refine it by bisection, and read the slice at the
refined exit point.  It shares no code with the analytic implementation.
"""

import math

ALPHABET = [chr(ord("A") + i) for i in range(26)]

# filled by the release-gate tests, echoed after the run by conftest
acceptance_lines: list[str] = []


def crossing_oracle(layout, p0, p1, step_cm=None):
    """Dense-sampling reference for layout.segment_crossing."""
    cx, cy = layout.center
    rr = layout.inner_radius_cm
    seg_len = math.dist(p0, p1)
    if seg_len == 0.0:
        return None
    if step_cm is None:
        step_cm = layout.band_width_cm / 20.0
    n_steps = max(2, math.ceil(seg_len / step_cm))

    def radius_at(t):
        x = p0[0] + t * (p1[0] - p0[0])
        y = p0[1] + t * (p1[1] - p0[1])
        return math.hypot(x - cx, y - cy)

    prev_t = 0.0
    prev_inside = radius_at(0.0) < rr
    for i in range(1, n_steps + 1):
        t = i / n_steps
        inside = radius_at(t) < rr
        if prev_inside and not inside:
            lo, hi = prev_t, t
            for _ in range(60):
                mid = (lo + hi) / 2.0
                if radius_at(mid) < rr:
                    lo = mid
                else:
                    hi = mid
            ex = (p0[0] + hi * (p1[0] - p0[0]), p0[1] + hi * (p1[1] - p0[1]))
            angle = math.degrees(math.atan2(ex[0] - cx, -(ex[1] - cy))) % 360.0
            width = 360.0 / len(layout.slices)
            idx = min(int(angle / width), len(layout.slices) - 1)
            return layout.slices[idx].label
        prev_t, prev_inside = t, inside
    return None
