#!/usr/bin/env python3
"""Blink artifact study: false crossing activations vs the retrospective filter.

For a range of blink rates, runs the same crossing blocks with the
filter off and on and reports how many activations beyond the matched
prescriptions each run produced.
"""

import argparse

from gazecross.engine import ACTIVATION, EngineConfig
from gazecross.experiment import ALPHABET, make_search_select_script
from gazecross.geometry import GeometryConfig
from gazecross.layout import build_circular_layout
from gazecross.simulator import AgentProfile, run_agent


def artifacts(layout, rate_hz, filter_on, seed):
    script = make_search_select_script(seed, "crossing")
    profile = AgentProfile(rng_seed=seed, blink_rate_hz=rate_hz)
    cfg = EngineConfig(blink_filter_enabled=filter_on)
    _, events, records = run_agent(script, layout, profile, cfg)
    total = sum(1 for e in events if e.kind == ACTIVATION)
    matched = sum(1 for r in records if not r.error)
    return total - matched, sum(r.error for r in records)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--rates", type=float, nargs="+",
                        default=[0.25, 0.5, 1.0, 2.0], metavar="HZ")
    args = parser.parse_args()

    layout = build_circular_layout(list(ALPHABET), GeometryConfig())
    print(f"{'blink rate':>10} {'off: extra':>11} {'on: extra':>10} "
          f"{'reduction':>10} {'off errs':>9} {'on errs':>8}")
    for rate in args.rates:
        off = on = err_off = err_on = 0
        for seed in range(args.seeds):
            extra, errs = artifacts(layout, rate, False, seed)
            off += extra
            err_off += errs
            extra, errs = artifacts(layout, rate, True, seed)
            on += extra
            err_on += errs
        cut = 100.0 * (off - on) / off if off else 0.0
        print(f"{rate:>10.2f} {off:>11} {on:>10} {cut:>9.1f}% "
              f"{err_off:>9} {err_on:>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
