#!/usr/bin/env python3
"""Head-to-head run: dwell grid vs crossing pie over the same scripts.

Simulates search-and-select blocks for both techniques with a shared
seed, prints per-block activation/return summaries, learning rates, and
the pooled crossing/dwell ratios.
"""

import argparse

from gazecross.engine import EngineConfig
from gazecross.experiment import ALPHABET, make_search_select_script, \
    summarize
from gazecross.geometry import GeometryConfig
from gazecross.layout import build_circular_layout, build_grid_layout
from gazecross.simulator import AgentProfile, run_agent


def run_blocks(technique, layout, args):
    records = []
    for block in range(1, args.blocks + 1):
        script = make_search_select_script(args.seed, technique, block=block)
        if args.profile == "perfect":
            profile = AgentProfile.perfect(rng_seed=args.seed * 1009 + block)
        else:
            profile = AgentProfile(rng_seed=args.seed * 1009 + block)
        _, _, recs = run_agent(script, layout, profile, EngineConfig(),
                               user="sim")
        records.extend(recs)
        errors = sum(r.error for r in recs)
        print(f"  block {block}: {len(recs)} trials, {errors} errors")
    return records


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--blocks", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--profile", choices=("default", "perfect"),
                        default="default")
    args = parser.parse_args()

    geometry = GeometryConfig()
    records = []
    print("dwell grid")
    records += run_blocks("dwell", build_grid_layout(list(ALPHABET), geometry),
                          args)
    print("crossing pie")
    records += run_blocks("crossing",
                          build_circular_layout(list(ALPHABET), geometry),
                          args)

    stats = summarize(records)
    print()
    print(f"{'technique':<10} {'block':>5} {'metric':<16} {'n':>4} "
          f"{'mean':>8} {'median':>8} {'iqr':>8}")
    for g in stats.groups:
        print(f"{g.technique:<10} {g.block:>5} {g.metric:<16} {g.n:>4} "
              f"{g.mean_ms:>8.0f} {g.median_ms:>8.0f} {g.iqr_ms:>8.0f}")
    print()
    for lr in stats.learning:
        print(f"learning {lr.technique:<10} {lr.metric:<16} "
              f"blocks {lr.first_block}->{lr.second_block}: "
              f"{lr.rate_pct:+.2f}%")
    for ratio in stats.ratios:
        print(f"crossing/dwell {ratio.metric:<16} {ratio.ratio:.2f}")
    for warning in stats.warnings:
        print(f"warning: {warning}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
