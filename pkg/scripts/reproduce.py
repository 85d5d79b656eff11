#!/usr/bin/env python3
"""Reproduce the whole derivation grid and print one status line per s.

For each s the script runs the simplification pipeline, replays its
trace with abelianization checks, verifies both induction oracles, the
palindrome property, the clasp identity, and a sample of filled H1
orders.  Exits nonzero if anything fails.
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from pretzel_pi1.derivation import (
    full_trace,
    longitude_word,
    run_pipeline,
    simplify_longitude,
    verify_L_induction,
    verify_R_induction,
)
from pretzel_pi1.presentations import replay_trace
from pretzel_pi1.surgery import Slope, h1_order, verify_fact
from pretzel_pi1.words import CyclicWord, palindrome_rotation


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--min-s", type=int, default=3)
    parser.add_argument("--max-s", type=int, default=12)
    args = parser.parse_args()

    failures = 0
    for s in range(args.min_s, args.max_s + 1):
        start = time.perf_counter()
        result = run_pipeline(s)
        checks = {
            "replay": replay_trace(full_trace(s), check_abelian=True).passed,
            "relator": result.presentation.generators == ("c", "l"),
            "longitude": simplify_longitude(s, result.longitude).word
                         == longitude_word(s),
            "R-induction": verify_R_induction(s).passed,
            "L-induction": verify_L_induction(s).passed,
            "palindrome": palindrome_rotation(
                CyclicWord(result.presentation.relator("r_inf"))) is not None,
            "clasp": verify_fact(s).passed,
            "h1": h1_order(s, Slope(4 * s + 7, 1)) == 4 * s + 7,
        }
        elapsed = time.perf_counter() - start
        bad = [name for name, ok in checks.items() if not ok]
        status = "ok" if not bad else f"FAIL ({', '.join(bad)})"
        print(f"s={s:2d}  moves={len(result.trace.moves):3d}  "
              f"relator_len={2 * s + 9:3d}  {elapsed:6.3f}s  {status}")
        failures += len(bad)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
