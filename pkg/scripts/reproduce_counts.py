"""Admissible DP2 scheme counts in class 3 with eight ovals, per knob setting.

    python scripts/reproduce_counts.py            # default knobs
    python scripts/reproduce_counts.py --sweep    # all 16 knob configurations
"""

import argparse
import itertools
import time

from ovalis.enumerate import dp2_admissible, knob_differences
from ovalis.obstructions import DEFAULT_KNOBS, Knobs

TARGET = {4: 74, 3: 79, 2: 61, 1: 28}


def counts(knobs: Knobs) -> dict[int, int]:
    return {k: len(dp2_admissible(k, 3, 8, knobs)) for k in TARGET}


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sweep", action="store_true")
    ap.add_argument("--diffs", action="store_true", help="list schemes that flip with each knob")
    a = ap.parse_args()

    for k, want in TARGET.items():
        t = time.perf_counter()
        got = len(dp2_admissible(k, 3, 8))
        print(f"k={k}: {got:3d} admissible (target {want})  {time.perf_counter() - t:.2f}s")

    if a.diffs:
        for k in TARGET:
            for knob, d in knob_differences(k, 3, 8).items():
                for s in d["newly_admissible"]:
                    print(f"k={k} {knob}: + {s}")
                for s in d["newly_prohibited"]:
                    print(f"k={k} {knob}: - {s}")

    if a.sweep:
        print()
        for dj, osd, c2, pr in itertools.product(("each", "common"), (True, False), (False, True),
                                                 ("end-disk", "edge-disjoint")):
            kn = Knobs(dj, osd, c2, pr)
            got = counts(kn)
            mark = "*" if got == TARGET else " "
            default = " (default)" if kn == DEFAULT_KNOBS else ""
            print(f"{mark} {dj:6s} one_sphere_disjoint={osd!s:5s} case2_nest={c2!s:5s} "
                  f"pairs={pr:13s} -> {[got[k] for k in TARGET]}{default}")


if __name__ == "__main__":
    main()
