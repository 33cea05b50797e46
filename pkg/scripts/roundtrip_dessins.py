"""Random trigonal polynomials through trace, encode, search and check."""

import argparse
import time

import numpy as np

from ovalis import trigonal as TR


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=24)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=float, default=60_000, help="milliseconds per search")
    a = ap.parse_args()
    rng = np.random.default_rng(a.seed)
    tally: dict[str, int] = {}
    done = 0
    while done < a.samples:
        n = 1 + done % 2
        try:
            ls = TR.trace_trigonal_polynomial(TR.random_polynomial(n, rng))
        except TR.DegenerateDiscriminant:
            tally["degenerate"] = tally.get("degenerate", 0) + 1
            continue
        rg = TR.encode_real_graph(ls)
        t = time.perf_counter()
        res = TR.search_completion(rg, n, budget_ms=a.budget)
        dt = time.perf_counter() - t
        status = res.status
        if isinstance(res, TR.Found) and TR.is_valid_completion(res.completion, n, rg):
            status = "Found-but-invalid"
        tally[status] = tally.get(status, 0) + 1
        print(f"n={n}  {str(rg):40s} {status:12s} {dt * 1000:7.1f} ms")
        done += 1
    print(tally)


if __name__ == "__main__":
    main()
