#!/usr/bin/env python3
"""Census of grammatical templates per length across all 96 grammars.

Prints, for each grammar, the number of heuristic-filtered grammatical
templates at each length up to --max-len, plus the total.  Useful for sanity
checking that every language has enough material for corpus sampling.

Example:
    python3 scripts/template_census.py --max-len 10
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from alforge.grammars import enumerate_grammars  # noqa: E402
from alforge.templates import enumerate_templates  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-len", type=int, default=10)
    args = ap.parse_args()

    lengths = list(range(3, args.max_len + 1))
    print("grammar  order " + " ".join(f"{n:>5}" for n in lengths) + "  total")
    for g in enumerate_grammars():
        templates = enumerate_templates(g, args.max_len)
        counts = {n: 0 for n in lengths}
        for t in templates:
            counts[len(t)] += 1
        row = " ".join(f"{counts[n]:>5}" for n in lengths)
        print(f"{g.params}  {g.base_order:>5} {row} {len(templates):>6}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
