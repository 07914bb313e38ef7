"""Exhaustive pebble-game facts: BFS reach, strategy move counts, the
erasure exchange table and the weak/strong solvability census.

    python3 scripts/pebble_search.py
"""

import itertools
import time

from revcomp.accounting import erasure_tradeoff_table
from revcomp.pebble import (
    PebbleState,
    bennett_strategy,
    is_strongly_solvable,
    is_weakly_solvable,
    max_reachable_bfs,
    reachable_masks,
)


def main():
    print("n  max node (BFS)  reachable states  strategy moves")
    for n in range(1, 6):
        t0 = time.perf_counter()
        best = max_reachable_bfs(n, 2 ** n + 8)
        count = len(reachable_masks(n, 2 ** n + 8))
        print(f"{n}  {best:14d}  {count:16d}  {len(bennett_strategy(n - 1)):14d}"
              f"   ({time.perf_counter() - t0:.2f}s)")

    print("\nerasure exchange, n=8, S=4")
    print("k pebbles erasures space erased_bits replay")
    for r in erasure_tradeoff_table(8, 5, 4):
        print(r.k, r.pebbles, r.erasures, r.space, r.erased_bits,
              {None: "-", True: "ok", False: "MISMATCH"}[r.consistent])

    diff = total = 0
    for board in range(1, 21):
        for size in range(5):
            for nodes in itertools.combinations(range(1, board + 1), size):
                for free in range(5):
                    if size + free:
                        st = PebbleState(board, frozenset(nodes), size + free)
                        total += 1
                        diff += is_weakly_solvable(st) != is_strongly_solvable(st)
    print(f"\nweak vs strong solvability: {total} placements, {diff} differ")


if __name__ == "__main__":
    main()
