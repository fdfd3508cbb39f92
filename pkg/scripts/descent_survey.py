"""Survey descent over small simplicial sets: hypercovers versus plain degreewise surjections.

For every degreewise surjection between small simplicial sets, record whether
it is a hypercover and whether it induces isomorphisms on homology below the
level.  Hypercovers should always descend; the other maps need not.
"""

import argparse
import random
from collections import Counter

from hyperdescent import descent as ds
from hyperdescent import generators as gen
from hyperdescent import simplicial as sp


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-cells", type=int, default=3, help="nondegenerate cells of each small set")
    p.add_argument("--random", type=int, default=20, help="random hypercovers to add")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    sets = [x for x in gen.small_simplicial_sets(args.max_cells, 1) if max(x.sizes()) <= 3]
    tally = Counter()
    for x in sets:
        for y in sets:
            for f in sp.hom_delta(x, y):
                if not all(f.degree(k).is_surjective() for k in range(f.level + 1)):
                    continue
                rep = ds.verify_descent(f, 1)
                tally[(rep.hypercover.ok, rep.ok)] += 1
    rng = random.Random(args.seed)
    for _ in range(args.random):
        rep = ds.verify_descent(gen.random_hypercover(rng), 3)
        tally[(rep.hypercover.ok, rep.ok)] += 1
    print(f"{'hypercover':<12}{'descends':<10}count")
    for (hyper, ok), n in sorted(tally.items()):
        print(f"{str(hyper):<12}{str(ok):<10}{n}")
    if tally[(True, False)]:
        raise SystemExit("a hypercover failed to descend")


if __name__ == "__main__":
    main()
