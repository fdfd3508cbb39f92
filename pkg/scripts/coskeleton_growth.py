"""Print degreewise sizes of cosk_n for a few small simplicial sets."""

import argparse

from hyperdescent import generators as gen
from hyperdescent import simplicial as sp


def examples(level: int):
    yield "two points", sp.constant(["a", "b"], level)
    yield "three points", sp.constant(["a", "b", "c"], level)
    yield "interval", sp.standard_simplex(1, level)
    yield "circle", gen.ez_simplicial_set([{"v": ()}, {"e": ("v", "v")}], level)
    yield "2-simplex", sp.standard_simplex(2, level)


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--max-n", type=int, default=2)
    args = p.parse_args(argv)
    print(f"{'set':<14}{'n':>3}  sizes in degrees 0..{args.level}")
    for name, x in examples(args.level):
        print(f"{name:<14}{'-':>3}  {x.sizes()}")
        for n in range(args.max_n + 1):
            print(f"{'':<14}{n:>3}  {sp.cosk(sp.sk(x, n), n, args.level).sizes()}")


if __name__ == "__main__":
    main()
