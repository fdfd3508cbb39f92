"""Invariant ranks against bar-complex homology for small groups acting by permutations."""

import argparse
from fractions import Fraction

from hyperdescent import generators as gen
from hyperdescent import motives as mo
from hyperdescent import weight as wt


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--level", type=int, default=4, help="truncation level of the bar construction")
    p.add_argument("--max-dim", type=int, default=6)
    args = p.parse_args(argv)
    print(f"{'group':<6}{'action':<10}{'dim':>4}{'chi avg':>9}{'rank':>6}  homology below the top degree")
    for group in (mo.cyclic_group(2), mo.cyclic_group(3), mo.symmetric_group(3)):
        cat = mo.group_algebra_category(group)
        action = mo.regular_action(group, cat)
        bar = wt.bar_quotient(action, args.level)
        inv = wt.invariants_motive(action)
        for name, perm in gen.permutation_actions(group, args.max_dim).items():
            r = mo.permutation_realization(cat, group, perm, name)
            avg = Fraction(sum(sum(i == j for i, j in enumerate(perm[g])) for g in group.elements), group.order)
            h = wt.realized_homology(bar, r)
            low = [h[n] for n in range(args.level)]
            print(f"{group.name:<6}{name:<10}{len(perm[group.identity]):>4}{str(avg):>9}{inv.realized_rank(r):>6}  {low}")


if __name__ == "__main__":
    main()
