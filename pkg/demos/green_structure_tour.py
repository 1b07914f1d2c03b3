#!/usr/bin/env python3
"""Tour of the Green structure of the orthogonal rook monoids.

Builds OR_4 and OR_6, compares brute-force class counts with the closed
forms, lists the absorbing down-sets (including the union that sits
outside the named inventory), and inspects the idempotent H-class groups.
"""

from rookmonoids import (
    class_count_formulas,
    enumerate_ideals,
    enumerate_universe,
    format_element_text,
    green_partition,
    h_class_group,
    j_order_dot,
)


def tour(n):
    universe = enumerate_universe("OR", n)
    green = green_partition(universe)
    m = n // 2
    formulas = class_count_formulas(m)

    print(f"== OR_{n}: {len(universe)} elements ==")
    print(f"rank histogram: {universe.rank_histogram()}")
    for rel, key in (("L", "l_class_count"), ("H", "h_class_count"),
                     ("J", "j_class_count")):
        print(f"{rel}-classes: counted {green.num_classes(rel)}, "
              f"closed form {formulas[key]}")

    half = formulas["d_class_size_by_rank"][m]
    per_class = sorted(
        int((green.j_ids == c).sum())
        for c, (k, _) in enumerate(green.j_meta) if k == m
    )
    print(f"half-rank D-classes: per class {per_class}, "
          f"combined closed form {half['combined']} "
          f"(= the two type classes together)")

    print("absorbing down-sets:")
    for d in enumerate_ideals(universe):
        print(f"  {d.kind:8s} k={d.k}  size {d.size}")

    eps = universe.idempotent_index(tuple(range(1, m + 1)))
    group, bijection = h_class_group(universe, eps)
    print(f"H-class of the idempotent on {{1..{m}}}: a group of order "
          f"{len(group)} on {group.degree} letters")
    for idx in sorted(bijection)[:3]:
        print(f"  {format_element_text(universe.elements[idx]):20s} "
              f"-> {bijection[idx]}")
    print()


if __name__ == "__main__":
    tour(4)
    tour(6)
    print("J-order of OR_6:")
    print(j_order_dot(green_partition(enumerate_universe("OR", 6))))
