"""Green's relations, ideals, and idempotent subgroup structure.

Classes are computed from the structural characterizations (equal domain
for L, equal image for R, both for H, rank plus half-rank type for J) with
the quadratic principal-ideal computations kept as cross-checks: the
``principal_*`` functions compute their answer by brute force and assert
the characterization before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .congruences import PermGroup, _canonical_ids
from .core import InvariantViolation, PartialInjection, TYPE_I, is_idempotent


@dataclass
class GreenData:
    """Per-element class ids for L, R, H, J plus per-J-class metadata.

    H refines L and R, which refine J; on these monoids D coincides with J,
    so D is stored as an alias.  ``j_meta[c]`` is (rank, type) with type
    empty except for the half-rank classes of the orthogonal family.
    """

    universe: object
    l_ids: np.ndarray
    r_ids: np.ndarray
    h_ids: np.ndarray
    j_ids: np.ndarray
    j_meta: list

    @property
    def d_ids(self):
        return self.j_ids

    def ids(self, relation):
        return {
            "L": self.l_ids, "R": self.r_ids, "H": self.h_ids,
            "J": self.j_ids, "D": self.j_ids,
        }[relation.upper()]

    def num_classes(self, relation):
        return int(self.ids(relation).max()) + 1

    def class_sizes(self, relation):
        return np.bincount(self.ids(relation)).tolist()


def green_partition(universe):
    """Compute the Green class structure of a universe."""
    dom_keys = {}
    img_keys = {}
    l_ids, r_ids, h_ids, j_ids = [], [], [], []
    h_keys = {}
    j_keys = {}
    j_meta = []
    for i, e in enumerate(universe.elements):
        d = e.domain()
        g = e.image()
        l_ids.append(dom_keys.setdefault(d, len(dom_keys)))
        r_ids.append(img_keys.setdefault(g, len(img_keys)))
        h_ids.append(h_keys.setdefault((d, g), len(h_keys)))
        jk = (int(universe.ranks[i]), universe.mtypes[i])
        if jk not in j_keys:
            j_keys[jk] = len(j_keys)
            j_meta.append(jk)
        j_ids.append(j_keys[jk])
    return GreenData(
        universe=universe,
        l_ids=_canonical_ids(np.array(l_ids)),
        r_ids=_canonical_ids(np.array(r_ids)),
        h_ids=_canonical_ids(np.array(h_ids)),
        j_ids=_canonical_ids(np.array(j_ids)),
        j_meta=j_meta,
    )


def principal_right(universe, idx):
    """sigma*S by brute force, asserted equal to image containment."""
    table = universe.multiplication_table()
    brute = frozenset(np.unique(table[idx]).tolist())
    masks = universe.img_masks
    characterized = frozenset(np.flatnonzero((masks & ~masks[idx]) == 0).tolist())
    if brute != characterized:
        raise InvariantViolation(
            f"right ideal of element {idx} disagrees with image containment"
        )
    return brute


def principal_left(universe, idx):
    """S*sigma by brute force, asserted equal to domain containment."""
    table = universe.multiplication_table()
    brute = frozenset(np.unique(table[:, idx]).tolist())
    masks = universe.dom_masks
    characterized = frozenset(np.flatnonzero((masks & ~masks[idx]) == 0).tolist())
    if brute != characterized:
        raise InvariantViolation(
            f"left ideal of element {idx} disagrees with domain containment"
        )
    return brute


def principal_twosided(universe, idx):
    """S*sigma*S by brute force, asserted equal to the rank/type bound."""
    table = universe.multiplication_table()
    brute = frozenset(np.unique(table[table[:, idx], :]).tolist())
    ranks = universe.ranks
    r = int(ranks[idx])
    m = universe.n // 2
    if universe.family == "OR" and r == m:
        mt = universe.mtypes[idx]
        types = np.array([t == mt for t in universe.mtypes])
        keep = (ranks < m) | ((ranks == m) & types)
    else:
        keep = ranks <= r
    characterized = frozenset(np.flatnonzero(keep).tolist())
    if brute != characterized:
        raise InvariantViolation(
            f"two-sided ideal of element {idx} disagrees with the rank/type bound"
        )
    return brute


def class_count_formulas(m):
    """Closed-form Green class counts and sizes for the orthogonal family.

    The rank-m D entry carries two values: ``combined`` counts the two
    half-rank classes together, ``per_class`` is the size of each one.
    """
    if m < 1:
        raise ValueError(f"half-degree must be >= 1, got {m}")
    n = 2 * m
    w_prime = 2 ** (m - 1) * factorial(m)
    l_size = {k: comb(m, k) * 2**k * factorial(k) for k in range(m)}
    l_size[m] = w_prime
    l_size[n] = w_prime
    h_size = {k: factorial(k) for k in range(m + 1)}
    h_size[n] = w_prime
    d_size = {k: comb(m, k) ** 2 * 4**k * factorial(k) for k in range(m)}
    d_size[m] = {"combined": 4**m * factorial(m) // 2,
                 "per_class": 4 ** (m - 1) * factorial(m)}
    d_size[n] = w_prime
    return {
        "m": m,
        "n": n,
        "unit_group_order": w_prime,
        "symplectic_unit_group_order": 2**m * factorial(m),
        "l_class_size_by_rank": l_size,
        "r_class_size_by_rank": dict(l_size),
        "l_class_count": 1 + sum(comb(m, k) * 2**k for k in range(m + 1)),
        "r_class_count": 1 + sum(comb(m, k) * 2**k for k in range(m + 1)),
        "h_class_size_by_rank": h_size,
        "h_class_count": 1 + 4**m // 2 + sum(comb(m, k) ** 2 * 4**k for k in range(m)),
        "d_class_size_by_rank": d_size,
        "j_class_count": m + 3,
    }


@dataclass(frozen=True)
class IdealDescriptor:
    """A two-sided absorbing subset, labelled against the expected shapes.

    kind is "I_k" (everything of rank <= k), "I_m_I" / "I_m_II" (a single
    half-rank type on top of the lower ranks), "union" (both half-rank
    types but no units), or "other".
    """

    kind: str
    k: int | None
    members: tuple

    @property
    def size(self):
        return len(self.members)


def _j_below(a, b, m, family):
    """Order of the J-poset: is class a contained in the ideal of class b?"""
    (ka, ta), (kb, tb) = a, b
    if ka == kb:
        return family != "OR" or ka != m or ta == tb
    return ka < kb


def enumerate_ideals(universe, green=None):
    """Every nonempty down-closed union of J-classes, verified absorbing.

    The expected shapes get their names; anything else is labelled
    "union" or "other" and reported rather than suppressed.
    """
    green = green or green_partition(universe)
    table = universe.multiplication_table()
    meta = green.j_meta
    count = len(meta)
    m = universe.n // 2
    out = []
    for bits in range(1, 2**count):
        chosen = [c for c in range(count) if bits >> c & 1]
        down_closed = all(
            _j_below(meta[other], meta[c], m, universe.family)
            <= (other in chosen)
            for c in chosen
            for other in range(count)
        )
        if not down_closed:
            continue
        mask = np.isin(green.j_ids, chosen)
        members = np.flatnonzero(mask)
        absorbing = bool(mask[table[:, members]].all() and mask[table[members, :]].all())
        if not absorbing:
            raise InvariantViolation(
                f"down-set of J-classes {chosen} is not absorbing in "
                f"{universe.family}_{universe.n}"
            )
        out.append(IdealDescriptor(
            kind=_ideal_kind(chosen, meta, m, universe),
            k=_ideal_level(chosen, meta, m, universe),
            members=tuple(int(i) for i in members),
        ))
    out.sort(key=lambda d: (d.size, d.kind))
    return out


def _ideal_kind(chosen, meta, m, universe):
    ranks = sorted({meta[c][0] for c in chosen})
    top = ranks[-1]
    expected_below = {c for c, (k, _) in enumerate(meta) if k < top}
    if not expected_below <= set(chosen):
        return "other"
    at_top = [c for c in chosen if meta[c][0] == top]
    if universe.family == "OR" and top == m:
        if len(at_top) == 2:
            return "union"
        return "I_m_I" if meta[at_top[0]][1] == TYPE_I else "I_m_II"
    return "I_k"


def _ideal_level(chosen, meta, m, universe):
    top = max(meta[c][0] for c in chosen)
    if universe.family == "OR" and top == m:
        return None
    return top


def h_class_group(universe, idx):
    """The H-class of an idempotent as a permutation group.

    For rank k between 1 and n/2 the group acts on the positions of the
    idempotent's domain; for rank n it is the whole unit group.  Returns
    the group together with the element-to-permutation bijection.
    """
    elem = universe.elements[idx]
    if not is_idempotent(elem):
        raise ValueError(f"element {idx} ({elem!r}) is not idempotent")
    points = elem.domain()
    k = len(points)
    members = [
        i for i, e in enumerate(universe.elements)
        if e.domain() == points and e.image() == points
    ]
    bijection = {}
    if k == universe.n:
        for i in members:
            bijection[i] = universe.elements[i].images
        group = PermGroup(universe.n, bijection.values())
    else:
        pos = {p: i + 1 for i, p in enumerate(points)}
        for i in members:
            e = universe.elements[i]
            bijection[i] = tuple(pos[e.images[p - 1]] for p in points)
        group = PermGroup(k, bijection.values())
    if len(group) != len(members):
        raise InvariantViolation("H-class does not map bijectively onto its group")
    return group, bijection


def apply_mu(sigma, mu):
    """Permute the image letters of sigma: with domain a_1 < ... < a_k and
    b_i = sigma(a_i), the result sends a_i to b_mu(i)."""
    points = sigma.domain()
    if len(mu) != len(points):
        raise ValueError(
            f"permutation of size {len(mu)} cannot act on rank {len(points)}"
        )
    letters = [sigma.images[p - 1] for p in points]
    return PartialInjection.from_pairs(
        sigma.n, ((p, letters[mu[i] - 1]) for i, p in enumerate(points))
    )


def j_order_dot(green):
    """DOT digraph of the J-class order (edges are covering relations)."""
    meta = green.j_meta
    m = green.universe.n // 2
    family = green.universe.family
    count = len(meta)
    below = [
        [a != b and _j_below(meta[a], meta[b], m, family) for b in range(count)]
        for a in range(count)
    ]
    lines = ["digraph j_order {", "  rankdir=BT;"]
    for c, (k, t) in enumerate(meta):
        label = f"rank {k}" + (f" type {t}" if t else "")
        lines.append(f'  j{c} [label="{label}"];')
    for a in range(count):
        for b in range(count):
            if below[a][b] and not any(below[a][c] and below[c][b] for c in range(count)):
                lines.append(f"  j{a} -> j{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def green_report(universe, green=None):
    """Counts, formula comparison, and discrepancies, ready for JSON."""
    green = green or green_partition(universe)
    m = universe.n // 2
    counts = {}
    for rel in ("L", "R", "H", "J"):
        sizes = green.class_sizes(rel)
        counts[rel] = {"classes": green.num_classes(rel), "sizes": sorted(sizes)}
    report = {
        "family": universe.family,
        "n": universe.n,
        "size": len(universe),
        "classes": {rel: green.ids(rel).tolist() for rel in ("L", "R", "H", "J")},
        "counts": counts,
        "formulas": None,
        "discrepancies": [],
    }
    if universe.family != "OR":
        return report
    formulas = class_count_formulas(m)
    report["formulas"] = {
        key: ({str(k): v for k, v in val.items()} if isinstance(val, dict) else val)
        for key, val in formulas.items()
    }
    discrepancies = []
    for rel, key in (("L", "l_class_count"), ("R", "r_class_count"),
                     ("H", "h_class_count"), ("J", "j_class_count")):
        if green.num_classes(rel) != formulas[key]:
            discrepancies.append({
                "kind": f"{rel}_class_count",
                "formula": formulas[key],
                "observed": green.num_classes(rel),
            })
    per_class = sorted(
        int((green.j_ids == c).sum())
        for c, (k, _) in enumerate(green.j_meta) if k == m
    )
    entry = formulas["d_class_size_by_rank"][m]
    discrepancies.append({
        "kind": "rank_m_d_class_size",
        "combined_formula": entry["combined"],
        "per_class_formula": entry["per_class"],
        "observed_per_class": per_class,
        "note": "the combined closed form counts the two half-rank classes "
                "together; each class separately has the per_class size",
    })
    report["discrepancies"] = discrepancies
    return report
