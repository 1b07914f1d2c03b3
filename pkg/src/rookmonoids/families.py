"""Constructors for the predicted congruence families and the verifier
that diffs them against the brute-force congruence lattice.

Every family fixes one rank stratum: everything below it collapses into
the zero class, the stratum itself splits into orbits of a normal subgroup
acting inside H-classes, and everything above stays singleton.  The
orthogonal monoid adds per-type variants at half rank and, at degree 4
only, two extra congruences that pair up the four units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .congruences import (
    DEFAULT_LATTICE_LIMIT,
    NormalSubgroupList,
    Partition,
    PermGroup,
    congruence_lattice,
    is_congruence,
    normal_subgroups,
    perm_mul,
    symmetric_group,
)
from .core import (
    InvariantViolation,
    PartialInjection,
    ResourceLimitError,
    TYPE_I,
    TYPE_II,
)
from .green import enumerate_ideals

TAGS = ("OR_eqN", "OR_eqN1N2", "OR_eqI", "OR_eqII", "OR_eq1", "OR_eq2", "SR_eqN")


@dataclass(frozen=True)
class FamilySpec:
    """Which family a congruence came from, with its parameters."""

    tag: str
    k: int | None = None
    n_label: str | None = None
    n1_label: str | None = None
    n2_label: str | None = None

    def to_json(self):
        out = {"tag": self.tag}
        for name in ("k", "n_label", "n1_label", "n2_label"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def _require_family(universe, family):
    if universe.family != family:
        raise ValueError(f"expected a {family} universe, got {universe.family}")


def _as_subgroup(parent, subgroup):
    sub = frozenset(tuple(int(v) for v in p) for p in subgroup)
    if not parent.is_normal(sub):
        raise ValueError("subgroup is not normal in its parent group")
    return sub


def _position_mu(universe, base_idx, idx):
    """Coordinates of an H-class member relative to the base element:
    the permutation carrying the base's image letters to the member's."""
    base = universe.elements[base_idx]
    elem = universe.elements[idx]
    points = base.domain()
    letters = [base.images[p - 1] for p in points]
    pos = {v: i + 1 for i, v in enumerate(letters)}
    return tuple(pos[elem.images[p - 1]] for p in points)


def _h_blocks(universe, rank, mtype=None):
    blocks = {}
    for i in np.flatnonzero(universe.ranks == rank).tolist():
        if mtype is not None and universe.mtypes[i] != mtype:
            continue
        e = universe.elements[i]
        blocks.setdefault((e.domain(), e.image()), []).append(i)
    return blocks


def _coset_groups(universe, block, subgroup):
    """Split one H-class into orbits of a normal subgroup of its group."""
    base = min(block)
    groups = {}
    for i in block:
        mu = _position_mu(universe, base, i)
        coset_key = min(perm_mul(mu, x) for x in subgroup)
        groups.setdefault(coset_key, []).append(i)
    return groups.values()


def _merge(ids, group):
    target = min(group)
    for i in group:
        ids[i] = target


def _finish(universe, ids, validate):
    part = Partition(universe, ids)
    if validate and not is_congruence(universe, part):
        raise InvariantViolation("constructed family partition is not a congruence")
    return part


def build_eq_N_or(universe, k, subgroup, *, validate=True):
    """Rank-k family on OR, 1 <= k <= m-1: one class below rank k, subgroup
    orbits inside rank-k H-classes, singletons above."""
    _require_family(universe, "OR")
    m = universe.n // 2
    if not 1 <= k <= m - 1:
        raise ValueError(f"level must satisfy 1 <= k <= {m - 1}, got {k}")
    sub = _as_subgroup(symmetric_group(k), subgroup)
    ids = np.arange(len(universe), dtype=np.int64)
    _merge(ids, np.flatnonzero(universe.ranks < k).tolist())
    for block in _h_blocks(universe, k).values():
        for group in _coset_groups(universe, block, sub):
            _merge(ids, group)
    return _finish(universe, ids, validate)


def build_eq_N1N2(universe, sub1, sub2, *, validate=True):
    """Half-rank family on OR: one class below rank m, per-type subgroup
    orbits at rank m, unit singletons."""
    _require_family(universe, "OR")
    m = universe.n // 2
    parent = symmetric_group(m)
    subs = {TYPE_I: _as_subgroup(parent, sub1), TYPE_II: _as_subgroup(parent, sub2)}
    ids = np.arange(len(universe), dtype=np.int64)
    _merge(ids, np.flatnonzero(universe.ranks < m).tolist())
    for mtype, sub in subs.items():
        for block in _h_blocks(universe, m, mtype).values():
            for group in _coset_groups(universe, block, sub):
                _merge(ids, group)
    return _finish(universe, ids, validate)


def build_eq_type(universe, variant, subgroup, *, validate=True):
    """Typed half-rank family on OR: the zero class swallows everything of
    rank < m plus the whole opposite-type stratum; the named type splits
    into subgroup orbits; units stay singletons."""
    _require_family(universe, "OR")
    if variant not in (TYPE_I, TYPE_II):
        raise ValueError(f"variant must be {TYPE_I!r} or {TYPE_II!r}, got {variant!r}")
    m = universe.n // 2
    sub = _as_subgroup(symmetric_group(m), subgroup)
    other = TYPE_II if variant == TYPE_I else TYPE_I
    ids = np.arange(len(universe), dtype=np.int64)
    swallowed = [
        i for i in range(len(universe))
        if universe.ranks[i] < m
        or (universe.ranks[i] == m and universe.mtypes[i] == other)
    ]
    _merge(ids, swallowed)
    for block in _h_blocks(universe, m, variant).values():
        for group in _coset_groups(universe, block, sub):
            _merge(ids, group)
    return _finish(universe, ids, validate)


def build_eq_special(universe, which, *, validate=True):
    """The two degree-4 specials on OR: units pair up, one half-rank type
    collapses into the zero class, the other splits into full H-classes."""
    _require_family(universe, "OR")
    if universe.n != 4:
        raise ValueError(f"special congruences exist only at degree 4, got {universe.n}")
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which}")
    ident = 1
    d1 = universe.element_index(PartialInjection(4, (2, 1, 4, 3)))
    d2 = universe.element_index(PartialInjection(4, (3, 4, 1, 2)))
    d12 = universe.element_index(PartialInjection(4, (4, 3, 2, 1)))
    if which == 1:
        unit_pairs = [(ident, d1), (d2, d12)]
        swallowed_type, kept_type = TYPE_II, TYPE_I
    else:
        unit_pairs = [(ident, d2), (d1, d12)]
        swallowed_type, kept_type = TYPE_I, TYPE_II
    ids = np.arange(len(universe), dtype=np.int64)
    swallowed = [
        i for i in range(len(universe))
        if universe.ranks[i] < 2
        or (universe.ranks[i] == 2 and universe.mtypes[i] == swallowed_type)
    ]
    _merge(ids, swallowed)
    for block in _h_blocks(universe, 2, kept_type).values():
        _merge(ids, block)
    for pair in unit_pairs:
        _merge(ids, pair)
    return _finish(universe, ids, validate)


def build_eq_N_sr(universe, k, subgroup, *, validate=True):
    """Rank-k family on SR, k in 1..m or k = n: one class below rank k,
    subgroup orbits inside rank-k H-classes (the unit group acts at rank
    n), singletons above."""
    _require_family(universe, "SR")
    m = universe.n // 2
    n = universe.n
    if k == n:
        parent = PermGroup(n, universe.unit_permutations())
    elif 1 <= k <= m:
        parent = symmetric_group(k)
    else:
        raise ValueError(f"level must lie in 1..{m} or be {n}, got {k}")
    sub = _as_subgroup(parent, subgroup)
    ids = np.arange(len(universe), dtype=np.int64)
    _merge(ids, np.flatnonzero(universe.ranks < k).tolist())
    for block in _h_blocks(universe, k).values():
        for group in _coset_groups(universe, block, sub):
            _merge(ids, group)
    return _finish(universe, ids, validate)


def _labelled(ns: NormalSubgroupList):
    """Deterministic short labels: 1, full, alt (even permutations), or
    order<d> with a #i disambiguator when several share an order."""
    parent = ns.parent
    even = frozenset(p for p in parent.elements if _is_even(p))
    generic = [
        sub for sub in ns.subgroups
        if 1 < len(sub) < len(parent) and sub != even
    ]
    clashes = {}
    for sub in generic:
        clashes[len(sub)] = clashes.get(len(sub), 0) + 1
    seen = {}
    out = []
    for sub in ns.subgroups:
        if len(sub) == 1:
            label = "1"
        elif len(sub) == len(parent):
            label = "full"
        elif sub == even:
            label = "alt"
        else:
            i = seen[len(sub)] = seen.get(len(sub), 0) + 1
            label = f"order{len(sub)}" + (f"#{i}" if clashes[len(sub)] > 1 else "")
        out.append((label, sub))
    return out


def _is_even(p):
    inversions = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return inversions % 2 == 0


def predicted_congruences(universe):
    """Instantiate every family over every admissible parameter, plus the
    universal partition; dedupe by partition, keeping all specs."""
    if universe.family not in ("OR", "SR"):
        raise ValueError(f"no predicted families for family {universe.family}")
    m = universe.n // 2
    n = universe.n
    pairs = []
    if universe.family == "OR":
        for k in range(1, m):
            for label, sub in _labelled(normal_subgroups(symmetric_group(k))):
                pairs.append((
                    FamilySpec("OR_eqN", k=k, n_label=label),
                    build_eq_N_or(universe, k, sub),
                ))
        sm = _labelled(normal_subgroups(symmetric_group(m)))
        for label1, sub1 in sm:
            for label2, sub2 in sm:
                pairs.append((
                    FamilySpec("OR_eqN1N2", n1_label=label1, n2_label=label2),
                    build_eq_N1N2(universe, sub1, sub2),
                ))
        for variant, tag in ((TYPE_I, "OR_eqI"), (TYPE_II, "OR_eqII")):
            for label, sub in sm:
                pairs.append((
                    FamilySpec(tag, k=m, n_label=label),
                    build_eq_type(universe, variant, sub),
                ))
        if n == 4:
            pairs.append((FamilySpec("OR_eq1"), build_eq_special(universe, 1)))
            pairs.append((FamilySpec("OR_eq2"), build_eq_special(universe, 2)))
    else:
        for k in range(1, m + 1):
            for label, sub in _labelled(normal_subgroups(symmetric_group(k))):
                pairs.append((
                    FamilySpec("SR_eqN", k=k, n_label=label),
                    build_eq_N_sr(universe, k, sub),
                ))
        unit_group = PermGroup(n, universe.unit_permutations())
        for label, sub in _labelled(normal_subgroups(unit_group)):
            pairs.append((
                FamilySpec("SR_eqN", k=n, n_label=label),
                build_eq_N_sr(universe, n, sub),
            ))
    pairs.append((FamilySpec("universal"), Partition.universal(universe)))

    by_key = {}
    order = []
    for spec, part in pairs:
        if part.key not in by_key:
            by_key[part.key] = (part, [])
            order.append(part.key)
        by_key[part.key][1].append(spec)
    merged = [(by_key[k][0], tuple(by_key[k][1])) for k in order]
    merged.sort(key=lambda item: (-item[0].num_classes, item[0].key))
    return merged


@dataclass
class ClassificationReport:
    """Diff between the predicted congruences and the brute-force lattice."""

    family: str
    n: int
    lattice_size: int
    matched: list
    predicted_not_found: list
    found_not_predicted: list
    notes: list

    @property
    def ok(self):
        return not self.predicted_not_found

    def to_json(self):
        return {
            "family": self.family,
            "n": self.n,
            "lattice_size": self.lattice_size,
            "matched": self.matched,
            "predicted_not_found": self.predicted_not_found,
            "found_not_predicted": self.found_not_predicted,
            "notes": self.notes,
        }


def _annotate_unmatched(universe, part, lattice_index, ideal_by_members):
    zero_class = part.class_of(0)
    descriptor = ideal_by_members.get(tuple(zero_class))
    units = set(universe.units())
    unit_classes = []
    seen = set()
    for u in sorted(units):
        cid = int(part.ids[u])
        if cid not in seen:
            seen.add(cid)
            unit_classes.append(part.class_of(u))
    tag = ""
    if descriptor is not None and descriptor.kind == "union" and all(
        set(c) <= units for c in unit_classes
    ):
        tag = "rees_over_complement_of_units"
    return {
        "lattice_index": lattice_index,
        "num_classes": part.num_classes,
        "classes": part.classes(),
        "zero_class_kind": descriptor.kind if descriptor else "not_an_enumerated_ideal",
        "zero_class_k": descriptor.k if descriptor else None,
        "zero_class_size": len(zero_class),
        "unit_classes": unit_classes,
        "tag": tag,
    }


def verify_classification(universe, *, max_elements=None, force=False, threads=1):
    """Enumerate the full congruence lattice and diff it against the
    predicted families.  Everything unmatched is reported, never dropped."""
    budget = DEFAULT_LATTICE_LIMIT if max_elements is None else max_elements
    if not force and len(universe) > budget:
        raise ResourceLimitError(
            f"congruence lattice over {len(universe)} elements exceeds the"
            f" budget {budget}; pass force=True (or --force-budget) to override"
        )
    predictions = predicted_congruences(universe)
    kwargs = {"force": force, "threads": threads}
    if max_elements is not None:
        kwargs["max_elements"] = max_elements
    lattice = congruence_lattice(universe, **kwargs)
    lattice_keys = {part.key: i for i, part in enumerate(lattice)}
    ideal_by_members = {d.members: d for d in enumerate_ideals(universe)}

    matched = []
    predicted_not_found = []
    pred_by_key = {}
    for part, specs in predictions:
        pred_by_key[part.key] = specs
        entry = {
            "specs": [s.to_json() for s in specs],
            "num_classes": part.num_classes,
        }
        if part.key in lattice_keys:
            entry["lattice_index"] = lattice_keys[part.key]
            matched.append(entry)
        else:
            predicted_not_found.append(entry)

    found_not_predicted = [
        _annotate_unmatched(universe, part, i, ideal_by_members)
        for i, part in enumerate(lattice)
        if part.key not in pred_by_key
    ]

    notes = [
        "typed families are built with the zero class equal to everything of "
        "rank < m plus the opposite-type half-rank stratum; the named type "
        "splits into subgroup orbits inside H-classes and units stay singletons",
    ]
    single_class = [p for p in lattice if p.num_classes == 1]
    if len(single_class) != 1:
        notes.append(
            f"unexpected: {len(single_class)} lattice members have a single class"
        )
    else:
        notes.append("the only single-class lattice member is the universal congruence")

    covered = len(matched) + len(found_not_predicted)
    if covered != len(lattice):
        raise InvariantViolation("classification report does not cover the lattice")

    return ClassificationReport(
        family=universe.family,
        n=universe.n,
        lattice_size=len(lattice),
        matched=matched,
        predicted_not_found=predicted_not_found,
        found_not_predicted=found_not_predicted,
        notes=notes,
    )
