"""Fusion systems on finite p-groups as explicit morphism tables.

A fusion system is stored extensionally: for every subgroup P of the base
group S it keeps the set of injective homomorphisms P -> S that belong to the
system, each as the tuple of images of P's sorted elements.  Morphism sets
between arbitrary pairs (P, Q) are derived views, namely the stored maps with
image inside Q; that identification is forced by the closure axioms
(restriction, inverse on the image, composition with inclusions).
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .errors import (DomainError, InvalidGenerator, InvalidMorphism, NotAPGroup,
                     ParseError)
from .groups import (FiniteGroup, GroupMap, Subgroup, _subgroup_unchecked,
                     direct_square, lattice, prime_power_decomposition)

__all__ = [
    "FusionSystem",
    "inner_fusion",
    "close_fusion",
    "f_classes",
    "out_reps",
    "fusion_of_subgroup",
    "product_conjugate",
    "product_fusion_classes",
    "fusion_class_partition",
    "closure_violations",
    "parse_fusion_generators",
]


def _require_p_group(s: FiniteGroup) -> None:
    if s.order > 1 and s.prime_power is None:
        raise NotAPGroup(f"order {s.order} is not a prime power")


def _inner_tuples(base: FiniteGroup, sub: Subgroup) -> set[tuple[int, ...]]:
    """All conjugation maps c_x restricted to sub, as image tuples."""
    return {tuple(base.conj(x, u) for u in sub.elements) for x in base.elements}


class FusionSystem:
    """A fusion system on a p-group, closed under the category axioms.

    Instances are produced by :func:`inner_fusion`, :func:`close_fusion`,
    :func:`fusion_of_subgroup` and the realization pipeline; the constructor
    checks that every stored tuple is an injective homomorphism and that all
    inner conjugations are present, while full closure is the factories'
    responsibility (and is tested via :func:`closure_violations`).
    """

    def __init__(self, base: FiniteGroup, maps_to_s: Mapping[Subgroup, Iterable[tuple[int, ...]]]):
        _require_p_group(base)
        lat = lattice(base)
        t = base.table
        table: dict[Subgroup, frozenset[tuple[int, ...]]] = {}
        for sub in lat.subgroups():
            try:
                tuples = frozenset(tuple(m) for m in maps_to_s[sub])
            except KeyError:
                raise DomainError(f"missing morphism set for subgroup {list(sub.elements)}") from None
            pos = {u: i for i, u in enumerate(sub.elements)}
            for tup in tuples:
                if len(set(tup)) != len(tup):
                    raise InvalidMorphism(f"stored map on {list(sub.elements)} is not injective")
                for u in sub.elements:
                    for v in sub.elements:
                        if tup[pos[t[u][v]]] != t[tup[pos[u]]][tup[pos[v]]]:
                            raise InvalidMorphism(f"stored map on {list(sub.elements)} is not a homomorphism")
            if not _inner_tuples(base, sub) <= tuples:
                raise DomainError(f"morphism set on {list(sub.elements)} misses an inner conjugation")
            table[sub] = tuples
        self.base = base
        self._maps = table
        self._hash = hash((base, tuple(sorted((sub.elements, tuple(sorted(ms))) for sub, ms in table.items()))))
        self._product_classes: list[list[int]] | None = None

    @property
    def p(self) -> int:
        """The underlying prime; the one-element base reports 2 by convention."""
        return self.base.prime_power[0] if self.base.prime_power else 2

    def subgroups(self) -> list[Subgroup]:
        return lattice(self.base).subgroups()

    def hom_tuples(self, sub: Subgroup) -> frozenset[tuple[int, ...]]:
        """Morphisms sub -> S as image tuples over sub's sorted elements."""
        try:
            return self._maps[sub]
        except KeyError:
            raise DomainError(f"{list(sub.elements)} is not a subgroup of the base group") from None

    def hom_set(self, domain: Subgroup, codomain: Subgroup) -> list[GroupMap]:
        """Hom(domain, codomain): stored maps whose image lands inside the codomain."""
        cset = codomain.as_set
        out = []
        for tup in sorted(self.hom_tuples(domain)):
            if set(tup) <= cset:
                out.append(GroupMap(domain, codomain, dict(zip(domain.elements, tup))))
        return out

    def automorphism_tuples(self) -> frozenset[tuple[int, ...]]:
        return self.hom_tuples(self.base.full_subgroup())

    def contains(self, phi: GroupMap) -> bool:
        return phi.domain in self._maps and phi.image_tuple in self._maps[phi.domain]

    def morphism_count(self) -> int:
        return sum(len(v) for v in self._maps.values())

    def __eq__(self, other):
        if not isinstance(other, FusionSystem):
            return NotImplemented
        return self.base == other.base and self._maps == other._maps

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FusionSystem(order={self.base.order}, morphisms={self.morphism_count()})"


def inner_fusion(s: FiniteGroup) -> FusionSystem:
    """The fusion system of S acting on itself: only conjugation maps."""
    _require_p_group(s)
    return FusionSystem(s, {sub: _inner_tuples(s, sub) for sub in lattice(s).subgroups()})


def close_fusion(s: FiniteGroup, generators: Sequence[GroupMap] = ()) -> FusionSystem:
    """Least fusion system on S containing the inner maps and the generators.

    Fixed-point iteration over the closure rules in a fixed order
    (compositions, restrictions, inverses of induced isomorphisms) until no
    morphism set grows; termination is guaranteed because every set is
    bounded by the finite set of injective homomorphisms.
    """
    _require_p_group(s)
    lat = lattice(s)
    subs = lat.subgroups()
    pos = {sub.elements: k for k, sub in enumerate(subs)}
    maps: list[set[tuple[int, ...]]] = [set(_inner_tuples(s, sub)) for sub in subs]
    for gen in generators:
        if not isinstance(gen, GroupMap) or gen.domain.group != s:
            raise InvalidGenerator("generator must be a GroupMap between subgroups of S")
        maps[pos[gen.domain.elements]].add(gen.image_tuple)

    # for each subgroup, the positions its sub-subgroups occupy inside it
    contained: list[list[tuple[int, tuple[int, ...]]]] = []
    for k, sub in enumerate(subs):
        idx = {u: i for i, u in enumerate(sub.elements)}
        inner = [(k2, tuple(idx[u] for u in sub2.elements))
                 for k2, sub2 in enumerate(subs)
                 if k2 != k and sub2.as_set <= sub.as_set]
        contained.append(inner)

    changed = True
    while changed:
        changed = False
        for k, sub in enumerate(subs):
            new = set()
            for tup in maps[k]:
                img = tuple(sorted(tup))
                ipos = {u: i for i, u in enumerate(img)}
                for psi in maps[pos[img]]:
                    comp = tuple(psi[ipos[v]] for v in tup)
                    if comp not in maps[k]:
                        new.add(comp)
            if new:
                maps[k] |= new
                changed = True
        for k, sub in enumerate(subs):
            for k2, positions in contained[k]:
                tgt = maps[k2]
                new = {r for tup in maps[k] if (r := tuple(tup[i] for i in positions)) not in tgt}
                if new:
                    tgt |= new
                    changed = True
        for k, sub in enumerate(subs):
            pending: dict[int, set[tuple[int, ...]]] = {}
            for tup in maps[k]:
                img = tuple(sorted(tup))
                k2 = pos[img]
                back = dict(zip(tup, sub.elements))
                itup = tuple(back[v] for v in img)
                if itup not in maps[k2]:
                    pending.setdefault(k2, set()).add(itup)
            for k2, extra in pending.items():
                maps[k2] |= extra
                changed = True

    return FusionSystem(s, {sub: frozenset(maps[k]) for k, sub in enumerate(subs)})


def f_classes(fusion: FusionSystem) -> list[list[Subgroup]]:
    """Partition of the subgroups of S into fusion-isomorphism classes.

    P and P' fall together exactly when some stored morphism on P has image
    P'; the partition refines-or-equals conjugacy in S since all inner maps
    are present.
    """
    subs = fusion.subgroups()
    pos = {sub.elements: k for k, sub in enumerate(subs)}
    parent = list(range(len(subs)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for k, sub in enumerate(subs):
        for tup in fusion.hom_tuples(sub):
            ra, rb = find(k), find(pos[tuple(sorted(tup))])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups: dict[int, list[int]] = {}
    for k in range(len(subs)):
        groups.setdefault(find(k), []).append(k)
    return [[subs[i] for i in members] for _, members in sorted(groups.items())]


def out_reps(fusion: FusionSystem) -> list[GroupMap]:
    """Coset representatives of the inner automorphisms inside the system's
    automorphisms of S, with the identity coset first and represented by id."""
    s = fusion.base
    full = s.full_subgroup()
    ident = tuple(full.elements)

    def coset_key(tup: tuple[int, ...]) -> tuple[int, ...]:
        return min(tuple(s.conj(x, v) for v in tup) for x in s.elements)

    by_key: dict[tuple[int, ...], tuple[int, ...]] = {}
    for tup in sorted(fusion.hom_tuples(full)):
        by_key.setdefault(coset_key(tup), tup)
    id_key = coset_key(ident)
    ordered = [ident] + [by_key[k] for k in sorted(by_key) if k != id_key]
    return [GroupMap(full, full, dict(zip(full.elements, tup))) for tup in ordered]


def fusion_of_subgroup(group: FiniteGroup, sub: Subgroup) -> FusionSystem:
    """The fusion system induced on sub by conjugation inside the ambient group.

    The base is sub relabelled to 0..|sub|-1 (identity stays at 0); a map
    P -> S belongs to the system when some ambient element conjugates P into
    sub realizing it.
    """
    if sub.group != group:
        raise DomainError("subgroup belongs to a different group")
    if len(sub) > 1 and prime_power_decomposition(len(sub)) is None:
        raise NotAPGroup(f"subgroup order {len(sub)} is not a prime power")
    elems = sub.elements
    posn = {g: i for i, g in enumerate(elems)}
    base = FiniteGroup([[posn[group.table[a][b]] for b in elems] for a in elems])
    sset = sub.as_set
    maps: dict[Subgroup, set[tuple[int, ...]]] = {}
    for p_sub in lattice(base).subgroups():
        orig = [elems[u] for u in p_sub.elements]
        acc = set()
        for x in group.elements:
            imgs = [group.conj(x, u) for u in orig]
            if all(v in sset for v in imgs):
                acc.add(tuple(posn[v] for v in imgs))
        maps[p_sub] = acc
    return FusionSystem(base, maps)


def product_conjugate(fusion: FusionSystem, d: Subgroup, e: Subgroup) -> bool:
    """Conjugacy of subgroups of S x S in the product of the system with inner fusion.

    True exactly when some stored morphism phi on the first projection of d
    and some x in S satisfy (phi x c_x)(d) = e, with phi acting on first
    coordinates and conjugation by x on second coordinates.
    """
    s = fusion.base
    gamma = direct_square(s).group
    if d.group != gamma or e.group != gamma:
        raise DomainError("arguments must be subgroups of S x S")
    if len(d) != len(e):
        return False
    n = s.order
    dec = [divmod(x, n) for x in d.elements]
    p1 = tuple(sorted({a for a, _ in dec}))
    p1sub = _subgroup_unchecked(s, p1)
    eset = e.as_set
    for tup in fusion.hom_tuples(p1sub):
        fmap = dict(zip(p1, tup))
        for x in s.elements:
            if all(fmap[a] * n + s.conj(x, b) in eset for a, b in dec):
                return True
    return False


def _product_class_partition(fusion: FusionSystem) -> list[list[int]]:
    """Class ids of S x S grouped by product-fusion conjugacy (cached per system)."""
    if fusion._product_classes is not None:
        return fusion._product_classes
    s = fusion.base
    n = s.order
    glat = lattice(direct_square(s).group)
    slat = lattice(s)
    parent = list(range(glat.num_classes))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in range(glat.num_classes):
        rep = glat.class_rep_tuple(c)
        dec = [divmod(x, n) for x in rep]
        p1 = tuple(sorted({a for a, _ in dec}))
        p2 = tuple(sorted({b for _, b in dec}))
        seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
        for tup in fusion.hom_tuples(slat.subgroup_at(slat.subgroup_index(p1))):
            fmap = dict(zip(p1, tup))
            for x in s.elements:
                ctup = tuple(s.conj(x, b) for b in p2)
                if (tup, ctup) in seen:
                    continue
                seen.add((tup, ctup))
                cmap = dict(zip(p2, ctup))
                img = tuple(sorted(fmap[a] * n + cmap[b] for a, b in dec))
                union(c, glat.class_id(img))

    groups: dict[int, list[int]] = {}
    for c in range(glat.num_classes):
        groups.setdefault(find(c), []).append(c)
    out = [members for _, members in sorted(groups.items())]
    fusion._product_classes = out
    return out


def product_fusion_classes(fusion: FusionSystem) -> list[list[Subgroup]]:
    """Partition of the subgroup classes of S x S under product-fusion conjugacy."""
    glat = lattice(direct_square(fusion.base).group)
    return [[glat.class_rep(c) for c in members] for members in _product_class_partition(fusion)]


def fusion_class_partition(fusion: FusionSystem) -> list[list[Subgroup]]:
    """Partition of the S-conjugacy classes of subgroups by fusion conjugacy."""
    slat = lattice(fusion.base)
    out = []
    for members in f_classes(fusion):
        ids = sorted({slat.class_id_of(sub) for sub in members})
        out.append([slat.class_rep(c) for c in ids])
    return out


def closure_violations(fusion: FusionSystem) -> list[str]:
    """Extensional check of the closure axioms; returns human-readable findings."""
    s = fusion.base
    subs = fusion.subgroups()
    pos = {sub.elements: k for k, sub in enumerate(subs)}
    out: list[str] = []
    for sub in subs:
        tuples = fusion.hom_tuples(sub)
        if not _inner_tuples(s, sub) <= tuples:
            out.append(f"missing inner map on {list(sub.elements)}")
        for tup in tuples:
            img = tuple(sorted(tup))
            img_sub = subs[pos[img]]
            back = dict(zip(tup, sub.elements))
            if tuple(back[v] for v in img) not in fusion.hom_tuples(img_sub):
                out.append(f"missing inverse of a map on {list(sub.elements)}")
            ipos = {u: i for i, u in enumerate(img)}
            for psi in fusion.hom_tuples(img_sub):
                if tuple(psi[ipos[v]] for v in tup) not in tuples:
                    out.append(f"missing composite of maps on {list(sub.elements)}")
            idx = {u: i for i, u in enumerate(sub.elements)}
            for sub2 in subs:
                if sub2 != sub and sub2.as_set <= sub.as_set:
                    if tuple(tup[idx[u]] for u in sub2.elements) not in fusion.hom_tuples(sub2):
                        out.append(f"missing restriction to {list(sub2.elements)}")
    return out


_GEN_PAIR = re.compile(r"(\d+)\s*->\s*(\d+)$")


def parse_fusion_generators(text: str, s: FiniteGroup) -> list[GroupMap]:
    """Parse generator lines ``gen: a->b, c->d, ...`` into maps into S.

    Each line gives the full element map on a domain that must be a subgroup;
    syntax problems raise :class:`ParseError` and mathematically invalid
    generators raise :class:`InvalidGenerator`.
    """
    gens: list[GroupMap] = []
    full = s.full_subgroup()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.startswith("gen:"):
            raise ParseError("expected 'gen: a->b, ...'", ln)
        mapping: dict[int, int] = {}
        for part in line[4:].split(","):
            part = part.strip()
            if not part:
                continue
            m = _GEN_PAIR.match(part)
            if not m:
                raise ParseError(f"bad pair {part!r}", ln)
            a, b = int(m.group(1)), int(m.group(2))
            if a in mapping:
                raise ParseError(f"duplicate source element {a}", ln)
            mapping[a] = b
        if not mapping:
            raise ParseError("empty generator", ln)
        try:
            dom = s.subgroup(mapping.keys())
            gens.append(GroupMap(dom, full, mapping))
        except (DomainError, InvalidMorphism) as exc:
            raise InvalidGenerator(f"line {ln}: {exc}") from exc
    return gens
