"""Finite groups as verified Cayley tables.

Everything downstream (fusion systems, bisets, realization) manipulates plain
element indices into a multiplication table, so this module is the only place
that knows raw group arithmetic.  Tables are verified in full on construction;
subgroup and morphism objects revalidate their own invariants when built
through the public constructors.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, InvalidMorphism, NotAGroup, ParseError

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "GroupMap",
    "SubgroupLattice",
    "DirectSquare",
    "parse_group",
    "all_subgroups",
    "normalizer",
    "monomorphisms",
    "direct_square",
    "lattice",
    "prime_power_decomposition",
]


def prime_power_decomposition(n: int) -> tuple[int, int] | None:
    """Return (p, k) with n == p**k and k >= 1, or None when n is not a prime power."""
    if n < 2:
        return None
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


class FiniteGroup:
    """A finite group given by its full multiplication table.

    Elements are 0..n-1 and element 0 is the identity.  Construction checks
    that rows and columns are permutations, that 0 is a two-sided identity,
    that every element has a two-sided inverse, and that the product is
    associative; a violation raises :class:`NotAGroup` naming the failed
    axiom together with a witness.
    """

    __slots__ = ("order", "table", "inv", "prime_power", "_hash", "_abelian", "_orders")

    def __init__(self, table: Sequence[Sequence[int]]):
        n = len(table)
        if n == 0:
            raise NotAGroup("shape", None, "empty table")
        rows = []
        for i, row in enumerate(table):
            r = tuple(int(x) for x in row)
            if len(r) != n:
                raise NotAGroup("shape", (i,), f"row {i} has {len(r)} entries, expected {n}")
            rows.append(r)
        ref = list(range(n))
        for i, r in enumerate(rows):
            if sorted(r) != ref:
                raise NotAGroup("row-permutation", (i,), f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if sorted(r[j] for r in rows) != ref:
                raise NotAGroup("column-permutation", (j,), f"column {j} is not a permutation of 0..{n - 1}")
        for i in range(n):
            if rows[0][i] != i or rows[i][0] != i:
                raise NotAGroup("identity", (i,), "element 0 is not a two-sided identity")
        inv = [0] * n
        for i in range(n):
            j = rows[i].index(0)
            if rows[j][i] != 0:
                raise NotAGroup("inverse", (i,), f"element {i} has no two-sided inverse")
            inv[i] = j
        rng = range(n)
        for i in rng:
            ri = rows[i]
            for j in rng:
                rj = rows[j]
                left = rows[ri[j]]
                if left != tuple(ri[rj[k]] for k in rng):
                    for k in rng:
                        if left[k] != ri[rj[k]]:
                            raise NotAGroup("associativity", (i, j, k), f"({i}*{j})*{k} != {i}*({j}*{k})")
        self.order = n
        self.table = tuple(rows)
        self.inv = tuple(inv)
        self.prime_power = prime_power_decomposition(n)
        self._hash = hash(self.table)
        self._abelian: bool | None = None
        self._orders: tuple[int, ...] | None = None

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conj(self, x: int, u: int) -> int:
        """x * u * x^-1."""
        return self.table[self.table[x][u]][self.inv[x]]

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            t = self.table
            self._abelian = all(t[i][j] == t[j][i] for i in self.elements for j in self.elements)
        return self._abelian

    def element_order(self, g: int) -> int:
        if self._orders is None:
            orders = []
            for x in self.elements:
                k, y = 1, x
                while y != 0:
                    y = self.table[y][x]
                    k += 1
                orders.append(k)
            self._orders = tuple(orders)
        return self._orders[g]

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup(self, elements)

    def trivial_subgroup(self) -> "Subgroup":
        return _subgroup_unchecked(self, (0,))

    def full_subgroup(self) -> "Subgroup":
        return _subgroup_unchecked(self, tuple(self.elements))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


class Subgroup:
    """A subgroup of a :class:`FiniteGroup`, stored as a sorted element tuple."""

    __slots__ = ("group", "elements", "_set", "_hash")

    def __init__(self, group: FiniteGroup, elements: Iterable[int]):
        elems = tuple(sorted({int(x) for x in elements}))
        if not elems or elems[0] < 0 or elems[-1] >= group.order:
            raise DomainError("subgroup elements out of range")
        if 0 not in elems:
            raise DomainError("a subgroup must contain the identity 0")
        table = group.table
        eset = frozenset(elems)
        for a in elems:
            row = table[a]
            for b in elems:
                if row[b] not in eset:
                    raise DomainError(f"not closed under the product: {a}*{b} = {row[b]} escapes")
        assert group.order % len(elems) == 0
        self.group = group
        self.elements = elems
        self._set = eset
        self._hash = hash((group._hash, elems))

    @property
    def as_set(self) -> frozenset:
        return self._set

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._set

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.group == other.group and self._set <= other._set

    def conjugate(self, x: int) -> "Subgroup":
        g = self.group
        return _subgroup_unchecked(g, tuple(sorted(g.conj(x, u) for u in self.elements)))

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.elements == other.elements and (self.group is other.group or self.group == other.group)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subgroup({list(self.elements)})"


def _subgroup_unchecked(group: FiniteGroup, elems: tuple[int, ...]) -> Subgroup:
    """Internal fast path for element tuples already known to be subgroups."""
    s = object.__new__(Subgroup)
    s.group = group
    s.elements = elems
    s._set = frozenset(elems)
    s._hash = hash((group._hash, elems))
    return s


class GroupMap:
    """An injective homomorphism between subgroups of one group.

    ``images`` is the full element map on ``domain.elements``; injectivity,
    containment in the codomain and the homomorphism property are all checked
    at construction, after which the object is immutable.
    """

    __slots__ = ("domain", "codomain", "images", "_key")

    def __init__(self, domain: Subgroup, codomain: Subgroup, images: Mapping[int, int]):
        if domain.group != codomain.group:
            raise InvalidMorphism("domain and codomain must live in the same group")
        try:
            img = {u: int(images[u]) for u in domain.elements}
        except KeyError as exc:
            raise InvalidMorphism(f"no image given for element {exc.args[0]}") from None
        vals = tuple(img[u] for u in domain.elements)
        if len(set(vals)) != len(vals):
            raise InvalidMorphism("map is not injective")
        if not set(vals) <= codomain.as_set:
            raise InvalidMorphism("images are not contained in the codomain")
        t = domain.group.table
        for u in domain.elements:
            for v in domain.elements:
                if img[t[u][v]] != t[img[u]][img[v]]:
                    raise InvalidMorphism(f"not a homomorphism at ({u}, {v})")
        self.domain = domain
        self.codomain = codomain
        self.images = img
        self._key = (domain.group._hash, domain.elements, codomain.elements, vals)

    def __call__(self, u: int) -> int:
        try:
            return self.images[u]
        except KeyError:
            raise DomainError(f"{u} is not in the domain") from None

    @property
    def image_tuple(self) -> tuple[int, ...]:
        """Images of the sorted domain elements, in domain order."""
        return self._key[3]

    def image_subgroup(self) -> Subgroup:
        return _subgroup_unchecked(self.domain.group, tuple(sorted(self._key[3])))

    def is_identity(self) -> bool:
        return all(v == u for u, v in self.images.items())

    def restrict(self, sub: Subgroup) -> "GroupMap":
        if not sub.is_subgroup_of(self.domain):
            raise DomainError("restriction target is not a subgroup of the domain")
        return GroupMap(sub, self.codomain, {u: self.images[u] for u in sub.elements})

    def inverse(self) -> "GroupMap":
        return GroupMap(self.image_subgroup(), self.domain, {v: u for u, v in self.images.items()})

    def then(self, other: "GroupMap") -> "GroupMap":
        """other composed after self (self is applied first)."""
        if not set(self._key[3]) <= other.domain.as_set:
            raise DomainError("image is not contained in the domain of the second map")
        return GroupMap(self.domain, other.codomain, {u: other.images[v] for u, v in self.images.items()})

    @classmethod
    def identity(cls, sub: Subgroup) -> "GroupMap":
        return cls(sub, sub, {u: u for u in sub.elements})

    @classmethod
    def conjugation(cls, x: int, domain: Subgroup, codomain: Subgroup | None = None) -> "GroupMap":
        g = domain.group
        images = {u: g.conj(x, u) for u in domain.elements}
        if codomain is None:
            codomain = _subgroup_unchecked(g, tuple(sorted(images.values())))
        return cls(domain, codomain, images)

    def __eq__(self, other):
        if not isinstance(other, GroupMap):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        pairs = ",".join(f"{u}->{v}" for u, v in sorted(self.images.items()))
        return f"GroupMap({pairs})"


def parse_group(text: str) -> FiniteGroup:
    """Parse the group file format: a line ``order n`` followed by n rows of n indices.

    ``#`` starts a comment and blank lines are ignored.  Malformed input
    raises :class:`ParseError` with the offending line number; a well-formed
    table that is not a group raises :class:`NotAGroup`.
    """
    order = None
    rows: list[list[int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if order is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "order":
                raise ParseError("expected 'order n'", ln)
            try:
                order = int(parts[1])
            except ValueError:
                raise ParseError("order is not an integer", ln) from None
            if order < 1:
                raise ParseError("order must be positive", ln)
            continue
        if len(rows) == order:
            raise ParseError("unexpected content after the table", ln)
        parts = line.split()
        if len(parts) != order:
            raise ParseError(f"expected {order} entries, found {len(parts)}", ln)
        try:
            row = [int(p) for p in parts]
        except ValueError:
            raise ParseError("table entry is not an integer", ln) from None
        for x in row:
            if not 0 <= x < order:
                raise ParseError(f"table entry {x} out of range 0..{order - 1}", ln)
        rows.append(row)
    if order is None:
        raise ParseError("missing 'order n' header")
    if len(rows) != order:
        raise ParseError(f"expected {order} table rows, found {len(rows)}")
    return FiniteGroup(rows)


def _closure_in(table, seed: Iterable[int]) -> tuple[int, ...]:
    """Subgroup generated by ``seed``, by product saturation."""
    els = set(seed)
    els.add(0)
    while True:
        prods = {table[a][b] for a in els for b in els}
        if prods <= els:
            return tuple(sorted(els))
        els |= prods


def generating_sequence(sub: Subgroup) -> tuple[int, ...]:
    """A short generating sequence, greedily extended in element order."""
    table = sub.group.table
    gens: list[int] = []
    cur: set[int] = {0}
    for x in sub.elements:
        if x not in cur:
            gens.append(x)
            cur = set(_closure_in(table, cur | {x}))
    return tuple(gens)


def _subgroups_p_tower(group: FiniteGroup) -> dict[tuple[int, ...], tuple[int, ...]]:
    """All subgroups of a p-group by index-p extensions H -> <H, g>.

    Each overgroup of index p arises from some g in the normalizer with
    g^p in H, and the extension is the union of the p cosets H g^i, so no
    general closure computation is needed.  Coset representatives are
    consumed as a block: whether <H, g> is an index-p extension depends only
    on the coset H g.
    """
    p = group.prime_power[0]
    t, inv, n = group.table, group.inv, group.order
    found: dict[tuple[int, ...], tuple[int, ...]] = {(0,): ()}
    frontier: list[tuple[frozenset, tuple[int, ...]]] = [(frozenset((0,)), ())]
    while frontier:
        nxt = []
        for hset, gens in frontier:
            norm = [g for g in range(n) if all(t[t[g][h]][inv[g]] in hset for h in gens)]
            seen = set(hset)
            for g in norm:
                if g in seen:
                    continue
                seen.update(t[h][g] for h in hset)
                gp = g
                for _ in range(p - 1):
                    gp = t[gp][g]
                if gp not in hset:
                    continue
                new = set(hset)
                c = g
                for _ in range(p - 1):
                    new.update(t[h][c] for h in hset)
                    c = t[c][g]
                key = tuple(sorted(new))
                if key not in found:
                    found[key] = gens + (g,)
                    nxt.append((frozenset(new), gens + (g,)))
        frontier = nxt
    return found


def _subgroups_generic(group: FiniteGroup) -> dict[tuple[int, ...], tuple[int, ...]]:
    """All subgroups by breadth-first closure, adjoining one generator at a time."""
    t, n = group.table, group.order
    found: dict[tuple[int, ...], tuple[int, ...]] = {(0,): ()}
    frontier: list[tuple[tuple[int, ...], tuple[int, ...]]] = [((0,), ())]
    while frontier:
        nxt = []
        for helems, gens in frontier:
            hset = set(helems)
            for g in range(n):
                if g in hset:
                    continue
                key = _closure_in(t, hset | {g})
                if key not in found:
                    found[key] = gens + (g,)
                    nxt.append((key, gens + (g,)))
        frontier = nxt
    return found


def _conjugacy_classes(group, tuples, index):
    """Partition subgroup tuples into conjugacy classes.

    Because ``tuples`` is sorted by (size, elements) and each class is
    discovered at its least member, the class list comes out in canonical
    (size, representative) order with the representative first in each class.
    """
    count = len(tuples)
    if group.is_abelian:
        return [[i] for i in range(count)], list(range(count))
    n, t, inv = group.order, group.table, group.inv
    class_of = [-1] * count
    classes: list[list[int]] = []
    for i in range(count):
        if class_of[i] != -1:
            continue
        orbit = {i}
        helems = tuples[i]
        for g in range(n):
            gi = inv[g]
            img = tuple(sorted(t[t[g][h]][gi] for h in helems))
            orbit.add(index[img])
        members = sorted(orbit)
        cid = len(classes)
        classes.append(members)
        for m in members:
            class_of[m] = cid
    return classes, class_of


class SubgroupLattice:
    """Every subgroup of a group, its conjugacy classes, and a table of marks.

    Built once per group (see :func:`lattice`) and shared by all consumers.
    The mark of a transitive G-set G/Z at a subgroup D, i.e. the number of
    D-fixed cosets, is |N(D)| * #{conjugates of D inside Z} / |Z|; marks are
    computed lazily and cached.
    """

    def __init__(self, group: FiniteGroup):
        self.group = group
        if group.prime_power is not None and group.order > 1:
            found = _subgroups_p_tower(group)
        else:
            found = _subgroups_generic(group)
        tuples = sorted(found, key=lambda s: (len(s), s))
        self._tuples = tuples
        self._sets = [frozenset(s) for s in tuples]
        self._gens = {s: found[s] for s in tuples}
        self._index = {s: i for i, s in enumerate(tuples)}
        self.class_members, self.class_of = _conjugacy_classes(group, tuples, self._index)
        self._marks: dict[tuple[int, int], int] = {}
        self._objs: dict[int, Subgroup] = {}

    @property
    def num_subgroups(self) -> int:
        return len(self._tuples)

    @property
    def num_classes(self) -> int:
        return len(self.class_members)

    def subgroup_at(self, i: int) -> Subgroup:
        obj = self._objs.get(i)
        if obj is None:
            obj = _subgroup_unchecked(self.group, self._tuples[i])
            self._objs[i] = obj
        return obj

    def subgroups(self) -> list[Subgroup]:
        return [self.subgroup_at(i) for i in range(len(self._tuples))]

    def generators_at(self, i: int) -> tuple[int, ...]:
        return self._gens[self._tuples[i]]

    def subgroup_index(self, elements: tuple[int, ...]) -> int:
        try:
            return self._index[elements]
        except KeyError:
            raise DomainError(f"{list(elements)} is not a subgroup of this group") from None

    def class_id(self, elements: tuple[int, ...]) -> int:
        return self.class_of[self.subgroup_index(elements)]

    def class_id_of(self, sub: Subgroup) -> int:
        if sub.group != self.group:
            raise DomainError("subgroup belongs to a different group")
        return self.class_id(sub.elements)

    def class_rep_tuple(self, cid: int) -> tuple[int, ...]:
        return self._tuples[self.class_members[cid][0]]

    def class_rep(self, cid: int) -> Subgroup:
        return self.subgroup_at(self.class_members[cid][0])

    def class_reps(self) -> list[Subgroup]:
        return [self.class_rep(c) for c in range(self.num_classes)]

    def order_of_class(self, cid: int) -> int:
        return len(self.class_rep_tuple(cid))

    def normalizer_order(self, cid: int) -> int:
        return self.group.order // len(self.class_members[cid])

    def normalizer_quotient_order(self, cid: int) -> int:
        q, r = divmod(self.normalizer_order(cid), self.order_of_class(cid))
        assert r == 0
        return q

    def mark(self, c_d: int, c_z: int) -> int:
        """Fixed points of the class-c_d representative on G/Z for Z in class c_z."""
        key = (c_d, c_z)
        m = self._marks.get(key)
        if m is not None:
            return m
        dsize = self.order_of_class(c_d)
        zrep = self.class_members[c_z][0]
        zsize = len(self._tuples[zrep])
        if dsize > zsize or zsize % dsize != 0:
            m = 0
        else:
            zset = self._sets[zrep]
            count = sum(1 for i in self.class_members[c_d] if self._sets[i] <= zset)
            num = self.normalizer_order(c_d) * count
            m, r = divmod(num, zsize)
            assert r == 0
        self._marks[key] = m
        return m

    def subgroup_sets(self) -> list[frozenset]:
        return self._sets


@lru_cache(maxsize=None)
def lattice(group: FiniteGroup) -> SubgroupLattice:
    return SubgroupLattice(group)


def all_subgroups(group: FiniteGroup) -> tuple[list[Subgroup], list[list[Subgroup]]]:
    """The complete subgroup list and its conjugacy-class partition.

    Subgroups are sorted by (order, elements); each class lists its
    lexicographically least member first, which is the canonical
    representative.
    """
    lat = lattice(group)
    subs = lat.subgroups()
    classes = [[lat.subgroup_at(i) for i in members] for members in lat.class_members]
    return subs, classes


def normalizer(group: FiniteGroup, sub: Subgroup) -> Subgroup:
    """N_G(P) = {g : g P g^-1 = P}, by direct conjugation scan."""
    if sub.group != group:
        raise DomainError("subgroup belongs to a different group")
    pset = sub.as_set
    out = [g for g in group.elements if all(group.conj(g, u) in pset for u in sub.elements)]
    return _subgroup_unchecked(group, tuple(out))


@lru_cache(maxsize=None)
def monomorphisms(domain: Subgroup, codomain: Subgroup) -> tuple[GroupMap, ...]:
    """All injective homomorphisms domain -> codomain.

    Backtracking over a generating sequence of the domain: candidate images
    must match element orders, and each partial assignment is saturated under
    products so conflicts surface early.
    """
    if domain.group != codomain.group:
        raise DomainError("domain and codomain live in different groups")
    g = domain.group
    t = g.table
    gens = generating_sequence(domain)

    def extend(mapping: dict[int, int], src: int, dst: int) -> dict[int, int] | None:
        m = dict(mapping)
        stack = [(src, dst)]
        while stack:
            a, fa = stack.pop()
            cur = m.get(a)
            if cur is not None:
                if cur != fa:
                    return None
                continue
            m[a] = fa
            for b, fb in list(m.items()):
                for x, fx in ((t[a][b], t[fa][fb]), (t[b][a], t[fb][fa])):
                    prev = m.get(x)
                    if prev is None:
                        stack.append((x, fx))
                    elif prev != fx:
                        return None
        vals = list(m.values())
        if len(set(vals)) != len(vals):
            return None
        return m

    complete: list[dict[int, int]] = []

    def backtrack(i: int, mapping: dict[int, int]) -> None:
        if i == len(gens):
            complete.append(mapping)
            return
        src = gens[i]
        need = g.element_order(src)
        for dst in codomain.elements:
            if g.element_order(dst) != need:
                continue
            m2 = extend(mapping, src, dst)
            if m2 is not None:
                backtrack(i + 1, m2)

    backtrack(0, {0: 0})
    out = [GroupMap(domain, codomain, m) for m in complete]
    out.sort(key=lambda f: f.image_tuple)
    return tuple(out)


class DirectSquare:
    """The group S x S with componentwise product and index codecs."""

    __slots__ = ("base", "group", "_n")

    def __init__(self, base: FiniteGroup):
        n = base.order
        t = base.table
        rows = []
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tb = t[b]
                rows.append(tuple(ta[c] * n + tb[d] for c in range(n) for d in range(n)))
        self.base = base
        self.group = FiniteGroup(rows)
        self._n = n

    def encode(self, i: int, j: int) -> int:
        return i * self._n + j

    def decode(self, x: int) -> tuple[int, int]:
        return divmod(x, self._n)

    def pi1(self, x: int) -> int:
        return x // self._n

    def pi2(self, x: int) -> int:
        return x % self._n


@lru_cache(maxsize=None)
def direct_square(base: FiniteGroup) -> DirectSquare:
    return DirectSquare(base)
