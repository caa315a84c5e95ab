"""Bisets over a p-group: twisted diagonals, explicit orbits, virtual sets, marks.

Orientation is fixed once and for all.  The ambient group for class
bookkeeping is Gamma = S x S acting on biset points by (a, b).x = a.x.b^-1,
and the twisted diagonal Delta(P, phi) is the subgroup {(phi(u), u) : u in P}
of Gamma.  The transitive bifree bisets are then the coset spaces
Gamma / Delta(P, phi); :func:`materialize` builds them independently as
quotients of pairs, and the test suite cross-checks that the stabilizer of
the class of (e, e) really is Delta(P, phi).  Coefficient arithmetic is exact
rational throughout: the stabilization step divides by normalizer indices and
must not round.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterable, Mapping, Sequence

from .errors import (DomainError, HNotClosed, InvalidMorphism, NotABiset,
                     NotBifree, PreconditionViolated)
from .fusion import FusionSystem
from .groups import (FiniteGroup, GroupMap, Subgroup, SubgroupLattice,
                     _subgroup_unchecked, direct_square, lattice,
                     monomorphisms)

__all__ = [
    "TwistedDiagonal",
    "VirtualGSet",
    "ExplicitBiset",
    "twisted_diagonal",
    "as_twisted_diagonal",
    "materialize",
    "orbit_class",
    "fixed_count",
    "stabilize",
    "clear_denominators",
    "is_f_generated",
    "is_left_stable",
    "is_right_stable",
    "contains_identity_orbit",
    "serialize_virtual",
]


@dataclass(frozen=True)
class TwistedDiagonal:
    """The subgroup Delta(P, phi) = {(phi(u), u)} of S x S, tagged with its data."""

    p: Subgroup
    phi: GroupMap
    subgroup: Subgroup


def twisted_diagonal(phi: GroupMap) -> TwistedDiagonal:
    """Delta(P, phi) for an injective homomorphism phi: P -> S."""
    p = phi.domain
    n = p.group.order
    ds = direct_square(p.group)
    elems = tuple(sorted(phi(u) * n + u for u in p.elements))
    return TwistedDiagonal(p, phi, _subgroup_unchecked(ds.group, elems))


def as_twisted_diagonal(sub: Subgroup, base: FiniteGroup) -> TwistedDiagonal:
    """Re-tag a subgroup of S x S as Delta(P, phi).

    Raises :class:`NotBifree` when either projection fails to be injective on
    the subgroup, i.e. when it is not of twisted-diagonal shape.
    """
    ds = direct_square(base)
    if sub.group != ds.group:
        raise DomainError("subgroup does not live in the direct square of the base")
    n = base.order
    dec = [divmod(x, n) for x in sub.elements]
    firsts = [a for a, _ in dec]
    seconds = [b for _, b in dec]
    if len(set(firsts)) != len(dec) or len(set(seconds)) != len(dec):
        raise NotBifree("subgroup of S x S is not a twisted diagonal")
    p = _subgroup_unchecked(base, tuple(sorted(seconds)))
    phi = GroupMap(p, base.full_subgroup(), {b: a for a, b in dec})
    return TwistedDiagonal(p, phi, sub)


class VirtualGSet:
    """An exact-rational combination of transitive G-sets over subgroup classes.

    Coefficients live on conjugacy classes of subgroups of the ambient group,
    keyed internally by class id and exposed through the canonical class
    representatives; zero coefficients are dropped.
    """

    __slots__ = ("ambient", "_ids", "_fix_cache")

    def __init__(self, ambient: FiniteGroup, coeffs: Mapping[Subgroup, Fraction | int]):
        lat = lattice(ambient)
        ids: dict[int, Fraction] = {}
        for sub, c in coeffs.items():
            if sub.group != ambient:
                raise DomainError("coefficient key is not a subgroup of the ambient group")
            cid = lat.class_id_of(sub)
            ids[cid] = ids.get(cid, Fraction(0)) + Fraction(c)
        self.ambient = ambient
        self._ids = {c: v for c, v in sorted(ids.items()) if v}
        self._fix_cache: dict[int, Fraction] = {}

    @classmethod
    def _make(cls, ambient: FiniteGroup, ids: Mapping[int, Fraction]) -> "VirtualGSet":
        v = object.__new__(cls)
        v.ambient = ambient
        v._ids = {c: Fraction(x) for c, x in sorted(ids.items()) if x}
        v._fix_cache = {}
        return v

    @property
    def coeffs(self) -> dict[Subgroup, Fraction]:
        lat = lattice(self.ambient)
        return {lat.class_rep(c): v for c, v in self._ids.items()}

    def coefficient(self, sub: Subgroup) -> Fraction:
        return self._ids.get(lattice(self.ambient).class_id_of(sub), Fraction(0))

    def support(self) -> list[Subgroup]:
        lat = lattice(self.ambient)
        return [lat.class_rep(c) for c in self._ids]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._ids.values())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self._ids.values())

    def total_points(self) -> Fraction:
        """Sum of coeff * |G|/|Z| over the support: the size of the virtual set."""
        lat = lattice(self.ambient)
        n = self.ambient.order
        return sum((v * Fraction(n, lat.order_of_class(c)) for c, v in self._ids.items()),
                   start=Fraction(0))

    def __add__(self, other: "VirtualGSet") -> "VirtualGSet":
        if not isinstance(other, VirtualGSet):
            return NotImplemented
        if other.ambient != self.ambient:
            raise DomainError("ambient groups differ")
        ids = dict(self._ids)
        for c, v in other._ids.items():
            ids[c] = ids.get(c, Fraction(0)) + v
        return VirtualGSet._make(self.ambient, ids)

    def __sub__(self, other: "VirtualGSet") -> "VirtualGSet":
        return self + (-1) * other

    def __mul__(self, scalar) -> "VirtualGSet":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return VirtualGSet._make(self.ambient, {c: v * scalar for c, v in self._ids.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VirtualGSet):
            return NotImplemented
        return self.ambient == other.ambient and self._ids == other._ids

    def __hash__(self):
        return hash((self.ambient, tuple(self._ids.items())))

    def __repr__(self):
        return f"VirtualGSet(classes={len(self._ids)}, points={self.total_points()})"


def _fixed_by_class(v: VirtualGSet, lat: SubgroupLattice, cid: int) -> Fraction:
    cached = v._fix_cache.get(cid)
    if cached is None:
        cached = sum((c * lat.mark(cid, z) for z, c in v._ids.items()), start=Fraction(0))
        v._fix_cache[cid] = cached
    return cached


def fixed_count(v: VirtualGSet, d: Subgroup) -> Fraction:
    """Number of d-fixed points of v: the linear extension of the marks."""
    if d.group != v.ambient:
        raise DomainError("subgroup of a different ambient group")
    lat = lattice(v.ambient)
    return _fixed_by_class(v, lat, lat.class_id_of(d))


class ExplicitBiset:
    """A finite S-S-biset as explicit left and right action tables.

    Both tables are verified to be genuine group actions and to commute;
    points are opaque indices.
    """

    __slots__ = ("acting", "left", "right", "num_points")

    def __init__(self, acting: FiniteGroup, left: Sequence[Sequence[int]],
                 right: Sequence[Sequence[int]]):
        n = acting.order
        left = tuple(tuple(row) for row in left)
        right = tuple(tuple(row) for row in right)
        pts = len(right)
        if len(left) != n or any(len(row) != pts for row in left):
            raise DomainError("left action table has the wrong shape")
        if any(len(row) != n for row in right):
            raise DomainError("right action table has the wrong shape")
        t = acting.table
        if left[0] != tuple(range(pts)):
            raise DomainError("left action: identity must act trivially")
        if any(right[x][0] != x for x in range(pts)):
            raise DomainError("right action: identity must act trivially")
        for a in range(n):
            la = left[a]
            for b in range(n):
                lb = left[b]
                if left[t[a][b]] != tuple(la[lb[x]] for x in range(pts)):
                    raise DomainError("left action is not a group action")
                ab = t[a][b]
                if any(right[x][ab] != right[right[x][a]][b] for x in range(pts)):
                    raise DomainError("right action is not a group action")
        for a in range(n):
            la = left[a]
            for x in range(pts):
                if right[la[x]] != tuple(la[right[x][b]] for b in range(n)):
                    raise DomainError("left and right actions do not commute")
        self.acting = acting
        self.left = left
        self.right = right
        self.num_points = pts

    def stabilizer(self, x: int) -> Subgroup:
        """The stabilizer of x in S x S under (a, b).x = a.x.b^-1."""
        s = self.acting
        n = s.order
        inv = s.inv
        ds = direct_square(s)
        elems = [a * n + b
                 for a in range(n) for b in range(n)
                 if self.left[a][self.right[x][inv[b]]] == x]
        return _subgroup_unchecked(ds.group, tuple(elems))

    def is_right_free(self) -> bool:
        return all(len(set(row)) == self.acting.order for row in self.right)

    def is_left_free(self) -> bool:
        pts = range(self.num_points)
        return all(all(self.left[a][x] != x for x in pts) for a in range(1, self.acting.order))

    @classmethod
    def disjoint_union(cls, acting: FiniteGroup,
                       parts: Sequence[tuple["ExplicitBiset", int]]) -> "ExplicitBiset":
        """Disjoint union of bisets with nonnegative multiplicities."""
        n = acting.order
        left_rows: list[list[int]] = [[] for _ in range(n)]
        right_rows: list[tuple[int, ...]] = []
        offset = 0
        for part, mult in parts:
            if part.acting != acting:
                raise DomainError("parts act under different groups")
            if mult < 0:
                raise NotABiset("negative multiplicity")
            for _ in range(mult):
                for a in range(n):
                    left_rows[a].extend(x + offset for x in part.left[a])
                for x in range(part.num_points):
                    right_rows.append(tuple(y + offset for y in part.right[x]))
                offset += part.num_points
        return cls(acting, left_rows, right_rows)


def materialize(q: Subgroup, phi: GroupMap) -> ExplicitBiset:
    """The transitive biset with point stabilizer class Delta(Q, phi).

    Points are equivalence classes of pairs (x, y) in S x S under
    (x.phi(u), y) ~ (x, u.y) for u in Q, with left action a.[x, y] = [a x, y]
    and right action [x, y].b = [x, y b]; there are |S|^2/|Q| of them and the
    class of (e, e) is stabilized exactly by Delta(Q, phi).  The canonical
    representative of each class is its member with the least first
    coordinate.
    """
    s = q.group
    if phi.domain != q:
        raise InvalidMorphism("phi must have domain Q")
    n = s.order
    t = s.table
    inv = s.inv
    point_of = [-1] * (n * n)
    reps: list[tuple[int, int]] = []
    for x in range(n):
        tx = t[x]
        for y in range(n):
            if point_of[x * n + y] != -1:
                continue
            pid = len(reps)
            reps.append((x, y))
            for u in q.elements:
                point_of[tx[phi(u)] * n + t[inv[u]][y]] = pid
    left = [tuple(point_of[t[a][x] * n + y] for x, y in reps) for a in range(n)]
    right = [tuple(point_of[x * n + t[y][b]] for b in range(n)) for x, y in reps]
    return ExplicitBiset(s, left, right)


def orbit_class(biset: ExplicitBiset, point: int) -> TwistedDiagonal:
    """Canonical twisted-diagonal class of the stabilizer of a point.

    Raises :class:`NotBifree` when the stabilizer is not a twisted diagonal,
    which signals a corrupted biset.
    """
    if not 0 <= point < biset.num_points:
        raise DomainError("point index out of range")
    s = biset.acting
    glat = lattice(direct_square(s).group)
    stab = biset.stabilizer(point)
    return as_twisted_diagonal(glat.class_rep(glat.class_id_of(stab)), s)


def _partition_ids(lat: SubgroupLattice,
                   fusion_classes: Sequence[Sequence[Subgroup]]) -> tuple[list[list[int]], list[int]]:
    """Validate a class partition and convert it to class ids."""
    fid_of = [-1] * lat.num_classes
    out: list[list[int]] = []
    for fc in fusion_classes:
        ids = sorted({lat.class_id_of(sub) for sub in fc})
        for c in ids:
            if fid_of[c] != -1:
                raise DomainError("fusion classes overlap")
            fid_of[c] = len(out)
        out.append(ids)
    if any(f == -1 for f in fid_of):
        raise DomainError("fusion classes must cover every subgroup class")
    return out, fid_of


def stabilize(x0: VirtualGSet, fusion_classes: Sequence[Sequence[Subgroup]],
              repair: Iterable[Subgroup]) -> VirtualGSet:
    """Equalize fixed counts over every fusion class by adding orbits on the repair set.

    ``fusion_classes`` partitions the subgroup classes of the ambient group;
    ``repair`` names the classes that may receive corrections.  The repair set
    must be closed under fusion conjugacy and under passing to subgroups, and
    the input's counts must already be constant on every fusion class outside
    it (:class:`PreconditionViolated` carries a witness pair otherwise).

    Processing runs over repair fusion classes in strictly descending order
    of subgroup size (ties broken by representative): for each class, pick
    the member with the largest current count and add
    (top - count) / |N(P')/P'| copies of the orbit on each member P'.  Orbits
    on P' only move counts at subgroups below P', so already-processed and
    out-of-repair classes are never disturbed.  The result agrees with the
    input outside the repair set and exceeds it by a combination with
    nonnegative rational coefficients.
    """
    amb = x0.ambient
    lat = lattice(amb)
    fclasses, fid_of = _partition_ids(lat, fusion_classes)
    h_ids = {lat.class_id_of(sub) for sub in repair}

    for c in h_ids:
        for mate in fclasses[fid_of[c]]:
            if mate not in h_ids:
                raise HNotClosed("repair set is not closed under fusion conjugacy")
    sets = lat.subgroup_sets()
    for c in list(h_ids):
        rep_set = sets[lat.class_members[c][0]]
        for i, sub_set in enumerate(sets):
            if sub_set <= rep_set and lat.class_of[i] not in h_ids:
                raise HNotClosed("repair set is not closed under taking subgroups")

    fix = [sum((v * lat.mark(c, z) for z, v in x0._ids.items()), start=Fraction(0))
           for c in range(lat.num_classes)]
    fix0 = list(fix)

    for ids in fclasses:
        outside = [c for c in ids if c not in h_ids]
        for c in outside[1:]:
            if fix[c] != fix[outside[0]]:
                raise PreconditionViolated(
                    "input counts differ on fusion-conjugate classes outside the repair set",
                    witness=(lat.class_rep(outside[0]), lat.class_rep(c),
                             fix[outside[0]], fix[c]))

    additions: dict[int, Fraction] = {}
    h_fids = sorted({fid_of[c] for c in h_ids},
                    key=lambda f: (-len(lat.class_rep_tuple(fclasses[f][0])),
                                   lat.class_rep_tuple(fclasses[f][0])))
    for f in h_fids:
        ids = fclasses[f]
        snapshot = {c: fix[c] for c in ids}
        top = max(snapshot.values())
        for c in ids:
            coeff = (top - snapshot[c]) / lat.normalizer_quotient_order(c)
            if not coeff:
                continue
            additions[c] = additions.get(c, Fraction(0)) + coeff
            for d in range(lat.num_classes):
                m = lat.mark(d, c)
                if m:
                    fix[d] += coeff * m

    ids = dict(x0._ids)
    for c, v in additions.items():
        ids[c] = ids.get(c, Fraction(0)) + v
    result = VirtualGSet._make(amb, ids)

    # re-derive the counts from scratch and verify the contract
    final = [_fixed_by_class(result, lat, c) for c in range(lat.num_classes)]
    for ids_ in fclasses:
        if any(final[c] != final[ids_[0]] for c in ids_[1:]):
            raise AssertionError("stabilize postcondition failed: counts not class-constant")
    for c in range(lat.num_classes):
        if c not in h_ids and final[c] != fix0[c]:
            raise AssertionError("stabilize postcondition failed: counts moved outside the repair set")
    if any(v < 0 for v in additions.values()):
        raise AssertionError("stabilize postcondition failed: negative correction")
    return result


def clear_denominators(v: VirtualGSet) -> tuple[int, VirtualGSet]:
    """Least positive integer m with m*v integral, together with m*v."""
    if not v.is_nonnegative():
        raise NotABiset("negative coefficient")
    m = 1
    for c in v._ids.values():
        m = lcm(m, c.denominator)
    return m, VirtualGSet._make(v.ambient, {k: c * m for k, c in v._ids.items()})


def _require_biset(x: VirtualGSet) -> None:
    if not x.is_integral() or not x.is_nonnegative():
        raise NotABiset("coefficients must be nonnegative integers")


def _gamma_of(fusion: FusionSystem, x: VirtualGSet) -> FiniteGroup:
    gamma = direct_square(fusion.base).group
    if x.ambient != gamma:
        raise DomainError("virtual set does not live over S x S")
    return gamma


def is_f_generated(fusion: FusionSystem, x: VirtualGSet) -> bool:
    """Whether every support class is a twisted diagonal with morphism in the system."""
    _gamma_of(fusion, x)
    _require_biset(x)
    for rep in x.support():
        try:
            diag = as_twisted_diagonal(rep, fusion.base)
        except NotBifree:
            return False
        if diag.phi.image_tuple not in fusion.hom_tuples(diag.p):
            return False
    return True


def is_left_stable(fusion: FusionSystem, x: VirtualGSet) -> bool:
    """Fixed counts are unchanged by twisting the left action along any morphism.

    For each Q and each stored phi on Q the check compares counts at
    Delta(R, psi) and Delta(R, phi.psi) for every twisted diagonal inside
    Q x S.  Restricting to twisted diagonals is sound because the support is
    bifree, so counts at every other subgroup vanish on both sides.
    """
    _require_biset(x)
    gamma = _gamma_of(fusion, x)
    s = fusion.base
    n = s.order
    glat = lattice(gamma)
    slat = lattice(s)
    for q in slat.subgroups():
        for phit in sorted(fusion.hom_tuples(q)):
            pm = dict(zip(q.elements, phit))
            if all(pm[u] == u for u in q.elements):
                continue
            for r in slat.subgroups():
                for psi in monomorphisms(r, q):
                    d = tuple(sorted(psi(u) * n + u for u in r.elements))
                    e = tuple(sorted(pm[psi(u)] * n + u for u in r.elements))
                    if d == e:
                        continue
                    if _fixed_by_class(x, glat, glat.class_id(d)) != \
                            _fixed_by_class(x, glat, glat.class_id(e)):
                        return False
    return True


def is_right_stable(fusion: FusionSystem, x: VirtualGSet) -> bool:
    """Mirror of :func:`is_left_stable` with the twist on the right action."""
    _require_biset(x)
    gamma = _gamma_of(fusion, x)
    s = fusion.base
    n = s.order
    glat = lattice(gamma)
    slat = lattice(s)
    full = s.full_subgroup()
    for q in slat.subgroups():
        for phit in sorted(fusion.hom_tuples(q)):
            pm = dict(zip(q.elements, phit))
            if all(pm[u] == u for u in q.elements):
                continue
            for r in slat.subgroups():
                if not r.as_set <= q.as_set:
                    continue
                for psi in monomorphisms(r, full):
                    d = tuple(sorted(psi(u) * n + u for u in r.elements))
                    e = tuple(sorted(psi(u) * n + pm[u] for u in r.elements))
                    if d == e:
                        continue
                    if _fixed_by_class(x, glat, glat.class_id(d)) != \
                            _fixed_by_class(x, glat, glat.class_id(e)):
                        return False
    return True


def contains_identity_orbit(x: VirtualGSet) -> bool:
    """Whether the coefficient at the class of Delta(S, id) is at least one."""
    if not x.is_integral():
        raise NotABiset("coefficients must be integral")
    n = isqrt(x.ambient.order)
    if n * n != x.ambient.order:
        raise DomainError("ambient group is not a direct square")
    lat = lattice(x.ambient)
    diag = tuple(u * n + u for u in range(n))
    return x._ids.get(lat.class_id(diag), Fraction(0)) >= 1


def serialize_virtual(v: VirtualGSet, base: FiniteGroup) -> list[str]:
    """Render the support as ``class Δ(P=..., phi=...) coeff n/d`` lines.

    Classes appear in the canonical lattice order; every support class must
    be a twisted diagonal.
    """
    lines = []
    for rep in v.support():
        d = as_twisted_diagonal(rep, base)
        pel = ",".join(str(u) for u in d.p.elements)
        pmap = ",".join(f"{u}->{d.phi(u)}" for u in d.p.elements)
        c = v.coefficient(rep)
        lines.append(f"class Δ(P=[{pel}], phi={pmap}) coeff {c.numerator}/{c.denominator}")
    return lines
