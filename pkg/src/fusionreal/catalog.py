"""Built-in groups and fusion systems exercised by the command line and the tests."""

from __future__ import annotations

from functools import lru_cache

from .errors import UnknownCatalogEntry
from .fusion import FusionSystem, close_fusion, fusion_of_subgroup, inner_fusion
from .groups import FiniteGroup, GroupMap

__all__ = [
    "CatalogEntry",
    "catalog",
    "get_entry",
    "cyclic_group",
    "direct_product",
    "dihedral_8",
    "quaternion_8",
    "permutation_group",
    "alternating_4",
    "symmetric_4",
    "special_linear_2_3",
]


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product with element (a, b) encoded as a*|h| + b."""
    m = h.order
    rows = []
    for a in range(g.order):
        for b in range(m):
            rows.append(tuple(g.table[a][c] * m + h.table[b][d]
                              for c in range(g.order) for d in range(m)))
    return FiniteGroup(rows)


def dihedral_8() -> FiniteGroup:
    """Dihedral group of order 8; element r^i s^j is encoded as i + 4j."""
    def mul(x, y):
        i1, j1 = x % 4, x // 4
        i2, j2 = y % 4, y // 4
        i = (i1 - i2) % 4 if j1 else (i1 + i2) % 4
        return i + 4 * ((j1 + j2) % 2)
    return FiniteGroup([[mul(x, y) for y in range(8)] for x in range(8)])


_UNIT_MUL = {  # (unit, unit) -> (unit, sign) for 1, i, j, k
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}


def quaternion_8() -> FiniteGroup:
    """Quaternion group; +u at index 2*unit, -u at 2*unit + 1 for units 1, i, j, k."""
    def mul(x, y):
        u1, s1 = x // 2, -1 if x % 2 else 1
        u2, s2 = y // 2, -1 if y % 2 else 1
        u, s = _UNIT_MUL[(u1, u2)]
        return 2 * u + (0 if s1 * s2 * s == 1 else 1)
    return FiniteGroup([[mul(x, y) for y in range(8)] for x in range(8)])


def permutation_group(gens: list[tuple[int, ...]]) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Closure of permutation generators; returns the table group and the
    element list (identity first, then lexicographic)."""
    deg = len(gens[0])
    ident = tuple(range(deg))
    els = {ident} | set(gens)
    while True:
        more = {tuple(a[b[i]] for i in range(deg)) for a in els for b in els}
        if more <= els:
            break
        els |= more
    ordered = [ident] + sorted(els - {ident})
    index = {p: i for i, p in enumerate(ordered)}
    table = [[index[tuple(a[b[i]] for i in range(deg))] for b in ordered] for a in ordered]
    return FiniteGroup(table), ordered


def alternating_4() -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    return permutation_group([(1, 2, 0, 3), (1, 0, 3, 2)])


def symmetric_4() -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    return permutation_group([(1, 2, 3, 0), (1, 0, 2, 3)])


def special_linear_2_3() -> tuple[FiniteGroup, list[tuple[int, int, int, int]]]:
    """SL(2, 3) as 2x2 matrices over the field with three elements."""
    def mmul(a, b):
        return ((a[0] * b[0] + a[1] * b[2]) % 3, (a[0] * b[1] + a[1] * b[3]) % 3,
                (a[2] * b[0] + a[3] * b[2]) % 3, (a[2] * b[1] + a[3] * b[3]) % 3)
    ident = (1, 0, 0, 1)
    els = {ident, (1, 1, 0, 1), (0, 2, 1, 0)}
    while True:
        more = {mmul(a, b) for a in els for b in els}
        if more <= els:
            break
        els |= more
    ordered = [ident] + sorted(els - {ident})
    index = {m: i for i, m in enumerate(ordered)}
    table = [[index[mmul(a, b)] for b in ordered] for a in ordered]
    return FiniteGroup(table), ordered


def _perm_closure_indices(elements: list, gens: list, mul) -> tuple[int, ...]:
    """Indices (in ``elements``) of the subgroup generated by ``gens``."""
    els = set(gens)
    while True:
        more = {mul(a, b) for a in els for b in els}
        if more <= els:
            break
        els |= more
    index = {e: i for i, e in enumerate(elements)}
    return tuple(sorted(index[e] for e in els))


def _relabel(over: FiniteGroup, embed: tuple[int, ...]) -> FiniteGroup:
    """The subgroup on the embedded indices, relabelled to 0..k-1."""
    pos = {g: i for i, g in enumerate(embed)}
    return FiniteGroup([[pos[over.table[a][b]] for b in embed] for a in embed])


class CatalogEntry:
    """A named base group together with its fusion recipe.

    ``fusion_source`` is either ``("generators", [image maps])`` or
    ``("overgroup", (group, embedding))``; ``expect_saturated_source`` is
    informational metadata only.
    """

    def __init__(self, name: str, group: FiniteGroup, *,
                 generators: list[dict[int, int]] | None = None,
                 overgroup: FiniteGroup | None = None,
                 embedding: tuple[int, ...] | None = None,
                 expect_saturated_source: bool = True):
        self.name = name
        self.group = group
        self._generators = generators or []
        self._overgroup = overgroup
        self._embedding = embedding
        self.expect_saturated_source = expect_saturated_source
        self._fusion: FusionSystem | None = None

    @property
    def fusion_source(self):
        if self._overgroup is not None:
            return ("overgroup", (self._overgroup, self._embedding))
        return ("generators", list(self._generators))

    def fusion(self) -> FusionSystem:
        if self._fusion is None:
            if self._overgroup is not None:
                sub = self._overgroup.subgroup(self._embedding)
                fs = fusion_of_subgroup(self._overgroup, sub)
                assert fs.base == self.group
                self._fusion = fs
            elif self._generators:
                full = self.group.full_subgroup()
                maps = [GroupMap(self.group.subgroup(g.keys()), full, g)
                        for g in self._generators]
                self._fusion = close_fusion(self.group, maps)
            else:
                self._fusion = inner_fusion(self.group)
        return self._fusion

    def __repr__(self):
        return f"CatalogEntry({self.name!r})"


@lru_cache(maxsize=1)
def catalog() -> tuple[CatalogEntry, ...]:
    """All built-in entries, inner fusions first."""
    c2 = cyclic_group(2)
    c3 = cyclic_group(3)
    c4 = cyclic_group(4)
    v4 = direct_product(c2, c2)
    c3xc3 = direct_product(c3, c3)

    a4, a4_els = alternating_4()
    v4_embed = _perm_closure_indices(a4_els, [(1, 0, 3, 2), (2, 3, 0, 1)],
                                     lambda a, b: tuple(a[b[i]] for i in range(4)))

    s4, s4_els = symmetric_4()
    d8_embed = _perm_closure_indices(s4_els, [(1, 2, 3, 0), (2, 1, 0, 3)],
                                     lambda a, b: tuple(a[b[i]] for i in range(4)))

    sl23, sl23_els = special_linear_2_3()
    def mat_mul(a, b):
        return ((a[0] * b[0] + a[1] * b[2]) % 3, (a[0] * b[1] + a[1] * b[3]) % 3,
                (a[2] * b[0] + a[3] * b[2]) % 3, (a[2] * b[1] + a[3] * b[3]) % 3)
    q8_embed = _perm_closure_indices(sl23_els, [(0, 2, 1, 0), (1, 1, 1, 2)], mat_mul)

    entries = [
        CatalogEntry("c2", c2),
        CatalogEntry("c3", c3),
        CatalogEntry("c4", c4),
        CatalogEntry("v4", v4),
        CatalogEntry("c8", cyclic_group(8)),
        CatalogEntry("c4xc2", direct_product(c4, c2)),
        CatalogEntry("c2xc2xc2", direct_product(v4, c2)),
        CatalogEntry("d8", dihedral_8()),
        CatalogEntry("q8", quaternion_8()),
        CatalogEntry("c9", cyclic_group(9)),
        CatalogEntry("c3xc3", c3xc3),
        CatalogEntry("v4_a4", _relabel(a4, v4_embed), overgroup=a4, embedding=v4_embed),
        CatalogEntry("d8_s4", _relabel(s4, d8_embed), overgroup=s4, embedding=d8_embed),
        CatalogEntry("q8_sl23", _relabel(sl23, q8_embed), overgroup=sl23, embedding=q8_embed),
        # isolated partial fusions; the closures here are not saturated
        CatalogEntry("v4_partial", v4, generators=[{0: 0, 1: 2}],
                     expect_saturated_source=False),
        CatalogEntry("c3xc3_partial", c3xc3, generators=[{0: 0, 1: 3, 2: 6}],
                     expect_saturated_source=False),
        CatalogEntry("c4_full_aut", c4, generators=[{0: 0, 1: 3, 2: 2, 3: 1}],
                     expect_saturated_source=False),
    ]
    return tuple(entries)


def get_entry(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise UnknownCatalogEntry(f"no catalog entry named {name!r}")
