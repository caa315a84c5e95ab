import pytest

from fusionreal import (DomainError, FiniteGroup, GroupMap, InvalidMorphism,
                        NotAGroup, ParseError, all_subgroups, direct_square,
                        monomorphisms, normalizer, parse_group)
from fusionreal.catalog import (cyclic_group, dihedral_8, direct_product,
                                get_entry, quaternion_8)

from oracles import brute_monomorphisms, brute_subgroups

C2_TEXT = "order 2\n0 1\n1 0\n"
C3_TEXT = "# cyclic of order three\norder 3\n0 1 2\n1 2 0\n2 0 1\n"


def test_parse_c2():
    g = parse_group(C2_TEXT)
    assert g.order == 2
    assert g.prime_power == (2, 1)


def test_parse_c3_with_comment():
    g = parse_group(C3_TEXT)
    assert g.order == 3
    assert g.prime_power == (3, 1)
    assert g.table == ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def test_parse_duplicate_row_entry_is_not_a_group():
    with pytest.raises(NotAGroup) as exc:
        parse_group("order 2\n1 1\n1 0\n")
    assert exc.value.axiom == "row-permutation"


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse_group("order 2\n0 1 1\n1 0\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_group("order 2\n0 1\n")
    with pytest.raises(ParseError):
        parse_group("size 2\n0 1\n1 0\n")
    with pytest.raises(ParseError):
        parse_group("order 2\n0 x\n1 0\n")


def test_identity_must_be_element_zero():
    # this table is C2 with identity living at index 1
    with pytest.raises(NotAGroup) as exc:
        parse_group("order 2\n1 0\n0 1\n")
    assert exc.value.axiom == "identity"


def test_associativity_violation_has_witness():
    # rows and columns are latin, 0 is an identity, but the quasigroup is not
    # associative (order-5 cyclic table with two rows swapped keeps latinness)
    table = [
        [0, 1, 2, 3, 4],
        [1, 2, 3, 4, 0],
        [2, 3, 4, 0, 1],
        [3, 4, 0, 1, 2],
        [4, 0, 1, 2, 3],
    ]
    table[1], table[2] = table[2], table[1]
    table[1][0], table[2][0] = 1, 2  # keep the identity column
    # fix first row/column back to identity behaviour
    for i in range(5):
        table[0][i] = i
        table[i][0] = i
    try:
        FiniteGroup(table)
    except NotAGroup as exc:
        assert exc.axiom in ("associativity", "inverse", "row-permutation", "column-permutation")
    else:
        pytest.fail("expected NotAGroup")


@pytest.mark.parametrize("name,count", [("c2", 2), ("v4", 5), ("d8", 10), ("q8", 6), ("c8", 4)])
def test_subgroup_counts_match_brute_force(name, count):
    g = get_entry(name).group
    subs, _ = all_subgroups(g)
    assert len(subs) == count
    assert {s.elements for s in subs} == brute_subgroups(g)


def test_d8_has_eight_conjugacy_classes():
    _, classes = all_subgroups(dihedral_8())
    assert len(classes) == 8


def test_class_representative_is_least_member():
    _, classes = all_subgroups(dihedral_8())
    for members in classes:
        rep = members[0]
        assert rep.elements == min(m.elements for m in members)


def test_lattice_closed_under_intersection():
    for name in ("v4", "d8", "q8", "c4xc2"):
        g = get_entry(name).group
        subs, _ = all_subgroups(g)
        have = {s.elements for s in subs}
        for a in subs:
            for b in subs:
                meet = tuple(sorted(a.as_set & b.as_set))
                assert meet in have


def test_lagrange():
    for name in ("d8", "q8", "c2xc2xc2", "c9"):
        g = get_entry(name).group
        subs, _ = all_subgroups(g)
        assert all(g.order % len(s) == 0 for s in subs)


def test_tower_and_generic_enumeration_agree():
    # the generic closure path is forced by handing over a non-prime-power group,
    # so compare on products where both strategies are exercised elsewhere
    from fusionreal.groups import _subgroups_generic, _subgroups_p_tower
    for g in (get_entry("v4").group, dihedral_8(), quaternion_8(),
              direct_product(cyclic_group(4), cyclic_group(4))):
        assert set(_subgroups_p_tower(g)) == set(_subgroups_generic(g))


def test_normalizer_abelian_is_whole_group():
    g = get_entry("c4xc2").group
    for s in all_subgroups(g)[0]:
        assert normalizer(g, s).elements == tuple(g.elements)


def test_normalizer_of_reflection_in_d8():
    d8 = dihedral_8()
    refl = d8.subgroup([0, 4])  # a non-central reflection
    n = normalizer(d8, refl)
    assert len(n) == 4
    assert refl.is_subgroup_of(n)
    assert normalizer(d8, d8.full_subgroup()).elements == tuple(range(8))


def test_normalizer_rejects_foreign_subgroup():
    d8 = dihedral_8()
    c2 = cyclic_group(2)
    with pytest.raises(DomainError):
        normalizer(d8, c2.full_subgroup())


def test_monomorphisms_c2_to_c2_is_identity_only():
    c2 = cyclic_group(2)
    maps = monomorphisms(c2.full_subgroup(), c2.full_subgroup())
    assert len(maps) == 1 and maps[0].is_identity()


def test_monomorphisms_c2_into_c4():
    c4 = cyclic_group(4)
    c2 = c4.subgroup([0, 2])
    assert len(monomorphisms(c2, c4.full_subgroup())) == 1


def test_aut_counts():
    v4 = get_entry("v4").group
    assert len(monomorphisms(v4.full_subgroup(), v4.full_subgroup())) == 6
    d8 = dihedral_8()
    assert len(monomorphisms(d8.full_subgroup(), d8.full_subgroup())) == 8
    q8 = quaternion_8()
    assert len(monomorphisms(q8.full_subgroup(), q8.full_subgroup())) == 24


def test_monomorphisms_match_brute_force():
    d8 = dihedral_8()
    subs, _ = all_subgroups(d8)
    full = d8.full_subgroup()
    for p in subs:
        if len(p) > 4:
            continue
        got = {m.image_tuple for m in monomorphisms(p, full)}
        assert got == brute_monomorphisms(p, full)
    v4 = get_entry("v4").group
    got = {m.image_tuple for m in monomorphisms(v4.full_subgroup(), v4.full_subgroup())}
    assert got == brute_monomorphisms(v4.full_subgroup(), v4.full_subgroup())


def test_group_map_validation():
    v4 = get_entry("v4").group
    full = v4.full_subgroup()
    p1 = v4.subgroup([0, 1])
    with pytest.raises(InvalidMorphism):
        GroupMap(p1, full, {0: 0, 1: 0})  # not injective
    with pytest.raises(InvalidMorphism):
        GroupMap(p1, full, {0: 1, 1: 0})  # not a homomorphism
    with pytest.raises(InvalidMorphism):
        GroupMap(p1, v4.subgroup([0, 3]), {0: 0, 1: 2})  # escapes codomain
    phi = GroupMap(p1, full, {0: 0, 1: 2})
    assert phi.inverse().image_tuple == (0, 1)
    assert phi.restrict(v4.trivial_subgroup()).image_tuple == (0,)


def test_direct_square_shape_and_roundtrip():
    for name in ("c2", "v4", "c3"):
        s = get_entry(name).group
        ds = direct_square(s)
        n = s.order
        assert ds.group.order == n * n
        for i in range(n):
            for j in range(n):
                x = ds.encode(i, j)
                assert ds.decode(x) == (i, j)
                assert ds.pi1(x) == i and ds.pi2(x) == j
        diag = [ds.encode(u, u) for u in range(n)]
        assert sorted({ds.pi1(x) for x in diag}) == list(range(n))
        assert sorted({ds.pi2(x) for x in diag}) == list(range(n))


def test_subgroup_rejects_junk():
    v4 = get_entry("v4").group
    with pytest.raises(DomainError):
        v4.subgroup([0, 1, 2])  # not closed
    with pytest.raises(DomainError):
        v4.subgroup([1])  # no identity
    with pytest.raises(DomainError):
        v4.subgroup([0, 9])  # out of range
