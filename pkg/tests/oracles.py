"""Independent brute-force oracles used to pin expected values in the tests."""

from fractions import Fraction
from itertools import combinations, permutations, product

from fusionreal import VirtualGSet, lattice
from fusionreal.bisets import _fixed_by_class


def brute_subgroups(group):
    """Every subgroup by scanning all subsets containing the identity (|G| <= 10)."""
    n = group.order
    assert n <= 10
    t = group.table
    found = set()
    rest = [x for x in range(1, n)]
    for k in range(n):
        for extra in combinations(rest, k):
            cand = (0,) + extra
            cset = set(cand)
            if all(t[a][b] in cset for a in cand for b in cand):
                found.add(cand)
    return found


def brute_monomorphisms(p_sub, q_sub):
    """All injective homomorphisms by scanning every injective assignment."""
    g = p_sub.group
    t = g.table
    pel = p_sub.elements
    found = set()
    for images in permutations(q_sub.elements, len(pel)):
        m = dict(zip(pel, images))
        if all(m[t[a][b]] == t[m[a]][m[b]] for a in pel for b in pel if t[a][b] in m):
            if all(t[a][b] in m for a in pel for b in pel):
                found.add(images)
    return found


def brute_fixed_points(biset, d_elements):
    """Fixed points of a subgroup of S x S on an explicit biset, by full scan."""
    s = biset.acting
    n = s.order
    inv = s.inv
    count = 0
    pairs = [divmod(x, n) for x in d_elements]
    for x in range(biset.num_points):
        if all(biset.left[a][biset.right[x][inv[b]]] == x for a, b in pairs):
            count += 1
    return count


def brute_right_equivariant_count(biset):
    """Number of right-equivariant bijections, by enumerating basepoint images."""
    s = biset.acting
    n = s.order
    pts = biset.num_points
    orbit_of = [-1] * pts
    reps = []
    for x in range(pts):
        if orbit_of[x] == -1:
            reps.append(x)
            for b in range(n):
                orbit_of[biset.right[x][b]] = len(reps) - 1
    count = 0
    for images in product(range(pts), repeat=len(reps)):
        g = {}
        ok = True
        for rep, y in zip(reps, images):
            for b in range(n):
                src = biset.right[rep][b]
                dst = biset.right[y][b]
                if src in g and g[src] != dst:
                    ok = False
                    break
                g[src] = dst
            if not ok:
                break
        if ok and len(set(g.values())) == pts:
            count += 1
    return count


def naive_stabilize(x0, fusion_classes, repair):
    """Reference repair loop: equalize any still-unbalanced class, largest first,
    until every fusion class has constant counts."""
    lat = lattice(x0.ambient)
    fclasses = [sorted({lat.class_id_of(sub) for sub in fc}) for fc in fusion_classes]
    h_ids = {lat.class_id_of(sub) for sub in repair}
    ids = dict(x0._ids)
    for _ in range(10 * lat.num_classes + 10):
        cur = VirtualGSet._make(x0.ambient, ids)
        fix = {c: _fixed_by_class(cur, lat, c) for c in range(lat.num_classes)}
        bad = [fc for fc in fclasses if len({fix[c] for c in fc}) > 1]
        if not bad:
            return cur
        fc = max(bad, key=lambda f: (len(lat.class_rep_tuple(f[0])),
                                     [-x for x in lat.class_rep_tuple(f[0])]))
        assert all(c in h_ids for c in fc)
        top = max(fix[c] for c in fc)
        for c in fc:
            coeff = (top - fix[c]) / lat.normalizer_quotient_order(c)
            if coeff:
                ids[c] = ids.get(c, Fraction(0)) + coeff
    raise AssertionError("naive stabilizer did not converge")
