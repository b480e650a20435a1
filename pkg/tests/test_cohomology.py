import itertools

import pytest

from patchlab import catalog
from patchlab.cohomology import H1, H2, is_cocycle2, restriction_map, z1_cocycles
from patchlab.galois import gamma_actions, make_gamma_group
from patchlab.groups import GroupHom, cyclic


def brute_h1(a):
    """All maps gamma -> G checked directly, classes by explicit twisting."""
    gm, m, inv = a.gamma.mul, a.g.mul, a.g.inv
    cocycles = [v for v in itertools.product(a.g.elements, repeat=a.gamma.order)
                if all(v[gm[s][t]] == m[v[s]][a.act[s][v[t]]] for s in a.gamma.elements for t in a.gamma.elements)]
    classes = set()
    for v in cocycles:
        classes.add(frozenset(tuple(m[m[b][v[s]]][a.act[s][inv[b]]] for s in a.gamma.elements)
                              for b in a.g.elements))
    return len(cocycles), len(classes)


def brute_h2(a):
    """Normalized 2-cocycles modulo coboundaries, over all cochains."""
    gam, g = a.gamma, a.g
    others = [s for s in gam.elements if s != gam.identity]
    cells = [(s, t) for s in others for t in others]
    cocycles = []
    for vals in itertools.product(g.elements, repeat=len(cells)):
        c = [[g.identity] * gam.order for _ in gam.elements]
        for (s, t), v in zip(cells, vals):
            c[s][t] = v
        if is_cocycle2(a, c):
            cocycles.append(tuple(map(tuple, c)))
    bounds = set()
    for vals in itertools.product(g.elements, repeat=len(others)):
        b = [g.identity] * gam.order
        for s, v in zip(others, vals):
            b[s] = v
        bounds.add(tuple(tuple(g.mul[g.mul[a.act[s][b[t]]][g.inv[b[gam.mul[s][t]]]]][b[s]] for t in gam.elements)
                         for s in gam.elements))
    return len(cocycles) // len(bounds)


SMALL = [a for a in catalog.catalog_pairs(max_g=6, max_gamma=4)]


@pytest.mark.parametrize("a", SMALL, ids=lambda a: a.name)
def test_h1_matches_brute_force(a):
    if a.g.order ** a.gamma.order > 20000:
        pytest.skip("brute force too large")
    n_cocycles, n_classes = brute_h1(a)
    assert len(z1_cocycles(a)) == n_cocycles
    assert len(H1(a)) == n_classes


ABELIAN = [a for a in catalog.catalog_pairs(max_g=4, max_gamma=4) if a.g.is_abelian
           and a.g.order ** ((a.gamma.order - 1) ** 2) <= 300000]


@pytest.mark.parametrize("a", ABELIAN, ids=lambda a: a.name)
def test_h2_matches_brute_force(a):
    assert len(H2(a)) == brute_h2(a)


def test_frozen_h1_and_h2_values():
    c2, c3, c4 = cyclic(2), cyclic(3), cyclic(4)
    inv3 = make_gamma_group(c2, c3, {1: [0, 2, 1]})
    assert len(H1(make_gamma_group(c2, c2))) == 2
    assert len(H1(inv3)) == 1
    assert len(H1(make_gamma_group(c2, catalog.group("S3")))) == 2
    k = catalog.group("C2xC2")
    assert len(H2(make_gamma_group(c2, c2))) == 2
    assert len(H2(inv3)) == 1
    assert len(H2(make_gamma_group(c2, c4))) == 2
    assert len(H2(make_gamma_group(k, c2))) == 8
    assert len(H2(make_gamma_group(c4, c2))) == 2
    assert len(H2(make_gamma_group(k, k))) == 64
    assert len(H2(make_gamma_group(c3, c3))) == 3
    assert len(H2(make_gamma_group(c4, c4))) == 4
    assert len(H2(make_gamma_group(c2, c4, {1: [0, 3, 2, 1]}))) == 2


def test_h2_group_law_and_restriction():
    k = catalog.group("C2xC2")
    a = make_gamma_group(k, cyclic(2))
    h = H2(a)
    assert h.group.order == 8 and all(h.mul[x][x] == 0 for x in range(8))
    f = GroupHom(cyclic(2), k, [0, 2])
    images = {restriction_map(c, f).values for c in h.classes()}
    assert len(images) == 2
