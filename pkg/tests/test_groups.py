import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_automorphisms
from patchlab import catalog
from patchlab.errors import NoIdentity, NoInverse, NonAssociative, NotClosed, ResourceLimit, limits
from patchlab.groups import (
    FiniteGroup,
    are_isomorphic_groups,
    automorphism_group,
    build_group,
    center,
    cyclic,
    direct_product,
    is_complete,
    quotient,
    symmetric,
)


def test_bad_tables_are_rejected_with_witnesses():
    with pytest.raises(NotClosed):
        FiniteGroup([[0, 2], [1, 0]])
    with pytest.raises(NoIdentity):
        FiniteGroup([[1, 0], [1, 0]])
    with pytest.raises(NoInverse) as e:
        FiniteGroup([[0, 1], [1, 1]])
    assert e.value.detail["witness"] == [1]
    # a Latin square with identity that is not associative (order 5)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NonAssociative):
        FiniteGroup(loop)


def test_catalog_up_to_12_has_distinct_isomorphism_types():
    gs = catalog.groups_up_to(12)
    assert len(gs) == 24
    by_order = {}
    for g in gs:
        by_order.setdefault(g.order, []).append(g)
    assert {n: len(v) for n, v in by_order.items()} == {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2,
                                                         10: 2, 11: 1, 12: 5}
    for same in by_order.values():
        for i, g in enumerate(same):
            for h in same[i + 1:]:
                assert not are_isomorphic_groups(g, h)


@pytest.mark.parametrize("name", ["C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3"])
def test_automorphism_group_matches_permutation_search(name):
    g = catalog.group(name)
    assert sorted(automorphism_group(g).autos) == sorted(brute_automorphisms(g))


@pytest.mark.parametrize("name,order", [("D4", 8), ("Q8", 24), ("C2xC2xC2", 168), ("A4", 24), ("Dic3", 12),
                                        ("D6", 12), ("C3xC3", 48)])
def test_automorphism_orders(name, order):
    assert len(automorphism_group(catalog.group(name)).autos) == order


def test_center_quotient_and_completeness(s3):
    assert list(center(s3).elements) == [s3.identity]
    assert is_complete(s3)[0]
    ok, cert = is_complete(cyclic(3))
    assert not ok and cert["reason"] == "nontrivial center"
    g = direct_product(cyclic(2), symmetric(3))
    q, proj = quotient(g, center(g).elements)
    assert are_isomorphic_groups(q, s3)
    assert len(set(proj.map)) == 6


def test_out_orders():
    expected = {"C3": 2, "S3": 1, "Q8": 6, "C2xC2": 6, "D4": 2, "A4": 2, "C1": 1}
    for name, n in expected.items():
        assert automorphism_group(catalog.group(name)).out[0].order == n


def test_order_limit():
    with limits(max_order=5):
        with pytest.raises(ResourceLimit):
            build_group({"kind": "symmetric", "degree": 3})


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(catalog.group_names(12)), st.data())
def test_tables_are_groups(name, data):
    g = catalog.group(name)
    x, y, z = (data.draw(st.sampled_from(g.elements)) for _ in range(3))
    m = g.mul
    assert m[m[x][y]][z] == m[x][m[y][z]]
    assert m[x][g.inv[x]] == g.identity
    assert m[g.identity][x] == x
