import pytest
from hypothesis import given, settings, strategies as st

from patchlab import catalog
from patchlab.bitorsors import (
    are_isomorphic,
    bitorsor_from_h0,
    class_index,
    cocycle_from_torsor,
    enumerate_bitorsors,
    enumerate_torsors,
    h0_pair,
    opposite,
    torsor_from_cocycle,
    trivial_bitorsor,
    wedge,
)
from patchlab.cohomology import H1
from patchlab.galois import make_gamma_group
from patchlab.groups import cyclic


@pytest.mark.parametrize("name", ["C1", "C3", "S3", "Q8", "C2xC2", "D4"])
def test_trivial_gamma_bitorsors_count_out(name):
    a = make_gamma_group(catalog.group("C1"), catalog.group(name))
    assert len(enumerate_bitorsors(a, a)) == a.aut.out[0].order


def test_frozen_bitorsor_counts():
    c2 = cyclic(2)
    assert len(enumerate_bitorsors(*[make_gamma_group(c2, cyclic(3), {1: [0, 2, 1]})] * 2)) == 2
    assert len(enumerate_bitorsors(*[make_gamma_group(c2, c2)] * 2)) == 2


@pytest.mark.parametrize("a", catalog.catalog_pairs(max_g=6, max_gamma=4), ids=lambda a: a.name)
def test_torsor_classes_match_h1(a):
    assert len(enumerate_torsors(a)) == len(H1(a))


def test_torsor_cocycle_round_trip():
    a = make_gamma_group(cyclic(2), catalog.group("S3"))
    h = H1(a)
    for c in h.classes():
        t = torsor_from_cocycle(c)
        assert h.class_of(cocycle_from_torsor(t).values) == h.class_of(c.values)


def test_h0_pair_round_trip():
    a = make_gamma_group(cyclic(2), cyclic(3), {1: [0, 2, 1]})
    for b in enumerate_bitorsors(a, a):
        u, phi = h0_pair(b)
        assert are_isomorphic(bitorsor_from_h0(a, u, phi), b) is not None


WEDGE_CASES = [a for a in catalog.catalog_pairs(max_g=6, max_gamma=2)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(WEDGE_CASES), st.data())
def test_wedge_is_a_group_law_on_classes(a, data):
    reps = enumerate_bitorsors(a, a)
    p, q, r = (data.draw(st.sampled_from(reps)) for _ in range(3))
    e = trivial_bitorsor(a)
    assert are_isomorphic(wedge(e, p), p) is not None
    assert are_isomorphic(wedge(p, e), p) is not None
    assert are_isomorphic(wedge(p, opposite(p)), e) is not None
    assert class_index(wedge(wedge(p, q), r), reps) == class_index(wedge(p, wedge(q, r)), reps)
