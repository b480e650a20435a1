import pytest

from patchlab import catalog
from patchlab.errors import NotAHomomorphism
from patchlab.galois import (
    aut_gamma_group,
    center_gamma_group,
    fixed_points,
    gamma_actions,
    make_gamma_group,
    restrict,
)
from patchlab.groups import GroupHom, cyclic


def test_inversion_fixes_only_identity():
    a = make_gamma_group(cyclic(2), cyclic(3), {1: [0, 2, 1]})
    assert list(fixed_points(a).elements) == [0]


def test_non_homomorphic_action_reports_pair():
    # the generator of C3 cannot act on C4 by inversion (order 2 versus order 3)
    with pytest.raises(NotAHomomorphism) as e:
        make_gamma_group(cyclic(3), cyclic(4), {1: [0, 3, 2, 1]})
    assert len(e.value.detail["witness"]) == 2


def test_restriction_along_quotient_map():
    a = make_gamma_group(cyclic(2), cyclic(3), {1: [0, 2, 1]})
    f = GroupHom(cyclic(4), cyclic(2), [0, 1, 0, 1])
    r = restrict(a, f)
    assert r.act[1] == (0, 2, 1) and r.act[2] == (0, 1, 2)


def test_action_counts_up_to_conjugacy():
    assert len(gamma_actions(cyclic(2), catalog.group("C2xC2"))) == 2
    assert len(gamma_actions(catalog.group("C2xC2"), catalog.group("S3"))) == 4
    assert len(gamma_actions(cyclic(2), catalog.group("C2xC2"), up_to_conjugacy=False)) == 4


def test_aut_action_is_conjugation_and_center_is_stable():
    for a in gamma_actions(cyclic(2), catalog.group("D4")):
        b = aut_gamma_group(a)
        assert b.act[0] == tuple(range(b.g.order))
        z, sub = center_gamma_group(a)
        assert z.g.order == 2
