import pytest

from patchlab import catalog
from patchlab.bitorsors import enumerate_bitorsors
from patchlab.crossed import (
    H0,
    H0_ORIENTATION,
    H1Crossed,
    calibrate_h0_orientation,
    check_crossed_module,
    extension_classes_oracle,
    extension_from_cocycle,
    find_splitting,
    h_minus1,
    int_crossed_module,
    les2_sequence,
    myles_sequence,
    to_trivial_crossed_module,
)
from patchlab.errors import PreconditionFailed
from patchlab.galois import gamma_actions, make_gamma_group
from patchlab.groups import center, cyclic


def test_int_is_crossed_module_and_s3_to_one_is_not():
    s3 = make_gamma_group(catalog.group("C1"), catalog.group("S3"))
    assert check_crossed_module(int_crossed_module(s3))["valid"]
    rep = check_crossed_module(to_trivial_crossed_module(s3))
    assert not rep["valid"]
    peiffer = [x for x in rep["axioms"] if "peiffer" in x["axiom"].lower()]
    assert peiffer and not peiffer[0]["ok"] and peiffer[0]["witness"] is not None


def test_calibration_singles_out_frozen_orientation():
    cal = calibrate_h0_orientation()
    assert cal["orientation"] == H0_ORIENTATION
    assert any(not r["ok"] for r in cal["rows"])


@pytest.mark.parametrize("a", catalog.catalog_pairs(max_g=4, max_gamma=4), ids=lambda a: a.name)
def test_h0_counts_bitorsors(a):
    assert len(H0(a)) == len(enumerate_bitorsors(a, a))


def test_h_minus1_is_fixed_center():
    for a in gamma_actions(cyclic(2), catalog.group("D4")):
        cm = int_crossed_module(a)
        z = [x for x in center(a.g).elements if all(m[x] == x for m in a.act)]
        assert list(h_minus1(cm)) == z


@pytest.mark.parametrize("name,count", [("C2", 2), ("C3", 2), ("C4", 4), ("C2xC2", 3), ("S3", 1)])
def test_h1_crossed_against_extensions(name, count):
    a = make_gamma_group(cyclic(2), catalog.group(name))
    h1 = H1Crossed(a)
    assert len(h1) == count == len(extension_classes_oracle(a))


def test_neutral_classes_are_split_extensions():
    for name in ["C2", "C3", "C4", "C2xC2"]:
        a = make_gamma_group(cyclic(2), catalog.group(name))
        h1 = H1Crossed(a)
        for k, z in enumerate(h1.classes()):
            ext = extension_from_cocycle(a, z)
            assert h1.is_neutral(k) == (find_splitting(ext) is not None)


@pytest.mark.parametrize("a", catalog.catalog_pairs(max_g=4, max_gamma=2), ids=lambda a: a.name)
def test_crossed_module_sequence_exact(a):
    assert myles_sequence(a)["exact"]


def test_frozen_crossed_module_sequence_sizes():
    c2 = cyclic(2)
    assert myles_sequence(make_gamma_group(c2, c2))["sizes"] == [2, 2, 1, 2, 2, 1, 2]
    assert myles_sequence(make_gamma_group(c2, cyclic(3), {1: [0, 2, 1]}))["sizes"] == [1, 1, 2, 2, 1, 2, 2]


def test_central_sequence_gating_and_errors():
    s3 = make_gamma_group(catalog.group("C1"), catalog.group("S3"))
    rep = les2_sequence(s3)
    assert rep["exactness_asserted"] and rep["exact"]
    g = make_gamma_group(cyclic(2), catalog.group("C2xS3"))
    rep = les2_sequence(g)
    assert rep["zero_map"] and not rep["aut_to_quotient_aut_bijective"] and not rep["exactness_asserted"]
    with pytest.raises(PreconditionFailed):
        les2_sequence(s3, z_elems=[0, 1])
