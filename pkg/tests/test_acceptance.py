"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line and honouring its time limit."""

import itertools
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from patchlab import catalog
from patchlab.bitorsors import are_isomorphic, class_index, enumerate_bitorsors, opposite, trivial_bitorsor, wedge
from patchlab.crossed import (
    H0,
    H1Crossed,
    check_crossed_module,
    extension_classes_oracle,
    h_minus1,
    int_crossed_module,
    myles_sequence,
    to_trivial_crossed_module,
)
from patchlab.errors import LiftFailed, PreconditionFailed
from patchlab.galois import gamma_actions, make_gamma_group
from patchlab.groups import automorphism_group, center
from patchlab.patching import (
    Band,
    SystemCohomology,
    center_factorization_algorithm,
    h2_band,
    local_global_report,
    mayer_vietoris_report,
)

DOCS = Path(__file__).resolve().parent.parent / "docs" / "instances"
C1 = catalog.group("C1")


@pytest.fixture
def criterion(capsys):
    """Time the body, print one result line and enforce the limit."""

    class Run:
        def __init__(self, number, title, limit):
            self.number, self.title, self.limit = number, title, limit

        def __enter__(self):
            self.start = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            elapsed = time.perf_counter() - self.start
            ok = exc_type is None and elapsed <= self.limit
            with capsys.disabled():
                print(f"\n[acceptance {self.number:>2}] {'PASS' if ok else 'FAIL'} {self.title} "
                      f"({elapsed:.1f}s, limit {self.limit}s)")
            if exc_type is None:
                assert elapsed <= self.limit, f"criterion {self.number} took {elapsed:.1f}s"
            return False

    Run.capsys_disabled = staticmethod(capsys.disabled)
    return Run


def test_01_crossed_module_axioms(criterion):
    with criterion(1, "Int crossed modules valid for |G| <= 12; S3 -> 1 fails Peiffer", 10):
        for name in catalog.group_names(12):
            rep = check_crossed_module(int_crossed_module(make_gamma_group(C1, catalog.group(name))))
            assert rep["valid"], name
        rep = check_crossed_module(to_trivial_crossed_module(make_gamma_group(C1, catalog.group("S3"))))
        peiffer = [x for x in rep["axioms"] if x["axiom"].startswith("Peiffer")]
        assert not rep["valid"] and not peiffer[0]["ok"] and peiffer[0]["witness"]


def test_02_h_minus1_is_fixed_center(criterion):
    with criterion(2, "H^-1(G -> Aut G) = Z(G)^Gamma for |G| <= 8, |Gamma| <= 4", 10):
        pairs = catalog.catalog_pairs(max_g=8, max_gamma=4)
        for a in pairs:
            g = a.g
            z = [x for x in g.elements if all(g.mul[x][y] == g.mul[y][x] for y in g.elements)
                 and all(m[x] == x for m in a.act)]
            assert list(h_minus1(int_crossed_module(a))) == z, a.name
        assert len(pairs) > 100


def test_03_h0_matches_bitorsors(criterion):
    with criterion(3, "|H0| = #bitorsor classes for |G| <= 6, |Gamma| <= 4; = |Out G| for trivial Gamma", 120):
        for a in catalog.catalog_pairs(max_g=6, max_gamma=4):
            n = len(enumerate_bitorsors(a, a))
            assert len(H0(a)) == n, a.name
            if a.gamma.order == 1:
                assert n == automorphism_group(a.g).out[0].order, a.name


def test_04_h1_crossed_matches_extensions(criterion):
    with criterion(4, "|H1(G -> Aut G)| = #extension classes for Gamma = Z/2, G in {Z/2, Z/3, Z/4, Z/2xZ/2}", 120):
        c2 = catalog.group("C2")
        for name in ["C2", "C3", "C4", "C2xC2"]:
            for a in gamma_actions(c2, catalog.group(name)):
                assert len(H1Crossed(a)) == len(extension_classes_oracle(a)), a.name
        assert len(H1Crossed(make_gamma_group(c2, catalog.group("C2")))) == 2
        assert len(H1Crossed(make_gamma_group(c2, catalog.group("C3")))) == 2


def test_05_crossed_module_sequence_exact(criterion):
    with criterion(5, "crossed-module long exact sequence exact at every node, |G| <= 6, |Gamma| <= 4", 300):
        bad = [a.name for a in catalog.catalog_pairs(max_g=6, max_gamma=4) if not myles_sequence(a)["exact"]]
        assert bad == []


def test_06_wedge_group_laws(criterion):
    with criterion(6, "wedge unit, inverse via opposite and associativity on all classes, |G| <= 6, |Gamma| <= 2", 60):
        for a in catalog.catalog_pairs(max_g=6, max_gamma=2):
            reps = enumerate_bitorsors(a, a)
            e = trivial_bitorsor(a)
            prod = [[class_index(wedge(p, q), reps) for q in reps] for p in reps]
            for i, p in enumerate(reps):
                assert are_isomorphic(wedge(e, p), p) is not None, a.name
                assert are_isomorphic(wedge(p, e), p) is not None, a.name
                assert are_isomorphic(wedge(p, opposite(p)), e) is not None, a.name
                assert are_isomorphic(wedge(opposite(p), p), e) is not None, a.name
            n = len(reps)
            for i, j, k in itertools.product(range(n), repeat=3):
                assert prod[prod[i][j]][k] == prod[i][prod[j][k]], a.name
            # the class product is computed on objects, so check it against a direct triple wedge
            for p, q, r in itertools.islice(itertools.product(reps, repeat=3), 27):
                assert are_isomorphic(wedge(wedge(p, q), r), wedge(p, wedge(q, r))) is not None, a.name


def _bands(gamma, g):
    out = automorphism_group(g).out[0]
    for kappa in itertools.product(range(out.order), repeat=gamma.order):
        if kappa[0] != 0:
            continue
        try:
            yield Band(gamma, g, kappa)
        except Exception:
            continue


def test_07_giraud_action(criterion):
    with criterion(7, "H2(Z) acts simply transitively on every nonempty band fiber, Gamma in {Z/2, Z/2xZ/2}, |G| <= 6", 120):
        nonempty = 0
        for gname in ["C2", "C2xC2"]:
            gamma = catalog.group(gname)
            for g in catalog.groups_up_to(6):
                for band in _bands(gamma, g):
                    rep = h2_band(gamma, band)
                    if not rep["empty"]:
                        nonempty += 1
                        assert rep["simply_transitive"], (gname, g.name, band.kappa)
        assert nonempty > 0


def _sweep():
    for name in catalog.system_names():
        s = catalog.system(name)
        for a in catalog.system_instances(s, 6):
            yield s, a


def test_08_mayer_vietoris(criterion):
    with criterion(8, "Mayer-Vietoris nodes exact wherever patching is verified, all catalog systems, |G| <= 6", 600):
        verified = 0
        for s, a in _sweep():
            rep = mayer_vietoris_report(s, a)
            hyp = rep["hypotheses"]
            if hyp["bitorsor_patching"] and hyp["limit_equalizer"]:
                verified += 1
                bad = [n["node"] for n in rep["nodes"] if n["asserted"] and n["exact"] is False]
                assert not bad, (s.name, a.name, bad)
        assert verified > 0


def test_09_local_global(criterion):
    with criterion(9, "local-global equivalences hold on every hypothesis-verified catalog instance, |G| <= 6", 600):
        checked = 0
        for s, a in _sweep():
            rep = local_global_report(s, a)
            assert not rep["counterexamples"], json.dumps(rep["counterexamples"])
            assert rep["bitorsor_equivalence"] is not False and rep["gerbe_equivalence"] is not False
            checked += rep["bitorsor_equivalence"] is not None
        assert checked > 0


def _center_instances():
    from patchlab.groups import is_complete, quotient
    # abelian groups (Z = G) up to order 6, and the order-12 groups whose central quotient is S3
    names = catalog.group_names(6) + ["Dic3", "C2xS3"]
    for sname in catalog.system_names():
        s = catalog.system(sname)
        if not s.bipartite_roles:
            continue
        for name in names:
            g = catalog.group(name)
            z = list(center(g).elements)
            if len(z) == 1 or not is_complete(quotient(g, z)[0])[0]:
                continue
            for a in gamma_actions(s.gamma_f, g):
                yield s, a, z


def test_10_center_algorithm(criterion):
    with criterion(10, "central reduction witnesses re-verify and never hit a lift failure", 300):
        verified = nontrivial = precondition = 0
        for s, a, z in _center_instances():
            hg = SystemCohomology(s, a, "h0")
            for classes in itertools.product(*[range(len(hg.local[k])) for k in s.edges]):
                try:
                    rep = center_factorization_algorithm(s, a, z, dict(zip(s.edges, classes)))
                except PreconditionFailed:
                    precondition += 1
                    continue
                except LiftFailed as e:  # pragma: no cover - release-blocking
                    pytest.fail(f"lift failed on {s.name} {a.name} {classes}: {e.detail}")
                assert rep["verified_classes"] and rep["verified_objects"], (s.name, a.name, classes)
                verified += 1
                nontrivial += any(classes)
        with criterion.capsys_disabled():
            print(f"\n    central reduction: {verified} verified ({nontrivial} nontrivial), "
                  f"{precondition} precondition-failed")
        assert verified > 0 and nontrivial > 0


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "patchlab", *map(str, argv), "--format", "machine"],
                          capture_output=True, timeout=600).stdout


def test_11_cli_determinism(criterion):
    with criterion(11, "repeated CLI runs give byte-identical machine reports", 300):
        runs = [(p,) for p in sorted(DOCS.glob("*.json"))] + [("--seed-suite", "smoke")]
        for argv in runs:
            first = _cli(*argv)
            assert first and first == _cli(*argv), argv
