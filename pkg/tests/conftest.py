import itertools

import pytest

from patchlab import catalog


def brute_automorphisms(g):
    """Bijections preserving the table, by full permutation search (independent oracle)."""
    out = []
    for perm in itertools.permutations(g.elements):
        if perm[g.identity] != g.identity:
            continue
        if all(perm[g.mul[x][y]] == g.mul[perm[x]][perm[y]] for x in g.elements for y in g.elements):
            out.append(perm)
    return out


@pytest.fixture
def s3():
    return catalog.group("S3")


@pytest.fixture
def klein():
    return catalog.group("C2xC2")
