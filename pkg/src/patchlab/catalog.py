"""Named groups, Galois models and factorization systems used by tests and the CLI."""

from __future__ import annotations

from functools import lru_cache

from .errors import InvalidInput
from .galois import GammaGroup, gamma_actions
from .groups import (
    FiniteGroup,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    quaternion8,
    semidirect_cyclic,
    symmetric,
    trivial_group,
)
from .patching import FactorizationSystem, subgroup_system

_GROUPS = {
    "C1": trivial_group,
    "C2": lambda: cyclic(2),
    "C3": lambda: cyclic(3),
    "C4": lambda: cyclic(4),
    "C2xC2": lambda: direct_product(cyclic(2), cyclic(2)),
    "C5": lambda: cyclic(5),
    "C6": lambda: cyclic(6),
    "S3": lambda: symmetric(3),
    "C7": lambda: cyclic(7),
    "C8": lambda: cyclic(8),
    "C4xC2": lambda: direct_product(cyclic(4), cyclic(2)),
    "C2xC2xC2": lambda: direct_product(cyclic(2), cyclic(2), cyclic(2)),
    "D4": lambda: dihedral(4),
    "Q8": quaternion8,
    "C9": lambda: cyclic(9),
    "C3xC3": lambda: direct_product(cyclic(3), cyclic(3)),
    "C10": lambda: cyclic(10),
    "D5": lambda: dihedral(5),
    "C11": lambda: cyclic(11),
    "C12": lambda: cyclic(12),
    "C6xC2": lambda: direct_product(cyclic(6), cyclic(2)),
    "D6": lambda: dihedral(6),
    "A4": lambda: alternating(4),
    "Dic3": lambda: semidirect_cyclic(3, 4, 2, name="Dic3"),
    "C2xS3": lambda: direct_product(cyclic(2), symmetric(3)),
    "S4": lambda: symmetric(4),
}

GAMMAS = ("C1", "C2", "C3", "C4", "C2xC2")


@lru_cache(maxsize=None)
def group(name: str) -> FiniteGroup:
    if name not in _GROUPS:
        raise InvalidInput(f"unknown catalog group {name!r}", known=sorted(_GROUPS))
    g = _GROUPS[name]()
    g.name = name
    return g


def group_names(max_order: int = 12) -> list[str]:
    """One name per isomorphism type up to ``max_order`` (order 12 and below are complete)."""
    names = [n for n in _GROUPS if n not in ("C2xS3", "S4")]
    return [n for n in names if group(n).order <= max_order]


def groups_up_to(max_order: int = 12) -> list[FiniteGroup]:
    return [group(n) for n in group_names(max_order)]


def gamma_groups(max_order: int = 4) -> list[FiniteGroup]:
    return [group(n) for n in GAMMAS if group(n).order <= max_order]


def catalog_pairs(max_g: int = 6, max_gamma: int = 4) -> list[GammaGroup]:
    """Every action (up to conjugacy) of a catalog Gamma on a catalog group."""
    out = []
    for gam in gamma_groups(max_gamma):
        for g in groups_up_to(max_g):
            for n, a in enumerate(gamma_actions(gam, g)):
                a.name = f"{g.name}@{gam.name}#{n}"
                out.append(a)
    return out


# ---------------------------------------------------------------- systems

# Klein four group elements: 0 = e, 1 = b, 2 = a, 3 = ab
_SYSTEMS = {
    "trivial-edge": ("C1", {"v0": [0], "v1": [0], "e0": [0]}, [("v0", "v1", "e0")]),
    "c2-split": ("C2", {"v0": [1], "v1": [0], "e0": [0]}, [("v0", "v1", "e0")]),
    "c2-full": ("C2", {"v0": [1], "v1": [1], "e0": [1]}, [("v0", "v1", "e0")]),
    "c2-blind": ("C2", {"v0": [0], "v1": [0], "e0": [0]}, [("v0", "v1", "e0")]),
    "c4-edge": ("C4", {"v0": [1], "v1": [2], "e0": [2]}, [("v0", "v1", "e0")]),
    "klein-split": ("C2xC2", {"v0": [2], "v1": [1], "e0": [0]}, [("v0", "v1", "e0")]),
    "klein-path": ("C2xC2", {"v0": [2], "v1": [0], "v2": [1], "e0": [0], "e1": [0]},
                   [("v0", "v1", "e0"), ("v2", "v1", "e1")]),
    "c2-star": ("C2", {"c": [1], "x": [0], "y": [1], "z": [0], "e0": [0], "e1": [1], "e2": [0]},
                [("c", "x", "e0"), ("c", "y", "e1"), ("c", "z", "e2")]),
    "klein-star": ("C2xC2", {"c": [0], "x": [2], "y": [1], "z": [3], "e0": [0], "e1": [0], "e2": [0]},
                   [("c", "x", "e0"), ("c", "y", "e1"), ("c", "z", "e2")]),
    "trivial-triangle": ("C1", {"a": [0], "b": [0], "c": [0], "x": [0], "y": [0], "z": [0]},
                         [("a", "b", "x"), ("b", "c", "y"), ("c", "a", "z")]),
    "klein-triangle": ("C2xC2", {"a": [2], "b": [1], "c": [3], "x": [0], "y": [0], "z": [0]},
                       [("a", "b", "x"), ("b", "c", "y"), ("c", "a", "z")]),
}


@lru_cache(maxsize=None)
def system(name: str) -> FactorizationSystem:
    if name not in _SYSTEMS:
        raise InvalidInput(f"unknown catalog system {name!r}", known=sorted(_SYSTEMS))
    master, subs, triples = _SYSTEMS[name]
    return subgroup_system(group(master), subs, triples, name=name)


def system_names() -> list[str]:
    return list(_SYSTEMS)


def system_instances(sys: FactorizationSystem, max_g: int = 6) -> list[GammaGroup]:
    """Every catalog group with every action of the system's limit group."""
    out = []
    for g in groups_up_to(max_g):
        for n, a in enumerate(gamma_actions(sys.gamma_f, g)):
            a.name = f"{g.name}@{sys.gamma_f.name}#{n}"
            out.append(a)
    return out
