"""Galois models: a finite group Gamma acting on a finite group G.

A field is represented only by its (finite) Galois group, and an algebraic
group over it by a Gamma-group. Base change along a field extension is
pullback of the action along a homomorphism Gamma' -> Gamma.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .errors import NotAHomomorphism, InvalidInput
from .groups import (
    AutomorphismGroup,
    FiniteGroup,
    GroupHom,
    Map,
    Subgroup,
    automorphism_group,
    compose,
    homomorphisms,
    identity_map,
    invert_map,
    is_homomorphism,
    subgroup,
)


class GammaGroup:
    """``g`` with a left action of ``gamma`` by automorphisms.

    ``act[s]`` is the automorphism (as an image table) by which the element
    ``s`` of gamma acts; ``A.apply(s, x)`` is the usual left exponent ^s x.
    """

    def __init__(self, gamma: FiniteGroup, g: FiniteGroup, act: Sequence[Sequence[int]], name=None):
        self.gamma = gamma
        self.g = g
        self.act = tuple(tuple(a) for a in act)
        self.name = name or f"{g.name}@{gamma.name}"
        self._hash = hash((gamma, g, self.act))

    def __eq__(self, other):
        return (isinstance(other, GammaGroup) and self.gamma == other.gamma
                and self.g == other.g and self.act == other.act)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GammaGroup({self.name})"

    def apply(self, s: int, x: int) -> int:
        return self.act[s][x]

    @cached_property
    def is_trivial_action(self) -> bool:
        ident = identity_map(self.g.order)
        return all(a == ident for a in self.act)

    @cached_property
    def act_inv(self) -> tuple:
        return tuple(invert_map(a) for a in self.act)

    @cached_property
    def aut(self) -> AutomorphismGroup:
        return automorphism_group(self.g)

    @cached_property
    def act_index(self) -> tuple:
        """Index in Aut(g) of each acting automorphism."""
        return tuple(self.aut.index[a] for a in self.act)

    def to_dict(self) -> dict:
        return {"gamma": self.gamma.name, "g": self.g.name, "act": [list(a) for a in self.act]}


def make_gamma_group(gamma: FiniteGroup, g: FiniteGroup, action: Mapping[int, Sequence[int]] | None = None,
                     name=None) -> GammaGroup:
    """Validated Gamma-group.

    ``action`` maps elements of gamma (typically its generators) to
    automorphisms of g; omitted elements are filled in by composing along
    the Cayley graph of gamma, and any inconsistency is reported as
    ``NotAHomomorphism`` with the offending pair ``(s, t)``. ``None`` gives
    the trivial action.
    """
    ident = identity_map(g.order)
    if not action:
        return GammaGroup(gamma, g, [ident] * gamma.order, name=name)
    action = {int(k): tuple(int(x) for x in v) for k, v in action.items()}
    for s, a in action.items():
        if not 0 <= s < gamma.order:
            raise InvalidInput(f"{s} is not an element of {gamma.name}")
        if len(a) != g.order or sorted(a) != list(g.elements) or is_homomorphism(g, g, a) is not None:
            raise NotAHomomorphism(f"image of {s} is not an automorphism of {g.name}", witness=[s])
    seq, parent = gamma.bfs_tree
    act: list = [None] * gamma.order
    act[gamma.identity] = ident
    gen_img = {}
    for x in gamma.generators:
        gen_img[x] = action.get(x)
    if any(v is None for v in gen_img.values()):
        # fall back: images given on a non-standard generating set
        act = _extend_from_arbitrary(gamma, g, action)
    else:
        for x in seq[1:]:
            p, s = parent[x]
            act[x] = compose(act[p], gen_img[s])
    for s in gamma.elements:
        for t in gamma.elements:
            if act[gamma.mul[s][t]] != compose(act[s], act[t]):
                raise NotAHomomorphism(f"act({s}*{t}) != act({s}) o act({t})", witness=[s, t])
    for s, a in action.items():
        if act[s] != a:
            raise NotAHomomorphism(f"given image of {s} conflicts with the generated action", witness=[s, s])
    return GammaGroup(gamma, g, act, name=name)


def _extend_from_arbitrary(gamma: FiniteGroup, g: FiniteGroup, action: dict) -> list:
    act: dict = {gamma.identity: identity_map(g.order)}
    frontier = [gamma.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, a in action.items():
                y = gamma.mul[x][s]
                img = compose(act[x], a)
                if y not in act:
                    act[y] = img
                    nxt.append(y)
                elif act[y] != img:
                    raise NotAHomomorphism(f"act({x}*{s}) is inconsistent", witness=[x, s])
        frontier = nxt
    if len(act) != gamma.order:
        raise InvalidInput("action must be given on a generating set of gamma")
    return [act[s] for s in gamma.elements]


def trivial_action(gamma: FiniteGroup, g: FiniteGroup) -> GammaGroup:
    return make_gamma_group(gamma, g, None)


def fixed_points(a: GammaGroup) -> Subgroup:
    elems = [x for x in a.g.elements if all(m[x] == x for m in a.act)]
    return subgroup(a.g, elems, name=f"{a.g.name}^{a.gamma.name}")


def restrict(a: GammaGroup, f: GroupHom) -> GammaGroup:
    """Base change: the same group with the action pulled back along f."""
    if f.dst != a.gamma:
        raise InvalidInput("homomorphism does not land in the Galois model of the Gamma-group")
    return GammaGroup(f.src, a.g, [a.act[f.map[s]] for s in f.src.elements])


def sub_gamma_group(a: GammaGroup, elems) -> tuple[GammaGroup, Subgroup]:
    """Restrict the action to a Gamma-stable subgroup of ``a.g``."""
    sub = subgroup(a.g, elems)
    index = {x: i for i, x in enumerate(sub.elements)}
    act = []
    for m in a.act:
        try:
            act.append(tuple(index[m[x]] for x in sub.elements))
        except KeyError:
            raise InvalidInput("subgroup is not stable under the action") from None
    return GammaGroup(a.gamma, sub.group, act), sub


def center_gamma_group(a: GammaGroup) -> tuple[GammaGroup, Subgroup]:
    from .groups import center
    return sub_gamma_group(a, center(a.g).elements)


def quotient_gamma_group(a: GammaGroup, proj: GroupHom) -> GammaGroup:
    """Induced action on a quotient ``proj: g -> q`` with Gamma-stable kernel."""
    q = proj.dst
    act = []
    for m in a.act:
        img = [None] * q.order
        for x in a.g.elements:
            y, z = proj.map[x], proj.map[m[x]]
            if img[y] is None:
                img[y] = z
            elif img[y] != z:
                raise InvalidInput("kernel is not stable under the action")
        act.append(tuple(img))
    return GammaGroup(a.gamma, q, act)


class EquivariantHom:
    """A homomorphism of Gamma-groups commuting with the actions."""

    def __init__(self, src: GammaGroup, dst: GammaGroup, hom: GroupHom | Sequence[int], validate=True):
        if not isinstance(hom, GroupHom):
            hom = GroupHom(src.g, dst.g, hom, validate=validate)
        self.src, self.dst, self.hom = src, dst, hom
        if validate:
            if src.gamma != dst.gamma:
                raise InvalidInput("equivariant maps need a common Galois model")
            f = hom.map
            for s in src.gamma.elements:
                for x in src.g.elements:
                    if f[src.act[s][x]] != dst.act[s][f[x]]:
                        raise NotAHomomorphism(f"f(^{s}{x}) != ^{s}f({x})", witness=[s, x])

    def __call__(self, x):
        return self.hom.map[x]


@lru_cache(maxsize=None)
def aut_gamma_group(a: GammaGroup) -> GammaGroup:
    """Aut(g) with Gamma acting by conjugation: ^s phi = act(s) o phi o act(s)^-1."""
    aut = a.aut
    act = []
    for s in a.gamma.elements:
        m, mi = a.act[s], a.act_inv[s]
        act.append(tuple(aut.index[compose(m, compose(phi, mi))] for phi in aut.autos))
    return GammaGroup(a.gamma, aut.group, act, name=f"Aut({a.g.name})@{a.gamma.name}")


def gamma_actions(gamma: FiniteGroup, g: FiniteGroup, up_to_conjugacy=True) -> list[GammaGroup]:
    """All actions of gamma on g (homomorphisms gamma -> Aut(g)).

    With ``up_to_conjugacy`` only one action per Aut(g)-conjugacy class is
    kept (those give isomorphic Gamma-groups).
    """
    aut = automorphism_group(g)
    homs = homomorphisms(gamma, aut.group)
    if up_to_conjugacy:
        m, inv = aut.group.mul, aut.group.inv
        seen, reps = set(), []
        for h in homs:
            if h in seen:
                continue
            reps.append(h)
            for c in aut.group.elements:
                seen.add(tuple(m[m[c][x]][inv[c]] for x in h))
        homs = reps
    return [GammaGroup(gamma, g, [aut.autos[i] for i in h]) for h in homs]
