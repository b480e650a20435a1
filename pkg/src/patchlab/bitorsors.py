"""Torsors and bitorsors as explicit finite Gamma-sets.

These objects are the ground truth that the cocycle computations are checked
against. Points are integers ``0..n-1``; actions are stored as tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cohomology import Cocycle1, canonical1
from .errors import InvalidInput, check_candidates
from .galois import GammaGroup, restrict as restrict_gamma_group
from .groups import GroupHom, compose, isomorphisms


class Torsor:
    """A left ``carrier.g``-torsor with a semilinear Gamma-action.

    ``left[g][p]`` is ``g.p`` and ``gact[s][p]`` is ``s(p)``.
    """

    def __init__(self, carrier: GammaGroup, left, gact, validate=True):
        self.carrier = carrier
        self.left = tuple(tuple(r) for r in left)
        self.gact = tuple(tuple(r) for r in gact)
        self.size = len(self.left[0])
        if validate:
            _check_torsor(self)

    @property
    def points(self) -> range:
        return range(self.size)


def _check_torsor(t: Torsor) -> None:
    a, g, gamma = t.carrier, t.carrier.g, t.carrier.gamma
    n = t.size
    if n != g.order:
        raise InvalidInput("a torsor has as many points as the group has elements")
    _check_left_action(g, t.left, n)
    _check_gamma_action(gamma, t.gact, n)
    for s in gamma.elements:
        for x in g.elements:
            for p in range(n):
                if t.gact[s][t.left[x][p]] != t.left[a.act[s][x]][t.gact[s][p]]:
                    raise InvalidInput("Gamma-action is not semilinear for the left action", witness=[s, x, p])


def _check_left_action(g, left, n) -> None:
    if list(left[g.identity]) != list(range(n)):
        raise InvalidInput("identity does not act trivially")
    for x in g.elements:
        for y in g.elements:
            for p in range(n):
                if left[g.mul[x][y]][p] != left[x][left[y][p]]:
                    raise InvalidInput("left action is not an action", witness=[x, y, p])
    if sorted(left[x][0] for x in g.elements) != list(range(n)):
        raise InvalidInput("left action is not simply transitive")


def _check_right_action(h, right, n) -> None:
    if [right[p][h.identity] for p in range(n)] != list(range(n)):
        raise InvalidInput("identity does not act trivially on the right")
    for p in range(n):
        for x in h.elements:
            for y in h.elements:
                if right[p][h.mul[x][y]] != right[right[p][x]][y]:
                    raise InvalidInput("right action is not an action", witness=[p, x, y])
    if sorted(right[0][x] for x in h.elements) != list(range(n)):
        raise InvalidInput("right action is not simply transitive")


def _check_gamma_action(gamma, gact, n) -> None:
    if list(gact[gamma.identity]) != list(range(n)):
        raise InvalidInput("identity of Gamma does not act trivially")
    for s in gamma.elements:
        for t in gamma.elements:
            st = gamma.mul[s][t]
            for p in range(n):
                if gact[st][p] != gact[s][gact[t][p]]:
                    raise InvalidInput("Gamma-action is not an action", witness=[s, t, p])


def torsor_from_cocycle(c: Cocycle1) -> Torsor:
    """Points G, left multiplication, ``s(x) = ^s x * a(s)^-1``."""
    a = c.carrier
    g = a.g
    left = [g.mul[x] for x in g.elements]
    gact = [[g.mul[a.act[s][x]][g.inv[c.values[s]]] for x in g.elements] for s in a.gamma.elements]
    return Torsor(a, left, gact)


def _left_solve(left, group, p, q) -> int:
    """The unique g with g.p = q."""
    for x in group.elements:
        if left[x][p] == q:
            return x
    raise InvalidInput("action is not transitive")


def cocycle_from_torsor(t: Torsor, basepoint: int = 0) -> Cocycle1:
    """``a(s) = g_s^-1`` where ``s(p) = g_s . p``."""
    g = t.carrier.g
    vals = tuple(g.inv[_left_solve(t.left, g, basepoint, t.gact[s][basepoint])] for s in t.carrier.gamma.elements)
    return Cocycle1(t.carrier, vals)


def torsor_isomorphism(t1: Torsor, t2: Torsor) -> tuple | None:
    """A bijection commuting with the group and Gamma actions, or None."""
    if t1.carrier != t2.carrier:
        raise InvalidInput("torsors have different structure groups")
    g = t1.carrier.g
    base = {t1.left[x][0]: x for x in g.elements}
    for q in range(t2.size):
        f = [0] * t1.size
        for p, x in base.items():
            f[p] = t2.left[x][q]
        if all(f[t1.gact[s][p]] == t2.gact[s][f[p]] for s in t1.carrier.gamma.elements for p in t1.points):
            return tuple(f)
    return None


def enumerate_torsors(a: GammaGroup) -> list[Torsor]:
    """Torsor isomorphism classes, found without cocycles.

    Every torsor is isomorphic to one on the point set G with left
    multiplication; semilinearity then forces ``s(x) = ^s x * t_s``.
    """
    gamma, g = a.gamma, a.g
    gens = gamma.generators
    check_candidates(g.order ** len(gens), "torsor search")
    left = [g.mul[x] for x in g.elements]
    reps: list[Torsor] = []
    for ts in itertools.product(g.elements, repeat=len(gens)):
        on_gen = {s: tuple(g.mul[a.act[s][x]][t] for x in g.elements) for s, t in zip(gens, ts)}
        gact = _extend_gamma_action(gamma, on_gen) if gens else [tuple(g.elements)]
        if gact is None:
            continue
        try:
            t = Torsor(a, left, gact)
        except InvalidInput:
            continue
        if not any(torsor_isomorphism(t, r) is not None for r in reps):
            reps.append(t)
    return reps


def _extend_gamma_action(gamma, on_gen: dict) -> list | None:
    """Extend permutations given on generators along the spanning tree.

    Returns None if the result is not a Gamma-action.
    """
    seq, parent = gamma.bfs_tree
    n = len(next(iter(on_gen.values()))) if on_gen else 0
    act: list = [None] * gamma.order
    act[gamma.identity] = tuple(range(n))
    for y in seq[1:]:
        p, x = parent[y]
        act[y] = compose(act[p], on_gen[x])
    for y in gamma.elements:
        for x in gamma.generators:
            if act[gamma.mul[y][x]] != compose(act[y], on_gen[x]):
                return None
    return act


# ---------------------------------------------------------------- bitorsors

class Bitorsor:
    """A (G, H)-bitorsor: left G-torsor, right H-torsor, commuting actions.

    ``left[g][p] = g.p``, ``right[p][h] = p.h``, ``gact[s][p] = s(p)``.
    """

    def __init__(self, lg: GammaGroup, rg: GammaGroup, left, right, gact, validate=True, label=None):
        self.lg, self.rg = lg, rg
        self.left = tuple(tuple(r) for r in left)
        self.right = tuple(tuple(r) for r in right)
        self.gact = tuple(tuple(r) for r in gact)
        self.size = len(self.left[0])
        self.label = label
        if validate:
            _check_bitorsor(self)

    @property
    def points(self) -> range:
        return range(self.size)

    @property
    def gamma(self):
        return self.lg.gamma

    def __repr__(self):
        return f"Bitorsor({self.lg.g.name},{self.rg.g.name}; {self.label or self.size})"

    def to_dict(self) -> dict:
        return {"left": [list(r) for r in self.left], "right": [list(r) for r in self.right],
                "gamma_action": [list(r) for r in self.gact]}


def _check_bitorsor(b: Bitorsor) -> None:
    g, h, gamma = b.lg.g, b.rg.g, b.lg.gamma
    n = b.size
    if b.rg.gamma != gamma:
        raise InvalidInput("left and right groups live over different Galois models")
    if n != g.order or n != h.order:
        raise InvalidInput("bitorsor size must equal both group orders")
    _check_left_action(g, b.left, n)
    _check_right_action(h, b.right, n)
    _check_gamma_action(gamma, b.gact, n)
    for x in g.elements:
        for p in range(n):
            lp = b.left[x][p]
            for y in h.elements:
                if b.right[lp][y] != b.left[x][b.right[p][y]]:
                    raise InvalidInput("left and right actions do not commute", witness=[x, p, y])
    for s in gamma.elements:
        sa, sb, gs = b.lg.act[s], b.rg.act[s], b.gact[s]
        for p in range(n):
            for x in g.elements:
                if gs[b.left[x][p]] != b.left[sa[x]][gs[p]]:
                    raise InvalidInput("Gamma-action is not semilinear on the left", witness=[s, x, p])
            for y in h.elements:
                if gs[b.right[p][y]] != b.right[gs[p]][sb[y]]:
                    raise InvalidInput("Gamma-action is not semilinear on the right", witness=[s, p, y])


def trivial_bitorsor(a: GammaGroup) -> Bitorsor:
    """G acting on itself from both sides, with the given Gamma-action."""
    g = a.g
    return Bitorsor(a, a, [g.mul[x] for x in g.elements], [g.mul[x] for x in g.elements], a.act, label="trivial")


def bitorsor_from_h0(a: GammaGroup, u, phi, validate=True) -> Bitorsor:
    """Points G with ``x.h = x*phi(h)`` and ``s(x) = ^s x * u(s)^-1``.

    This is a bitorsor exactly when ``u`` is a 1-cocycle and
    ``Int(u(s)) = phi o ^s(phi)^-1``.
    """
    g = a.g
    left = [g.mul[x] for x in g.elements]
    right = [[g.mul[x][phi[y]] for y in g.elements] for x in g.elements]
    gact = [[g.mul[a.act[s][x]][g.inv[u[s]]] for x in g.elements] for s in a.gamma.elements]
    return Bitorsor(a, a, left, right, gact, validate=validate)


def bitorsor_isomorphism(p: Bitorsor, q: Bitorsor) -> tuple | None:
    """An isomorphism ``p -> q`` (as a point table) or None.

    Anchored at point 0 of ``p``: simple transitivity of the left action
    makes the map determined by the image of one point.
    """
    if (p.lg, p.rg) != (q.lg, q.rg) or p.size != q.size:
        return None
    g = p.lg.g
    orbit = [(p.left[x][0], x) for x in g.elements]
    for img in range(q.size):
        f = [0] * p.size
        for pt, x in orbit:
            f[pt] = q.left[x][img]
        if _is_bitorsor_map(p, q, f):
            return tuple(f)
    return None


def _is_bitorsor_map(p: Bitorsor, q: Bitorsor, f) -> bool:
    for pt in p.points:
        fp = f[pt]
        if any(f[p.right[pt][y]] != q.right[fp][y] for y in p.rg.g.elements):
            return False
        if any(f[p.gact[s][pt]] != q.gact[s][fp] for s in p.gamma.elements):
            return False
    return True


def are_isomorphic(p: Bitorsor, q: Bitorsor) -> tuple | None:
    return bitorsor_isomorphism(p, q)


def enumerate_bitorsors(lg: GammaGroup, rg: GammaGroup) -> list[Bitorsor]:
    """Isomorphism classes of (lg, rg)-bitorsors, by exhaustive search.

    Every bitorsor is isomorphic to one on the point set G with left
    multiplication. The right action is then ``x.h = x*f(h)`` for an
    isomorphism ``f: H -> G``, and the Gamma-action is ``s(x) = ^s x * t_s``.
    All such structures are generated and tested, and kept up to
    isomorphism.
    """
    if lg.gamma != rg.gamma:
        raise InvalidInput("bitorsor groups must share a Galois model")
    g, h, gamma = lg.g, rg.g, lg.gamma
    if g.order != h.order:
        return []
    isos = isomorphisms(h, g)
    gens = gamma.generators
    check_candidates(len(isos) * g.order ** len(gens), "bitorsor search")
    left = [g.mul[x] for x in g.elements]
    reps: list[Bitorsor] = []
    for f in isos:
        right = [[g.mul[x][f[y]] for y in h.elements] for x in g.elements]
        for ts in itertools.product(g.elements, repeat=len(gens)):
            on_gen = {s: tuple(g.mul[lg.act[s][x]][t] for x in g.elements) for s, t in zip(gens, ts)}
            gact = _extend_gamma_action(gamma, on_gen) if gens else [tuple(g.elements)]
            if gact is None:
                continue
            try:
                b = Bitorsor(lg, rg, left, right, gact)
            except InvalidInput:
                continue
            if not any(bitorsor_isomorphism(b, r) is not None for r in reps):
                reps.append(b)
    for i, r in enumerate(reps):
        r.label = f"class{i}"
    return reps


def class_index(p: Bitorsor, reps) -> int:
    for i, r in enumerate(reps):
        if bitorsor_isomorphism(p, r) is not None:
            return i
    raise InvalidInput("bitorsor is not isomorphic to any listed class")


def wedge(p: Bitorsor, q: Bitorsor) -> Bitorsor:
    """Contracted product over the shared middle group.

    Points are orbits of ``(x.h, y) ~ (x, h.y)`` on pairs, each represented
    by its smallest pair index ``x*|Q| + y``.
    """
    if p.rg != q.lg:
        raise InvalidInput("right group of the first factor must be the left group of the second")
    h = p.rg.g
    nq = q.size
    rep = {}
    for x in p.points:
        for y in q.points:
            if x * nq + y in rep:
                continue
            orbit = [p.right[x][k] * nq + q.left[h.inv[k]][y] for k in h.elements]
            m = min(orbit)
            for o in orbit:
                rep[o] = m
    reps = sorted(set(rep.values()))
    idx = {r: i for i, r in enumerate(reps)}

    def cls(x, y):
        return idx[rep[x * nq + y]]

    pairs = [divmod(r, nq) for r in reps]
    left = [[cls(p.left[g][x], y) for x, y in pairs] for g in p.lg.g.elements]
    right = [[cls(x, q.right[y][k]) for k in q.rg.g.elements] for x, y in pairs]
    gact = [[cls(p.gact[s][x], q.gact[s][y]) for x, y in pairs] for s in p.gamma.elements]
    return Bitorsor(p.lg, q.rg, left, right, gact)


def opposite(p: Bitorsor) -> Bitorsor:
    """The (H, G)-bitorsor with ``h * x = x.h^-1`` and ``x * g = g^-1.x``."""
    g, h = p.lg.g, p.rg.g
    left = [[p.right[x][h.inv[k]] for x in p.points] for k in h.elements]
    right = [[p.left[g.inv[y]][x] for y in g.elements] for x in p.points]
    return Bitorsor(p.rg, p.lg, left, right, p.gact)


def restrict(p: Bitorsor, f: GroupHom) -> Bitorsor:
    """Pull the Gamma-action back along ``f: gamma' -> gamma``."""
    lg = restrict_gamma_group(p.lg, f)
    rg = lg if p.rg == p.lg else restrict_gamma_group(p.rg, f)
    return Bitorsor(lg, rg, p.left, p.right, [p.gact[f.map[s]] for s in f.src.elements], validate=False)


@dataclass(frozen=True)
class PointTrivialization:
    """``p.h = u(h).p`` for every ``h``; ``u`` is an isomorphism H -> G."""
    bitorsor: Bitorsor
    point: int
    u: tuple


def point_trivialization(b: Bitorsor, p: int) -> PointTrivialization:
    g = b.lg.g
    u = tuple(_left_solve(b.left, g, p, b.right[p][y]) for y in b.rg.g.elements)
    return PointTrivialization(b, p, u)


def h0_pair(b: Bitorsor, p: int = 0) -> tuple:
    """Cocycle data ``(u, phi)`` of a (G, G)-bitorsor at a point.

    ``phi`` is the point trivialization and ``u(s) = g_s^-1`` where
    ``s(p) = g_s . p``; inverse to ``bitorsor_from_h0``.
    """
    g = b.lg.g
    phi = point_trivialization(b, p).u
    u = tuple(g.inv[_left_solve(b.left, g, p, b.gact[s][p])] for s in b.gamma.elements)
    return u, phi


def has_fixed_point(b: Bitorsor) -> bool:
    return any(all(b.gact[s][x] == x for s in b.gamma.elements) for x in b.points)
