"""Ordinary cohomology of a Galois model: nonabelian H^1 and abelian H^2.

Conventions (used everywhere in the package):

* 1-cocycles satisfy ``a(st) = a(s) * ^s a(t)``;
  ``a ~ a'`` iff ``a'(s) = b * a(s) * ^s b^-1`` for some ``b``.
* 2-cochains are normalized (``c(e, t) = c(s, e) = e``) and stored as a
  ``|gamma| x |gamma|`` table; the abelian cocycle identity is
  ``^s c(t, u) + c(s, tu) = c(s, t) + c(st, u)``.
* A class is represented by the lexicographically smallest value table in
  its orbit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import InvalidInput, NotAbelian, check_candidates
from .galois import EquivariantHom, GammaGroup, restrict
from .groups import FiniteGroup, GroupHom, compose, invert_map, quotient

H1_CONVENTION = "a(st) = a(s)*^s a(t); a ~ b*a(s)*^s(b)^-1"
H2_CONVENTION = "normalized; ^s c(t,u) * c(s,tu) = c(s,t) * c(st,u)"


@dataclass(frozen=True)
class Cocycle1:
    carrier: GammaGroup
    values: tuple

    def __call__(self, s):
        return self.values[s]

    def to_list(self):
        return list(self.values)


@dataclass(frozen=True)
class Cocycle2:
    carrier: GammaGroup
    values: tuple  # values[s][t]

    def __call__(self, s, t):
        return self.values[s][t]

    def to_list(self):
        return [list(r) for r in self.values]


# ---------------------------------------------------------------- degree 1

def is_cocycle1(a: GammaGroup, values: Sequence[int]) -> bool:
    gm, m = a.gamma.mul, a.g.mul
    return all(values[gm[s][t]] == m[values[s]][a.act[s][values[t]]]
               for s in a.gamma.elements for t in a.gamma.elements)


def z1_cocycles(a: GammaGroup) -> list[tuple]:
    """All 1-cocycles, found from their values on the generators of gamma."""
    gamma, g = a.gamma, a.g
    gens = gamma.generators
    seq, parent = gamma.bfs_tree
    check_candidates(g.order ** len(gens), "1-cocycle search")
    out = []
    for imgs in itertools.product(g.elements, repeat=len(gens)):
        on_gen = dict(zip(gens, imgs))
        v = [g.identity] * gamma.order
        for x in seq[1:]:
            p, s = parent[x]
            v[x] = g.mul[v[p]][a.act[p][on_gen[s]]]
        if is_cocycle1(a, v):
            out.append(tuple(v))
    return sorted(out)


def twist1(a: GammaGroup, values: Sequence[int], b: int) -> tuple:
    """s -> b * a(s) * ^s b^-1"""
    m, binv = a.g.mul, a.g.inv[b]
    return tuple(m[m[b][values[s]]][a.act[s][binv]] for s in a.gamma.elements)


def canonical1(a: GammaGroup, values: Sequence[int]) -> tuple:
    return min(twist1(a, values, b) for b in a.g.elements)


def cohomologous1(a: GammaGroup, x: Sequence[int], y: Sequence[int]) -> int | None:
    """Return b with y = b.x, or None."""
    y = tuple(y)
    for b in a.g.elements:
        if twist1(a, x, b) == y:
            return b
    return None


class H1:
    """H^1(gamma, A) as a pointed set of canonical representatives."""

    def __init__(self, a: GammaGroup):
        self.carrier = a
        self.cocycles = z1_cocycles(a)
        reps = sorted({canonical1(a, v) for v in self.cocycles})
        self.reps = reps
        self.index = {r: i for i, r in enumerate(reps)}
        self.basepoint = self.index[canonical1(a, (a.g.identity,) * a.gamma.order)]

    def __len__(self):
        return len(self.reps)

    def class_of(self, values) -> int:
        return self.index[canonical1(self.carrier, values)]

    def classes(self) -> list[Cocycle1]:
        return [Cocycle1(self.carrier, r) for r in self.reps]


def h1_classes(a: GammaGroup) -> list[Cocycle1]:
    return H1(a).classes()


def pushforward_h1(f: EquivariantHom, c: Cocycle1) -> Cocycle1:
    if c.carrier != f.src:
        raise InvalidInput("cocycle carrier is not the source of the map")
    vals = tuple(f.hom.map[x] for x in c.values)
    return Cocycle1(f.dst, canonical1(f.dst, vals))


# ---------------------------------------------------------------- degree 2

def trivial_cochain2(gamma: FiniteGroup, e: int) -> tuple:
    return tuple((e,) * gamma.order for _ in gamma.elements)


def is_cocycle2(a: GammaGroup, c) -> bool:
    gm, m, e = a.gamma.mul, a.g.mul, a.g.identity
    for s in a.gamma.elements:
        if c[s][a.gamma.identity] != e or c[a.gamma.identity][s] != e:
            return False
    return all(m[a.act[s][c[t][u]]][c[s][gm[t][u]]] == m[c[s][t]][c[gm[s][t]][u]]
               for s in a.gamma.elements for t in a.gamma.elements for u in a.gamma.elements)


def enumerate_factor_sets(gamma: FiniteGroup, g: FiniteGroup, psi_choices, fiber) -> Iterator[tuple]:
    """Normalized factor sets (psi, c) in tree-gauge.

    Solves ``psi(s) psi(t) = Int(c(s,t)) psi(st)`` and
    ``psi(s)(c(t,u)) c(s,tu) = c(s,t) c(st,u)`` subject to ``c(p, x) = e``
    on every edge ``(p, x)`` of the spanning tree of gamma. Every factor set
    is gauge equivalent to one of this shape, so this is enough for
    classification.

    ``psi_choices[x]`` lists the allowed automorphisms (as maps) for each
    generator ``x``. ``fiber(phi)`` lists the elements ``z`` with
    ``Int(z) = phi`` (the empty list if ``phi`` is not inner).
    """
    gens = gamma.generators
    seq, parent = gamma.bfs_tree
    gm, m, inv, e = gamma.mul, g.mul, g.inv, g.identity
    tree = {(p, x) for y, pe in parent.items() if pe is not None for p, x in [pe]}
    free = [(s, x) for s in seq if s != gamma.identity for x in gens if (s, x) not in tree]
    for psi_gen in itertools.product(*[psi_choices[x] for x in gens]):
        on_gen = dict(zip(gens, psi_gen))
        psi: list = [None] * gamma.order
        psi[gamma.identity] = tuple(g.elements)
        for y in seq[1:]:
            p, x = parent[y]
            psi[y] = compose(psi[p], on_gen[x])
        psi_inv = [invert_map(p) for p in psi]
        pools = []
        for s, x in free:
            target = compose(compose(psi[s], psi[x]), psi_inv[gm[s][x]])
            pools.append(fiber(target))
        if any(not p for p in pools):
            continue
        total = 1
        for p in pools:
            total *= len(p)
        check_candidates(total, "factor-set search")
        for vals in itertools.product(*pools):
            c = [[e] * gamma.order for _ in gamma.elements]
            for (s, x), v in zip(free, vals):
                c[s][x] = v
            # c(s, p x) = psi_s(c(p, x))^-1 c(s, p) c(sp, x), with c(p, x) = e on the tree
            for y in seq[1:]:
                p, x = parent[y]
                for s in gamma.elements:
                    if s == gamma.identity:
                        continue
                    c[s][y] = m[c[s][p]][c[gm[s][p]][x]]
            ct = tuple(tuple(r) for r in c)
            if _factor_set_ok(gamma, g, psi, ct):
                yield tuple(psi), ct


def _factor_set_ok(gamma, g, psi, c) -> bool:
    gm, m, e = gamma.mul, g.mul, g.identity
    els = gamma.elements
    for s in els:
        if c[s][gamma.identity] != e or c[gamma.identity][s] != e:
            return False
    for s in els:
        for t in els:
            z = c[s][t]
            st = gm[s][t]
            lhs = compose(psi[s], psi[t])
            for x in g.elements:
                if lhs[x] != m[m[z][psi[st][x]]][g.inv[z]]:
                    return False
    for s in els:
        ps = psi[s]
        for t in els:
            cst, st = c[s][t], gm[s][t]
            for u in els:
                if m[ps[c[t][u]]][c[s][gm[t][u]]] != m[cst][c[st][u]]:
                    return False
    return True


def coboundaries2(a: GammaGroup) -> list[tuple]:
    """All normalized coboundaries ^s b(t) * b(st)^-1 * b(s) of an abelian A."""
    gamma, g = a.gamma, a.g
    others = [s for s in gamma.elements if s != gamma.identity]
    check_candidates(g.order ** len(others), "2-coboundary search")
    out = set()
    m, inv = g.mul, g.inv
    for vals in itertools.product(g.elements, repeat=len(others)):
        b = [g.identity] * gamma.order
        for s, v in zip(others, vals):
            b[s] = v
        out.add(tuple(tuple(m[m[a.act[s][b[t]]][inv[b[gamma.mul[s][t]]]]][b[s]] for t in gamma.elements)
                      for s in gamma.elements))
    return sorted(out)


def _mul2(g: FiniteGroup, x, y) -> tuple:
    return tuple(tuple(g.mul[p][q] for p, q in zip(r1, r2)) for r1, r2 in zip(x, y))


class H2:
    """H^2(gamma, A) for abelian A, as a finite abelian group of classes.

    ``reps[i]`` is the canonical cocycle of class ``i``; ``mul[i][j]`` is
    the class of the pointwise product; class 0 is the trivial class.
    """

    def __init__(self, a: GammaGroup):
        if not a.g.is_abelian:
            raise NotAbelian(f"{a.g.name} is not abelian")
        self.carrier = a
        gamma, g = a.gamma, a.g
        self.boundaries = coboundaries2(a)
        choices = {x: [a.act[x]] for x in gamma.generators}
        fib = tuple(g.elements)
        reps = set()
        for _, c in enumerate_factor_sets(gamma, g, choices, lambda phi: fib):
            reps.add(self.canonical(c))
        triv = self.canonical(trivial_cochain2(gamma, g.identity))
        self.reps = [triv] + sorted(reps - {triv})
        self.index = {r: i for i, r in enumerate(self.reps)}
        self.basepoint = 0

    def canonical(self, c) -> tuple:
        g = self.carrier.g
        return min(_mul2(g, c, b) for b in self.boundaries)

    def class_of(self, c) -> int:
        return self.index[self.canonical(c)]

    def __len__(self):
        return len(self.reps)

    @cached_property
    def mul(self) -> tuple:
        g = self.carrier.g
        return tuple(tuple(self.class_of(_mul2(g, x, y)) for y in self.reps) for x in self.reps)

    @cached_property
    def group(self) -> FiniteGroup:
        return FiniteGroup(self.mul, identity=0, name=f"H2({self.carrier.name})", validate=False)

    def classes(self) -> list[Cocycle2]:
        return [Cocycle2(self.carrier, r) for r in self.reps]


def h2_classes(a: GammaGroup) -> H2:
    return H2(a)


# ---------------------------------------------------------------- restriction

def restriction_map(c, f: GroupHom):
    """Pull a class back along ``f: gamma' -> gamma`` (degree 1 or 2)."""
    a = restrict(c.carrier, f)
    if isinstance(c, Cocycle1):
        return Cocycle1(a, canonical1(a, tuple(c.values[f.map[s]] for s in f.src.elements)))
    if isinstance(c, Cocycle2):
        vals = tuple(tuple(c.values[f.map[s]][f.map[t]] for t in f.src.elements) for s in f.src.elements)
        return Cocycle2(a, H2(a).canonical(vals))
    raise InvalidInput("restriction is defined for degree 1 and 2 classes")
