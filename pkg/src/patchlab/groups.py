"""Exact arithmetic for small finite groups given by Cayley tables.

Elements are the integers ``0..order-1``. Maps between groups (homomorphisms,
automorphisms) are plain tuples ``m`` with ``m[x]`` the image of ``x``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    InvalidInput,
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAHomomorphism,
    NotClosed,
    check_order,
)

Map = tuple  # tuple[int, ...]


class FiniteGroup:
    """A group given by its multiplication table.

    ``mul[a][b]`` is the product ``a*b``. Instances are immutable and hash by
    table, so they can key caches.
    """

    def __init__(self, mul, identity=None, inv=None, labels=None, name=None, validate=True):
        table = tuple(tuple(int(x) for x in row) for row in mul)
        n = len(table)
        if validate:
            _validate_table(table)
        if identity is None:
            identity = _find_identity(table)
        if inv is None:
            inv = tuple(next(b for b in range(n) if table[a][b] == identity) for a in range(n))
        self.mul = table
        self.order = n
        self.identity = int(identity)
        self.inv = tuple(inv)
        self.labels = tuple(labels) if labels is not None else None
        self.name = name or f"G{n}"
        self._hash = hash((self.mul, self.identity))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mul == other.mul and self.identity == other.identity

    def __hash__(self):
        return self._hash

    def __len__(self):
        return self.order

    @property
    def elements(self) -> range:
        return range(self.order)

    def prod(self, *xs: int) -> int:
        r = self.identity
        for x in xs:
            r = self.mul[r][x]
        return r

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mul[self.mul[g][x]][self.inv[g]]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv[x], -k
        r = self.identity
        for _ in range(k):
            r = self.mul[r][x]
        return r

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    @cached_property
    def element_orders(self) -> tuple:
        out = []
        for x in self.elements:
            k, y = 1, x
            while y != self.identity:
                y = self.mul[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        m = self.mul
        return all(m[a][b] == m[b][a] for a in self.elements for b in range(a))

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, picked greedily by decreasing element order."""
        gens: list[int] = []
        span = {self.identity}
        for x in sorted(self.elements, key=lambda y: (-self.element_orders[y], y)):
            if x not in span:
                gens.append(x)
                span = set(generated_subgroup(self, gens))
            if len(span) == self.order:
                break
        return tuple(gens)

    @cached_property
    def bfs_tree(self) -> tuple:
        """Spanning tree of the Cayley graph on ``generators``.

        Returns ``(order, parent)`` where ``order`` lists elements
        breadth-first from the identity and ``parent[x] = (p, g)`` with
        ``x = p*g`` (``None`` for the identity).
        """
        parent: dict[int, tuple | None] = {self.identity: None}
        seq = [self.identity]
        queue = deque(seq)
        while queue:
            p = queue.popleft()
            for g in self.generators:
                x = self.mul[p][g]
                if x not in parent:
                    parent[x] = (p, g)
                    seq.append(x)
                    queue.append(x)
        return tuple(seq), parent


def _find_identity(table) -> int:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    raise NoIdentity("no two-sided identity element")


def _validate_table(table) -> None:
    n = len(table)
    if n == 0:
        raise NotClosed("empty table")
    for a, row in enumerate(table):
        if len(row) != n:
            raise NotClosed(f"row {a} has length {len(row)}, expected {n}", row=a)
        for b, x in enumerate(row):
            if not 0 <= x < n:
                raise NotClosed(f"product {a}*{b}={x} is not an element", witness=[a, b])
    e = _find_identity(table)
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            raise NoInverse(f"element {a} has no two-sided inverse", witness=[a])
    m = np.asarray(table, dtype=np.int64)
    left = m[m[:, :, None], np.arange(n)[None, None, :]]  # (a*b)*c
    right = m[np.arange(n)[:, None, None], m[None, :, :]]  # a*(b*c)
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        raise NonAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", witness=[a, b, c])


# ---------------------------------------------------------------- builders

def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="C1", validate=False)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidInput(f"cyclic order must be positive, got {n}")
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], identity=0,
                       inv=[(-a) % n for a in range(n)], name=f"C{n}", validate=False)


def _from_elements(elems: list, op, name: str, labels=None) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[op(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, identity=0, labels=labels, name=name, validate=False)


def _compose_perm(p, q):
    # apply q first, then p
    return tuple(p[i] for i in q)


def symmetric(d: int) -> FiniteGroup:
    elems = sorted(itertools.permutations(range(d)))
    return _from_elements(elems, _compose_perm, f"S{d}", labels=["".join(map(str, p)) for p in elems])


def _perm_parity(p) -> int:
    seen, parity = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def alternating(d: int) -> FiniteGroup:
    elems = [p for p in sorted(itertools.permutations(range(d))) if _perm_parity(p) == 0]
    return _from_elements(elems, _compose_perm, f"A{d}", labels=["".join(map(str, p)) for p in elems])


def semidirect_cyclic(n: int, m: int, r: int, name: str | None = None) -> FiniteGroup:
    """Z/n x| Z/m where the generator of Z/m acts on Z/n by x -> r*x."""
    if pow(r, m, n) != 1 % n:
        raise InvalidInput(f"x -> {r}x does not have order dividing {m} on Z/{n}")
    elems = [(a, b) for b in range(m) for a in range(n)]

    def op(x, y):
        return ((x[0] + pow(r, x[1], n) * y[0]) % n, (x[1] + y[1]) % m)

    return _from_elements(elems, op, name or f"C{n}:C{m}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon (order 2n)."""
    return semidirect_cyclic(n, 2, n - 1, name=f"D{n}")


def quaternion8() -> FiniteGroup:
    # elements +-1, +-i, +-j, +-k as (sign, unit)
    units = ["1", "i", "j", "k"]
    table = {("1", u): (1, u) for u in units}
    table.update({(u, "1"): (1, u) for u in units})
    for u in "ijk":
        table[(u, u)] = (-1, "1")
    for a, b, c in (("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")):
        table[(a, b)] = (1, c)
        table[(b, a)] = (-1, c)
    elems = [(s, u) for s in (1, -1) for u in units]

    def op(x, y):
        s, u = table[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    labels = [("" if s == 1 else "-") + u for s, u in elems]
    return _from_elements(elems, op, "Q8", labels=labels)


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    """Direct product; element (a, b) is encoded as a*|B| + b."""
    if not groups:
        return trivial_group()
    g = groups[0]
    for h in groups[1:]:
        nh = h.order
        table = [[g.mul[a // nh][b // nh] * nh + h.mul[a % nh][b % nh]
                  for b in range(g.order * nh)] for a in range(g.order * nh)]
        g = FiniteGroup(table, identity=g.identity * nh + h.identity, name=f"{g.name}x{h.name}", validate=False)
    return g


def from_permutations(gens: Sequence[Sequence[int]], name: str | None = None) -> FiniteGroup:
    gens = [tuple(int(i) for i in p) for p in gens]
    if not gens:
        return trivial_group()
    d = len(gens[0])
    for p in gens:
        if len(p) != d or sorted(p) != list(range(d)):
            raise InvalidInput(f"{list(p)} is not a permutation of 0..{d - 1}")
    ident = tuple(range(d))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose_perm(x, g)
                if y not in seen:
                    check_order(len(seen) + 1, "permutation group")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = sorted(seen)
    return _from_elements(elems, _compose_perm, name or f"Perm{len(elems)}",
                          labels=["".join(map(str, p)) if d <= 10 else str(p) for p in elems])


def from_table(table, name: str | None = None) -> FiniteGroup:
    return FiniteGroup(table, name=name, validate=True)


def build_group(spec: dict) -> FiniteGroup:
    """Build a group from a description dict (the CLI's ``groups`` entries).

    >>> build_group({"kind": "symmetric", "degree": 3}).order
    6
    """
    kind = spec.get("kind")
    name = spec.get("name")
    if kind == "cyclic":
        g = cyclic(int(spec["n"]))
    elif kind == "symmetric":
        g = symmetric(int(spec["degree"]))
    elif kind == "alternating":
        g = alternating(int(spec["degree"]))
    elif kind == "dihedral":
        g = dihedral(int(spec["n"]))
    elif kind == "quaternion8":
        g = quaternion8()
    elif kind == "semidirect_cyclic":
        g = semidirect_cyclic(int(spec["n"]), int(spec["m"]), int(spec["r"]))
    elif kind == "table":
        g = from_table(spec["table"])
    elif kind == "permutations":
        g = from_permutations(spec["generators"])
    elif kind == "product":
        factors = spec["factors"]
        g = direct_product(*[f if isinstance(f, FiniteGroup) else build_group(f) for f in factors])
    else:
        raise InvalidInput(f"unknown group kind {kind!r}", spec=spec)
    check_order(g.order)
    if name:
        g.name = name
    return g


# ---------------------------------------------------------------- maps

def compose(f: Map, g: Map) -> Map:
    """f o g (apply g first)."""
    return tuple(f[x] for x in g)


def invert_map(f: Map) -> Map:
    out = [0] * len(f)
    for x, y in enumerate(f):
        out[y] = x
    return tuple(out)


def identity_map(n: int) -> Map:
    return tuple(range(n))


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, f: Sequence[int]) -> tuple | None:
    """Return a witness pair (a, b) with f(ab) != f(a)f(b), or None."""
    for a in src.elements:
        fa, row = f[a], src.mul[a]
        drow = dst.mul[fa]
        for b in src.elements:
            if f[row[b]] != drow[f[b]]:
                return (a, b)
    return None


class GroupHom:
    """A homomorphism ``src -> dst`` stored as an image table."""

    def __init__(self, src: FiniteGroup, dst: FiniteGroup, map: Sequence[int], validate=True):
        self.src, self.dst, self.map = src, dst, tuple(int(x) for x in map)
        if validate:
            if len(self.map) != src.order or any(not 0 <= y < dst.order for y in self.map):
                raise NotAHomomorphism("map table has wrong length or out-of-range entries")
            w = is_homomorphism(src, dst, self.map)
            if w is not None:
                raise NotAHomomorphism(f"f({w[0]}*{w[1]}) != f({w[0]})*f({w[1]})", witness=list(w))

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other):
        return isinstance(other, GroupHom) and (self.src, self.dst, self.map) == (other.src, other.dst, other.map)

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"GroupHom({self.src.name}->{self.dst.name}, {list(self.map)})"

    def then(self, other: GroupHom) -> GroupHom:
        """other o self"""
        return GroupHom(self.src, other.dst, compose(other.map, self.map), validate=False)

    @cached_property
    def kernel(self) -> tuple:
        return tuple(x for x in self.src.elements if self.map[x] == self.dst.identity)

    @cached_property
    def image(self) -> tuple:
        return tuple(sorted(set(self.map)))

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == self.src.order

    @property
    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.dst.order

    @classmethod
    def identity(cls, g: FiniteGroup) -> GroupHom:
        return cls(g, g, range(g.order), validate=False)

    @classmethod
    def trivial(cls, src: FiniteGroup, dst: FiniteGroup) -> GroupHom:
        return cls(src, dst, [dst.identity] * src.order, validate=False)


def _hom_search(src: FiniteGroup, dst: FiniteGroup, bijective: bool) -> Iterator[Map]:
    """All homomorphisms (or isomorphisms) src -> dst.

    Images of the generators are restricted by element order; a candidate
    assignment is propagated along the Cayley-graph spanning tree and
    accepted iff it is consistent on every Cayley edge, which makes it a
    homomorphism.
    """
    if bijective and src.order != dst.order:
        return
    gens = src.generators
    seq, parent = src.bfs_tree
    so, do = src.element_orders, dst.element_orders
    cands = []
    for g in gens:
        if bijective:
            cands.append([y for y in dst.elements if do[y] == so[g]])
        else:
            cands.append([y for y in dst.elements if so[g] % do[y] == 0])
    for imgs in itertools.product(*cands):
        img = dict(zip(gens, imgs))
        f = [0] * src.order
        f[src.identity] = dst.identity
        for x in seq[1:]:
            p, g = parent[x]
            f[x] = dst.mul[f[p]][img[g]]
        ok = all(f[src.mul[x][g]] == dst.mul[f[x]][img[g]] for x in src.elements for g in gens)
        if not ok:
            continue
        if bijective and len(set(f)) != src.order:
            continue
        yield tuple(f)


def homomorphisms(src: FiniteGroup, dst: FiniteGroup) -> list[Map]:
    return sorted(_hom_search(src, dst, bijective=False))


def isomorphisms(src: FiniteGroup, dst: FiniteGroup) -> list[Map]:
    return sorted(_hom_search(src, dst, bijective=True))


def find_isomorphism(src: FiniteGroup, dst: FiniteGroup) -> Map | None:
    return next(_hom_search(src, dst, bijective=True), None)


def are_isomorphic_groups(a: FiniteGroup, b: FiniteGroup) -> bool:
    if a.order != b.order or sorted(a.element_orders) != sorted(b.element_orders):
        return False
    return find_isomorphism(a, b) is not None


def inner_automorphism(g: FiniteGroup, x: int) -> Map:
    return tuple(g.conj(x, y) for y in g.elements)


# ---------------------------------------------------------------- subgroups

def generated_subgroup(g: FiniteGroup, gens: Iterable[int]) -> tuple:
    gens = list(gens)
    seen = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple
    group: FiniteGroup
    inclusion: GroupHom

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements


def subgroup(g: FiniteGroup, elems: Iterable[int], name: str | None = None) -> Subgroup:
    """Induced group on a subset closed under the operation.

    Elements are renumbered in increasing order of their index in ``g``.
    """
    elems = tuple(sorted(set(int(x) for x in elems)))
    index = {x: i for i, x in enumerate(elems)}
    if g.identity not in index:
        raise NotClosed("subset does not contain the identity")
    table = []
    for a in elems:
        row = []
        for b in elems:
            c = g.mul[a][b]
            if c not in index:
                raise NotClosed(f"{a}*{b}={c} leaves the subset", witness=[a, b])
            row.append(index[c])
        table.append(row)
    labels = [g.label(x) for x in elems] if g.labels else None
    h = FiniteGroup(table, identity=index[g.identity], labels=labels,
                    name=name or f"{g.name}[{len(elems)}]", validate=False)
    return Subgroup(g, elems, h, GroupHom(h, g, elems, validate=False))


def center(g: FiniteGroup) -> Subgroup:
    m = g.mul
    elems = [z for z in g.elements if all(m[z][x] == m[x][z] for x in g.elements)]
    return subgroup(g, elems, name=f"Z({g.name})")


def is_normal(g: FiniteGroup, elems: Iterable[int]) -> bool:
    s = set(elems)
    return all(g.conj(x, n) in s for x in g.elements for n in s)


def quotient(g: FiniteGroup, normal: Iterable[int], name: str | None = None) -> tuple[FiniteGroup, GroupHom]:
    """G/N with cosets numbered by their smallest element."""
    n = sorted(set(normal))
    if not is_normal(g, n):
        raise InvalidInput("subgroup is not normal")
    coset_of = {}
    reps = []
    for x in g.elements:
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for y in n:
            coset_of[g.mul[x][y]] = idx
    table = [[coset_of[g.mul[a][b]] for b in reps] for a in reps]
    q = FiniteGroup(table, identity=coset_of[g.identity], name=name or f"{g.name}/N{len(n)}", validate=False)
    proj = GroupHom(g, q, [coset_of[x] for x in g.elements], validate=False)
    return q, proj


# ---------------------------------------------------------------- automorphisms

class AutomorphismGroup:
    """All automorphisms of ``base`` in lexicographic order of their tables.

    ``group`` is Aut(base) as a FiniteGroup whose element ``i`` is
    ``autos[i]``; ``mul[i][j]`` is the index of ``autos[i] o autos[j]``.
    """

    def __init__(self, base: FiniteGroup):
        self.base = base
        self.autos: tuple = tuple(isomorphisms(base, base))
        self.index = {a: i for i, a in enumerate(self.autos)}
        ix = self.index
        table = [[ix[compose(a, b)] for b in self.autos] for a in self.autos]
        self.group = FiniteGroup(table, identity=0, name=f"Aut({base.name})", validate=False)
        witness: list = [None] * len(self.autos)
        for x in base.elements:
            i = ix[inner_automorphism(base, x)]
            if witness[i] is None:
                witness[i] = x
        self.which_inner = tuple(witness)

    def __len__(self):
        return len(self.autos)

    def __repr__(self):
        return f"AutomorphismGroup({self.base.name}, order={len(self.autos)})"

    @cached_property
    def int_map(self) -> Map:
        """Index of Int(x) for every element x of base."""
        return tuple(self.index[inner_automorphism(self.base, x)] for x in self.base.elements)

    @cached_property
    def int_hom(self) -> GroupHom:
        return GroupHom(self.base, self.group, self.int_map, validate=False)

    @cached_property
    def inner(self) -> tuple:
        return tuple(i for i, w in enumerate(self.which_inner) if w is not None)

    def is_inner(self, i: int) -> bool:
        return self.which_inner[i] is not None

    @cached_property
    def out(self) -> tuple[FiniteGroup, GroupHom]:
        """Out = Aut/Inn with the projection from ``group``."""
        return quotient(self.group, self.inner, name=f"Out({self.base.name})")


def automorphism_group(g: FiniteGroup) -> AutomorphismGroup:
    check_order(g.order)
    return _automorphism_group(g)


@lru_cache(maxsize=None)
def _automorphism_group(g: FiniteGroup) -> AutomorphismGroup:
    return AutomorphismGroup(g)


def is_complete(g: FiniteGroup) -> tuple[bool, dict]:
    """Trivial center and no outer automorphisms, with a certificate."""
    z = center(g)
    if z.order > 1:
        witness = next(x for x in z.elements if x != g.identity)
        return False, {"reason": "nontrivial center", "central_element": witness}
    aut = automorphism_group(g)
    for i, w in enumerate(aut.which_inner):
        if w is None:
            return False, {"reason": "outer automorphism", "automorphism": list(aut.autos[i])}
    return True, {"reason": "Int is an isomorphism", "int": list(aut.int_map)}
