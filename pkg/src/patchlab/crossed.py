"""Crossed modules with a Gamma-action and their hypercohomology.

The main case is ``G -> Aut(G)`` (inner automorphisms, evaluation action):

* H^-1 is the Gamma-fixed center.
* H^0 classes are pairs ``(u, phi)``: a 1-cocycle ``u`` with values in G and
  an automorphism ``phi`` with ``Int(u(s)) = phi o ^s(phi)^-1``. Two pairs are
  equivalent via ``(u, phi) ~ (g u(s) ^s g^-1, Int(g) phi)``. These classify
  bitorsors (see ``bitorsors.bitorsor_from_h0``).
* H^1 classes are normalized factor sets. They are stored untwisted as
  ``psi(s) = phi(s) o act(s)`` with
  ``psi(s) psi(t) = Int(c(s,t)) psi(st)`` and
  ``psi(s)(c(t,u)) c(s,tu) = c(s,t) c(st,u)``. Equivalence is generated by
  gauges ``(h, b)`` with ``h`` in Aut(G) and ``b: Gamma -> G``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from .cohomology import H1, H2, canonical1, enumerate_factor_sets, twist1, z1_cocycles
from .errors import CalibrationMismatch, InvalidInput, PreconditionFailed, check_candidates
from .galois import (
    GammaGroup,
    aut_gamma_group,
    center_gamma_group,
    fixed_points,
    make_gamma_group,
    quotient_gamma_group,
    restrict,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    automorphism_group,
    center,
    compose,
    cyclic,
    identity_map,
    invert_map,
    is_complete,
    quotient,
    symmetric,
    trivial_group,
)

H0_ORIENTATIONS = {
    "phi*s(phi)^-1": "Int(u(s)) = phi o ^s(phi)^-1",
    "s(phi)*phi^-1": "Int(u(s)) = ^s(phi) o phi^-1",
}
# frozen after calibration against the bitorsor enumeration
H0_ORIENTATION = "phi*s(phi)^-1"
H1_CROSSED_CONVENTION = ("psi(s) = phi(s) o act(s); psi(s)psi(t) = Int(c(s,t))psi(st); "
                         "psi(s)(c(t,u))c(s,tu) = c(s,t)c(st,u); gauges (h in Aut G, b: Gamma -> G)")


class CrossedModule:
    """``rho: g -> h`` with a left action ``act[y][x]`` of h on g.

    ``kind`` records which constructor built it ("int", "unit", "to_trivial"
    or "custom"); classification is implemented for the first three.
    """

    def __init__(self, g: GammaGroup, h: GammaGroup, rho: Sequence[int], act, kind="custom", name=None):
        if g.gamma != h.gamma:
            raise InvalidInput("crossed module groups must share a Galois model")
        self.gamma = g.gamma
        self.g, self.h = g, h
        self.rho = tuple(rho)
        self.act = tuple(tuple(r) for r in act)
        self.kind = kind
        self.name = name or f"{g.g.name}->{h.g.name}"

    def __repr__(self):
        return f"CrossedModule({self.name})"


def int_crossed_module(a: GammaGroup) -> CrossedModule:
    """``G -> Aut(G)`` by inner automorphisms; Aut(G) acts by evaluation."""
    aut = a.aut
    h = aut_gamma_group(a)
    return CrossedModule(a, h, aut.int_map, aut.autos, kind="int", name=f"{a.g.name}->Aut")


def unit_crossed_module(h: GammaGroup) -> CrossedModule:
    """``1 -> H``."""
    g = make_gamma_group(h.gamma, trivial_group())
    return CrossedModule(g, h, [h.g.identity], [[0] for _ in h.g.elements], kind="unit",
                         name=f"1->{h.g.name}")


def to_trivial_crossed_module(a: GammaGroup) -> CrossedModule:
    """``G -> 1``; a crossed module exactly when G is abelian."""
    one = make_gamma_group(a.gamma, trivial_group())
    return CrossedModule(a, one, [0] * a.g.order, [tuple(a.g.elements)], kind="to_trivial",
                         name=f"{a.g.name}->1")


def check_crossed_module(cm: CrossedModule) -> dict:
    """Check every axiom; each entry carries a witness when it fails."""
    g, h, gamma = cm.g.g, cm.h.g, cm.gamma
    rho, act = cm.rho, cm.act
    checks = []

    def record(name, witness):
        checks.append({"axiom": name, "ok": witness is None, "witness": witness})

    w = None
    for x in g.elements:
        for y in g.elements:
            if rho[g.mul[x][y]] != h.mul[rho[x]][rho[y]]:
                w = [x, y]
                break
        if w:
            break
    record("rho is a homomorphism", w)

    w = None
    for y in h.elements:
        if sorted(act[y]) != list(g.elements):
            w = [y]
            break
        for x1 in g.elements:
            for x2 in g.elements:
                if act[y][g.mul[x1][x2]] != g.mul[act[y][x1]][act[y][x2]]:
                    w = [y, x1, x2]
                    break
            if w:
                break
        if w:
            break
    record("h acts by automorphisms", w)

    w = None
    if list(act[h.identity]) != list(g.elements):
        w = [h.identity]
    else:
        for y1 in h.elements:
            for y2 in h.elements:
                for x in g.elements:
                    if act[h.mul[y1][y2]][x] != act[y1][act[y2][x]]:
                        w = [y1, y2, x]
                        break
                if w:
                    break
            if w:
                break
    record("action is a group action", w)

    w = None
    for x in g.elements:
        for x2 in g.elements:
            if act[rho[x2]][x] != g.conj(x2, x):
                w = [x, x2]
                break
        if w:
            break
    record("Peiffer identity: ^rho(x') x = x' x x'^-1", w)

    w = None
    for y in h.elements:
        for x in g.elements:
            if rho[act[y][x]] != h.conj(y, rho[x]):
                w = [y, x]
                break
        if w:
            break
    record("equivariance: rho(^y x) = y rho(x) y^-1", w)

    w = None
    for s in gamma.elements:
        for x in g.elements:
            if rho[cm.g.act[s][x]] != cm.h.act[s][rho[x]]:
                w = [s, x]
                break
        if w:
            break
    record("rho is Gamma-equivariant", w)

    w = None
    for s in gamma.elements:
        for y in h.elements:
            for x in g.elements:
                if cm.g.act[s][act[y][x]] != act[cm.h.act[s][y]][cm.g.act[s][x]]:
                    w = [s, y, x]
                    break
            if w:
                break
        if w:
            break
    record("action is Gamma-compatible: ^s(^y x) = ^(^s y)(^s x)", w)

    return {"crossed_module": cm.name, "valid": all(c["ok"] for c in checks), "axioms": checks}


def h_minus1(cm: CrossedModule) -> tuple:
    """Gamma-fixed kernel of rho (as elements of g)."""
    fixed = set(fixed_points(cm.g).elements)
    return tuple(x for x in cm.g.g.elements if cm.rho[x] == cm.h.g.identity and x in fixed)


# ---------------------------------------------------------------- H^0

@dataclass(frozen=True)
class HyperCocycle0:
    """``u`` values in G, ``phi`` an index into Aut(G) (or into H)."""
    u: tuple
    phi: int

    def to_dict(self):
        return {"u": list(self.u), "phi": self.phi}


def _h0_target(a: GammaGroup, phi_idx: int, orientation: str) -> tuple:
    """Automorphism indices ``Int(u(s))`` must equal, for each s."""
    aut = a.aut
    phi = aut.autos[phi_idx]
    phinv = invert_map(phi)
    out = []
    for s in a.gamma.elements:
        m, mi = a.act[s], a.act_inv[s]
        s_phinv = compose(m, compose(phinv, mi))  # ^s(phi^-1)
        s_phi = compose(m, compose(phi, mi))
        if orientation == "phi*s(phi)^-1":
            out.append(aut.index[compose(phi, s_phinv)])
        else:
            out.append(aut.index[compose(s_phi, phinv)])
    return tuple(out)


def h0_pairs(a: GammaGroup, orientation: str = H0_ORIENTATION) -> list[tuple]:
    """All H^0 cocycles ``(u, phi_index)`` for ``G -> Aut(G)``."""
    aut = a.aut
    by_key: dict = {}
    for u in z1_cocycles(a):
        by_key.setdefault(tuple(aut.int_map[x] for x in u), []).append(u)
    out = []
    for i in range(len(aut.autos)):
        for u in by_key.get(_h0_target(a, i, orientation), ()):
            out.append((u, i))
    return sorted(out)


def h0_canonical(a: GammaGroup, pair) -> tuple:
    u, i = pair
    aut = a.aut
    mul = aut.group.mul
    return min((twist1(a, u, g), mul[aut.int_map[g]][i]) for g in a.g.elements)


class H0:
    """H^0(G -> Aut(G)) as a group of canonical representatives.

    The product is ``(u, phi)(u', phi') = (s -> phi(u'(s)) u(s), phi phi')``,
    matching the wedge product of bitorsors.
    """

    def __init__(self, a: GammaGroup, orientation: str = H0_ORIENTATION):
        self.carrier = a
        self.orientation = orientation
        pairs = h0_pairs(a, orientation)
        reps = sorted({h0_canonical(a, p) for p in pairs})
        triv = h0_canonical(a, ((a.g.identity,) * a.gamma.order, 0))
        self.reps = [triv] + [r for r in reps if r != triv]
        self.index = {r: i for i, r in enumerate(self.reps)}
        self.basepoint = 0

    def __len__(self):
        return len(self.reps)

    def class_of(self, pair) -> int:
        return self.index[h0_canonical(self.carrier, (tuple(pair[0]), pair[1]))]

    def product(self, x, y) -> tuple:
        a = self.carrier
        (u, i), (v, j) = x, y
        phi = a.aut.autos[i]
        w = tuple(a.g.mul[phi[v[s]]][u[s]] for s in a.gamma.elements)
        return w, a.aut.group.mul[i][j]

    def inverse(self, x) -> tuple:
        a = self.carrier
        u, i = x
        j = a.aut.group.inv[i]
        phinv = a.aut.autos[j]
        return tuple(phinv[a.g.inv[u[s]]] for s in a.gamma.elements), j

    @cached_property
    def mul(self) -> tuple:
        return tuple(tuple(self.class_of(self.product(x, y)) for y in self.reps) for x in self.reps)

    @cached_property
    def group(self) -> FiniteGroup:
        return FiniteGroup(self.mul, identity=0, name=f"H0({self.carrier.name})", validate=False)

    def classes(self) -> list[HyperCocycle0]:
        return [HyperCocycle0(u, i) for u, i in self.reps]

    def is_neutral(self, k: int) -> bool:
        """The class has a representative with ``u = e``."""
        u, _ = self.reps[k]
        return canonical1(self.carrier, u) == canonical1(self.carrier, (self.carrier.g.identity,) * len(u))


def _calibration_instances():
    c2, c3 = cyclic(2), cyclic(3)
    s3 = symmetric(3)
    # conjugation by a transposition on S3 (inner action, nonabelian)
    t = next(x for x in s3.elements if s3.element_orders[x] == 2)
    inner = tuple(s3.conj(t, x) for x in s3.elements)
    return [
        ("Z/2 on Z/3 by inversion", make_gamma_group(c2, c3, {1: (0, 2, 1)})),
        ("Z/2 on Z/2 trivially", make_gamma_group(c2, c2)),
        ("Z/2 on S3 by an inner involution", make_gamma_group(c2, s3, {1: inner})),
    ]


@lru_cache(maxsize=None)
def calibrate_h0_orientation() -> dict:
    """Test both orientations against the bitorsor enumeration.

    An orientation survives if, on every calibration instance, every pair
    it admits builds a valid bitorsor and the class count equals the
    object-level count. Raises CalibrationMismatch unless exactly the frozen
    orientation survives.
    """
    from .bitorsors import bitorsor_from_h0, enumerate_bitorsors

    rows = []
    surviving = set(H0_ORIENTATIONS)
    for label, a in _calibration_instances():
        objects = len(enumerate_bitorsors(a, a))
        for o in H0_ORIENTATIONS:
            h0 = H0(a, o)
            valid = True
            for u, i in h0_pairs(a, o):
                try:
                    bitorsor_from_h0(a, u, a.aut.autos[i])
                except InvalidInput:
                    valid = False
                    break
            ok = valid and len(h0) == objects
            rows.append({"instance": label, "orientation": o, "classes": len(h0),
                         "bitorsor_classes": objects, "objects_valid": valid, "ok": ok})
            if not ok:
                surviving.discard(o)
    if surviving != {H0_ORIENTATION}:
        raise CalibrationMismatch("H^0 orientation calibration did not single out the frozen convention",
                                  surviving=sorted(surviving), rows=rows)
    return {"orientation": H0_ORIENTATION, "formula": H0_ORIENTATIONS[H0_ORIENTATION], "rows": rows}


def h0_classes(cm: CrossedModule) -> list[HyperCocycle0]:
    """Class representatives of H^0(cm).

    For ``1 -> H`` these are the Gamma-fixed elements of H; for ``A -> 1``
    they are the H^1(Gamma, A) classes (``phi`` is then always 0).
    """
    if cm.kind == "int":
        calibrate_h0_orientation()
        return H0(cm.g).classes()
    if cm.kind == "unit":
        e = (0,) * cm.gamma.order
        return [HyperCocycle0(e, y) for y in fixed_points(cm.h).elements]
    if cm.kind == "to_trivial":
        if not cm.g.g.is_abelian:
            raise InvalidInput("G -> 1 is only a crossed module for abelian G")
        return [HyperCocycle0(r, 0) for r in H1(cm.g).reps]
    raise InvalidInput(f"H^0 is not implemented for crossed modules of kind {cm.kind!r}")


# ---------------------------------------------------------------- H^1

@dataclass(frozen=True)
class HyperCocycle1:
    """Normalized factor set; ``psi[s]`` indexes Aut(G), ``c[s][t]`` in G.

    ``phi(s) = psi(s) o act(s)^-1`` is the twisted transition automorphism.
    """
    psi: tuple
    c: tuple

    def to_dict(self):
        return {"psi": list(self.psi), "c": [list(r) for r in self.c]}


def _inverse_int(a: GammaGroup) -> dict:
    """Aut index -> elements z with Int(z) equal to it."""
    fib: dict = {}
    for z, i in enumerate(a.aut.int_map):
        fib.setdefault(i, []).append(z)
    return fib


def gauge(g: FiniteGroup, aut, gamma: FiniteGroup, psi, c, h: int, b) -> tuple:
    """Transport a factor set along the extension isomorphism ``(x, s) -> (h(x) b(s), s)``.

    ``psi'(s) = Int(b(s))^-1 h psi(s) h^-1`` and
    ``c'(s,t) = psi'(s)(b(t))^-1 b(s)^-1 h(c(s,t)) b(st)``.
    """
    am, m, inv = aut.group.mul, g.mul, g.inv
    hmap = aut.autos[h]
    hinv = aut.group.inv[h]
    im = aut.int_map
    psi2 = tuple(am[am[im[inv[b[s]]]][am[h][psi[s]]]][hinv] for s in gamma.elements)
    c2 = tuple(tuple(m[m[inv[aut.autos[psi2[s]][b[t]]]][inv[b[s]]]][m[hmap[c[s][t]]][b[gamma.mul[s][t]]]]
                     for t in gamma.elements) for s in gamma.elements)
    return psi2, c2


def _cochains0(g: FiniteGroup, gamma: FiniteGroup):
    others = [s for s in gamma.elements if s != gamma.identity]
    check_candidates(g.order ** len(others), "gauge enumeration")
    for vals in itertools.product(g.elements, repeat=len(others)):
        b = [g.identity] * gamma.order
        for s, v in zip(others, vals):
            b[s] = v
        yield b


class FactorSetClasses:
    """Classes of normalized factor sets of ``gamma`` in ``g``.

    ``psi_choices[x]`` restricts psi on each generator (indices into
    Aut(g)); ``autos_allowed`` lists the ``h`` used in gauges. Classes are
    represented by the minimum of their gauge orbit.
    """

    def __init__(self, a: GammaGroup, psi_choices: dict, autos_allowed: Sequence[int]):
        self.carrier = a
        g, gamma, aut = a.g, a.gamma, a.aut
        self.autos_allowed = tuple(autos_allowed)
        self._b = [tuple(b) for b in _cochains0(g, gamma)]
        fib = _inverse_int(a)
        choices = {x: [aut.autos[i] for i in psi_choices[x]] for x in gamma.generators}
        seen: set = set()
        reps = []
        for psi, c in enumerate_factor_sets(gamma, g, choices, lambda phi: fib.get(aut.index[phi], [])):
            key = (tuple(aut.index[p] for p in psi), c)
            if key in seen:
                continue
            orbit = self.orbit(key)
            seen.update(orbit)
            reps.append(min(orbit))
        self.reps = sorted(reps)
        self.index = {r: i for i, r in enumerate(self.reps)}

    def orbit(self, key) -> set:
        a = self.carrier
        psi, c = key
        return {gauge(a.g, a.aut, a.gamma, psi, c, h, b) for h in self.autos_allowed for b in self._b}

    def canonical(self, key) -> tuple:
        return min(self.orbit((tuple(key[0]), tuple(tuple(r) for r in key[1]))))

    def class_of(self, key) -> int:
        return self.index[self.canonical(key)]

    def __len__(self):
        return len(self.reps)

    def classes(self) -> list[HyperCocycle1]:
        return [HyperCocycle1(p, c) for p, c in self.reps]


class H1Crossed(FactorSetClasses):
    """H^1(G -> Aut(G)): all factor sets, gauges by all of Aut(G) and all b."""

    def __init__(self, a: GammaGroup):
        n = len(a.aut.autos)
        super().__init__(a, {x: range(n) for x in a.gamma.generators}, range(n))
        self.basepoint = self.class_of((a.act_index, _trivial_c(a)))

    def band(self, k: int) -> tuple:
        """Outer action ``s -> [psi(s)]`` as indices into Out(G)."""
        out, proj = self.carrier.aut.out
        return tuple(proj.map[i] for i in self.reps[k][0])

    def is_neutral(self, k: int) -> bool:
        """The class contains a representative with ``c = e``."""
        triv = _trivial_c(self.carrier)
        return any(c == triv for _, c in self.orbit(self.reps[k]))


def _trivial_c(a: GammaGroup) -> tuple:
    e = a.g.identity
    return tuple((e,) * a.gamma.order for _ in a.gamma.elements)


def h1_classes_crossed(cm_or_a) -> list[HyperCocycle1]:
    a = cm_or_a.g if isinstance(cm_or_a, CrossedModule) else cm_or_a
    return H1Crossed(a).classes()


def twisted_phi(a: GammaGroup, z: HyperCocycle1) -> tuple:
    """``phi(s) = psi(s) o act(s)^-1`` as Aut indices."""
    aut = a.aut
    return tuple(aut.index[compose(aut.autos[p], a.act_inv[s])] for s, p in enumerate(z.psi))


def from_twisted(a: GammaGroup, phi: Sequence[int], c) -> HyperCocycle1:
    """Build from the twisted form ``phi(s)`` (Aut indices) and ``c``."""
    aut = a.aut
    psi = tuple(aut.index[compose(aut.autos[p], a.act[s])] for s, p in enumerate(phi))
    return HyperCocycle1(psi, tuple(tuple(r) for r in c))


def is_hyper_cocycle1(a: GammaGroup, z: HyperCocycle1) -> bool:
    from .cohomology import _factor_set_ok
    return _factor_set_ok(a.gamma, a.g, [a.aut.autos[i] for i in z.psi], z.c)


# ---------------------------------------------------------------- extensions

@dataclass
class Extension:
    """``1 -> G -> X -> Gamma -> 1`` with X on pairs ``(x, s)`` coded ``s*|G| + x``."""
    group: FiniteGroup
    inclusion: GroupHom
    projection: GroupHom


def extension_table(g: FiniteGroup, gamma: FiniteGroup, psi_maps, c) -> list:
    """``(x, s)(y, t) = (x psi(s)(y) c(s,t), st)``; associative iff (psi, c) is a factor set."""
    n = g.order
    m = g.mul
    table = []
    for s in gamma.elements:
        ps = psi_maps[s]
        for x in g.elements:
            row = []
            for t in gamma.elements:
                cst, st = c[s][t], gamma.mul[s][t]
                for y in g.elements:
                    row.append(st * n + m[m[x][ps[y]]][cst])
            table.append(row)
    return table


def extension_from_cocycle(a: GammaGroup, z: HyperCocycle1, validate=True) -> Extension:
    g, gamma = a.g, a.gamma
    n = g.order
    table = extension_table(g, gamma, [a.aut.autos[i] for i in z.psi], z.c)
    x = FiniteGroup(table, identity=gamma.identity * n + g.identity, validate=validate, name=f"E({g.name},{gamma.name})")
    inc = GroupHom(g, x, [gamma.identity * n + y for y in g.elements], validate=False)
    proj = GroupHom(x, gamma, [k // n for k in x.elements], validate=False)
    return Extension(x, inc, proj)


def find_splitting(ext: Extension) -> tuple | None:
    """A homomorphic section of the projection, or None."""
    from .groups import homomorphisms
    gamma = ext.projection.dst
    for f in homomorphisms(gamma, ext.group):
        if all(ext.projection.map[f[s]] == s for s in gamma.elements):
            return f
    return None


def extension_equivalence(e1: Extension, e2: Extension) -> tuple | None:
    """An isomorphism mapping G onto G and inducing the identity on Gamma."""
    from .groups import _hom_search
    gsub = set(e2.inclusion.map)
    gsrc = e1.inclusion.map
    for f in _hom_search(e1.group, e2.group, bijective=True):
        if all(e2.projection.map[f[k]] == e1.projection.map[k] for k in e1.group.elements) and \
                all(f[k] in gsub for k in gsrc):
            return f
    return None


def extension_classes_oracle(a: GammaGroup) -> list[Extension]:
    """Extensions of gamma by the group ``a.g`` up to equivalence, by brute force.

    Every extension has a normalized set-theoretic section, so it is
    isomorphic to a table on pairs given by some normalized
    ``(psi, c)``; all of them are generated without any cocycle identity,
    tables that fail to be groups are dropped, and the rest are compared
    by isomorphism search.
    """
    g, gamma, aut = a.g, a.gamma, a.aut
    others = [s for s in gamma.elements if s != gamma.identity]
    pairs = [(s, t) for s in others for t in others]
    check_candidates(len(aut.autos) ** len(others) * g.order ** len(pairs), "extension oracle")
    reps: list[Extension] = []
    for psis in itertools.product(range(len(aut.autos)), repeat=len(others)):
        psi = [tuple(g.elements)] * gamma.order
        for s, i in zip(others, psis):
            psi[s] = aut.autos[i]
        for vals in itertools.product(g.elements, repeat=len(pairs)):
            c = [[g.identity] * gamma.order for _ in gamma.elements]
            for (s, t), v in zip(pairs, vals):
                c[s][t] = v
            table = extension_table(g, gamma, psi, c)
            try:
                x = FiniteGroup(table, validate=True)
            except InvalidInput:
                continue
            n = g.order
            ext = Extension(x, GroupHom(g, x, [gamma.identity * n + y for y in g.elements], validate=False),
                            GroupHom(x, gamma, [k // n for k in x.elements], validate=False))
            if not any(extension_equivalence(ext, r) is not None for r in reps):
                reps.append(ext)
    return reps


def neutrality_report(a: GammaGroup, h1: H1Crossed | None = None) -> list[dict]:
    """Per class: the ``c = e`` criterion and the splitting oracle."""
    h1 = h1 or H1Crossed(a)
    rows = []
    for k, z in enumerate(h1.classes()):
        crit = h1.is_neutral(k)
        split = find_splitting(extension_from_cocycle(a, z)) is not None
        rows.append({"class": k, "criterion": crit, "splits": split, "agree": crit == split})
    return rows


def is_neutral_h0(a: GammaGroup, pair) -> bool:
    h0 = H0(a)
    return h0.is_neutral(h0.class_of(pair))


def is_neutral_h1(a: GammaGroup, z: HyperCocycle1) -> bool:
    h1 = H1Crossed(a)
    return h1.is_neutral(h1.class_of((z.psi, z.c)))


# ---------------------------------------------------------------- exact sequences

def exactness_report(names, sets, maps, basepoints, first_injective=True) -> list[dict]:
    """Exactness of pointed sets, node by node.

    ``sets[i]`` lists the elements of term i, ``maps[i]`` is a dict from
    term i to term i+1. At an interior node the image of the incoming map
    must equal the fiber of the outgoing map over the basepoint.
    """
    nodes = []
    for i, name in enumerate(names):
        row = {"node": i, "term": name, "size": len(sets[i])}
        if i == 0:
            if first_injective:
                img = [maps[0][x] for x in sets[0]]
                row["exact"] = len(set(img)) == len(img)
                row["check"] = "injective"
            else:
                row["exact"] = None
        elif i == len(names) - 1:
            row["exact"] = None
            row["check"] = "last term"
        else:
            image = {maps[i - 1][x] for x in sets[i - 1]}
            fiber = {x for x in sets[i] if maps[i][x] == basepoints[i + 1]}
            row["exact"] = image == fiber
            row["check"] = "image = fiber over basepoint"
            row["image_size"], row["fiber_size"] = len(image), len(fiber)
            if image != fiber:
                row["witness"] = {"in_image_not_fiber": sorted(image - fiber, key=repr)[:3],
                                  "in_fiber_not_image": sorted(fiber - image, key=repr)[:3]}
        nodes.append(row)
    return nodes


def myles_sequence(a: GammaGroup) -> dict:
    """Seven-term sequence attached to ``(1 -> Aut G) -> (G -> Aut G) -> (G -> 1)``.

    Terms: Z(G)^Gamma, G^Gamma, Aut(G)^Gamma, H^0(G -> Aut G), H^1(G),
    H^1(Aut G), H^1(G -> Aut G).
    """
    g, gamma, aut = a.g, a.gamma, a.aut
    autg = aut_gamma_group(a)
    zfix = [x for x in center(g).elements if all(m[x] == x for m in a.act)]
    gfix = list(fixed_points(a).elements)
    afix = list(fixed_points(autg).elements)
    h0 = H0(a)
    h1g = H1(a)
    h1a = H1(autg)
    h1c = H1Crossed(a)
    e = (g.identity,) * gamma.order
    amul = aut.group.mul
    maps = [
        {x: x for x in zfix},
        {x: aut.int_map[x] for x in gfix},
        {p: h0.class_of((e, p)) for p in afix},
        {k: h1g.class_of(h0.reps[k][0]) for k in range(len(h0))},
        {k: h1a.class_of(tuple(aut.int_map[x] for x in r)) for k, r in enumerate(h1g.reps)},
        {k: h1c.class_of((tuple(amul[r[s]][a.act_index[s]] for s in gamma.elements), _trivial_c(a)))
         for k, r in enumerate(h1a.reps)},
    ]
    sets = [zfix, gfix, afix, list(range(len(h0))), list(range(len(h1g))), list(range(len(h1a))),
            list(range(len(h1c)))]
    names = ["H0(Z(G))", "H0(G)", "H0(Aut G)", "H0(G->Aut G)", "H1(G)", "H1(Aut G)", "H1(G->Aut G)"]
    base = [g.identity, g.identity, 0, h0.basepoint, h1g.basepoint, h1a.basepoint, h1c.basepoint]
    nodes = exactness_report(names, sets, maps, base)
    return {
        "sequence": "myles",
        "gamma_group": a.name,
        "sizes": [len(s) for s in sets],
        "nodes": nodes,
        "exact": all(n["exact"] is not False for n in nodes),
        "conventions": {"h0": H0_ORIENTATIONS[H0_ORIENTATION], "h1_crossed": H1_CROSSED_CONVENTION},
    }


def induced_quotient_automorphism(g: FiniteGroup, proj: GroupHom, phi) -> tuple | None:
    """The automorphism of the quotient induced by ``phi`` (None if the kernel is not preserved)."""
    q = proj.dst
    img = [None] * q.order
    for x in g.elements:
        y, z = proj.map[x], proj.map[phi[x]]
        if img[y] is None:
            img[y] = z
        elif img[y] != z:
            return None
    return tuple(img)


def les2_sequence(a: GammaGroup, z_elems: Sequence[int] | None = None) -> dict:
    """Sequence from ``(Z -> 1) -> (G -> Aut G) -> (G/Z -> Aut(G/Z))``.

    Terms: Z^Gamma, Z(G)^Gamma, Z(G/Z)^Gamma, H^1(Z), H^0(G -> Aut G),
    H^0(G/Z -> Aut(G/Z)), H^2(Z), H^1(G -> Aut G). The connecting map
    H^0(G/Z -> Aut(G/Z)) -> H^2(Z) lifts ``(u, phi)`` to a cochain with
    ``Int(u(s)) = phi o ^s(phi)^-1`` and takes the class of
    ``u(s) ^s u(t) u(st)^-1``. Exactness is asserted only when the
    sequence of crossed modules is exact, which needs Aut(G) -> Aut(G/Z)
    to be bijective.
    """
    from .galois import sub_gamma_group

    g, gamma, aut = a.g, a.gamma, a.aut
    zc = center(g).elements
    z_elems = tuple(sorted(zc if z_elems is None else set(z_elems)))
    if not set(z_elems) <= set(zc):
        raise PreconditionFailed("designated subgroup is not central", hypothesis="Z central")
    if any(m[x] not in z_elems for m in a.act for x in z_elems):
        raise PreconditionFailed("designated subgroup is not Gamma-stable", hypothesis="Z Gamma-stable")
    za, zsub = sub_gamma_group(a, z_elems)
    q, proj = quotient(g, z_elems, name=f"{g.name}/Z")
    complete, cert = is_complete(q)
    if not complete:
        raise PreconditionFailed("G/Z is not complete", hypothesis="G/Z complete", certificate=cert)
    qa = quotient_gamma_group(a, proj)
    qaut = qa.aut

    induced = []
    for phi in aut.autos:
        induced.append(qaut.index[induced_quotient_automorphism(g, proj, phi)])
    aut_bijective = sorted(induced) == list(range(len(qaut.autos)))

    zfix = [x for x in fixed_points(za).elements]
    cfix = [x for x in zc if all(m[x] == x for m in a.act)]
    qcfix = [x for x in center(q).elements if all(m[x] == x for m in qa.act)]
    h1z = H1(za)
    h0 = H0(a)
    h0q = H0(qa)
    h2z = H2(za)
    h1c = H1Crossed(a)
    zindex = {x: i for i, x in enumerate(zsub.elements)}

    # connecting map
    delta, delta_detail = {}, []
    lifts_of = {}
    for x in g.elements:
        lifts_of.setdefault(proj.map[x], []).append(x)
    for k, (ubar, pbar) in enumerate(h0q.reps):
        values = set()
        for i, ind in enumerate(induced):
            if ind != pbar:
                continue
            target = _h0_target(a, i, H0_ORIENTATION)
            pools = []
            for s in gamma.elements:
                if s == gamma.identity:
                    pools.append([g.identity])
                else:
                    pools.append([x for x in lifts_of[ubar[s]] if aut.int_map[x] == target[s]])
            for u in itertools.product(*pools):
                d = tuple(tuple(zindex[g.mul[g.mul[u[s]][a.act[s][u[t]]]][g.inv[u[gamma.mul[s][t]]]]]
                                for t in gamma.elements) for s in gamma.elements)
                values.add(h2z.class_of(d))
        vals = sorted(values)
        delta[k] = vals[0] if len(vals) == 1 else None
        delta_detail.append({"class": k, "values": vals, "well_defined": len(vals) == 1})

    amul = aut.group.mul
    maps = [
        {x: zsub.elements[x] for x in zfix},
        {x: proj.map[x] for x in cfix},
        {x: h1z.basepoint for x in qcfix},
        {k: h0.class_of((tuple(zsub.elements[x] for x in r), 0)) for k, r in enumerate(h1z.reps)},
        {k: h0q.class_of((tuple(proj.map[x] for x in u), induced[i])) for k, (u, i) in enumerate(h0.reps)},
        delta,
        {k: h1c.class_of((a.act_index, tuple(tuple(zsub.elements[x] for x in r) for r in c)))
         for k, c in enumerate(h2z.reps)},
    ]
    sets = [zfix, cfix, qcfix, list(range(len(h1z))), list(range(len(h0))), list(range(len(h0q))),
            list(range(len(h2z))), list(range(len(h1c)))]
    names = ["H0(Z)", "H-1(G->Aut G)", "H-1(G/Z->Aut(G/Z))", "H1(Z)", "H0(G->Aut G)",
             "H0(G/Z->Aut(G/Z))", "H2(Z)", "H1(G->Aut G)"]
    base = [zsub.group.identity, g.identity, q.identity, h1z.basepoint, h0.basepoint, h0q.basepoint,
            h2z.basepoint, h1c.basepoint]
    defined = all(v is not None for v in delta.values())
    nodes = exactness_report(names, sets, maps, base) if defined else []
    zero_map = defined and all(v == h2z.basepoint for v in delta.values())
    h0_proj = list(maps[4].values())
    return {
        "sequence": "les2",
        "gamma_group": a.name,
        "center_order": len(z_elems),
        "sizes": [len(s) for s in sets],
        "aut_to_quotient_aut_bijective": aut_bijective,
        "exactness_asserted": aut_bijective,
        "connecting_map": delta_detail,
        "connecting_map_defined": defined,
        "zero_map": zero_map,
        "h0_projection_bijective": sorted(h0_proj) == list(range(len(h0q))),
        "nodes": nodes,
        "exact": all(n["exact"] is not False for n in nodes) if defined else None,
    }
