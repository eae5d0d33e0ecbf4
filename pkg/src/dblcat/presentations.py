"""Finite categorical presentations: categories, strict 2-categories,
decorated bicategories, double categories, and the maps between them.

Every value is an immutable record of finite tables.  Composition tables
are total on their composable domain; anything partial or law-breaking is
reported by ``validate`` rather than silently accepted.  Equality is
structural (component lists are kept canonically sorted); the ``name``
field is a label and never takes part in comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class CompositionError(ValueError):
    """Raised when a composite is requested on a non-composable pair."""


def _sorted_pairs(m: Mapping | Iterable) -> tuple:
    items = m.items() if isinstance(m, Mapping) else m
    return tuple(sorted(items))


# ---------------------------------------------------------------------------
# Groups (used only to build deloopings; not a category-theory primitive)

@dataclass(frozen=True)
class Group:
    elements: tuple[str, ...]
    unit: str
    mult: tuple[tuple[tuple[str, str], str], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def table(self) -> dict[tuple[str, str], str]:
        return dict(self.mult)

    def mul(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    @cached_property
    def inverse(self) -> dict[str, str]:
        inv = {}
        for a in self.elements:
            for b in self.elements:
                if self.mul(a, b) == self.unit and self.mul(b, a) == self.unit:
                    inv[a] = b
        return inv

    def is_group(self) -> bool:
        els = self.elements
        t = self.table
        if set(t) != {(a, b) for a in els for b in els}:
            return False
        if any(t[(a, b)] not in els for a in els for b in els):
            return False
        if any(t[(self.unit, a)] != a or t[(a, self.unit)] != a for a in els):
            return False
        for a, b, c in itertools.product(els, repeat=3):
            if t[(t[(a, b)], c)] != t[(a, t[(b, c)])]:
                return False
        return all(a in self.inverse for a in els)

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in self.elements for b in self.elements)


def cyclic(n: int) -> Group:
    els = tuple(str(k) for k in range(n))
    mult = tuple((((str(a), str(b)), str((a + b) % n)))
                 for a in range(n) for b in range(n))
    return Group(els, "0", mult, name=f"Z{n}")


def trivial_group() -> Group:
    return cyclic(1)


def symmetric3() -> Group:
    """S3 on {0,1,2}, elements named by one-line permutation strings."""
    perms = [p for p in itertools.permutations((0, 1, 2))]
    name = {p: "".join(map(str, p)) for p in perms}
    mult = []
    for p in perms:
        for q in perms:
            pq = tuple(p[q[i]] for i in range(3))
            mult.append(((name[p], name[q]), name[pq]))
    return Group(tuple(sorted(name.values())), "012", tuple(sorted(mult)), name="S3")


# ---------------------------------------------------------------------------
# Finite categories

@dataclass(frozen=True)
class Morphism:
    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class FiniteCategory:
    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identity: tuple[tuple[str, str], ...]
    compose: tuple[tuple[tuple[str, str], str], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def mor(self) -> dict[str, Morphism]:
        return {m.name: m for m in self.morphisms}

    @cached_property
    def id_map(self) -> dict[str, str]:
        return dict(self.identity)

    @cached_property
    def comp_map(self) -> dict[tuple[str, str], str]:
        return dict(self.compose)

    def id_of(self, obj: str) -> str:
        return self.id_map[obj]

    def is_identity(self, m: str) -> bool:
        return any(i == m for _, i in self.identity)

    def comp(self, g: str, f: str) -> str:
        """Composite g∘f; f is applied first."""
        try:
            return self.comp_map[(g, f)]
        except KeyError:
            raise CompositionError(f"({g}, {f}) is not composable in {self.name or 'category'}")

    def composable(self, g: str, f: str) -> bool:
        return self.mor[f].cod == self.mor[g].dom

    @cached_property
    def inverse(self) -> dict[str, str]:
        inv = {}
        for f in self.mor:
            mf = self.mor[f]
            for g in self.mor:
                mg = self.mor[g]
                if mg.dom != mf.cod or mg.cod != mf.dom:
                    continue
                if (self.comp_map.get((g, f)) == self.id_map.get(mf.dom)
                        and self.comp_map.get((f, g)) == self.id_map.get(mf.cod)):
                    inv[f] = g
                    break
        return inv

    def is_groupoid(self) -> bool:
        return all(f in self.inverse for f in self.mor)


def finite_category(name, objects, morphisms, identity, compose) -> FiniteCategory:
    """Canonicalizing constructor: sorts components, fills identity composites."""
    mors = tuple(sorted((Morphism(*m) if not isinstance(m, Morphism) else m
                         for m in morphisms), key=lambda m: m.name))
    by_name = {m.name: m for m in mors}
    ids = dict(identity)
    comp = dict(compose)
    for m in mors:
        fi = ids.get(m.dom)
        gi = ids.get(m.cod)
        if fi is not None:
            comp.setdefault((m.name, fi), m.name)
        if gi is not None:
            comp.setdefault((gi, m.name), m.name)
    del by_name
    return FiniteCategory(tuple(sorted(objects)), mors,
                          _sorted_pairs(ids), _sorted_pairs(comp), name=name)


# ---------------------------------------------------------------------------
# Strict 2-categories

@dataclass(frozen=True)
class TwoCell:
    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class Strict2Category:
    cells0: tuple[str, ...]
    cells1: tuple[Morphism, ...]
    identity1: tuple[tuple[str, str], ...]
    hcompose1: tuple[tuple[tuple[str, str], str], ...]
    cells2: tuple[TwoCell, ...]
    identity2: tuple[tuple[str, str], ...]
    vcompose2: tuple[tuple[tuple[str, str], str], ...]
    hcompose2: tuple[tuple[tuple[str, str], str], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def c1(self) -> dict[str, Morphism]:
        return {m.name: m for m in self.cells1}

    @cached_property
    def c2(self) -> dict[str, TwoCell]:
        return {c.name: c for c in self.cells2}

    @cached_property
    def id1_map(self) -> dict[str, str]:
        return dict(self.identity1)

    @cached_property
    def id2_map(self) -> dict[str, str]:
        return dict(self.identity2)

    @cached_property
    def hcomp1_map(self) -> dict[tuple[str, str], str]:
        return dict(self.hcompose1)

    @cached_property
    def vcomp2_map(self) -> dict[tuple[str, str], str]:
        return dict(self.vcompose2)

    @cached_property
    def hcomp2_map(self) -> dict[tuple[str, str], str]:
        return dict(self.hcompose2)

    def id1(self, x: str) -> str:
        return self.id1_map[x]

    def id2(self, a: str) -> str:
        return self.id2_map[a]

    def is_identity1(self, a: str) -> bool:
        return any(i == a for _, i in self.identity1)

    def hcomp1(self, g: str, f: str) -> str:
        try:
            return self.hcomp1_map[(g, f)]
        except KeyError:
            raise CompositionError(f"1-cells ({g}, {f}) not composable")

    def vcomp2(self, b: str, a: str) -> str:
        """Vertical composite b•a of 2-cells; a is applied first."""
        try:
            return self.vcomp2_map[(b, a)]
        except KeyError:
            raise CompositionError(f"2-cells ({b}, {a}) not •-composable")

    def hcomp2(self, b: str, a: str) -> str:
        """Horizontal composite b∗a of 2-cells; a sits on the left."""
        try:
            return self.hcomp2_map[(b, a)]
        except KeyError:
            raise CompositionError(f"2-cells ({b}, {a}) not ∗-composable")

    def underlying_category(self) -> FiniteCategory:
        """The category of 0- and 1-cells."""
        return FiniteCategory(tuple(sorted(self.cells0)),
                              tuple(sorted(self.cells1, key=lambda m: m.name)),
                              _sorted_pairs(self.identity1),
                              _sorted_pairs(self.hcompose1),
                              name=f"{self.name}_1" if self.name else "")


def strict2(name, cells0, cells1, identity1, hcompose1,
            cells2, identity2, vcompose2, hcompose2) -> Strict2Category:
    c1 = tuple(sorted((Morphism(*m) if not isinstance(m, Morphism) else m
                       for m in cells1), key=lambda m: m.name))
    c2 = tuple(sorted((TwoCell(*c) if not isinstance(c, TwoCell) else c
                       for c in cells2), key=lambda c: c.name))
    return Strict2Category(tuple(sorted(cells0)), c1, _sorted_pairs(identity1),
                           _sorted_pairs(hcompose1), c2, _sorted_pairs(identity2),
                           _sorted_pairs(vcompose2), _sorted_pairs(hcompose2),
                           name=name)


# ---------------------------------------------------------------------------
# Decorated bicategories and their maps

@dataclass(frozen=True)
class DecoratedBicategory:
    decoration: FiniteCategory
    bicat: Strict2Category
    name: str = field(default="", compare=False)


@dataclass(frozen=True)
class DecoratedPseudofunctor:
    """A strict map of decorated bicategories: a functor on decorations
    together with compatible 1- and 2-cell maps."""
    dom: DecoratedBicategory
    cod: DecoratedBicategory
    on_objects: tuple[tuple[str, str], ...]
    on_decoration: tuple[tuple[str, str], ...]
    on_cells1: tuple[tuple[str, str], ...]
    on_cells2: tuple[tuple[str, str], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def obj_map(self) -> dict[str, str]:
        return dict(self.on_objects)

    @cached_property
    def dec_map(self) -> dict[str, str]:
        return dict(self.on_decoration)

    @cached_property
    def c1_map(self) -> dict[str, str]:
        return dict(self.on_cells1)

    @cached_property
    def c2_map(self) -> dict[str, str]:
        return dict(self.on_cells2)


def identity_pseudofunctor(b: DecoratedBicategory) -> DecoratedPseudofunctor:
    return DecoratedPseudofunctor(
        b, b,
        tuple((x, x) for x in b.bicat.cells0),
        tuple((m.name, m.name) for m in b.decoration.morphisms),
        tuple((m.name, m.name) for m in b.bicat.cells1),
        tuple((c.name, c.name) for c in b.bicat.cells2),
        name=f"id_{b.name}" if b.name else "id")


def compose_pseudofunctors(g2: DecoratedPseudofunctor,
                           g1: DecoratedPseudofunctor) -> DecoratedPseudofunctor:
    if g1.cod != g2.dom:
        raise CompositionError("pseudofunctors not composable")
    return DecoratedPseudofunctor(
        g1.dom, g2.cod,
        tuple((x, g2.obj_map[y]) for x, y in g1.on_objects),
        tuple((f, g2.dec_map[h]) for f, h in g1.on_decoration),
        tuple((a, g2.c1_map[b]) for a, b in g1.on_cells1),
        tuple((c, g2.c2_map[d]) for c, d in g1.on_cells2),
        name=f"{g2.name}.{g1.name}")


# ---------------------------------------------------------------------------
# Double categories

@dataclass(frozen=True)
class SquareCell:
    name: str
    top: str
    bottom: str
    left: str
    right: str


@dataclass(frozen=True)
class DoubleCategory:
    objects: tuple[str, ...]
    hmor: tuple[Morphism, ...]
    hcompose: tuple[tuple[tuple[str, str], str], ...]
    hidentity: tuple[tuple[str, str], ...]
    vcat: FiniteCategory
    squares: tuple[SquareCell, ...]
    vcomp: tuple[tuple[tuple[str, str], str], ...]
    hcomp: tuple[tuple[tuple[str, str], str], ...]
    hid: tuple[tuple[str, str], ...]
    vid: tuple[tuple[str, str], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def hm(self) -> dict[str, Morphism]:
        return {m.name: m for m in self.hmor}

    @cached_property
    def sq(self) -> dict[str, SquareCell]:
        return {s.name: s for s in self.squares}

    @cached_property
    def hcomp1_map(self) -> dict[tuple[str, str], str]:
        return dict(self.hcompose)

    @cached_property
    def hid1_map(self) -> dict[str, str]:
        return dict(self.hidentity)

    @cached_property
    def vcomp_map(self) -> dict[tuple[str, str], str]:
        return dict(self.vcomp)

    @cached_property
    def hcomp_map(self) -> dict[tuple[str, str], str]:
        return dict(self.hcomp)

    @cached_property
    def hid_map(self) -> dict[str, str]:
        return dict(self.hid)

    @cached_property
    def vid_map(self) -> dict[str, str]:
        return dict(self.vid)

    def hid1(self, x: str) -> str:
        return self.hid1_map[x]

    def is_identity_hmor(self, a: str) -> bool:
        return any(i == a for _, i in self.hidentity)

    def hcomp1(self, b: str, a: str) -> str:
        try:
            return self.hcomp1_map[(b, a)]
        except KeyError:
            raise CompositionError(f"horizontal morphisms ({b}, {a}) not composable")

    def vert(self, top: str, bottom: str) -> str:
        """Vertical composite: square ``top`` stacked above ``bottom``."""
        try:
            return self.vcomp_map[(bottom, top)]
        except KeyError:
            raise CompositionError(f"squares ({top}, {bottom}) not vertically composable")

    def horiz(self, left: str, right: str) -> str:
        """Horizontal composite: square ``left`` pasted left of ``right``."""
        try:
            return self.hcomp_map[(right, left)]
        except KeyError:
            raise CompositionError(f"squares ({left}, {right}) not horizontally composable")

    def is_globular(self, s: SquareCell) -> bool:
        return self.vcat.is_identity(s.left) and self.vcat.is_identity(s.right)

    def globular_squares(self) -> tuple[SquareCell, ...]:
        return tuple(s for s in self.squares if self.is_globular(s))


def double_category(name, objects, hmor, hcompose, hidentity, vcat,
                    squares, vcomp, hcomp, hid, vid) -> DoubleCategory:
    hms = tuple(sorted((Morphism(*m) if not isinstance(m, Morphism) else m
                        for m in hmor), key=lambda m: m.name))
    sqs = tuple(sorted((SquareCell(*s) if not isinstance(s, SquareCell) else s
                        for s in squares), key=lambda s: s.name))
    return DoubleCategory(tuple(sorted(objects)), hms, _sorted_pairs(hcompose),
                          _sorted_pairs(hidentity), vcat, sqs,
                          _sorted_pairs(vcomp), _sorted_pairs(hcomp),
                          _sorted_pairs(hid), _sorted_pairs(vid), name=name)


# ---------------------------------------------------------------------------
# Validation

@dataclass(frozen=True)
class Violation:
    law: str
    witness: str


@dataclass
class ValidationReport:
    subject: str
    entries: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.entries

    def add(self, law: str, witness) -> None:
        self.entries.append(Violation(law, str(witness)))

    def as_dict(self) -> dict:
        return {"subject": self.subject, "ok": self.ok,
                "violations": [{"law": v.law, "witness": v.witness}
                               for v in self.entries]}


def _check_category_tables(rep, prefix, objects, mors, id_map, comp_map):
    """Core category laws on explicit tables; shared by all levels."""
    by_name = {m.name: m for m in mors}
    for m in mors:
        if m.dom not in objects or m.cod not in objects:
            rep.add(f"{prefix}boundary-objects", m)
    for x in objects:
        i = id_map.get(x)
        if i is None:
            rep.add(f"{prefix}identity-total", x)
        elif i not in by_name or by_name[i].dom != x or by_name[i].cod != x:
            rep.add(f"{prefix}identity-boundary", (x, i))
    for (g, f), h in comp_map.items():
        if g not in by_name or f not in by_name or h not in by_name:
            rep.add(f"{prefix}compose-names", ((g, f), h))
            continue
        if by_name[f].cod != by_name[g].dom:
            rep.add(f"{prefix}compose-on-non-composable", (g, f))
        elif by_name[h].dom != by_name[f].dom or by_name[h].cod != by_name[g].cod:
            rep.add(f"{prefix}compose-boundary", ((g, f), h))
    for f in by_name:
        for g in by_name:
            if by_name[f].cod == by_name[g].dom and (g, f) not in comp_map:
                rep.add(f"{prefix}compose-total", (g, f))
    for m in mors:
        fi = id_map.get(m.dom)
        gi = id_map.get(m.cod)
        if fi and comp_map.get((m.name, fi)) != m.name:
            rep.add(f"{prefix}right-unit", m.name)
        if gi and comp_map.get((gi, m.name)) != m.name:
            rep.add(f"{prefix}left-unit", m.name)
    for f in by_name:
        for g in by_name:
            if by_name[f].cod != by_name[g].dom:
                continue
            for h in by_name:
                if by_name[g].cod != by_name[h].dom:
                    continue
                lhs = comp_map.get((h, comp_map.get((g, f))))
                rhs = comp_map.get((comp_map.get((h, g)), f))
                if lhs != rhs or lhs is None:
                    rep.add(f"{prefix}associativity", (h, g, f))
                    return  # one witness per law keeps reports readable


def validate_finite_category(c: FiniteCategory) -> ValidationReport:
    rep = ValidationReport(c.name or "category", [])
    _check_category_tables(rep, "", set(c.objects), c.morphisms, c.id_map, c.comp_map)
    return rep


def validate_strict2(s: Strict2Category) -> ValidationReport:
    rep = ValidationReport(s.name or "two_category", [])
    _check_category_tables(rep, "1/", set(s.cells0), s.cells1, s.id1_map, s.hcomp1_map)
    # 2-cells: parallel boundaries
    for c in s.cells2:
        if c.dom not in s.c1 or c.cod not in s.c1:
            rep.add("2/boundary-names", c)
            continue
        d, e = s.c1[c.dom], s.c1[c.cod]
        if (d.dom, d.cod) != (e.dom, e.cod):
            rep.add("2/parallel", c)
    # each hom-set with vcompose2 is a category
    hom_objects = {m.name for m in s.cells1}
    cells2_as_mor = tuple(Morphism(c.name, c.dom, c.cod) for c in s.cells2)
    _check_category_tables(rep, "2v/", hom_objects, cells2_as_mor, s.id2_map, s.vcomp2_map)
    # horizontal composition of 2-cells: totality and boundaries
    def hcomposable2(b, a):
        ca, cb = s.c2[a], s.c2[b]
        return s.c1[ca.dom].cod == s.c1[cb.dom].dom
    for a in s.c2:
        for b in s.c2:
            if hcomposable2(b, a):
                if (b, a) not in s.hcomp2_map:
                    rep.add("2h/total", (b, a))
                else:
                    r = s.c2.get(s.hcomp2_map[(b, a)])
                    want_dom = s.hcomp1_map.get((s.c2[b].dom, s.c2[a].dom))
                    want_cod = s.hcomp1_map.get((s.c2[b].cod, s.c2[a].cod))
                    if r is None or r.dom != want_dom or r.cod != want_cod:
                        rep.add("2h/boundary", (b, a))
            elif (b, a) in s.hcomp2_map:
                rep.add("2h/on-non-composable", (b, a))
    # strict unit 2-cells and associativity of ∗
    for a in s.c2:
        c = s.c2[a]
        x = s.c1[c.dom].dom
        y = s.c1[c.dom].cod
        lu = s.id2_map.get(s.id1_map.get(y, ""), None)
        ru = s.id2_map.get(s.id1_map.get(x, ""), None)
        if lu and s.hcomp2_map.get((lu, a)) != a:
            rep.add("2h/left-unit", a)
        if ru and s.hcomp2_map.get((a, ru)) != a:
            rep.add("2h/right-unit", a)
    for a in s.c2:
        for b in s.c2:
            if not hcomposable2(b, a):
                continue
            for c in s.c2:
                if not hcomposable2(c, b):
                    continue
                lhs = s.hcomp2_map.get((c, s.hcomp2_map[(b, a)]))
                rhs = s.hcomp2_map.get((s.hcomp2_map[(c, b)], a))
                if lhs != rhs or lhs is None:
                    rep.add("2h/associativity", (c, b, a))
    # identity 2-cells are ∗-functorial
    for f in s.c1:
        for g in s.c1:
            if s.c1[f].cod == s.c1[g].dom:
                lhs = s.hcomp2_map.get((s.id2_map[g], s.id2_map[f]))
                if lhs != s.id2_map.get(s.hcomp1_map[(g, f)]):
                    rep.add("2h/identity-functorial", (g, f))
    # interchange
    for (b, a), ba in s.vcomp2_map.items():
        for (d, c), dc in s.vcomp2_map.items():
            if not hcomposable2(c, a):
                continue
            lhs = s.hcomp2_map.get((dc, ba))
            ca = s.hcomp2_map.get((c, a))
            db = s.hcomp2_map.get((d, b))
            rhs = s.vcomp2_map.get((db, ca)) if ca and db else None
            if lhs != rhs or lhs is None:
                rep.add("interchange", ((d, c), (b, a)))
                return rep
    return rep


def validate_decorated(b: DecoratedBicategory) -> ValidationReport:
    rep = ValidationReport(b.name or "decorated", [])
    sub = validate_finite_category(b.decoration)
    rep.entries += [Violation("decoration/" + v.law, v.witness) for v in sub.entries]
    sub = validate_strict2(b.bicat)
    rep.entries += [Violation("bicat/" + v.law, v.witness) for v in sub.entries]
    if set(b.decoration.objects) != set(b.bicat.cells0):
        rep.add("shared-objects", (b.decoration.objects, b.bicat.cells0))
    for x in b.decoration.objects:
        if b.decoration.id_map.get(x) is None:
            rep.add("decoration-identities", x)
    return rep


def validate_double(d: DoubleCategory) -> ValidationReport:
    rep = ValidationReport(d.name or "double", [])
    _check_category_tables(rep, "h/", set(d.objects), d.hmor, d.hid1_map, d.hcomp1_map)
    sub = validate_finite_category(d.vcat)
    rep.entries += [Violation("v/" + v.law, v.witness) for v in sub.entries]
    if set(d.vcat.objects) != set(d.objects):
        rep.add("shared-objects", (d.objects, d.vcat.objects))
        return rep
    # square corners
    for s in d.squares:
        t, b = d.hm.get(s.top), d.hm.get(s.bottom)
        l, r = d.vcat.mor.get(s.left), d.vcat.mor.get(s.right)
        if None in (t, b, l, r):
            rep.add("sq/names", s)
            continue
        if (t.dom, t.cod) != (l.dom, r.dom) or (b.dom, b.cod) != (l.cod, r.cod):
            rep.add("sq/corners", s)
    # C1: objects = hmor, morphisms = squares under vertical composition
    sq_as_mor = tuple(Morphism(s.name, s.top, s.bottom) for s in d.squares)
    _check_category_tables(rep, "sqv/", {m.name for m in d.hmor}, sq_as_mor,
                           d.vid_map, d.vcomp_map)
    # vertical composition stacks the side boundaries in vcat
    for (y, x), z in d.vcomp_map.items():
        if x not in d.sq or y not in d.sq or z not in d.sq:
            continue
        sx, sy, sz = d.sq[x], d.sq[y], d.sq[z]
        if (sz.left != d.vcat.comp_map.get((sy.left, sx.left))
                or sz.right != d.vcat.comp_map.get((sy.right, sx.right))):
            rep.add("sqv/side-boundaries", (x, y))
    for a, i in d.vid_map.items():
        s = d.sq.get(i)
        hm = d.hm.get(a)
        if s is None or hm is None:
            continue
        if (s.top, s.bottom) != (a, a) or not d.is_globular(s):
            rep.add("sqv/identity-square-shape", a)
        elif (s.left, s.right) != (d.vcat.id_map[hm.dom], d.vcat.id_map[hm.cod]):
            rep.add("sqv/identity-square-sides", a)
    # horizontal composition of squares
    def hcomposable(y, x):
        return d.sq[x].right == d.sq[y].left
    for x in d.sq:
        for y in d.sq:
            if hcomposable(y, x):
                if (y, x) not in d.hcomp_map:
                    rep.add("sqh/total", (x, y))
                    continue
                z = d.sq.get(d.hcomp_map[(y, x)])
                sx, sy = d.sq[x], d.sq[y]
                if (z is None
                        or z.top != d.hcomp1_map.get((sy.top, sx.top))
                        or z.bottom != d.hcomp1_map.get((sy.bottom, sx.bottom))
                        or z.left != sx.left or z.right != sy.right):
                    rep.add("sqh/boundary", (x, y))
            elif (y, x) in d.hcomp_map:
                rep.add("sqh/on-non-composable", (x, y))
    for x in d.sq:
        for y in d.sq:
            if not hcomposable(y, x):
                continue
            for z in d.sq:
                if not hcomposable(z, y):
                    continue
                lhs = d.hcomp_map.get((z, d.hcomp_map[(y, x)]))
                rhs = d.hcomp_map.get((d.hcomp_map[(z, y)], x))
                if lhs != rhs or lhs is None:
                    rep.add("sqh/associativity", (x, y, z))
    # strict unit law: horizontal identity squares absorb on matching sides
    for x in d.sq:
        s = d.sq[x]
        il, ir = d.hid_map.get(s.left), d.hid_map.get(s.right)
        if il and d.hcomp_map.get((x, il)) != x:
            rep.add("sqh/left-unit", x)
        if ir and d.hcomp_map.get((ir, x)) != x:
            rep.add("sqh/right-unit", x)
    # horizontal identity functor
    for f, i in d.hid_map.items():
        s = d.sq.get(i)
        fm = d.vcat.mor.get(f)
        if s is None or fm is None:
            rep.add("hid/names", f)
            continue
        if (s.left, s.right) != (f, f) or (s.top != d.hid1_map[fm.dom]
                                           or s.bottom != d.hid1_map[fm.cod]):
            rep.add("hid/boundary", f)
    for f in d.vcat.mor:
        if f not in d.hid_map:
            rep.add("hid/total", f)
    for (g, f), h in d.vcat.comp_map.items():
        lhs = d.vcomp_map.get((d.hid_map.get(g, ""), d.hid_map.get(f, "")))
        if lhs != d.hid_map.get(h):
            rep.add("hid/functorial", (g, f))
    for x, i in d.vcat.id_map.items():
        if d.hid_map.get(i) != d.vid_map.get(d.hid1_map.get(x, "")):
            rep.add("hid/identities", x)
    # horizontal composition functor preserves vertical identities
    for (b, a), c in d.hcomp1_map.items():
        lhs = d.hcomp_map.get((d.vid_map.get(b, ""), d.vid_map.get(a, "")))
        if lhs != d.vid_map.get(c):
            rep.add("sqh/identity-functorial", (b, a))
    # interchange on 2x2 grids
    for (c, a), ca in d.vcomp_map.items():
        for (dd, b), db in d.vcomp_map.items():
            if d.sq[a].right != d.sq[b].left or d.sq[c].right != d.sq[dd].left:
                continue
            lhs = d.hcomp_map.get((db, ca))
            ab = d.hcomp_map.get((b, a))
            cd = d.hcomp_map.get((dd, c))
            rhs = d.vcomp_map.get((cd, ab)) if ab and cd else None
            if lhs != rhs or lhs is None:
                rep.add("interchange", ((a, b), (c, dd)))
                return rep
    return rep


def validate_pseudofunctor(g: DecoratedPseudofunctor) -> ValidationReport:
    rep = ValidationReport(g.name or "pseudofunctor", [])
    bd, bc = g.dom, g.cod
    for x in bd.bicat.cells0:
        if g.obj_map.get(x) not in bc.bicat.cells0:
            rep.add("objects/total", x)
    for m in bd.decoration.morphisms:
        im = g.dec_map.get(m.name)
        tm = bc.decoration.mor.get(im) if im else None
        if tm is None or tm.dom != g.obj_map.get(m.dom) or tm.cod != g.obj_map.get(m.cod):
            rep.add("decoration/boundary", m.name)
    for x, i in bd.decoration.id_map.items():
        if g.dec_map.get(i) != bc.decoration.id_map.get(g.obj_map.get(x, "")):
            rep.add("decoration/identity", x)
    for (q, p), r in bd.decoration.comp_map.items():
        if bc.decoration.comp_map.get((g.dec_map.get(q, ""), g.dec_map.get(p, ""))) \
                != g.dec_map.get(r):
            rep.add("decoration/compose", (q, p))
    for m in bd.bicat.cells1:
        im = g.c1_map.get(m.name)
        tm = bc.bicat.c1.get(im) if im else None
        if tm is None or tm.dom != g.obj_map.get(m.dom) or tm.cod != g.obj_map.get(m.cod):
            rep.add("cells1/boundary", m.name)
    for x, i in bd.bicat.id1_map.items():
        if g.c1_map.get(i) != bc.bicat.id1_map.get(g.obj_map.get(x, "")):
            rep.add("cells1/identity", x)
    for (q, p), r in bd.bicat.hcomp1_map.items():
        if bc.bicat.hcomp1_map.get((g.c1_map.get(q, ""), g.c1_map.get(p, ""))) \
                != g.c1_map.get(r):
            rep.add("cells1/compose", (q, p))
    for c in bd.bicat.cells2:
        ic = g.c2_map.get(c.name)
        tc = bc.bicat.c2.get(ic) if ic else None
        if tc is None or tc.dom != g.c1_map.get(c.dom) or tc.cod != g.c1_map.get(c.cod):
            rep.add("cells2/boundary", c.name)
    for a, i in bd.bicat.id2_map.items():
        if g.c2_map.get(i) != bc.bicat.id2_map.get(g.c1_map.get(a, "")):
            rep.add("cells2/identity", a)
    for (q, p), r in bd.bicat.vcomp2_map.items():
        if bc.bicat.vcomp2_map.get((g.c2_map.get(q, ""), g.c2_map.get(p, ""))) \
                != g.c2_map.get(r):
            rep.add("cells2/vcompose", (q, p))
    for (q, p), r in bd.bicat.hcomp2_map.items():
        if bc.bicat.hcomp2_map.get((g.c2_map.get(q, ""), g.c2_map.get(p, ""))) \
                != g.c2_map.get(r):
            rep.add("cells2/hcompose", (q, p))
    return rep


def validate(value) -> ValidationReport:
    """Exhaustive law check; the report is empty exactly when valid."""
    if isinstance(value, FiniteCategory):
        return validate_finite_category(value)
    if isinstance(value, Strict2Category):
        return validate_strict2(value)
    if isinstance(value, DecoratedBicategory):
        return validate_decorated(value)
    if isinstance(value, DoubleCategory):
        return validate_double(value)
    if isinstance(value, DecoratedPseudofunctor):
        return validate_pseudofunctor(value)
    raise TypeError(f"cannot validate {type(value).__name__}")


# ---------------------------------------------------------------------------
# Example builders

def delooping(g: Group) -> FiniteCategory:
    """One object, morphisms the group elements, composition the group law."""
    if not g.is_group():
        raise ValueError(f"{g.name or 'input'} is not a group table")
    mors = tuple(Morphism(e, "pt", "pt") for e in g.elements)
    return finite_category(f"Omega_{g.name}", ("pt",), mors,
                           (("pt", g.unit),), g.mult)


def double_delooping(a: Group) -> Strict2Category:
    """One 0-cell, one 1-cell, 2-cells the abelian group ``a``."""
    if not a.is_group():
        raise ValueError(f"{a.name or 'input'} is not a group table")
    if not a.is_abelian():
        raise ValueError(f"{a.name or 'input'} is non-abelian")
    cells2 = tuple(TwoCell(e, "u", "u") for e in a.elements)
    return strict2(f"TwoOmega_{a.name}", ("pt",), (Morphism("u", "pt", "pt"),),
                   (("pt", "u"),), ((("u", "u"), "u"),),
                   cells2, (("u", a.unit),), a.mult, a.mult)


def decorated(dec: FiniteCategory, bic: Strict2Category,
              name: str = "") -> DecoratedBicategory:
    return DecoratedBicategory(dec, bic, name=name or f"{dec.name}__{bic.name}")


def quintets(s: Strict2Category) -> DoubleCategory:
    """Ehresmann's double category of quintets of a strict 2-category.

    A square with boundary (top a, bottom b, left f, right g) is a 2-cell
    g∘a ⇒ b∘f; compositions paste with identity whiskers.
    """
    vcat = s.underlying_category()
    sq_list = []
    names = {}
    for t in s.cells1:
        for l in s.cells1:
            if l.dom != t.dom:
                continue
            for r in s.cells1:
                if r.dom != t.cod:
                    continue
                for b in s.cells1:
                    if b.dom != l.cod or b.cod != r.cod:
                        continue
                    dom1 = s.hcomp1_map[(r.name, t.name)]
                    cod1 = s.hcomp1_map[(b.name, l.name)]
                    for c in s.cells2:
                        if c.dom != dom1 or c.cod != cod1:
                            continue
                        globular = s.is_identity1(l.name) and s.is_identity1(r.name)
                        nm = c.name if globular else \
                            f"q_{t.name}_{b.name}_{l.name}_{r.name}_{c.name}"
                        sq_list.append(SquareCell(nm, t.name, b.name, l.name, r.name))
                        names[nm] = c.name
    sqs = {q.name: q for q in sq_list}

    def cell_of(q):
        return names[q]

    def whisker_l(f, c):
        """id2(f) ∗ c for a 1-cell f on the right of the pasting."""
        return s.hcomp2(s.id2(f), c)

    def whisker_r(c, f):
        return s.hcomp2(c, s.id2(f))

    vcomp = {}
    for x in sq_list:
        for y in sq_list:
            if x.bottom != y.top:
                continue
            cell = s.vcomp2(whisker_r(cell_of(y.name), x.left),
                            whisker_l(y.right, cell_of(x.name)))
            left = vcat.comp(y.left, x.left)
            right = vcat.comp(y.right, x.right)
            target = next(q.name for q in sq_list
                          if (q.top, q.bottom, q.left, q.right) ==
                          (x.top, y.bottom, left, right)
                          and cell_of(q.name) == cell)
            vcomp[(y.name, x.name)] = target
    hcomp = {}
    for x in sq_list:
        for y in sq_list:
            if x.right != y.left:
                continue
            cell = s.vcomp2(whisker_l(y.bottom, cell_of(x.name)),
                            whisker_r(cell_of(y.name), x.top))
            top = s.hcomp1(y.top, x.top)
            bottom = s.hcomp1(y.bottom, x.bottom)
            target = next(q.name for q in sq_list
                          if (q.top, q.bottom, q.left, q.right) ==
                          (top, bottom, x.left, y.right)
                          and cell_of(q.name) == cell)
            hcomp[(y.name, x.name)] = target
    hid = {}
    for f in vcat.mor.values():
        i1, i2 = s.id1(f.dom), s.id1(f.cod)
        hid[f.name] = next(q.name for q in sq_list
                           if (q.top, q.bottom, q.left, q.right) ==
                           (i1, i2, f.name, f.name)
                           and cell_of(q.name) == s.id2(f.name))
    vid = {}
    for a in s.cells1:
        vid[a.name] = next(q.name for q in sq_list
                           if (q.top, q.bottom, q.left, q.right) ==
                           (a.name, a.name, vcat.id_map[a.dom], vcat.id_map[a.cod])
                           and cell_of(q.name) == s.id2(a.name))
    return double_category(f"Quintets_{s.name}", s.cells0, s.cells1,
                           s.hcompose1, s.identity1, vcat, sq_list,
                           _sorted_pairs(vcomp), _sorted_pairs(hcomp),
                           _sorted_pairs(hid), _sorted_pairs(vid))


def commuting_squares(c: FiniteCategory) -> DoubleCategory:
    """Double category whose squares are the commuting quadruples of ``c``."""
    sq_list = []
    for t in c.morphisms:
        for l in c.morphisms:
            if l.dom != t.dom:
                continue
            for r in c.morphisms:
                if r.dom != t.cod:
                    continue
                for b in c.morphisms:
                    if b.dom != l.cod or b.cod != r.cod:
                        continue
                    if c.comp(r.name, t.name) != c.comp(b.name, l.name):
                        continue
                    nm = f"sq_{t.name}_{b.name}_{l.name}_{r.name}"
                    sq_list.append(SquareCell(nm, t.name, b.name, l.name, r.name))
    index = {(q.top, q.bottom, q.left, q.right): q.name for q in sq_list}
    vcomp = {}
    hcomp = {}
    for x in sq_list:
        for y in sq_list:
            if x.bottom == y.top:
                vcomp[(y.name, x.name)] = index[(x.top, y.bottom,
                                                 c.comp(y.left, x.left),
                                                 c.comp(y.right, x.right))]
            if x.right == y.left:
                hcomp[(y.name, x.name)] = index[(c.comp(y.top, x.top),
                                                 c.comp(y.bottom, x.bottom),
                                                 x.left, y.right)]
    hid = {f.name: index[(c.id_of(f.dom), c.id_of(f.cod), f.name, f.name)]
           for f in c.morphisms}
    vid = {a.name: index[(a.name, a.name, c.id_of(a.dom), c.id_of(a.cod))]
           for a in c.morphisms}
    return double_category(f"CSq_{c.name}", c.objects, c.morphisms, c.compose,
                           c.identity, c, sq_list, _sorted_pairs(vcomp),
                           _sorted_pairs(hcomp), _sorted_pairs(hid),
                           _sorted_pairs(vid))


def group_pair_double(g: Group, a: Group) -> DoubleCategory:
    """The quintet double category of the double delooping of ``a``,
    re-decorated by the delooping of ``g``: squares are pairs (2-cell,
    group element) with componentwise compositions."""
    if not a.is_abelian():
        raise ValueError("2-cell group must be abelian")
    vcat = delooping(g)
    bic = double_delooping(a)

    def nm(x, k):
        return x if k == g.unit else f"{x}x{k}"

    sq_list = [SquareCell(nm(x, k), "u", "u", k, k)
               for x in a.elements for k in g.elements]
    vcomp = {}
    hcomp = {}
    for x in a.elements:
        for k in g.elements:
            for y in a.elements:
                for m in g.elements:
                    vcomp[(nm(y, m), nm(x, k))] = nm(a.mul(x, y), g.mul(m, k))
                    if k == m:
                        hcomp[(nm(y, m), nm(x, k))] = nm(a.mul(x, y), k)
    hid = {k: nm(a.unit, k) for k in g.elements}
    vid = {"u": nm(a.unit, g.unit)}
    return double_category(f"GPair_{g.name}_{a.name}", ("pt",),
                           (Morphism("u", "pt", "pt"),), ((("u", "u"), "u"),),
                           (("pt", "u"),), vcat, sq_list,
                           _sorted_pairs(vcomp), _sorted_pairs(hcomp),
                           _sorted_pairs(hid), _sorted_pairs(vid))


def arrow_category() -> FiniteCategory:
    return finite_category("Arrow", ("x", "y"),
                           (("idx", "x", "x"), ("idy", "y", "y"), ("u", "x", "y")),
                           (("x", "idx"), ("y", "idy")), ())


def composable_pair_category() -> FiniteCategory:
    mors = (("idx", "x", "x"), ("idy", "y", "y"), ("idz", "z", "z"),
            ("f", "x", "y"), ("g", "y", "z"), ("gf", "x", "z"))
    return finite_category("Pair", ("x", "y", "z"), mors,
                           (("x", "idx"), ("y", "idy"), ("z", "idz")),
                           ((("g", "f"), "gf"),))


def two_category_of_category(c: FiniteCategory, name: str = "") -> Strict2Category:
    """A category seen as a 2-category with only identity 2-cells."""
    cells2 = tuple(TwoCell(f"i{m.name}", m.name, m.name) for m in c.morphisms)
    id2 = tuple((m.name, f"i{m.name}") for m in c.morphisms)
    vcomp2 = tuple(((f"i{m.name}", f"i{m.name}"), f"i{m.name}") for m in c.morphisms)
    hcomp2 = tuple((((f"i{q}", f"i{p}"), f"i{r}"))
                   for (q, p), r in c.comp_map.items())
    return strict2(name or f"Two_{c.name}", c.objects, c.morphisms, c.identity,
                   c.compose, cells2, id2, vcomp2, hcomp2)


def arrow_two_category() -> Strict2Category:
    return two_category_of_category(arrow_category(), "TwoArrow")


def cell_two_category() -> Strict2Category:
    """Two objects, parallel 1-cells u, v and a single 2-cell al: u => v."""
    cells1 = (("ia", "a", "a"), ("ib", "b", "b"), ("u", "a", "b"), ("v", "a", "b"))
    cells2 = (("al", "u", "v"), ("eia", "ia", "ia"), ("eib", "ib", "ib"),
              ("eu", "u", "u"), ("ev", "v", "v"))
    id2 = (("ia", "eia"), ("ib", "eib"), ("u", "eu"), ("v", "ev"))
    vcomp2 = ((("al", "eu"), "al"), (("ev", "al"), "al"),
              (("eia", "eia"), "eia"), (("eib", "eib"), "eib"),
              (("eu", "eu"), "eu"), (("ev", "ev"), "ev"))
    hcomp1 = ((("u", "ia"), "u"), (("ib", "u"), "u"),
              (("v", "ia"), "v"), (("ib", "v"), "v"),
              (("ia", "ia"), "ia"), (("ib", "ib"), "ib"))
    hcomp2 = ((("al", "eia"), "al"), (("eib", "al"), "al"),
              (("eu", "eia"), "eu"), (("eib", "eu"), "eu"),
              (("ev", "eia"), "ev"), (("eib", "ev"), "ev"),
              (("eia", "eia"), "eia"), (("eib", "eib"), "eib"))
    return strict2("TwoCell1", ("a", "b"), cells1, (("a", "ia"), ("b", "ib")),
                   hcomp1, cells2, id2, vcomp2, hcomp2)
