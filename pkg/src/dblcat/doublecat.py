"""Structural calculus on finite double categories: decorated
horizontalization, the globularly generated piece, vertical filtrations,
length, groupoid checks, and double functors.

All closures are fixpoint iterations over sorted square names, so results
are deterministic across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .presentations import (CompositionError, DecoratedBicategory,
                            DoubleCategory, FiniteCategory, Strict2Category,
                            TwoCell, ValidationReport, _sorted_pairs,
                            double_category)

DEFAULT_KMAX = 8


# ---------------------------------------------------------------------------
# Decorated horizontalization

def h_star(c: DoubleCategory) -> DecoratedBicategory:
    """The decorated bicategory (C_0, HC): the vertical-arrow category
    together with the globular squares of ``c``."""
    glob = c.globular_squares()
    names = {s.name for s in glob}
    cells2 = tuple((s.name, s.top, s.bottom) for s in glob)
    id2 = tuple((a, i) for a, i in c.vid if i in names)
    vcomp2 = tuple(((y, x), z) for (y, x), z in c.vcomp
                   if x in names and y in names)
    hcomp2 = tuple(((y, x), z) for (y, x), z in c.hcomp
                   if x in names and y in names)
    bic = Strict2Category(c.objects, c.hmor, c.hidentity, c.hcompose,
                          tuple(sorted((TwoCell(*t) for t in cells2),
                                       key=lambda t: t.name)),
                          _sorted_pairs(id2), _sorted_pairs(vcomp2),
                          _sorted_pairs(hcomp2), name=f"H_{c.name}")
    return DecoratedBicategory(c.vcat, bic, name=f"Hstar_{c.name}")


# ---------------------------------------------------------------------------
# Globularly generated piece

def _generating_squares(c: DoubleCategory) -> set[str]:
    gens = {s.name for s in c.globular_squares()}
    gens.update(i for _, i in c.hid)
    return gens


def _closure(c: DoubleCategory, start: set[str]) -> set[str]:
    out = set(start)
    frontier = sorted(out)
    while frontier:
        new = set()
        for x in frontier:
            for y in sorted(out):
                for pair in ((y, x), (x, y)):
                    z = c.vcomp_map.get(pair)
                    if z is not None and z not in out:
                        new.add(z)
                    z = c.hcomp_map.get(pair)
                    if z is not None and z not in out:
                        new.add(z)
        out |= new
        frontier = sorted(new)
    return out


def gamma(c: DoubleCategory) -> DoubleCategory:
    """Smallest sub-double category on the full 1-skeleton containing all
    globular and horizontal identity squares."""
    keep = _closure(c, _generating_squares(c))
    if keep == set(c.sq):
        return c
    squares = tuple(s for s in c.squares if s.name in keep)
    vcomp = tuple((p, z) for p, z in c.vcomp
                  if p[0] in keep and p[1] in keep)
    hcomp = tuple((p, z) for p, z in c.hcomp
                  if p[0] in keep and p[1] in keep)
    return double_category(f"gamma_{c.name}", c.objects, c.hmor, c.hcompose,
                           c.hidentity, c.vcat, squares, vcomp, hcomp,
                           c.hid, c.vid)


def is_globularly_generated(c: DoubleCategory) -> bool:
    return _closure(c, _generating_squares(c)) == set(c.sq)


# ---------------------------------------------------------------------------
# Vertical filtration and length

@dataclass
class Filtration:
    layers: list[tuple[frozenset[str], frozenset[str]]]
    stabilized_at: int | None

    def as_dict(self) -> dict:
        return {"layers": [{"k": i + 1, "H": sorted(h), "V": sorted(v)}
                           for i, (h, v) in enumerate(self.layers)],
                "stabilized_at": self.stabilized_at
                if self.stabilized_at is not None else "not within bound"}

    def as_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def _vclose(c: DoubleCategory, start: set[str]) -> set[str]:
    out = set(start)
    out.update(i for _, i in c.vid)
    changed = True
    while changed:
        changed = False
        for x in sorted(out):
            for y in sorted(out):
                z = c.vcomp_map.get((y, x))
                if z is not None and z not in out:
                    out.add(z)
                    changed = True
    return out


def _hclose(c: DoubleCategory, start: set[str]) -> set[str]:
    out = set(start)
    changed = True
    while changed:
        changed = False
        for x in sorted(out):
            for y in sorted(out):
                z = c.hcomp_map.get((y, x))
                if z is not None and z not in out:
                    out.add(z)
                    changed = True
    return out


def vertical_filtration(c: DoubleCategory, kmax: int = DEFAULT_KMAX,
                        extend_to: int = 0) -> Filtration:
    """Alternating closure layers of gamma(c): H_1 is the horizontal closure
    of the generating squares, V_k the vertical closure of H_k, and H_{k+1}
    the horizontal closure of V_k.  Layers past stabilization are constant;
    ``extend_to`` forces at least that many to be recorded."""
    g = gamma(c)
    target = set(g.sq)
    layers = []
    h = _hclose(g, _generating_squares(g))
    stabilized = None
    for k in range(1, kmax + 1):
        v = _vclose(g, h)
        layers.append((frozenset(h), frozenset(v)))
        if v == target and stabilized is None:
            stabilized = k
        if stabilized is not None and k >= extend_to:
            break
        h = _hclose(g, v)
    return Filtration(layers, stabilized)


def length(c: DoubleCategory, kmax: int = DEFAULT_KMAX) -> int | str:
    """The least k at which the vertical filtration of gamma(c) exhausts its
    squares; finite c always stabilizes but the bound keeps runs predictable."""
    f = vertical_filtration(c, kmax)
    return f.stabilized_at if f.stabilized_at is not None \
        else f"unbounded within kmax={kmax}"


# ---------------------------------------------------------------------------
# Groupoid checks

def is_double_groupoid(c: DoubleCategory) -> tuple[bool, str | None]:
    """True when every square is vertically and horizontally invertible and
    both morphism categories are groupoids; otherwise a witness name."""
    if not c.vcat.is_groupoid():
        bad = sorted(f for f in c.vcat.mor if f not in c.vcat.inverse)[0]
        return False, f"vertical morphism {bad} has no inverse"
    hcat = FiniteCategory(c.objects, c.hmor, c.hidentity, c.hcompose)
    if not hcat.is_groupoid():
        bad = sorted(a for a in hcat.mor if a not in hcat.inverse)[0]
        return False, f"horizontal morphism {bad} has no inverse"
    for s in c.squares:
        ok = any(c.vcomp_map.get((t.name, s.name)) == c.vid_map[s.top]
                 and c.vcomp_map.get((s.name, t.name)) == c.vid_map[s.bottom]
                 for t in c.squares)
        if not ok:
            return False, f"square {s.name} has no vertical inverse"
        ok = any(c.hcomp_map.get((t.name, s.name)) == c.hid_map[s.left]
                 and c.hcomp_map.get((s.name, t.name)) == c.hid_map[s.right]
                 for t in c.squares)
        if not ok:
            return False, f"square {s.name} has no horizontal inverse"
    return True, None


def is_decorated_two_groupoid(b: DecoratedBicategory) -> bool:
    if not b.decoration.is_groupoid():
        return False
    hcat = b.bicat.underlying_category()
    if not hcat.is_groupoid():
        return False
    s = b.bicat
    for c in s.cells2:
        has_v = any(s.vcomp2_map.get((d.name, c.name)) == s.id2_map[c.dom]
                    and s.vcomp2_map.get((c.name, d.name)) == s.id2_map[c.cod]
                    for d in s.cells2)
        if not has_v:
            return False
        want_l = s.id2_map[s.id1_map[s.c1[c.dom].dom]]
        want_r = s.id2_map[s.id1_map[s.c1[c.dom].cod]]
        has_h = any(s.hcomp2_map.get((d.name, c.name)) == want_r
                    and s.hcomp2_map.get((c.name, d.name)) == want_l
                    for d in s.cells2)
        if not has_h:
            return False
    return True


# ---------------------------------------------------------------------------
# Minimality of gamma (exhaustive search, size gated)

def minimality_check(c: DoubleCategory, max_squares: int = 12) -> dict:
    """Search for a proper sub-double category with the same decorated
    horizontalization as c; gamma(c) should admit none."""
    g = gamma(c)
    if len(g.squares) > max_squares:
        return {"attempted": False, "reason": f"more than {max_squares} squares"}
    required = _generating_squares(g)
    optional = sorted(set(g.sq) - required)
    # every sub-double category on the full 1-skeleton with the same
    # decorated horizontalization must contain the generating squares, so
    # enumerating square subsets between `required` and everything suffices
    for r in range(1, len(optional) + 1):
        for dropped in _subsets(optional, r):
            keep = set(g.sq) - set(dropped)
            closed = all(g.vcomp_map[p] in keep
                         for p in g.vcomp_map if p[0] in keep and p[1] in keep) \
                and all(g.hcomp_map[p] in keep
                        for p in g.hcomp_map if p[0] in keep and p[1] in keep)
            if closed:
                return {"attempted": True, "minimal": False,
                        "witness_drop": sorted(dropped)}
    return {"attempted": True, "minimal": True}


def _subsets(items: list[str], r: int):
    return combinations(items, r)


# ---------------------------------------------------------------------------
# Double functors

@dataclass(frozen=True)
class DoubleFunctor:
    dom: DoubleCategory
    cod: DoubleCategory
    on_objects: tuple[tuple[str, str], ...]
    on_hmor: tuple[tuple[str, str], ...]
    on_vmor: tuple[tuple[str, str], ...]
    on_squares: tuple[tuple[str, str], ...]
    name: str = field(default="", compare=False)

    @cached_property
    def obj_map(self) -> dict[str, str]:
        return dict(self.on_objects)

    @cached_property
    def hmor_map(self) -> dict[str, str]:
        return dict(self.on_hmor)

    @cached_property
    def vmor_map(self) -> dict[str, str]:
        return dict(self.on_vmor)

    @cached_property
    def sq_map(self) -> dict[str, str]:
        return dict(self.on_squares)


def identity_double_functor(c: DoubleCategory) -> DoubleFunctor:
    return DoubleFunctor(c, c,
                         tuple((x, x) for x in c.objects),
                         tuple((m.name, m.name) for m in c.hmor),
                         tuple((m.name, m.name) for m in c.vcat.morphisms),
                         tuple((s.name, s.name) for s in c.squares),
                         name=f"id_{c.name}")


def compose_double_functors(t2: DoubleFunctor, t1: DoubleFunctor) -> DoubleFunctor:
    if t1.cod != t2.dom:
        raise CompositionError("double functors not composable")
    return DoubleFunctor(t1.dom, t2.cod,
                         tuple((x, t2.obj_map[y]) for x, y in t1.on_objects),
                         tuple((a, t2.hmor_map[b]) for a, b in t1.on_hmor),
                         tuple((f, t2.vmor_map[g]) for f, g in t1.on_vmor),
                         tuple((s, t2.sq_map[r]) for s, r in t1.on_squares),
                         name=f"{t2.name}.{t1.name}")


def validate_double_functor(t: DoubleFunctor) -> ValidationReport:
    rep = ValidationReport(t.name or "double_functor", [])
    d, c = t.dom, t.cod
    for x in d.objects:
        if t.obj_map.get(x) not in c.objects:
            rep.add("objects/total", x)
    for m in d.hmor:
        im = c.hm.get(t.hmor_map.get(m.name, ""))
        if im is None or im.dom != t.obj_map.get(m.dom) or im.cod != t.obj_map.get(m.cod):
            rep.add("hmor/boundary", m.name)
    for x, i in d.hid1_map.items():
        if t.hmor_map.get(i) != c.hid1_map.get(t.obj_map.get(x, "")):
            rep.add("hmor/identity", x)
    for (b, a), r in d.hcomp1_map.items():
        if c.hcomp1_map.get((t.hmor_map.get(b, ""), t.hmor_map.get(a, ""))) \
                != t.hmor_map.get(r):
            rep.add("hmor/compose", (b, a))
    for m in d.vcat.morphisms:
        im = c.vcat.mor.get(t.vmor_map.get(m.name, ""))
        if im is None or im.dom != t.obj_map.get(m.dom) or im.cod != t.obj_map.get(m.cod):
            rep.add("vmor/boundary", m.name)
    for x, i in d.vcat.id_map.items():
        if t.vmor_map.get(i) != c.vcat.id_map.get(t.obj_map.get(x, "")):
            rep.add("vmor/identity", x)
    for (g, f), r in d.vcat.comp_map.items():
        if c.vcat.comp_map.get((t.vmor_map.get(g, ""), t.vmor_map.get(f, ""))) \
                != t.vmor_map.get(r):
            rep.add("vmor/compose", (g, f))
    for s in d.squares:
        im = c.sq.get(t.sq_map.get(s.name, ""))
        if im is None:
            rep.add("sq/total", s.name)
            continue
        want = (t.hmor_map.get(s.top), t.hmor_map.get(s.bottom),
                t.vmor_map.get(s.left), t.vmor_map.get(s.right))
        if (im.top, im.bottom, im.left, im.right) != want:
            rep.add("sq/boundary", s.name)
    for (y, x), z in d.vcomp_map.items():
        if c.vcomp_map.get((t.sq_map.get(y, ""), t.sq_map.get(x, ""))) \
                != t.sq_map.get(z):
            rep.add("sq/vcomp", (y, x))
    for (y, x), z in d.hcomp_map.items():
        if c.hcomp_map.get((t.sq_map.get(y, ""), t.sq_map.get(x, ""))) \
                != t.sq_map.get(z):
            rep.add("sq/hcomp", (y, x))
    for f, i in d.hid_map.items():
        if t.sq_map.get(i) != c.hid_map.get(t.vmor_map.get(f, "")):
            rep.add("sq/hid", f)
    for a, i in d.vid_map.items():
        if t.sq_map.get(i) != c.vid_map.get(t.hmor_map.get(a, "")):
            rep.add("sq/vid", a)
    return rep
