"""Evaluation of free-construction terms in a finite double category: the
canonical projection onto the globularly generated piece, plus executable
audits for strictness, filtration surjectivity, uniqueness against
independently recursed functors, and invariance under rewriting.

Evaluation is structural recursion; the layer conditions of the inductive
construction become post-hoc audits over the enumerated universe.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .doublecat import gamma, h_star, is_globularly_generated, vertical_filtration
from .presentations import CompositionError, DecoratedBicategory, DoubleCategory
from .freeggd import (Gen, Glob, HId, HWordT, Join, Leaf, LayeredUniverse,
                      RewriteSystem, SquareTerm, VPath, Word, e_layer, f_layer,
                      render_term, word_leaves)


class ContextError(ValueError):
    """The target does not internalize the base, even after passing to its
    globularly generated piece."""


@dataclass
class ProjectionContext:
    base: DecoratedBicategory
    target: DoubleCategory
    anchoring: dict[SquareTerm, str]
    substituted_gamma: bool
    rewriter: RewriteSystem = field(repr=False, default=None)

    def __post_init__(self):
        if self.rewriter is None:
            self.rewriter = RewriteSystem(self.base)


def build_context(b: DecoratedBicategory, c: DoubleCategory,
                  anchoring: dict | None = None) -> ProjectionContext:
    """Anchor the generators of the free construction on ``b`` inside ``c``,
    replacing ``c`` by its globularly generated piece when needed."""
    substituted = False
    if h_star(c) != b:
        g = gamma(c)
        if g is c or h_star(g) != b:
            raise ContextError(
                f"{c.name or 'target'} does not internalize {b.name or 'base'}")
        c = g
        substituted = True
    elif not is_globularly_generated(c):
        c = gamma(c)
        substituted = True
    if anchoring is None:
        anchoring = {}
        for cell in b.bicat.cells2:
            anchoring[Gen(Glob(cell.name))] = cell.name
        for m in b.decoration.morphisms:
            anchoring[Gen(HId(m.name))] = c.hid_map[m.name]
    return ProjectionContext(b, c, anchoring, substituted)


def q_eval(c: DoubleCategory, w: Word) -> str:
    """Horizontal pasting of a word of squares of ``c`` along its
    parenthesis pattern; leaves are square names."""
    if isinstance(w, Leaf):
        return w.value
    return c.horiz(q_eval(c, w.left), q_eval(c, w.right))


def project(ctx: ProjectionContext, t: SquareTerm) -> str:
    """The canonical projection on squares: generators go to their anchors,
    words paste horizontally, paths compose vertically."""
    c = ctx.target
    if isinstance(t, Gen):
        try:
            return ctx.anchoring[t]
        except KeyError:
            raise ContextError(f"generator {render_term(t)} is not anchored")
    if isinstance(t, VPath):
        out = project(ctx, t.items[0])
        for i in t.items[1:]:
            out = c.vert(out, project(ctx, i))
        return out
    return q_eval(c, _map_leaves(ctx, t.word))


def _map_leaves(ctx, w: Word) -> Word:
    if isinstance(w, Leaf):
        return Leaf(project(ctx, w.value))
    return Join(_map_leaves(ctx, w.left), _map_leaves(ctx, w.right))


def project_independent(ctx: ProjectionContext, t: SquareTerm) -> str:
    """Same generator anchors, different recursion order: words fold
    sequentially from the right and paths from the bottom."""
    c = ctx.target
    if isinstance(t, Gen):
        return ctx.anchoring[t]
    if isinstance(t, VPath):
        out = project_independent(ctx, t.items[-1])
        for i in reversed(t.items[:-1]):
            out = c.vert(project_independent(ctx, i), out)
        return out
    leaves = [project_independent(ctx, l) for l in word_leaves(t.word)]
    out = leaves[-1]
    for l in reversed(leaves[:-1]):
        out = c.horiz(l, out)
    return out


# ---------------------------------------------------------------------------
# Audits

def _sample_pairs(universe, cap: int, seed: int):
    terms = list(universe)
    rng = random.Random(seed)
    n = len(terms)
    if n * n <= cap:
        for x in terms:
            for y in terms:
                yield x, y
        return
    head = terms[:max(2, int(cap ** 0.5))]
    for x in head:
        for y in head:
            yield x, y
    for _ in range(cap - len(head) * len(head)):
        yield rng.choice(terms), rng.choice(terms)


def audit_strictness(ctx: ProjectionContext, universe, *,
                     pair_cap: int = 60_000, seed: int = 0) -> dict:
    """Checks that evaluation respects boundaries, identities, and both
    compositions on enumerated composable pairs (all pairs when they fit
    under the cap, otherwise a seeded deterministic sample)."""
    c = ctx.target
    b = ctx.base
    tc = ctx.rewriter.ctx
    violations = []
    terms = list(universe)
    for t in terms:
        sq = c.sq.get(project(ctx, t))
        bd = tc.boundary(t)
        if sq is None:
            violations.append({"kind": "image", "term": render_term(t)})
            continue
        if (sq.top, sq.bottom, sq.left, sq.right) != bd:
            violations.append({"kind": "boundary", "term": render_term(t),
                               "got": [sq.top, sq.bottom, sq.left, sq.right],
                               "want": list(bd)})
    for a in b.bicat.cells1:
        t = Gen(Glob(b.bicat.id2(a.name)))
        if project(ctx, t) != c.vid_map[a.name]:
            violations.append({"kind": "vertical-identity", "cell1": a.name})
    checked = 0
    for x, y in _sample_pairs(terms, pair_cap, seed):
        bx, by = tc.boundary(x), tc.boundary(y)
        if bx[1] == by[0]:
            checked += 1
            lhs = project(ctx, VPath(tuple(ctx.rewriter._path_items(x)
                                           + ctx.rewriter._path_items(y))))
            rhs = c.vert(project(ctx, x), project(ctx, y))
            if lhs != rhs:
                violations.append({"kind": "vcomp", "x": render_term(x),
                                   "y": render_term(y)})
        if bx[3] == by[2]:
            checked += 1
            lhs = project(ctx, HWordT(Join(Leaf(x), Leaf(y))))
            rhs = c.horiz(project(ctx, x), project(ctx, y))
            if lhs != rhs:
                violations.append({"kind": "hcomp", "x": render_term(x),
                                   "y": render_term(y)})
    return {"strict": not violations, "terms": len(terms),
            "pairs_checked": checked, "pair_cap": pair_cap, "seed": seed,
            "violations": violations[:20]}


def audit_r_compatibility(ctx: ProjectionContext, universe) -> dict:
    """project(t) must equal project(normalize(t)) for every enumerated
    term: the executable form of compatibility with the congruence."""
    rw = ctx.rewriter
    violations = []
    n = 0
    for t in universe:
        n += 1
        if project(ctx, t) != project(ctx, rw.normalize(t)):
            violations.append(render_term(t))
    return {"compatible": not violations, "terms": n,
            "violations": violations[:20]}


def audit_surjectivity(ctx: ProjectionContext, universe: LayeredUniverse,
                       depth: int | None = None, kmax: int = 8) -> dict:
    """Image of each free layer against the vertical filtration of the
    target: level k of the filtration must be covered exactly by the
    enumerated terms of free layer k."""
    c = ctx.target
    filt = vertical_filtration(c, kmax)
    depth = depth if depth is not None else universe.depth
    levels = []
    ok = True
    for k in range(1, depth + 1):
        if k > len(universe.e_layers) or k > len(filt.layers):
            break
        h_img = {project(ctx, t) for t in universe.e_layers[k - 1]}
        v_img = {project(ctx, t) for t in universe.f_layers[k - 1]}
        hset, vset = filt.layers[k - 1]
        entry = {"k": k,
                 "H_image_eq": h_img == set(hset),
                 "V_image_eq": v_img == set(vset),
                 "H_unreached": sorted(set(hset) - h_img),
                 "V_unreached": sorted(set(vset) - v_img),
                 "H_excess": sorted(h_img - set(hset)),
                 "V_excess": sorted(v_img - set(vset))}
        ok = ok and entry["H_image_eq"] and entry["V_image_eq"]
        levels.append(entry)
    covered = [e["k"] for e in levels if e["H_image_eq"] and e["V_image_eq"]]
    return {"surjective_up_to": max(covered) if covered else 0,
            "levels": levels, "stabilized_at": filt.stabilized_at, "ok": ok}


def audit_uniqueness(ctx: ProjectionContext, universe,
                     alternative=None) -> dict:
    """Any double functor agreeing with the projection on generators must
    agree everywhere; compares term by term and reports the first
    difference."""
    alt = alternative if alternative is not None \
        else (lambda t: project_independent(ctx, t))
    gens = [t for t in ctx.anchoring]
    for g in gens:
        if alt(g) != project(ctx, g):
            return {"result": "differs", "witness": render_term(g),
                    "where": "generator"}
    n = 0
    for t in universe:
        n += 1
        if alt(t) != project(ctx, t):
            return {"result": "differs", "witness": render_term(t),
                    "where": "term", "terms": n}
    return {"result": "equal", "terms": n}


def h_star_restriction_check(ctx: ProjectionContext) -> bool:
    """The projection restricts to the identity on the base: 2-cells map to
    the squares carrying their own names and the decoration is untouched."""
    b, c = ctx.base, ctx.target
    for cell in b.bicat.cells2:
        sq = c.sq.get(project(ctx, Gen(Glob(cell.name))))
        if sq is None or sq.name != cell.name:
            return False
        if not c.is_globular(sq) or (sq.top, sq.bottom) != (cell.dom, cell.cod):
            return False
    if c.vcat != b.decoration:
        return False
    for m in b.decoration.morphisms:
        if project(ctx, Gen(HId(m.name))) != c.hid_map[m.name]:
            return False
    return True


def audit_bundle(ctx: ProjectionContext, universe: LayeredUniverse, *,
                 pair_cap: int = 60_000, seed: int = 0) -> dict:
    """The full audit suite as one JSON-ready report."""
    terms = universe.all_terms()
    strict = audit_strictness(ctx, terms, pair_cap=pair_cap, seed=seed)
    rcomp = audit_r_compatibility(ctx, terms)
    surj = audit_surjectivity(ctx, universe)
    uniq = audit_uniqueness(ctx, terms)
    restriction = h_star_restriction_check(ctx)
    ok = (strict["strict"] and rcomp["compatible"] and surj["ok"]
          and uniq["result"] == "equal" and restriction)
    return {"base": ctx.base.name, "target": ctx.target.name,
            "substituted_gamma": ctx.substituted_gamma,
            "bounds": {"depth": universe.depth,
                       "word": universe.weight_bound},
            "seed": seed,
            "strict": strict["strict"],
            "strictness": strict,
            "r_compatible": rcomp["compatible"],
            "r_compatibility": rcomp,
            "surjective_up_to": surj["surjective_up_to"],
            "surjectivity": surj,
            "unique_vs": [uniq["result"]],
            "uniqueness": uniq,
            "h_star_restriction": restriction,
            "ok": ok}


def bundle_to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
