"""Term calculus for the free globularly generated double category of a
decorated bicategory, at finite truncation.

Squares are represented by terms: generator squares (one per 2-cell, one
horizontal identity per decoration morphism), horizontal words of terms
over every parenthesization pattern, and vertical paths of terms.  The
congruence on terms is realized by five oriented rule schemas:

  R1  vertical paths flatten; unit items drop; singletons unwrap
  R2  adjacent generator fusion in paths: globular pairs compose in the
      bicategory, horizontal-identity pairs compose in the decoration
  R3  adjacent globular leaves of a word fuse by horizontal composition
  R4  words rebracket to right combs; word-shaped leaves splice
  R5  horizontal identity leaves are strict units inside words; a word of
      two path leaves with invertible shared boundary and degenerate inner
      edges folds into a single path through the inverse identity square

Every rule strictly decreases the pair (word-leaf count, node count), so
rewriting terminates; all rules are equations in any strict double
category, so evaluation through a double functor is invariant under them.
Confluence is not assumed globally: equality decisions fall back to a
bounded search over reduction sets and may answer Unknown.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .presentations import (CompositionError, DecoratedBicategory,
                            Strict2Category)


# ---------------------------------------------------------------------------
# Parenthesized words

@dataclass(frozen=True)
class Leaf:
    value: object


@dataclass(frozen=True)
class Join:
    left: "Word"
    right: "Word"


Word = Leaf | Join


def word_leaves(w: Word) -> tuple:
    if isinstance(w, Leaf):
        return (w.value,)
    return word_leaves(w.left) + word_leaves(w.right)


def map_word(fn, w: Word) -> Word:
    """Apply fn to every leaf, preserving the tree shape."""
    if isinstance(w, Leaf):
        return Leaf(fn(w.value))
    return Join(map_word(fn, w.left), map_word(fn, w.right))


def word_concat(w1: Word, w2: Word) -> Word:
    return Join(w1, w2)


def right_comb(values) -> Word:
    values = list(values)
    if not values:
        raise ValueError("empty word")
    w = Leaf(values[-1])
    for v in reversed(values[:-1]):
        w = Join(Leaf(v), w)
    return w


@lru_cache(maxsize=None)
def tree_shapes(n: int) -> list:
    """All binary trees with n leaves, as nested (l, r) index tuples."""
    if n == 1:
        return [0]
    out = []
    for k in range(1, n):
        for l in tree_shapes(k):
            for r in tree_shapes(n - k):
                out.append((k, l, r))
    return out


def build_tree(shape, values) -> Word:
    if shape == 0:
        return Leaf(values[0])
    k, ls, rs = shape
    return Join(build_tree(ls, values[:k]), build_tree(rs, values[k:]))


def enumerate_words(items, src, tgt, max_leaves: int,
                    all_bracketings: bool = True) -> list[Word]:
    """All compatible words over ``items`` with at most ``max_leaves``
    leaves: sequences chain tgt to src, and every parenthesization pattern
    of each sequence is produced (or only right combs when disabled)."""
    by_src: dict = {}
    for it in items:
        by_src.setdefault(src(it), []).append(it)
    seqs: list[tuple] = [(it,) for it in items]
    frontier = list(seqs)
    for _ in range(max_leaves - 1):
        nxt = []
        for s in frontier:
            for it in by_src.get(tgt(s[-1]), ()):
                nxt.append(s + (it,))
        seqs += nxt
        frontier = nxt
    out = []
    for s in seqs:
        if all_bracketings:
            for shape in tree_shapes(len(s)):
                out.append(build_tree(shape, list(s)))
        else:
            out.append(right_comb(s))
    return out


def mu(psi, phi, w: Word, *, src=None, tgt=None, src_out=None, tgt_out=None) -> Word:
    """Leafwise evaluation of a word along a term map ``psi`` whose
    boundaries are carried by ``phi``; the tree shape is preserved."""
    out = map_word(psi, w)
    if src is not None and src_out is not None:
        for x, y in zip(word_leaves(w), word_leaves(out)):
            if src_out(y) != phi(src(x)) or tgt_out(y) != phi(tgt(x)):
                raise ValueError(f"boundary intertwining violated at leaf {x!r}")
    return out


# ---------------------------------------------------------------------------
# Generator squares and square terms

@dataclass(frozen=True)
class Glob:
    cell: str


@dataclass(frozen=True)
class HId:
    arrow: str


GeneratorSquare = Glob | HId


@dataclass(frozen=True)
class Gen:
    gen: GeneratorSquare


@dataclass(frozen=True)
class HWordT:
    word: Word


@dataclass(frozen=True)
class VPath:
    items: tuple


SquareTerm = Gen | HWordT | VPath


def vpath(items) -> SquareTerm:
    """Path constructor: splices nested paths, unwraps singletons."""
    flat = []
    for it in items:
        if isinstance(it, VPath):
            flat.extend(it.items)
        else:
            flat.append(it)
    if len(flat) == 1:
        return flat[0]
    return VPath(tuple(flat))


def hword(leaves) -> SquareTerm:
    leaves = list(leaves)
    if len(leaves) == 1:
        return leaves[0]
    return HWordT(right_comb(leaves))


def generators(b: DecoratedBicategory) -> tuple[SquareTerm, ...]:
    """One globular generator per 2-cell, one horizontal identity per
    decoration morphism."""
    gens = [Gen(Glob(c.name)) for c in b.bicat.cells2]
    gens += [Gen(HId(m.name)) for m in b.decoration.morphisms]
    return tuple(sorted(gens, key=render_term))


@lru_cache(maxsize=None)
def term_weight(t: SquareTerm) -> int:
    if isinstance(t, Gen):
        return 1
    if isinstance(t, VPath):
        return sum(term_weight(i) for i in t.items)
    return sum(term_weight(l) for l in word_leaves(t.word))


@lru_cache(maxsize=None)
def term_nodes(t: SquareTerm) -> int:
    if isinstance(t, Gen):
        return 1
    if isinstance(t, VPath):
        return 1 + sum(term_nodes(i) for i in t.items)
    return 1 + sum(term_nodes(l) for l in word_leaves(t.word))


@lru_cache(maxsize=None)
def e_layer(t: SquareTerm) -> int:
    """Least k with t in E_k: generators and their words sit at layer 1, a
    word over true paths of layer k sits at layer k+1."""
    if isinstance(t, Gen):
        return 1
    if isinstance(t, VPath):
        return max(e_layer(i) for i in t.items)
    best = 1
    for l in word_leaves(t.word):
        if isinstance(l, VPath):
            best = max(best, f_layer(l) + 1)
        else:
            best = max(best, e_layer(l))
    return best


@lru_cache(maxsize=None)
def f_layer(t: SquareTerm) -> int:
    """Least k with t a morphism of F_k."""
    if isinstance(t, VPath):
        return max(e_layer(i) for i in t.items)
    return e_layer(t)


# ---------------------------------------------------------------------------
# Boundaries

class TermContext:
    """Boundary and validity computations for terms over a fixed base."""

    def __init__(self, base: DecoratedBicategory):
        self.base = base
        self._cache: dict = {}

    def boundary(self, t: SquareTerm) -> tuple[str, str, str, str]:
        """(top 1-cell, bottom 1-cell, source arrow, target arrow)."""
        hit = self._cache.get(t)
        if hit is not None:
            return hit
        b = self.base
        s2 = b.bicat
        if isinstance(t, Gen):
            g = t.gen
            if isinstance(g, Glob):
                c = s2.c2[g.cell]
                x = s2.c1[c.dom].dom
                y = s2.c1[c.dom].cod
                out = (c.dom, c.cod, b.decoration.id_map[x], b.decoration.id_map[y])
            else:
                m = b.decoration.mor[g.arrow]
                out = (s2.id1_map[m.dom], s2.id1_map[m.cod], g.arrow, g.arrow)
        elif isinstance(t, VPath):
            tops = [self.boundary(i) for i in t.items]
            for a, bnd in zip(tops, tops[1:]):
                if a[1] != bnd[0]:
                    raise CompositionError(f"path not vertically compatible: {render_term(t)}")
            src = tops[0][2]
            tgt = tops[0][3]
            for bnd in tops[1:]:
                src = b.decoration.comp(bnd[2], src)
                tgt = b.decoration.comp(bnd[3], tgt)
            out = (tops[0][0], tops[-1][1], src, tgt)
        else:
            out = self._word_boundary(t.word)
        self._cache[t] = out
        return out

    def _word_boundary(self, w: Word) -> tuple[str, str, str, str]:
        if isinstance(w, Leaf):
            return self.boundary(w.value)
        lt, lb, ls, ltg = self._word_boundary(w.left)
        rt, rb, rs, rtg = self._word_boundary(w.right)
        if ltg != rs:
            raise CompositionError("word not horizontally compatible")
        s2 = self.base.bicat
        return (s2.hcomp1(rt, lt), s2.hcomp1(rb, lb), ls, rtg)

    def top(self, t):
        return self.boundary(t)[0]

    def bottom(self, t):
        return self.boundary(t)[1]

    def src(self, t):
        return self.boundary(t)[2]

    def tgt(self, t):
        return self.boundary(t)[3]

    def check(self, t: SquareTerm) -> bool:
        try:
            self.boundary(t)
            return True
        except (CompositionError, KeyError):
            return False


# ---------------------------------------------------------------------------
# Rewriting

@dataclass
class RewriteSystem:
    """The oriented rule schemas R1-R5 over a fixed decorated bicategory,
    with bounds for the equality search."""
    base: DecoratedBicategory
    size_bound: int = 4000
    depth_bound: int = 64

    def __post_init__(self):
        self.ctx = TermContext(self.base)
        self._nf: dict = {}
        b = self.base.bicat
        self._id2cells = {i for _, i in b.identity2}
        self._id1cells = {i for _, i in b.identity1}
        self._idarrows = {i for _, i in self.base.decoration.identity}

    # -- classification helpers

    def identity_term(self, a: str) -> SquareTerm:
        """Canonical representative of the vertical identity on 1-cell a."""
        return Gen(Glob(self.base.bicat.id2(a)))

    def is_identity_term(self, t: SquareTerm) -> bool:
        return isinstance(t, Gen) and isinstance(t.gen, Glob) \
            and t.gen.cell in self._id2cells

    def _is_unit_leaf(self, t: SquareTerm) -> bool:
        """Leaves acting as strict horizontal units inside a word."""
        if isinstance(t, Gen) and isinstance(t.gen, HId):
            return True
        if self.is_identity_term(t):
            a = self.base.bicat.c2[t.gen.cell].dom
            return a in self._id1cells
        return False

    def _mergeable(self, x: SquareTerm, y: SquareTerm) -> str | None:
        """Inverse arrow enabling the word-to-path fold of (x, y), if any."""
        bx = self.ctx.boundary(x)
        by = self.ctx.boundary(y)
        if bx[1] not in self._id1cells or by[0] not in self._id1cells:
            return None
        return self.base.decoration.inverse.get(bx[3])

    def _path_items(self, t: SquareTerm) -> tuple:
        return t.items if isinstance(t, VPath) else (t,)

    # -- normalization

    def normalize(self, t: SquareTerm) -> SquareTerm:
        hit = self._nf.get(t)
        if hit is not None:
            return hit
        out = self._normalize(t)
        self._nf[t] = out
        self._nf[out] = out
        return out

    def _normalize(self, t: SquareTerm) -> SquareTerm:
        b = self.base
        if isinstance(t, Gen):
            if isinstance(t.gen, HId) and t.gen.arrow in self._idarrows:
                x = b.decoration.mor[t.gen.arrow].dom
                return self.identity_term(b.bicat.id1(x))
            return t
        if isinstance(t, VPath):
            top = self.ctx.top(t)
            items = []
            for i in t.items:
                n = self.normalize(i)
                items.extend(self._path_items(n))
            items = self._reduce_path(items)
            if not items:
                return self.identity_term(top)
            if len(items) == 1:
                return items[0]
            return VPath(tuple(items))
        # horizontal word
        leaves = []
        for l in word_leaves(t.word):
            n = self.normalize(l)
            if isinstance(n, HWordT):
                leaves.extend(word_leaves(n.word))
            else:
                leaves.append(n)
        leaves = self._reduce_word(leaves)
        if len(leaves) == 1:
            return self.normalize(leaves[0])
        return HWordT(right_comb(leaves))

    def _fuse_pair(self, x: SquareTerm, y: SquareTerm) -> SquareTerm | None:
        """R2: vertical fusion of adjacent generators (x above y)."""
        if not (isinstance(x, Gen) and isinstance(y, Gen)):
            return None
        gx, gy = x.gen, y.gen
        if isinstance(gx, Glob) and isinstance(gy, Glob):
            return Gen(Glob(self.base.bicat.vcomp2(gy.cell, gx.cell)))
        if isinstance(gx, HId) and isinstance(gy, HId):
            return Gen(HId(self.base.decoration.comp(gy.arrow, gx.arrow)))
        return None

    def _reduce_path(self, items: list) -> list:
        items = [i for i in items if not self.is_identity_term(i)]
        changed = True
        while changed:
            changed = False
            for i in range(len(items) - 1):
                fused = self._fuse_pair(items[i], items[i + 1])
                if fused is not None:
                    fused = self.normalize(fused)
                    repl = [] if self.is_identity_term(fused) else [fused]
                    items[i:i + 2] = repl
                    changed = True
                    break
        return items

    def _reduce_word(self, leaves: list) -> list:
        changed = True
        while changed:
            changed = False
            for i in range(len(leaves)):
                if len(leaves) > 1 and self._is_unit_leaf(leaves[i]):
                    del leaves[i]
                    changed = True
                    break
                if i + 1 >= len(leaves):
                    continue
                x, y = leaves[i], leaves[i + 1]
                if (isinstance(x, Gen) and isinstance(x.gen, Glob)
                        and isinstance(y, Gen) and isinstance(y.gen, Glob)):
                    fused = Gen(Glob(self.base.bicat.hcomp2(y.gen.cell, x.gen.cell)))
                    leaves[i:i + 2] = [self.normalize(fused)]
                    changed = True
                    break
                if isinstance(x, VPath) or isinstance(y, VPath):
                    inv = self._mergeable(x, y)
                    if inv is not None:
                        merged = VPath(self._path_items(x) + (Gen(HId(inv)),)
                                       + self._path_items(y))
                        leaves[i:i + 2] = [self.normalize(merged)]
                        changed = True
                        break
        return leaves

    # -- one-step reducts (for equality search and confluence checks)

    def one_step_reducts(self, t: SquareTerm) -> list[SquareTerm]:
        out = []
        if isinstance(t, Gen):
            if isinstance(t.gen, HId) and t.gen.arrow in self._idarrows:
                x = self.base.decoration.mor[t.gen.arrow].dom
                out.append(self.identity_term(self.base.bicat.id1(x)))
            return out
        if isinstance(t, VPath):
            items = t.items
            for i, it in enumerate(items):
                for r in self.one_step_reducts(it):
                    out.append(vpath(items[:i] + (r,) + items[i + 1:]))
                if isinstance(it, VPath):
                    out.append(vpath(items[:i] + it.items + items[i + 1:]))
                if self.is_identity_term(it):
                    rest = items[:i] + items[i + 1:]
                    out.append(vpath(rest) if rest
                               else self.identity_term(self.ctx.top(t)))
            for i in range(len(items) - 1):
                fused = self._fuse_pair(items[i], items[i + 1])
                if fused is not None:
                    out.append(vpath(items[:i] + (fused,) + items[i + 2:]))
            if len(items) == 1:
                out.append(items[0])
            return out
        leaves = list(word_leaves(t.word))
        if t.word != right_comb(leaves):
            out.append(HWordT(right_comb(leaves)))
        for i, l in enumerate(leaves):
            for r in self.one_step_reducts(l):
                out.append(hword(leaves[:i] + [r] + leaves[i + 1:]))
            if isinstance(l, HWordT):
                out.append(hword(leaves[:i] + list(word_leaves(l.word))
                                 + leaves[i + 1:]))
            if len(leaves) > 1 and self._is_unit_leaf(l):
                out.append(hword(leaves[:i] + leaves[i + 1:]))
        for i in range(len(leaves) - 1):
            x, y = leaves[i], leaves[i + 1]
            if (isinstance(x, Gen) and isinstance(x.gen, Glob)
                    and isinstance(y, Gen) and isinstance(y.gen, Glob)):
                fused = Gen(Glob(self.base.bicat.hcomp2(y.gen.cell, x.gen.cell)))
                out.append(hword(leaves[:i] + [fused] + leaves[i + 2:]))
            if isinstance(x, VPath) or isinstance(y, VPath):
                inv = self._mergeable(x, y)
                if inv is not None:
                    merged = VPath(self._path_items(x) + (Gen(HId(inv)),)
                                   + self._path_items(y))
                    out.append(hword(leaves[:i] + [merged] + leaves[i + 2:]))
        if len(leaves) == 1:
            out.append(leaves[0])
        return out

    # -- equality

    def confluent_domain(self) -> bool:
        """Bases where normal forms are complete invariants: a single
        object with a single 1-cell, decorated by a groupoid (the reduced
        free-product situation, confluence checked in the test suite)."""
        b = self.base
        return (len(b.bicat.cells0) == 1 and len(b.bicat.cells1) == 1
                and b.decoration.is_groupoid())

    def decide_eq(self, t1: SquareTerm, t2: SquareTerm,
                  effort: int | None = None) -> str:
        """'equal', 'distinct', or 'unknown'."""
        effort = effort if effort is not None else self.size_bound
        try:
            b1 = self.ctx.boundary(t1)
            b2 = self.ctx.boundary(t2)
        except CompositionError:
            return "distinct"
        if b1 != b2:
            return "distinct"
        n1, n2 = self.normalize(t1), self.normalize(t2)
        if n1 == n2:
            return "equal"
        if self.confluent_domain():
            return "distinct"
        seen1 = self._reduction_set(t1, effort)
        seen2 = self._reduction_set(t2, effort)
        if seen1 & seen2:
            return "equal"
        if (isinstance(n1, Gen) and isinstance(n2, Gen)
                and isinstance(n1.gen, Glob) and isinstance(n2.gen, Glob)):
            # distinct 2-cells stay distinct: the base embeds in the free
            # construction
            return "distinct"
        return "unknown"

    def _reduction_set(self, t: SquareTerm, effort: int) -> set:
        seen = {t, self.normalize(t)}
        queue = [t]
        while queue and len(seen) < effort:
            cur = queue.pop()
            for r in self.one_step_reducts(cur):
                if r not in seen:
                    seen.add(r)
                    queue.append(r)
        return seen


# ---------------------------------------------------------------------------
# Layered universes

@dataclass
class LayeredUniverse:
    base: DecoratedBicategory
    depth: int
    weight_bound: int
    all_bracketings: bool
    e_layers: list[tuple[SquareTerm, ...]]
    f_layers: list[tuple[SquareTerm, ...]]

    def all_terms(self) -> tuple[SquareTerm, ...]:
        seen = []
        have = set()
        for layer in self.e_layers + self.f_layers:
            for t in layer:
                if t not in have:
                    have.add(t)
                    seen.append(t)
        return tuple(seen)

    def counts(self) -> dict:
        return {"E": [len(l) for l in self.e_layers],
                "F": [len(l) for l in self.f_layers]}


class BoundExceeded(RuntimeError):
    pass


def _extend_sequences(items, key_out, key_in, weight, bound, max_seqs):
    """All chains over ``items`` where key_out of one element matches key_in
    of the next, with total weight at most ``bound``; buckets by weight so
    extension never scans elements that cannot fit."""
    buckets: dict = {}
    for t in items:
        w = weight(t)
        if w <= bound:
            buckets.setdefault((key_in(t), w), []).append(t)
    out = []
    frontier = [((t,), weight(t)) for t in items if weight(t) <= bound]
    while frontier:
        nxt = []
        for s, w in frontier:
            k = key_out(s[-1])
            for extra in range(1, bound - w + 1):
                for t in buckets.get((k, extra), ()):
                    nxt.append((s + (t,), w + extra))
        out += nxt
        if len(out) > max_seqs:
            raise BoundExceeded(f"enumeration exceeded {max_seqs} sequences")
        frontier = nxt
    return out


def _hwords_over(ctx: TermContext, pool, bound: int, all_bracketings: bool,
                 max_terms: int) -> list:
    seqs = _extend_sequences(pool, ctx.tgt, ctx.src, term_weight, bound, max_terms)
    out = []
    for s, _ in seqs:
        if all_bracketings:
            for shape in tree_shapes(len(s)):
                out.append(HWordT(build_tree(shape, list(s))))
        else:
            out.append(HWordT(right_comb(s)))
        if len(out) > max_terms:
            raise BoundExceeded(f"word enumeration exceeded {max_terms} terms")
    return out


def _vpaths_over(ctx: TermContext, pool, bound: int, max_terms: int) -> list:
    items = [t for t in pool if not isinstance(t, VPath)]
    seqs = _extend_sequences(items, ctx.bottom, ctx.top, term_weight, bound,
                             max_terms)
    return [VPath(s) for s, _ in seqs]


def build_layers(b: DecoratedBicategory, depth: int, weight_bound: int,
                 all_bracketings: bool = True,
                 max_terms: int = 2_000_000) -> LayeredUniverse:
    """The truncated term universe (E_1, F_1, ..., E_depth, F_depth).

    Layers are cumulative sets of terms in spliced form: path items are
    never paths and word leaves are never words (those variants are one
    flattening step away and carry no extra classes).  Weight counts
    generator occurrences; enumeration that would exceed ``max_terms``
    raises rather than silently truncating.
    """
    ctx = TermContext(b)
    gens = list(generators(b))
    e_layers: list[tuple] = []
    f_layers: list[tuple] = []
    e_cur = set(gens)
    e_cur.update(_hwords_over(ctx, gens, weight_bound, all_bracketings, max_terms))
    for k in range(1, depth + 1):
        if k > 1:
            prev_f = set(f_layers[-1] if f_layers else ())
            e_cur = set(prev_f)
            e_cur.update(_hwords_over(ctx, sorted(prev_f, key=render_term),
                                      weight_bound, all_bracketings, max_terms))
        e_sorted = tuple(sorted(e_cur, key=render_term))
        e_layers.append(e_sorted)
        f_cur = set(e_cur)
        f_cur.update(_vpaths_over(ctx, e_sorted, weight_bound, max_terms))
        f_layers.append(tuple(sorted(f_cur, key=render_term)))
    return LayeredUniverse(b, depth, weight_bound, all_bracketings,
                           e_layers, f_layers)


# ---------------------------------------------------------------------------
# Truncations

@dataclass
class FreeTruncation:
    base: DecoratedBicategory
    depth: int
    weight_bound: int
    universe: LayeredUniverse
    rewriter: RewriteSystem
    reps_h: list[tuple[SquareTerm, ...]]
    reps_v: list[tuple[SquareTerm, ...]]
    globular_reps: dict[str, SquareTerm]
    hid_reps: dict[str, SquareTerm]
    vcomp_table: dict[tuple[SquareTerm, SquareTerm], SquareTerm]
    hcomp_table: dict[tuple[SquareTerm, SquareTerm], SquareTerm]
    truncated_pairs: int

    @property
    def squares(self) -> tuple[SquareTerm, ...]:
        return self.reps_v[-1]

    def counts(self) -> dict:
        return {"H": [len(l) for l in self.reps_h],
                "V": [len(l) for l in self.reps_v],
                "truncated_pairs": self.truncated_pairs}


def free_truncation(b: DecoratedBicategory, depth: int = 2,
                    weight_bound: int = 4,
                    all_bracketings: bool = True) -> FreeTruncation:
    """Canonical square representatives of the free construction, per layer,
    with the induced compositions on representatives within the bound."""
    uni = build_layers(b, depth, weight_bound, all_bracketings)
    rw = RewriteSystem(b)
    ctx = rw.ctx

    def reps_of(layer):
        reps = {rw.normalize(t) for t in layer}
        reps = {r for r in reps if term_weight(r) <= weight_bound}
        return tuple(sorted(reps, key=render_term))

    reps_h = [reps_of(l) for l in uni.e_layers]
    reps_v = [reps_of(l) for l in uni.f_layers]
    glob_reps = {c.name: rw.normalize(Gen(Glob(c.name))) for c in b.bicat.cells2}
    hid_reps = {m.name: rw.normalize(Gen(HId(m.name)))
                for m in b.decoration.morphisms}
    vtab: dict = {}
    htab: dict = {}
    truncated = 0
    squares = reps_v[-1]
    for x in squares:
        for y in squares:
            if ctx.bottom(x) == ctx.top(y):
                z = rw.normalize(vpath([x, y]))
                if term_weight(z) <= weight_bound:
                    vtab[(x, y)] = z
                else:
                    truncated += 1
            if ctx.tgt(x) == ctx.src(y):
                try:
                    z = rw.normalize(hword([x, y]))
                except CompositionError:
                    continue
                if term_weight(z) <= weight_bound:
                    htab[(x, y)] = z
                else:
                    truncated += 1
    return FreeTruncation(b, depth, weight_bound, uni, rw, reps_h, reps_v,
                          glob_reps, hid_reps, vtab, htab, truncated)


# ---------------------------------------------------------------------------
# Length evidence

@dataclass
class LengthEvidence:
    base_name: str
    depth: int
    weight_bound: int
    consistent_with_length: int
    counterexample: SquareTerm | None
    scanned: int

    def as_dict(self) -> dict:
        return {"base": self.base_name, "depth": self.depth,
                "word_bound": self.weight_bound,
                "consistent_with_length": self.consistent_with_length,
                "counterexample": None if self.counterexample is None
                else render_term(self.counterexample),
                "scanned": self.scanned}


def _reduced_path_pool(rw: RewriteSystem, weight_bound: int) -> set:
    """Normal forms of the first vertical layer within the bound, reached
    by folding one word at a time onto already-reduced paths."""
    ctx = rw.ctx
    uni = build_layers(rw.base, 1, weight_bound, all_bracketings=False)
    seeds = {rw.normalize(t) for t in uni.e_layers[0]}
    pool = {t for t in seeds if term_weight(t) <= weight_bound}
    frontier = set(pool)
    while frontier:
        new = set()
        for p in frontier:
            for e in seeds:
                if ctx.bottom(p) != ctx.top(e):
                    continue
                if term_weight(p) + term_weight(e) > weight_bound:
                    continue
                q = rw.normalize(vpath([p, e]))
                if term_weight(q) <= weight_bound and q not in pool:
                    new.add(q)
        pool |= new
        frontier = new
    return pool


def free_length_evidence(b: DecoratedBicategory, depth: int = 2,
                         weight_bound: int = 6) -> LengthEvidence:
    """Scans every word over reduced layer-k representatives within the
    bound and checks it rewrites into layer k; the least consistent k is
    bounded evidence for the length of the free construction."""
    rw = RewriteSystem(b)
    ctx = rw.ctx
    pool = _reduced_path_pool(rw, weight_bound)
    scanned = 0
    counterexample = None
    consistent = 1
    for k in range(1, depth):
        words = _hwords_over(ctx, sorted(pool, key=render_term), weight_bound,
                             False, 2_000_000)
        stuck = None
        for w in words:
            scanned += 1
            nf = rw.normalize(w)
            if f_layer(nf) > k:
                stuck = w
                break
        if stuck is None:
            consistent = k
            break
        counterexample = stuck
        consistent = k + 1
        next_pool = {rw.normalize(vpath([t])) for t in pool}
        next_pool.update(rw.normalize(w) for w in words)
        pool = {t for t in next_pool if term_weight(t) <= weight_bound}
    return LengthEvidence(b.name, depth, weight_bound, consistent,
                          counterexample, scanned)


# ---------------------------------------------------------------------------
# Term-level inverses (decorated 2-groupoid bases)

def v_inverse2(s: Strict2Category, c: str) -> str:
    cell = s.c2[c]
    for d in s.c2:
        if (s.vcomp2_map.get((d, c)) == s.id2_map[cell.dom]
                and s.vcomp2_map.get((c, d)) == s.id2_map[cell.cod]):
            return d
    raise ValueError(f"2-cell {c} has no vertical inverse")


def h_inverse2(s: Strict2Category, c: str) -> str:
    cell = s.c2[c]
    x = s.c1[cell.dom].dom
    y = s.c1[cell.dom].cod
    want_l = s.id2_map[s.id1_map[x]]
    want_r = s.id2_map[s.id1_map[y]]
    for d in s.c2:
        if (s.hcomp2_map.get((d, c)) == want_l
                and s.hcomp2_map.get((c, d)) == want_r):
            return d
    raise ValueError(f"2-cell {c} has no horizontal inverse")


def vertical_inverse_term(b: DecoratedBicategory, t: SquareTerm) -> SquareTerm:
    """The inverse recursion: reverse paths, invert generators, and keep
    word order, leafwise."""
    if isinstance(t, Gen):
        if isinstance(t.gen, Glob):
            return Gen(Glob(v_inverse2(b.bicat, t.gen.cell)))
        inv = b.decoration.inverse.get(t.gen.arrow)
        if inv is None:
            raise ValueError(f"arrow {t.gen.arrow} has no inverse")
        return Gen(HId(inv))
    if isinstance(t, VPath):
        return VPath(tuple(vertical_inverse_term(b, i) for i in reversed(t.items)))
    return HWordT(map_word(lambda l: vertical_inverse_term(b, l), t.word))


def horizontal_inverse_term(b: DecoratedBicategory, t: SquareTerm) -> SquareTerm:
    """Horizontal inverses: generators invert (identity squares are their
    own inverses), words reverse, paths keep order."""
    if isinstance(t, Gen):
        if isinstance(t.gen, Glob):
            return Gen(Glob(h_inverse2(b.bicat, t.gen.cell)))
        return t
    if isinstance(t, VPath):
        return VPath(tuple(horizontal_inverse_term(b, i) for i in t.items))
    leaves = [horizontal_inverse_term(b, l) for l in word_leaves(t.word)]
    return HWordT(right_comb(list(reversed(leaves))))


# ---------------------------------------------------------------------------
# Serialization

def render_term(t: SquareTerm) -> str:
    if isinstance(t, Gen):
        if isinstance(t.gen, Glob):
            return f"(g {t.gen.cell})"
        return f"(id {t.gen.arrow})"
    if isinstance(t, VPath):
        return "(v " + " ".join(render_term(i) for i in t.items) + ")"
    return _render_word(t.word)


def _render_word(w: Word) -> str:
    if isinstance(w, Leaf):
        return render_term(w.value)
    return f"(h {_render_word(w.left)} {_render_word(w.right)})"


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_term(text: str) -> SquareTerm:
    tokens = _TOKEN.findall(text)
    pos = 0

    def parse() -> SquareTerm | Word:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of term")
        tok = tokens[pos]
        if tok != "(":
            raise ValueError(f"expected '(' at token {pos}, got {tok!r}")
        pos += 1
        head = tokens[pos]
        pos += 1
        if head in ("g", "id"):
            name = tokens[pos]
            pos += 1
            _expect(")")
            return Gen(Glob(name)) if head == "g" else Gen(HId(name))
        if head == "v":
            items = []
            while tokens[pos] != ")":
                items.append(parse())
            pos += 1
            if not items:
                raise ValueError("(v) needs at least one item")
            return VPath(tuple(items))
        if head == "h":
            parts = []
            while tokens[pos] != ")":
                parts.append(parse())
            pos += 1
            if len(parts) < 2:
                raise ValueError("(h ...) needs at least two parts")
            word = _as_word(parts[-1])
            for p in reversed(parts[:-1]):
                word = Join(_as_word(p), word)
            return HWordT(word)
        raise ValueError(f"unknown term head {head!r}")

    def _expect(tok):
        nonlocal pos
        if tokens[pos] != tok:
            raise ValueError(f"expected {tok!r} at token {pos}")
        pos += 1

    def _as_word(t) -> Word:
        if isinstance(t, HWordT):
            return t.word
        return Leaf(t)

    out = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens after term")
    return out
