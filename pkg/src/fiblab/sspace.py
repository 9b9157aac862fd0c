"""Truncated simplicial spaces: simplicial objects in finitely presented
simplicial sets, together with the standard discrete objects (representable
spaces, their boundaries and spines, the free-isomorphism spaces), products,
pullbacks and pushouts, exponentials, mapping spaces and fibers.

A space is levels X_0..X_M plus the face and degeneracy operator maps; any
simplicial operator acts through its epi-mono factorization.  Discrete
spaces (every level a constant simplicial set) are the exact tier of the
whole workbench: they are equivalent to plain simplicial sets via the first
row, and the heavy constructions take that shortcut whenever it is sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import poset, sset
from .poset import MonotoneMap
from .sset import (FinSimplicialSet, SSetMap, Simplex, SSetError,
                   TruncationError, from_levels, pair_normal_form)


class SSpaceError(SSetError):
    pass


class FinSimplicialSpace:
    """Levels X_0..X_M with face operators d_i: X_n -> X_{n-1} and
    degeneracies s_i: X_n -> X_{n+1}.

    ``horizontal_gen_bound`` records (when known) the largest level carrying
    content not generated by degeneracies from below; it feeds the exactness
    flag of derived objects.
    """

    def __init__(self, levels, face_ops, deg_ops, exact=True, name="",
                 horizontal_gen_bound=None):
        self.levels = list(levels)
        self.level_bound = len(self.levels) - 1
        self.face_ops = dict(face_ops)   # (n, i) -> SSetMap X_n -> X_{n-1}
        self.deg_ops = dict(deg_ops)     # (n, i) -> SSetMap X_n -> X_{n+1}
        self.exact = exact
        self.name = name
        self.horizontal_gen_bound = horizontal_gen_bound
        self._op_cache = {}

    def __repr__(self):
        tag = self.name or "FinSimplicialSpace"
        sizes = tuple(len(lv.cell_dim) for lv in self.levels)
        return f"{tag}(levels=0..{self.level_bound}, cells={sizes}, exact={self.exact})"

    def level(self, m):
        if not 0 <= m <= self.level_bound:
            raise SSpaceError(f"level {m} outside 0..{self.level_bound}")
        return self.levels[m]

    @property
    def is_discrete(self):
        return all(lv.is_discrete for lv in self.levels)

    def operator(self, alpha: MonotoneMap):
        """The structure map X_b -> X_a induced by alpha: [a] -> [b]."""
        key = (alpha.source_size, alpha.target_size, alpha.values)
        if key in self._op_cache:
            return self._op_cache[key]
        a, b = alpha.source_size, alpha.target_size
        if b > self.level_bound or a > self.level_bound:
            raise SSpaceError(f"operator {alpha!r} leaves levels 0..{self.level_bound}")
        image = sorted(set(alpha.values))
        q = len(image) - 1
        # epi-mono: alpha = delta . sigma with delta injective
        current = sset.identity_map(self.levels[b])
        lvl = b
        missing = [i for i in range(b + 1) if i not in set(image)]
        for s in sorted(missing, reverse=True):
            # apply the face skipping s, adjusted to the current level
            current = self.face_ops[(lvl, s)].compose(current)
            lvl -= 1
        # now at level q; apply degeneracies for the surjection part
        sigma_vals = tuple(image.index(v) for v in alpha.values)
        collapse = sorted((j for j in range(a)
                           if sigma_vals[j] == sigma_vals[j + 1]))
        for j in collapse:
            current = self.deg_ops[(lvl, j)].compose(current)
            lvl += 1
        if lvl != a:
            raise SSpaceError("operator factorization lost track of levels")
        self._op_cache[key] = current
        return current

    def validate(self):
        for (n, i), m in self.face_ops.items():
            if m.source is not self.levels[n] or m.target is not self.levels[n - 1]:
                raise SSpaceError(f"face operator ({n},{i}) mistyped")
            m.validate()
        for (n, i), m in self.deg_ops.items():
            if m.source is not self.levels[n] or m.target is not self.levels[n + 1]:
                raise SSpaceError(f"degeneracy operator ({n},{i}) mistyped")
            m.validate()
        # simplicial identities on generators
        for n in range(2, self.level_bound + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.face_ops[(n - 1, i)].compose(self.face_ops[(n, j)])
                    rhs = self.face_ops[(n - 1, j - 1)].compose(self.face_ops[(n, i)])
                    if lhs.assignment != rhs.assignment:
                        raise SSpaceError(f"d_{i} d_{j} fails at level {n}")
        for n in range(0, self.level_bound - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = self.deg_ops[(n + 1, j + 1)].compose(self.deg_ops[(n, i)])
                    rhs = self.deg_ops[(n + 1, i)].compose(self.deg_ops[(n, j)])
                    if lhs.assignment != rhs.assignment:
                        raise SSpaceError(f"s_{j + 1} s_{i} fails at level {n}")
        for n in range(1, self.level_bound + 1):
            for j in range(n):
                for i in range(n + 1):
                    # d_i s_j identities
                    ds = self.face_ops[(n, i)].compose(self.deg_ops[(n - 1, j)])
                    if i < j:
                        want = self.deg_ops[(n - 2, j - 1)].compose(
                            self.face_ops[(n - 1, i)]) if n >= 2 else None
                    elif i in (j, j + 1):
                        want = sset.identity_map(self.levels[n - 1])
                    else:
                        want = self.deg_ops[(n - 2, j)].compose(
                            self.face_ops[(n - 1, i - 1)]) if n >= 2 else None
                    if want is not None and ds.assignment != want.assignment:
                        raise SSpaceError(f"d_{i} s_{j} fails at level {n - 1}")
        return True

    def to_json(self):
        return {
            "level_bound": self.level_bound,
            "levels": [lv.to_json() for lv in self.levels],
            "face": [[_map_json(self.face_ops[(n, i)]) for i in range(n + 1)]
                     for n in range(1, self.level_bound + 1)],
            "degeneracy": [[_map_json(self.deg_ops[(n, i)]) for i in range(n + 1)]
                           for n in range(0, self.level_bound)],
            "exact": self.exact,
        }


def _map_json(m):
    return {c: s.ref() for c, s in m.assignment.items()}


class SSpaceMap:
    """A map of simplicial spaces: one SSetMap per level, natural in the
    operators."""

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = list(components)

    def __repr__(self):
        return f"SSpaceMap({self.source!r} -> {self.target!r})"

    def level(self, m):
        return self.components[m]

    def __eq__(self, other):
        return (isinstance(other, SSpaceMap)
                and self.source is other.source and self.target is other.target
                and all(a.assignment == b.assignment
                        for a, b in zip(self.components, other.components)))

    def __hash__(self):
        return hash(tuple(frozenset(c.assignment.items()) for c in self.components))

    def token(self):
        return tuple(frozenset(c.assignment.items()) for c in self.components)

    def validate(self):
        if len(self.components) != self.source.level_bound + 1:
            raise SSpaceError("component count does not match level bound")
        if self.source.level_bound != self.target.level_bound:
            raise SSpaceError("source and target have different level bounds")
        for m, comp in enumerate(self.components):
            if comp.source is not self.source.levels[m] \
                    or comp.target is not self.target.levels[m]:
                raise SSpaceError(f"component {m} mistyped")
            comp.validate()
        for n in range(1, self.source.level_bound + 1):
            for i in range(n + 1):
                lhs = self.target.face_ops[(n, i)].compose(self.components[n])
                rhs = self.components[n - 1].compose(self.source.face_ops[(n, i)])
                if lhs.assignment != rhs.assignment:
                    raise SSpaceError(f"naturality fails at face ({n},{i})")
        for n in range(0, self.source.level_bound):
            for i in range(n + 1):
                lhs = self.target.deg_ops[(n, i)].compose(self.components[n])
                rhs = self.components[n + 1].compose(self.source.deg_ops[(n, i)])
                if lhs.assignment != rhs.assignment:
                    raise SSpaceError(f"naturality fails at degeneracy ({n},{i})")
        return True

    def compose(self, other):
        if other.target is not self.source:
            raise SSpaceError("composition mismatch")
        return SSpaceMap(other.source, self.target,
                         [a.compose(b) for a, b in
                          zip(self.components, other.components)])


def identity_space_map(x):
    return SSpaceMap(x, x, [sset.identity_map(lv) for lv in x.levels])


# --------------------------------------------------------------------------
# embeddings and extractions
# --------------------------------------------------------------------------

def embed_discrete(s: FinSimplicialSet, level_bound, name=""):
    """The discrete simplicial space with level m the set of m-simplices of
    s; the simplicial-set structure moves to the horizontal direction."""
    levels = []
    refs = []   # per level: list of (ref, Simplex)
    for m in range(level_bound + 1):
        row = [(x.ref(), x) for x in s.simplices(m)]
        refs.append(dict(row))
        levels.append(sset.discrete_sset([r for r, _ in row],
                                         name=f"{name}_{m}" if name else ""))
    face_ops, deg_ops = {}, {}
    for n in range(1, level_bound + 1):
        for i in range(n + 1):
            face_ops[(n, i)] = SSetMap(levels[n], levels[n - 1], {
                r: levels[n - 1].nondeg(s.face(x, i).ref())
                for r, x in refs[n].items()})
    for n in range(0, level_bound):
        for i in range(n + 1):
            deg_ops[(n, i)] = SSetMap(levels[n], levels[n + 1], {
                r: levels[n + 1].nondeg(s.degeneracy(x, i).ref())
                for r, x in refs[n].items()})
    exact = s.exact and s.max_nondeg_dim <= level_bound
    return FinSimplicialSpace(levels, face_ops, deg_ops, exact=exact,
                              name=name or f"disc({s.name})",
                              horizontal_gen_bound=min(
                                  s.max_nondeg_dim if s.exact else level_bound,
                                  level_bound) if s.max_nondeg_dim >= 0 else 0)


def embed_constant(k: FinSimplicialSet, level_bound, name=""):
    """The constant simplicial space on the space k: identity operators."""
    levels = [k] * (level_bound + 1)
    ident = sset.identity_map(k)
    face_ops = {(n, i): ident for n in range(1, level_bound + 1)
                for i in range(n + 1)}
    deg_ops = {(n, i): ident for n in range(0, level_bound)
               for i in range(n + 1)}
    return FinSimplicialSpace(levels, face_ops, deg_ops, exact=k.exact,
                              name=name or f"const({k.name})",
                              horizontal_gen_bound=0)


def embed(kind, s, level_bound, name=""):
    if kind == "discrete":
        return embed_discrete(s, level_bound, name)
    if kind == "constant":
        return embed_constant(s, level_bound, name)
    raise SSpaceError(f"unknown embedding kind {kind!r}")


def first_row_data(x: FinSimplicialSpace):
    """The simplicial set m |-> vertices of X_m with horizontal operators
    restricted to vertices, keeping the vertex-token bookkeeping.  Inverse
    to embed_discrete on discrete spaces."""
    levels = [[c for c in x.levels[m].n_cells(0)] for m in range(x.level_bound + 1)]
    ids = set()
    clash = False
    for lv in levels:
        for c in lv:
            if c in ids:
                clash = True
            ids.add(c)

    def face_fn(d, t, i):
        return x.face_ops[(d, i)].assignment[t].base

    def deg_fn(d, t, i):
        return x.deg_ops[(d, i)].assignment[t].base

    id_fn = None if clash else (lambda d, t: t)
    return from_levels(levels, face_fn, deg_fn, x.level_bound, exact=x.exact,
                       name=f"row0({x.name})" if x.name else "row0",
                       id_fn=id_fn)


def first_row(x: FinSimplicialSpace):
    return first_row_data(x).sset


def level_zero(x: FinSimplicialSpace):
    """The 0th level space (the other candidate reading of collapsing the
    second index; see first_row for the row reading)."""
    return x.levels[0]


def diagonal(x: FinSimplicialSpace):
    """The simplicial set d |-> d-simplices of X_d, with operators acting
    horizontally and vertically at once."""
    build = x.level_bound
    for d in range(x.level_bound + 1):
        t = x.levels[d].trust()
        if t is not None and t < d:
            build = min(build, d - 1)
    levels = [list(x.levels[d].simplices(d)) for d in range(build + 1)]

    def face_fn(d, t, i):
        vert = x.levels[d].face(t, i)
        return x.face_ops[(d, i)].of(vert)

    def deg_fn(d, t, i):
        vert = x.levels[d].degeneracy(t, i)
        return x.deg_ops[(d, i)].of(vert)

    exact = x.exact and build == x.level_bound and all(
        lv.exact for lv in x.levels[:build + 1])
    built = from_levels(levels, face_fn, deg_fn, build, exact=exact,
                        name=f"diag({x.name})" if x.name else "diag")
    return built.sset


# --------------------------------------------------------------------------
# standard spaces
# --------------------------------------------------------------------------

def f_space(n, level_bound=None):
    """The discrete space represented by [n]: level k is the set of monotone
    maps [k] -> [n]."""
    m = level_bound if level_bound is not None else n + 1
    return embed_discrete(sset.delta(n), m, name=f"F({n})")


def df_space(n, level_bound=None):
    m = level_bound if level_bound is not None else n + 1
    return embed_discrete(sset.boundary(n), m, name=f"dF({n})")


def l_space(n, l, level_bound=None):
    m = level_bound if level_bound is not None else n + 1
    return embed_discrete(sset.horn(n, l), m, name=f"L({n})_{l}")


def e_space(n, level_bound):
    """Levels are the truncated nerve of the free isomorphism object: level
    k has (n+1)^(k+1) points."""
    return embed_discrete(sset.j_truncated(n, level_bound), level_bound,
                          name=f"E({n})")


def spine_sset(n):
    """Vertices and the edges (i, i+1) inside delta(n)."""
    amb = sset.delta(n)
    keep = [c for c in amb.n_cells(0)]
    keep += [c for c in amb.n_cells(1)
             if tuple(int(v) for v in c.split(",")) in
             {(i, i + 1) for i in range(n)}]
    sub, _ = sset.subcomplex(amb, keep, name=f"spine({n})")
    return sub


def g_space(n, level_bound=None):
    """F(1) glued end to start n times, built by iterated pushout: the
    sub-object of F(n) spanned by the edges (i, i+1)."""
    if n < 2:
        raise SSpaceError("the spine gluing needs n >= 2")
    m = level_bound if level_bound is not None else n + 1
    out = f_space(1, m)
    end = "1"
    for _ in range(1, n):
        f1 = f_space(1, m)
        pt = f_space(0, m)
        left = classifying_map(out, 0, end, fn=pt)
        right = classifying_map(f1, 0, "0", fn=pt)
        out, _, _ = space_pushout(left, right)
        end = "C:1"
    out.name = f"G({n})"
    return out


def t_cell(n, l, level_bound):
    """The generator object with level k the product of the monotone maps
    [k] -> [n] with the truncated free-isomorphism space on l+1 objects."""
    fn = f_space(n, level_bound)
    jl = embed_constant(sset.j_truncated(l, level_bound), level_bound,
                        name=f"constJ[{l}]")
    prod = space_product(fn, jl)
    prod.space.name = f"t({n},{l})"
    return prod.space


def build_standard_space(kind, *args):
    if kind == "F":
        return f_space(*args)
    if kind == "dF":
        return df_space(*args)
    if kind == "L":
        return l_space(*args)
    if kind == "E":
        return e_space(*args)
    if kind == "G":
        return g_space(*args)
    raise SSpaceError(f"unknown standard space kind {kind!r}")


def classifying_map(x: FinSimplicialSpace, n, vertex_cell, fn=None):
    """For discrete x: the map F(n) -> x classified by a vertex of X_n.

    Level m sends a monotone map [m] -> [n] to the image of the vertex under
    the corresponding operator.  Pass ``fn`` to reuse a prebuilt F(n).
    """
    if not x.is_discrete:
        raise SSpaceError("classifying maps are implemented for discrete spaces")
    if fn is None:
        fn = f_space(n, x.level_bound)
    comps = []
    for m in range(x.level_bound + 1):
        assignment = {}
        for cell in fn.levels[m].n_cells(0):
            alpha = _monotone_of_ref(cell, m, n)
            img = x.operator(alpha).assignment[vertex_cell]
            assignment[cell] = img
        comps.append(SSetMap(fn.levels[m], x.levels[m], assignment))
    return SSpaceMap(fn, x, comps)


def _monotone_of_ref(ref, m, n):
    """Recover the monotone map [m] -> [n] from a simplex ref of delta(n)."""
    x = sset.simplex_ref_parse(ref, {c: len(c.split(",")) - 1
                                     for c in _delta_cell_ids(n)})
    return MonotoneMap(m, n, sset.delta_vertices(x))


def _delta_cell_ids(n):
    from itertools import combinations
    out = []
    for d in range(n + 1):
        out.extend(",".join(map(str, vs))
                   for vs in combinations(range(n + 1), d + 1))
    return out


# --------------------------------------------------------------------------
# limits and colimits of spaces
# --------------------------------------------------------------------------

@dataclass
class SpaceProduct:
    space: FinSimplicialSpace
    to_a: SSpaceMap
    to_b: SSpaceMap
    level_builts: list
    factor_a: FinSimplicialSpace
    factor_b: FinSimplicialSpace


def _induced_pair_op(built_src, built_dst, fa_dst, fb_dst, op_a, op_b):
    """The map between built pair-levels induced by componentwise maps."""
    assignment = {}
    for cell in built_src.sset.cell_dim:
        xa, xb = built_src.token_of_cell[cell]
        assignment[cell] = pair_normal_form(
            built_dst, fa_dst, fb_dst, op_a.of(xa), op_b.of(xb))
    return SSetMap(built_src.sset, built_dst.sset, assignment)


def space_product(a: FinSimplicialSpace, b: FinSimplicialSpace):
    if a.level_bound != b.level_bound:
        raise SSpaceError("product needs equal level bounds")
    builts, pas, pbs = [], [], []
    for m in range(a.level_bound + 1):
        built, pa, pb = sset.product(a.levels[m], b.levels[m])
        builts.append(built)
        pas.append(pa)
        pbs.append(pb)
    face_ops, deg_ops = {}, {}
    for n in range(1, a.level_bound + 1):
        for i in range(n + 1):
            face_ops[(n, i)] = _induced_pair_op(
                builts[n], builts[n - 1], a.levels[n - 1], b.levels[n - 1],
                a.face_ops[(n, i)], b.face_ops[(n, i)])
    for n in range(0, a.level_bound):
        for i in range(n + 1):
            deg_ops[(n, i)] = _induced_pair_op(
                builts[n], builts[n + 1], a.levels[n + 1], b.levels[n + 1],
                a.deg_ops[(n, i)], b.deg_ops[(n, i)])
    h = None
    if a.horizontal_gen_bound is not None and b.horizontal_gen_bound is not None:
        h = a.horizontal_gen_bound + b.horizontal_gen_bound
    exact = a.exact and b.exact and h is not None and h <= a.level_bound
    space = FinSimplicialSpace([bu.sset for bu in builts], face_ops, deg_ops,
                               exact=exact,
                               name=f"({a.name}x{b.name})",
                               horizontal_gen_bound=h)
    to_a = SSpaceMap(space, a, pas)
    to_b = SSpaceMap(space, b, pbs)
    return SpaceProduct(space, to_a, to_b, builts, a, b)


def space_pullback(f: SSpaceMap, g: SSpaceMap):
    if f.target is not g.target:
        raise SSpaceError("pullback needs a shared target")
    a, b = f.source, g.source
    builts, pas, pbs = [], [], []
    for m in range(a.level_bound + 1):
        built, pa, pb = sset.pullback(f.components[m], g.components[m])
        builts.append(built)
        pas.append(pa)
        pbs.append(pb)
    face_ops, deg_ops = {}, {}
    for n in range(1, a.level_bound + 1):
        for i in range(n + 1):
            face_ops[(n, i)] = _induced_pair_op(
                builts[n], builts[n - 1], a.levels[n - 1], b.levels[n - 1],
                a.face_ops[(n, i)], b.face_ops[(n, i)])
    for n in range(0, a.level_bound):
        for i in range(n + 1):
            deg_ops[(n, i)] = _induced_pair_op(
                builts[n], builts[n + 1], a.levels[n + 1], b.levels[n + 1],
                a.deg_ops[(n, i)], b.deg_ops[(n, i)])
    h = None
    if a.horizontal_gen_bound is not None and b.horizontal_gen_bound is not None:
        h = a.horizontal_gen_bound + b.horizontal_gen_bound
    exact = a.exact and b.exact and h is not None and h <= a.level_bound
    space = FinSimplicialSpace([bu.sset for bu in builts], face_ops, deg_ops,
                               exact=exact, name="pb",
                               horizontal_gen_bound=h)
    to_a = SSpaceMap(space, a, pas)
    to_b = SSpaceMap(space, b, pbs)
    return SpaceProduct(space, to_a, to_b, builts, a, b)


def pair_space_map(prod: SpaceProduct, f: SSpaceMap, g: SSpaceMap):
    """The universal map into a product or pullback from f and g."""
    comps = []
    for m in range(prod.space.level_bound + 1):
        assignment = {}
        src_level = f.components[m].source
        for cell in src_level.cell_dim:
            assignment[cell] = pair_normal_form(
                prod.level_builts[m], prod.factor_a.levels[m],
                prod.factor_b.levels[m],
                f.components[m].assignment[cell],
                g.components[m].assignment[cell])
        comps.append(SSetMap(src_level, prod.level_builts[m].sset, assignment))
    return SSpaceMap(f.source, prod.space, comps)


def space_pushout(i: SSpaceMap, f: SSpaceMap):
    """Levelwise pushout along a levelwise structural inclusion."""
    if i.source is not f.source:
        raise SSpaceError("pushout needs a shared source")
    b, c = i.target, f.target
    outs, legs_b, legs_c = [], [], []
    for m in range(b.level_bound + 1):
        out, leg_b, leg_c = sset.pushout(i.components[m], f.components[m])
        outs.append(out)
        legs_b.append(leg_b)
        legs_c.append(leg_c)
    face_ops, deg_ops = {}, {}

    def induced(n_src, n_dst, op_b, op_c):
        assignment = {}
        for cell in outs[n_src].cell_dim:
            if cell.startswith("C:"):
                orig = cell[2:]
                assignment[cell] = legs_c[n_dst].of(op_c.of(c.levels[n_src].nondeg(orig)))
            else:
                orig = cell[2:]
                assignment[cell] = legs_b[n_dst].of(op_b.of(b.levels[n_src].nondeg(orig)))
        return SSetMap(outs[n_src], outs[n_dst], assignment)

    for n in range(1, b.level_bound + 1):
        for idx in range(n + 1):
            face_ops[(n, idx)] = induced(n, n - 1, b.face_ops[(n, idx)],
                                         c.face_ops[(n, idx)])
    for n in range(0, b.level_bound):
        for idx in range(n + 1):
            deg_ops[(n, idx)] = induced(n, n + 1, b.deg_ops[(n, idx)],
                                        c.deg_ops[(n, idx)])
    h = None
    if b.horizontal_gen_bound is not None and c.horizontal_gen_bound is not None:
        h = max(b.horizontal_gen_bound, c.horizontal_gen_bound)
    exact = b.exact and c.exact and h is not None and h <= b.level_bound
    space = FinSimplicialSpace(outs, face_ops, deg_ops, exact=exact,
                               name="po", horizontal_gen_bound=h)
    leg_from_b = SSpaceMap(b, space, legs_b)
    leg_from_c = SSpaceMap(c, space, legs_c)
    return space, leg_from_b, leg_from_c


def combine_space(kind, *args):
    if kind == "product":
        pr = space_product(*args)
        return pr.space, (pr.to_a, pr.to_b)
    if kind == "pullback":
        pr = space_pullback(*args)
        return pr.space, (pr.to_a, pr.to_b)
    if kind == "pushout":
        return space_pushout(*args)
    raise SSpaceError(f"unknown combination kind {kind!r}")


# --------------------------------------------------------------------------
# map enumeration
# --------------------------------------------------------------------------

def space_hom(a: FinSimplicialSpace, b: FinSimplicialSpace, cell_filter=None,
              limit=None):
    """All maps of simplicial spaces a -> b, level by level with naturality
    pruning against the previously fixed level.

    ``cell_filter(m, cell, candidate)`` restricts level-m assignments.
    """
    if a.level_bound != b.level_bound:
        raise SSpaceError("space_hom needs equal level bounds")
    results = []
    chosen = []

    def level_candidates(m):
        prev = chosen[m - 1] if m >= 1 else None

        def filt(cell, cand):
            if cell_filter is not None and not cell_filter(m, cell, cand):
                return False
            if prev is not None:
                x = a.levels[m].nondeg(cell)
                for i in range(m + 1):
                    want = prev.of(a.face_ops[(m, i)].of(x))
                    if b.face_ops[(m, i)].of(cand) != want:
                        return False
            return True

        return sset.hom_set(a.levels[m], b.levels[m], cell_filter=filt)

    def deg_compatible(m, comp):
        prev = chosen[m - 1]
        for i in range(m):
            for cell in a.levels[m - 1].cell_dim:
                x = a.levels[m - 1].nondeg(cell)
                if comp.of(a.deg_ops[(m - 1, i)].of(x)) != \
                        b.deg_ops[(m - 1, i)].of(prev.assignment[cell]):
                    return False
        return True

    def backtrack(m):
        if limit is not None and len(results) >= limit:
            return
        if m > a.level_bound:
            results.append(SSpaceMap(a, b, list(chosen)))
            return
        for comp in level_candidates(m):
            if m >= 1 and not deg_compatible(m, comp):
                continue
            chosen.append(comp)
            backtrack(m + 1)
            chosen.pop()
            if limit is not None and len(results) >= limit:
                return

    backtrack(0)
    return results


def space_iso(a: FinSimplicialSpace, b: FinSimplicialSpace):
    """An isomorphism of discrete spaces, via the first-row equivalence;
    None if there is none."""
    if not (a.is_discrete and b.is_discrete):
        raise SSpaceError("space_iso is implemented for discrete spaces")
    return sset.find_isomorphism(first_row(a), first_row(b))


def spaces_isomorphic(a, b):
    return space_iso(a, b) is not None


# --------------------------------------------------------------------------
# mapping spaces and exponentials
# --------------------------------------------------------------------------

@dataclass
class MapSpaceData:
    """Map(a, b) with enough bookkeeping to precompose and evaluate."""

    a: FinSimplicialSpace
    b: FinSimplicialSpace
    l_max: int
    built: object               # BuiltSSet of the resulting simplicial set
    prods: list                 # SpaceProduct of a x const delta(l), per l
    maps_per_level: list        # dicts token -> SSpaceMap

    @property
    def sset(self):
        return self.built.sset

    def transport(self, l_src, op: MonotoneMap, mapping: SSpaceMap):
        """Precompose a map (a x const delta(l_src) -> b) with the operator
        op on the delta factor."""
        prod_src = self.prods[l_src]
        prod_dst = self.prods[op.source_size]
        comps = []
        for m in range(self.a.level_bound + 1):
            built_dst = prod_dst.level_builts[m]
            built_src = prod_src.level_builts[m]
            dl_src = prod_src.factor_b.levels[m]
            assignment = {}
            for cell in built_dst.sset.cell_dim:
                xa, xd = built_dst.token_of_cell[cell]
                xd_img = sset.delta_simplex_on_vertices(
                    tuple(op.values[v] for v in sset.delta_vertices(xd)))
                src_simplex = pair_normal_form(
                    built_src, prod_src.factor_a.levels[m], dl_src, xa, xd_img)
                assignment[cell] = mapping.components[m].of(src_simplex)
            comps.append(SSetMap(built_dst.sset, self.b.levels[m], assignment))
        return SSpaceMap(prod_dst.space, self.b, comps)


def map_space_data(a, b, l_max, base=None, cell_filter=None):
    """Map(a, b) (relative over a base when given): level l holds the maps
    a x const delta(l) -> b, compatible with the structure maps to the base.

    ``base`` is a pair (p_a: a -> x, p_b: b -> x).
    """
    prods = []
    for l in range(l_max + 1):
        dl = embed_constant(sset.delta(l), a.level_bound, name=f"cD[{l}]")
        prods.append(space_product(a, dl))

    def combined_filter(l):
        pa, pb = base if base is not None else (None, None)
        prod = prods[l]

        def filt(m, cell, cand):
            if base is not None:
                xa, _ = prod.level_builts[m].token_of_cell[cell]
                if pb.components[m].of(cand) != pa.components[m].of(xa):
                    return False
            if cell_filter is not None:
                return cell_filter(l, m, cell, cand)
            return True

        return filt

    maps_per_level = []
    for l in range(l_max + 1):
        found = space_hom(prods[l].space, b, cell_filter=combined_filter(l))
        maps_per_level.append({m.token(): m for m in found})

    data = MapSpaceData(a, b, l_max, None, prods, maps_per_level)

    levels = [sorted(maps_per_level[l].keys()) for l in range(l_max + 1)]

    def face_fn(d, t, i):
        return data.transport(d, poset.coface(d, i), maps_per_level[d][t]).token()

    def deg_fn(d, t, i):
        return data.transport(d, poset.codegeneracy(d, i), maps_per_level[d][t]).token()

    built = from_levels(levels, face_fn, deg_fn, l_max,
                        exact=b.is_discrete, name="MapS")
    data.built = built
    return data


def map_space(a, b, l_max, base=None):
    """The mapping simplicial set Map(a, b), relative over a base if given.

    Discrete shortcut: for discrete spaces (and base maps) this is the
    simplicial-set mapping space of the first rows.
    """
    if a.is_discrete and b.is_discrete and base is None:
        return sset.mapping_space(first_row(a), first_row(b), l_max)
    return map_space_data(a, b, l_max, base=base).sset


def exponential(y: FinSimplicialSpace, x: FinSimplicialSpace, l_max=None):
    """y^x: level m is Map(x x F(m), y).

    For discrete inputs this is the discrete space on the simplicial-set
    mapping space of the first rows, which is the exact tier used by the
    fibration checks; the bounded general construction materializes each
    level as a mapping space and transports along the representable factor.
    """
    m_bound = y.level_bound
    if x.is_discrete and y.is_discrete:
        ms = sset.mapping_space(first_row(x), first_row(y), m_bound)
        out = embed_discrete(ms, m_bound, name=f"({y.name}^{x.name})")
        return out
    if l_max is None:
        raise SSpaceError("non-discrete exponentials need an explicit l_max bound")
    datas = []
    for m in range(m_bound + 1):
        zm = space_product(x, f_space(m, x.level_bound))
        datas.append((zm, map_space_data(zm.space, y, l_max)))
    levels = [d.sset for _, d in datas]

    def op_map(m_src, m_dst, alpha):
        # alpha: [m_dst] -> [m_src]; precompose id_x times F(alpha)
        zm_src, data_src = datas[m_src]
        zm_dst, data_dst = datas[m_dst]
        f_alpha = _f_map(alpha, x.level_bound)
        g = pair_space_map(zm_src, zm_dst.to_a,
                           f_alpha.compose(zm_dst.to_b))
        assignment = {}
        for cell in data_src.sset.cell_dim:
            l = data_src.sset.cell_dim[cell]
            phi = data_src.maps_per_level[l][data_src.built.token_of_cell[cell]]
            comps = []
            for k in range(x.level_bound + 1):
                ass = {}
                for c2 in data_dst.prods[l].level_builts[k].sset.cell_dim:
                    xz, xd = data_dst.prods[l].level_builts[k].token_of_cell[c2]
                    img = pair_normal_form(
                        data_src.prods[l].level_builts[k],
                        zm_src.space.levels[k],
                        data_src.prods[l].factor_b.levels[k],
                        g.components[k].of(xz), xd)
                    ass[c2] = phi.components[k].of(img)
                comps.append(SSetMap(data_dst.prods[l].level_builts[k].sset,
                                     y.levels[k], ass))
            psi = SSpaceMap(data_dst.prods[l].space, y, comps)
            assignment[cell] = data_dst.built.simplex_of(l, psi.token())
        return SSetMap(data_src.sset, data_dst.sset, assignment)

    face_ops, deg_ops = {}, {}
    for n in range(1, m_bound + 1):
        for i in range(n + 1):
            face_ops[(n, i)] = op_map(n, n - 1, poset.coface(n, i))
    for n in range(0, m_bound):
        for i in range(n + 1):
            deg_ops[(n, i)] = op_map(n, n + 1, poset.codegeneracy(n, i))
    return FinSimplicialSpace(levels, face_ops, deg_ops, exact=False,
                              name=f"({y.name}^{x.name})")


def _f_map(alpha: MonotoneMap, level_bound):
    """F(alpha): F(a) -> F(b) for alpha: [a] -> [b]."""
    fa = f_space(alpha.source_size, level_bound)
    fb = f_space(alpha.target_size, level_bound)
    comps = []
    for m in range(level_bound + 1):
        assignment = {}
        for cell in fa.levels[m].n_cells(0):
            g = _monotone_of_ref(cell, m, alpha.source_size)
            img = poset.compose(alpha, g)
            ref = sset.delta_simplex_on_vertices(img.values).ref()
            assignment[cell] = fb.levels[m].nondeg(ref)
        comps.append(SSetMap(fa.levels[m], fb.levels[m], assignment))
    return SSpaceMap(fa, fb, comps)


# --------------------------------------------------------------------------
# fibers
# --------------------------------------------------------------------------

def fiber_over_point(p: SSpaceMap, m, point_cell):
    """The subspace of X_m lying over a vertex of the base's level m."""
    level = p.source.levels[m]
    base_level = p.target.levels[m]
    if point_cell not in base_level.cell_dim or \
            base_level.cell_dim[point_cell] != 0:
        raise SSpaceError(f"{point_cell!r} is not a vertex of the base level {m}")
    keep = [c for c in level.cell_dim
            if p.components[m].assignment[c].base == point_cell]
    sub, incl = sset.subcomplex(level, keep, name=f"fiber@{point_cell}")
    return sub, incl


def fiber_over(p: SSpaceMap, f: MonotoneMap):
    """X_/f for p: X -> F(n): the fiber of level m over the point f."""
    n = _base_degree(p.target)
    if f.target_size != n:
        raise SSpaceError(f"{f!r} is not a simplex of the representable base")
    ref = sset.delta_simplex_on_vertices(f.values).ref()
    return fiber_over_point(p, f.source_size, ref)


def fiber_transition(p: SSpaceMap, f: MonotoneMap, delta: MonotoneMap):
    """delta^*: X_/f -> X_/(f . delta), the restriction of the horizontal
    operator to fibers."""
    if delta.target_size != f.source_size:
        raise SSpaceError("operator degree mismatch in fiber transition")
    src, src_incl = fiber_over(p, f)
    fd = poset.compose(f, delta)
    tgt, tgt_incl = fiber_over(p, fd)
    op = p.source.operator(delta)
    assignment = {}
    for c in src.cell_dim:
        img = op.of(src_incl.of(src.nondeg(c)))
        assignment[c] = img
    return SSetMap(src, tgt, assignment), src, tgt


def _base_degree(space):
    if not space.name.startswith("F("):
        raise SSpaceError("expected a representable base named F(n)")
    return int(space.name[2:].split(")")[0])


# --------------------------------------------------------------------------
# opposite
# --------------------------------------------------------------------------

def opposite(x: FinSimplicialSpace):
    """Levelwise order reversal of a discrete space."""
    if not x.is_discrete:
        raise SSpaceError("the opposite involution is implemented for discrete spaces")
    face_ops, deg_ops = {}, {}
    for n in range(1, x.level_bound + 1):
        for i in range(n + 1):
            face_ops[(n, i)] = x.face_ops[(n, n - i)]
    for n in range(0, x.level_bound):
        for i in range(n + 1):
            deg_ops[(n, i)] = x.deg_ops[(n, n - i)]
    return FinSimplicialSpace(x.levels, face_ops, deg_ops, exact=x.exact,
                              name=f"{x.name}^op",
                              horizontal_gen_bound=x.horizontal_gen_bound)


def opposite_map(p: SSpaceMap):
    return SSpaceMap(opposite(p.source), opposite(p.target), p.components)
