"""Finitely presented simplicial sets.

An object stores only its nondegenerate cells together with the faces of each
cell, recorded in Eilenberg-Zilber normal form: every simplex is a unique
pair (nondegenerate base, monotone surjection).  All other structure -- the
action of arbitrary simplicial operators, hom-set enumeration, limits and
colimits, lifting-property search -- is computed from that presentation.

Truncation discipline: ``dim_bound`` is the trusted dimension.  When
``exact`` is true the presentation is total (no nondegenerate cells exist
above the bound) and simplices of any dimension can be enumerated; otherwise
asking beyond the bound raises :class:`TruncationError` instead of silently
returning partial data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import poset
from .poset import MonotoneMap, PosetError


class SSetError(ValueError):
    pass


class TruncationError(SSetError):
    """An enumeration was requested beyond an object's trusted dimension."""


@dataclass(frozen=True)
class Simplex:
    """A simplex in EZ normal form: nondegenerate base cell and the value
    tuple of a monotone surjection [dim] ->> [dim base]."""

    base: str
    surj: tuple

    @property
    def dim(self):
        return len(self.surj) - 1

    @property
    def is_nondegenerate(self):
        return self.surj == tuple(range(len(self.surj)))

    def degeneracy_word(self):
        """Indices j with surj(j) = surj(j+1), strictly decreasing.

        This is the classical s-word: the simplex is s_{j_k} ... s_{j_1}
        applied to the base with j_k > ... > j_1.
        """
        return tuple(sorted(
            (j for j in range(len(self.surj) - 1) if self.surj[j] == self.surj[j + 1]),
            reverse=True))

    def ref(self):
        word = self.degeneracy_word()
        if not word:
            return self.base
        return self.base + "." + "".join(f"s{j}" for j in word)

    def __repr__(self):
        return f"<{self.ref()}>"


def simplex_ref_parse(ref, cell_dims):
    """Inverse of :meth:`Simplex.ref` given a cell-id -> dim table."""
    if "." in ref:
        base, word_part = ref.split(".", 1)
        word = tuple(int(tok) for tok in word_part.split("s") if tok != "")
    else:
        base, word = ref, ()
    if base not in cell_dims:
        raise SSetError(f"unknown cell id {base!r} in simplex ref")
    p = cell_dims[base]
    surj = tuple(range(p + 1))
    # rebuild the surjection by applying codegeneracies innermost-first
    for j in reversed(word):
        level = len(surj) - 1
        sigma = poset.codegeneracy(level, j)
        surj = tuple(surj[v] for v in sigma.values)
    return Simplex(base, surj)


def _identity_surj(p):
    return tuple(range(p + 1))


class FinSimplicialSet:
    """Simplicial set presented by nondegenerate cells and face data.

    ``cells[d]`` lists cell ids of dimension d in a fixed order; ``faces[c]``
    holds the d+1 face simplices of a d-cell c.
    """

    def __init__(self, dim_bound, cells, faces, exact=True, name=""):
        self.dim_bound = dim_bound
        self.cells = {d: list(cells.get(d, [])) for d in range(dim_bound + 1)}
        self.cell_dim = {c: d for d, cs in self.cells.items() for c in cs}
        if len(self.cell_dim) != sum(len(cs) for cs in self.cells.values()):
            raise SSetError("duplicate cell ids")
        self.faces = dict(faces)
        self.exact = exact
        self.name = name
        self._act_cache = {}
        self._simplex_cache = {}

    # -- basic views -------------------------------------------------------

    def __repr__(self):
        counts = tuple(len(self.cells[d]) for d in range(self.dim_bound + 1))
        tag = self.name or "FinSimplicialSet"
        return f"{tag}(dim_bound={self.dim_bound}, nondeg={counts}, exact={self.exact})"

    def n_cells(self, d):
        return list(self.cells.get(d, []))

    @property
    def max_nondeg_dim(self):
        tops = [d for d in range(self.dim_bound + 1) if self.cells[d]]
        return max(tops) if tops else -1

    @property
    def is_empty(self):
        return self.max_nondeg_dim < 0

    @property
    def is_discrete(self):
        return self.max_nondeg_dim <= 0

    def trust(self):
        """Highest dimension at which simplices can be enumerated (None
        meaning unbounded, for exact presentations)."""
        return None if self.exact else self.dim_bound

    def nondeg(self, cell):
        return Simplex(cell, _identity_surj(self.cell_dim[cell]))

    def simplices(self, n):
        """All n-simplices (degenerate ones included) in a stable order."""
        if n < 0:
            return []
        if not self.exact and n > self.dim_bound:
            raise TruncationError(
                f"{self!r} is only trusted up to dimension {self.dim_bound}, "
                f"asked for {n}-simplices")
        if n not in self._simplex_cache:
            out = []
            for p in range(min(n, self.max_nondeg_dim) + 1):
                for surj in monotone_surjections(n, p):
                    for c in self.cells[p]:
                        out.append(Simplex(c, surj))
            self._simplex_cache[n] = out
        return self._simplex_cache[n]

    def count(self, n):
        return len(self.simplices(n))

    # -- operator action ---------------------------------------------------

    def act(self, x, op):
        """x . op for a monotone map op: [m] -> [x.dim], in normal form."""
        if op.target_size != x.dim:
            raise SSetError(f"operator {op!r} does not act on a {x.dim}-simplex")
        comp = tuple(x.surj[v] for v in op.values)
        return self._act_values(x.base, comp)

    def _act_values(self, base, values):
        key = (base, values)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        p = self.cell_dim[base]
        present = set(values)
        if len(present) == p + 1:
            res = Simplex(base, values)
        else:
            s = max(i for i in range(p + 1) if i not in present)
            y = self.faces[base][s]
            shifted = tuple(v if v < s else v - 1 for v in values)
            res = self._act_values(y.base, tuple(y.surj[v] for v in shifted))
        self._act_cache[key] = res
        return res

    def face(self, x, i):
        return self.act(x, poset.coface(x.dim, i))

    def degeneracy(self, x, i):
        return Simplex(x.base, tuple(
            x.surj[v] for v in poset.codegeneracy(x.dim, i).values))

    # -- validation --------------------------------------------------------

    def validate(self):
        """Check face data shape and the simplicial identities on cells."""
        for c, d in self.cell_dim.items():
            if d == 0:
                if c in self.faces and self.faces[c]:
                    raise SSetError(f"vertex {c} has face data")
                continue
            fs = self.faces.get(c)
            if fs is None or len(fs) != d + 1:
                raise SSetError(f"cell {c} of dim {d} needs {d + 1} faces")
            for i, s in enumerate(fs):
                if s.base not in self.cell_dim:
                    raise SSetError(f"face {i} of {c} uses unknown base {s.base}")
                if s.dim != d - 1:
                    raise SSetError(f"face {i} of {c} has dimension {s.dim}")
        for c, d in self.cell_dim.items():
            if d < 2:
                continue
            x = self.nondeg(c)
            for j in range(d + 1):
                for i in range(j):
                    lhs = self.face(self.face(x, j), i)
                    rhs = self.face(self.face(x, i), j - 1)
                    if lhs != rhs:
                        raise SSetError(
                            f"d_{i} d_{j} != d_{j - 1} d_{i} on cell {c}: {lhs} vs {rhs}")
        return True

    # -- serialization -----------------------------------------------------

    def to_json(self):
        cell_entries = []
        for d in range(self.dim_bound + 1):
            for c in self.cells[d]:
                entry = {"dim": d, "id": c}
                if d > 0:
                    entry["faces"] = [s.ref() for s in self.faces[c]]
                else:
                    entry["faces"] = []
                cell_entries.append(entry)
        return {"dim_bound": self.dim_bound, "cells": cell_entries, "exact": self.exact}

    @staticmethod
    def from_json(data):
        cells = {}
        dims = {}
        for entry in data["cells"]:
            cells.setdefault(entry["dim"], []).append(entry["id"])
            dims[entry["id"]] = entry["dim"]
        faces = {}
        for entry in data["cells"]:
            if entry["dim"] > 0:
                faces[entry["id"]] = tuple(
                    simplex_ref_parse(ref, dims) for ref in entry["faces"])
        out = FinSimplicialSet(data["dim_bound"], cells, faces,
                               exact=data.get("exact", True))
        out.validate()
        return out


def delta_vertices(x):
    """Vertex tuple of a simplex of some delta(k); cell ids carry the list."""
    base_vs = tuple(int(t) for t in x.base.split(","))
    return tuple(base_vs[v] for v in x.surj)


def delta_simplex_on_vertices(vertices):
    """The simplex of delta(k) with the given weakly increasing vertices."""
    distinct = []
    for v in vertices:
        if not distinct or distinct[-1] != v:
            distinct.append(v)
    base = _vertex_tuple_id(tuple(distinct))
    surj = tuple(distinct.index(v) for v in vertices)
    return Simplex(base, surj)


def monotone_surjections(n, p):
    """Value tuples of monotone surjections [n] ->> [p], by collapse set."""
    if p > n or p < 0:
        return []
    out = []
    for collapse in combinations(range(n), n - p):
        cset = set(collapse)
        vals = []
        v = 0
        for j in range(n + 1):
            vals.append(v)
            if j not in cset:
                v += 1
        out.append(tuple(vals))
    return out


# --------------------------------------------------------------------------
# generic construction from level data
# --------------------------------------------------------------------------

@dataclass
class BuiltSSet:
    """A simplicial set built from level data, with the token bookkeeping
    needed to define maps out of it afterwards."""

    sset: FinSimplicialSet
    to_simplex: dict = field(default_factory=dict)   # (dim, token) -> Simplex
    token_of_cell: dict = field(default_factory=dict)

    def simplex_of(self, d, token):
        return self.to_simplex[(d, token)]


def from_levels(levels, face_fn, deg_fn, dim_bound, exact, name="", id_fn=None):
    """Present the simplicial set with the given level tokens.

    ``levels[d]`` lists the d-simplices as hashable tokens; ``face_fn(d, t, i)``
    and ``deg_fn(d, t, i)`` give the operator actions on tokens.  Nondegenerate
    tokens are detected via t == s_i(d_i(t)) and every token is recorded with
    its EZ normal form.
    """
    cells = {d: [] for d in range(dim_bound + 1)}
    faces = {}
    to_simplex = {}
    token_of_cell = {}

    def cell_id(d, token, index):
        if id_fn is not None:
            return id_fn(d, token)
        return f"{name}{d}_{index}" if name else f"c{d}_{index}"

    for d in range(dim_bound + 1):
        for token in levels[d]:
            key = (d, token)
            if key in to_simplex:
                raise SSetError(f"duplicate token {token!r} at dim {d}")
            collapse = None
            for i in range(d):
                below = face_fn(d, token, i)
                if deg_fn(d - 1, below, i) == token:
                    collapse = (i, below)
                    break
            if collapse is None:
                cid = cell_id(d, token, len(cells[d]))
                if cid in token_of_cell:
                    raise SSetError(f"duplicate cell id {cid}")
                cells[d].append(cid)
                token_of_cell[cid] = token
                to_simplex[key] = Simplex(cid, _identity_surj(d))
            else:
                i, below = collapse
                inner = to_simplex[(d - 1, below)]
                sigma = poset.codegeneracy(d - 1, i)
                to_simplex[key] = Simplex(
                    inner.base, tuple(inner.surj[v] for v in sigma.values))

    # second pass: face data in normal form
    for d in range(1, dim_bound + 1):
        for cid in cells[d]:
            token = token_of_cell[cid]
            faces[cid] = tuple(
                to_simplex[(d - 1, face_fn(d, token, i))] for i in range(d + 1))

    out = FinSimplicialSet(dim_bound, cells, faces, exact=exact, name=name)
    return BuiltSSet(out, to_simplex, token_of_cell)


def map_from_tokens(source_built, target_built, token_fn, name_check=True):
    """The simplicial map sending the source token t (dim d) to the target
    token token_fn(d, t); returns a validated SSetMap."""
    assignment = {}
    src = source_built.sset
    for d in range(src.dim_bound + 1):
        for cid in src.cells[d]:
            t = source_built.token_of_cell[cid]
            assignment[cid] = target_built.simplex_of(d, token_fn(d, t))
    m = SSetMap(src, target_built.sset, assignment)
    if name_check:
        m.validate()
    return m


# --------------------------------------------------------------------------
# maps
# --------------------------------------------------------------------------

class SSetMap:
    """A simplicial map, recorded on nondegenerate source cells."""

    def __init__(self, source, target, assignment):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def __repr__(self):
        return f"SSetMap({self.source!r} -> {self.target!r})"

    def __eq__(self, other):
        return (isinstance(other, SSetMap) and self.source is other.source
                and self.target is other.target
                and self.assignment == other.assignment)

    def __hash__(self):
        return hash(frozenset(self.assignment.items()))

    def of(self, x):
        """Image of an arbitrary simplex of the source."""
        im = self.assignment[x.base]
        return Simplex(im.base, tuple(im.surj[v] for v in x.surj))

    def validate(self):
        for c, d in self.source.cell_dim.items():
            im = self.assignment.get(c)
            if im is None:
                raise SSetError(f"map misses cell {c}")
            if im.dim != d:
                raise SSetError(f"map sends {d}-cell {c} to a {im.dim}-simplex")
            for i in (range(d + 1) if d > 0 else []):
                want = self.of(self.source.faces[c][i])
                got = self.target.face(self.assignment[c], i)
                if want != got:
                    raise SSetError(
                        f"map does not commute with d_{i} on {c}: {want} vs {got}")
        return True

    def compose(self, other):
        """self . other (other feeds into self)."""
        if other.target is not self.source:
            raise SSetError("composition mismatch")
        return SSetMap(other.source, self.target,
                       {c: self.of(s) for c, s in other.assignment.items()})

    def is_structural_inclusion(self):
        """Sufficient monomorphism check: nondegenerate cells go injectively
        to nondegenerate cells."""
        seen = set()
        for c in self.source.cell_dim:
            im = self.assignment[c]
            if not im.is_nondegenerate or im.base in seen:
                return False
            seen.add(im.base)
        return True

    def restrict_tokens(self):
        return frozenset((c, s) for c, s in self.assignment.items())


def identity_map(sset):
    return SSetMap(sset, sset, {c: sset.nondeg(c) for c in sset.cell_dim})


def constant_map(source, target, vertex_cell):
    """Collapse everything onto a vertex of the target."""
    return SSetMap(source, target, {
        c: Simplex(vertex_cell, (0,) * (d + 1))
        for c, d in source.cell_dim.items()})


# --------------------------------------------------------------------------
# standard objects
# --------------------------------------------------------------------------

def _vertex_tuple_id(vs):
    return ",".join(str(v) for v in vs)


def delta(n):
    """The standard n-simplex: one nondegenerate d-cell per injection
    [d] -> [n], identified with its vertex tuple."""
    cells = {}
    faces = {}
    for d in range(n + 1):
        cells[d] = [_vertex_tuple_id(vs) for vs in combinations(range(n + 1), d + 1)]
        if d > 0:
            for vs in combinations(range(n + 1), d + 1):
                cid = _vertex_tuple_id(vs)
                faces[cid] = tuple(
                    Simplex(_vertex_tuple_id(vs[:i] + vs[i + 1:]), _identity_surj(d - 1))
                    for i in range(d + 1))
    return FinSimplicialSet(n, cells, faces, exact=True, name=f"Delta[{n}]")


def subcomplex(ambient, keep_cells, name=""):
    """The subobject spanned by ``keep_cells`` (must be face-closed), plus
    its inclusion map."""
    keep = set(keep_cells)
    for c in keep_cells:
        d = ambient.cell_dim[c]
        if d > 0:
            for s in ambient.faces[c]:
                if s.base not in keep:
                    raise SSetError(f"cells not face-closed: {c} needs {s.base}")
    cells = {d: [c for c in ambient.cells[d] if c in keep]
             for d in range(ambient.dim_bound + 1)}
    faces = {c: ambient.faces[c] for c in keep if ambient.cell_dim[c] > 0}
    sub = FinSimplicialSet(ambient.dim_bound, cells, faces,
                           exact=ambient.exact, name=name)
    incl = SSetMap(sub, ambient, {c: ambient.nondeg(c) for c in keep})
    return sub, incl


def boundary(n):
    """All of delta(n) except the top cell."""
    amb = delta(n)
    top = _vertex_tuple_id(tuple(range(n + 1)))
    keep = [c for c in amb.cell_dim if c != top]
    sub, _ = subcomplex(amb, keep, name=f"dDelta[{n}]")
    return sub


def boundary_inclusion(n):
    amb = delta(n)
    top = _vertex_tuple_id(tuple(range(n + 1)))
    keep = [c for c in amb.cell_dim if c != top]
    sub, incl = subcomplex(amb, keep, name=f"dDelta[{n}]")
    return sub, amb, incl


def horn(n, i):
    """delta(n) minus the top cell and its i-th face."""
    if not 0 <= i <= n:
        raise SSetError(f"horn index {i} out of range for dimension {n}")
    amb = delta(n)
    top = _vertex_tuple_id(tuple(range(n + 1)))
    missing = _vertex_tuple_id(tuple(v for v in range(n + 1) if v != i))
    keep = [c for c in amb.cell_dim if c not in (top, missing)]
    sub, _ = subcomplex(amb, keep, name=f"Horn[{n};{i}]")
    return sub


def horn_inclusion(n, i):
    amb = delta(n)
    top = _vertex_tuple_id(tuple(range(n + 1)))
    missing = _vertex_tuple_id(tuple(v for v in range(n + 1) if v != i))
    keep = [c for c in amb.cell_dim if c not in (top, missing)]
    sub, incl = subcomplex(amb, keep, name=f"Horn[{n};{i}]")
    return sub, amb, incl


def discrete_sset(points, dim_bound=0, name=""):
    """The constant simplicial set on a finite list of point ids."""
    pts = [str(p) for p in points]
    return FinSimplicialSet(dim_bound, {0: pts}, {}, exact=True,
                            name=name or "discrete")


def empty_sset(dim_bound=0):
    return FinSimplicialSet(dim_bound, {}, {}, exact=True, name="empty")


def j_truncated(l, dim_bound):
    """Truncated nerve of the groupoid with objects 0..l and a unique
    isomorphism between any two; k-simplices are all (k+1)-tuples.

    Exact only for l = 0 (a point): for l >= 1 nondegenerate alternating
    tuples exist in every dimension.
    """

    def face_fn(d, t, i):
        return t[:i] + t[i + 1:]

    def deg_fn(d, t, i):
        return t[:i + 1] + t[i:]

    levels = [[] for _ in range(dim_bound + 1)]
    for d in range(dim_bound + 1):
        stack = [()]
        for _ in range(d + 1):
            stack = [t + (v,) for t in stack for v in range(l + 1)]
        levels[d] = stack
    built = from_levels(levels, face_fn, deg_fn, dim_bound, exact=(l == 0),
                        name=f"J[{l}]",
                        id_fn=lambda d, t: "j" + "".join(str(v) for v in t))
    return built.sset


def build_standard(kind, *args):
    """Dispatcher used by the CLI: delta(n) | boundary(n) | horn(n,i) |
    j_truncated(l,T) | discrete(ids...)."""
    if kind == "delta":
        return delta(*args)
    if kind == "boundary":
        return boundary(*args)
    if kind == "horn":
        return horn(*args)
    if kind == "j_truncated":
        return j_truncated(*args)
    if kind == "discrete":
        return discrete_sset(*args)
    raise SSetError(f"unknown standard simplicial set kind {kind!r}")


# --------------------------------------------------------------------------
# limits and colimits
# --------------------------------------------------------------------------

def _combined_trust(parts):
    trusts = [p.trust() for p in parts]
    finite = [t for t in trusts if t is not None]
    return min(finite) if finite else None


def product(a, b):
    """Levelwise product with EZ normal forms extracted from token pairs.

    Returns (object, projection to a, projection to b).
    """
    trust = _combined_trust([a, b])
    if trust is None:
        build_dim = a.max_nondeg_dim + b.max_nondeg_dim
        exact = True
    else:
        build_dim = trust
        exact = False
    build_dim = max(build_dim, 0)

    levels = [[(x, y) for x in a.simplices(d) for y in b.simplices(d)]
              for d in range(build_dim + 1)]

    def face_fn(d, t, i):
        return (a.face(t[0], i), b.face(t[1], i))

    def deg_fn(d, t, i):
        return (a.degeneracy(t[0], i), b.degeneracy(t[1], i))

    built = from_levels(levels, face_fn, deg_fn, build_dim, exact=exact, name="prod")
    pa = SSetMap(built.sset, a, {c: built.token_of_cell[c][0]
                                 for c in built.sset.cell_dim})
    pb = SSetMap(built.sset, b, {c: built.token_of_cell[c][1]
                                 for c in built.sset.cell_dim})
    return built, pa, pb


def pair_normal_form(built, fa, fb, x, y):
    """Normal form in a built product (or pullback) of the pair simplex
    (x, y), valid at any dimension: common collapses are stripped until the
    token is inside the recorded range."""
    d = x.dim
    key = (d, (x, y))
    if key in built.to_simplex:
        return built.to_simplex[key]
    common = [j for j in range(d)
              if x.surj[j] == x.surj[j + 1] and y.surj[j] == y.surj[j + 1]]
    if not common:
        raise SSetError(
            f"pair {(x, y)} at dim {d} is jointly nondegenerate but missing "
            "from the built product")
    cset = set(common)
    rho = []
    v = 0
    for j in range(d + 1):
        rho.append(v)
        if j not in cset:
            v += 1
    q = d - len(common)
    section = tuple(rho.index(k) for k in range(q + 1))
    sec = MonotoneMap(q, d, section)
    inner = pair_normal_form(built, fa, fb, fa.act(x, sec), fb.act(y, sec))
    return Simplex(inner.base, tuple(inner.surj[val] for val in rho))


def pullback(f, g):
    """Pullback of the cospan f: A -> C <- B :g.

    Returns (built object, projection to A, projection to B).
    """
    if f.target is not g.target:
        raise SSetError("pullback needs a genuine cospan (shared target)")
    a, b = f.source, g.source
    trust = _combined_trust([a, b])
    if trust is None:
        build_dim = a.max_nondeg_dim + b.max_nondeg_dim
        exact = True
    else:
        build_dim = trust
        exact = False
    build_dim = max(build_dim, 0)

    levels = []
    for d in range(build_dim + 1):
        lv = [(x, y) for x in a.simplices(d) for y in b.simplices(d)
              if f.of(x) == g.of(y)]
        levels.append(lv)

    def face_fn(d, t, i):
        return (a.face(t[0], i), b.face(t[1], i))

    def deg_fn(d, t, i):
        return (a.degeneracy(t[0], i), b.degeneracy(t[1], i))

    built = from_levels(levels, face_fn, deg_fn, build_dim, exact=exact, name="pb")
    pa = SSetMap(built.sset, a, {c: built.token_of_cell[c][0]
                                 for c in built.sset.cell_dim})
    pb = SSetMap(built.sset, b, {c: built.token_of_cell[c][1]
                                 for c in built.sset.cell_dim})
    return built, pa, pb


def pushout(i, f):
    """Pushout of the span B <- A -> C with i: A -> B a structural inclusion
    and f: A -> C arbitrary.

    Returns (object, leg from B, leg from C).  Every pushout in scope is
    along a cofibration, so the gluing is computed cellwise: the result keeps
    C's cells and B's cells outside the image of i.
    """
    if i.source is not f.source:
        raise SSetError("pushout needs a genuine span (shared source)")
    if not i.is_structural_inclusion():
        raise SSetError("pushout requires an injective leg (structural inclusion)")
    a, b, c = i.source, i.target, f.target

    image_base = {i.assignment[ca].base: ca for ca in a.cell_dim}
    trust = _combined_trust([b, c])
    exact = trust is None
    if exact:
        build_dim = max(b.max_nondeg_dim, c.max_nondeg_dim, 0)
    else:
        build_dim = trust
        if max(b.max_nondeg_dim, c.max_nondeg_dim) > build_dim:
            raise TruncationError(
                "pushout inputs carry cells beyond the shared trust bound")

    cells = {d: [] for d in range(build_dim + 1)}
    faces = {}
    b_cell_names = {}
    c_cell_names = {}
    for d in range(build_dim + 1):
        for cc in c.cells[d]:
            nm = f"C:{cc}"
            c_cell_names[cc] = nm
            cells[d].append(nm)
        for cb in b.cells[d]:
            if cb not in image_base:
                nm = f"B:{cb}"
                b_cell_names[cb] = nm
                cells[d].append(nm)

    def push_b_simplex(x):
        # image of a B-simplex in the pushout
        if x.base in image_base:
            fy = f.of(a.nondeg(image_base[x.base]))
            return Simplex(c_cell_names[fy.base],
                           tuple(fy.surj[v] for v in x.surj))
        return Simplex(b_cell_names[x.base], x.surj)

    for d in range(1, build_dim + 1):
        for cc in c.cells[d]:
            faces[c_cell_names[cc]] = tuple(
                Simplex(c_cell_names[s.base], s.surj) for s in c.faces[cc])
        for cb in b.cells[d]:
            if cb not in image_base:
                faces[b_cell_names[cb]] = tuple(
                    push_b_simplex(s) for s in b.faces[cb])

    out = FinSimplicialSet(build_dim, cells, faces, exact=exact, name="po")
    leg_b = SSetMap(b, out, {cb: push_b_simplex(b.nondeg(cb)) for cb in b.cell_dim})
    leg_c = SSetMap(c, out, {cc: out.nondeg(c_cell_names[cc]) for cc in c.cell_dim})
    return out, leg_b, leg_c


def combine(kind, *args):
    if kind == "product":
        built, pa, pb = product(*args)
        return built.sset, (pa, pb)
    if kind == "pullback":
        built, pa, pb = pullback(*args)
        return built.sset, (pa, pb)
    if kind == "pushout":
        return pushout(*args)
    raise SSetError(f"unknown combination kind {kind!r}")


# --------------------------------------------------------------------------
# hom sets, mapping spaces, lifting
# --------------------------------------------------------------------------

def _ordered_cells(a):
    out = []
    for d in range(a.dim_bound + 1):
        out.extend((c, d) for c in a.cells[d])
    return out


def hom_set(a, b, cell_filter=None, forced=None, iso=False, limit=None):
    """All simplicial maps a -> b by dimension-increasing backtracking.

    ``cell_filter(cell, candidate)`` prunes candidates per cell, ``forced``
    pins cells to given simplices, ``iso`` restricts the search to bijections
    on nondegenerate cells, ``limit`` stops after that many maps.
    """
    if a.max_nondeg_dim > -1 and b.trust() is not None \
            and a.max_nondeg_dim > b.trust():
        raise TruncationError(
            f"cannot enumerate maps: source has cells in dimension "
            f"{a.max_nondeg_dim} beyond target trust {b.trust()}")
    if iso:
        top = max(a.max_nondeg_dim, b.max_nondeg_dim, 0)
        for d in range(top + 1):
            if len(a.n_cells(d)) != len(b.n_cells(d)):
                return []

    order = _ordered_cells(a)
    cand_pool = {d: b.simplices(d) for d in range(a.max_nondeg_dim + 1)}
    results = []
    assignment = {}
    used = set()

    def push(simplex):
        im = assignment[simplex.base]
        return Simplex(im.base, tuple(im.surj[v] for v in simplex.surj))

    def backtrack(idx):
        if limit is not None and len(results) >= limit:
            return
        if idx == len(order):
            results.append(SSetMap(a, b, dict(assignment)))
            return
        cell, d = order[idx]
        if forced is not None and cell in forced:
            candidates = [forced[cell]]
        elif iso:
            candidates = [b.nondeg(c) for c in b.n_cells(d) if c not in used]
        else:
            candidates = cand_pool[d]
        required = None
        if d > 0:
            required = [push(a.faces[cell][i]) for i in range(d + 1)]
        for cand in candidates:
            if cand.dim != d:
                continue
            if required is not None:
                ok = True
                for i in range(d + 1):
                    if b.face(cand, i) != required[i]:
                        ok = False
                        break
                if not ok:
                    continue
            if cell_filter is not None and not cell_filter(cell, cand):
                continue
            assignment[cell] = cand
            if iso:
                used.add(cand.base)
            backtrack(idx + 1)
            if iso:
                used.discard(cand.base)
            del assignment[cell]
            if limit is not None and len(results) >= limit:
                return

    backtrack(0)
    return results


def is_isomorphic(a, b):
    return bool(hom_set(a, b, iso=True, limit=1))


def find_isomorphism(a, b):
    found = hom_set(a, b, iso=True, limit=1)
    return found[0] if found else None


@dataclass
class MappingSpaceData:
    """Map(a, b) together with the product bookkeeping needed to evaluate
    its simplices and build maps out of it."""

    a: FinSimplicialSet
    b: FinSimplicialSet
    l_max: int
    built: "BuiltSSet"
    prods: list                  # BuiltSSet of a x delta(l), per l
    factor_b: list               # the delta(l) objects
    maps_per_level: list         # dicts token -> SSetMap

    @property
    def sset(self):
        return self.built.sset

    def map_of_token(self, l, token):
        return self.maps_per_level[l][token]

    def transport(self, l_src, op, mapping):
        """Precompose a map (a x delta(l_src) -> b) with id_a x delta(op)."""
        built_src = self.prods[l_src]
        dl_src = self.factor_b[l_src]
        built_dst = self.prods[op.source_size]
        dst = built_dst.sset
        assignment = {}
        for cell in dst.cell_dim:
            xa, xd = built_dst.token_of_cell[cell]
            xd_img = delta_simplex_on_vertices(
                tuple(op.values[v] for v in delta_vertices(xd)))
            src_simplex = pair_normal_form(built_src, self.a, dl_src,
                                           xa, xd_img)
            assignment[cell] = mapping.of(src_simplex)
        return SSetMap(dst, self.b, assignment)

    def evaluate(self, l, token, xa, xd):
        """Value of the l-simplex ``token`` on the pair (xa, xd)."""
        phi = self.maps_per_level[l][token]
        return phi.of(pair_normal_form(self.prods[l], self.a,
                                       self.factor_b[l], xa, xd))


def mapping_space_data(a, b, l_max, cell_constraint=None):
    """Map(a, b) with bookkeeping; l-simplices are maps a x delta(l) -> b.

    ``cell_constraint(l, built_l, cell, cand)`` restricts the enumeration,
    e.g. to maps over a base or with a pinned restriction; the constraint
    must be stable under the delta-factor operators.  Levels beyond the
    trust of b are dropped: the result is truncated where exact enumeration
    stops.
    """
    need = a.max_nondeg_dim
    trust = b.trust()
    usable = l_max
    if trust is not None and need + l_max > trust:
        usable = max(trust - need, -1)
    if usable < 0:
        raise TruncationError(
            "mapping space has no trustworthy levels at all; deepen the target")
    # Maps into a discrete target ignore the delta(l) factor, so the result
    # is a constant simplicial set and the presentation is total; otherwise
    # nondegenerate content above the computed range is unknown.
    exact_out = b.is_discrete

    prods, factor_b = [], []
    for l in range(usable + 1):
        built, pa, pd = product(a, delta(l))
        prods.append(built)
        factor_b.append(pd.target)

    maps_per_level = []
    for l in range(usable + 1):
        filt = None
        if cell_constraint is not None:
            filt = (lambda ll, bb: lambda cell, cand:
                    cell_constraint(ll, bb, cell, cand))(l, prods[l])
        maps_per_level.append({
            m.restrict_tokens(): m
            for m in hom_set(prods[l].sset, b, cell_filter=filt)})

    data = MappingSpaceData(a, b, usable, None, prods, factor_b,
                            maps_per_level)

    levels = [sorted(maps_per_level[l].keys(), key=_token_sort_key)
              for l in range(usable + 1)]

    def face_fn(d, t, i):
        m = maps_per_level[d][t]
        return data.transport(d, poset.coface(d, i), m).restrict_tokens()

    def deg_fn(d, t, i):
        m = maps_per_level[d][t]
        return data.transport(d, poset.codegeneracy(d, i), m).restrict_tokens()

    built = from_levels(levels, face_fn, deg_fn, usable, exact=exact_out,
                        name="Map")
    data.built = built
    return data


def mapping_space(a, b, l_max):
    """Map(a, b) as a plain simplicial set."""
    return mapping_space_data(a, b, l_max).sset


def _token_sort_key(tok):
    return sorted((c, s.base, s.surj) for c, s in tok)


@dataclass
class LiftResult:
    found: bool
    lift: SSetMap | None = None
    square: tuple | None = None   # (u, v) that failed, for counterexamples

    def __bool__(self):
        return self.found


def has_rlp(p, i, square=None):
    """Does p: Y -> X have the right lifting property against i: A -> B?

    With ``square=(u, v)`` (u: A -> Y, v: B -> X commuting) a single filler
    search runs; without it all squares are enumerated and the first failure
    is reported.
    """
    if not i.is_structural_inclusion():
        raise SSetError("has_rlp needs an injective i (structural inclusion)")
    y, x = p.source, p.target
    a, b = i.source, i.target

    def search(u, v):
        if p.compose(u).assignment != v.compose(i).assignment:
            raise SSetError("the given square does not commute")
        forced = {}
        for ca in a.cell_dim:
            im = i.assignment[ca]
            if im.is_nondegenerate:
                forced[im.base] = u.assignment[ca]

        def filt(cell, cand):
            return p.of(cand) == v.assignment[cell]

        lifts = hom_set(b, y, cell_filter=filt, forced=forced, limit=1)
        return lifts[0] if lifts else None

    if square is not None:
        lift = search(*square)
        return LiftResult(lift is not None, lift,
                          None if lift is not None else square)

    for u in hom_set(a, y):
        pu = p.compose(u)
        for v in hom_set(b, x, forced={
                i.assignment[ca].base: pu.assignment[ca]
                for ca in a.cell_dim if i.assignment[ca].is_nondegenerate}):
            if v.compose(i).assignment != pu.assignment:
                continue
            lift = search(u, v)
            if lift is None:
                return LiftResult(False, None, (u, v))
    return LiftResult(True, None, None)


@dataclass
class KanReport:
    bound: int
    fibration_up_to_bound: bool
    trivial_fibration_up_to_bound: bool
    failures: list

    def __repr__(self):
        return (f"KanReport(bound={self.bound}, fibration={self.fibration_up_to_bound}, "
                f"trivial={self.trivial_fibration_up_to_bound}, "
                f"failures={len(self.failures)})")


def kan_check(p, bound):
    """Evidence that p is a (trivial) Kan fibration: RLP against all horns
    (boundaries) of dimension <= bound.  Bounded evidence, not a proof
    beyond the bound."""
    if bound < 1:
        raise SSetError("kan_check needs bound >= 1")
    failures = []
    fib = True
    for n in range(1, bound + 1):
        for idx in range(n + 1):
            _, _, incl = horn_inclusion(n, idx)
            res = has_rlp(p, incl)
            if not res.found:
                fib = False
                failures.append(("horn", n, idx, res.square))
    triv = True
    for n in range(0, bound + 1):
        _, _, incl = boundary_inclusion(n)
        res = has_rlp(p, incl)
        if not res.found:
            triv = False
            failures.append(("boundary", n, None, res.square))
    return KanReport(bound, fib, triv and fib, failures)
