"""Finite categories with explicit composition tables, set-valued functors,
fibered categories, tensor products of functors, and the four classical
Yoneda bijections as exact decision procedures.

Everything here is finite and checked by full enumeration; these are the
ground-truth generators and oracles for the simplicial machinery (nerves,
discrete fibrations, under-categories).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from . import sset
from .sset import FinSimplicialSet, from_levels


class CatError(ValueError):
    pass


class FinCategory:
    """Objects, morphisms with source/target, a total composition table on
    composable pairs and chosen identities."""

    def __init__(self, objects, morphisms, src, tgt, comp, identity, name=""):
        self.objects = list(objects)
        self.morphisms = list(morphisms)
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.comp = dict(comp)           # (g, f) -> g after f
        self.identity = dict(identity)   # object -> identity morphism id
        self.name = name

    def __repr__(self):
        tag = self.name or "FinCategory"
        return f"{tag}(|ob|={len(self.objects)}, |mor|={len(self.morphisms)})"

    def compose(self, g, f):
        """g . f, defined when tgt(f) = src(g)."""
        if self.tgt[f] != self.src[g]:
            raise CatError(f"cannot compose {g} after {f}")
        return self.comp[(g, f)]

    def hom(self, a, b):
        return [m for m in self.morphisms if self.src[m] == a and self.tgt[m] == b]

    def is_identity(self, m):
        return m == self.identity[self.src[m]]

    def nonidentity(self):
        return [m for m in self.morphisms if not self.is_identity(m)]

    def validate(self):
        for m in self.morphisms:
            if self.src[m] not in self.objects or self.tgt[m] not in self.objects:
                raise CatError(f"morphism {m} has unknown endpoints")
        for o in self.objects:
            i = self.identity[o]
            if self.src[i] != o or self.tgt[i] != o:
                raise CatError(f"identity of {o} is not an endomorphism")
        for g in self.morphisms:
            for f in self.morphisms:
                if self.tgt[f] == self.src[g]:
                    gf = self.comp.get((g, f))
                    if gf is None:
                        raise CatError(f"composition table misses ({g}, {f})")
                    if self.src[gf] != self.src[f] or self.tgt[gf] != self.tgt[g]:
                        raise CatError(f"composite {gf} of ({g}, {f}) mistyped")
        for f in self.morphisms:
            if self.compose(f, self.identity[self.src[f]]) != f:
                raise CatError(f"right unit law fails at {f}")
            if self.compose(self.identity[self.tgt[f]], f) != f:
                raise CatError(f"left unit law fails at {f}")
        for h in self.morphisms:
            for g in self.morphisms:
                if self.tgt[g] != self.src[h]:
                    continue
                hg = self.compose(h, g)
                for f in self.morphisms:
                    if self.tgt[f] != self.src[g]:
                        continue
                    if self.compose(hg, f) != self.compose(h, self.compose(g, f)):
                        raise CatError(f"associativity fails on ({h}, {g}, {f})")
        return True

    def generators(self):
        """Morphisms not expressible as composites of two other nonidentity
        morphisms; falls back to all nonidentity morphisms if these do not
        visibly generate (idempotent-heavy tables)."""
        nonid = self.nonidentity()
        gens = []
        for m in nonid:
            decomposable = any(
                self.tgt[f] == self.src[g] and self.comp[(g, f)] == m
                and f != m and g != m
                for g in nonid for f in nonid)
            if not decomposable:
                gens.append(m)
        # safety: generated closure must reach every morphism
        reached = set(gens) | {self.identity[o] for o in self.objects}
        changed = True
        while changed:
            changed = False
            for g in list(reached):
                for f in list(reached):
                    if self.tgt[f] == self.src[g]:
                        c = self.comp[(g, f)]
                        if c not in reached:
                            reached.add(c)
                            changed = True
        if set(self.morphisms) <= reached:
            return gens
        return nonid

    def opposite(self):
        comp = {(f, g): h for (g, f), h in self.comp.items()}
        return FinCategory(self.objects, self.morphisms, self.tgt, self.src,
                           comp, self.identity, name=f"{self.name}^op")

    def to_json(self):
        return {"objects": list(self.objects),
                "morphisms": [{"id": m, "src": self.src[m], "tgt": self.tgt[m]}
                              for m in self.morphisms],
                "compose": [[g, f, h] for (g, f), h in sorted(self.comp.items())],
                "identities": dict(self.identity)}

    @staticmethod
    def from_json(data):
        src = {m["id"]: m["src"] for m in data["morphisms"]}
        tgt = {m["id"]: m["tgt"] for m in data["morphisms"]}
        comp = {(g, f): h for g, f, h in data["compose"]}
        cat = FinCategory(data["objects"], [m["id"] for m in data["morphisms"]],
                          src, tgt, comp, data["identities"])
        cat.validate()
        return cat


def chain_category(n):
    """The linear poset 0 <= 1 <= ... <= n as a category; morphism (i, j)
    for i <= j."""
    objects = list(range(n + 1))
    morphisms = [(i, j) for i in objects for j in objects if i <= j]
    src = {m: m[0] for m in morphisms}
    tgt = {m: m[1] for m in morphisms}
    comp = {((j, k), (i, j2)): (i, k)
            for (i, j2) in morphisms for (j, k) in morphisms if j2 == j}
    identity = {o: (o, o) for o in objects}
    return FinCategory(objects, morphisms, src, tgt, comp, identity,
                       name=f"[{n}]")


def poset_category(relation, elements, name="poset"):
    """Category of a finite poset given as a set of (a, b) with a <= b
    (must already be reflexive and transitive)."""
    morphisms = sorted(relation)
    src = {m: m[0] for m in morphisms}
    tgt = {m: m[1] for m in morphisms}
    comp = {}
    rel = set(relation)
    for (a, b) in morphisms:
        for (b2, c) in morphisms:
            if b2 == b:
                if (a, c) not in rel:
                    raise CatError("relation is not transitive")
                comp[((b, c), (a, b))] = (a, c)
    identity = {o: (o, o) for o in elements}
    return FinCategory(list(elements), morphisms, src, tgt, comp, identity,
                       name=name)


def indiscrete_category(objects, name=""):
    """One morphism between any ordered pair of objects (all invertible)."""
    morphisms = [(a, b) for a in objects for b in objects]
    src = {m: m[0] for m in morphisms}
    tgt = {m: m[1] for m in morphisms}
    comp = {((b, c), (a, b2)): (a, c)
            for (a, b2) in morphisms for (b, c) in morphisms if b2 == b}
    identity = {o: (o, o) for o in objects}
    return FinCategory(list(objects), morphisms, src, tgt, comp, identity,
                       name=name or f"I[{len(list(objects)) - 1}]")


@dataclass
class SetValuedFunctor:
    """A functor base -> Set (covariant) or base^op -> Set (contravariant),
    with finite value sets stored as tuples."""

    base: FinCategory
    variance: str                     # "covariant" | "contravariant"
    on_objects: dict                  # object -> tuple of elements
    on_morphisms: dict                # morphism -> {element -> element}
    name: str = ""

    def value(self, o):
        return self.on_objects[o]

    def apply(self, m, x):
        return self.on_morphisms[m][x]

    def validate(self):
        if self.variance not in ("covariant", "contravariant"):
            raise CatError(f"unknown variance {self.variance}")
        return self._validate_tables()

    def _validate_tables(self):
        c = self.base
        for m in c.morphisms:
            dom = c.src[m] if self.variance == "covariant" else c.tgt[m]
            cod = c.tgt[m] if self.variance == "covariant" else c.src[m]
            table = self.on_morphisms.get(m)
            if table is None:
                raise CatError(f"functor misses morphism {m}")
            if set(table.keys()) != set(self.on_objects[dom]):
                raise CatError(f"functor table at {m} has wrong domain")
            if any(v not in self.on_objects[cod] for v in table.values()):
                raise CatError(f"functor table at {m} leaves its codomain")
        for o in c.objects:
            i = c.identity[o]
            if any(self.on_morphisms[i][x] != x for x in self.on_objects[o]):
                raise CatError(f"functor does not fix identity at {o}")
        for g in c.morphisms:
            for f in c.morphisms:
                if c.tgt[f] != c.src[g]:
                    continue
                gf = c.comp[(g, f)]
                if self.variance == "covariant":
                    for x in self.on_objects[c.src[f]]:
                        if self.apply(g, self.apply(f, x)) != self.apply(gf, x):
                            raise CatError(f"functoriality fails on ({g}, {f})")
                else:
                    for x in self.on_objects[c.tgt[g]]:
                        if self.apply(f, self.apply(g, x)) != self.apply(gf, x):
                            raise CatError(f"functoriality fails on ({g}, {f})")
        return True


def representable(c: FinCategory, obj, variance):
    """Hom(obj, -) (covariant) or Hom(-, obj) (contravariant)."""
    if variance == "covariant":
        on_objects = {o: tuple(c.hom(obj, o)) for o in c.objects}
        on_morphisms = {m: {f: c.compose(m, f) for f in on_objects[c.src[m]]}
                        for m in c.morphisms}
    else:
        on_objects = {o: tuple(c.hom(o, obj)) for o in c.objects}
        on_morphisms = {m: {f: c.compose(f, m) for f in on_objects[c.tgt[m]]}
                        for m in c.morphisms}
    return SetValuedFunctor(c, variance, on_objects, on_morphisms,
                            name=f"Hom({obj},-)" if variance == "covariant"
                            else f"Hom(-,{obj})")


def constant_functor(c: FinCategory, values, variance="covariant"):
    vals = tuple(values)
    return SetValuedFunctor(
        c, variance, {o: vals for o in c.objects},
        {m: {x: x for x in vals} for m in c.morphisms}, name="const")


# --------------------------------------------------------------------------
# natural transformations
# --------------------------------------------------------------------------

def natural_transformations(f: SetValuedFunctor, g: SetValuedFunctor):
    """All natural transformations f => g, as dicts object -> component map.

    Components are assigned object by object; naturality is pruned on the
    base's generating morphisms (sound because generated closure is
    re-checked by FinCategory.generators)."""
    if f.base is not g.base or f.variance != g.variance:
        raise CatError("natural transformations need parallel functors")
    c = f.base
    gens = c.generators()
    objs = list(c.objects)
    results = []
    components = {}

    def edge_objects(m):
        if f.variance == "covariant":
            return c.src[m], c.tgt[m]
        return c.tgt[m], c.src[m]

    def consistent(m):
        dom, cod = edge_objects(m)
        if dom not in components or cod not in components:
            return True
        for x in f.on_objects[dom]:
            if components[cod][f.apply(m, x)] != g.apply(m, components[dom][x]):
                return False
        return True

    def backtrack(k):
        if k == len(objs):
            results.append({o: dict(components[o]) for o in objs})
            return
        o = objs[k]
        dom_elems = f.on_objects[o]
        cod_elems = g.on_objects[o]
        for image in iproduct(cod_elems, repeat=len(dom_elems)):
            components[o] = dict(zip(dom_elems, image))
            if all(consistent(m) for m in gens
                   if o in edge_objects(m)):
                backtrack(k + 1)
            del components[o]

    backtrack(0)
    return results


# --------------------------------------------------------------------------
# tensor products
# --------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def tensor_functors(p: SetValuedFunctor, f: SetValuedFunctor):
    """P (x)_C F: the coequalizer of (a, g, b) |-> (P(g)(a), b) against
    (a, g, b) |-> (a, F(g)(b)) on the sum of P(C) x F(C).

    Returns (classes, class_of) where classes is the list of equivalence
    classes (each a sorted list of (object, p-element, f-element) triples)
    and class_of maps a triple to its class index.
    """
    if p.variance != "contravariant" or f.variance != "covariant":
        raise CatError("tensor takes a contravariant and a covariant functor")
    if p.base is not f.base:
        raise CatError("tensor needs a shared base category")
    c = p.base
    atoms = [(o, a, b) for o in c.objects
             for a in p.on_objects[o] for b in f.on_objects[o]]
    uf = _UnionFind(atoms)
    for g in c.morphisms:
        # g: C -> C', a in P(C'), b in F(C): phi = (P(g)(a), b), psi = (a, F(g)(b))
        co, do = c.tgt[g], c.src[g]
        for a in p.on_objects[co]:
            for b in f.on_objects[do]:
                uf.union((do, p.apply(g, a), b), (co, a, f.apply(g, b)))
    buckets = {}
    for atom in atoms:
        buckets.setdefault(uf.find(atom), []).append(atom)
    classes = sorted((sorted(v, key=repr) for v in buckets.values()),
                     key=repr)
    class_of = {atom: i for i, cls in enumerate(classes) for atom in cls}
    return classes, class_of


# --------------------------------------------------------------------------
# fibered categories
# --------------------------------------------------------------------------

@dataclass
class FiberedCategory:
    """A functor total -> base recorded by its object and morphism images."""

    total: FinCategory
    base: FinCategory
    on_objects: dict
    on_morphisms: dict
    name: str = ""

    def validate(self):
        t, b = self.total, self.base
        for o in t.objects:
            if self.on_objects[o] not in b.objects:
                raise CatError(f"projection misses object {o}")
        for m in t.morphisms:
            im = self.on_morphisms[m]
            if im not in b.morphisms:
                raise CatError(f"projection misses morphism {m}")
            if b.src[im] != self.on_objects[t.src[m]] \
                    or b.tgt[im] != self.on_objects[t.tgt[m]]:
                raise CatError(f"projection mistypes morphism {m}")
        for o in t.objects:
            if self.on_morphisms[t.identity[o]] != b.identity[self.on_objects[o]]:
                raise CatError(f"projection breaks identity at {o}")
        for g in t.morphisms:
            for f in t.morphisms:
                if t.tgt[f] != t.src[g]:
                    continue
                if self.on_morphisms[t.comp[(g, f)]] != \
                        b.comp[(self.on_morphisms[g], self.on_morphisms[f])]:
                    raise CatError(f"projection breaks composition on ({g}, {f})")
        return True

    def fiber(self, base_obj):
        return [o for o in self.total.objects if self.on_objects[o] == base_obj]


def fibered_check(p: FiberedCategory):
    """Unique-lift tests: fibered in sets (unique lift with prescribed
    target) and cofibered in sets (prescribed source); returns the verdicts
    plus a counterexample witness on the first failure of each."""
    t, b = p.total, p.base
    fibered, cofibered = True, True
    witness_fib, witness_cofib = None, None
    for f in b.morphisms:
        for d_tgt in p.fiber(b.tgt[f]):
            lifts = [m for m in t.morphisms
                     if t.tgt[m] == d_tgt and p.on_morphisms[m] == f]
            if len(lifts) != 1:
                fibered = False
                if witness_fib is None:
                    witness_fib = (f, d_tgt, lifts)
        for d_src in p.fiber(b.src[f]):
            lifts = [m for m in t.morphisms
                     if t.src[m] == d_src and p.on_morphisms[m] == f]
            if len(lifts) != 1:
                cofibered = False
                if witness_cofib is None:
                    witness_cofib = (f, d_src, lifts)
    return {"fibered_in_sets": fibered, "cofibered_in_sets": cofibered,
            "witness": {"fibered": witness_fib, "cofibered": witness_cofib}}


def slice_category(c: FinCategory, obj, direction):
    """Under/over category at obj, with the projection functor.

    Objects are arrows out of (under) or into (over) obj; morphisms are the
    commuting triangles, named by their third side.
    """
    if direction == "under":
        arrows = [m for m in c.morphisms if c.src[m] == obj]
        objects = arrows
        morphisms = []
        src, tgt, proj_o, proj_m = {}, {}, {}, {}
        for f in arrows:
            proj_o[f] = c.tgt[f]
        for f in arrows:
            for g in arrows:
                for h in c.hom(c.tgt[f], c.tgt[g]):
                    if c.compose(h, f) == g:
                        mid = (f, h, g)
                        morphisms.append(mid)
                        src[mid], tgt[mid] = f, g
                        proj_m[mid] = h
        comp = {}
        for m2 in morphisms:
            for m1 in morphisms:
                if tgt[m1] == src[m2]:
                    comp[(m2, m1)] = (src[m1], c.compose(m2[1], m1[1]), tgt[m2])
        identity = {f: (f, c.identity[c.tgt[f]], f) for f in arrows}
        total = FinCategory(objects, morphisms, src, tgt, comp, identity,
                            name=f"{c.name}_{obj}/")
    elif direction == "over":
        arrows = [m for m in c.morphisms if c.tgt[m] == obj]
        objects = arrows
        morphisms = []
        src, tgt, proj_o, proj_m = {}, {}, {}, {}
        for f in arrows:
            proj_o[f] = c.src[f]
        for f in arrows:
            for g in arrows:
                for h in c.hom(c.src[f], c.src[g]):
                    if c.compose(g, h) == f:
                        mid = (f, h, g)
                        morphisms.append(mid)
                        src[mid], tgt[mid] = f, g
                        proj_m[mid] = h
        comp = {}
        for m2 in morphisms:
            for m1 in morphisms:
                if tgt[m1] == src[m2]:
                    comp[(m2, m1)] = (src[m1], c.compose(m2[1], m1[1]), tgt[m2])
        identity = {f: (f, c.identity[c.src[f]], f) for f in arrows}
        total = FinCategory(objects, morphisms, src, tgt, comp, identity,
                            name=f"{c.name}_/{obj}")
    else:
        raise CatError(f"unknown slice direction {direction!r}")
    projection = FiberedCategory(total, c, proj_o, proj_m,
                                 name=f"slice({direction})")
    return total, projection


def grothendieck_cat(f: SetValuedFunctor):
    """Category of elements of f with its projection.

    Covariant functors give cofibered projections, contravariant ones give
    fibered projections.
    """
    c = f.base
    objects = [(o, x) for o in c.objects for x in f.on_objects[o]]
    morphisms = []
    src, tgt, proj_m = {}, {}, {}
    for m in c.morphisms:
        if f.variance == "covariant":
            for x in f.on_objects[c.src[m]]:
                mid = (m, x)
                morphisms.append(mid)
                src[mid] = (c.src[m], x)
                tgt[mid] = (c.tgt[m], f.apply(m, x))
                proj_m[mid] = m
        else:
            for y in f.on_objects[c.tgt[m]]:
                mid = (m, y)
                morphisms.append(mid)
                src[mid] = (c.src[m], f.apply(m, y))
                tgt[mid] = (c.tgt[m], y)
                proj_m[mid] = m
    comp = {}
    for m2 in morphisms:
        for m1 in morphisms:
            if tgt[m1] == src[m2]:
                base_comp = c.comp[(m2[0], m1[0])]
                if f.variance == "covariant":
                    comp[(m2, m1)] = (base_comp, m1[1])
                else:
                    comp[(m2, m1)] = (base_comp, m2[1])
    identity = {(o, x): (c.identity[o], x) for (o, x) in objects}
    total = FinCategory(objects, morphisms, src, tgt, comp, identity,
                        name=f"El({f.name or 'F'})")
    proj_o = {(o, x): o for (o, x) in objects}
    return FiberedCategory(total, c, proj_o, proj_m, name="elements")


def pullback_category(d: FiberedCategory, e: FiberedCategory):
    """The strict pullback D x_C E of two categories over the same base."""
    if d.base is not e.base:
        raise CatError("pullback needs a shared base")
    objects = [(x, y) for x in d.total.objects for y in e.total.objects
               if d.on_objects[x] == e.on_objects[y]]
    morphisms = [(m, n) for m in d.total.morphisms for n in e.total.morphisms
                 if d.on_morphisms[m] == e.on_morphisms[n]]
    src = {(m, n): (d.total.src[m], e.total.src[n]) for (m, n) in morphisms}
    tgt = {(m, n): (d.total.tgt[m], e.total.tgt[n]) for (m, n) in morphisms}
    comp = {}
    for p2 in morphisms:
        for p1 in morphisms:
            if tgt[p1] == src[p2]:
                comp[(p2, p1)] = (d.total.comp[(p2[0], p1[0])],
                                  e.total.comp[(p2[1], p1[1])])
    identity = {(x, y): (d.total.identity[x], e.total.identity[y])
                for (x, y) in objects}
    return FinCategory(objects, morphisms, src, tgt, comp, identity,
                       name="pullback")


def tensor_fibered(d: FiberedCategory, e: FiberedCategory):
    """D (x)_C E = pi_0 of the nerve of D x_C E, computed on the 1-skeleton
    (components only depend on dimensions <= 1)."""
    pb = pullback_category(d, e)
    uf = _UnionFind(pb.objects)
    for m in pb.morphisms:
        uf.union(pb.src[m], pb.tgt[m])
    buckets = {}
    for o in pb.objects:
        buckets.setdefault(uf.find(o), []).append(o)
    classes = sorted((sorted(v, key=repr) for v in buckets.values()), key=repr)
    class_of = {o: i for i, cls in enumerate(classes) for o in cls}
    return classes, class_of, pb


# --------------------------------------------------------------------------
# nerve
# --------------------------------------------------------------------------

def nerve(c: FinCategory, dim_bound):
    """The nerve, truncated at dim_bound: d-simplices are composable
    d-chains, nondegenerate ones contain no identity.

    The presentation is total (exact) iff no nondegenerate chain of length
    dim_bound + 1 exists, e.g. for posets once the bound passes the longest
    strict chain.
    """
    levels = [[(o,) for o in c.objects]]
    for d in range(1, dim_bound + 1):
        prev = levels[d - 1]
        lv = []
        for chain in prev:
            endpoint = c.tgt[chain[-1]] if d > 1 else chain[0]
            for m in c.morphisms:
                if c.src[m] == endpoint:
                    lv.append((chain + (m,)) if d > 1 else (m,))
        levels.append(lv)

    def face_fn(d, t, i):
        if d == 1:
            # vertex 0 is the source, so d_0 keeps the target
            return (c.tgt[t[0]],) if i == 0 else (c.src[t[0]],)
        if i == 0:
            return t[1:]
        if i == d:
            return t[:-1]
        return t[:i - 1] + (c.compose(t[i], t[i - 1]),) + t[i + 1:]

    def deg_fn(d, t, i):
        if d == 0:
            return (c.identity[t[0]],)
        start = c.src[t[0]]
        objs = [start] + [c.tgt[m] for m in t]
        return t[:i] + (c.identity[objs[i]],) + t[i:]

    # exactness probe: does any identity-free chain of length bound + 1 exist?
    def has_long_nondeg():
        frontier = [(o,) for o in c.objects]
        nonid = c.nonidentity()
        length = 0
        while frontier and length <= dim_bound:
            nxt = []
            for chain in frontier:
                endpoint = c.tgt[chain[-1]] if length > 0 else chain[0]
                for m in nonid:
                    if c.src[m] == endpoint:
                        nxt.append(chain + (m,) if length > 0 else (m,))
            frontier = nxt
            length += 1
        return bool(frontier)

    built = from_levels(levels, face_fn, deg_fn, dim_bound,
                        exact=not has_long_nondeg(),
                        name=f"N({c.name})" if c.name else "N",
                        id_fn=lambda d, t: "n" + "|".join(map(str, t)))
    return built


def nerve_sset(c, dim_bound):
    return nerve(c, dim_bound).sset


# --------------------------------------------------------------------------
# Yoneda checks
# --------------------------------------------------------------------------

@dataclass
class BijectionReport:
    mode: str
    bijection: bool
    lhs_size: int
    rhs_size: int
    map_table: list = field(default_factory=list)
    detail: str = ""

    def to_json(self):
        return {"mode": self.mode, "bijection": self.bijection,
                "lhs": self.lhs_size, "rhs": self.rhs_size,
                "detail": self.detail,
                "map_table": [[repr(a), repr(b)] for a, b in self.map_table]}


def _is_bijection(pairs, rhs):
    seen = [b for _, b in pairs]
    return len(seen) == len(set(map(repr, seen))) == len(rhs) and \
        set(map(repr, seen)) == set(map(repr, rhs))


def yoneda_check(mode, **inputs):
    """The four classical bijections, each built exactly as stated and then
    verified elementwise.

    hom_functor:    Nat(Hom(C,-), F)  ->  F(C);  alpha |-> alpha_C(id_C)
    tensor_functor: Hom(C,-) (x) F    ->  F(C);  (f, a) |-> F(f)(a)
    hom_fibered:    Fun_/C(C_/C, D)   ->  fiber over C;  G |-> G(id_C)
    tensor_fibered: C_{C/} (x) D      ->  fiber over C;  lift domains
    """
    if mode == "hom_functor":
        f, cobj = inputs["functor"], inputs["object"]
        if f.variance != "covariant":
            raise CatError("hom_functor mode needs a covariant functor")
        c = f.base
        rep = representable(c, cobj, "covariant")
        nats = natural_transformations(rep, f)
        idc = c.identity[cobj]
        pairs = [(alpha, alpha[cobj][idc]) for alpha in nats]
        rhs = list(f.on_objects[cobj])
        return BijectionReport(mode, _is_bijection(pairs, rhs),
                               len(nats), len(rhs), pairs)

    if mode == "tensor_functor":
        f, cobj = inputs["functor"], inputs["object"]
        if f.variance != "contravariant":
            raise CatError("tensor_functor mode needs a contravariant functor")
        c = f.base
        rep = representable(c, cobj, "covariant")
        classes, class_of = tensor_functors(f, rep)
        # each class maps through (g: cobj -> o, a in F(o)) |-> F(g)(a)
        images = []
        well_defined = True
        for cls in classes:
            vals = {f.apply(g, a) for (o, a, g) in cls}
            if len(vals) != 1:
                well_defined = False
            images.append(sorted(vals, key=repr)[0])
        pairs = list(zip(classes, images))
        rhs = list(f.on_objects[cobj])
        ok = well_defined and _is_bijection(pairs, rhs)
        return BijectionReport(mode, ok, len(classes), len(rhs), pairs,
                               detail="" if well_defined else "map not well defined")

    if mode == "hom_fibered":
        d, cobj = inputs["fibered"], inputs["object"]
        chk = fibered_check(d)
        if not chk["fibered_in_sets"]:
            raise CatError("hom_fibered mode needs a category fibered in sets")
        c = d.base
        over, proj = slice_category(c, cobj, "over")
        functors = functors_over_base(proj, d)
        idc = c.identity[cobj]
        pairs = [(g, g[0][idc]) for g in functors]
        rhs = d.fiber(cobj)
        return BijectionReport(mode, _is_bijection(pairs, rhs),
                               len(functors), len(rhs), pairs)

    if mode == "tensor_fibered":
        d, cobj = inputs["fibered"], inputs["object"]
        chk = fibered_check(d)
        if not chk["fibered_in_sets"]:
            raise CatError("tensor_fibered mode needs a category fibered in sets")
        c = d.base
        under, proj = slice_category(c, cobj, "under")
        classes, class_of, pb = tensor_fibered(proj, d)
        # class element: pair (arrow f: cobj -> o, object D' over o);
        # send to the domain of the unique lift of f with target D'
        images = []
        well_defined = True
        for cls in classes:
            vals = set()
            for (f, dprime) in cls:
                lifts = [m for m in d.total.morphisms
                         if d.total.tgt[m] == dprime and d.on_morphisms[m] == f]
                vals.add(d.total.src[lifts[0]])
            if len(vals) != 1:
                well_defined = False
            images.append(sorted(vals, key=repr)[0])
        pairs = list(zip(classes, images))
        rhs = d.fiber(cobj)
        ok = well_defined and _is_bijection(pairs, rhs)
        return BijectionReport(mode, ok, len(classes), len(rhs), pairs,
                               detail="" if well_defined else "map not well defined")

    raise CatError(f"unknown yoneda mode {mode!r}")


def functors_over_base(p: FiberedCategory, d: FiberedCategory):
    """All functors G: p.total -> d.total with d . G = p.

    Objects are assigned fiberwise with incremental pruning: as soon as both
    endpoints of a source morphism are placed, a lift of its base image must
    exist between the chosen objects.  Morphism images are then forced and
    functoriality is checked at the end.
    """
    if p.base is not d.base:
        raise CatError("functors over a base need matching bases")
    s, t = p.total, d.total
    objs = list(s.objects)
    placed = {o: i for i, o in enumerate(objs)}
    lifts_between = {}

    def lifts(base_m, d_src, d_tgt):
        key = (base_m, d_src, d_tgt)
        if key not in lifts_between:
            lifts_between[key] = [
                n for n in t.morphisms
                if d.on_morphisms[n] == base_m
                and t.src[n] == d_src and t.tgt[n] == d_tgt]
        return lifts_between[key]

    results = []
    obj_assign = {}

    def consistent_with(o):
        k = placed[o]
        for m in s.morphisms:
            a, b = s.src[m], s.tgt[m]
            if (a == o and placed[b] <= k) or (b == o and placed[a] <= k):
                if not lifts(p.on_morphisms[m], obj_assign[a], obj_assign[b]):
                    return False
        return True

    def backtrack(k):
        if k == len(objs):
            mor_assign = {}
            for m in s.morphisms:
                cands = lifts(p.on_morphisms[m],
                              obj_assign[s.src[m]], obj_assign[s.tgt[m]])
                if len(cands) != 1:
                    return
                mor_assign[m] = cands[0]
            for o in objs:
                if mor_assign[s.identity[o]] != t.identity[obj_assign[o]]:
                    return
            for g in s.morphisms:
                for f in s.morphisms:
                    if s.tgt[f] != s.src[g]:
                        continue
                    if mor_assign[s.comp[(g, f)]] != \
                            t.comp[(mor_assign[g], mor_assign[f])]:
                        return
            results.append((dict(obj_assign), mor_assign))
            return
        o = objs[k]
        for cand in d.fiber(p.on_objects[o]):
            obj_assign[o] = cand
            if consistent_with(o):
                backtrack(k + 1)
            del obj_assign[o]

    backtrack(0)
    return results


def hom_tensor_check(p: SetValuedFunctor, f: SetValuedFunctor, s):
    """The adjunction between - (x) F and Hom(F(-), S): natural maps
    P => Hom(F(-), S) against plain functions P (x) F -> S, with the
    canonical transposition checked to be a bijection."""
    if p.variance != "contravariant" or f.variance != "covariant":
        raise CatError("hom_tensor_check takes (contravariant, covariant)")
    c = p.base
    svals = tuple(s)
    # right adjoint value: object o |-> functions F(o) -> S, contravariant
    hom_objects = {
        o: tuple(dict(zip(f.on_objects[o], img))
                 for img in iproduct(svals, repeat=len(f.on_objects[o])))
        for o in c.objects}

    def hom_apply(m, func):
        # precompose with F(m): (Hom(F(-),S))(m): Hom(F(tgt m),S) -> Hom(F(src m),S)
        return {x: func[f.apply(m, x)] for x in f.on_objects[c.src[m]]}

    hom_functor = SetValuedFunctor(
        c, "contravariant",
        {o: tuple(_freeze(d) for d in hom_objects[o]) for o in c.objects},
        {m: {_freeze(d): _freeze(hom_apply(m, dict(d)))
             for d in hom_objects[c.tgt[m]]}
         for m in c.morphisms},
        name="Hom(F(-),S)")
    hom_functor._validate_tables()

    p_frozen = p
    nats = natural_transformations(p_frozen, hom_functor)
    classes, class_of = tensor_functors(p, f)
    functions = list(iproduct(svals, repeat=len(classes)))

    lhs, rhs = len(nats), len(functions)
    # canonical transposition: alpha |-> (class of (o, a, b) |-> alpha_o(a)(b))
    transposed = []
    well_defined = True
    for alpha in nats:
        vals = {}
        for i, cls in enumerate(classes):
            images = {dict(alpha[o][a])[b] for (o, a, b) in cls}
            if len(images) != 1:
                well_defined = False
            vals[i] = sorted(images, key=repr)[0]
        transposed.append(tuple(vals[i] for i in range(len(classes))))
    bijection = well_defined and len(set(transposed)) == lhs == rhs and \
        set(transposed) <= set(functions)
    return BijectionReport("hom_tensor", bijection, lhs, rhs,
                           list(zip(nats, transposed)))


def _freeze(d):
    return tuple(sorted(d.items(), key=repr))
