"""Monotone maps between finite linear posets and their convex factorization.

A map [m] -> [n] between the linear posets [m] = {0 < 1 < ... < m} is stored
as its value sequence.  These maps are the operators of the simplex category,
and the factorization implemented here splits every map into a *right convex
surjection* (every element of the target is bounded by an image point)
followed by a *right convex injection* (an injective map whose image is an
initial segment).  The splitting is unique and is the engine behind the
straightening construction in :mod:`fiblab.straighten`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement


class PosetError(ValueError):
    """Raised for ill-formed monotone map data or size mismatches."""


@dataclass(frozen=True)
class MonotoneMap:
    """A weakly increasing map [source_size] -> [target_size].

    ``values`` holds the images of 0..source_size, so it always has
    ``source_size + 1`` entries, each within 0..target_size.
    """

    source_size: int
    target_size: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.source_size < 0 or self.target_size < 0:
            raise PosetError("poset sizes must be natural numbers")
        if len(self.values) != self.source_size + 1:
            raise PosetError(
                f"expected {self.source_size + 1} values, got {len(self.values)}")
        if any(v < 0 or v > self.target_size for v in self.values):
            raise PosetError(f"values {self.values} leave [{self.target_size}]")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise PosetError(f"values {self.values} are not weakly increasing")

    def __call__(self, i):
        return self.values[i]

    def __repr__(self):
        return f"MonotoneMap([{self.source_size}]->[{self.target_size}], {self.values})"

    @property
    def is_injective(self):
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    @property
    def is_surjective(self):
        return set(self.values) == set(range(self.target_size + 1))

    @property
    def is_identity(self):
        return self.source_size == self.target_size and self.values == tuple(
            range(self.source_size + 1))

    def to_json(self):
        return {"m": self.source_size, "n": self.target_size, "values": list(self.values)}

    @staticmethod
    def from_json(data):
        return MonotoneMap(data["m"], data["n"], tuple(data["values"]))


def identity(n):
    return MonotoneMap(n, n, tuple(range(n + 1)))


def constant(m, n, value):
    """The constant map [m] -> [n] at ``value``."""
    return MonotoneMap(m, n, (value,) * (m + 1))


def vertex(n, i):
    """The point inclusion [0] -> [n] hitting i."""
    return MonotoneMap(0, n, (i,))


def coface(n, i):
    """The injection [n-1] -> [n] that skips i."""
    if not 0 <= i <= n:
        raise PosetError(f"coface index {i} out of range for [{n}]")
    return MonotoneMap(n - 1, n, tuple(v if v < i else v + 1 for v in range(n)))


def codegeneracy(n, i):
    """The surjection [n+1] -> [n] that repeats i."""
    if not 0 <= i <= n:
        raise PosetError(f"codegeneracy index {i} out of range for [{n}]")
    return MonotoneMap(n + 1, n, tuple(v if v <= i else v - 1 for v in range(n + 2)))


def compose(g, f):
    """The composite g . f, defined when f lands in g's source."""
    if f.target_size != g.source_size:
        raise PosetError(
            f"cannot compose: f targets [{f.target_size}] but g starts at "
            f"[{g.source_size}]")
    return MonotoneMap(f.source_size, g.target_size,
                       tuple(g.values[v] for v in f.values))


def reverse(f):
    """Conjugate f by the order-reversing involutions of source and target."""
    m, n = f.source_size, f.target_size
    return MonotoneMap(m, n, tuple(n - f.values[m - i] for i in range(m + 1)))


def all_monotone_maps(m, n):
    """Every monotone map [m] -> [n], in lexicographic order of values."""
    return [MonotoneMap(m, n, vals)
            for vals in combinations_with_replacement(range(n + 1), m + 1)]


def standard_embedding(m, n):
    """se(m, n): the inclusion [m] -> [n] sending i to i; requires m <= n."""
    if m > n:
        raise PosetError(f"standard embedding needs m <= n, got {m} > {n}")
    return MonotoneMap(m, n, tuple(range(m + 1)))


@dataclass(frozen=True)
class Classification:
    is_right_convex_injection: bool
    is_right_convex_surjection: bool


def classify(f):
    """Decide membership in the two factor classes.

    Right convex injection: injective, and any b in the target bounded above
    by an image point is itself in the image (the image is the initial
    segment {0, ..., f(m)}).  Right convex surjection: every b in the target
    has some a with b <= f(a); for a monotone map this says f tops out at
    target_size.  Both conditions are decided literally by enumeration so
    degenerate cases (targets of size one) fall out of the quantifiers.
    """
    image = set(f.values)
    inj = f.is_injective and all(
        b in image
        for b in range(f.target_size + 1)
        if any(b <= b1 for b1 in image))
    surj = all(
        any(b <= f.values[a] for a in range(f.source_size + 1))
        for b in range(f.target_size + 1))
    return Classification(inj, surj)


def factorize(f):
    """Split f uniquely as i_f . p_f with p_f a right convex surjection and
    i_f a right convex injection.

    p_f keeps f's value sequence but ends at [f(m)]; i_f is the initial
    segment inclusion [f(m)] -> [n].
    """
    top = f.values[-1]
    p_f = MonotoneMap(f.source_size, top, f.values)
    i_f = standard_embedding(top, f.target_size)
    return p_f, i_f


def brute_force_factorizations(f):
    """All (p, i) with i . p = f, p a right convex surjection and i a right
    convex injection, found by searching every middle size.

    Independent of :func:`factorize`; used to certify uniqueness.
    """
    found = []
    for mid in range(f.target_size + 1):
        for p in all_monotone_maps(f.source_size, mid):
            if not classify(p).is_right_convex_surjection:
                continue
            for i in all_monotone_maps(mid, f.target_size):
                if not classify(i).is_right_convex_injection:
                    continue
                if compose(i, p) == f:
                    found.append((p, i))
    return found


def brute_force_factorization_table(m, n):
    """Factorizations of every map [m] -> [n], grouped by composite.

    Same search space as :func:`brute_force_factorizations` but organized as
    one sweep over all (surjection candidate, injection candidate) pairs so a
    full corpus check stays fast.
    """
    table = {f: [] for f in all_monotone_maps(m, n)}
    for mid in range(n + 1):
        injections = [i for i in all_monotone_maps(mid, n)
                      if classify(i).is_right_convex_injection]
        if not injections:
            continue
        for p in all_monotone_maps(m, mid):
            if not classify(p).is_right_convex_surjection:
                continue
            for i in injections:
                table[compose(i, p)].append((p, i))
    return table
