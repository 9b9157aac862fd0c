"""Homotopy-evidence backend: components, rational Betti numbers, and the
contractibility / weak-equivalence verdicts used by the fibration checkers.

Everything is computed from normalized chains: degenerate faces contribute
zero, so the boundary matrices live on nondegenerate cells only.  Ranks are
taken over the rationals by exact elimination; the resulting verdicts carry
an explicit tier (decisive vs evidence up to the homology bound).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .sset import FinSimplicialSet, SSetError


DEFAULT_K_MAX = 3


class OracleError(SSetError):
    pass


@dataclass
class ChainComplexQ:
    """Integer boundary matrices on nondegenerate cells, degree by degree."""

    dims: list            # nondegenerate cell counts per degree
    boundaries: list      # boundaries[k]: matrix of d: C_k -> C_{k-1}, k >= 1

    def validate(self):
        for k in range(2, len(self.dims)):
            prod = _mat_mul(self.boundaries[k - 1], self.boundaries[k],
                            self.dims[k - 2], self.dims[k - 1], self.dims[k])
            if any(any(entry != 0 for entry in row) for row in prod):
                raise OracleError(f"boundary squared is nonzero at degree {k}")
        return True

    def euler_characteristic(self):
        return sum((-1) ** k * n for k, n in enumerate(self.dims))


def _mat_mul(a, b, rows, inner, cols):
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for j in range(inner):
            v = ai[j]
            if v:
                bj = b[j]
                row = out[i]
                for k in range(cols):
                    row[k] += v * bj[k]
    return out


def _rank(matrix, rows, cols):
    """Exact rank over Q by fraction elimination."""
    if rows == 0 or cols == 0:
        return 0
    m = [[Fraction(x) for x in row] for row in matrix]
    rank = 0
    row = 0
    for col in range(cols):
        pivot = None
        for r in range(row, rows):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(rows):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [v - factor * p for v, p in zip(m[r], m[row])]
        rank += 1
        row += 1
        if row == rows:
            break
    return rank


def chain_complex(s: FinSimplicialSet, top):
    """Normalized chains of s up to degree ``top``, capped at the trusted
    range of a truncated object."""
    if not s.exact:
        top = min(top, s.dim_bound)
    dims = [len(s.n_cells(k)) for k in range(top + 1)]
    boundaries = [None]
    for k in range(1, top + 1):
        rows = {c: i for i, c in enumerate(s.n_cells(k - 1))}
        mat = [[0] * dims[k] for _ in range(dims[k - 1])]
        for j, c in enumerate(s.n_cells(k)):
            for i, face in enumerate(s.faces[c]):
                if face.is_nondegenerate:
                    mat[rows[face.base]][j] += (-1) ** i
        boundaries.append(mat)
    return ChainComplexQ(dims, boundaries)


def pi0(s: FinSimplicialSet):
    """Connected components of the (0, 1)-skeleton graph.

    Returns a list of components, each a sorted list of vertex ids.
    """
    parent = {v: v for v in s.n_cells(0)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in s.n_cells(1):
        a = find(s.faces[e][0].base)
        b = find(s.faces[e][1].base)
        if a != b:
            parent[a] = b
    comps = {}
    for v in s.n_cells(0):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values(), key=lambda c: c[0])


def pi0_map(f):
    """The induced function on components; returns (components of source,
    components of target, index map)."""
    src = pi0(f.source)
    tgt = pi0(f.target)
    where = {v: i for i, comp in enumerate(tgt) for v in comp}
    idx = []
    for comp in src:
        image = f.assignment[comp[0]]
        idx.append(where[image.base])
    return src, tgt, idx


def betti(s: FinSimplicialSet, k_max=DEFAULT_K_MAX):
    """Rational Betti numbers b_0..b_{k_max}.

    Returns (numbers, trusted): b_k needs all cells up to degree k + 1, so
    ``trusted`` is False when the object is truncated before k_max + 1 and
    the top entries are then only as good as the available cells.
    """
    trusted = s.exact or s.dim_bound >= k_max + 1
    cc = chain_complex(s, k_max + 1)
    top = len(cc.dims) - 1
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        ranks[k] = _rank(cc.boundaries[k], cc.dims[k - 1], cc.dims[k])
    numbers = []
    for k in range(k_max + 1):
        if k > top:
            numbers.append(0)
            continue
        kernel = cc.dims[k] - (ranks[k] if k >= 1 else 0)
        image_above = ranks[k + 1] if k + 1 <= top else 0
        numbers.append(kernel - image_above)
    return numbers, trusted


def betti_degree_trusted(s, k):
    """Is b_k fully determined by the stored cells?"""
    return s.exact or s.dim_bound >= k + 1


@dataclass
class Verdict:
    """A boolean with its epistemic tier attached."""

    value: bool
    decisive: bool
    reason: str = ""
    k_max: int | None = None

    def __bool__(self):
        return self.value

    def to_json(self):
        return {"value": self.value,
                "tier": "exact" if self.decisive else "bounded_evidence",
                "reason": self.reason, "k_max": self.k_max}


def contractible_evidence(s: FinSimplicialSet, k_max=DEFAULT_K_MAX):
    """Is s (weakly) contractible?  Decisive on empty or discrete inputs and
    on component counts; otherwise homology evidence up to k_max."""
    if s.is_empty:
        return Verdict(False, True, "empty")
    comps = pi0(s)
    if len(comps) != 1:
        return Verdict(False, True, f"{len(comps)} components")
    if s.is_discrete:
        return Verdict(True, True, "single point")
    numbers, _ = betti(s, k_max)
    for k, b in enumerate(numbers):
        expected = 1 if k == 0 else 0
        if b != expected:
            # nonzero reduced homology refutes contractibility outright,
            # provided the degree was computed from a complete cell range
            return Verdict(False, betti_degree_trusted(s, k),
                           f"b_{k} = {b}", k_max)
    return Verdict(True, False, "trivial rational homology in range", k_max)


def weak_equivalence_evidence(f, k_max=DEFAULT_K_MAX):
    """Evidence that f is a weak equivalence: bijection on components plus
    equal Betti numbers.  Decisive only when both sides are discrete."""
    src, tgt, idx = pi0_map(f)
    bijective = len(src) == len(tgt) and sorted(idx) == list(range(len(tgt)))
    if f.source.is_discrete and f.target.is_discrete:
        # vertices are everything: reduce to a bijection of vertex sets
        verts = [f.assignment[v].base for v in f.source.n_cells(0)]
        value = (len(verts) == len(set(verts))
                 and len(verts) == len(f.target.n_cells(0)))
        return Verdict(value, True, "discrete: vertex bijection")
    if not bijective:
        return Verdict(False, True, "component map is not a bijection")
    bs, ts = betti(f.source, k_max)[0], betti(f.target, k_max)[0]
    if bs != ts:
        return Verdict(False, False, f"betti mismatch {bs} vs {ts}", k_max)
    return Verdict(True, False, "pi0 bijection and betti agreement", k_max)
