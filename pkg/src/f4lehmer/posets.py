"""
Finite posets, the componentwise order on N^k, multicomplexes and M-sequences.

Tuples of naturals are plain Python tuples; their rank is the coordinate sum.
A :class:`FinitePoset` stores each element's down-set as a Python-int bitset,
which keeps pairwise queries O(1) for the few-thousand-element posets here.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from math import comb

from .qpoly import QPoly

__all__ = [
    "LengthMismatch",
    "FinitePoset",
    "LatticeReport",
    "rho",
    "componentwise_leq",
    "componentwise_meet",
    "componentwise_join",
    "box",
    "box_points",
    "truncate_by_rank",
    "is_multicomplex",
    "maximal_elements",
    "down_closure",
    "f_polynomial",
    "f_vector",
    "binomial_decomposition",
    "macaulay_pseudopower",
    "is_m_sequence",
    "lattice_report",
    "hasse_edges",
    "sort_tuple",
    "to_dot",
    "to_json",
]


class LengthMismatch(ValueError):
    pass


def rho(x: Sequence[int]) -> int:
    return sum(x)


def componentwise_leq(x: Sequence[int], y: Sequence[int]) -> bool:
    if len(x) != len(y):
        raise LengthMismatch(f"tuples of lengths {len(x)} and {len(y)}")
    return all(a <= b for a, b in zip(x, y))


def componentwise_meet(x, y) -> tuple[int, ...]:
    return tuple(min(a, b) for a, b in zip(x, y))


def componentwise_join(x, y) -> tuple[int, ...]:
    return tuple(max(a, b) for a, b in zip(x, y))


def sort_tuple(x: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(x))


def _canonical_key(x):
    return (rho(x), tuple(x))


class FinitePoset:
    """A finite poset on hashable elements.

    ``below[i]`` is the bitset of indices ``j`` with ``elements[j] <= elements[i]``.
    ``rank`` is an optional grading (list aligned with ``elements``).
    """

    def __init__(self, elements: Sequence[Hashable], below: Sequence[int], rank: Sequence[int] | None = None):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate poset elements")
        self.below = tuple(below)
        self.rank = None if rank is None else tuple(rank)
        self._lower = None

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable], leq: Callable[[object, object], bool],
                      rank: Callable[[object], int] | None = None, key=None) -> "FinitePoset":
        elems = list(elements)
        if key is not None:
            elems.sort(key=key)
        below = []
        for y in elems:
            b = 0
            for i, x in enumerate(elems):
                if leq(x, y):
                    b |= 1 << i
            below.append(b)
        return cls(elems, below, None if rank is None else [rank(x) for x in elems])

    @classmethod
    def componentwise(cls, points: Iterable[Sequence[int]]) -> "FinitePoset":
        """Points of N^k under the componentwise order, sorted by (rank, lex)."""
        pts = sorted({tuple(p) for p in points}, key=_canonical_key)
        return cls.from_relation(pts, componentwise_leq, rank=rho)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def leq(self, x, y) -> bool:
        return bool(self.below[self.index[y]] >> self.index[x] & 1)

    def lower_cover_ids(self, i: int) -> tuple[int, ...]:
        if self._lower is None:
            self._lower = self._compute_lower_covers()
        return self._lower[i]

    def lower_covers(self, x) -> list:
        return [self.elements[j] for j in self.lower_cover_ids(self.index[x])]

    def _compute_lower_covers(self):
        strict = [b & ~(1 << i) for i, b in enumerate(self.below)]
        out = []
        for i, s in enumerate(strict):
            shadow = 0
            rest = s
            while rest:
                low = rest & -rest
                shadow |= strict[low.bit_length() - 1]
                rest ^= low
            out.append(tuple(_bits(s & ~shadow)))
        return tuple(out)

    def subposet(self, keep: Iterable[Hashable]) -> "FinitePoset":
        keep_set = set(keep)
        ids = [i for i, x in enumerate(self.elements) if x in keep_set]
        remap = {old: new for new, old in enumerate(ids)}
        below = []
        for i in ids:
            b = 0
            for j in _bits(self.below[i]):
                if j in remap:
                    b |= 1 << remap[j]
            below.append(b)
        rank = None if self.rank is None else [self.rank[i] for i in ids]
        return FinitePoset([self.elements[i] for i in ids], below, rank)

    def maximal_elements(self) -> list:
        above = [0] * len(self)
        for i, b in enumerate(self.below):
            for j in _bits(b & ~(1 << i)):
                above[j] |= 1 << i
        return [x for i, x in enumerate(self.elements) if not above[i]]

    def is_graded_by_rank(self) -> bool:
        if self.rank is None:
            return False
        return all(self.rank[i] == self.rank[j] + 1
                   for i in range(len(self)) for j in self.lower_cover_ids(i))


def _bits(b: int):
    while b:
        low = b & -b
        yield low.bit_length() - 1
        b ^= low


def box_points(caps: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(itertools.product(*(range(c + 1) for c in caps)), key=_canonical_key)


def box(caps: Sequence[int]) -> FinitePoset:
    """The product of chains ``[c_1]_0 x ... x [c_k]_0``, graded by coordinate sum."""
    pts = box_points(caps)
    index = {p: i for i, p in enumerate(pts)}
    below = [0] * len(pts)
    # canonical order is a linear extension, so lower covers are already filled in
    for i, p in enumerate(pts):
        b = 1 << i
        for t in range(len(p)):
            if p[t]:
                q = p[:t] + (p[t] - 1,) + p[t + 1:]
                b |= below[index[q]]
        below[i] = b
    return FinitePoset(pts, below, [rho(p) for p in pts])


def truncate_by_rank(poset: FinitePoset, k: int, exact: bool = False) -> FinitePoset:
    """Induced subposet on ranks ``<= k`` (or ``== k`` with ``exact=True``)."""
    if poset.rank is None:
        raise ValueError("truncate_by_rank needs a graded poset")
    keep = [x for x, r in zip(poset.elements, poset.rank) if (r == k if exact else r <= k)]
    return poset.subposet(keep)


# ---------------------------------------------------------------------------
# Multicomplexes

def maximal_elements(points: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
    pts = sorted({tuple(p) for p in points}, key=_canonical_key, reverse=True)
    out: list[tuple[int, ...]] = []
    for p in pts:
        # descending rank: anything above p has already been seen
        if not any(componentwise_leq(p, m) for m in out):
            out.append(p)
    return set(out)


def is_multicomplex(points: Iterable[Sequence[int]]) -> tuple[bool, tuple | None]:
    """Check downward closure in N^k.

    Returns ``(True, None)`` or ``(False, (x, y))`` where ``x`` is in the set,
    ``y <= x`` and ``y`` is missing.
    """
    pts = {tuple(p) for p in points}
    for x in sorted(pts, key=_canonical_key):
        for t in range(len(x)):
            if x[t]:
                y = x[:t] + (x[t] - 1,) + x[t + 1:]
                if y not in pts:
                    return False, (x, y)
    return True, None


def down_closure(maxima: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
    out = set()
    for m in maxima:
        out.update(itertools.product(*(range(c + 1) for c in m)))
    return out


def f_polynomial(points: Iterable[Sequence[int]]) -> QPoly:
    return QPoly.from_degrees(rho(p) for p in points)


def f_vector(points: Iterable[Sequence[int]]) -> list[int]:
    return list(f_polynomial(points).coeffs)


# ---------------------------------------------------------------------------
# Macaulay's numerical criterion

def binomial_decomposition(a: int, i: int) -> list[tuple[int, int]]:
    """The ``i``-binomial (Macaulay) representation of ``a``.

    Returns ``[(n_i, i), (n_{i-1}, i-1), ..., (n_j, j)]`` with
    ``n_i > n_{i-1} > ... > n_j >= j >= 1`` and ``a = sum C(n_t, t)``,
    found greedily (largest ``n_t`` with ``C(n_t, t) <= remainder``).

    >>> binomial_decomposition(6, 2)
    [(4, 2)]
    >>> binomial_decomposition(5, 2)
    [(3, 2), (2, 1)]
    """
    if i < 1:
        raise ValueError("binomial representation needs i >= 1")
    out = []
    t = i
    while a > 0 and t >= 1:
        n = t
        while comb(n + 1, t) <= a:
            n += 1
        out.append((n, t))
        a -= comb(n, t)
        t -= 1
    return out


def macaulay_pseudopower(a: int, i: int) -> int:
    """``a^<i> = sum C(n_t + 1, t + 1)`` over the ``i``-binomial representation."""
    return sum(comb(n + 1, t + 1) for n, t in binomial_decomposition(a, i))


def is_m_sequence(seq: Sequence[int]) -> bool:
    """Whether ``seq`` is the f-vector of a (non-empty) multicomplex.

    Macaulay: ``h_0 = 1`` and ``0 <= h_{i+1} <= h_i^<i>`` for ``i >= 1``.
    """
    seq = list(seq)
    if not seq or seq[0] != 1 or any(x < 0 for x in seq):
        return False
    for i in range(1, len(seq) - 1):
        if seq[i + 1] > macaulay_pseudopower(seq[i], i):
            return False
    return True


# ---------------------------------------------------------------------------
# Lattice checks

@dataclass
class LatticeReport:
    is_meet_semilattice: bool
    is_join_semilattice: bool
    is_lattice: bool
    is_distributive: bool | None
    # (x, y) pair without a meet / join, or (x, y, z) violating distributivity
    meet_witness: tuple | None = None
    join_witness: tuple | None = None
    distributive_witness: tuple | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "is_meet_semilattice": self.is_meet_semilattice,
            "is_join_semilattice": self.is_join_semilattice,
            "is_lattice": self.is_lattice,
            "is_distributive": self.is_distributive,
            "meet_witness": _jsonable(self.meet_witness),
            "join_witness": _jsonable(self.join_witness),
            "distributive_witness": _jsonable(self.distributive_witness),
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _meet_table(below: Sequence[int]):
    """meet[i][j] = index of the greatest common lower bound, or None."""
    n = len(below)
    by_set = {b: i for i, b in enumerate(below)}
    table = [[None] * n for _ in range(n)]
    first_bad = None
    for i in range(n):
        for j in range(i, n):
            common = below[i] & below[j]
            m = by_set.get(common)
            table[i][j] = table[j][i] = m
            if m is None and first_bad is None:
                first_bad = (i, j)
    return table, first_bad


def lattice_report(poset: FinitePoset, check_distributive: bool = True) -> LatticeReport:
    """Meet/join existence for all pairs; distributivity via the median identity.

    The greatest common lower bound of ``a`` and ``b`` exists exactly when the
    intersection of their down-sets is itself a down-set ``below[m]``.
    """
    n = len(poset)
    below = poset.below
    above = [0] * n
    for i, b in enumerate(below):
        for j in _bits(b):
            above[j] |= 1 << i
    meet, bad_meet = _meet_table(below)
    join, bad_join = _meet_table(above)
    el = poset.elements
    rep = LatticeReport(
        is_meet_semilattice=bad_meet is None,
        is_join_semilattice=bad_join is None,
        is_lattice=bad_meet is None and bad_join is None and n > 0,
        is_distributive=None,
        meet_witness=None if bad_meet is None else (el[bad_meet[0]], el[bad_meet[1]]),
        join_witness=None if bad_join is None else (el[bad_join[0]], el[bad_join[1]]),
    )
    if rep.is_lattice and check_distributive:
        rep.is_distributive = True
        for x, y, z in itertools.combinations(range(n), 3):
            lhs = join[join[meet[x][y]][meet[y][z]]][meet[z][x]]
            rhs = meet[meet[join[x][y]][join[y][z]]][join[z][x]]
            if lhs != rhs:
                rep.is_distributive = False
                rep.distributive_witness = (el[x], el[y], el[z])
                break
    elif not rep.is_lattice:
        rep.is_distributive = False
    return rep


def lattice_meet(poset: FinitePoset, x, y):
    """Greatest lower bound inside ``poset`` (``None`` if it does not exist)."""
    common = poset.below[poset.index[x]] & poset.below[poset.index[y]]
    for i, b in enumerate(poset.below):
        if b == common:
            return poset.elements[i]
    return None


def hasse_edges(poset: FinitePoset) -> list[tuple]:
    """All cover pairs ``(lower, upper)`` in canonical element order."""
    return [(poset.elements[j], poset.elements[i])
            for i in range(len(poset)) for j in poset.lower_cover_ids(i)]


# ---------------------------------------------------------------------------
# Emitters

def _label(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


def _sorted_nodes(poset: FinitePoset):
    if poset.rank is None:
        return list(poset.elements)
    return sorted(poset.elements, key=lambda x: (poset.rank[poset.index[x]], x))


def to_dot(poset: FinitePoset, name: str = "hasse", label: Callable | None = None) -> str:
    """Hasse diagram as DOT, bottom-up, one ``rank=same`` block per rank."""
    label = label or _label
    nodes = _sorted_nodes(poset)
    ident = {x: f"n{i}" for i, x in enumerate(nodes)}
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for x in nodes:
        lines.append(f'  {ident[x]} [label="{label(x)}"];')
    if poset.rank is not None:
        ranks: dict[int, list] = {}
        for x in nodes:
            ranks.setdefault(poset.rank[poset.index[x]], []).append(ident[x])
        for r in sorted(ranks):
            lines.append("  { rank=same; " + " ".join(ranks[r]) + "; }")
    edges = sorted(hasse_edges(poset), key=lambda e: (nodes.index(e[0]), nodes.index(e[1])))
    for a, b in edges:
        lines.append(f"  {ident[a]} -> {ident[b]} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(poset: FinitePoset) -> str:
    nodes = _sorted_nodes(poset)
    order = {x: i for i, x in enumerate(nodes)}
    edges = sorted(hasse_edges(poset), key=lambda e: (order[e[0]], order[e[1]]))
    payload = {
        "nodes": [list(x) if isinstance(x, tuple) else x for x in nodes],
        "edges": [[_jsonable(a), _jsonable(b)] for a, b in edges],
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"
