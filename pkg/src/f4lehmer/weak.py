"""
The weak Lehmer code {L1, L2} of F4 and what it yields.

Every ``w`` in F4 factors uniquely as ``x3 * x1 * x2 * u`` with lengths adding
up, where ``x1, x2, x3`` run over three short Bruhat chains whose products fill
the parabolic subgroup on ``{s1, s2, s3}`` (type B3) and ``u`` runs over two
chains ``Y1 + Y2`` of minimal coset representatives.  Reading off the four
lengths (in an order depending on whether ``u`` lies in Y1 or Y2) gives two
rank-preserving injections ``F4 -> N^4``.

From these we get, for every lower interval ``[e, w]``, a multicomplex whose
f-polynomial is the Poincare polynomial ``h_w``, and a lattice presentation of
the palindromic Poincare polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import AUT_NAMES, GroupTable, aut_group, bits_to_list, parabolic_decompose
from .posets import (
    FinitePoset,
    LatticeReport,
    box_points,
    componentwise_leq,
    componentwise_meet,
    f_polynomial,
    is_multicomplex,
    lattice_meet,
    lattice_report,
    maximal_elements,
    sort_tuple,
    to_dot,
)
from .qpoly import QPoly, is_palindromic, poincare_polynomial, q_analog_product

__all__ = [
    "CHAIN_WORDS",
    "TOP_TUPLE",
    "WEAK_CAPS",
    "DecompositionFailure",
    "ConditionFailure",
    "StructureFailure",
    "ChainFamily",
    "WeakCode",
    "WeakCodeReport",
    "IntervalMulticomplex",
    "PalLattice",
    "load_chains",
    "build_weak_code",
    "decompose_f4",
    "eval_code",
    "verify_weak_code",
    "multicomplex_for_interval",
    "principal_elements",
    "unimodal_elements",
    "pal_set",
    "build_pal_lattice",
    "bruhat_poset",
]

# 1-based reduced words, in chain order (each entry covers the previous one)
CHAIN_WORDS = {
    "X1": ((), (2,)),
    "X2": ((), (3,), (3, 2), (3, 2, 3)),
    "X3": ((), (1,), (2, 1), (3, 2, 1), (2, 3, 2, 1), (1, 2, 3, 2, 1)),
    "Y1": (
        (),
        (4,),
        (4, 3),
        (4, 3, 2),
        (4, 3, 2, 1),
        (4, 3, 2, 3, 1),
        (4, 3, 2, 3, 1, 2),
        (4, 3, 2, 3, 1, 2, 3),
        (4, 3, 2, 3, 1, 2, 3, 4),
        (4, 3, 2, 3, 1, 2, 3, 4, 3),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2, 3),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2, 3, 1),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2, 3, 1, 2),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2, 3, 1, 2, 3),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2, 3, 1, 2, 3, 4),
    ),
    "Y2": (
        (4, 3, 2, 3),
        (4, 3, 2, 3, 4),
        (4, 3, 2, 3, 4, 1),
        (4, 3, 2, 3, 4, 1, 2),
        (4, 3, 2, 3, 4, 1, 2, 3),
        (4, 3, 2, 3, 4, 1, 2, 3, 2),
        (4, 3, 2, 3, 4, 1, 2, 3, 2, 1),
        (4, 3, 2, 3, 1, 2, 3, 4, 3, 2, 1),
    ),
}

WEAK_CAPS = (1, 5, 11, 15)
# stands in for w0 in the Pal lattice pictures
TOP_TUPLE = (1, 5, 7, 11)
PARABOLIC = (0, 1, 2)  # {s1, s2, s3}, 0-based


class DecompositionFailure(RuntimeError):
    pass


class ConditionFailure(RuntimeError):
    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class StructureFailure(RuntimeError):
    pass


@dataclass
class ChainFamily:
    """Element ids of the five chains plus the parabolic product table.

    ``product[x3 * x1 * x2] = (x3, x1, x2)`` for the 48 elements of the
    parabolic subgroup on ``{s1, s2, s3}``.
    """

    X1: list[int]
    X2: list[int]
    X3: list[int]
    Y1: list[int]
    Y2: list[int]
    product: dict[int, tuple[int, int, int]]


def load_chains(table: GroupTable) -> ChainFamily:
    """Build the chains from their words and validate them against ``table``."""
    if not table.is_type_f4():
        raise ValueError("the chain data describes type F4")
    chains = {}
    for name, words in CHAIN_WORDS.items():
        ids = [table.from_word1(w) for w in words]
        for w, word in zip(ids, words):
            if table.length[w] != len(word):
                raise DecompositionFailure(f"{name}: word {word} is not reduced")
        for a, b in zip(ids, ids[1:]):
            if a not in table.lower_covers[b]:
                raise DecompositionFailure(f"{name}: {table.word_str(a)} is not covered by {table.word_str(b)}")
        chains[name] = ids
    length = table.length
    product = {}
    for x3 in chains["X3"]:
        for x1 in chains["X1"]:
            for x2 in chains["X2"]:
                p = table.mul(table.mul(x3, x1), x2)
                if length[p] != length[x3] + length[x1] + length[x2]:
                    raise DecompositionFailure("X3 X1 X2 product is not length-additive")
                if p in product:
                    raise DecompositionFailure("X3 X1 X2 product is not injective")
                product[p] = (x3, x1, x2)
    parabolic = {w for w in range(table.size) if set(table.words[w]) <= set(PARABOLIC)}
    if set(product) != parabolic:
        raise DecompositionFailure("X3 X1 X2 does not fill the parabolic subgroup")
    minimal = {w for w in range(table.size) if parabolic_decompose(table, w, PARABOLIC)[0] == 0}
    ys = chains["Y1"] + chains["Y2"]
    if len(set(ys)) != len(ys) or set(ys) != minimal:
        raise DecompositionFailure("Y1 and Y2 do not partition the minimal coset representatives")
    return ChainFamily(chains["X1"], chains["X2"], chains["X3"], chains["Y1"], chains["Y2"], product)


def decompose_f4(table: GroupTable, chains: ChainFamily, w: int) -> tuple[int, int, int, int]:
    """The unique ``(x3, x1, x2, u)`` with ``w = x3 x1 x2 u``."""
    wJ, u = parabolic_decompose(table, w, PARABOLIC)
    try:
        x3, x1, x2 = chains.product[wJ]
    except KeyError:
        raise DecompositionFailure(f"parabolic part of {table.word_str(w)!r} not in the product table") from None
    return x3, x1, x2, u


@dataclass
class WeakCode:
    table: GroupTable = field(repr=False)
    chains: ChainFamily = field(repr=False)
    L1: list[tuple[int, int, int, int]] = field(repr=False)
    L2: list[tuple[int, int, int, int]] = field(repr=False)
    caps: tuple[int, ...] = WEAK_CAPS
    _ideals: dict = field(default_factory=dict, repr=False)
    _auts: list | None = field(default=None, repr=False)

    def code(self, which: int) -> list[tuple[int, int, int, int]]:
        if which == 1:
            return self.L1
        if which == 2:
            return self.L2
        raise ValueError("which must be 1 or 2")

    @property
    def auts(self):
        if self._auts is None:
            self._auts = aut_group(self.table)
        return self._auts

    def ideal(self, which: int, w: int) -> frozenset:
        """``{L_which(v) : v <= w}``."""
        key = (which, w)
        if key not in self._ideals:
            L = self.code(which)
            self._ideals[key] = frozenset(L[v] for v in bits_to_list(self.table.below[w]))
        return self._ideals[key]

    def ideal_under(self, which: int, aut: int, w: int) -> frozenset:
        """``{(L_which o phi)(v) : v <= w}``; phi is an order automorphism so
        this is the ideal of ``phi(w)``."""
        return self.ideal(which, int(self.auts[aut][w]))


def build_weak_code(table: GroupTable) -> WeakCode:
    chains = load_chains(table)
    y1 = set(chains.Y1)
    L1, L2 = [], []
    length = table.length
    for w in range(table.size):
        x3, x1, x2, u = decompose_f4(table, chains, w)
        a, b, c, d = int(length[x1]), int(length[x3]), int(length[x2]), int(length[u])
        if u in y1:
            L1.append((a, b, c, d))
            L2.append((a, b, c, d))
        else:
            L1.append((a, b, d, c))
            L2.append((a, b, c + 4, d - 4))
    return WeakCode(table, chains, L1, L2)


def eval_code(code: WeakCode, which: int, w: int) -> tuple[int, int, int, int]:
    return code.code(which)[w]


# ---------------------------------------------------------------------------
# Verification of the three defining conditions

@dataclass
class WeakCodeReport:
    image_size: dict[int, int]
    injective: dict[int, bool]
    rank_preserving: dict[int, bool]
    image_is_expected_union: dict[int, bool]
    condition2_violations: list[tuple[int, int]]
    multicomplex_count: dict[int, int]  # |N_i| before closing under automorphisms
    condition3_uncovered: list[int]
    witnesses: list[tuple[int, str]]

    @property
    def condition1(self) -> bool:
        return all(self.injective.values()) and all(self.rank_preserving.values())

    @property
    def condition2(self) -> bool:
        return not self.condition2_violations

    @property
    def condition3(self) -> bool:
        return not self.condition3_uncovered

    @property
    def ok(self) -> bool:
        return self.condition1 and self.condition2 and self.condition3

    def to_dict(self, table: GroupTable | None = None) -> dict:
        word = (lambda w: table.word_str(w)) if table is not None else (lambda w: w)
        return {
            "condition1": self.condition1,
            "condition2": self.condition2,
            "condition3": self.condition3,
            "image_size": {str(k): v for k, v in sorted(self.image_size.items())},
            "injective": {str(k): v for k, v in sorted(self.injective.items())},
            "rank_preserving": {str(k): v for k, v in sorted(self.rank_preserving.items())},
            "image_is_expected_union": {str(k): v for k, v in sorted(self.image_is_expected_union.items())},
            "multicomplex_count": {str(k): v for k, v in sorted(self.multicomplex_count.items())},
            "condition2_violations": [[i, word(w)] for i, w in self.condition2_violations],
            "condition3_uncovered": [word(w) for w in self.condition3_uncovered],
            "witnesses": [
                {"element": w, "word": table.word_str(w) if table else None, "code": i, "automorphism": a}
                for w, (i, a) in enumerate(self.witnesses)
            ],
        }


_EXPECTED_IMAGES = {
    1: ((1, 5, 3, 15), (1, 5, 11, 3)),
    2: ((1, 5, 3, 15), (1, 5, 7, 7)),
}


def _witness(code: WeakCode, w: int) -> tuple[int, str] | None:
    # fixed choice order: code 1 before code 2, then id, iota, psi, iota o psi
    for which in (1, 2):
        for a, name in enumerate(AUT_NAMES):
            if is_multicomplex(code.ideal_under(which, a, w))[0]:
                return which, name
    return None


def verify_weak_code(code: WeakCode, strict: bool = False) -> WeakCodeReport:
    """Check conditions 1-3 of a weak Lehmer code for ``{L1, L2}``.

    With ``strict=True`` a failed condition raises :class:`ConditionFailure`.
    """
    table = code.table
    n = table.size
    image_size, injective, rank_ok, union_ok, mc_count = {}, {}, {}, {}, {}
    violations = []
    for which in (1, 2):
        L = code.code(which)
        image_size[which] = len(set(L))
        injective[which] = image_size[which] == n
        rank_ok[which] = all(sum(L[w]) == table.length[w] for w in range(n))
        expected = set()
        for caps in _EXPECTED_IMAGES[which]:
            expected.update(box_points(caps))
        union_ok[which] = set(L) == expected
        count = 0
        for w in range(n):
            J = code.ideal(which, w)
            closed = is_multicomplex(J)[0]
            count += closed
            if not closed and len(maximal_elements(J)) == 1:
                violations.append((which, w))
        mc_count[which] = count
    witnesses = [_witness(code, w) for w in range(n)]
    uncovered = [w for w, wit in enumerate(witnesses) if wit is None]
    report = WeakCodeReport(image_size, injective, rank_ok, union_ok, violations, mc_count, uncovered,
                            [wit or (0, "") for wit in witnesses])
    if strict:
        if not report.condition1:
            raise ConditionFailure("condition 1 fails: a code is not an injective rank-preserving map")
        if violations:
            raise ConditionFailure("condition 2 fails", violations[0][1])
        if uncovered:
            raise ConditionFailure("condition 3 fails", uncovered[0])
    return report


@dataclass
class IntervalMulticomplex:
    element: int
    which: int
    automorphism: str
    points: frozenset
    maxima: list[tuple[int, ...]]
    f_polynomial: QPoly

    def to_dict(self, table: GroupTable) -> dict:
        return {
            "element": self.element,
            "word": table.word_str(self.element),
            "interval_size": len(self.points),
            "code": self.which,
            "automorphism": self.automorphism,
            "maxima": [list(m) for m in self.maxima],
            "f_polynomial": self.f_polynomial.to_json(),
            "f_polynomial_text": str(self.f_polynomial),
            "points": [list(p) for p in sorted(self.points, key=lambda p: (sum(p), p))],
        }


def multicomplex_for_interval(code: WeakCode, w: int) -> IntervalMulticomplex:
    """A multicomplex with f-polynomial ``h_w``: the first ``(i, phi)`` in the
    fixed order for which ``{L_i(phi(v)) : v <= w}`` is downward closed."""
    wit = _witness(code, w)
    if wit is None:
        raise ConditionFailure("no code/automorphism pair gives a multicomplex", w)
    which, name = wit
    pts = code.ideal_under(which, AUT_NAMES.index(name), w)
    maxima = sorted(maximal_elements(pts))
    return IntervalMulticomplex(w, which, name, pts, maxima, f_polynomial(pts))


# ---------------------------------------------------------------------------
# Principal and unimodal elements

def principal_elements(code: WeakCode, which: int) -> list[int]:
    """Elements whose code-image ideal has a single maximum."""
    return [w for w in range(code.table.size) if len(maximal_elements(code.ideal(which, w))) == 1]


def unimodal_elements(code: WeakCode, which: int, principal: list[int] | None = None) -> list[int]:
    """One principal element per ``(length, h_w)`` class, with least code value (lex)."""
    table = code.table
    L = code.code(which)
    if principal is None:
        principal = principal_elements(code, which)
    orbits: dict[tuple[int, QPoly], list[int]] = {}
    for w in principal:
        orbits.setdefault((int(table.length[w]), poincare_polynomial(table, w)), []).append(w)
    return sorted(min(o, key=lambda w: L[w]) for o in orbits.values())


def orbit_of(code: WeakCode, which: int, w: int) -> list[int]:
    """``{v principal : h_v = h_w}`` for principal ``w``."""
    table = code.table
    h = poincare_polynomial(table, w)
    return [v for v in principal_elements(code, which)
            if table.length[v] == table.length[w] and poincare_polynomial(table, v) == h]


def pal_set(table: GroupTable) -> set[QPoly]:
    """Distinct palindromic Poincare polynomials of lower intervals."""
    return {h for h in (poincare_polynomial(table, w) for w in range(table.size)) if is_palindromic(h)}


def bruhat_poset(table: GroupTable, elements) -> FinitePoset:
    els = sorted(elements)
    return FinitePoset.from_relation(els, table.leq, rank=lambda w: int(table.length[w]))


# ---------------------------------------------------------------------------
# The lattice of palindromic Poincare polynomials

@dataclass
class PalLattice:
    polynomials: set[QPoly]
    unimodal: list[int]
    principal: list[int]
    unimodal_image: set[tuple[int, ...]]
    sorted_image: set[tuple[int, ...]]
    sorted_poset: FinitePoset = field(repr=False)
    image_poset: FinitePoset = field(repr=False)
    sorted_report: LatticeReport = field(repr=False)
    image_report: LatticeReport = field(repr=False)
    principal_report: LatticeReport = field(repr=False)
    principal_top_report: LatticeReport = field(repr=False)
    bruhat_isomorphic: bool = True
    non_sublattice_meets: list[tuple] = field(default_factory=list)
    dot_sorted: str = field(default="", repr=False)
    dot_image: str = field(default="", repr=False)
    _codes: list = field(default_factory=list, repr=False)

    def to_dict(self, table: GroupTable) -> dict:
        tup = lambda xs: [list(x) for x in sorted(xs, key=lambda t: (sum(t), t))]
        return {
            "pal_size": len(self.polynomials),
            "unimodal_count": len(self.unimodal),
            "principal_count": len(self.principal),
            "unimodal": [{"word": table.word_str(w), "code": list(t)}
                         for w, t in zip(self.unimodal, self._codes)],
            "sorted_image": tup(self.sorted_image | {TOP_TUPLE}),
            "image": tup(self.unimodal_image | {TOP_TUPLE}),
            "sorted_lattice": self.sorted_report.to_dict(),
            "image_lattice": self.image_report.to_dict(),
            "principal_meet_semilattice": self.principal_report.is_meet_semilattice,
            "principal_with_top_lattice": self.principal_top_report.is_lattice,
            "bruhat_isomorphic_to_image": self.bruhat_isomorphic,
            "non_sublattice_meets": [[list(a), list(b), list(m), list(c)] for a, b, m, c in self.non_sublattice_meets],
            "polynomials": [p.to_json() for p in sorted(self.polynomials)],
        }


def build_pal_lattice(code: WeakCode, strict: bool = True) -> PalLattice:
    """Unimodal elements of ``L1`` and the two tuple posets built from them.

    Checks: ``|Pal| = |U(L1)| + 1``; the sorted image (with the top tuple) is a
    distributive lattice; the image is a lattice order-isomorphic via ``L1`` to
    Bruhat order on ``U(L1) + {w0}``; ``Pr(L1)`` is a meet-semilattice and
    ``Pr(L1) + {w0}`` a lattice; the products of q-analogues read from the
    sorted tuples are exactly ``Pal``.  ``strict`` raises
    :class:`StructureFailure` on the first failed check.
    """
    table = code.table
    L1 = code.L1
    pal = pal_set(table)
    principal = principal_elements(code, 1)
    unimodal = unimodal_elements(code, 1, principal)
    image = {L1[w] for w in unimodal}
    sorted_image = {sort_tuple(L1[w]) for w in unimodal}
    sorted_poset = FinitePoset.componentwise(sorted_image | {TOP_TUPLE})
    image_poset = FinitePoset.componentwise(image | {TOP_TUPLE})
    sorted_report = lattice_report(sorted_poset)
    image_report = lattice_report(image_poset)

    # L1 (with w0 -> top tuple) against Bruhat order on U(L1) + {w0}
    label = {w: L1[w] for w in unimodal}
    label[table.w0] = TOP_TUPLE
    nodes = unimodal + [table.w0]
    iso = all(table.leq(a, b) == componentwise_leq(label[a], label[b]) for a in nodes for b in nodes)

    principal_report = lattice_report(bruhat_poset(table, principal), check_distributive=False)
    principal_top_report = lattice_report(bruhat_poset(table, set(principal) | {table.w0}), check_distributive=False)

    non_sub = []
    els = image_poset.elements
    for i, a in enumerate(els):
        for b in els[i + 1:]:
            m = lattice_meet(image_poset, a, b)
            c = componentwise_meet(a, b)
            if m != c:
                non_sub.append((a, b, m, c))

    lat = PalLattice(
        polynomials=pal,
        unimodal=unimodal,
        principal=principal,
        unimodal_image=image,
        sorted_image=sorted_image,
        sorted_poset=sorted_poset,
        image_poset=image_poset,
        sorted_report=sorted_report,
        image_report=image_report,
        principal_report=principal_report,
        principal_top_report=principal_top_report,
        bruhat_isomorphic=iso,
        non_sublattice_meets=non_sub,
        dot_sorted=to_dot(sorted_poset, "pal_sorted"),
        dot_image=to_dot(image_poset, "pal_unimodal"),
        _codes=[L1[w] for w in unimodal],
    )
    if strict:
        _check_pal(lat, table)
    return lat


def _check_pal(lat: PalLattice, table: GroupTable) -> None:
    if len(lat.polynomials) != len(lat.unimodal) + 1:
        raise StructureFailure(f"|Pal| = {len(lat.polynomials)} but |U(L1)| + 1 = {len(lat.unimodal) + 1}")
    if not (lat.sorted_report.is_lattice and lat.sorted_report.is_distributive):
        raise StructureFailure("sorted image is not a distributive lattice")
    if not lat.image_report.is_lattice:
        raise StructureFailure("image of U(L1) with the top tuple is not a lattice")
    if not lat.bruhat_isomorphic:
        raise StructureFailure("L1 is not an order isomorphism from U(L1) + {w0}")
    if not lat.principal_report.is_meet_semilattice:
        raise StructureFailure("Pr(L1) is not a meet-semilattice")
    if not lat.principal_top_report.is_lattice:
        raise StructureFailure("Pr(L1) + {w0} is not a lattice")
    from_tuples = {q_analog_product(x + 1 for x in t) for t in lat.sorted_image}
    from_tuples.add(poincare_polynomial(table, table.w0))
    if from_tuples != lat.polynomials or len(lat.sorted_image) != len(lat.unimodal):
        raise StructureFailure("products of q-analogues do not biject onto Pal")
