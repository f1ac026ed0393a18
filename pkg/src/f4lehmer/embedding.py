"""
Cover-preserving embeddings of graded posets into Bruhat order.

The search places source elements rank by rank.  For a source element ``x``
the admissible images are the unused target elements of rank ``rho(x)`` that
cover the image of every lower cover of ``x``; all of these sets are Python-int
bitsets, so one candidate set is a handful of ANDs.  Within a rank the element
with the fewest remaining candidates is placed first.

On top of the search sit the non-existence argument for F4 (rank-6 embeddings
that cannot be pushed to rank 7) and a positive search for full codes.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .coxeter import AUT_NAMES, GroupTable, aut_group, coxeter_matrix
from .posets import FinitePoset, box, rho, truncate_by_rank
from .qpoly import QPoly

__all__ = [
    "EmbeddingMap",
    "ObstructionFamily",
    "OrbitClass",
    "NonexistenceCertificate",
    "CertificateFailure",
    "ShapeMismatch",
    "enumerate_embeddings",
    "iter_embeddings",
    "reduce_by_automorphism",
    "obstruction_families",
    "check_extension",
    "admissible_images",
    "HallObstruction",
    "hall_obstruction",
    "single_family_obstruction",
    "prove_no_lehmer_code",
    "verify_certificate",
    "search_full_lehmer_code",
    "count_full_lehmer_codes",
    "embeddings_to_json",
    "F4_CAPS",
]

F4_CAPS = (1, 5, 7, 11)
CERT_FORMAT = "f4lehmer.nonexistence-certificate"
CERT_VERSION = 1


class CertificateFailure(RuntimeError):
    """A representative embedding survived every obstruction family."""


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingMap:
    """Injective map from ``source`` into a group table.

    ``assignment[i]`` is the image of ``source.elements[i]``.
    """

    source: FinitePoset = field(repr=False, compare=False)
    assignment: tuple[int, ...]
    target_tag: str = ""

    def __call__(self, x) -> int:
        return self.assignment[self.source.index[tuple(x)]]

    def as_dict(self) -> dict:
        return dict(zip(self.source.elements, self.assignment))

    def inverse(self) -> dict[int, tuple]:
        return {w: x for x, w in zip(self.source.elements, self.assignment)}

    def violations(self, table: GroupTable) -> list[str]:
        """Independent post-hoc check of injectivity, rank and cover preservation."""
        out = []
        if len(set(self.assignment)) != len(self.assignment):
            out.append("not injective")
        src = self.source
        for i, x in enumerate(src.elements):
            w = self.assignment[i]
            if rho(x) != int(table.length[w]):
                out.append(f"rank of {x} not preserved")
            for j in src.lower_cover_ids(i):
                if self.assignment[j] not in table.lower_covers[w]:
                    out.append(f"cover {src.elements[j]} < {x} not sent to a Bruhat cover")
        return out


# ---------------------------------------------------------------------------
# Search

class _Search:
    def __init__(self, source: FinitePoset, table: GroupTable, priority: Sequence[int] | None = None):
        if source.rank is None:
            raise ValueError("source poset must be graded")
        n = len(source)
        self.n = n
        self.lower = [source.lower_cover_ids(i) for i in range(n)]
        self.up_bits = [_bitset(table.upper_covers[w]) for w in range(table.size)]
        self.layer_bits = [_bitset(layer) for layer in table.layers]
        prio = list(range(n)) if priority is None else list(priority)
        if sorted(prio) != list(range(n)):
            raise ValueError("priority must be a permutation of the source indices")
        by_rank: dict[int, list[int]] = {}
        for i in prio:
            by_rank.setdefault(source.rank[i], []).append(i)
        self.ranks = sorted(by_rank)
        self.by_rank = by_rank
        self.assign = [-1] * n
        self.nodes = 0

    def run(self) -> Iterator[tuple[int, ...]]:
        return self._rank_step(0, 0)

    def _rank_step(self, ri: int, used: int):
        if ri == len(self.ranks):
            yield tuple(self.assign)
            return
        r = self.ranks[ri]
        if r >= len(self.layer_bits):
            return
        layer = self.layer_bits[r] & ~used
        base = {}
        for x in self.by_rank[r]:
            c = layer
            for y in self.lower[x]:
                c &= self.up_bits[self.assign[y]]
            if not c:
                return
            base[x] = c
        yield from self._place(ri, self.by_rank[r], base, used)

    def _place(self, ri, todo, base, used):
        self.nodes += 1
        if not todo:
            yield from self._rank_step(ri + 1, used)
            return
        best, best_c, best_n = None, 0, sys.maxsize
        for x in todo:
            c = base[x] & ~used
            k = c.bit_count()
            if k < best_n:
                best, best_c, best_n = x, c, k
                if k == 0:
                    return
        rest = [x for x in todo if x != best]
        c = best_c
        while c:
            low = c & -c
            c ^= low
            self.assign[best] = low.bit_length() - 1
            yield from self._place(ri, rest, base, used | low)
        self.assign[best] = -1


def _bitset(ids) -> int:
    b = 0
    for i in ids:
        b |= 1 << int(i)
    return b


def _tag(table: GroupTable) -> str:
    for name in ("A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "G2", "H3", "H4"):
        if table.coxeter_matrix == coxeter_matrix(name):
            return name
    return "custom"


def iter_embeddings(source: FinitePoset, target: GroupTable,
                    priority: Sequence[int] | None = None) -> Iterator[EmbeddingMap]:
    """Lazily yield cover-preserving, rank-preserving injections (search order)."""
    tag = _tag(target)
    for a in _Search(source, target, priority).run():
        yield EmbeddingMap(source, a, tag)


def enumerate_embeddings(source: FinitePoset, target: GroupTable, max_rank: int | None = None,
                         priority: Sequence[int] | None = None) -> list[EmbeddingMap]:
    """All injections of ``source`` (truncated to ranks ``<= max_rank``) that
    send covers to Bruhat covers, sorted by assignment vector."""
    if max_rank is not None:
        source = truncate_by_rank(source, max_rank)
    found = sorted(_Search(source, target, priority).run())
    tag = _tag(target)
    return [EmbeddingMap(source, a, tag) for a in found]


@dataclass
class OrbitClass:
    representative: EmbeddingMap
    members: list[int]  # indices into the input list
    size: int


def reduce_by_automorphism(embeddings: Sequence[EmbeddingMap], auts: Sequence[np.ndarray]) -> list[OrbitClass]:
    """One class per orbit of ``E -> phi o E``; representative is the least assignment."""
    position = {e.assignment: i for i, e in enumerate(embeddings)}
    seen: set[int] = set()
    classes = []
    for i, e in enumerate(embeddings):
        if i in seen:
            continue
        orbit = {tuple(int(phi[w]) for w in e.assignment) for phi in auts}
        members = sorted(position[a] for a in orbit if a in position)
        seen.update(members)
        rep = min(orbit)
        source = e.source
        classes.append(OrbitClass(EmbeddingMap(source, rep, e.target_tag), members, len(orbit)))
    classes.sort(key=lambda c: c.representative.assignment)
    return classes


# ---------------------------------------------------------------------------
# Obstruction to extending one rank up

@dataclass(frozen=True)
class ObstructionFamily:
    top: tuple[int, ...]
    coatoms: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"top": list(self.top), "coatoms": [list(c) for c in self.coatoms]}


def obstruction_families(C: FinitePoset, rank: int = 7) -> list[ObstructionFamily]:
    """For each element of the given rank, its lower covers inside ``C``."""
    out = []
    for i, x in enumerate(C.elements):
        if C.rank[i] == rank:
            cs = tuple(sorted(C.elements[j] for j in C.lower_cover_ids(i)))
            out.append(ObstructionFamily(x, cs))
    return out


def check_extension(E: EmbeddingMap, fam: ObstructionFamily, target: GroupTable) -> int | None:
    """Least-id element one rank above the coatoms dominating all their images,
    or ``None``.  Scans the whole layer."""
    adm = admissible_images(E, fam, target)
    return adm[0] if adm else None


def admissible_images(E: EmbeddingMap, fam: ObstructionFamily, target: GroupTable) -> list[int]:
    """Every element of rank ``rho(fam.top)`` above all coatom images."""
    images = [E(c) for c in fam.coatoms]
    r = rho(fam.top)
    if r >= len(target.layers):
        return []
    return [w for w in target.layers[r] if all(target.leq(v, w) for v in images)]


@dataclass(frozen=True)
class HallObstruction:
    """Families whose admissible images are too few to be assigned injectively."""

    families: tuple[ObstructionFamily, ...]
    admissible: tuple[int, ...]

    def to_json(self) -> dict:
        return {"families": [f.to_json() for f in self.families], "admissible": list(self.admissible)}


def hall_obstruction(E: EmbeddingMap, families: Sequence[ObstructionFamily],
                     target: GroupTable) -> HallObstruction | None:
    """A Hall-condition violator among ``families``, or ``None`` if every family
    can be given its own admissible image (i.e. ``E`` extends one rank up)."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    opts = [admissible_images(E, f, target) for f in families]
    cols = sorted(set().union(*map(set, opts)))
    col_of = {w: j for j, w in enumerate(cols)}
    rows_idx = [i for i, o in enumerate(opts) for _ in o]
    cols_idx = [col_of[w] for o in opts for w in o]
    if any(not o for o in opts):
        i = next(i for i, o in enumerate(opts) if not o)
        return HallObstruction((families[i],), ())
    graph = csr_matrix(([1] * len(rows_idx), (rows_idx, cols_idx)), shape=(len(opts), len(cols)))
    row_match = maximum_bipartite_matching(graph, perm_type="column")
    if (row_match >= 0).all():
        return None
    col_match = {int(c): r for r, c in enumerate(row_match) if c >= 0}
    # rows reachable from an unmatched row along alternating paths
    start = int(np.flatnonzero(row_match < 0)[0])
    rows, seen_cols = {start}, set()
    frontier = [start]
    while frontier:
        nxt = []
        for r in frontier:
            for w in opts[r]:
                c = col_of[w]
                if c not in seen_cols:
                    seen_cols.add(c)
                    m = col_match[c]
                    if m not in rows:
                        rows.add(m)
                        nxt.append(m)
        frontier = nxt
    fams = tuple(families[r] for r in sorted(rows))
    return HallObstruction(fams, tuple(sorted(cols[c] for c in seen_cols)))


@dataclass
class NonexistenceCertificate:
    """Per representative: an :class:`ObstructionFamily` with no dominating
    element, or (where none exists) a :class:`HallObstruction`."""

    group: str
    coxeter_matrix: tuple
    caps: tuple[int, ...]
    max_rank: int
    embedding_count: int
    classes: list[OrbitClass]
    witnesses: list[ObstructionFamily | HallObstruction]

    @property
    def family_witness_count(self) -> int:
        return sum(isinstance(w, ObstructionFamily) for w in self.witnesses)

    @property
    def hall_witness_count(self) -> int:
        return sum(isinstance(w, HallObstruction) for w in self.witnesses)

    def to_json(self, table: GroupTable) -> dict:
        reps = []
        for k, (cls, wit) in enumerate(zip(self.classes, self.witnesses)):
            E = cls.representative
            if isinstance(wit, ObstructionFamily):
                w = {"kind": "family", **wit.to_json(), "coatom_images": [E(c) for c in wit.coatoms]}
            else:
                w = {"kind": "hall", **wit.to_json()}
            reps.append({
                "id": k,
                "orbit_size": cls.size,
                "assignment": [[list(x), a, table.word_str(a)] for x, a in zip(E.source.elements, E.assignment)],
                "witness": w,
            })
        return {
            "format": CERT_FORMAT,
            "version": CERT_VERSION,
            "group": self.group,
            "coxeter_matrix": [list(r) for r in self.coxeter_matrix],
            "caps": list(self.caps),
            "max_rank": self.max_rank,
            "embedding_count": self.embedding_count,
            "representative_count": len(self.classes),
            "family_witness_count": self.family_witness_count,
            "hall_witness_count": self.hall_witness_count,
            "automorphisms": list(AUT_NAMES),
            "replay": (
                "For each representative: check the assignment is an injective, rank-preserving map "
                "sending covers of the truncated box to Bruhat covers. A 'family' witness is a box "
                "element of rank max_rank+1 with its lower covers; no element of length max_rank+1 lies "
                "above all their images. A 'hall' witness lists such families together with every element "
                "of length max_rank+1 above all coatom images of at least one of them; that list must be "
                "complete and shorter than the list of families. Optionally re-enumerate the embeddings "
                "and check each automorphism orbit has a listed representative."
            ),
            "representatives": reps,
        }


def prove_no_lehmer_code(target: GroupTable, caps: Sequence[int] = F4_CAPS, max_rank: int = 6) -> NonexistenceCertificate:
    """Enumerate rank-``<= max_rank`` embeddings, reduce by Aut, and show no
    class extends to rank ``max_rank + 1``.

    Each class first gets the least family (canonical order) whose coatom
    images have no common upper cover.  Classes where every single family is
    satisfiable get a Hall violator instead.  Raises
    :class:`CertificateFailure` if some class does extend.
    """
    C = box(caps)
    source = truncate_by_rank(C, max_rank)
    embeddings = enumerate_embeddings(source, target)
    auts = aut_group(target) if target.is_type_f4() else [np.arange(target.size)]
    classes = reduce_by_automorphism(embeddings, auts)
    families = obstruction_families(C, max_rank + 1)
    witnesses: list[ObstructionFamily | HallObstruction] = []
    survivors = []
    for k, cls in enumerate(classes):
        fam = single_family_obstruction(cls.representative, families, target)
        if fam is not None:
            witnesses.append(fam)
            continue
        hall = hall_obstruction(cls.representative, families, target)
        if hall is None:
            survivors.append(k)
        else:
            witnesses.append(hall)
    if survivors:
        raise CertificateFailure(
            f"{len(survivors)} of {len(classes)} representatives extend to rank {max_rank + 1} "
            f"(first: class {survivors[0]})"
        )
    return NonexistenceCertificate(_tag(target), target.coxeter_matrix, tuple(caps), max_rank,
                                   len(embeddings), classes, witnesses)


def single_family_obstruction(E: EmbeddingMap, families: Sequence[ObstructionFamily],
                              target: GroupTable) -> ObstructionFamily | None:
    for fam in families:
        if check_extension(E, fam, target) is None:
            return fam
    return None


def _check_family(C, fam_json, max_rank):
    top = tuple(fam_json["top"])
    coatoms = sorted(tuple(c) for c in fam_json["coatoms"])
    if top not in C or rho(top) != max_rank + 1:
        return None, f"witness top {top} is not of rank {max_rank + 1} in the box"
    if coatoms != sorted(C.lower_covers(top)):
        return None, f"coatoms are not the lower covers of {top}"
    return ObstructionFamily(top, tuple(coatoms)), None


def _verify_representative(rep: dict, C: FinitePoset, source: FinitePoset, max_rank: int,
                           table: GroupTable) -> tuple[EmbeddingMap | None, str | None]:
    pairs = rep["assignment"]
    if sorted(tuple(x) for x, _, _ in pairs) != sorted(source.elements):
        return None, "domain is not the truncated box"
    if any(not 0 <= int(w) < table.size or table.word_str(int(w)) != word for _, w, word in pairs):
        return None, "element id and word disagree"
    amap = {tuple(x): int(w) for x, w, _ in pairs}
    E = EmbeddingMap(source, tuple(amap[x] for x in source.elements))
    bad = E.violations(table)
    if bad:
        return None, bad[0]
    wit = rep["witness"]
    kind = wit.get("kind")
    if kind == "family":
        fam, err = _check_family(C, wit, max_rank)
        if err:
            return None, err
        if admissible_images(E, fam, table):
            return None, "coatom images have a common upper bound"
        return E, None
    if kind == "hall":
        fams = []
        for fj in wit["families"]:
            fam, err = _check_family(C, fj, max_rank)
            if err:
                return None, err
            fams.append(fam)
        adm = set()
        for fam in fams:
            adm.update(admissible_images(E, fam, table))
        if adm != set(wit["admissible"]):
            return None, "admissible set is not complete"
        if len(adm) >= len(set(fams)):
            return None, "families do not violate Hall's condition"
        return E, None
    return None, "unknown witness kind"


def verify_certificate(cert: dict, table: GroupTable, recheck_enumeration: bool = True) -> list[str]:
    """Replay a certificate (as parsed JSON) against a group table.

    Returns the list of problems found; empty means the certificate holds.
    """
    if cert.get("format") != CERT_FORMAT or cert.get("version") != CERT_VERSION:
        return ["unknown certificate format or version"]
    if [list(r) for r in table.coxeter_matrix] != cert["coxeter_matrix"]:
        return ["certificate was issued for a different Coxeter matrix"]
    max_rank = int(cert["max_rank"])
    C = box(tuple(cert["caps"]))
    source = truncate_by_rank(C, max_rank)
    problems = []
    reps = set()
    for rep in cert["representatives"]:
        E, err = _verify_representative(rep, C, source, max_rank, table)
        if err:
            problems.append(f"representative {rep['id']}: {err}")
        else:
            reps.add(E.assignment)
    if recheck_enumeration and not problems:
        embeddings = enumerate_embeddings(source, table)
        if len(embeddings) != cert["embedding_count"]:
            problems.append("embedding count differs from re-enumeration")
        auts = aut_group(table) if table.is_type_f4() else [np.arange(table.size)]
        for e in embeddings:
            if not any(tuple(int(phi[w]) for w in e.assignment) in reps for phi in auts):
                problems.append("an embedding orbit has no listed representative")
                break
    return problems


def embeddings_to_json(embeddings: Sequence[EmbeddingMap], table: GroupTable) -> list:
    return [
        [[list(x), w, table.word_str(w)] for x, w in zip(e.source.elements, e.assignment)]
        for e in embeddings
    ]


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# Full codes

def search_full_lehmer_code(target: GroupTable, caps: Sequence[int]) -> EmbeddingMap | None:
    """First bijection ``box(caps) -> W`` sending covers to Bruhat covers, or ``None``.

    A rank-preserving bijection whose inverse is order-preserving is exactly a
    map of this kind, since covers generate the order of a product of chains.
    """
    source = box(caps)
    src_gf = QPoly.from_degrees(source.rank)
    tgt_gf = QPoly.from_degrees(int(x) for x in target.length)
    if len(source) != target.size or src_gf != tgt_gf:
        raise ShapeMismatch(f"box {tuple(caps)} does not match the group's rank generating function")
    for e in iter_embeddings(source, target):
        return e
    return None


def count_full_lehmer_codes(target: GroupTable, caps: Sequence[int]) -> int:
    source = box(caps)
    if len(source) != target.size:
        raise ShapeMismatch("box size differs from group order")
    return sum(1 for _ in _Search(source, target).run())
