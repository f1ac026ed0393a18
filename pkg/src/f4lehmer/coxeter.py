"""
Finite Coxeter groups as explicit tables.

A group is enumerated breadth-first through an exact integral action on
simple-root coordinates.  Entries of the Cartan-type matrix live in
``Z[phi]`` (``phi`` the golden ratio), stored as integer pairs ``(a, b)``
meaning ``a + b*phi``, so types with a label 5 (H3, H4) stay exact as well.

Elements are dense integer ids ordered by ``(length, lexicographically least
reduced word)``; generators are 0-based internally and 1-based in every
human-facing string.

>>> g = build_group(coxeter_matrix("A2"))
>>> g.size, int(g.length.max())
(6, 3)
>>> g.word_str(g.w0)
'1 2 1'
"""

from __future__ import annotations

import hashlib
import re
from collections.abc import Iterable, Sequence

import numpy as np

__all__ = [
    "EnumerationBound",
    "WrongType",
    "BadWord",
    "GroupTable",
    "coxeter_matrix",
    "build_group",
    "parabolic_decompose",
    "bruhat_leq",
    "reflections",
    "psi",
    "aut_group",
    "lower_interval",
    "parse_word",
    "bits_to_list",
    "AUT_NAMES",
]

DEFAULT_SIZE_LIMIT = 200_000


class EnumerationBound(RuntimeError):
    """The group grew past the configured size limit."""


class WrongType(ValueError):
    pass


class BadWord(ValueError):
    pass


# ---------------------------------------------------------------------------
# Coxeter matrices

def coxeter_matrix(name: str) -> tuple[tuple[int, ...], ...]:
    """Coxeter matrix for a named finite type: A_n, B_n, D_n, F4, G2, H3, H4, I2(m).

    Nodes are numbered along the Dynkin path, e.g. F4 is ``1 -3- 2 -4- 3 -3- 4``.
    """
    key = name.replace("_", "").replace(" ", "").upper()
    m = re.fullmatch(r"I2\((\d+)\)", key)
    if m:
        return _path_matrix([int(m.group(1))])
    m = re.fullmatch(r"([ABDFGH])(\d+)", key)
    if not m:
        raise WrongType(f"unknown Coxeter type {name!r}")
    letter, n = m.group(1), int(m.group(2))
    if letter == "A" and n >= 1:
        return _path_matrix([3] * (n - 1))
    if letter == "B" and n >= 2:
        return _path_matrix([4] + [3] * (n - 2))
    if letter == "D" and n >= 4:
        mat = [list(r) for r in _path_matrix([3] * (n - 2) + [2])]
        # branch node n-2 (0-based) is joined to both n-2 and n-1 ends
        mat[n - 3][n - 1] = mat[n - 1][n - 3] = 3
        return tuple(tuple(r) for r in mat)
    if letter == "F" and n == 4:
        return _path_matrix([3, 4, 3])
    if letter == "G" and n == 2:
        return _path_matrix([6])
    if letter == "H" and n in (3, 4):
        return _path_matrix([5] + [3] * (n - 2))
    raise WrongType(f"unknown Coxeter type {name!r}")


def _path_matrix(labels: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    k = len(labels) + 1
    mat = [[1 if i == j else 2 for j in range(k)] for i in range(k)]
    for i, lab in enumerate(labels):
        mat[i][i + 1] = mat[i + 1][i] = lab
    return tuple(tuple(r) for r in mat)


def validate_coxeter_matrix(mat: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    k = len(mat)
    if k == 0:
        raise ValueError("Coxeter matrix must be non-empty")
    out = tuple(tuple(int(x) for x in row) for row in mat)
    for i in range(k):
        if len(out[i]) != k:
            raise ValueError("Coxeter matrix must be square")
        if out[i][i] != 1:
            raise ValueError("diagonal of a Coxeter matrix must be 1")
        for j in range(k):
            if i != j and (out[i][j] != out[j][i] or not (out[i][j] >= 2 or out[i][j] == 0)):
                raise ValueError(f"bad off-diagonal entry m({i + 1},{j + 1})")
    return out


def matrix_hash(mat: Sequence[Sequence[int]]) -> bytes:
    text = ";".join(",".join(str(x) for x in row) for row in mat)
    return hashlib.sha256(text.encode()).digest()


# Cartan entries (A_ij, A_ji) in Z[phi] with A_ij * A_ji = 4 cos^2(pi/m).
# 0 encodes m = infinity.
_CARTAN = {
    2: ((0, 0), (0, 0)),
    3: ((-1, 0), (-1, 0)),
    4: ((-1, 0), (-2, 0)),
    5: ((0, -1), (0, -1)),
    6: ((-1, 0), (-3, 0)),
    0: ((-2, 0), (-2, 0)),
}


def cartan_matrix(mat: Sequence[Sequence[int]]) -> np.ndarray:
    """Integer array of shape (2, k, k): ``A = A[0] + phi * A[1]``."""
    k = len(mat)
    A = np.zeros((2, k, k), dtype=np.int64)
    for i in range(k):
        A[0, i, i] = 2
        for j in range(i + 1, k):
            m = mat[i][j]
            if m not in _CARTAN:
                raise WrongType(f"label m={m} has no exact representation here")
            (a, b), (c, d) = _CARTAN[m]
            A[:, i, j] = (a, b)
            A[:, j, i] = (c, d)
    return A


def _zphi_mul(a0, a1, b0, b1):
    # (a0 + a1 phi)(b0 + b1 phi), phi^2 = phi + 1
    return a0 * b0 + a1 * b1, a0 * b1 + a1 * b0 + a1 * b1


# ---------------------------------------------------------------------------
# Group table

class GroupTable:
    """Immutable multiplication/length/Bruhat table of a finite Coxeter group.

    Attributes
    ----------
    length, inverse : int arrays of shape (size,)
    right, left : int arrays of shape (size, rank); ``right[w, s] = w*s``
    words : lexicographically least reduced word of each element (0-based letters)
    lower_covers, upper_covers : tuples of sorted id tuples (Bruhat covers)
    below : Python-int bitsets; bit ``v`` of ``below[w]`` is set iff ``v <= w``
    """

    def __init__(self, coxeter_matrix, length, right, left, words, lower_covers=None):
        self.coxeter_matrix = tuple(tuple(r) for r in coxeter_matrix)
        self.rank = len(self.coxeter_matrix)
        self.length = np.asarray(length, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.left = np.asarray(left, dtype=np.int64)
        self.size = len(self.length)
        self.words = tuple(tuple(w) for w in words)
        self.identity = 0
        self.w0 = int(np.argmax(self.length))
        self._right_l = self.right.tolist()
        self._left_l = self.left.tolist()
        self.inverse = np.array([self.from_word(reversed(w)) for w in self.words], dtype=np.int64)
        self.reflections = self._reflections()
        if lower_covers is None:
            lower_covers = self._lower_covers()
        self.lower_covers = tuple(tuple(sorted(c)) for c in lower_covers)
        up = [[] for _ in range(self.size)]
        for w, cs in enumerate(self.lower_covers):
            for u in cs:
                up[u].append(w)
        self.upper_covers = tuple(tuple(c) for c in up)
        self.below = self._below()
        self.layers = tuple(
            tuple(int(w) for w in np.flatnonzero(self.length == r))
            for r in range(int(self.length.max()) + 1)
        )
        self._index = {w: i for i, w in enumerate(self.words)}

    # -- words and multiplication -------------------------------------------------
    def from_word(self, word: Iterable[int]) -> int:
        """Element of a 0-based generator word (need not be reduced)."""
        w = 0
        r = self._right_l
        for s in word:
            w = r[w][s]
        return w

    def from_word1(self, word: Iterable[int]) -> int:
        """Element of a 1-based generator word, as written in the literature."""
        out = []
        for s in word:
            s = int(s)
            if not 1 <= s <= self.rank:
                raise BadWord(f"generator index {s} outside 1..{self.rank}")
            out.append(s - 1)
        return self.from_word(out)

    def word1(self, w: int) -> tuple[int, ...]:
        return tuple(s + 1 for s in self.words[w])

    def word_str(self, w: int) -> str:
        return " ".join(str(s) for s in self.word1(w))

    def mul(self, u: int, v: int) -> int:
        r = self._right_l
        for s in self.words[v]:
            u = r[u][s]
        return u

    def inv(self, w: int) -> int:
        return int(self.inverse[w])

    def left_mul_word(self, word: Sequence[int], w: int) -> int:
        lf = self._left_l
        for s in reversed(word):
            w = lf[w][s]
        return w

    def leq(self, u: int, w: int) -> bool:
        return bool(self.below[w] >> u & 1)

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"GroupTable(rank={self.rank}, size={self.size})"

    # -- derived structure ---------------------------------------------------------
    def _reflections(self) -> tuple[int, ...]:
        out = set()
        for v in range(self.size):
            vinv = int(self.inverse[v])
            for s in range(self.rank):
                out.add(self.mul(self._right_l[v][s], vinv))
        return tuple(sorted(out))

    def _lower_covers(self):
        covers = []
        length = self.length.tolist()
        refl_words = [self.words[t] for t in self.reflections]
        for w in range(self.size):
            lw = length[w] - 1
            cs = set()
            for tw in refl_words:
                u = self.left_mul_word(tw, w)
                if length[u] == lw:
                    cs.add(u)
            covers.append(cs)
        return covers

    def _below(self) -> tuple[int, ...]:
        below = [0] * self.size
        # ids are length-sorted, so covers are always processed first
        for w in range(self.size):
            b = 1 << w
            for u in self.lower_covers[w]:
                b |= below[u]
            below[w] = b
        return tuple(below)

    def is_identical(self, other: "GroupTable") -> bool:
        return (
            self.coxeter_matrix == other.coxeter_matrix
            and np.array_equal(self.length, other.length)
            and np.array_equal(self.right, other.right)
            and np.array_equal(self.left, other.left)
            and self.lower_covers == other.lower_covers
        )

    def is_type_f4(self) -> bool:
        return self.coxeter_matrix == coxeter_matrix("F4")


def build_group(system, size_limit: int = DEFAULT_SIZE_LIMIT) -> GroupTable:
    """Enumerate the Coxeter group with the given matrix (or type name).

    Raises :class:`EnumerationBound` when more than ``size_limit`` elements
    appear, which is how infinite systems are detected.
    """
    mat = coxeter_matrix(system) if isinstance(system, str) else validate_coxeter_matrix(system)
    k = len(mat)
    A = cartan_matrix(mat)

    def right_act(key, s):
        # columns: w(alpha_j); w*s_s maps alpha_j to w(alpha_j) - A[s][j] w(alpha_s)
        M = np.array(key, dtype=np.int64).reshape(2, k, k)
        out = M.copy()
        c0, c1 = M[0, :, s], M[1, :, s]
        for j in range(k):
            a0, a1 = A[0, s, j], A[1, s, j]
            if a0 or a1:
                p0, p1 = _zphi_mul(a0, a1, c0, c1)
                out[0, :, j] -= p0
                out[1, :, j] -= p1
        return tuple(out.ravel().tolist())

    ident = np.zeros((2, k, k), dtype=np.int64)
    ident[0] = np.eye(k, dtype=np.int64)
    start = tuple(ident.ravel().tolist())
    index = {start: 0}
    keys = [start]
    length = [0]
    right: list[list[int]] = []
    frontier = [0]
    while frontier:
        nxt = []
        for w in frontier:
            row = []
            for s in range(k):
                key = right_act(keys[w], s)
                v = index.get(key)
                if v is None:
                    v = len(keys)
                    if v >= size_limit:
                        raise EnumerationBound(
                            f"group exceeds {size_limit} elements; not finite or bound too small"
                        )
                    index[key] = v
                    keys.append(key)
                    length.append(length[w] + 1)
                    nxt.append(v)
                row.append(v)
            right.append(row)
        frontier = nxt
    n = len(keys)
    right_arr = np.array(right, dtype=np.int64)

    # left multiplication: s*w = (w^{-1} s)^{-1}; get inverses from BFS parents
    parent = [None] * n
    for w in range(n):
        for s in range(k):
            v = right[w][s]
            if length[v] == length[w] + 1 and parent[v] is None:
                parent[v] = (w, s)
    bfs_word = [()] * n
    for w in range(1, n):
        p, s = parent[w]
        bfs_word[w] = bfs_word[p] + (s,)

    def from_word(word):
        w = 0
        for s in word:
            w = right[w][s]
        return w

    left = [[from_word((s,) + bfs_word[w]) for s in range(k)] for w in range(n)]

    # lexicographically least reduced word: smallest left descent, then recurse
    order = sorted(range(n), key=lambda w: length[w])
    lex = [()] * n
    for w in order[1:]:
        s = next(s for s in range(k) if length[left[w][s]] < length[w])
        lex[w] = (s,) + lex[left[w][s]]

    perm = sorted(range(n), key=lambda w: (length[w], lex[w]))
    new_id = [0] * n
    for i, w in enumerate(perm):
        new_id[w] = i
    relabel = np.array(new_id, dtype=np.int64)
    right_new = relabel[right_arr[perm]]
    left_new = relabel[np.array(left, dtype=np.int64)[perm]]
    return GroupTable(
        mat,
        [length[w] for w in perm],
        right_new,
        left_new,
        [lex[w] for w in perm],
    )


# ---------------------------------------------------------------------------
# Operations on a built table

def parabolic_decompose(table: GroupTable, w: int, J: Iterable[int]) -> tuple[int, int]:
    """Factor ``w = w_J * w^J`` with ``w_J`` in the subgroup generated by ``J``
    (0-based generators) and ``w^J`` free of left descents in ``J``."""
    J = tuple(J)
    wJ, rest = 0, w
    length = table.length
    moved = True
    while moved:
        moved = False
        for s in J:
            v = int(table.left[rest, s])
            if length[v] < length[rest]:
                rest = v
                wJ = int(table.right[wJ, s])
                moved = True
                break
    return wJ, rest


def bruhat_leq(table: GroupTable, u: int, w: int) -> bool:
    return table.leq(u, w)


def reflections(table: GroupTable) -> frozenset[int]:
    return frozenset(table.reflections)


def lower_interval(table: GroupTable, w: int) -> frozenset[int]:
    return frozenset(bits_to_list(table.below[w]))


def psi(table: GroupTable, w: int) -> int:
    """Diagram automorphism of F4 swapping s1<->s4 and s2<->s3."""
    if not table.is_type_f4():
        raise WrongType("psi is defined for type F4 only")
    return table.from_word(3 - s for s in table.words[w])


AUT_NAMES = ("id", "iota", "psi", "iota_psi")


def aut_group(table: GroupTable) -> list[np.ndarray]:
    """Bruhat-order automorphisms of F4 as id-permutations, in the order
    ``id, w -> w^-1, psi, w -> psi(w)^-1``."""
    if not table.is_type_f4():
        raise WrongType("the automorphism group is tabulated for type F4 only")
    ident = np.arange(table.size)
    inv = table.inverse.copy()
    ps = np.array([psi(table, w) for w in range(table.size)])
    return [ident, inv, ps, inv[ps]]


def bits_to_list(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def parse_word(text: str) -> list[int]:
    """Parse a whitespace-separated 1-based generator word such as ``"4 3 1 2"``."""
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise BadWord(f"not a generator word: {text!r}") from exc
