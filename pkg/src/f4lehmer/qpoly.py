"""Integer polynomials in ``q`` with dense coefficient lists."""

from __future__ import annotations

from collections.abc import Iterable

__all__ = [
    "QPoly",
    "ZeroPolynomial",
    "q_analog",
    "q_analog_product",
    "poincare_polynomial",
    "is_palindromic",
    "q_analog_factorization",
]

# coefficients here are bounded by group orders; stay well inside int64
_INT64_MAX = 2**63 - 1


class ZeroPolynomial(ValueError):
    pass


class QPoly:
    """Immutable polynomial ``sum c_i q^i`` with trailing zeros trimmed.

    >>> QPoly([1, 1]) * QPoly([1, 1])
    QPoly([1, 2, 1])
    >>> str(QPoly([1, 3, 6]))
    '1 + 3q + 6q^2'
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "QPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "QPoly":
        """Generating function ``sum q^d`` over a multiset of degrees."""
        c: list[int] = []
        for d in degrees:
            if d >= len(c):
                c.extend([0] * (d + 1 - len(c)))
            c[d] += 1
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, q: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * q + c
        return v

    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + QPoly([-x for x in other.coeffs])

    def __mul__(self, other: "QPoly") -> "QPoly":
        if isinstance(other, int):
            return QPoly([other * x for x in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        if any(abs(x) > _INT64_MAX for x in out):
            raise OverflowError("coefficient exceeds 64-bit range")
        return QPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        """Exact division by a monic divisor; returns ``(quotient, remainder)``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = other.degree
        quot = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - d - 1, -1, -1):
            c = rem[i + d]
            quot[i] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[i + j] -= c * y
        return QPoly(quot), QPoly(rem)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == QPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other: "QPoly") -> bool:
        # deterministic sort key only: by degree, then coefficients
        return (self.degree, self.coeffs) < (other.degree, other.coeffs)

    def __repr__(self):
        return f"QPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def q_analog(n: int) -> QPoly:
    """``[n]_q = 1 + q + ... + q^(n-1)``; ``[0]_q = 0``."""
    if n < 0:
        raise ValueError("q-analogue needs n >= 0")
    return QPoly([1] * n)


def q_analog_product(ns: Iterable[int]) -> QPoly:
    p = QPoly([1])
    for n in ns:
        p = p * q_analog(n)
    return p


def poincare_polynomial(table, w: int) -> QPoly:
    """``h_w = sum_{v <= w} q^{l(v)}`` over the lower Bruhat interval."""
    from .coxeter import bits_to_list

    return QPoly.from_degrees(int(table.length[v]) for v in bits_to_list(table.below[w]))


def is_palindromic(p: QPoly) -> bool:
    if p.is_zero():
        raise ZeroPolynomial("palindromicity of the zero polynomial is undefined")
    # a nonzero constant term is implied for Poincare polynomials; compare whole list
    return p.coeffs == p.coeffs[::-1]


def q_analog_factorization(p: QPoly) -> list[int] | None:
    """Greedy division by q-analogues, largest first.

    Returns ``[n_1, ..., n_r]`` (ascending, all ``>= 2``) with
    ``p = prod [n_i]_q``, or ``None`` if the greedy peeling gets stuck.
    Used to read exponents off a length generating function.
    """
    if p.is_zero():
        return None
    out = []
    cur = p
    while cur.degree > 0:
        for n in range(cur.degree + 1, 1, -1):
            quot, rem = cur.divmod(q_analog(n))
            if rem.is_zero():
                out.append(n)
                cur = quot
                break
        else:
            return None
    if cur.coeffs != (1,):
        return None
    return sorted(out)
