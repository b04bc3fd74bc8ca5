"""Exact arithmetic in the om-space of polynomials over an infinitesimal.

A point is a finite sum ``c1*d^q1 + c2*d^q2 + ...`` with integer coefficients
and rational exponents, where ``d`` stands for a positive infinitesimal.  The
order of magnitude of the distance between two points is the power of ``d``
carrying the smallest exponent in their difference.  Smaller exponents are
*larger* orders of magnitude: ``d^6 << d^4``.

Rational exponents make the set of orders of magnitude dense, and negative
exponents make it unbounded above.  Nothing in this module touches floating
point.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

Rational = Union[int, Fraction]


class DegenerateScale(ValueError):
    """Raised when asked for several distinct points at the zero scale."""


class Cmp(enum.Enum):
    MUCH_LESS = -1
    EQUAL = 0
    MUCH_GREATER = 1


@dataclass(frozen=True)
class Om:
    """An order of magnitude: ZERO, or ``d**exp``."""

    exp: Optional[Fraction] = None

    @classmethod
    def zero(cls) -> "Om":
        return cls(None)

    @classmethod
    def power(cls, q: Rational) -> "Om":
        return cls(Fraction(q))

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    def __lt__(self, other: "Om") -> bool:
        return om_cmp(self, other) is Cmp.MUCH_LESS

    def __le__(self, other: "Om") -> bool:
        return om_cmp(self, other) is not Cmp.MUCH_GREATER

    def __gt__(self, other: "Om") -> bool:
        return om_cmp(self, other) is Cmp.MUCH_GREATER

    def __ge__(self, other: "Om") -> bool:
        return om_cmp(self, other) is not Cmp.MUCH_LESS

    def __str__(self) -> str:
        if self.exp is None:
            return "0"
        return _monomial_text(self.exp)

    def __repr__(self) -> str:
        return f"Om({self})"


ZERO = Om.zero()


def om_cmp(d: Om, e: Om) -> Cmp:
    """Compare two orders of magnitude; ZERO is below everything else."""
    if d.exp is None or e.exp is None:
        if d.exp is None and e.exp is None:
            return Cmp.EQUAL
        return Cmp.MUCH_LESS if d.exp is None else Cmp.MUCH_GREATER
    if d.exp == e.exp:
        return Cmp.EQUAL
    # larger exponent of an infinitesimal means a smaller quantity
    return Cmp.MUCH_LESS if d.exp > e.exp else Cmp.MUCH_GREATER


class OmPoint:
    """Immutable polynomial in ``d`` with integer coefficients.

    Stored canonically as a tuple of ``(exponent, coefficient)`` pairs sorted
    by exponent with no zero coefficients, so structural equality is point
    equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[Rational, int], Iterable[tuple]] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[Fraction, int] = {}
        for q, c in items:
            if not isinstance(c, int):
                raise TypeError(f"coefficients must be integers, got {c!r}")
            q = Fraction(q)
            acc[q] = acc.get(q, 0) + c
        self._terms = tuple(sorted((q, c) for q, c in acc.items() if c != 0))
        self._hash = hash(self._terms)

    @classmethod
    def constant(cls, c: int) -> "OmPoint":
        return cls({0: c})

    @classmethod
    def monomial(cls, q: Rational, c: int = 1) -> "OmPoint":
        return cls({q: c})

    @property
    def terms(self) -> tuple:
        return self._terms

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self._terms)

    def leading(self) -> Optional[tuple]:
        """The ``(exponent, coefficient)`` of the dominant term, or None for 0."""
        return self._terms[0] if self._terms else None

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OmPoint):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "OmPoint") -> "OmPoint":
        return OmPoint(self._terms + other._terms)

    def __neg__(self) -> "OmPoint":
        return OmPoint((q, -c) for q, c in self._terms)

    def __sub__(self, other: "OmPoint") -> "OmPoint":
        return OmPoint(self._terms + tuple((q, -c) for q, c in other._terms))

    def __mul__(self, k: int) -> "OmPoint":
        if not isinstance(k, int):
            return NotImplemented
        return OmPoint((q, c * k) for q, c in self._terms)

    __rmul__ = __mul__

    def shift(self, q: Rational, c: int = 1) -> "OmPoint":
        """Return ``self + c*d^q``."""
        return OmPoint(self._terms + ((Fraction(q), c),))

    # points lie on a line: ``a < b`` iff the dominant term of b - a is positive
    def __lt__(self, other: "OmPoint") -> bool:
        lead = (other - self).leading()
        return lead is not None and lead[1] > 0

    def __le__(self, other: "OmPoint") -> bool:
        return self == other or self < other

    def __gt__(self, other: "OmPoint") -> bool:
        return other < self

    def __ge__(self, other: "OmPoint") -> bool:
        return other <= self

    def __str__(self) -> str:
        return format_point(self)

    def __repr__(self) -> str:
        return f"OmPoint({format_point(self)!r})"


ORIGIN = OmPoint()


def od(a: OmPoint, b: OmPoint) -> Om:
    """Order of magnitude of the distance between two points."""
    lead = (a - b).leading()
    return ZERO if lead is None else Om(lead[0])


def much_closer(a: OmPoint, b: OmPoint, c: OmPoint, d: OmPoint) -> bool:
    return od(a, b) < od(c, d)


def points_at_scale(base: OmPoint, d: Om, k: int) -> list[OmPoint]:
    """``k`` points, starting at ``base``, pairwise separated by exactly ``d``.

    The i-th point is ``base + i*d``; differences are integer multiples of
    the monomial, so every pair sits at order of magnitude ``d``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if d.is_zero:
        if k > 1:
            raise DegenerateScale("cannot place distinct points at scale ZERO")
        return [base]
    return [base.shift(d.exp, i) if i else base for i in range(k)]


# -- text form ---------------------------------------------------------------

def _exp_text(q: Fraction) -> str:
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({q})"


def _monomial_text(q: Fraction) -> str:
    if q == 0:
        return "1"
    if q == 1:
        return "d"
    return f"d^{_exp_text(q)}"


def format_point(p: OmPoint) -> str:
    """Render e.g. ``1 - 5*d^2 + 4*d^4``; rational exponents as ``d^(3/2)``."""
    if not p.terms:
        return "0"
    parts = []
    for i, (q, c) in enumerate(p.terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if q == 0:
            body = str(mag)
        elif mag == 1:
            body = _monomial_text(q)
        else:
            body = f"{mag}*{_monomial_text(q)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<coef>\d+)(?:\s*\*\s*(?P<d1>d)(?:\s*\^\s*(?P<e1>\d+|\(\s*-?\d+(?:\s*/\s*\d+)?\s*\)))?)?
        | (?P<d2>d)(?:\s*\^\s*(?P<e2>\d+|\(\s*-?\d+(?:\s*/\s*\d+)?\s*\)))?
        )\s*""",
    re.VERBOSE,
)


def parse_point(text: str) -> OmPoint:
    """Inverse of :func:`format_point`."""
    pos = 0
    terms = []
    first = True
    text = text.strip()
    if not text:
        raise ValueError("empty point")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("d2") is None):
            raise ValueError(f"cannot parse point at column {pos + 1}: {text!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator at column {pos + 1}: {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("coef") is not None:
            coef = int(m.group("coef"))
            has_d, e = m.group("d1"), m.group("e1")
        else:
            coef = 1
            has_d, e = m.group("d2"), m.group("e2")
        if has_d is None:
            q = Fraction(0)
        elif e is None:
            q = Fraction(1)
        else:
            q = Fraction(e.strip("() ").replace(" ", ""))
        terms.append((q, sign * coef))
        pos = m.end()
        first = False
    return OmPoint(terms)
