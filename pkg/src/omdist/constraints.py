"""Constraint vocabulary: edges, strict/weak distance comparisons, point order."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Union


class Edge(NamedTuple):
    """Unordered pair of symbols, stored with ``a <= b``."""

    a: str
    b: str

    @classmethod
    def of(cls, a: str, b: str) -> "Edge":
        return cls(a, b) if a <= b else cls(b, a)

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    def __str__(self) -> str:
        return f"{self.a},{self.b}"


class StrictConstraint(NamedTuple):
    """``od(short) << od(long)``."""

    short: Edge
    long: Edge

    def __str__(self) -> str:
        return f"closer({self.short.a},{self.short.b} ; {self.long.a},{self.long.b})"


class WeakConstraint(NamedTuple):
    """``od(short) <= od(long)``."""

    short: Edge
    long: Edge

    def __str__(self) -> str:
        return f"leq({self.short.a},{self.short.b} ; {self.long.a},{self.long.b})"


class OrderConstraint(NamedTuple):
    """``before < after`` on a line."""

    before: str
    after: str

    def __str__(self) -> str:
        return f"before({self.before}, {self.after})"


Constraint = Union[StrictConstraint, WeakConstraint, OrderConstraint]


def closer(a: str, b: str, c: str, d: str) -> StrictConstraint:
    return StrictConstraint(Edge.of(a, b), Edge.of(c, d))


def leq(a: str, b: str, c: str, d: str) -> WeakConstraint:
    return WeakConstraint(Edge.of(a, b), Edge.of(c, d))


def before(a: str, b: str) -> OrderConstraint:
    return OrderConstraint(a, b)


def constraint_symbols(c: Constraint) -> tuple:
    if isinstance(c, OrderConstraint):
        return (c.before, c.after)
    return (c.short.a, c.short.b, c.long.a, c.long.b)


@dataclass(frozen=True)
class ConstraintSet:
    """A system of strict, weak and order constraints over a symbol universe.

    ``declared`` holds symbols that take part without being constrained; the
    universe is the union of those and every symbol a constraint mentions.
    """

    strict: tuple = ()
    weak: tuple = ()
    order: tuple = ()
    declared: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, *constraints: Constraint, symbols: Iterable[str] = ()) -> "ConstraintSet":
        strict, weak, order = [], [], []
        for c in constraints:
            if isinstance(c, StrictConstraint):
                strict.append(c)
            elif isinstance(c, WeakConstraint):
                weak.append(c)
            elif isinstance(c, OrderConstraint):
                order.append(c)
            else:
                raise TypeError(f"not a constraint: {c!r}")
        return cls(tuple(strict), tuple(weak), tuple(order), frozenset(symbols))

    def __post_init__(self):
        # callers pass lists freely; keep the dataclass hashable
        for name in ("strict", "weak", "order"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))
        if not isinstance(self.declared, frozenset):
            object.__setattr__(self, "declared", frozenset(self.declared))

    @property
    def symbols(self) -> tuple:
        """Sorted symbol universe."""
        syms = set(self.declared)
        for c in self.strict:
            syms.update((c.short.a, c.short.b, c.long.a, c.long.b))
        for c in self.weak:
            syms.update((c.short.a, c.short.b, c.long.a, c.long.b))
        for c in self.order:
            syms.update((c.before, c.after))
        return tuple(sorted(syms))

    @property
    def edges(self) -> frozenset:
        """Non-degenerate edges mentioned by strict and weak constraints."""
        out = set()
        for c in self.strict + self.weak:
            for e in (c.short, c.long):
                if not e.degenerate:
                    out.add(e)
        return frozenset(out)

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def s(self) -> int:
        return len(self.strict)

    @property
    def w(self) -> int:
        return len(self.weak)

    @property
    def o(self) -> int:
        return len(self.order)

    def __iter__(self):
        yield from self.strict
        yield from self.weak
        yield from self.order

    def __len__(self) -> int:
        return len(self.strict) + len(self.weak) + len(self.order)

    def with_constraints(self, *extra: Constraint) -> "ConstraintSet":
        more = ConstraintSet.of(*extra)
        return ConstraintSet(
            self.strict + more.strict,
            self.weak + more.weak,
            self.order + more.order,
            self.declared,
        )

    def with_symbols(self, symbols: Iterable[str]) -> "ConstraintSet":
        return ConstraintSet(self.strict, self.weak, self.order, self.declared | frozenset(symbols))


def as_constraint_set(x: Union[ConstraintSet, Iterable[Constraint]]) -> ConstraintSet:
    if isinstance(x, ConstraintSet):
        return x
    return ConstraintSet.of(*x)
