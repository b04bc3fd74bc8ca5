"""Entailment and equivalence by refutation.

A system entails a comparison exactly when adding its negation makes the
system inconsistent.  The negation of ``od(a,b) << od(c,d)`` is
``od(c,d) <= od(a,b)`` and vice versa, so the refuted system is always one
the weak-comparison solver accepts.
"""

from __future__ import annotations

from typing import Iterable, Union

from .constraints import (
    Constraint,
    ConstraintSet,
    Edge,
    OrderConstraint,
    StrictConstraint,
    WeakConstraint,
    as_constraint_set,
)
from .solver import solve_mixed


def negate(c: Union[StrictConstraint, WeakConstraint]) -> Union[StrictConstraint, WeakConstraint]:
    if isinstance(c, StrictConstraint):
        return WeakConstraint(c.long, c.short)
    if isinstance(c, WeakConstraint):
        return StrictConstraint(c.long, c.short)
    raise TypeError(f"cannot negate {c!r}")


def _system(strict, weak=()) -> ConstraintSet:
    if isinstance(strict, ConstraintSet):
        cs = strict
        return ConstraintSet(cs.strict, cs.weak + tuple(weak), cs.order, cs.declared)
    return as_constraint_set(list(strict) + list(weak))


def consistent(system: ConstraintSet) -> bool:
    return solve_mixed(system) is not None


def entails(strict, weak: Iterable[WeakConstraint] = (), c: Constraint = None) -> bool:
    """Whether the system ``strict`` (plus ``weak``) entails ``c``.

    ``strict`` may also be a full :class:`ConstraintSet`, in which case its
    weak and order constraints take part too.  An inconsistent system
    entails everything.  Order queries go through :func:`entails_order`.
    """
    if c is None:
        raise TypeError("entails() needs a query constraint")
    cs = _system(strict, weak)
    if isinstance(c, OrderConstraint):
        return entails_order(cs, c)
    return not consistent(cs.with_constraints(negate(c)))


def entails_order(system, c: OrderConstraint) -> bool:
    """Whether ``c.before < c.after`` holds in every solution.

    The complement of ``a < b`` is ``b < a`` or ``a = b``.  The first is an
    order constraint; the second is ``od(a,b) <= od(a,a)``.  Both must be
    refuted.
    """
    cs = as_constraint_set(system)
    a, b = c.before, c.after
    if a == b:
        return not consistent(cs)
    if consistent(cs.with_constraints(OrderConstraint(b, a))):
        return False
    return not consistent(cs.with_constraints(WeakConstraint(Edge.of(a, b), Edge(a, a))))


def equivalent(s1, w1=(), s2=(), w2=()) -> bool:
    """Mutual entailment, constraint by constraint.

    Accepts either four sequences ``(S1, W1, S2, W2)`` or two
    :class:`ConstraintSet` values as ``equivalent(cs1, cs2)``.
    """
    if isinstance(s1, ConstraintSet) and isinstance(w1, ConstraintSet):
        first, second = s1, w1
    else:
        first, second = _system(s1, w1), _system(s2, w2)
    universe = frozenset(first.symbols) | frozenset(second.symbols)
    first, second = first.with_symbols(universe), second.with_symbols(universe)
    return all(entails(second, (), c) for c in first) and all(entails(first, (), c) for c in second)
