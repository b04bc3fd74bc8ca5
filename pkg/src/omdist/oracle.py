"""Brute-force ground truth for small systems.

Every cluster tree over at most six symbols is enumerated (tree shape
times a rank labelling), and a system is consistent exactly when one of
those trees satisfies it.  Nothing here calls the solver.

Order constraints are judged on a line: the children of a node are disjoint
intervals, so a node can realize its order requirements iff the arcs they
induce between its children are acyclic, and ``a < b`` further needs
``a`` and ``b`` to be distinct points (a non-zero lca label).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cluster_tree import TreeNode, iter_nodes, dist2
from .constraints import (
    ConstraintSet,
    StrictConstraint,
    WeakConstraint,
    as_constraint_set,
)

MAX_SYMBOLS = 6


class TooManySymbols(ValueError):
    pass


class InconsistentInput(ValueError):
    pass


def _set_partitions(items: tuple):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


@lru_cache(maxsize=None)
def _shapes(items: tuple) -> tuple:
    """Unlabelled hierarchies: nested tuples, leaves are symbols."""
    if len(items) == 1:
        return (items[0],)
    out = []
    for part in _set_partitions(items):
        if len(part) < 2:
            continue
        for combo in itertools.product(*(_shapes(tuple(sorted(b))) for b in part)):
            out.append(tuple(sorted(combo, key=_least)))
    return tuple(out)


def _least(shape) -> str:
    return shape if isinstance(shape, str) else min(_least(c) for c in shape)


def _labelings(shape):
    """All rank labellings of a shape's internal nodes, as lists in preorder."""
    internal = []
    parent = []
    bottom = []

    def walk(s, par):
        if isinstance(s, str):
            return
        me = len(internal)
        internal.append(s)
        parent.append(par)
        bottom.append(all(isinstance(c, str) for c in s))
        for c in s:
            walk(c, me)

    walk(shape, -1)
    m = len(internal)
    # label-0 nodes: any subset of the nodes with only leaf children
    zero_able = [i for i in range(m) if bottom[i]]
    for r in range(len(zero_able) + 1):
        for zeros in itertools.combinations(zero_able, r):
            zs = set(zeros)
            rest = [i for i in range(m) if i not in zs]
            for labels in _surjective_ranks(rest, parent, zs):
                lab = [0] * m
                for i, v in labels.items():
                    lab[i] = v
                yield lab


def _surjective_ranks(nodes, parent, zeros):
    """Maps nodes -> 1..k onto, with child < parent, for every k."""
    nodes = list(nodes)
    n = len(nodes)
    for k in range(1, n + 1) if n else [0]:
        if n == 0:
            yield {}
            return
        for vals in itertools.product(range(1, k + 1), repeat=n):
            if len(set(vals)) != k:
                continue
            lab = dict(zip(nodes, vals))
            if all(parent[i] < 0 or lab[i] < lab[parent[i]] for i in nodes):
                yield lab


def _build(shape, labels, counter) -> TreeNode:
    if isinstance(shape, str):
        return TreeNode.leaf(shape)
    me = counter[0]
    counter[0] += 1
    kids = [_build(c, labels, counter) for c in shape]
    return TreeNode.node(labels[me], kids)


def _check_size(symbols) -> tuple:
    symbols = tuple(sorted(set(symbols)))
    if len(symbols) > MAX_SYMBOLS:
        raise TooManySymbols(f"{len(symbols)} symbols; the oracle stops at {MAX_SYMBOLS}")
    if not symbols:
        raise ValueError("no symbols")
    return symbols


@lru_cache(maxsize=16)
def _enum(symbols: tuple) -> tuple:
    out = []
    for shape in _shapes(symbols):
        for lab in _labelings(shape):
            out.append(_build(shape, lab, [0]))
    return tuple(out)


def enum_trees(symbols: Iterable[str]) -> list:
    """Every cluster tree over ``symbols`` up to order-preserving relabelling.

    Labels are ranks ``0..k``; children are sorted by least symbol.
    """
    return list(_enum(_check_size(symbols)))


class TreeTable:
    """Lca labels of every enumerated tree, as an array ``[tree, i, j]``."""

    def __init__(self, symbols: Sequence[str]):
        self.symbols = _check_size(symbols)
        self.trees = _enum(self.symbols)
        self.pos = {s: i for i, s in enumerate(self.symbols)}
        n = len(self.symbols)
        table = np.zeros((len(self.trees), n, n), dtype=np.int8)
        for t, tree in enumerate(self.trees):
            for nd in iter_nodes(tree):
                if nd.is_leaf:
                    continue
                groups = [[self.pos[s] for s in c.symbols] for c in nd.children]
                for g, h in itertools.combinations(groups, 2):
                    ix = np.ix_(g, h)
                    table[t][ix] = nd.label
                    table[t][np.ix_(h, g)] = nd.label
        self.table = table

    def lca(self, a: str, b: str) -> np.ndarray:
        return self.table[:, self.pos[a], self.pos[b]]

    def mask(self, c) -> np.ndarray:
        """Trees satisfying a strict or weak constraint."""
        short = self.lca(*c.short)
        long = self.lca(*c.long)
        if isinstance(c, StrictConstraint):
            return short < long
        if isinstance(c, WeakConstraint):
            return short <= long
        raise TypeError(f"mask() takes strict or weak constraints, not {c!r}")

    def satisfying(self, cs: ConstraintSet) -> np.ndarray:
        ok = np.ones(len(self.trees), dtype=bool)
        for c in cs.strict + cs.weak:
            ok &= self.mask(c)
        if cs.order:
            for t in np.flatnonzero(ok):
                ok[t] = _order_ok(self.trees[t], cs.order)
        return ok


@lru_cache(maxsize=64)
def table_for(symbols: tuple) -> TreeTable:
    return TreeTable(symbols)


def _order_ok(tree: TreeNode, order) -> bool:
    """Can the children of every node be laid out left to right to satisfy ``order``?"""
    arcs = {}
    for c in order:
        if c.before == c.after:
            return False
        node = tree
        while True:
            where = [i for i, k in enumerate(node.children) if c.before in k.symbols]
            there = [i for i, k in enumerate(node.children) if c.after in k.symbols]
            if where[0] != there[0]:
                break
            node = node.children[where[0]]
        if node.label == 0:
            return False
        arcs.setdefault(id(node), (node, set()))[1].add((where[0], there[0]))
    for node, pairs in arcs.values():
        # a layout exists iff some permutation respects every pair
        if not any(
            all(p.index(i) < p.index(j) for i, j in pairs)
            for p in itertools.permutations(range(len(node.children)))
        ):
            return False
    return True


def _universe(cs: ConstraintSet) -> tuple:
    return _check_size(cs.symbols)


def oracle_consistent(strict=(), weak=(), order=(), symbols=()) -> bool:
    """True iff some cluster tree (and layout, for order constraints) satisfies everything.

    ``strict`` may also be a whole :class:`ConstraintSet`.
    """
    cs = _coerce(strict, weak, order, symbols)
    if not cs.symbols:
        return True
    return bool(table_for(_universe(cs)).satisfying(cs).any())


def _coerce(strict, weak, order, symbols) -> ConstraintSet:
    if isinstance(strict, ConstraintSet):
        cs = strict
    else:
        cs = as_constraint_set(list(strict))
    return ConstraintSet(cs.strict, cs.weak + tuple(weak), cs.order + tuple(order), cs.declared | frozenset(symbols))


def oracle_min_labels(strict=(), weak=(), order=(), symbols=(), *, all_pairs: bool = False) -> int:
    """Fewest distinct non-zero orders of magnitude a solution needs.

    Counted over the edges the constraints mention, or over every pair of
    symbols when ``all_pairs`` is set.
    """
    cs = _coerce(strict, weak, order, symbols)
    if not cs.strict and not cs.weak and not cs.order:
        return 0
    table = table_for(_universe(cs))
    ok = table.satisfying(cs)
    if not ok.any():
        raise InconsistentInput("system has no solution")
    sub = table.table[ok]
    if all_pairs:
        flat = sub.reshape(len(sub), -1)
    else:
        pairs = sorted(cs.edges)
        if not pairs:
            return 0
        idx = [(table.pos[e.a], table.pos[e.b]) for e in pairs]
        flat = np.stack([sub[:, i, j] for i, j in idx], axis=1)
    best = None
    for row in flat:
        k = len(set(row.tolist()) - {0})
        if best is None or k < best:
            best = k
    return best


def euclid_check(valuation: Mapping[str, Sequence], constraints, B) -> bool:
    """Exact test of ``B * dist(a,b) < dist(c,d)`` for every strict constraint."""
    B2 = Fraction(B) ** 2
    for c in as_constraint_set(constraints).strict:
        short = dist2(valuation[c.short.a], valuation[c.short.b])
        long = dist2(valuation[c.long.a], valuation[c.long.b])
        if not B2 * short < long:
            return False
    return True
