"""Consistency of order-of-magnitude distance comparisons.

The solvers build a cluster tree top-down.  Each round computes the graph
``H`` of edges forced to be much shorter than the current largest scale (the
connected components of the shorts of the remaining strict constraints),
splits every leaf cluster that ``H`` disconnects, labels it with a counter
that starts at the number of symbols and decreases by one per round, and
drops every constraint whose long edge is no longer in ``H``.  If ``H``
already swallows every edge of the remaining system, it is inconsistent.

Variants:

* :func:`solve` is the direct transcription, kept as an executable
  reference;
* :func:`solve_fast` maintains ``H`` implicitly with merge-find sets and
  per-edge constraint lists, and returns exactly the same tree;
* :func:`solve_mixed` (also exposed as :func:`solve_weak` and
  :func:`solve_ordered`) closes ``H`` under weak comparisons and under
  point-order cycles before each split.

Every solver returns a :class:`TreeNode` or ``None`` when inconsistent.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Optional, Sequence, Union

from .cluster_tree import TreeNode, tree_satisfies
from .constraints import (
    Constraint,
    ConstraintSet,
    Edge,
    OrderConstraint,
    StrictConstraint,
    WeakConstraint,
    as_constraint_set,
)
from .graphs import MergeFindSets, connected_components, has_cycle, strongly_connected_components

Constraints = Union[ConstraintSet, Iterable[Constraint]]


class _Work:
    """Mutable tree node used while a solver runs."""

    __slots__ = ("symbols", "label", "children", "arcs", "edges")

    def __init__(self, symbols):
        self.symbols = symbols
        self.label = 0
        self.children = []
        self.arcs = None
        self.edges = []


def _freeze(root: _Work, ordered: bool) -> TreeNode:
    """Convert a finished work tree, expanding multi-symbol leaves at label 0."""
    built = {}
    stack = [(root, False)]
    while stack:
        w, expanded = stack.pop()
        if w.children and not expanded:
            stack.append((w, True))
            stack.extend((c, False) for c in w.children)
            continue
        if w.children:
            order = (w.arcs or set()) if ordered else None
            built[id(w)] = TreeNode.node(w.label, [built[id(c)] for c in w.children], order)
        elif len(w.symbols) == 1:
            built[id(w)] = TreeNode.leaf(w.symbols[0])
        else:
            kids = [TreeNode.leaf(s) for s in w.symbols]
            built[id(w)] = TreeNode.node(0, kids, frozenset() if ordered else None)
    return built[id(root)]


def _trivial_tree(symbols: Sequence[str], ordered: bool = False) -> TreeNode:
    if len(symbols) == 1:
        return TreeNode.leaf(symbols[0])
    return TreeNode.node(1, [TreeNode.leaf(s) for s in symbols], frozenset() if ordered else None)


def _require_symbols(cs: ConstraintSet) -> tuple:
    symbols = cs.symbols
    if not symbols:
        raise ValueError("constraint system mentions no symbols")
    return symbols


def _strict_only(cs: ConstraintSet, who: str) -> None:
    if cs.weak or cs.order:
        raise ValueError(f"{who} accepts strict constraints only; use solve_mixed")


def _edges_of(strict: Iterable[StrictConstraint]) -> set:
    out = set()
    for c in strict:
        out.add(c.short)
        out.add(c.long)
    return out


# -- reference solver ----------------------------------------------------------

def _shorts_components(symbols, strict) -> dict:
    return connected_components(symbols, (c.short for c in strict))


def solve(constraints: Constraints, *, trace: Optional[list] = None) -> Optional[TreeNode]:
    """Reference implementation of the top-down solver for strict constraints.

    If ``trace`` is a list, one dict per round is appended with the round's
    component map and the number of constraints it started with.
    """
    cs = as_constraint_set(constraints)
    _strict_only(cs, "solve")
    symbols = _require_symbols(cs)
    S = list(cs.strict)
    if any(c.long.degenerate for c in S):
        return None
    if not S:
        return _trivial_tree(symbols)
    m = len(symbols)
    root = _Work(list(symbols))
    leaves = [root]
    while True:
        comp = _shorts_components(symbols, S)
        if trace is not None:
            trace.append({"components": comp, "constraints": len(S)})
        if all(comp[a] == comp[b] for a, b in _edges_of(S)):
            return None
        nxt = []
        for leaf in leaves:
            groups = defaultdict(list)
            for s in leaf.symbols:
                groups[comp[s]].append(s)
            if len(groups) > 1:
                leaf.label = m
                leaf.children = [_Work(g) for g in groups.values()]
                nxt.extend(leaf.children)
            else:
                nxt.append(leaf)
        leaves = nxt
        S = [c for c in S if comp[c.long.a] == comp[c.long.b]]
        m -= 1
        if not S:
            break
    return _freeze(root, ordered=False)


def reduce_constraints(constraints: Constraints) -> Optional[list]:
    """One round of the solver on strict constraints.

    Returns the constraints whose long edge stays inside a component of the
    shorts, or ``None`` when those components already contain every edge.
    """
    cs = as_constraint_set(constraints)
    _strict_only(cs, "reduce_constraints")
    S = list(cs.strict)
    if not S:
        return []
    comp = _shorts_components(cs.symbols, S)
    if all(comp[a] == comp[b] for a, b in _edges_of(S)):
        return None
    return [c for c in S if comp[c.long.a] == comp[c.long.b]]


def num_labels(constraints: Constraints) -> Optional[int]:
    """Number of distinct non-zero labels the solver uses, or ``None`` if inconsistent.

    This is also the fewest distinct non-zero orders of magnitude any
    solution realizes on the edges of the system.
    """
    S = list(as_constraint_set(constraints).strict)
    count = 0
    while S:
        S = reduce_constraints(S)
        if S is None:
            return None
        count += 1
    return count


# -- weak comparisons and point order ------------------------------------------

def incorporate_order(edges: Iterable[tuple], order: Iterable[OrderConstraint], vertices=()) -> set:
    """Close an undirected graph under point-order cycles between its components.

    Components of ``edges`` become vertices of a digraph with an arc A -> B
    for every ``a < b`` with ``a`` in A and ``b`` in B; every pair of
    components sharing a strongly connected component is then joined by all
    edges between them.  Returns the enlarged edge set as :class:`Edge` values.
    """
    edges = {Edge.of(a, b) for a, b in edges}
    order = list(order)
    verts = set(vertices)
    for e in edges:
        verts.update(e)
    for c in order:
        verts.update((c.before, c.after))
    verts = sorted(verts)
    comp = connected_components(verts, edges)
    members = defaultdict(list)
    for v in verts:
        members[comp[v]].append(v)
    succ = defaultdict(set)
    for c in order:
        a, b = comp[c.before], comp[c.after]
        if a != b:
            succ[a].add(b)
    out = set(edges)
    for scc in strongly_connected_components(sorted(members), succ):
        for i, A in enumerate(scc):
            for B in scc[i + 1:]:
                for a in members[A]:
                    for b in members[B]:
                        out.add(Edge.of(a, b))
    return out


def _closure(symbols, strict, weak, order) -> dict:
    """Components of H: shorts, closed under weak constraints and order cycles."""
    pos = {s: i for i, s in enumerate(symbols)}
    uf = MergeFindSets(len(symbols))
    for c in strict:
        uf.merge(pos[c.short.a], pos[c.short.b])
    while True:
        changed = False
        for c in weak:
            if uf.find(pos[c.long.a]) == uf.find(pos[c.long.b]):
                changed |= uf.merge(pos[c.short.a], pos[c.short.b])
        if order:
            succ = defaultdict(set)
            for c in order:
                a, b = uf.find(pos[c.before]), uf.find(pos[c.after])
                if a != b:
                    succ[a].add(b)
            for scc in strongly_connected_components(sorted(succ), succ):
                for v in scc[1:]:
                    changed |= uf.merge(scc[0], v)
        if not changed:
            break
    least = {}
    for s in symbols:
        least.setdefault(uf.find(pos[s]), s)
    return {s: least[uf.find(pos[s])] for s in symbols}


def _alias(symbols, strict, weak, order):
    """Merge symbols forced equal by ``od(a,b) <= od(c,c)``, to a fixpoint.

    Returns ``(rep, strict, weak, order)`` rewritten over representatives, or
    ``None`` if the rewriting exposes a contradiction.
    """
    pos = {s: i for i, s in enumerate(symbols)}
    uf = MergeFindSets(len(symbols))
    changed = True
    while changed:
        changed = False
        for c in weak:
            if uf.find(pos[c.long.a]) == uf.find(pos[c.long.b]):
                changed |= uf.merge(pos[c.short.a], pos[c.short.b])
    least = {}
    for s in symbols:
        least.setdefault(uf.find(pos[s]), s)
    rep = {s: least[uf.find(pos[s])] for s in symbols}

    def edge(e):
        return Edge.of(rep[e.a], rep[e.b])

    S = [StrictConstraint(edge(c.short), edge(c.long)) for c in strict]
    if any(c.long.degenerate for c in S):
        return None
    W = [WeakConstraint(edge(c.short), edge(c.long)) for c in weak]
    W = [c for c in W if not c.short.degenerate]
    O = [OrderConstraint(rep[c.before], rep[c.after]) for c in order]
    if any(c.before == c.after for c in O):
        return None
    return rep, S, W, O


def _expand_aliases(tree: TreeNode, rep: dict, ordered: bool) -> TreeNode:
    classes = defaultdict(list)
    for s, r in rep.items():
        classes[r].append(s)
    if all(len(v) == 1 for v in classes.values()):
        return tree
    from .cluster_tree import _rebuild

    def fn(n, kids):
        if n.is_leaf:
            members = sorted(classes[n.symbol])
            if len(members) == 1:
                return n
            return TreeNode.node(0, [TreeNode.leaf(s) for s in members], frozenset() if ordered else None)
        if n.label == 0:
            # flatten: a label-0 node cannot hold another label-0 node
            flat = []
            for k in kids:
                flat.extend(k.children if not k.is_leaf else [k])
            flat.sort(key=lambda t: t.symbol)
            return TreeNode.node(0, flat, n.order)
        return TreeNode.node(n.label, kids, n.order)

    return _rebuild(tree, fn)


def _solve_loop(symbols, strict, weak, order, trace) -> Optional[TreeNode]:
    ordered = bool(order)
    # a < b forces a != b, i.e. od(a,a) << od(a,b)
    strict = list(strict) + [
        StrictConstraint(Edge(c.before, c.before), Edge.of(c.before, c.after)) for c in order
    ]
    if has_cycle(symbols, [(c.before, c.after) for c in order]):
        return None
    if not strict:
        return _trivial_tree(symbols, ordered)
    n = len(symbols)
    m = n
    root = _Work(list(symbols))
    leaves = [root]
    S = strict
    prev = None
    rounds = 0
    while True:
        rounds += 1
        assert rounds <= max(n - 1, 1), "more rounds than symbols allow"
        comp = _closure(symbols, S, weak, order)
        if prev is not None:
            # H only shrinks: every new component sits inside an old one
            assert all(prev[a] == prev[comp[a]] for a in symbols)
        if trace is not None:
            trace.append({"components": comp, "constraints": len(S)})
        if all(comp[a] == comp[b] for a, b in _edges_of(S)):
            return None
        nxt = []
        for leaf in leaves:
            groups = defaultdict(list)
            for s in leaf.symbols:
                groups[comp[s]].append(s)
            if len(groups) <= 1:
                nxt.append(leaf)
                continue
            leaf.label = m
            leaf.children = [_Work(g) for g in groups.values()]
            if ordered:
                where = {comp[g[0]]: i for i, g in enumerate(groups.values())}
                leaf.arcs = set()
                inside = set(leaf.symbols)
                for c in order:
                    if c.before in inside and c.after in inside:
                        i, j = where[comp[c.before]], where[comp[c.after]]
                        if i != j:
                            leaf.arcs.add((i, j))
            nxt.extend(leaf.children)
        leaves = nxt
        kept = [c for c in S if comp[c.long.a] == comp[c.long.b]]
        assert len(kept) < len(S)
        S = kept
        prev = comp
        m -= 1
        if not S:
            break
    return _freeze(root, ordered)


def solve_mixed(constraints: Constraints, *, trace: Optional[list] = None) -> Optional[TreeNode]:
    """Solve strict, weak and order constraints together.

    Weak constraints ``od(a,b) <= od(c,c)`` first merge ``a`` and ``b``
    into one symbol (iterated, since merging can make other longs
    degenerate); weak constraints with a degenerate short are dropped.  The
    merged symbols come back as coincident leaves under a label-0 node.
    The tree is ordered (carries order arcs) exactly when order constraints
    are present.
    """
    cs = as_constraint_set(constraints)
    symbols = _require_symbols(cs)
    aliased = _alias(symbols, cs.strict, cs.weak, cs.order)
    if aliased is None:
        return None
    rep, S, W, O = aliased
    reps = sorted(set(rep.values()))
    tree = _solve_loop(reps, S, W, O, trace)
    if tree is None:
        return None
    tree = _expand_aliases(tree, rep, ordered=bool(O))
    # degenerate shorts only demand a positive long; confirm, as for every constraint
    if not all(tree_satisfies(tree, c) for c in cs):
        return None
    return tree


def solve_weak(strict: Constraints, weak: Iterable[WeakConstraint] = (), symbols=()) -> Optional[TreeNode]:
    cs = as_constraint_set(strict)
    return solve_mixed(ConstraintSet(cs.strict, cs.weak + tuple(weak), cs.order, cs.declared | frozenset(symbols)))


def solve_ordered(strict: Constraints, order: Iterable[OrderConstraint] = (), symbols=()) -> Optional[TreeNode]:
    cs = as_constraint_set(strict)
    return solve_mixed(ConstraintSet(cs.strict, cs.weak, cs.order + tuple(order), cs.declared | frozenset(symbols)))


# -- merge-find implementation ---------------------------------------------------

def solve_fast(constraints: Constraints, *, trace: Optional[list] = None) -> Optional[TreeNode]:
    """Strict-constraint solver with merge-find sets; same output as :func:`solve`.

    Each edge keeps a count of live constraints using it as a short and the
    list of constraints using it as a long.  A constraint dies only when its
    long edge is cut, so unlinking it is a decrement on its short edge's
    count.  Only leaf clusters that lost a short edge since the previous
    round are re-partitioned; every other leaf is still one merge-find set.
    """
    cs = as_constraint_set(constraints)
    _strict_only(cs, "solve_fast")
    symbols = _require_symbols(cs)
    strict = cs.strict
    n = len(symbols)
    if not strict:
        return _trivial_tree(symbols)
    sid = {s: i for i, s in enumerate(symbols)}

    edge_id = {}
    ea, eb, nshort = [], [], []
    long_of = []  # constraint index -> long edge id
    short_of = []  # constraint index -> short edge id, -1 for degenerate shorts
    for c in strict:
        la, lb = sid[c.long.a], sid[c.long.b]
        if la == lb:
            return None
        ids = []
        for a, b in ((sid[c.short.a], sid[c.short.b]), (la, lb)):
            if a == b:
                ids.append(-1)
                continue
            key = (a, b) if a < b else (b, a)
            e = edge_id.get(key)
            if e is None:
                e = edge_id[key] = len(ea)
                ea.append(key[0])
                eb.append(key[1])
                nshort.append(0)
            ids.append(e)
        short_of.append(ids[0])
        long_of.append(ids[1])
        if ids[0] >= 0:
            nshort[ids[0]] += 1
    n_edges = len(ea)
    # constraints grouped by long edge (they are only ever removed together)
    long_start = [0] * (n_edges + 1)
    for e in long_of:
        long_start[e + 1] += 1
    for e in range(n_edges):
        long_start[e + 1] += long_start[e]
    fill = long_start[:-1].copy()
    long_list = [0] * len(long_of)
    for k, e in enumerate(long_of):
        long_list[fill[e]] = k
        fill[e] += 1
    has_longs = [long_start[e + 1] > long_start[e] for e in range(n_edges)]

    root = _Work(list(range(n)))
    root.edges = list(range(n_edges))
    leaf_of = [root] * n
    dsu = MergeFindSets(n)
    parent = dsu.parent
    find = dsu.find
    merge = dsu.merge
    alive = len(strict)
    dirty = [root]
    m = n
    rounds = 0
    while True:
        rounds += 1
        assert rounds <= max(n - 1, 1)
        for leaf in dirty:
            dsu.reset(leaf.symbols)
        for leaf in dirty:
            live = []
            for e in leaf.edges:
                if nshort[e]:
                    merge(ea[e], eb[e])
                    live.append(e)
                elif has_longs[e]:
                    live.append(e)
            leaf.edges = live
        if trace is not None:
            trace.append({"dirty": len(dirty), "constraints": alive})
        if all(find(ea[e]) == find(eb[e]) for leaf in dirty for e in leaf.edges):
            return None
        split = []
        for leaf in dirty:
            groups = {}
            for s in leaf.symbols:
                r = s if parent[s] == s else find(s)
                g = groups.get(r)
                if g is None:
                    groups[r] = [s]
                else:
                    g.append(s)
            if len(groups) < 2:
                continue
            leaf.label = m
            leaf.children = [_Work(g) for g in groups.values()]
            for child in leaf.children:
                for s in child.symbols:
                    leaf_of[s] = child
            split.append(leaf)
        touched = {}
        for leaf in split:
            for e in leaf.edges:
                a = ea[e]
                home = leaf_of[a]
                if home is leaf_of[eb[e]]:
                    home.edges.append(e)
                    continue
                for k in long_list[long_start[e]:long_start[e + 1]]:
                    alive -= 1
                    se = short_of[k]
                    if se >= 0:
                        nshort[se] -= 1
                        if not nshort[se]:
                            t = leaf_of[ea[se]]
                            touched[id(t)] = t
                has_longs[e] = False
            leaf.edges = []
        m -= 1
        if not alive:
            break
        dirty = list(touched.values())
    # work nodes hold symbol indices; convert before freezing
    stack = [root]
    while stack:
        w = stack.pop()
        w.symbols = [symbols[i] for i in w.symbols]
        stack.extend(w.children)
    return _freeze(root, ordered=False)
