"""Decision procedure for the first-order theory of ``much_closer`` and ``=``.

Formulas are evaluated against a cluster tree whose leaves name the free
variables.  Atoms compare lca labels.  An existential quantifier is true
when some one-symbol extension of the tree satisfies its body; the
extensions enumerate every way a new point can relate to the existing ones
up to order-of-magnitude isomorphism, provided the om-space is dense and
unbounded above.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Union

from .cluster_tree import (
    TreeNode,
    _rebuild,
    canonical,
    iter_nodes,
    iter_paths,
    labels_of,
    tree_index,
)


class SymbolCollision(ValueError):
    """The symbol to add is already a leaf of the tree."""


class FreeVariableMismatch(ValueError):
    """A free variable of the formula does not name a leaf of the tree."""


class NonClosedFormula(ValueError):
    pass


# -- formulas ------------------------------------------------------------------

@dataclass(frozen=True)
class MuchCloser:
    w: str
    x: str
    y: str
    z: str

    def __str__(self):
        return f"much_closer({self.w},{self.x},{self.y},{self.z})"


@dataclass(frozen=True)
class Eq:
    x: str
    y: str

    def __str__(self):
        return f"{self.x} = {self.y}"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return f"!{_wrap(self.body, 3)}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left, 2)} & {_wrap(self.right, 2, right=True)}"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left, 1)} | {_wrap(self.right, 1, right=True)}"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self):
        return f"exists {self.var} . {self.body}"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"

    def __str__(self):
        return f"forall {self.var} . {self.body}"


Formula = Union[MuchCloser, Eq, Not, And, Or, Exists, Forall]


def _prec(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 0
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    return 4 if isinstance(f, (MuchCloser, Eq)) else 3


def _wrap(f, ctx: int, right: bool = False) -> str:
    # quantifiers reach as far right as possible, so bracket them whenever nested
    p = _prec(f)
    if p < ctx or (p == ctx and right and ctx in (1, 2)):
        return f"({f})"
    return str(f)


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, MuchCloser):
        return frozenset((f.w, f.x, f.y, f.z))
    if isinstance(f, Eq):
        return frozenset((f.x, f.y))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def _names(f: Formula) -> set:
    out = set(free_vars(f))
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Exists, Forall)):
            out.add(g.var)
            stack.append(g.body)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (And, Or)):
            stack.extend((g.left, g.right))
        elif isinstance(g, MuchCloser):
            out.update((g.w, g.x, g.y, g.z))
        elif isinstance(g, Eq):
            out.update((g.x, g.y))
    return out


def formula_size(f: Formula) -> int:
    if isinstance(f, (MuchCloser, Eq)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, (And, Or)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.body)


def quantifier_count(f: Formula) -> int:
    if isinstance(f, (MuchCloser, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_count(f.body)
    if isinstance(f, (And, Or)):
        return quantifier_count(f.left) + quantifier_count(f.right)
    return 1 + quantifier_count(f.body)


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (MuchCloser, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def normalize(f: Formula, avoid=()) -> Formula:
    """Rewrite into ``!``, ``&``, ``exists``, ``=`` and atoms only.

    Bound variables are renamed where needed so that each quantifier binds a
    distinct name that is neither free in ``f`` nor listed in ``avoid``.
    """
    taken = set(free_vars(f)) | set(avoid)
    pool = _names(f) | taken

    def fresh(base: str) -> str:
        for i in itertools.count(1):
            cand = f"{base}_{i}"
            if cand not in pool:
                pool.add(cand)
                return cand

    def go(g, env):
        if isinstance(g, MuchCloser):
            return MuchCloser(*(env.get(v, v) for v in (g.w, g.x, g.y, g.z)))
        if isinstance(g, Eq):
            return Eq(env.get(g.x, g.x), env.get(g.y, g.y))
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, And):
            return And(go(g.left, env), go(g.right, env))
        if isinstance(g, Or):
            return Not(And(Not(go(g.left, env)), Not(go(g.right, env))))
        var = g.var
        if var in taken:
            var = fresh(g.var)
        taken.add(var)
        body = go(g.body, {**env, g.var: var})
        if isinstance(g, Exists):
            return Exists(var, body)
        return Not(Exists(var, Not(body)))

    return go(f, {})


# -- extensions ------------------------------------------------------------------

def extending_labels(tree: TreeNode) -> list:
    """Existing labels, every midpoint between neighbours, and root label + 1."""
    ls = labels_of(tree)
    mids = [(a + b) / 2 for a, b in zip(ls, ls[1:])]
    return sorted(set(ls) | set(mids) | {ls[-1] + 1})


def _sorted_node(label, kids) -> TreeNode:
    return TreeNode.node(label, sorted(kids, key=lambda t: t.min_symbol))


def _replace(tree: TreeNode, path: tuple, make) -> TreeNode:
    """Rebuild ``tree`` with the node at ``path`` replaced by ``make(node)``."""
    chain = [tree]
    for i in path:
        chain.append(chain[-1].children[i])
    new = make(chain[-1])
    for parent, i in zip(reversed(chain[:-1]), reversed(path)):
        kids = list(parent.children)
        kids[i] = new
        new = _sorted_node(parent.label, kids)
    return new


def _strip_order(tree: Optional[TreeNode]) -> Optional[TreeNode]:
    if tree is None or all(n.order is None for n in iter_nodes(tree)):
        return tree
    return _rebuild(tree, lambda n, kids: n if n.is_leaf else TreeNode.node(n.label, kids))


def extensions(tree: Optional[TreeNode], x: str) -> list:
    """All trees obtained by adding leaf ``x`` with one extension operation.

    ``tree`` may be ``None`` (the null tree).  Order arcs are not carried
    over: the first-order language has no point order.
    """
    x_leaf = TreeNode.leaf(x)
    if tree is None:
        return [x_leaf]
    if x in tree.symbols:
        raise SymbolCollision(x)
    tree = _strip_order(tree)
    if tree.is_leaf:
        return [_sorted_node(0, [tree, x_leaf]), _sorted_node(1, [tree, x_leaf])]
    ext = extending_labels(tree)
    out = []
    entries = list(iter_paths(tree))
    parents = {}
    for path, n in entries:
        for i, c in enumerate(n.children):
            parents[id(c)] = n
    # x joins an existing cluster
    for path, n in entries:
        if not n.is_leaf:
            out.append(_replace(tree, path, lambda m: _sorted_node(m.label, list(m.children) + [x_leaf])))
    # x pairs with a leaf below a new node
    for path, n in entries:
        if n.is_leaf:
            top = parents[id(n)].label
            for lab in ext:
                if lab < top:
                    out.append(_replace(tree, path, lambda m, lab=lab: _sorted_node(lab, [m, x_leaf])))
    # x joins an internal non-root node at a new intermediate scale
    for path, n in entries:
        if path and not n.is_leaf:
            top = parents[id(n)].label
            for lab in ext:
                if n.label < lab < top:
                    out.append(_replace(tree, path, lambda m, lab=lab: _sorted_node(lab, [m, x_leaf])))
    out.append(_sorted_node(tree.label + 1, [tree, x_leaf]))
    return out


# -- decision ----------------------------------------------------------------------

def visit_bound(tree: Optional[TreeNode], f: Formula) -> int:
    """Envelope on trees visited: formula size times the product of 4k^2."""
    base = 0 if tree is None else len(tree.symbols)
    n = base + quantifier_count(f)
    return formula_size(f) * 4 ** n * math.factorial(n) ** 2


class _Decider:
    def __init__(self):
        self.memo = {}
        self.visited = 0

    def run(self, tree, f) -> bool:
        key = (None if tree is None else canonical(tree), f)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._eval(tree, f)
        self.memo[key] = result
        return result

    def _eval(self, tree, f) -> bool:
        if isinstance(f, Eq):
            return tree_index(tree).lca_label(f.x, f.y) == 0
        if isinstance(f, MuchCloser):
            idx = tree_index(tree)
            return idx.lca_label(f.w, f.x) < idx.lca_label(f.y, f.z)
        if isinstance(f, Not):
            return not self.run(tree, f.body)
        if isinstance(f, And):
            return self.run(tree, f.left) and self.run(tree, f.right)
        if isinstance(f, Exists):
            for t in extensions(tree, f.var):
                self.visited += 1
                if self.run(t, f.body):
                    return True
            return False
        raise TypeError(f"formula is not normalized: {f!r}")


def decide(tree: Optional[TreeNode], f: Formula, *, stats: Optional[dict] = None) -> bool:
    """Whether every instantiation of ``tree`` satisfies ``f``.

    Free variables of ``f`` must be leaves of ``tree`` (``None`` is the null
    tree).  Leaves the formula does not mention are harmless.  If ``stats``
    is a dict, ``stats["visited"]`` receives the number of extension trees
    examined.
    """
    symbols = frozenset() if tree is None else tree.symbols
    stray = free_vars(f) - symbols
    if stray:
        raise FreeVariableMismatch(f"free variables not in the tree: {', '.join(sorted(stray))}")
    g = normalize(f, avoid=symbols)
    d = _Decider()
    result = d.run(_strip_order(tree), g)
    if stats is not None:
        stats["visited"] = d.visited
    return result


def decide_sentence(f: Formula, *, stats: Optional[dict] = None) -> bool:
    if free_vars(f):
        raise NonClosedFormula(f"free variables: {', '.join(sorted(free_vars(f)))}")
    return decide(None, f, stats=stats)


def evaluate(f: Formula, valuation, od) -> bool:
    """Evaluate a quantifier-free formula directly on points."""
    if isinstance(f, Eq):
        return valuation[f.x] == valuation[f.y]
    if isinstance(f, MuchCloser):
        return od(valuation[f.w], valuation[f.x]) < od(valuation[f.y], valuation[f.z])
    if isinstance(f, Not):
        return not evaluate(f.body, valuation, od)
    if isinstance(f, And):
        return evaluate(f.left, valuation, od) and evaluate(f.right, valuation, od)
    if isinstance(f, Or):
        return evaluate(f.left, valuation, od) or evaluate(f.right, valuation, od)
    raise ValueError("evaluate() takes quantifier-free formulas only")
