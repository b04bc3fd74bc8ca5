"""Cluster trees: structure, validation, satisfaction and instantiation.

A cluster tree has one leaf per symbol; every internal node has at least two
children and a non-negative rational label strictly greater than the labels
of its internal children.  The label of the least common ancestor of two
symbols encodes the order of magnitude of their distance, so a strict
comparison ``od(a,b) << od(c,d)`` holds in every instantiation exactly when
``lca_label(a,b) < lca_label(c,d)``.

Ordered trees additionally carry a set of arcs ``(i, j)`` on the children of
each internal node: every leaf under child ``i`` lies before every leaf
under child ``j``.  ``order=None`` marks a node of an unordered tree.

Trees can be thousands of levels deep (chain systems), so nothing here
recurses on tree depth.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .constraints import Constraint, OrderConstraint, StrictConstraint, WeakConstraint
from .omspace import ORIGIN, Om, OmPoint, od, points_at_scale


class UnknownSymbol(KeyError):
    pass


class OrderQueryOnUnorderedTree(ValueError):
    pass


class TreeNode:
    """Immutable cluster-tree node.

    Leaves carry ``symbol`` and label 0.  Structural hashes are computed once
    at construction from the (already built) children, and equality walks
    the two trees with an explicit stack.
    """

    __slots__ = ("label", "children", "symbol", "order", "size", "_hash", "_symbols", "_min")

    def __init__(
        self,
        label=0,
        children: Sequence["TreeNode"] = (),
        symbol: Optional[str] = None,
        order: Optional[Iterable[tuple]] = None,
    ):
        self.label = Fraction(label)
        self.children = tuple(children)
        self.symbol = symbol
        self.order = None if order is None else frozenset((int(i), int(j)) for i, j in order)
        if self.children:
            self.size = sum(c.size for c in self.children)
            self._min = min(c._min for c in self.children)
        else:
            self.size = 1
            self._min = symbol
        self._hash = hash(
            (self.label, self.symbol, self.order, tuple(c._hash for c in self.children))
        )
        self._symbols = None

    @classmethod
    def leaf(cls, symbol: str) -> "TreeNode":
        return cls(0, (), symbol)

    @classmethod
    def node(cls, label, children: Sequence["TreeNode"], order=None) -> "TreeNode":
        return cls(label, children, None, order)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def ordered(self) -> bool:
        return self.order is not None

    @property
    def min_symbol(self) -> str:
        return self._min

    @property
    def symbols(self) -> frozenset:
        if self._symbols is None:
            self._symbols = frozenset(n.symbol for n in iter_nodes(self) if n.is_leaf)
        return self._symbols

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeNode):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if (
                a._hash != b._hash
                or a.label != b.label
                or a.symbol != b.symbol
                or a.order != b.order
                or len(a.children) != len(b.children)
            ):
                return False
            stack.extend(zip(a.children, b.children))
        return True

    def __repr__(self) -> str:
        if self.is_leaf:
            return f"leaf({self.symbol!r})"
        return f"TreeNode(label={self.label}, size={self.size})"


def leaf(symbol: str) -> TreeNode:
    return TreeNode.leaf(symbol)


def node(label, *children: TreeNode, order=None) -> TreeNode:
    return TreeNode.node(label, children, order)


def iter_nodes(tree: TreeNode) -> Iterator[TreeNode]:
    """Preorder traversal."""
    stack = [tree]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def iter_paths(tree: TreeNode) -> Iterator[tuple]:
    """Preorder ``(path, node)`` pairs; a path is a tuple of child indices."""
    stack = [((), tree)]
    while stack:
        path, n = stack.pop()
        yield path, n
        for i in range(len(n.children) - 1, -1, -1):
            stack.append((path + (i,), n.children[i]))


def node_count(tree: TreeNode) -> int:
    return sum(1 for _ in iter_nodes(tree))


def labels_of(tree: TreeNode) -> list:
    """Distinct labels, ascending, always including 0."""
    return sorted({n.label for n in iter_nodes(tree)} | {Fraction(0)})


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    path: tuple
    message: str

    def __str__(self) -> str:
        where = "/".join(map(str, self.path)) or "root"
        return f"{where}: {self.message}"


def _has_cycle(n: int, arcs: Iterable[tuple]) -> bool:
    succ = {i: [] for i in range(n)}
    indeg = [0] * n
    for i, j in arcs:
        succ[i].append(j)
        indeg[j] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return seen != n


def validate(tree: TreeNode) -> list:
    """Every structural defect of ``tree``; an empty list means it is valid."""
    out = []
    seen = {}
    for path, n in iter_paths(tree):
        if n.is_leaf:
            if n.symbol is None:
                out.append(Violation(path, "leaf without a symbol"))
            elif n.symbol in seen:
                out.append(Violation(path, f"symbol {n.symbol!r} repeated (first at {seen[n.symbol]})"))
            else:
                seen[n.symbol] = path
            if n.label != 0:
                out.append(Violation(path, "leaf label is not 0"))
            continue
        if n.symbol is not None:
            out.append(Violation(path, "internal node carries a symbol"))
        if len(n.children) < 2:
            out.append(Violation(path, "fewer than two children"))
        if n.label < 0:
            out.append(Violation(path, "negative label"))
        for i, c in enumerate(n.children):
            if not c.is_leaf and not c.label < n.label:
                out.append(Violation(path + (i,), "label not less than parent's label"))
        if n.order:
            k = len(n.children)
            bad = [(i, j) for i, j in n.order if not (0 <= i < k and 0 <= j < k) or i == j]
            if bad:
                out.append(Violation(path, f"order arcs out of range: {sorted(bad)}"))
            elif _has_cycle(k, n.order):
                out.append(Violation(path, "order arcs contain a cycle"))
            if n.label == 0:
                out.append(Violation(path, "order arcs under a label-0 node"))
    return out


# -- least common ancestors ----------------------------------------------------

class TreeIndex:
    """Parent pointers and depths for lca queries on one tree."""

    def __init__(self, tree: TreeNode):
        self.tree = tree
        self.nodes = []
        self.parent = []
        self.depth = []
        self.child_pos = []
        self.leaf = {}
        stack = [(tree, -1, 0, -1)]
        while stack:
            n, par, d, pos = stack.pop()
            i = len(self.nodes)
            self.nodes.append(n)
            self.parent.append(par)
            self.depth.append(d)
            self.child_pos.append(pos)
            if n.is_leaf:
                self.leaf[n.symbol] = i
            for k in range(len(n.children) - 1, -1, -1):
                stack.append((n.children[k], i, d + 1, k))

    def _id(self, x: str) -> int:
        try:
            return self.leaf[x]
        except KeyError:
            raise UnknownSymbol(x) from None

    def lca_path(self, x: str, y: str) -> tuple:
        """``(lca id, child position toward x, child position toward y)``.

        Child positions are -1 when x == y.
        """
        i, j = self._id(x), self._id(y)
        pi = pj = -1
        depth, parent, pos = self.depth, self.parent, self.child_pos
        while depth[i] > depth[j]:
            pi = pos[i]
            i = parent[i]
        while depth[j] > depth[i]:
            pj = pos[j]
            j = parent[j]
        while i != j:
            pi, pj = pos[i], pos[j]
            i, j = parent[i], parent[j]
        return i, pi, pj

    def lca(self, x: str, y: str) -> TreeNode:
        return self.nodes[self.lca_path(x, y)[0]]

    def lca_label(self, x: str, y: str) -> Fraction:
        if x == y:
            self._id(x)
            return Fraction(0)
        return self.nodes[self.lca_path(x, y)[0]].label


@lru_cache(maxsize=512)
def tree_index(tree: TreeNode) -> TreeIndex:
    return TreeIndex(tree)


def lca_label(tree: TreeNode, x: str, y: str) -> Fraction:
    return tree_index(tree).lca_label(x, y)


def _reaches(order: frozenset, i: int, j: int) -> bool:
    frontier, seen = [i], {i}
    while frontier:
        k = frontier.pop()
        for a, b in order:
            if a == k and b not in seen:
                if b == j:
                    return True
                seen.add(b)
                frontier.append(b)
    return False


def tree_satisfies(tree: TreeNode, c: Constraint) -> bool:
    idx = tree_index(tree)
    if isinstance(c, StrictConstraint):
        return idx.lca_label(*c.short) < idx.lca_label(*c.long)
    if isinstance(c, WeakConstraint):
        return idx.lca_label(*c.short) <= idx.lca_label(*c.long)
    if isinstance(c, OrderConstraint):
        n, i, j = idx.lca_path(c.before, c.after)
        if i < 0:
            return False
        top = idx.nodes[n]
        if top.order is None:
            raise OrderQueryOnUnorderedTree("order query against an unordered node")
        return _reaches(top.order, i, j)
    raise TypeError(f"not a constraint: {c!r}")


# -- clusters of symbolic valuations -----------------------------------------

def odiam(points: Iterable[OmPoint]) -> Om:
    pts = list(set(points))
    best = Om.zero()
    for p, q in itertools.combinations(pts, 2):
        d = od(p, q)
        if best < d:
            best = d
    return best


def _is_cluster(members: frozenset, universe: frozenset) -> bool:
    outside = universe - members
    for x in members:
        if not outside:
            break
        near = max((od(x, y) for y in members), default=Om.zero())
        far = min(od(x, z) for z in outside)
        if not near < far:
            return False
    return True


def point_clusters(points: Iterable[OmPoint]) -> set:
    """All clusters of a finite point set, as frozensets of points.

    Any cluster containing x is the closed ball around x whose radius is its
    farthest member, so it suffices to test those balls.
    """
    universe = frozenset(points)
    found = set()
    for x in universe:
        dist = {y: od(x, y) for y in universe}
        for r in set(dist.values()):
            ball = frozenset(y for y, d in dist.items() if d <= r)
            if ball not in found and _is_cluster(ball, universe):
                found.add(ball)
    return found


def clusters_of(valuation: Mapping[str, OmPoint]) -> set:
    """Clusters of the valuation's image, reported as sets of symbols.

    A cluster is a set of points; each is reported as all symbols mapped
    into it, so coincident symbols always travel together.
    """
    by_point = {}
    for s, p in valuation.items():
        by_point.setdefault(p, set()).add(s)
    out = set()
    for cl in point_clusters(by_point):
        out.add(frozenset().union(*(by_point[p] for p in cl)))
    return out


def check_instantiation(valuation: Mapping[str, OmPoint], tree: TreeNode) -> bool:
    """Whether the valuation instantiates the tree.

    Checks that every internal node maps onto a cluster, that every cluster
    is some node's image, that label order matches diameter order, and that
    label-0 nodes collapse to one point.
    """
    if not tree.symbols <= valuation.keys():
        return False
    images = {}
    for n in iter_nodes(tree):
        if n not in images:
            images[n] = frozenset(valuation[s] for s in n.symbols)
    universe = images[tree]
    node_images = set(images.values())
    for n, img in images.items():
        if not n.is_leaf and not _is_cluster(img, universe):
            return False
        if n.label == 0 and len(img) != 1:
            return False
    if not point_clusters(universe) <= node_images:
        return False
    by_label = {}
    for n, img in images.items():
        by_label.setdefault(n.label, []).append(odiam(img))
    levels = sorted(by_label)
    for lo, hi in zip(levels, levels[1:]):
        if not max(by_label[lo]) < min(by_label[hi]):
            return False
    return True


def induced_tree(valuation: Mapping[str, OmPoint]) -> TreeNode:
    """The canonical cluster tree that a symbolic valuation instantiates."""
    if not valuation:
        raise ValueError("empty valuation")
    by_point = {}
    for s, p in valuation.items():
        by_point.setdefault(p, []).append(s)

    def point_node(p):
        syms = sorted(by_point[p])
        if len(syms) == 1:
            return leaf(syms[0])
        return TreeNode.node(0, [leaf(s) for s in syms])

    clusters = sorted(
        (c for c in point_clusters(by_point) if len(c) > 1), key=len, reverse=True
    )
    if not clusters:
        (p,) = by_point
        return point_node(p)
    diams = {c: odiam(c) for c in clusters}
    ranks = {d: i + 1 for i, d in enumerate(sorted(set(diams.values())))}
    children = {c: [] for c in clusters}
    owner = {}
    # clusters are laminar; the smallest strict superset is the parent
    for c in clusters:
        parents = [d for d in clusters if len(d) > len(c) and c < d]
        if parents:
            children[min(parents, key=len)].append(c)
    for p in by_point:
        holders = [c for c in clusters if p in c]
        owner.setdefault(min(holders, key=len), []).append(p)
    built = {}
    for c in reversed(clusters):
        kids = [built[k] for k in children[c]] + [point_node(p) for p in owner.get(c, [])]
        kids.sort(key=lambda t: t.min_symbol)
        built[c] = TreeNode.node(ranks[diams[c]], kids)
    return built[clusters[0]]


# -- instantiation -----------------------------------------------------------

def _symbolic_scales(tree: TreeNode) -> dict:
    nonzero = [l for l in labels_of(tree) if l != 0]
    k = len(nonzero)
    # smallest label gets the smallest order of magnitude d^k
    return {l: Om.power(k - i) for i, l in enumerate(nonzero)}


def instantiate(tree: TreeNode) -> dict:
    """Place each symbol at a polynomial point so the valuation instantiates ``tree``."""
    scale = _symbolic_scales(tree)
    out = {}
    stack = [(tree, ORIGIN)]
    while stack:
        n, at = stack.pop()
        if n.is_leaf:
            out[n.symbol] = at
            continue
        k = len(n.children)
        pts = [at] * k if n.label == 0 else points_at_scale(at, scale[n.label], k)
        stack.extend(zip(n.children, pts))
    return out


def topological_children(n: TreeNode) -> list:
    """Child indices of ``n`` in a topological order of its order arcs."""
    k = len(n.children)
    arcs = n.order or ()
    succ = {i: [] for i in range(k)}
    indeg = [0] * k
    for i, j in arcs:
        succ[i].append(j)
        indeg[j] += 1
    ready = sorted(i for i in range(k) if indeg[i] == 0)
    out = []
    while ready:
        i = ready.pop(0)
        out.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
        ready.sort()
    if len(out) != k:
        raise ValueError("order arcs contain a cycle")
    return out


def instantiate_ordered(tree: TreeNode) -> dict:
    """Like :func:`instantiate`, on a line, respecting order arcs.

    Children of a node at scale ``s`` sit at ``x + s, x + 2s, ...`` in
    topological order, strictly increasing and pairwise (and from the parent
    point ``x``) exactly ``s`` apart in order of magnitude.
    """
    scale = _symbolic_scales(tree)
    out = {}
    stack = [(tree, ORIGIN)]
    while stack:
        n, at = stack.pop()
        if n.is_leaf:
            out[n.symbol] = at
            continue
        if n.label == 0:
            stack.extend((c, at) for c in n.children)
            continue
        q = scale[n.label].exp
        for rank, i in enumerate(topological_children(n), start=1):
            stack.append((n.children[i], at.shift(q, rank)))
    return out


def instantiate_euclidean(tree: TreeNode, B, dim: int = 1) -> dict:
    """Exact rational coordinates in ``dim`` dimensions satisfying the tree at ratio ``B``.

    With ``n`` the node count and ``alpha = 2 + 2n + B*n``, the scale for the
    i-th smallest non-zero label is ``(alpha + 1)**(i - 1)``, so consecutive
    scales differ by more than ``alpha``.  Children of a node are collinear
    at spacing equal to its scale (axis chosen by depth), which keeps every
    sibling distance in ``[scale, n*scale)``.
    """
    B = Fraction(B)
    if B <= 1:
        raise ValueError("B must exceed 1")
    if dim < 1:
        raise ValueError("dim must be positive")
    n = node_count(tree)
    alpha = 2 + 2 * n + B * n
    nonzero = [l for l in labels_of(tree) if l != 0]
    scale = {l: (alpha + 1) ** i for i, l in enumerate(nonzero)}
    origin = (Fraction(0),) * dim
    out = {}
    stack = [(tree, origin, 0)]
    while stack:
        nd, at, depth = stack.pop()
        if nd.is_leaf:
            out[nd.symbol] = at
            continue
        if nd.label == 0:
            stack.extend((c, at, depth + 1) for c in nd.children)
            continue
        axis = depth % dim
        step = scale[nd.label]
        for j, c in enumerate(nd.children):
            p = list(at)
            p[axis] += j * step
            stack.append((c, tuple(p), depth + 1))
    return out


def dist2(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    return sum(((a - b) ** 2 for a, b in zip(p, q)), Fraction(0))


def check_finite_b(valuation: Mapping[str, Sequence[Fraction]], tree: TreeNode, B) -> bool:
    """Whether a Euclidean valuation satisfies the tree at ratio ``B``.

    For all symbol pairs (a,b), (c,d) with lca_label(a,b) < lca_label(c,d)
    require ``dist(a,b) < dist(c,d)/B``, compared as squares.
    """
    B2 = Fraction(B) ** 2
    idx = tree_index(tree)
    syms = sorted(tree.symbols)
    groups = {}
    for a, b in itertools.combinations_with_replacement(syms, 2):
        groups.setdefault(idx.lca_label(a, b), []).append(dist2(valuation[a], valuation[b]))
    levels = sorted(groups)
    for i in range(len(levels) - 1):
        low = max(max(groups[l]) for l in levels[: i + 1])
        high = min(min(groups[l]) for l in levels[i + 1:])
        if not B2 * low < high:
            return False
    return True


# -- canonical form and relabelling ------------------------------------------

def _rebuild(tree: TreeNode, fn) -> TreeNode:
    """Post-order rebuild; ``fn(node, new_children)`` returns the new node."""
    done = {}
    stack = [(tree, False)]
    while stack:
        n, expanded = stack.pop()
        if id(n) in done:
            continue
        if n.is_leaf or expanded:
            done[id(n)] = fn(n, [done[id(c)] for c in n.children])
        else:
            stack.append((n, True))
            stack.extend((c, False) for c in n.children)
    return done[id(tree)]


def relabel(tree: TreeNode, mapping) -> TreeNode:
    """Apply ``mapping`` (dict or callable) to every internal label."""
    get = mapping if callable(mapping) else mapping.__getitem__

    def fn(n, kids):
        if n.is_leaf:
            return n
        return TreeNode.node(get(n.label), kids, n.order)

    return _rebuild(tree, fn)


def canonical(tree: TreeNode) -> TreeNode:
    """Labels replaced by their rank (0 kept), children sorted by least symbol."""
    ranks = {l: i for i, l in enumerate(labels_of(tree))}

    def fn(n, kids):
        if n.is_leaf:
            return n
        perm = sorted(range(len(kids)), key=lambda i: kids[i].min_symbol)
        where = {old: new for new, old in enumerate(perm)}
        order = None if n.order is None else [(where[i], where[j]) for i, j in n.order]
        return TreeNode.node(ranks[n.label], [kids[i] for i in perm], order)

    return _rebuild(tree, fn)


def isomorphic(s: TreeNode, t: TreeNode) -> bool:
    return canonical(s) == canonical(t)


# -- serialization -------------------------------------------------------------

def _label_text(x: Fraction) -> str:
    return str(Fraction(x))


def to_json_obj(tree: TreeNode) -> dict:
    def fn(n, kids):
        if n.is_leaf:
            return {"symbol": n.symbol}
        d = {"label": _label_text(n.label), "children": kids}
        if n.order is not None:
            d["order"] = sorted([i, j] for i, j in n.order)
        return d

    return _rebuild(tree, fn)


def from_json_obj(obj: dict) -> TreeNode:
    done = {}
    stack = [(obj, False)]
    while stack:
        o, expanded = stack.pop()
        if "symbol" in o:
            done[id(o)] = leaf(str(o["symbol"]))
        elif expanded:
            order = o.get("order")
            done[id(o)] = TreeNode.node(
                Fraction(str(o["label"])),
                [done[id(c)] for c in o["children"]],
                None if order is None else [tuple(a) for a in order],
            )
        else:
            if "children" not in o or "label" not in o:
                raise ValueError(f"tree node needs 'symbol' or 'label' and 'children': {o!r}")
            stack.append((o, True))
            stack.extend((c, False) for c in o["children"])
    return done[id(obj)]


def _dumps(obj, indent: Optional[int]) -> str:
    """``json.dumps`` for dicts, lists and scalars without recursion."""
    out = []
    nl = indent is not None
    item_sep = "," if nl else ", "
    # stack entries: ("v", value, depth) to emit a value, ("t", text) for literal text
    stack = [("v", obj, 0)]
    while stack:
        entry = stack.pop()
        if entry[0] == "t":
            out.append(entry[1])
            continue
        _, v, depth = entry
        if isinstance(v, dict):
            items = [(json.dumps(k), x) for k, x in v.items()]
        elif isinstance(v, list):
            items = [(None, x) for x in v]
        else:
            out.append(json.dumps(v))
            continue
        opening, closing = ("{", "}") if isinstance(v, dict) else ("[", "]")
        if not items:
            out.append(opening + closing)
            continue
        inner = "\n" + " " * (indent * (depth + 1)) if nl else ""
        outer = "\n" + " " * (indent * depth) if nl else ""
        todo = [("t", opening)]
        for i, (k, x) in enumerate(items):
            todo.append(("t", (item_sep if i else "") + inner + (f"{k}: " if k is not None else "")))
            todo.append(("v", x, depth + 1))
        todo.append(("t", outer + closing))
        stack.extend(reversed(todo))
    return "".join(out)


_WS = re.compile(r"[ \t\n\r]*")
_SCALAR = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][-+]?\d+)?|true|false|null")


def _loads(text: str):
    """``json.loads`` without recursion (tree documents nest one level per node)."""
    pos = _WS.match(text, 0).end()
    stack = []  # open containers: [container, pending key]
    result = None
    done = False
    while True:
        if done:
            raise ValueError(f"extra data at offset {pos}")
        c = text[pos:pos + 1]
        if not c:
            raise ValueError("unexpected end of JSON")
        if c in "{[":
            stack.append([{} if c == "{" else [], None])
            pos = _WS.match(text, pos + 1).end()
            if text[pos:pos + 1] == ("}" if c == "{" else "]"):
                value = stack.pop()[0]
                pos += 1
            else:
                if c == "{":
                    if text[pos:pos + 1] != '"':
                        raise ValueError(f"expected key at offset {pos}")
                    key, pos = json.decoder.scanstring(text, pos + 1)
                    pos = _WS.match(text, pos).end()
                    if text[pos:pos + 1] != ":":
                        raise ValueError(f"expected ':' at offset {pos}")
                    stack[-1][1] = key
                    pos = _WS.match(text, pos + 1).end()
                continue
        elif c == '"':
            value, pos = json.decoder.scanstring(text, pos + 1)
        else:
            m = _SCALAR.match(text, pos)
            if not m:
                raise ValueError(f"unexpected character {c!r} at offset {pos}")
            value = json.loads(m.group())
            pos = m.end()
        # attach the finished value, closing containers as they end
        while True:
            pos = _WS.match(text, pos).end()
            if not stack:
                result, done = value, True
                break
            box = stack[-1]
            if isinstance(box[0], dict):
                box[0][box[1]] = value
            else:
                box[0].append(value)
            c = text[pos:pos + 1]
            if c == ",":
                pos = _WS.match(text, pos + 1).end()
                if isinstance(box[0], dict):
                    if text[pos:pos + 1] != '"':
                        raise ValueError(f"expected key at offset {pos}")
                    key, pos = json.decoder.scanstring(text, pos + 1)
                    pos = _WS.match(text, pos).end()
                    if text[pos:pos + 1] != ":":
                        raise ValueError(f"expected ':' at offset {pos}")
                    box[1] = key
                    pos = _WS.match(text, pos + 1).end()
                break
            if c == ("}" if isinstance(box[0], dict) else "]"):
                value = stack.pop()[0]
                pos += 1
                continue
            raise ValueError(f"expected ',' or closing bracket at offset {pos}")
        if done:
            if pos != len(text):
                raise ValueError(f"extra data at offset {pos}")
            return result


def to_json(tree: TreeNode, indent: Optional[int] = 2) -> str:
    return _dumps(to_json_obj(tree), indent)


def from_json(text: str) -> TreeNode:
    return from_json_obj(_loads(text))


def to_dot(tree: TreeNode, name: str = "cluster_tree") -> str:
    lines = [f"digraph {name} {{"]
    ids = {}
    for i, (path, n) in enumerate(iter_paths(tree)):
        ids[path] = f"n{i}"
        if n.is_leaf:
            lines.append(f'  n{i} [label="{n.symbol}", shape=box];')
        else:
            lines.append(f'  n{i} [label="⟨{_label_text(n.label)}⟩"];')
        if path:
            lines.append(f"  {ids[path[:-1]]} -> n{i};")
    for path, n in iter_paths(tree):
        for a, b in sorted(n.order or ()):
            lines.append(
                f"  {ids[path + (a,)]} -> {ids[path + (b,)]} [style=dashed, constraint=false];"
            )
    lines.append("}")
    return "\n".join(lines)


def format_tree(tree: TreeNode) -> str:
    """Indented text rendering, one node per line."""
    lines = []
    for path, n in iter_paths(tree):
        pad = "  " * len(path)
        if n.is_leaf:
            lines.append(f"{pad}{n.symbol}")
        else:
            arcs = ""
            if n.order:
                arcs = "  order: " + ", ".join(f"{a}<{b}" for a, b in sorted(n.order))
            lines.append(f"{pad}⟨{_label_text(n.label)}⟩{arcs}")
    return "\n".join(lines)
