"""Graph utilities: merge-find sets and strongly connected components."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence


class MergeFindSets:
    """Disjoint-set forest over ``0..n-1`` with union by size and path compression."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def reset(self, items: Iterable[int]) -> None:
        """Make every item in ``items`` a singleton again."""
        parent, size = self.parent, self.size
        for a in items:
            parent[a] = a
            size[a] = 1

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def merge(self, a: int, b: int) -> bool:
        """Union the sets holding ``a`` and ``b``; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] > self.size[rb]:
            ra, rb = rb, ra
        self.parent[ra] = rb
        self.size[rb] += self.size[ra]
        return True


def connected_components(vertices: Sequence[Hashable], edges: Iterable[tuple]) -> dict:
    """Map each vertex to the least vertex (by position) of its component."""
    pos = {v: i for i, v in enumerate(vertices)}
    uf = MergeFindSets(len(vertices))
    for a, b in edges:
        uf.merge(pos[a], pos[b])
    least = {}
    for i, v in enumerate(vertices):
        least.setdefault(uf.find(i), v)
    return {v: least[uf.find(i)] for i, v in enumerate(vertices)}


def strongly_connected_components(
    vertices: Sequence[Hashable], succ: Mapping[Hashable, Iterable[Hashable]]
) -> list:
    """Tarjan's algorithm without recursion; returns a list of vertex lists."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def has_cycle(vertices: Sequence[Hashable], arcs: Iterable[tuple]) -> bool:
    succ = {}
    for a, b in arcs:
        if a == b:
            return True
        succ.setdefault(a, []).append(b)
    return any(len(c) > 1 for c in strongly_connected_components(vertices, succ))
