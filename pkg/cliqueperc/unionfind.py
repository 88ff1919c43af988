"""
Disjoint-set forest over super nodes 0..n-1.

Path compression plus union by size. Each set also accumulates a weight
(here: the number of individuals in its member cliques).
"""

from __future__ import annotations

from typing import Iterable, Sequence


class UnionFind:
    """
    Examples:
        >>> uf = UnionFind(3, weights=[1, 2, 3])
        >>> uf.union(0, 2)
        True
        >>> uf.find(0) == uf.find(2)
        True
        >>> uf.largest()
        (2, 4)
    """

    __slots__ = ("parent", "size", "weight")

    def __init__(self, n: int, weights: Sequence[int] | None = None):
        assert n >= 0
        self.parent = list(range(n))
        self.size = [1] * n
        self.weight = [int(w) for w in weights] if weights is not None else [1] * n
        assert len(self.weight) == n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of x and y; False if they were already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.weight[rx] += self.weight[ry]
        return True

    def union_all(self, pairs: Iterable[Sequence[int]]) -> None:
        for a, b in pairs:
            if a != b:
                self.union(a, b)

    def roots(self) -> list[int]:
        return [i for i, p in enumerate(self.parent) if p == i]

    def labels(self) -> list[int]:
        """Root of every element."""
        return [self.find(i) for i in range(len(self.parent))]

    def largest(self) -> tuple[int, int]:
        """(size, weight) of the largest set by size; ties go to the heavier set."""
        best = (0, 0)
        for r in self.roots():
            cand = (self.size[r], self.weight[r])
            if cand > best:
                best = cand
        return best
