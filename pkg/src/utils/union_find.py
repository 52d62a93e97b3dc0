"""Disjoint-set forest with path halving and union by rank."""


class UnionFind:
    """Disjoint sets over the integers 0..n-1."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, element: int) -> int:
        parent = self.parent
        while parent[element] != element:
            parent[element] = parent[parent[element]]
            element = parent[element]
        return element

    def unite(self, first: int, second: int) -> bool:
        """Merge the sets of two elements.

        Returns:
            False if both were already in the same set
        """
        a, b = self.find(first), self.find(second)
        if a == b:
            return False
        if self.rank[a] < self.rank[b]:
            a, b = b, a
        self.parent[b] = a
        if self.rank[a] == self.rank[b]:
            self.rank[a] += 1
        self.components -= 1
        return True


def count_components(vertex_count: int, edges) -> int:
    """Connected components of a graph given as (u, v) pairs over 0..vertex_count-1."""
    sets = UnionFind(vertex_count)
    for u, v in edges:
        sets.unite(u, v)
    return sets.components
