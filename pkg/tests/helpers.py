"""Shared test utilities: random graph generation and naive reference
implementations of the robustness definitions.

The naive checkers below work directly on vertex sets with itertools
enumeration and no shared code with the library's optimized mask-based
implementations; they serve as independent oracles on small graphs.
"""

from __future__ import annotations

import itertools
import random

from rcl.graph import Digraph


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    edges = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and rng.random() < p:
                edges.add((i, j))
    return Digraph(n, frozenset(edges))


def nonempty_subsets(vertices) -> list[frozenset[int]]:
    vs = sorted(vertices)
    out = []
    for size in range(1, len(vs) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(vs, size))
    return out


def naive_reachable(g: Digraph, subset: frozenset[int], r: int) -> bool:
    return any(len(g.in_neighbors(i) - subset) >= r for i in subset)


def naive_is_r_robust(g: Digraph, r: int) -> bool:
    subsets = nonempty_subsets(g.vertices)
    for s1 in subsets:
        for s2 in subsets:
            if s1 & s2:
                continue
            if not naive_reachable(g, s1, r) and not naive_reachable(g, s2, r):
                return False
    return True


def naive_is_rs_robust(g: Digraph, r: int, s: int) -> bool:
    def x_count(subset: frozenset[int]) -> int:
        return sum(1 for i in subset if len(g.in_neighbors(i) - subset) >= r)

    subsets = nonempty_subsets(g.vertices)
    for s1 in subsets:
        for s2 in subsets:
            if s1 & s2:
                continue
            c1, c2 = x_count(s1), x_count(s2)
            if c1 == len(s1) or c2 == len(s2) or c1 + c2 >= s:
                continue
            return False
    return True


def naive_strongly_r_robust(g: Digraph, subset: frozenset[int], r: int) -> bool:
    rest = set(g.vertices) - subset
    return all(naive_reachable(g, c, r) for c in nonempty_subsets(rest))


def naive_tlf_robust(g: Digraph, subset: frozenset[int], f: int) -> bool:
    rest = set(g.vertices) - subset
    for c in nonempty_subsets(rest):
        anchored = any(len(g.in_neighbors(i) & subset) >= f + 1 for i in c)
        if not anchored and not naive_reachable(g, c, 2 * f + 1):
            return False
    return True
