import random

import pytest

from helpers import (
    naive_is_r_robust,
    naive_is_rs_robust,
    naive_reachable,
    naive_strongly_r_robust,
    naive_tlf_robust,
    random_digraph,
)
from rcl.graph import Digraph, GraphError, make_k_circulant, make_undirected_circulant
from rcl.robustness import (
    EnumerationCapError,
    circulant_certificate,
    circulant_r_robustness_lower_bound,
    is_r_robust,
    is_rs_robust,
    is_strongly_r_robust_bruteforce,
    is_strongly_r_robust_peeling,
    is_tlf_robust_bruteforce,
    is_tlf_robust_peeling,
    max_r_robustness,
    r_reachable_set,
)


def complete_graph(n):
    return Digraph(n, frozenset((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j))


# ---------------------------------------------------------------------------
# r-reachability


def test_reachable_r0_returns_whole_set():
    g = make_k_circulant(6, 2)
    assert r_reachable_set(g, {2, 4, 5}, 0) == {2, 4, 5}


def test_reachable_c5_singleton():
    g = make_k_circulant(5, 2)
    assert r_reachable_set(g, {1}, 2) == {1}


def test_reachable_full_vertex_set_empty():
    g = make_k_circulant(5, 2)
    assert r_reachable_set(g, {1, 2, 3, 4, 5}, 1) == frozenset()


def test_reachable_rejects_empty_set():
    g = make_k_circulant(5, 2)
    with pytest.raises(GraphError):
        r_reachable_set(g, set(), 1)
    with pytest.raises(GraphError):
        r_reachable_set(g, {9}, 1)


# ---------------------------------------------------------------------------
# r-robustness


def test_k4_is_2_robust():
    assert is_r_robust(complete_graph(4), 2).verdict


def test_directed_ring_not_2_robust_with_witness():
    g = make_k_circulant(6, 1)
    report = is_r_robust(g, 2)
    assert not report.verdict
    s1 = frozenset(report.witness["s1"])
    s2 = frozenset(report.witness["s2"])
    assert s1 and s2 and not (s1 & s2)
    assert not naive_reachable(g, s1, 2)
    assert not naive_reachable(g, s2, 2)


def test_r0_always_robust():
    g = random_digraph(random.Random(1), 6, 0.2)
    assert is_r_robust(g, 0).verdict


def test_r_robust_matches_naive_oracle():
    rng = random.Random(7)
    for _ in range(40):
        g = random_digraph(rng, rng.randrange(2, 7), rng.choice([0.2, 0.4, 0.7]))
        for r in range(0, g.n // 2 + 2):
            assert is_r_robust(g, r).verdict == naive_is_r_robust(g, r), (g, r)


def test_enumeration_cap():
    g = make_k_circulant(14, 3)
    with pytest.raises(EnumerationCapError):
        is_r_robust(g, 2)
    assert is_r_robust(g, 2, cap=14).verdict == is_r_robust(g, 2, force=True).verdict


# ---------------------------------------------------------------------------
# (r, s)-robustness


def test_rs_with_s1_equals_r_robust():
    rng = random.Random(13)
    for _ in range(20):
        g = random_digraph(rng, rng.randrange(2, 7), 0.4)
        for r in range(0, 4):
            assert is_rs_robust(g, r, 1).verdict == is_r_robust(g, r).verdict


def test_k5_is_22_robust():
    assert is_rs_robust(complete_graph(5), 2, 2).verdict


def test_rs_robust_matches_naive_oracle():
    rng = random.Random(17)
    for _ in range(25):
        g = random_digraph(rng, rng.randrange(2, 6), rng.choice([0.3, 0.6]))
        for r in range(0, 3):
            for s in range(1, g.n + 1):
                assert is_rs_robust(g, r, s).verdict == naive_is_rs_robust(g, r, s), (g, r, s)


def test_rs_false_witness_violates_definition():
    g = make_k_circulant(6, 2)
    report = is_rs_robust(g, 2, 4)
    if not report.verdict:
        s1 = frozenset(report.witness["s1"])
        s2 = frozenset(report.witness["s2"])
        assert not (s1 & s2)

        def x_count(sub):
            return sum(1 for i in sub if len(g.in_neighbors(i) - sub) >= 2)

        assert x_count(s1) < len(s1)
        assert x_count(s2) < len(s2)
        assert x_count(s1) + x_count(s2) < 4


def test_rs_parameter_validation():
    g = make_k_circulant(5, 2)
    with pytest.raises(ValueError):
        is_rs_robust(g, 1, 0)
    with pytest.raises(ValueError):
        is_rs_robust(g, 1, 6)
    with pytest.raises(ValueError):
        is_rs_robust(g, -1, 1)


# ---------------------------------------------------------------------------
# strong r-robustness


def test_strong_vacuous_when_set_is_everything():
    g = make_k_circulant(5, 2)
    assert is_strongly_r_robust_bruteforce(g, g.vertices, 99).verdict


def test_strong_c10_17_leaders_7():
    g = make_k_circulant(10, 7)
    assert is_strongly_r_robust_bruteforce(g, range(1, 8), 7).verdict


def test_strong_ring_false_with_minimal_witness():
    g = make_k_circulant(6, 1)
    report = is_strongly_r_robust_bruteforce(g, {1}, 2)
    assert not report.verdict
    witness = frozenset(report.witness["violating_subset"])
    assert not naive_reachable(g, witness, 2)
    # canonical order: smallest cardinality, then lexicographic
    assert witness == {2}


def test_strong_peeling_r0_admits_everyone():
    g = make_k_circulant(5, 2)
    report = is_strongly_r_robust_peeling(g, {3}, 0)
    assert report.verdict
    assert sorted(report.witness["admission_order"]) == [1, 2, 4, 5]


def test_strong_peeling_c30_leader_window():
    g = make_k_circulant(30, 15)
    assert is_strongly_r_robust_peeling(g, range(22, 29), 7).verdict


def test_peeling_matches_bruteforce_random():
    rng = random.Random(23)
    for _ in range(60):
        g = random_digraph(rng, rng.randrange(2, 8), rng.choice([0.2, 0.5, 0.8]))
        size = rng.randrange(1, g.n + 1)
        s = frozenset(rng.sample(sorted(g.vertices), size))
        for r in range(0, g.n + 1):
            brute = is_strongly_r_robust_bruteforce(g, s, r).verdict
            peel = is_strongly_r_robust_peeling(g, s, r).verdict
            assert brute == peel == naive_strongly_r_robust(g, s, r), (g, s, r)


def test_peeling_verdict_invariant_under_scan_order():
    rng = random.Random(29)
    for _ in range(30):
        g = random_digraph(rng, 7, 0.5)
        s = frozenset(rng.sample(range(1, 8), rng.randrange(1, 4)))
        r = rng.randrange(0, 5)
        base = is_strongly_r_robust_peeling(g, s, r).verdict
        order = list(g.vertices)
        rng.shuffle(order)
        assert is_strongly_r_robust_peeling(g, s, r, scan_order=order).verdict == base


def test_tlf_peeling_verdict_invariant_under_scan_order():
    rng = random.Random(79)
    for _ in range(30):
        g = random_digraph(rng, 7, 0.5)
        s = frozenset(rng.sample(range(1, 8), rng.randrange(1, 4)))
        f = rng.randrange(0, 3)
        base = is_tlf_robust_peeling(g, s, f).verdict
        order = list(g.vertices)
        rng.shuffle(order)
        assert is_tlf_robust_peeling(g, s, f, scan_order=order).verdict == base


def test_strong_monotone_in_r():
    rng = random.Random(31)
    for _ in range(20):
        g = random_digraph(rng, 7, 0.6)
        s = frozenset(rng.sample(range(1, 8), 2))
        verdicts = [is_strongly_r_robust_bruteforce(g, s, r).verdict for r in range(8)]
        # once false, stays false
        assert all(a or not b for a, b in zip(verdicts, verdicts[1:]))


def test_strong_true_survives_edge_additions():
    rng = random.Random(37)
    g = make_k_circulant(8, 4)
    s = frozenset({1, 2, 3})
    r = 3
    assert is_strongly_r_robust_peeling(g, s, r).verdict
    edges = set(g.edges)
    candidates = [(i, j) for i in g.vertices for j in g.vertices if i != j and (i, j) not in edges]
    for _ in range(10):
        edges.add(rng.choice(candidates))
        bigger = Digraph(8, frozenset(edges))
        assert is_strongly_r_robust_peeling(bigger, s, r).verdict


def test_strong_leader_count_necessity():
    # strong (2F+1)-robustness w.r.t. S is impossible when |S| < 2F+1
    rng = random.Random(41)
    for _ in range(20):
        g = random_digraph(rng, 7, 0.8)
        f = rng.randrange(1, 3)
        size = rng.randrange(1, 2 * f + 1)
        s = frozenset(rng.sample(range(1, 8), size))
        if len(s) == g.n:
            continue
        assert not is_strongly_r_robust_bruteforce(g, s, 2 * f + 1).verdict
        assert not is_strongly_r_robust_peeling(g, s, 2 * f + 1).verdict


# ---------------------------------------------------------------------------
# TLF robustness


def test_tlf_c10_17_scattered_leaders():
    g = make_k_circulant(10, 7)
    assert is_tlf_robust_bruteforce(g, {1, 4, 5}, 2).verdict
    assert is_tlf_robust_peeling(g, {1, 4, 5}, 2).verdict


def test_tlf_f0_equals_strong_1_robustness():
    rng = random.Random(43)
    for _ in range(40):
        g = random_digraph(rng, rng.randrange(2, 8), rng.choice([0.3, 0.6]))
        s = frozenset(rng.sample(sorted(g.vertices), rng.randrange(1, g.n + 1)))
        tlf = is_tlf_robust_bruteforce(g, s, 0).verdict
        strong = is_strongly_r_robust_bruteforce(g, s, 1).verdict
        assert tlf == strong


def test_tlf_peeling_matches_bruteforce_random():
    rng = random.Random(47)
    for _ in range(60):
        g = random_digraph(rng, rng.randrange(2, 8), rng.choice([0.2, 0.5, 0.8]))
        s = frozenset(rng.sample(sorted(g.vertices), rng.randrange(1, g.n + 1)))
        for f in range(0, 4):
            brute = is_tlf_robust_bruteforce(g, s, f).verdict
            peel = is_tlf_robust_peeling(g, s, f).verdict
            assert brute == peel == naive_tlf_robust(g, s, f), (g, s, f)


def test_tlf_false_witness_violates_definition():
    g = make_k_circulant(8, 2)
    report = is_tlf_robust_bruteforce(g, {1, 2}, 1)
    assert not report.verdict
    c = frozenset(report.witness["violating_subset"])
    assert not any(len(g.in_neighbors(i) & {1, 2}) >= 2 for i in c)
    assert not naive_reachable(g, c, 3)


def test_tlf_monotone_in_f():
    rng = random.Random(71)
    for _ in range(20):
        g = random_digraph(rng, 7, 0.7)
        s = frozenset(rng.sample(range(1, 8), 3))
        verdicts = [is_tlf_robust_bruteforce(g, s, f).verdict for f in range(4)]
        assert all(a or not b for a, b in zip(verdicts, verdicts[1:]))


def test_tlf_true_survives_edge_additions():
    rng = random.Random(73)
    g = make_k_circulant(9, 5)
    s = frozenset({1, 2})
    assert is_tlf_robust_peeling(g, s, 1).verdict
    edges = set(g.edges)
    candidates = [(i, j) for i in g.vertices for j in g.vertices if i != j and (i, j) not in edges]
    for _ in range(10):
        edges.add(rng.choice(candidates))
        bigger = Digraph(9, frozenset(edges))
        assert is_tlf_robust_peeling(bigger, s, 1).verdict
        assert is_tlf_robust_bruteforce(bigger, s, 1).verdict


def test_tlf_leader_count_necessity():
    rng = random.Random(53)
    for _ in range(20):
        g = random_digraph(rng, 7, 0.8)
        f = rng.randrange(1, 4)
        size = rng.randrange(1, f + 1)
        s = frozenset(rng.sample(range(1, 8), size))
        if len(s) == g.n:
            continue
        assert not is_tlf_robust_bruteforce(g, s, f).verdict
        assert not is_tlf_robust_peeling(g, s, f).verdict


# ---------------------------------------------------------------------------
# circulant certificates


def test_certificate_strong_c30_window():
    report = circulant_certificate(30, 15, range(22, 29), 3, "strong")
    assert report.verdict
    assert report.witness["window"] == list(range(22, 29))


def test_certificate_tlf_scattered_leaders():
    report = circulant_certificate(10, 7, [1, 4, 5], 2, "tlf")
    assert report.verdict
    assert report.witness["window"] == [1, 2, 3, 4, 5]


def test_certificate_empty_leaders_false():
    assert not circulant_certificate(8, 3, [], 0, "strong").verdict
    assert not circulant_certificate(8, 3, [], 0, "tlf").verdict


def test_certificate_wraps_around_modulo():
    report = circulant_certificate(15, 4, [14, 15, 1], 1, "strong")
    assert report.verdict
    assert report.witness["window"] == [14, 15, 1]


def test_certificate_soundness_vs_bruteforce():
    rng = random.Random(59)
    for _ in range(80):
        n = rng.randrange(3, 10)
        k = rng.randrange(1, n)
        f = rng.randrange(0, 3)
        leaders = frozenset(rng.sample(range(1, n + 1), rng.randrange(1, n + 1)))
        g = make_k_circulant(n, k)
        if circulant_certificate(n, k, leaders, f, "strong").verdict:
            assert is_strongly_r_robust_bruteforce(g, leaders, 2 * f + 1).verdict
        if circulant_certificate(n, k, leaders, f, "tlf").verdict:
            assert is_tlf_robust_bruteforce(g, leaders, f).verdict


def test_certificate_soundness_undirected():
    rng = random.Random(61)
    for _ in range(40):
        n = rng.randrange(4, 10)
        k = rng.randrange(1, (n - 1) // 2 + 1)
        f = rng.randrange(0, 2)
        leaders = frozenset(rng.sample(range(1, n + 1), rng.randrange(1, n + 1)))
        g = make_undirected_circulant(n, list(range(1, k + 1)))
        if circulant_certificate(n, k, leaders, f, "strong").verdict:
            assert is_strongly_r_robust_bruteforce(g, leaders, 2 * f + 1).verdict
        if circulant_certificate(n, k, leaders, f, "tlf").verdict:
            assert is_tlf_robust_bruteforce(g, leaders, f).verdict


def test_certificate_rejects_bad_input():
    with pytest.raises(ValueError):
        circulant_certificate(10, 3, [1], 1, "weak")
    with pytest.raises(GraphError):
        circulant_certificate(10, 10, [1], 1, "strong")
    with pytest.raises(GraphError):
        circulant_certificate(10, 3, [11], 1, "strong")


# ---------------------------------------------------------------------------
# max r-robustness


def test_max_r_c6_13_at_least_2():
    assert max_r_robustness(make_k_circulant(6, 3)) >= 2


def test_max_r_undirected_c8_at_least_2():
    assert max_r_robustness(make_undirected_circulant(8, [1, 2])) >= 2


def test_max_r_complete_k5():
    assert max_r_robustness(complete_graph(5)) == 3


def test_max_r_matches_linear_scan():
    rng = random.Random(67)
    for _ in range(20):
        g = random_digraph(rng, rng.randrange(2, 7), rng.choice([0.3, 0.6, 0.9]))
        best = max(
            (r for r in range(0, (g.n + 1) // 2 + 1) if naive_is_r_robust(g, r)),
            default=0,
        )
        assert max_r_robustness(g) == best


def test_circulant_lower_bound_values():
    assert circulant_r_robustness_lower_bound(20, 15) == 8
    assert circulant_r_robustness_lower_bound(6, 3) == 2
