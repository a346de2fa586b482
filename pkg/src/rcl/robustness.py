"""Graph robustness deciders.

Four families of checks:

* brute-force oracles that enumerate subsets directly against the definitions
  (r-reachability, r-robustness, (r,s)-robustness, strong r-robustness with
  respect to a set, trusted leader-follower robustness),
* a polynomial peeling procedure for the strong and TLF variants,
* closed-form certificates for circulant graphs based on consecutive leader
  windows (sufficient conditions only),
* the maximum r for which a graph is r-robust.

Subset enumeration is exponential, so the pairwise checks refuse graphs above
an enumeration cap (default 13) and the complement-subset checks refuse free
sets above a second cap (default 20), unless forced.  Witnesses are
deterministic: subsets are ranked by increasing cardinality and then
lexicographically by their sorted vertex tuple, and the first violation in
that order is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import Digraph, GraphError

DEFAULT_PAIR_CAP = 13
DEFAULT_COMPLEMENT_CAP = 20


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force check would exceed the configured cap."""


class Property(str, Enum):
    R_REACH = "r_reachable"
    R_ROBUST = "r_robust"
    RS_ROBUST = "rs_robust"
    STRONG_R = "strong_r_robust"
    TLF = "tlf_robust"
    CIRCULANT_CERTIFICATE = "circulant_certificate"


@dataclass(frozen=True)
class RobustnessReport:
    """Verdict for one property query, with a machine-checkable witness.

    A false verdict always carries a witness that violates the definition;
    a true peeling verdict carries the admission order, and a true certificate
    carries the satisfying window.
    """

    property: Property
    params: dict
    verdict: bool
    witness: dict | None
    method: str

    def to_json(self) -> dict:
        return {
            "property": self.property.value,
            "params": self.params,
            "verdict": self.verdict,
            "witness": self.witness,
            "method": self.method,
        }


# ---------------------------------------------------------------------------
# mask helpers


def _vertex_set(g: Digraph, s: Iterable[int]) -> frozenset[int]:
    out = frozenset(s)
    for v in out:
        if not (1 <= v <= g.n):
            raise GraphError(f"vertex {v} outside 1..{g.n}")
    return out


def _mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def _sorted_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@lru_cache(maxsize=8)
def _canonical_rank(n: int) -> np.ndarray:
    """rank[mask] = position of mask in (cardinality, lexicographic) subset order."""
    masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), _sorted_vertices(m)))
    rank = np.empty(1 << n, dtype=np.int64)
    for pos, m in enumerate(masks):
        rank[m] = pos
    return rank


# ---------------------------------------------------------------------------
# reachability


def r_reachable_set(g: Digraph, s: Iterable[int], r: int) -> frozenset[int]:
    """Members of S with at least r in-neighbors outside S.

    S is r-reachable iff the result is nonempty.
    """
    subset = _vertex_set(g, s)
    if not subset:
        raise GraphError("subset must be nonempty")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    return frozenset(i for i in subset if len(g.in_neighbors(i) - subset) >= r)


def is_r_reachable(g: Digraph, s: Iterable[int], r: int) -> bool:
    return bool(r_reachable_set(g, s, r))


# ---------------------------------------------------------------------------
# pairwise subset checks (r- and (r,s)-robustness)


def _pair_cap_check(g: Digraph, cap: int | None, force: bool) -> None:
    limit = DEFAULT_PAIR_CAP if cap is None else cap
    if g.n > limit and not force:
        raise EnumerationCapError(
            f"n={g.n} exceeds pairwise enumeration cap {limit}; pass force=True to override"
        )


def _reach_counts(g: Digraph, r: int) -> np.ndarray:
    """For every subset mask m: number of members with >= r in-neighbors outside m."""
    n = g.n
    masks = np.arange(1 << n, dtype=np.uint64)
    not_masks = ~masks
    counts = np.zeros(1 << n, dtype=np.int32)
    for i in g.vertices:
        member = (masks >> np.uint64(i - 1)) & np.uint64(1)
        outside = np.bitwise_count(np.uint64(g.in_masks[i - 1]) & not_masks)
        counts += (member & (outside >= r)).astype(np.int32)
    return counts


def is_r_robust(
    g: Digraph, r: int, *, cap: int | None = None, force: bool = False
) -> RobustnessReport:
    """Every pair of nonempty disjoint vertex subsets has an r-reachable member.

    Enumerates all unordered pairs of nonempty disjoint subsets; a false
    verdict carries the first violating pair in canonical subset order.
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    params = {"r": r}
    if r == 0:
        return RobustnessReport(Property.R_ROBUST, params, True, None, "bruteforce")
    _pair_cap_check(g, cap, force)
    n = g.n
    counts = _reach_counts(g, r)
    masks = np.arange(1 << n, dtype=np.uint64)
    # unreachable nonempty subsets; only those can participate in a violation
    bad = masks[(counts == 0) & (masks != 0)]
    if bad.size:
        rank = _canonical_rank(n)
        bad = bad[np.argsort(rank[bad])]
        for a in bad:
            disjoint = (bad & a) == 0
            if disjoint.any():
                b = bad[disjoint][0]
                witness = {
                    "s1": list(_sorted_vertices(int(a))),
                    "s2": list(_sorted_vertices(int(b))),
                }
                return RobustnessReport(Property.R_ROBUST, params, False, witness, "bruteforce")
    return RobustnessReport(Property.R_ROBUST, params, True, None, "bruteforce")


def is_rs_robust(
    g: Digraph, r: int, s: int, *, cap: int | None = None, force: bool = False
) -> RobustnessReport:
    """(r, s)-robustness via direct enumeration of disjoint subset pairs.

    For every nonempty disjoint pair (S1, S2), at least one of: all of S1 is
    r-reachable, all of S2 is, or the r-reachable members of both total >= s.
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if not (1 <= s <= g.n):
        raise ValueError(f"s must be in [1, n]={g.n}, got {s}")
    params = {"r": r, "s": s}
    _pair_cap_check(g, cap, force)
    n = g.n
    counts = _reach_counts(g, r)
    masks = np.arange(1 << n, dtype=np.uint64)
    sizes = np.bitwise_count(masks).astype(np.int32)
    # subsets whose r-reachable part is proper; only those can violate
    bad = (counts < sizes) & (masks != 0)
    bad_masks = masks[bad]
    if bad_masks.size:
        bad_counts = counts[bad]
        rank = _canonical_rank(n)
        order = np.argsort(rank[bad_masks])
        bad_masks = bad_masks[order]
        bad_counts = bad_counts[order]
        for idx in range(bad_masks.size):
            a = bad_masks[idx]
            viol = ((bad_masks & a) == 0) & (bad_counts + bad_counts[idx] < s)
            if viol.any():
                b = bad_masks[viol][0]
                witness = {
                    "s1": list(_sorted_vertices(int(a))),
                    "s2": list(_sorted_vertices(int(b))),
                    "reachable_counts": [int(bad_counts[idx]), int(bad_counts[viol][0])],
                }
                return RobustnessReport(Property.RS_ROBUST, params, False, witness, "bruteforce")
    return RobustnessReport(Property.RS_ROBUST, params, True, None, "bruteforce")


def max_r_robustness(g: Digraph, *, cap: int | None = None, force: bool = False) -> int:
    """Largest r for which the graph is r-robust (r-robustness is monotone in r)."""
    lo, hi = 0, (g.n + 1) // 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if is_r_robust(g, mid, cap=cap, force=force).verdict:
            lo = mid
        else:
            hi = mid - 1
    return lo


# ---------------------------------------------------------------------------
# complement-subset checks (strong r-robustness, TLF robustness)


def _complement_profiles(g: Digraph, s_mask: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per nonempty C in V \\ S: (C mask, max outside in-degree, max in-degree from S).

    The two maxima decide every strong-r and TLF query for this (graph, S):
    C is r-reachable iff its max outside in-degree >= r, and C contains a
    vertex with >= F+1 in-neighbors in S iff its max S in-degree >= F+1.
    Small enumerations are cached so sweeps over r or F reuse one pass.
    """
    if g.n - bin(s_mask).count("1") <= 16:
        return _complement_profiles_cached(g, s_mask)
    return _compute_complement_profiles(g, s_mask)


@lru_cache(maxsize=256)
def _complement_profiles_cached(g: Digraph, s_mask: int):
    return _compute_complement_profiles(g, s_mask)


def _compute_complement_profiles(
    g: Digraph, s_mask: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    free = [v for v in g.vertices if not (s_mask >> (v - 1)) & 1]
    f = len(free)
    idx = np.arange(1, 1 << f, dtype=np.uint64)
    c_masks = np.zeros(idx.size, dtype=np.uint64)
    for pos, v in enumerate(free):
        c_masks |= ((idx >> np.uint64(pos)) & np.uint64(1)) << np.uint64(v - 1)
    max_outside = np.full(idx.size, -1, dtype=np.int32)
    max_from_s = np.full(idx.size, -1, dtype=np.int32)
    for pos, v in enumerate(free):
        member = ((idx >> np.uint64(pos)) & np.uint64(1)).astype(bool)
        in_mask = np.uint64(g.in_masks[v - 1])
        outside = np.bitwise_count(in_mask & ~c_masks).astype(np.int32)
        from_s = int(bin(g.in_masks[v - 1] & s_mask).count("1"))
        np.maximum(max_outside, np.where(member, outside, -1), out=max_outside)
        np.maximum(max_from_s, np.where(member, from_s, -1), out=max_from_s)
    return c_masks, max_outside, max_from_s


def _complement_cap_check(g: Digraph, s: frozenset[int], cap: int | None, force: bool) -> None:
    limit = DEFAULT_COMPLEMENT_CAP if cap is None else cap
    free = g.n - len(s)
    if free > limit and not force:
        raise EnumerationCapError(
            f"complement size {free} exceeds enumeration cap {limit}; "
            "pass force=True to override"
        )


def _min_violating_subset(c_masks: np.ndarray, violating: np.ndarray) -> tuple[int, ...]:
    cand = c_masks[violating]
    sizes = np.bitwise_count(cand)
    cand = cand[sizes == sizes.min()]
    return min(_sorted_vertices(int(m)) for m in cand)


def is_strongly_r_robust_bruteforce(
    g: Digraph, s: Iterable[int], r: int, *, cap: int | None = None, force: bool = False
) -> RobustnessReport:
    """Check every nonempty C in V \\ S for r-reachability, by enumeration."""
    subset = _vertex_set(g, s)
    if not subset:
        raise GraphError("S must be nonempty")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    params = {"r": r, "set": sorted(subset)}
    if len(subset) == g.n:
        return RobustnessReport(Property.STRONG_R, params, True, None, "bruteforce")
    _complement_cap_check(g, subset, cap, force)
    c_masks, max_outside, _ = _complement_profiles(g, _mask_of(subset))
    violating = max_outside < r
    if violating.any():
        witness = {"violating_subset": list(_min_violating_subset(c_masks, violating))}
        return RobustnessReport(Property.STRONG_R, params, False, witness, "bruteforce")
    return RobustnessReport(Property.STRONG_R, params, True, None, "bruteforce")


def is_tlf_robust_bruteforce(
    g: Digraph, s: Iterable[int], f: int, *, cap: int | None = None, force: bool = False
) -> RobustnessReport:
    """Trusted leader-follower robustness with parameter F, by enumeration.

    Every nonempty C in V \\ S must contain a vertex with >= F+1 in-neighbors
    in S, or be (2F+1)-reachable.
    """
    subset = _vertex_set(g, s)
    if not subset:
        raise GraphError("S must be nonempty")
    if f < 0:
        raise ValueError(f"F must be >= 0, got {f}")
    params = {"f": f, "set": sorted(subset)}
    if len(subset) == g.n:
        return RobustnessReport(Property.TLF, params, True, None, "bruteforce")
    _complement_cap_check(g, subset, cap, force)
    c_masks, max_outside, max_from_s = _complement_profiles(g, _mask_of(subset))
    violating = (max_from_s < f + 1) & (max_outside < 2 * f + 1)
    if violating.any():
        witness = {"violating_subset": list(_min_violating_subset(c_masks, violating))}
        return RobustnessReport(Property.TLF, params, False, witness, "bruteforce")
    return RobustnessReport(Property.TLF, params, True, None, "bruteforce")


def _peel(
    g: Digraph,
    s: frozenset[int],
    admit: Callable[[int, int], bool],
    scan_order: Sequence[int] | None,
) -> tuple[bool, list[int], int]:
    """Grow R from S by repeatedly admitting the first eligible vertex in scan order."""
    order = list(scan_order) if scan_order is not None else list(g.vertices)
    if sorted(order) != list(g.vertices):
        raise GraphError("scan order must be a permutation of the vertex set")
    r_mask = _mask_of(s)
    full = (1 << g.n) - 1
    admitted: list[int] = []
    progress = True
    while progress and r_mask != full:
        progress = False
        for v in order:
            if (r_mask >> (v - 1)) & 1:
                continue
            if admit(v, r_mask):
                r_mask |= 1 << (v - 1)
                admitted.append(v)
                progress = True
                break
    return r_mask == full, admitted, r_mask


def is_strongly_r_robust_peeling(
    g: Digraph, s: Iterable[int], r: int, *, scan_order: Sequence[int] | None = None
) -> RobustnessReport:
    """Polynomial decision for strong r-robustness w.r.t. S.

    Starting from R = S, admit any vertex with >= r in-neighbors already in R
    (ascending id by default); the property holds iff R reaches the full
    vertex set.  The witness is the admission order (true) or the stalled
    complement (false).
    """
    subset = _vertex_set(g, s)
    if not subset:
        raise GraphError("S must be nonempty")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    params = {"r": r, "set": sorted(subset)}

    def admit(v: int, r_mask: int) -> bool:
        return bin(g.in_masks[v - 1] & r_mask).count("1") >= r

    ok, admitted, r_mask = _peel(g, subset, admit, scan_order)
    if ok:
        witness = {"admission_order": admitted}
    else:
        witness = {"stalled_complement": list(_sorted_vertices(((1 << g.n) - 1) & ~r_mask))}
    return RobustnessReport(Property.STRONG_R, params, ok, witness, "peeling")


def is_tlf_robust_peeling(
    g: Digraph, s: Iterable[int], f: int, *, scan_order: Sequence[int] | None = None
) -> RobustnessReport:
    """Polynomial decision for TLF robustness with parameter F.

    Starting from R = S, admit any vertex with >= F+1 in-neighbors in S or
    >= 2F+1 in-neighbors already in R.
    """
    subset = _vertex_set(g, s)
    if not subset:
        raise GraphError("S must be nonempty")
    if f < 0:
        raise ValueError(f"F must be >= 0, got {f}")
    params = {"f": f, "set": sorted(subset)}
    s_mask = _mask_of(subset)

    def admit(v: int, r_mask: int) -> bool:
        in_mask = g.in_masks[v - 1]
        return (
            bin(in_mask & s_mask).count("1") >= f + 1
            or bin(in_mask & r_mask).count("1") >= 2 * f + 1
        )

    ok, admitted, r_mask = _peel(g, subset, admit, scan_order)
    if ok:
        witness = {"admission_order": admitted}
    else:
        witness = {"stalled_complement": list(_sorted_vertices(((1 << g.n) - 1) & ~r_mask))}
    return RobustnessReport(Property.TLF, params, ok, witness, "peeling")


# ---------------------------------------------------------------------------
# circulant certificates


def circulant_certificate(
    n: int, k: int, leaders: Iterable[int], f: int, mode: str
) -> RobustnessReport:
    """Consecutive-window certificate for circulant graphs C_n(1..k) / C_n(+-1..+-k).

    ``strong`` mode: some window of <= k consecutive agents contains >= 2F+1
    leaders, certifying strong (2F+1)-robustness w.r.t. the leader set.
    ``tlf`` mode: some window of <= k-F consecutive agents contains >= F+1
    leaders, certifying TLF robustness with parameter F.

    The certificate is sufficient only: a false result does not rule out the
    property.  The witness is the shortest satisfying window (earliest start
    on ties).
    """
    if mode not in ("strong", "tlf"):
        raise ValueError(f"mode must be 'strong' or 'tlf', got {mode!r}")
    if n < 2 or not (1 <= k <= n - 1):
        raise GraphError(f"invalid circulant parameters n={n}, k={k}")
    if f < 0:
        raise ValueError(f"F must be >= 0, got {f}")
    leader_set = frozenset(leaders)
    for v in leader_set:
        if not (1 <= v <= n):
            raise GraphError(f"leader {v} outside 1..{n}")
    max_len = k if mode == "strong" else k - f
    required = 2 * f + 1 if mode == "strong" else f + 1
    params = {"n": n, "k": k, "f": f, "mode": mode, "leaders": sorted(leader_set)}
    for length in range(1, min(max_len, n) + 1):
        for start in range(1, n + 1):
            window = [(start - 1 + j) % n + 1 for j in range(length)]
            if sum(1 for v in window if v in leader_set) >= required:
                return RobustnessReport(
                    Property.CIRCULANT_CERTIFICATE, params, True, {"window": window}, "certificate"
                )
    return RobustnessReport(Property.CIRCULANT_CERTIFICATE, params, False, None, "certificate")


def circulant_r_robustness_lower_bound(n: int, k: int) -> int:
    """Known lower bound on the r-robustness of C_n(1..k): ceil(k/2)."""
    if n < 2 or not (1 <= k <= n - 1):
        raise GraphError(f"invalid circulant parameters n={n}, k={k}")
    return (k + 1) // 2
