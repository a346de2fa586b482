"""Per-agent behavior: the W-MSR filter and update, leader and adversary
signals, weight schemes, and the F-local adversary check.

The filter uses strict comparisons: incoming values equal to the agent's own
state are never removed.  Ties among removable values are broken by removing
the larger sender id first; since tied values are equal this cannot change
the retained value multiset (asserted by tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .graph import Digraph


class ConfigError(ValueError):
    """Invalid protocol or simulation configuration."""


# ---------------------------------------------------------------------------
# reference signal


@dataclass(frozen=True)
class ReferenceSignal:
    """Right-continuous piecewise-constant step function of the round index.

    ``breakpoints`` is an ordered list of (round, value); the value at round t
    is that of the last breakpoint at or before t.  The first breakpoint must
    be at round 0, so the signal is defined for every round and is constant
    from the final breakpoint on.
    """

    breakpoints: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.breakpoints:
            raise ConfigError("reference signal needs at least one breakpoint")
        rounds = [t for t, _ in self.breakpoints]
        if rounds[0] != 0:
            raise ConfigError(f"first breakpoint must be at round 0, got {rounds[0]}")
        if any(b >= a for b, a in zip(rounds, rounds[1:])):
            raise ConfigError(f"breakpoint rounds must be strictly increasing, got {rounds}")
        object.__setattr__(
            self, "breakpoints", tuple((int(t), float(v)) for t, v in self.breakpoints)
        )

    @classmethod
    def constant(cls, value: float) -> "ReferenceSignal":
        return cls(((0, value),))

    def value_at(self, t: int) -> float:
        if t < 0:
            raise ValueError(f"round must be >= 0, got {t}")
        value = self.breakpoints[0][1]
        for td, v in self.breakpoints:
            if td <= t:
                value = v
            else:
                break
        return value

    @property
    def final_value(self) -> float:
        return self.breakpoints[-1][1]

    def constant_intervals(self, horizon: int) -> list[tuple[int, int]]:
        """Maximal [t1, t2) intervals with constant value, covering 0..horizon."""
        starts = [t for t, _ in self.breakpoints if t <= horizon]
        ends = starts[1:] + [horizon + 1]
        return list(zip(starts, ends))


def leader_value(ref: ReferenceSignal, t: int) -> float:
    """Value a leader holds and broadcasts at round t; leaders ignore all input."""
    return ref.value_at(t)


# ---------------------------------------------------------------------------
# adversary strategies


@dataclass(frozen=True)
class ConstantHold:
    value: float

    def value_at(self, t: int) -> float:
        return self.value


@dataclass(frozen=True)
class Sinusoid:
    amplitude: float
    period: float
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.period <= 0:
            raise ConfigError(f"sinusoid period must be positive, got {self.period}")

    def value_at(self, t: int) -> float:
        return self.offset + self.amplitude * math.sin(2.0 * math.pi * t / self.period + self.phase)


@dataclass(frozen=True)
class Ramp:
    slope: float
    intercept: float = 0.0

    def value_at(self, t: int) -> float:
        return self.slope * t + self.intercept


@dataclass(frozen=True)
class Scripted:
    """Explicit per-round values; the last value persists past the script end."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ConfigError("scripted strategy needs at least one value")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def value_at(self, t: int) -> float:
        return self.values[min(t, len(self.values) - 1)]


ScalarStrategy = Union[ConstantHold, Sinusoid, Ramp, Scripted]


@dataclass(frozen=True, eq=False)
class ByzantinePerEdge:
    """Sends an independent scalar signal to each out-neighbor."""

    signals: Mapping[int, ScalarStrategy]

    def __post_init__(self) -> None:
        object.__setattr__(self, "signals", dict(self.signals))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ByzantinePerEdge):
            return NotImplemented
        return dict(self.signals) == dict(other.signals)

    def value_for(self, recipient: int, t: int) -> float:
        try:
            sig = self.signals[recipient]
        except KeyError:
            raise ConfigError(f"byzantine strategy has no signal for out-neighbor {recipient}") from None
        return sig.value_at(t)


AdversaryStrategy = Union[ScalarStrategy, ByzantinePerEdge]


def adversary_value(
    strategy: AdversaryStrategy, t: int, recipient: int | None = None, rng=None
) -> float:
    """Value delivered by an adversary at round t.

    Malicious strategies broadcast one value to everyone; ByzantinePerEdge
    looks up the recipient's signal.  ``rng`` is accepted for interface
    stability; all built-in strategies are deterministic.
    """
    if isinstance(strategy, ByzantinePerEdge):
        if recipient is None:
            raise ConfigError("byzantine strategy requires a recipient")
        return strategy.value_for(recipient, t)
    return strategy.value_at(t)


# ---------------------------------------------------------------------------
# roles


@dataclass(frozen=True)
class Normal:
    pass


@dataclass(frozen=True)
class Leader:
    pass


@dataclass(frozen=True)
class Adversary:
    strategy: AdversaryStrategy


AgentRole = Union[Normal, Leader, Adversary]

NORMAL = Normal()
LEADER = Leader()


# ---------------------------------------------------------------------------
# W-MSR filter and update


def wmsr_filter(
    agent: int, own: float, incoming: Iterable[tuple[int, float]], f: int
) -> list[tuple[int, float]]:
    """W-MSR outlier removal relative to the agent's own value.

    Among incoming values strictly greater than ``own``, the min(F, count)
    largest are removed; symmetrically for values strictly less.  The agent's
    own value is always retained.  Returns retained (sender, value) pairs,
    including (agent, own), sorted by sender id.
    """
    if f < 0:
        raise ValueError(f"F must be >= 0, got {f}")
    higher = []
    lower = []
    retained = [(agent, own)]
    for j, v in incoming:
        if v > own:
            higher.append((v, j))
        elif v < own:
            lower.append((v, j))
        else:
            retained.append((j, v))
    higher.sort(key=lambda p: (p[0], p[1]))
    lower.sort(key=lambda p: (p[0], -p[1]))
    retained.extend((j, v) for v, j in higher[: len(higher) - min(f, len(higher))])
    retained.extend((j, v) for v, j in lower[min(f, len(lower)):])
    retained.sort()
    return retained


@dataclass(frozen=True)
class WeightScheme:
    """Convex-combination weights over the retained set.

    With ``table=None`` every retained value gets weight 1/|retained| (which
    satisfies the floor alpha whenever alpha <= 1/(max in-degree + 1)).
    Otherwise ``table[(agent, sender)]`` holds fixed per-edge weights that are
    renormalized over the retained set each round; since renormalization can
    only scale weights up, entries >= alpha keep the floor.
    """

    alpha: float
    table: Mapping[tuple[int, int], float] | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.table is not None:
            frozen = {}
            for key, w in dict(self.table).items():
                i, j = key
                if w < self.alpha:
                    raise ConfigError(
                        f"table weight w[{i},{j}]={w} is below the floor alpha={self.alpha}"
                    )
                frozen[(int(i), int(j))] = float(w)
            object.__setattr__(self, "table", frozen)


def default_alpha(g: Digraph) -> float:
    """Largest floor the equal rule can always honor: 1/(max in-degree + 1)."""
    return 1.0 / (g.max_in_degree + 1)


def wmsr_weights(
    agent: int, retained_ids: Sequence[int], scheme: WeightScheme
) -> dict[int, float]:
    """Weights for one update; zero outside the retained set, floor alpha, sum 1."""
    m = len(retained_ids)
    if m == 0:
        raise ValueError("retained set must be nonempty")
    if scheme.table is None:
        if scheme.alpha > 1.0 / m + 1e-15:
            raise ConfigError(
                f"alpha={scheme.alpha} infeasible for retained set of size {m}"
            )
        w = 1.0 / m
        return {j: w for j in retained_ids}
    raw = {}
    for j in retained_ids:
        try:
            raw[j] = scheme.table[(agent, j)]
        except KeyError:
            raise ConfigError(f"weight table missing entry for edge ({agent}, {j})") from None
    total = sum(raw.values())
    return {j: w / total for j, w in raw.items()}


def wmsr_update(
    agent: int, retained: Sequence[tuple[int, float]], scheme: WeightScheme
) -> float:
    """Convex combination of the retained values under the weight scheme.

    The result is clamped to [min retained, max retained] to keep summation
    round-off from escaping the hull, and a retained set with a single common
    value returns that value exactly.
    """
    if not retained:
        raise ValueError("retained set must be nonempty")
    values = [v for _, v in retained]
    lo, hi = min(values), max(values)
    if lo == hi:
        return lo
    weights = wmsr_weights(agent, [j for j, _ in retained], scheme)
    x = math.fsum(weights[j] * v for j, v in retained)
    return min(max(x, lo), hi)


# ---------------------------------------------------------------------------
# F-local validation


def validate_f_local(
    g: Digraph, adversaries: Iterable[int], f: int
) -> tuple[bool, int | None]:
    """Check that no non-adversarial agent has more than F adversaries among
    its inclusive in-neighbors.  Returns (ok, first violating agent or None).
    """
    if f < 0:
        raise ValueError(f"F must be >= 0, got {f}")
    adv = frozenset(adversaries)
    for v in adv:
        if not (1 <= v <= g.n):
            raise ConfigError(f"adversary id {v} outside 1..{g.n}")
    for i in g.vertices:
        if i in adv:
            continue
        if len(g.inclusive_neighbors(i) & adv) > f:
            return False, i
    return True, None
