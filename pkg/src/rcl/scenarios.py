"""Canned experiment scenarios: four reference simulations on circulant
digraphs, two constructions showing that plain r-/(r,s)-robustness cannot
guarantee reference tracking, and the leader-count necessity demonstration
with its converging contrast case.

Every scenario carries machine-checkable robustness preconditions that are
asserted before the run, and an expected outcome that the runner evaluates
against the recorded trajectory.  Waveform parameters, switch rounds, and
reference levels are artifact defaults chosen to exhibit each effect clearly;
override them through the factories where exposed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Any, Callable, Union

import numpy as np

from .graph import Digraph, make_k_circulant
from .protocol import (
    Adversary,
    AgentRole,
    ConstantHold,
    Leader,
    Ramp,
    ReferenceSignal,
    Sinusoid,
    validate_f_local,
)
from .robustness import (
    circulant_certificate,
    circulant_r_robustness_lower_bound,
    is_r_robust,
    is_rs_robust,
)
from .simulation import Metrics, SimConfig, Trajectory, compute_metrics, run


class ScenarioError(RuntimeError):
    """Scenario construction failed (e.g. counterexample search exhausted)."""


class PreconditionError(RuntimeError):
    """A scenario's robustness precondition did not hold."""


# ---------------------------------------------------------------------------
# expected outcomes


@dataclass(frozen=True)
class ConvergesToReference:
    tol: float = 1e-6


@dataclass(frozen=True)
class StaysAtValue:
    value: float


@dataclass(frozen=True)
class NoConvergence:
    min_residual: float


@dataclass(frozen=True)
class ConsensusWithinHull:
    """Normal agents agree to within tol and end inside the hull of their
    initial values (the leaderless objective)."""

    tol: float = 1e-6


ExpectedOutcome = Union[ConvergesToReference, StaysAtValue, NoConvergence, ConsensusWithinHull]


def outcome_tol(expected: ExpectedOutcome) -> float:
    if isinstance(expected, (ConvergesToReference, ConsensusWithinHull)):
        return expected.tol
    return 1e-6


def evaluate_outcome(
    expected: ExpectedOutcome, traj: Trajectory, metrics: Metrics
) -> tuple[bool, str]:
    normals = traj.config.normals
    if isinstance(expected, ConvergesToReference):
        ok = metrics.convergence_round is not None
        return ok, (
            f"convergence_round={metrics.convergence_round}, "
            f"final_error={metrics.final_error:.3e} (tol={expected.tol:g})"
        )
    if isinstance(expected, StaysAtValue):
        cols = traj.states[:, [i - 1 for i in normals]]
        ok = bool(np.all(cols == expected.value))
        return ok, f"all normal states == {expected.value!r} at every round: {ok}"
    if isinstance(expected, NoConvergence):
        err = metrics.tracking_error
        if err is None:
            return False, "no reference signal, residual undefined"
        ok = float(err.min()) >= expected.min_residual
        return ok, (
            f"min residual {float(err.min()):.6g} vs required {expected.min_residual:g}"
        )
    if isinstance(expected, ConsensusWithinHull):
        cols = traj.states[:, [i - 1 for i in normals]]
        lo, hi = cols[0].min(), cols[0].max()
        in_hull = bool(np.all(cols[-1] >= lo) and np.all(cols[-1] <= hi))
        ok = metrics.final_disagreement <= expected.tol and in_hull
        return ok, (
            f"final_disagreement={metrics.final_disagreement:.3e} (tol={expected.tol:g}), "
            f"finals within initial hull [{lo:.3f}, {hi:.3f}]: {in_hull}"
        )
    raise TypeError(f"unknown expected outcome {expected!r}")


# ---------------------------------------------------------------------------
# preconditions


@dataclass(frozen=True)
class PreconditionResult:
    name: str
    ok: bool
    detail: Any


@dataclass(frozen=True)
class Precondition:
    name: str
    check: Callable[[], tuple[bool, Any]]

    def evaluate(self) -> PreconditionResult:
        ok, detail = self.check()
        return PreconditionResult(self.name, bool(ok), detail)


def _certificate_precondition(name: str, n: int, k: int, leaders, f: int, mode: str) -> Precondition:
    def check():
        report = circulant_certificate(n, k, leaders, f, mode)
        return report.verdict, report.to_json()

    return Precondition(name, check)


# ---------------------------------------------------------------------------
# scenario plumbing


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    scenario: "Scenario"
    config: SimConfig
    trajectory: Trajectory
    metrics: Metrics
    preconditions: tuple[PreconditionResult, ...]
    outcome_ok: bool
    outcome_detail: str


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    description: str
    expected: ExpectedOutcome
    default_seed: int
    config_factory: Callable[[int], SimConfig]
    preconditions: tuple[Precondition, ...] = ()

    def config(self, seed: int | None = None) -> SimConfig:
        return self.config_factory(self.default_seed if seed is None else seed)

    def check_preconditions(self) -> tuple[PreconditionResult, ...]:
        """Evaluate all preconditions; raise PreconditionError on the first failure."""
        results = []
        for pre in self.preconditions:
            result = pre.evaluate()
            results.append(result)
            if not result.ok:
                raise PreconditionError(
                    f"scenario {self.name!r}: precondition {result.name!r} failed: {result.detail}"
                )
        return tuple(results)

    def run(
        self,
        seed: int | None = None,
        horizon: int | None = None,
        jobs: int = 1,
        check: bool = True,
    ) -> ScenarioResult:
        if check:
            pre_results = self.check_preconditions()
        else:
            pre_results = tuple(pre.evaluate() for pre in self.preconditions)
        config = self.config(seed)
        if horizon is not None:
            config = config.with_horizon(horizon)
        traj = run(config, jobs=jobs)
        metrics = compute_metrics(traj, tol=outcome_tol(self.expected))
        ok, detail = evaluate_outcome(self.expected, traj, metrics)
        return ScenarioResult(self, config, traj, metrics, pre_results, ok, detail)


def _sinusoids(ids: tuple[int, ...]) -> dict[int, AgentRole]:
    return {
        i: Adversary(Sinusoid(amplitude=50.0, period=40.0, phase=2.0 * math.pi * idx / len(ids)))
        for idx, i in enumerate(ids)
    }


# ---------------------------------------------------------------------------
# reference simulations


def sim1() -> Scenario:
    """Leaderless resilient consensus: 20 agents on C_20(1..15), three
    sinusoidal malicious agents, F=3.  Normal agents agree on a value inside
    the hull of their initial states."""
    n, k, f = 20, 15, 3
    adversary_ids = (1, 6, 15)
    graph = make_k_circulant(n, k)

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=graph,
            f=f,
            horizon=500,
            roles=_sinusoids(adversary_ids),
            seed=seed,
        )

    def bound_check():
        bound = circulant_r_robustness_lower_bound(n, k)
        return bound >= 2 * f + 1, {"r_robustness_lower_bound": bound, "required": 2 * f + 1}

    return Scenario(
        name="sim1",
        description=(
            "Leaderless W-MSR consensus on C_20(1..15) with F=3 and three "
            "sinusoidal malicious agents {1, 6, 15}."
        ),
        expected=ConsensusWithinHull(1e-6),
        default_seed=101,
        config_factory=factory,
        preconditions=(Precondition("circulant_r_robustness_bound", bound_check),),
    )


def _attacked_leader_roles(
    leader_ids: tuple[int, ...],
    attacked: tuple[int, ...],
    strategies: dict[int, Adversary] | None = None,
) -> dict[int, AgentRole]:
    roles: dict[int, AgentRole] = {i: Leader() for i in leader_ids if i not in attacked}
    if strategies is None:
        roles.update(_sinusoids(attacked))
    else:
        roles.update(strategies)
    return roles


def sim2() -> Scenario:
    """Reference tracking without trusted leaders: C_30(1..15), designated
    leaders {22..28} of which {22, 26, 28} are compromised, F=3, constant
    reference 40 outside the initial range."""
    n, k, f = 30, 15, 3
    leader_ids = tuple(range(22, 29))
    attacked = (22, 26, 28)
    graph = make_k_circulant(n, k)

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=graph,
            f=f,
            horizon=500,
            roles=_attacked_leader_roles(leader_ids, attacked),
            reference=ReferenceSignal.constant(40.0),
            seed=seed,
        )

    return Scenario(
        name="sim2",
        description=(
            "Reference tracking to 40 on C_30(1..15) with designated leaders "
            "{22..28}, attacked leaders {22, 26, 28}, F=3."
        ),
        expected=ConvergesToReference(1e-6),
        default_seed=202,
        config_factory=factory,
        preconditions=(
            _certificate_precondition("strongly_2f1_robust_certificate", n, k, leader_ids, f, "strong"),
        ),
    )


_SIM3_REFERENCE = ReferenceSignal(((0, 30.0), (100, -20.0), (200, 0.0)))


def sim3() -> Scenario:
    """Switching reference: C_30(1..12), leaders {22..28} with {22, 26, 28}
    attacked, reference stepping 30 -> -20 -> 0; tracking on every constant
    interval."""
    n, k, f = 30, 12, 3
    leader_ids = tuple(range(22, 29))
    attacked = (22, 26, 28)
    graph = make_k_circulant(n, k)

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=graph,
            f=f,
            horizon=300,
            roles=_attacked_leader_roles(leader_ids, attacked),
            reference=_SIM3_REFERENCE,
            seed=seed,
        )

    return Scenario(
        name="sim3",
        description=(
            "Switching reference (30, -20, 0 at rounds 0/100/200) on C_30(1..12) "
            "with attacked leaders, F=3."
        ),
        expected=ConvergesToReference(1e-6),
        default_seed=303,
        config_factory=factory,
        preconditions=(
            _certificate_precondition("strongly_2f1_robust_certificate", n, k, leader_ids, f, "strong"),
        ),
    )


def sim4() -> Scenario:
    """As sim3, but the compromised agents broadcast unbounded ramps (two
    rising, one falling) whose values dwarf the normal state range."""
    n, k, f = 30, 12, 3
    leader_ids = tuple(range(22, 29))
    attacked = (22, 26, 28)
    ramps = {
        22: Adversary(Ramp(slope=5.0, intercept=0.0)),
        26: Adversary(Ramp(slope=-5.0, intercept=0.0)),
        28: Adversary(Ramp(slope=8.0, intercept=-400.0)),
    }
    graph = make_k_circulant(n, k)

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=graph,
            f=f,
            horizon=300,
            roles=_attacked_leader_roles(leader_ids, attacked, ramps),
            reference=_SIM3_REFERENCE,
            seed=seed,
        )

    return Scenario(
        name="sim4",
        description=(
            "As sim3 but with unbounded ramp adversaries on C_30(1..12)."
        ),
        expected=ConvergesToReference(1e-6),
        default_seed=404,
        config_factory=factory,
        preconditions=(
            _certificate_precondition("strongly_2f1_robust_certificate", n, k, leader_ids, f, "strong"),
        ),
    )


# ---------------------------------------------------------------------------
# insufficiency counterexamples

DEFAULT_SEARCH_BUDGET = 100_000
DEFAULT_A1 = 0.0
DEFAULT_A2 = 10.0


def build_rs_counterexample(
    f: int, search_seed: int = 1, budget: int = DEFAULT_SEARCH_BUDGET
) -> tuple[Digraph, tuple[int, ...], tuple[int, ...]]:
    """Randomized search for an (F+1, F+1)-robust digraph split into S1
    (F+1 designated leaders, each with >= F+1 in-neighbors outside S1) and S2
    (everyone else, each with <= F in-neighbors outside S2).

    Under W-MSR with S1 as leaders, no S2 agent ever keeps a value from
    outside S2, so S2 can never track the reference.
    """
    if f < 1:
        raise ScenarioError(f"counterexample construction needs F >= 1, got {f}")
    rng = random.Random(search_seed)
    n = 4 * f + 6
    s1 = tuple(range(1, f + 2))
    s2 = tuple(range(f + 2, n + 1))
    s1_set, s2_set = set(s1), set(s2)
    for _ in range(budget):
        edges: set[tuple[int, int]] = set()
        for i in s2:
            for j in s2:
                if i != j and rng.random() < 0.9:
                    edges.add((i, j))
        for i in s1:
            count = f + 1 + rng.randrange(0, len(s2) - f)
            edges.update((j, i) for j in rng.sample(s2, count))
        for i in s1:
            for j in s1:
                if i != j and rng.random() < 0.5:
                    edges.add((i, j))
        for j in s2:
            for i in rng.sample(s1, rng.randrange(0, f + 1)):
                edges.add((i, j))
        g = Digraph(n, frozenset(edges))
        if not all(len(g.in_neighbors(i) - s1_set) >= f + 1 for i in s1):
            continue
        if not all(len(g.in_neighbors(j) - s2_set) <= f for j in s2):
            continue
        if is_rs_robust(g, f + 1, f + 1, force=True).verdict:
            return g, s1, s2
    raise ScenarioError(
        f"no (F+1,F+1)-robust counterexample found for F={f} within {budget} attempts"
    )


def build_2f1_counterexample(
    f: int, search_seed: int = 1, budget: int = DEFAULT_SEARCH_BUDGET
) -> tuple[Digraph, tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Randomized search for a (2F+1)-robust digraph with F+1 designated
    leaders S1 where exactly F followers receive from all of S1.

    When those F followers turn malicious and hold their value, every normal
    follower has at most F in-neighbors outside its own camp and never tracks
    the reference.
    """
    if f < 1:
        raise ScenarioError(f"counterexample construction needs F >= 1, got {f}")
    rng = random.Random(search_seed)
    n = 4 * f + 6
    s1 = tuple(range(1, f + 2))
    s2 = tuple(range(f + 2, n + 1))
    s1_set = set(s1)
    for _ in range(budget):
        edges = set()
        for i in s2:
            for j in s2:
                if i != j and rng.random() < 0.9:
                    edges.add((i, j))
        for i in s1:
            count = rng.randrange(2 * f + 1, len(s2) + 1)
            edges.update((j, i) for j in rng.sample(s2, count))
        for i in s1:
            for j in s1:
                if i != j and rng.random() < 0.5:
                    edges.add((i, j))
        malicious = tuple(sorted(rng.sample(s2, f)))
        for j in malicious:
            edges.update((i, j) for i in s1)
        for j in s2:
            if j in malicious:
                continue
            for i in rng.sample(s1, rng.randrange(0, f + 1)):
                edges.add((i, j))
        g = Digraph(n, frozenset(edges))
        fully_connected = {j for j in s2 if s1_set <= g.in_neighbors(j)}
        if fully_connected != set(malicious):
            continue
        if is_r_robust(g, 2 * f + 1, force=True).verdict:
            return g, s1, s2, malicious
    raise ScenarioError(
        f"no (2F+1)-robust counterexample found for F={f} within {budget} attempts"
    )


def counterexample_rs(f: int = 1, search_seed: int = 1) -> Scenario:
    """An (F+1, F+1)-robust network whose F+1 leaders can never pull the rest."""
    g, s1, s2 = build_rs_counterexample(f, search_seed)
    s1_set, s2_set = set(s1), set(s2)
    init = {i: DEFAULT_A1 for i in s1}
    init.update({j: DEFAULT_A2 for j in s2})
    roles: dict[int, AgentRole] = {i: Leader() for i in s1}

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=g,
            f=f,
            horizon=300,
            roles=roles,
            reference=ReferenceSignal.constant(DEFAULT_A1),
            init=init,
            seed=seed,
        )

    def rs_check():
        report = is_rs_robust(g, f + 1, f + 1, force=True)
        return report.verdict, report.to_json()

    def s1_check():
        bad = [i for i in s1 if len(g.in_neighbors(i) - s1_set) < f + 1]
        return not bad, {"leaders_lacking_outside_in_neighbors": bad}

    def s2_check():
        bad = [j for j in s2 if len(g.in_neighbors(j) - s2_set) > f]
        return not bad, {"followers_exceeding_f_outside_in_neighbors": bad}

    return Scenario(
        name="counterexample-rs",
        description=(
            f"(F+1,F+1)-robust graph (F={f}, n={g.n}) whose {f + 1} leaders are "
            "walled off: every follower has at most F in-neighbors outside the "
            "follower set, so the followers never move."
        ),
        expected=NoConvergence(abs(DEFAULT_A2 - DEFAULT_A1)),
        default_seed=505,
        config_factory=factory,
        preconditions=(
            Precondition("rs_robustness_holds", rs_check),
            Precondition("leaders_have_f1_outside_in_neighbors", s1_check),
            Precondition("followers_capped_at_f_outside_in_neighbors", s2_check),
        ),
    )


def counterexample_2f1(f: int = 1, search_seed: int = 1) -> Scenario:
    """A (2F+1)-robust network defeated by F malicious followers that screen
    the only agents hearing all F+1 leaders."""
    g, s1, s2, malicious = build_2f1_counterexample(f, search_seed)
    s1_set = set(s1)
    init = {i: DEFAULT_A1 for i in s1}
    init.update({j: DEFAULT_A2 for j in s2})
    roles: dict[int, AgentRole] = {i: Leader() for i in s1}
    roles.update({j: Adversary(ConstantHold(DEFAULT_A2)) for j in malicious})

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=g,
            f=f,
            horizon=300,
            roles=roles,
            reference=ReferenceSignal.constant(DEFAULT_A1),
            init=init,
            seed=seed,
        )

    def robust_check():
        report = is_r_robust(g, 2 * f + 1, force=True)
        return report.verdict, report.to_json()

    def f_local_check():
        ok, violator = validate_f_local(g, malicious, f)
        return ok, {"violating_agent": violator}

    def adjacency_check():
        fully = sorted(j for j in s2 if s1_set <= g.in_neighbors(j))
        return (
            len(fully) <= f and set(fully) == set(malicious),
            {"followers_hearing_all_leaders": fully, "malicious": list(malicious)},
        )

    return Scenario(
        name="counterexample-2f1",
        description=(
            f"(2F+1)-robust graph (F={f}, n={g.n}) where the only followers "
            "hearing all leaders are malicious and hold their value."
        ),
        expected=NoConvergence(abs(DEFAULT_A2 - DEFAULT_A1)),
        default_seed=606,
        config_factory=factory,
        preconditions=(
            Precondition("2f1_robustness_holds", robust_check),
            Precondition("adversaries_f_local", f_local_check),
            Precondition("full_leader_adjacency_limited_to_adversaries", adjacency_check),
        ),
    )


# ---------------------------------------------------------------------------
# leader-count necessity


def _leader_deficit_parts(f: int) -> tuple[Digraph, int, int]:
    n, k = 4 * f + 8, 2 * f + 1
    return make_k_circulant(n, k), n, k


def leader_deficit_scenario(f: int = 1) -> Scenario:
    """With only F agents acting as leaders, F-local adversaries holding the
    followers' common value pin every normal agent there forever, even though
    the graph could support full tracking with one more leader."""
    graph, n, k = _leader_deficit_parts(f)
    hold = 0.0
    target = 10.0
    leader_ids = tuple(range(1, f + 1))
    window = tuple(range(1, 2 * f + 2))
    adversary_ids = tuple(range(n // 2 + 1, n // 2 + 1 + f))
    roles: dict[int, AgentRole] = {i: Leader() for i in leader_ids}
    roles.update({i: Adversary(ConstantHold(hold)) for i in adversary_ids})
    init = {i: hold for i in graph.vertices}

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=graph,
            f=f,
            horizon=500,
            roles=roles,
            reference=ReferenceSignal.constant(target),
            init=init,
            seed=seed,
        )

    return Scenario(
        name="leader-deficit",
        description=(
            f"Leader-count necessity on C_{n}(1..{k}): only F={f} leaders at "
            f"{target}, everyone else (including {f} holding adversaries) at "
            f"{hold}; normals never move."
        ),
        expected=StaysAtValue(hold),
        default_seed=707,
        config_factory=factory,
        preconditions=(
            _certificate_precondition(
                "graph_supports_2f1_leader_window", n, k, window, f, "strong"
            ),
        ),
    )


def leader_deficit_contrast(f: int = 1) -> Scenario:
    """Same graph and adversaries as leader-deficit, with F+1 leaders instead of F:
    trusted-leader tracking succeeds."""
    graph, n, k = _leader_deficit_parts(f)
    hold = 0.0
    target = 10.0
    leader_ids = tuple(range(1, f + 2))
    adversary_ids = tuple(range(n // 2 + 1, n // 2 + 1 + f))
    roles: dict[int, AgentRole] = {i: Leader() for i in leader_ids}
    roles.update({i: Adversary(ConstantHold(hold)) for i in adversary_ids})
    init = {i: hold for i in graph.vertices}

    def factory(seed: int) -> SimConfig:
        return SimConfig(
            graph=graph,
            f=f,
            horizon=500,
            roles=roles,
            reference=ReferenceSignal.constant(target),
            init=init,
            seed=seed,
        )

    return Scenario(
        name="leader-deficit-contrast",
        description=(
            f"Contrast for the leader-deficit run on C_{n}(1..{k}): F+1={f + 1} trusted leaders "
            "suffice for tracking."
        ),
        expected=ConvergesToReference(1e-6),
        default_seed=708,
        config_factory=factory,
        preconditions=(
            _certificate_precondition(
                "tlf_robust_certificate", n, k, leader_ids, f, "tlf"
            ),
        ),
    )


# ---------------------------------------------------------------------------
# registry

SCENARIO_NAMES = (
    "sim1",
    "sim2",
    "sim3",
    "sim4",
    "counterexample-rs",
    "counterexample-2f1",
    "leader-deficit",
    "leader-deficit-contrast",
)


def build_scenario(name: str, f: int | None = None) -> Scenario:
    """Look up a scenario by name; ``f`` applies to the parametric ones."""
    fixed = {"sim1": sim1, "sim2": sim2, "sim3": sim3, "sim4": sim4}
    parametric = {
        "counterexample-rs": counterexample_rs,
        "counterexample-2f1": counterexample_2f1,
        "leader-deficit": leader_deficit_scenario,
        "leader-deficit-contrast": leader_deficit_contrast,
    }
    if name in fixed:
        if f is not None:
            raise ScenarioError(f"scenario {name!r} does not take an F override")
        return fixed[name]()
    if name in parametric:
        return parametric[name]() if f is None else parametric[name](f)
    raise ScenarioError(f"unknown scenario {name!r}; known: {', '.join(SCENARIO_NAMES)}")
