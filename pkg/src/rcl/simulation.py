"""Synchronous round engine producing trajectories, plus convergence and
envelope metrics, trajectory export, and the JSON configuration format.

Rounds are lockstep with perfect delivery: round t+1 states are computed only
from round-t delivered values.  Runs are deterministic given (config, seed),
independent of the worker count used for per-agent updates.
"""

from __future__ import annotations

import csv
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .graph import Digraph, GraphError, graph_from_json, graph_to_json, make_k_circulant, make_undirected_circulant
from .protocol import (
    Adversary,
    AgentRole,
    ByzantinePerEdge,
    ConfigError,
    ConstantHold,
    Leader,
    Normal,
    NORMAL,
    Ramp,
    ReferenceSignal,
    ScalarStrategy,
    Scripted,
    Sinusoid,
    WeightScheme,
    default_alpha,
    validate_f_local,
    wmsr_filter,
    wmsr_update,
)


def role_name(role: AgentRole) -> str:
    if isinstance(role, Normal):
        return "normal"
    if isinstance(role, Leader):
        return "leader"
    return "adversary"


@dataclass(frozen=True)
class SimConfig:
    """Full description of one simulation run.

    Roles default to Normal for unlisted agents.  ``init`` is either a
    (low, high) uniform range sampled per agent from ``seed``, or an explicit
    value per agent; leader initial states are overridden to the reference
    value at round 0, and adversary broadcasts follow their strategy from
    round 0 on.  With ``strict_f_local`` the adversary set must pass the
    F-local check at construction.
    """

    graph: Digraph
    f: int
    horizon: int
    roles: Mapping[int, AgentRole] = field(default_factory=dict)
    reference: ReferenceSignal | None = None
    scheme: WeightScheme | None = None
    init: tuple[float, float] | Mapping[int, float] = (-25.0, 25.0)
    seed: int = 0
    strict_f_local: bool = True

    def __post_init__(self) -> None:
        g = self.graph
        if self.f < 0:
            raise ConfigError(f"F must be >= 0, got {self.f}")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        roles = dict(self.roles)
        for i in roles:
            if not (1 <= i <= g.n):
                raise ConfigError(f"/roles/{i}: unknown agent id")
            if not isinstance(roles[i], (Normal, Leader, Adversary)):
                raise ConfigError(f"/roles/{i}: not a role: {roles[i]!r}")
        full_roles = {i: roles.get(i, NORMAL) for i in g.vertices}
        object.__setattr__(self, "roles", full_roles)

        if self.leaders and self.reference is None:
            raise ConfigError("leaders are present but no reference signal is configured")

        scheme = self.scheme or WeightScheme(default_alpha(g))
        bound = 1.0 / (g.max_in_degree + 1)
        if scheme.table is None and scheme.alpha > bound + 1e-15:
            raise ConfigError(
                f"alpha={scheme.alpha} infeasible: equal weighting needs alpha <= "
                f"1/(max in-degree + 1) = {bound}"
            )
        if scheme.table is not None:
            for i in g.vertices:
                total = 0.0
                for j in sorted(g.inclusive_neighbors(i)):
                    if (i, j) not in scheme.table:
                        raise ConfigError(f"weight table missing entry for edge ({i}, {j})")
                    total += scheme.table[(i, j)]
                if abs(total - 1.0) > 1e-9:
                    raise ConfigError(
                        f"weight table rows must sum to 1 over inclusive neighbors; "
                        f"agent {i} sums to {total}"
                    )
        object.__setattr__(self, "scheme", scheme)

        if isinstance(self.init, Mapping):
            missing = [i for i in g.vertices if i not in self.init]
            if missing:
                raise ConfigError(f"/init/values: missing agents {missing}")
            extra = [i for i in self.init if not (1 <= i <= g.n)]
            if extra:
                raise ConfigError(f"/init/values: unknown agents {extra}")
            object.__setattr__(self, "init", {i: float(v) for i, v in self.init.items()})
        else:
            lo, hi = self.init
            if not (lo <= hi):
                raise ConfigError(f"/init/range: need low <= high, got [{lo}, {hi}]")
            object.__setattr__(self, "init", (float(lo), float(hi)))

        for i, role in full_roles.items():
            if isinstance(role, Adversary) and isinstance(role.strategy, ByzantinePerEdge):
                out = self.graph.out_neighbors(i)
                keys = set(role.strategy.signals)
                if keys != out:
                    raise ConfigError(
                        f"/roles/{i}/adversary: byzantine signals must cover the "
                        f"out-neighbors {sorted(out)}, got {sorted(keys)}"
                    )

        if self.strict_f_local:
            ok, bad = validate_f_local(g, self.adversaries, self.f)
            if not ok:
                raise ConfigError(
                    f"adversary set is not F-local for F={self.f}: agent {bad} has too many "
                    "adversarial inclusive in-neighbors (set strict_f_local=False to override)"
                )

    @property
    def normals(self) -> tuple[int, ...]:
        return tuple(i for i in self.graph.vertices if isinstance(self.roles[i], Normal))

    @property
    def leaders(self) -> tuple[int, ...]:
        return tuple(i for i in self.graph.vertices if isinstance(self.roles[i], Leader))

    @property
    def adversaries(self) -> tuple[int, ...]:
        return tuple(i for i in self.graph.vertices if isinstance(self.roles[i], Adversary))

    def with_horizon(self, horizon: int) -> "SimConfig":
        return replace(self, horizon=horizon)

    def with_seed(self, seed: int) -> "SimConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded run: per-round broadcast per agent, per-edge values for
    Byzantine senders, and the realized reference series."""

    config: SimConfig
    states: np.ndarray
    reference: np.ndarray | None
    edge_values: Mapping[tuple[int, int], np.ndarray]

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1

    @property
    def n(self) -> int:
        return self.states.shape[1]

    def broadcast(self, t: int, agent: int) -> float:
        return float(self.states[t, agent - 1])

    def delivered(self, t: int, sender: int, receiver: int) -> float:
        """Value receiver heard from sender at round t (differs from the
        broadcast only for Byzantine senders)."""
        arr = self.edge_values.get((sender, receiver))
        if arr is not None:
            return float(arr[t])
        return float(self.states[t, sender - 1])


def _initial_values(config: SimConfig) -> dict[int, float]:
    if isinstance(config.init, Mapping):
        return dict(config.init)
    lo, hi = config.init
    rng = random.Random(config.seed)
    return {i: rng.uniform(lo, hi) for i in config.graph.vertices}


def run(config: SimConfig, jobs: int = 1) -> Trajectory:
    """Execute the configured run and record its trajectory.

    ``jobs`` > 1 spreads per-agent updates within a round over a thread pool;
    results are identical for any worker count.
    """
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    g = config.graph
    n, horizon, f = g.n, config.horizon, config.f
    scheme = config.scheme
    ref_series = None
    if config.reference is not None:
        ref_series = np.array([config.reference.value_at(t) for t in range(horizon + 1)])

    # adversary broadcast/edge series depend only on the round, so they are
    # laid out up front
    rounds = range(horizon + 1)
    adversary_series: dict[int, np.ndarray] = {}
    edge_values: dict[tuple[int, int], np.ndarray] = {}
    for i in config.adversaries:
        strategy = config.roles[i].strategy
        if isinstance(strategy, ByzantinePerEdge):
            for j, sig in sorted(strategy.signals.items()):
                edge_values[(i, j)] = np.array([sig.value_at(t) for t in rounds])
            out = sorted(strategy.signals)
            if out:
                adversary_series[i] = edge_values[(i, out[0])]
            else:
                adversary_series[i] = np.zeros(horizon + 1)
        else:
            adversary_series[i] = np.array([strategy.value_at(t) for t in rounds])

    states = np.empty((horizon + 1, n))
    init = _initial_values(config)
    for i in g.vertices:
        role = config.roles[i]
        if isinstance(role, Leader):
            states[0, i - 1] = ref_series[0]
        elif isinstance(role, Adversary):
            states[0, i - 1] = adversary_series[i][0]
        else:
            states[0, i - 1] = init[i]

    normals = config.normals
    in_lists = {i: sorted(g.in_neighbors(i)) for i in normals}

    def step(t: int, i: int) -> float:
        own = float(states[t, i - 1])
        incoming = []
        for j in in_lists[i]:
            arr = edge_values.get((j, i))
            val = float(arr[t]) if arr is not None else float(states[t, j - 1])
            incoming.append((j, val))
        retained = wmsr_filter(i, own, incoming, f)
        return wmsr_update(i, retained, scheme)

    pool = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for t in range(horizon):
            if pool is not None:
                updates = list(pool.map(lambda i: step(t, i), normals))
            else:
                updates = [step(t, i) for i in normals]
            for i, x in zip(normals, updates):
                states[t + 1, i - 1] = x
            for i in config.leaders:
                states[t + 1, i - 1] = ref_series[t + 1]
            for i in config.adversaries:
                states[t + 1, i - 1] = adversary_series[i][t + 1]
    finally:
        if pool is not None:
            pool.shutdown()

    states.setflags(write=False)
    if ref_series is not None:
        ref_series.setflags(write=False)
    for arr in edge_values.values():
        arr.setflags(write=False)
    return Trajectory(config, states, ref_series, edge_values)


def replay_states(traj: Trajectory) -> np.ndarray:
    """Recompute every normal transition from the recorded delivered values.

    Returns an array shaped like ``traj.states`` holding the recomputed
    normal-agent states for rounds >= 1 (other entries copied); a compliant
    trajectory reproduces itself exactly.
    """
    config = traj.config
    out = np.array(traj.states)
    in_lists = {i: sorted(config.graph.in_neighbors(i)) for i in config.normals}
    for t in range(traj.horizon):
        for i in config.normals:
            incoming = [(j, traj.delivered(t, j, i)) for j in in_lists[i]]
            retained = wmsr_filter(i, traj.broadcast(t, i), incoming, config.f)
            out[t + 1, i - 1] = wmsr_update(i, retained, config.scheme)
    return out


def verify_replay(traj: Trajectory) -> bool:
    return bool(np.array_equal(replay_states(traj), traj.states))


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class IntervalReport:
    """Envelope behavior on one maximal constant-reference interval [start, end)."""

    start: int
    end: int
    envelope_monotone: bool
    interval_invariant: bool
    end_error: float | None


@dataclass(frozen=True, eq=False)
class Metrics:
    lower: np.ndarray
    upper: np.ndarray
    tracking_error: np.ndarray | None
    disagreement: np.ndarray
    tol: float
    convergence_round: int | None
    consensus_round: int | None
    final_error: float | None
    final_disagreement: float
    intervals: tuple[IntervalReport, ...]

    @property
    def envelope_monotone(self) -> bool:
        return all(iv.envelope_monotone for iv in self.intervals)

    @property
    def interval_invariant(self) -> bool:
        return all(iv.interval_invariant for iv in self.intervals)

    @property
    def converged(self) -> bool:
        if self.tracking_error is not None:
            return self.convergence_round is not None
        return self.consensus_round is not None


def envelope(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Per-round min and max over normal agents, and the reference if present."""
    normals = traj.config.normals
    columns = [traj.states[:, i - 1] for i in normals]
    if traj.reference is not None:
        columns.append(traj.reference)
    if not columns:
        raise ConfigError("envelope undefined: no normal agents and no reference")
    stacked = np.stack(columns, axis=1)
    return stacked.min(axis=1), stacked.max(axis=1)


def tracking_error(traj: Trajectory) -> np.ndarray | None:
    """Per-round max over normal agents of |x_i - x_r|; None without a reference."""
    if traj.reference is None:
        return None
    normals = traj.config.normals
    if not normals:
        return np.zeros(traj.horizon + 1)
    cols = np.stack([traj.states[:, i - 1] for i in normals], axis=1)
    return np.abs(cols - traj.reference[:, None]).max(axis=1)


def disagreement(traj: Trajectory) -> np.ndarray:
    """Per-round spread (max - min) over normal agents."""
    normals = traj.config.normals
    if not normals:
        return np.zeros(traj.horizon + 1)
    cols = np.stack([traj.states[:, i - 1] for i in normals], axis=1)
    return cols.max(axis=1) - cols.min(axis=1)


def _sustained_round(series: np.ndarray, tol: float) -> int | None:
    """Smallest t with series[s] <= tol for all s in [t, end]; None if the
    series ends above tol."""
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    above = np.nonzero(series > tol)[0]
    if above.size == 0:
        return 0
    t = int(above[-1]) + 1
    return t if t < series.size else None


def convergence_round(traj: Trajectory, tol: float) -> int | None:
    err = tracking_error(traj)
    if err is None:
        return None
    return _sustained_round(err, tol)


def consensus_round(traj: Trajectory, tol: float) -> int | None:
    return _sustained_round(disagreement(traj), tol)


def constant_intervals(traj: Trajectory) -> list[tuple[int, int]]:
    """Maximal constant-reference intervals [t1, t2) covering the run; a
    reference-free run counts as one interval."""
    if traj.config.reference is None:
        return [(0, traj.horizon + 1)]
    return traj.config.reference.constant_intervals(traj.horizon)


def compute_metrics(traj: Trajectory, tol: float = 1e-6, slack: float = 1e-12) -> Metrics:
    lower, upper = envelope(traj)
    err = tracking_error(traj)
    disag = disagreement(traj)
    non_adversarial = [i for i in traj.config.graph.vertices
                       if not isinstance(traj.config.roles[i], Adversary)]
    intervals = []
    for t1, t2 in constant_intervals(traj):
        seg_lower, seg_upper = lower[t1:t2], upper[t1:t2]
        monotone = bool(
            np.all(np.diff(seg_lower) >= -slack) and np.all(np.diff(seg_upper) <= slack)
        )
        if non_adversarial:
            cols = traj.states[t1:t2, [i - 1 for i in non_adversarial]]
            invariant = bool(
                np.all(cols >= lower[t1] - slack) and np.all(cols <= upper[t1] + slack)
            )
        else:
            invariant = True
        end_error = float(err[t2 - 1]) if err is not None else None
        intervals.append(IntervalReport(t1, t2, monotone, invariant, end_error))
    return Metrics(
        lower=lower,
        upper=upper,
        tracking_error=err,
        disagreement=disag,
        tol=tol,
        convergence_round=convergence_round(traj, tol),
        consensus_round=consensus_round(traj, tol),
        final_error=float(err[-1]) if err is not None else None,
        final_disagreement=float(disag[-1]),
        intervals=tuple(intervals),
    )


def metrics_to_dict(m: Metrics) -> dict:
    return {
        "tol": m.tol,
        "converged": m.converged,
        "convergence_round": m.convergence_round,
        "final_error": m.final_error,
        "consensus_round": m.consensus_round,
        "final_disagreement": m.final_disagreement,
        "envelope": {
            "monotone": m.envelope_monotone,
            "interval_invariant": m.interval_invariant,
            "intervals": [
                {
                    "start": iv.start,
                    "end": iv.end,
                    "envelope_monotone": iv.envelope_monotone,
                    "interval_invariant": iv.interval_invariant,
                    "end_error": iv.end_error,
                }
                for iv in m.intervals
            ],
        },
    }


# ---------------------------------------------------------------------------
# trajectory export


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> None:
    """Columns: round, agent, role, value, reference (blank without a reference)."""
    config = traj.config
    names = {i: role_name(config.roles[i]) for i in config.graph.vertices}
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["round", "agent", "role", "value", "reference"])
        for t in range(traj.horizon + 1):
            ref = repr(float(traj.reference[t])) if traj.reference is not None else ""
            for i in config.graph.vertices:
                writer.writerow([t, i, names[i], repr(float(traj.states[t, i - 1])), ref])


def write_edges_csv(traj: Trajectory, path: str | Path) -> None:
    """Per-edge delivered values for Byzantine senders: round, from, to, value."""
    edges = sorted(traj.edge_values)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["round", "from", "to", "value"])
        for t in range(traj.horizon + 1):
            for u, v in edges:
                writer.writerow([t, u, v, repr(float(traj.edge_values[(u, v)][t]))])


# ---------------------------------------------------------------------------
# JSON configuration format


def _scalar_strategy_from_dict(obj: Any, path: str) -> ScalarStrategy:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError(f"{path}: strategy must be an object with a 'type' key")
    kind = obj["type"]
    fields = {k: v for k, v in obj.items() if k != "type"}
    try:
        if kind == "constant":
            return ConstantHold(**fields)
        if kind == "sinusoid":
            return Sinusoid(**fields)
        if kind == "ramp":
            return Ramp(**fields)
        if kind == "scripted":
            vals = fields.pop("values")
            if fields:
                raise TypeError(f"unexpected fields {sorted(fields)}")
            return Scripted(tuple(vals))
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"{path}: bad fields for {kind!r} strategy: {exc}") from None
    raise ConfigError(f"{path}/type: unknown scalar strategy {kind!r}")


def _strategy_from_dict(obj: Any, path: str) -> Adversary:
    if isinstance(obj, dict) and obj.get("type") == "byzantine":
        edges = obj.get("edges")
        if not isinstance(edges, dict):
            raise ConfigError(f"{path}/edges: byzantine strategy needs an 'edges' object")
        signals = {}
        for key, sub in edges.items():
            try:
                recipient = int(key)
            except ValueError:
                raise ConfigError(f"{path}/edges/{key}: recipient id must be an integer") from None
            signals[recipient] = _scalar_strategy_from_dict(sub, f"{path}/edges/{key}")
        return Adversary(ByzantinePerEdge(signals))
    return Adversary(_scalar_strategy_from_dict(obj, path))


def _strategy_to_dict(strategy) -> dict:
    if isinstance(strategy, ConstantHold):
        return {"type": "constant", "value": strategy.value}
    if isinstance(strategy, Sinusoid):
        return {
            "type": "sinusoid",
            "amplitude": strategy.amplitude,
            "period": strategy.period,
            "phase": strategy.phase,
            "offset": strategy.offset,
        }
    if isinstance(strategy, Ramp):
        return {"type": "ramp", "slope": strategy.slope, "intercept": strategy.intercept}
    if isinstance(strategy, Scripted):
        return {"type": "scripted", "values": list(strategy.values)}
    if isinstance(strategy, ByzantinePerEdge):
        return {
            "type": "byzantine",
            "edges": {str(k): _strategy_to_dict(v) for k, v in sorted(strategy.signals.items())},
        }
    raise ConfigError(f"unknown strategy {strategy!r}")


def _graph_from_config(obj: Any, path: str) -> Digraph:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: graph must be an object")
    try:
        if "circulant" in obj:
            n, k = obj["circulant"]
            return make_k_circulant(int(n), int(k))
        if "undirected_circulant" in obj:
            n, offsets = obj["undirected_circulant"]
            return make_undirected_circulant(int(n), [int(a) for a in offsets])
        if "edges" in obj:
            return graph_from_json(obj)
    except (GraphError, ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(
        f"{path}: expected one of 'circulant', 'undirected_circulant', or 'n'+'edges'"
    )


def config_from_dict(obj: Any) -> SimConfig:
    """Build a SimConfig from the JSON configuration object.

    Violations are reported with JSON-pointer-style paths.
    """
    if not isinstance(obj, dict):
        raise ConfigError("/: configuration must be a JSON object")
    known = {
        "graph", "f", "horizon", "seed", "alpha", "weight_table", "roles",
        "reference", "init", "strict_f_local",
    }
    for key in obj:
        if key not in known:
            raise ConfigError(f"/{key}: unknown configuration key")
    if "graph" not in obj:
        raise ConfigError("/graph: required")
    graph = _graph_from_config(obj["graph"], "/graph")

    def _int(key: str, default=None, minimum=None):
        if key not in obj:
            if default is None:
                raise ConfigError(f"/{key}: required")
            return default
        v = obj[key]
        if not isinstance(v, int) or isinstance(v, bool):
            raise ConfigError(f"/{key}: must be an integer, got {v!r}")
        if minimum is not None and v < minimum:
            raise ConfigError(f"/{key}: must be >= {minimum}, got {v}")
        return v

    f = _int("f", minimum=0)
    horizon = _int("horizon", minimum=1)
    seed = _int("seed", default=0)

    roles: dict[int, AgentRole] = {}
    for key, val in (obj.get("roles") or {}).items():
        try:
            agent = int(key)
        except ValueError:
            raise ConfigError(f"/roles/{key}: agent id must be an integer") from None
        path = f"/roles/{key}"
        if val == "normal":
            roles[agent] = Normal()
        elif val == "leader":
            roles[agent] = Leader()
        elif isinstance(val, dict) and "adversary" in val:
            roles[agent] = _strategy_from_dict(val["adversary"], f"{path}/adversary")
        else:
            raise ConfigError(f"{path}: expected 'normal', 'leader', or an adversary object")

    reference = None
    if obj.get("reference") is not None:
        ref = obj["reference"]
        if not isinstance(ref, dict):
            raise ConfigError("/reference: must be an object or null")
        try:
            if "constant" in ref:
                reference = ReferenceSignal.constant(float(ref["constant"]))
            elif "breakpoints" in ref:
                reference = ReferenceSignal(tuple((int(t), float(v)) for t, v in ref["breakpoints"]))
            else:
                raise ConfigError("/reference: expected 'constant' or 'breakpoints'")
        except (ConfigError, TypeError, ValueError) as exc:
            raise ConfigError(f"/reference: {exc}") from None

    init: tuple[float, float] | dict[int, float] = (-25.0, 25.0)
    if "init" in obj:
        spec = obj["init"]
        if isinstance(spec, dict) and "range" in spec:
            lo, hi = spec["range"]
            init = (float(lo), float(hi))
        elif isinstance(spec, dict) and "values" in spec:
            try:
                init = {int(k): float(v) for k, v in spec["values"].items()}
            except (ValueError, AttributeError):
                raise ConfigError("/init/values: must map agent ids to numbers") from None
        else:
            raise ConfigError("/init: expected {'range': [lo, hi]} or {'values': {...}}")

    scheme = None
    if "alpha" in obj or "weight_table" in obj:
        alpha = obj.get("alpha")
        if alpha is None:
            alpha = default_alpha(graph)
        if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
            raise ConfigError(f"/alpha: must be a number, got {alpha!r}")
        table = None
        if obj.get("weight_table") is not None:
            table = {}
            for i_key, row in obj["weight_table"].items():
                if not isinstance(row, dict):
                    raise ConfigError(f"/weight_table/{i_key}: must be an object")
                for j_key, w in row.items():
                    try:
                        table[(int(i_key), int(j_key))] = float(w)
                    except ValueError:
                        raise ConfigError(
                            f"/weight_table/{i_key}/{j_key}: bad entry"
                        ) from None
        try:
            scheme = WeightScheme(float(alpha), table)
        except ConfigError as exc:
            raise ConfigError(f"/alpha: {exc}") from None

    strict = obj.get("strict_f_local", True)
    if not isinstance(strict, bool):
        raise ConfigError(f"/strict_f_local: must be a boolean, got {strict!r}")

    return SimConfig(
        graph=graph,
        f=f,
        horizon=horizon,
        roles=roles,
        reference=reference,
        scheme=scheme,
        init=init,
        seed=seed,
        strict_f_local=strict,
    )


def config_to_dict(config: SimConfig) -> dict:
    roles = {}
    for i in config.graph.vertices:
        role = config.roles[i]
        if isinstance(role, Leader):
            roles[str(i)] = "leader"
        elif isinstance(role, Adversary):
            roles[str(i)] = {"adversary": _strategy_to_dict(role.strategy)}
    out: dict[str, Any] = {
        "graph": graph_to_json(config.graph),
        "f": config.f,
        "horizon": config.horizon,
        "seed": config.seed,
        "roles": roles,
        "strict_f_local": config.strict_f_local,
        "alpha": config.scheme.alpha,
    }
    if config.scheme.table is not None:
        table: dict[str, dict[str, float]] = {}
        for (i, j), w in sorted(config.scheme.table.items()):
            table.setdefault(str(i), {})[str(j)] = w
        out["weight_table"] = table
    if config.reference is not None:
        out["reference"] = {"breakpoints": [[t, v] for t, v in config.reference.breakpoints]}
    if isinstance(config.init, Mapping):
        out["init"] = {"values": {str(i): v for i, v in sorted(config.init.items())}}
    else:
        out["init"] = {"range": list(config.init)}
    return out
