"""Agent configurations, the pairwise interaction vector field, the system
potential, induced sub-system fields, and trajectory generation.

The equations of motion move each agent along the sum of its neighbor
interactions; the motion is the negative gradient flow of the potential (the
sum of pair potentials over edges).  Integration uses an embedded 5(4)
Runge-Kutta pair with PI step control: the short-range repulsion singularity
demands adaptivity, and a collision guard turns the analytic lower bound on
edge lengths into a runtime assertion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph
from .interaction import InteractionMap


class Configuration:
    """Positions of N agents in R^n, indexed consistently with graph vertices."""

    __slots__ = ("positions",)

    def __init__(self, positions):
        arr = np.array(positions, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("positions must be an (agents, dimension) array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("positions must be finite")
        arr.flags.writeable = False
        self.positions = arr

    @classmethod
    def from_flat(cls, flat: np.ndarray, dimension: int) -> "Configuration":
        return cls(np.asarray(flat, dtype=float).reshape(-1, dimension))

    @property
    def agent_count(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def flat(self) -> np.ndarray:
        return self.positions.ravel().copy()

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.positions[j] - self.positions[i]))

    def centroid(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    def translated(self, offset) -> "Configuration":
        return Configuration(self.positions + np.asarray(offset, dtype=float))

    def centered(self) -> "Configuration":
        """Same shape with the centroid moved to the origin."""
        return Configuration(self.positions - self.centroid())

    def diameter(self) -> float:
        """Largest distance over all agent pairs."""
        x = self.positions
        if x.shape[0] == 1:
            return 0.0
        gaps = x[:, None, :] - x[None, :, :]
        return float(np.sqrt((gaps * gaps).sum(axis=2).max()))

    def __repr__(self) -> str:
        return f"Configuration(<{self.agent_count} agents in R^{self.dimension}>)"


def edge_lengths(g: Graph, p: Configuration) -> np.ndarray:
    """Distance per edge, aligned with ``g.edges``."""
    if p.agent_count != g.vertex_count:
        raise ValueError("configuration size does not match the graph")
    if not g.edges:
        return np.zeros(0)
    idx = np.asarray(g.edges)
    diff = p.positions[idx[:, 1]] - p.positions[idx[:, 0]]
    return np.sqrt((diff * diff).sum(axis=1))


def is_valid_configuration(g: Graph, p: Configuration) -> bool:
    """True iff no two neighboring agents coincide (edge distances > 0)."""
    lengths = edge_lengths(g, p)
    return bool(np.all(lengths > 0.0))


@dataclass(frozen=True)
class ConfigurationMetrics:
    """Edge-length extremes, all-pairs diameter, and the centroid."""

    min_edge_length: float
    max_edge_length: float
    diameter: float
    centroid: np.ndarray


def configuration_metrics(g: Graph, p: Configuration) -> ConfigurationMetrics:
    """Shortest and longest edge, diameter over all vertex pairs (edges or
    not, so it never falls below the longest edge), and the unweighted mean
    position."""
    lengths = edge_lengths(g, p)
    if lengths.size == 0:
        return ConfigurationMetrics(math.inf, 0.0, p.diameter(), p.centroid())
    return ConfigurationMetrics(
        float(lengths.min()), float(lengths.max()), p.diameter(), p.centroid())


class _EdgeEngine:
    """Precomputed index arrays for fast repeated field/potential evaluation."""

    __slots__ = ("graph", "interactions", "i_idx", "j_idx", "scatter")

    def __init__(self, g: Graph, m: InteractionMap):
        if m.graph != g:
            raise ValueError("interaction map belongs to a different graph")
        self.graph = g
        self.interactions = m
        if g.edges:
            idx = np.asarray(g.edges)
            self.i_idx = idx[:, 0]
            self.j_idx = idx[:, 1]
            scatter = np.zeros((g.vertex_count, len(g.edges)))
            scatter[self.i_idx, np.arange(len(g.edges))] = 1.0
            scatter[self.j_idx, np.arange(len(g.edges))] = -1.0
            self.scatter = scatter
        else:
            self.i_idx = np.zeros(0, dtype=int)
            self.j_idx = np.zeros(0, dtype=int)
            self.scatter = np.zeros((g.vertex_count, 0))

    def lengths(self, x: np.ndarray) -> np.ndarray:
        diff = x[self.j_idx] - x[self.i_idx]
        return np.sqrt((diff * diff).sum(axis=1))

    def field(self, x: np.ndarray) -> np.ndarray:
        """Force on every agent, shape (agents, dimension)."""
        diff = x[self.j_idx] - x[self.i_idx]
        d = np.sqrt((diff * diff).sum(axis=1))
        if d.size and d.min() <= 0.0:
            raise ValueError("coincident neighboring agents")
        gv = self.interactions.edge_values(d)
        return self.scatter @ (gv[:, None] * diff)

    def potential(self, x: np.ndarray) -> float:
        d = self.lengths(x)
        if d.size == 0:
            return 0.0
        if d.min() <= 0.0:
            raise ValueError("coincident neighboring agents")
        return float(self.interactions.edge_pair_potentials(d).sum())


def vector_field(g: Graph, m: InteractionMap, p: Configuration) -> np.ndarray:
    """Stacked agent velocities: component i sums the neighbor interactions
    pulling or pushing agent i.  Raises on coincident neighbors."""
    if p.agent_count != g.vertex_count:
        raise ValueError("configuration size does not match the graph")
    return _EdgeEngine(g, m).field(p.positions).ravel()


def restricted_field(g: Graph, m: InteractionMap, p: Configuration,
                     subset: Iterable[int]) -> np.ndarray:
    """Rows of the full field for the given vertices, in sorted vertex order.

    Interactions reaching in from outside the subset are included; this is a
    restriction of the full field, not the induced sub-system's own field.
    """
    members = sorted(set(subset))
    if not members:
        raise ValueError("empty vertex set")
    full = _EdgeEngine(g, m).field(p.positions)
    return full[members].ravel()


def subsystem_field(g: Graph, m: InteractionMap, p: Configuration,
                    subset: Iterable[int]) -> np.ndarray:
    """Field of the sub-system induced by ``subset``: only edges with both
    endpoints inside contribute.  The restricted field equals this plus the
    cross-edge terms."""
    members = sorted(set(subset))
    if not members:
        raise ValueError("empty vertex set")
    sub_map = m.induced(members)
    sub_positions = Configuration(p.positions[members])
    return vector_field(sub_map.graph, sub_map, sub_positions)


def potential(g: Graph, m: InteractionMap, p: Configuration) -> float:
    """Sum of pair potentials over edges."""
    if p.agent_count != g.vertex_count:
        raise ValueError("configuration size does not match the graph")
    return _EdgeEngine(g, m).potential(p.positions)


def finite_difference_gradient(g: Graph, m: InteractionMap, p: Configuration,
                               step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of the potential; the independent oracle
    for the gradient-flow identity (field = minus gradient)."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    engine = _EdgeEngine(g, m)
    x = p.positions.copy()
    grad = np.zeros_like(x)
    for a in range(x.shape[0]):
        for c in range(x.shape[1]):
            orig = x[a, c]
            x[a, c] = orig + step
            if engine.lengths(x).size and engine.lengths(x).min() <= 0.0:
                raise ValueError("perturbation leaves the valid configuration space")
            plus = engine.potential(x)
            x[a, c] = orig - step
            if engine.lengths(x).size and engine.lengths(x).min() <= 0.0:
                raise ValueError("perturbation leaves the valid configuration space")
            minus = engine.potential(x)
            x[a, c] = orig
            grad[a, c] = (plus - minus) / (2.0 * step)
    return grad.ravel()


@dataclass(frozen=True)
class IntegratorParams:
    """Tolerances and stopping controls for ``simulate``.

    ``snapshot_interval`` of None records every accepted step; a positive
    value records once the given amount of simulated time has elapsed since
    the previous record (the initial and final states are always kept).
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    initial_step: float | None = None
    max_step: float = 10.0
    horizon: float = 1e5
    equilibrium_tol: float = 1e-9
    snapshot_interval: float | None = None

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0 or self.horizon <= 0:
            raise ValueError("max_step and horizon must be positive")
        if self.initial_step is not None and self.initial_step <= 0:
            raise ValueError("initial_step must be positive")
        if self.equilibrium_tol < 0:
            raise ValueError("equilibrium_tol must be nonnegative")
        if self.snapshot_interval is not None and self.snapshot_interval <= 0:
            raise ValueError("snapshot_interval must be positive")


@dataclass(frozen=True)
class Snapshot:
    time: float
    configuration: Configuration
    potential: float
    field_norm: float
    min_edge_length: float
    max_edge_length: float
    diameter: float


@dataclass(frozen=True)
class IntegrationStats:
    steps_accepted: int
    steps_rejected: int
    field_evaluations: int
    min_edge_length_seen: float
    max_field_norm_seen: float
    collision_floor: float


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered snapshots of one integration run, plus run statistics.

    Immutable once produced; strictly increasing snapshot times; the
    potential is non-increasing across snapshots up to integrator tolerance.
    """

    graph: Graph
    snapshots: tuple[Snapshot, ...]
    stats: IntegrationStats
    stopped_on: str  # "equilibrium", "horizon", or "stiffness" (partial run)

    @property
    def times(self) -> np.ndarray:
        return np.asarray([s.time for s in self.snapshots])

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def __len__(self) -> int:
        return len(self.snapshots)


class StiffnessError(RuntimeError):
    """Step size underflowed; carries the trajectory integrated so far."""

    def __init__(self, message: str, trajectory: Trajectory):
        super().__init__(message)
        self.trajectory = trajectory


# Dormand-Prince 5(4) tableau.  The last stage is evaluated at the proposed
# endpoint with the propagating weights, so an accepted step reuses it as the
# first stage of the next one (FSAL).
_STAGE_COEFFS = (
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
)
# Difference between 5th- and 4th-order weights, for the error estimate.
_ERROR_COEFFS = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])

_STEP_FLOOR = 1e-14
_COLLISION_SAFETY = 0.5


def _initial_step_guess(f0: np.ndarray, y0: np.ndarray, scale: np.ndarray,
                        engine: _EdgeEngine, max_step: float) -> tuple[float, int]:
    """Standard two-evaluation heuristic for the first step size."""
    d0 = math.sqrt(float(np.mean((y0 / scale) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    evals = 0
    try:
        f1 = engine.field(y0 + h0 * f0)
        evals = 1
        d2 = math.sqrt(float(np.mean(((f1 - f0) / scale) ** 2))) / h0
    except ValueError:
        d2 = 2.0 / h0
    dmax = max(d1, d2)
    h1 = (0.01 / dmax) ** 0.2 if dmax > 1e-15 else max(1e-6, h0 * 1e-3)
    return min(100.0 * h0, h1, max_step), evals


def simulate(g: Graph, m: InteractionMap, p0: Configuration,
             params: IntegratorParams = IntegratorParams()) -> Trajectory:
    """Integrate the gradient flow from ``p0``.

    Steps are rejected on the embedded error estimate, and additionally
    halved whenever the proposed state would drop any edge below half the
    precomputed collision floor.  Integration stops when the field norm falls
    below the equilibrium tolerance or the horizon is reached; a step
    underflow raises ``StiffnessError`` carrying the partial trajectory.
    """
    if not g.is_connected():
        raise ValueError("graph not connected")
    if p0.agent_count != g.vertex_count:
        raise ValueError("configuration size does not match the graph")
    if not is_valid_configuration(g, p0):
        raise ValueError("coincident neighboring agents in the initial configuration")

    from .analysis import collision_bound  # deferred: analysis imports this module

    engine = _EdgeEngine(g, m)
    y = p0.positions.copy()
    floor = collision_bound(g, m, engine.potential(y)) if g.edges else 0.0
    guard = _COLLISION_SAFETY * floor

    t = 0.0
    k1 = engine.field(y)
    evals = 1
    accepted = 0
    rejected = 0
    fnorm = float(np.linalg.norm(k1))
    max_fnorm = fnorm
    dmin_seen = float(engine.lengths(y).min()) if g.edges else math.inf

    snapshots: list[Snapshot] = []
    last_snapshot_t = -math.inf

    def record(time: float, x: np.ndarray, fn: float) -> None:
        nonlocal last_snapshot_t
        cfg = Configuration(x)
        met = configuration_metrics(g, cfg)
        snapshots.append(Snapshot(
            time=time, configuration=cfg, potential=engine.potential(x),
            field_norm=fn, min_edge_length=met.min_edge_length,
            max_edge_length=met.max_edge_length, diameter=met.diameter))
        last_snapshot_t = time

    def finish(reason: str) -> Trajectory:
        if not snapshots or snapshots[-1].time < t:
            record(t, y, fnorm)
        stats = IntegrationStats(
            steps_accepted=accepted, steps_rejected=rejected,
            field_evaluations=evals, min_edge_length_seen=dmin_seen,
            max_field_norm_seen=max_fnorm, collision_floor=floor)
        return Trajectory(graph=g, snapshots=tuple(snapshots),
                          stats=stats, stopped_on=reason)

    record(0.0, y, fnorm)
    if fnorm < params.equilibrium_tol:
        return finish("equilibrium")

    if params.initial_step is not None:
        h = min(params.initial_step, params.max_step)
    else:
        scale0 = params.abs_tol + params.rel_tol * np.abs(y)
        h, extra = _initial_step_guess(k1, y, scale0, engine, params.max_step)
        evals += extra
    h = min(h, params.horizon)

    # PI step-size controller constants (embedded order 4 -> exponent 1/5,
    # softened by the integral-term memory).
    beta = 0.04
    expo = 0.2 - 0.75 * beta
    err_prev = 1e-4
    shrink_after_reject = False

    stages = np.empty((7, *y.shape))

    while True:
        remaining = params.horizon - t
        if remaining < _STEP_FLOOR:
            return finish("horizon")
        h = min(h, params.max_step)
        final_step = remaining <= h
        if final_step:
            h = remaining
        if h < _STEP_FLOOR:
            raise StiffnessError(
                f"stiffness failure: step size underflow at t={t!r}",
                finish("stiffness"))

        stages[0] = k1
        try:
            for s, coeffs in enumerate(_STAGE_COEFFS, start=1):
                increment = np.tensordot(coeffs, stages[:s], axes=1)
                arg = y + h * increment
                if s == 6:
                    arg_gap = arg - penultimate_arg
                else:
                    penultimate_arg = arg
                stages[s] = engine.field(arg)
                evals += 1
        except ValueError:
            # A stage ran into coincident neighbors; treat like a rejection.
            rejected += 1
            h *= 0.5
            shrink_after_reject = True
            continue

        y_new = y + h * np.tensordot(_STAGE_COEFFS[-1], stages[:6], axes=1)
        # Stage 7 sits exactly at y_new, so stages[6] is the field there.
        error = h * np.tensordot(_ERROR_COEFFS, stages, axes=1)
        scale = params.abs_tol + params.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((error / scale) ** 2)))

        lengths_new = engine.lengths(y_new)
        if lengths_new.size and lengths_new.min() < guard:
            rejected += 1
            h *= 0.5
            shrink_after_reject = True
            continue

        if err > 1.0:
            rejected += 1
            h = h / min(5.0, (err ** expo) / 0.9)
            shrink_after_reject = True
            continue

        t = params.horizon if final_step else t + h
        y = y_new
        k1 = stages[6].copy()  # the stage buffer is reused next step
        accepted += 1
        fnorm = float(np.linalg.norm(k1))
        max_fnorm = max(max_fnorm, fnorm)
        if lengths_new.size:
            dmin_seen = min(dmin_seen, float(lengths_new.min()))

        due = (params.snapshot_interval is None
               or t - last_snapshot_t >= params.snapshot_interval * (1.0 - 1e-12))
        if due:
            record(t, y, fnorm)

        if fnorm < params.equilibrium_tol:
            return finish("equilibrium")

        fac = (max(err, 1e-10) ** expo) / (err_prev ** beta) / 0.9
        fac = min(5.0, max(0.1, fac))
        h_next = h / fac
        if shrink_after_reject:
            h_next = min(h_next, h)
            shrink_after_reject = False
        # Stability cap: the last two stages estimate the dominant Jacobian
        # rate (the spectrum is real for a gradient flow).  Error control
        # alone lets the step ride the stability boundary once the state is
        # near an equilibrium, where the contraction factor is about one and
        # the field norm stalls above the stopping tolerance.
        gap = float(np.linalg.norm(arg_gap))
        if gap > 0.0:
            rate = float(np.linalg.norm(stages[6] - stages[5])) / gap
            if rate > 0.0:
                h_next = min(h_next, 3.0 / rate)
        h = h_next
        err_prev = max(err, 1e-4)
