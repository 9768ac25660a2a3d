"""Diagnostics connecting simulated trajectories to the theory: equilibrium
size bounds, the collision floor implied by the initial potential, the
centroid hierarchy over cluster unions and its expansion inequality,
self-clustering detection, exact distances between pinned-edge configuration
sets, and sampled floor estimates for the field norm on those sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import (Configuration, Trajectory, _EdgeEngine,
                       configuration_metrics, vector_field)
from .graph import Graph, VertexPartition
from .interaction import InteractionMap
from .partition import FrameworkPartition

_HYPOTHESIS_TOL = 1e-9


@dataclass(frozen=True)
class EquilibriumReport:
    """Field residual at a configuration plus the equilibrium size check:
    every true equilibrium keeps its longest edge within (N - 1) times the
    shared attraction radius."""

    is_equilibrium: bool
    residual: float
    min_edge_length: float
    max_edge_length: float
    edge_length_bound: float
    bound_satisfied: bool


def equilibrium_report(g: Graph, m: InteractionMap, p: Configuration,
                       eps: float = 1e-9, bound_tol: float = 1e-6) -> EquilibriumReport:
    residual = float(np.linalg.norm(vector_field(g, m, p)))
    met = configuration_metrics(g, p)
    bound = (g.vertex_count - 1) * m.attraction_radius
    return EquilibriumReport(
        is_equilibrium=residual < eps,
        residual=residual,
        min_edge_length=met.min_edge_length,
        max_edge_length=met.max_edge_length,
        edge_length_bound=bound,
        bound_satisfied=met.max_edge_length <= bound + bound_tol,
    )


def collision_bound(g: Graph, m: InteractionMap, psi_initial: float) -> float:
    """Certified lower bound on every edge length along a trajectory that
    starts with the given potential.

    If some edge ever reached a distance where its own pair potential plus
    the floor contribution of the remaining edges exceeds the starting
    potential, the total potential would have risen, which the gradient flow
    forbids.  The bound is the largest distance within the repulsive range
    whose exceedance is certain, found per edge by bisection (the pair
    potential is strictly decreasing there) and then minimized over edges.
    """
    if not g.edges:
        raise ValueError("graph has no edges")
    floor = m.potential_floor()
    edge_count = len(g.edges)
    if psi_initial < edge_count * floor - 1e-12 * (1.0 + abs(psi_initial)):
        raise ValueError("potential below global lower bound")
    target = psi_initial - (edge_count - 1) * floor

    bounds = []
    for f in m.functions:
        hi = f.repulsion_radius
        if f.pair_potential(hi) > target:
            bounds.append(hi)
            continue
        lo = hi / 2.0
        while f.pair_potential(lo) <= target:
            lo /= 2.0
            if lo < 1e-300:
                raise ValueError("pair potential does not diverge at contact")
        # Keep the invariant pair_potential(lo) > target so the returned
        # value is a strict certificate.
        for _ in range(200):
            if hi - lo <= 1e-15 * hi:
                break
            mid = 0.5 * (lo + hi)
            if f.pair_potential(mid) > target:
                lo = mid
            else:
                hi = mid
        bounds.append(lo)
    return float(min(bounds))


def centroid_hierarchy(p: Configuration, vp: VertexPartition, k: int) -> float:
    """Largest centroid norm over unions of k blocks.

    The union centroid weights each block by its size.  Values are
    gauge-dependent: translate the configuration so the global centroid is at
    the origin before calling, which makes the k = block-count level zero and
    the whole sequence non-increasing in k.
    """
    m = vp.block_count
    if not 1 <= k <= m:
        raise ValueError(f"k must be in 1..{m}")
    x = p.positions
    sizes = np.asarray([len(block) for block in vp.blocks], dtype=float)
    centroids = np.stack([x[sorted(block)].mean(axis=0) for block in vp.blocks])
    best = 0.0
    for combo in itertools.combinations(range(m), k):
        idx = list(combo)
        weight = sizes[idx]
        union_centroid = (weight[:, None] * centroids[idx]).sum(axis=0) / weight.sum()
        best = max(best, float(np.linalg.norm(union_centroid)))
    return best


def hierarchy_table(traj: Trajectory, vp: VertexPartition) -> np.ndarray:
    """Centroid hierarchy per snapshot, rows k = 1..m, on centered copies."""
    m = vp.block_count
    table = np.empty((m, len(traj.snapshots)))
    for t_idx, snap in enumerate(traj.snapshots):
        centered = snap.configuration.centered()
        for k in range(1, m + 1):
            table[k - 1, t_idx] = centroid_hierarchy(centered, vp, k)
    return table


@dataclass(frozen=True)
class ExpansionCheck:
    """One instant of the hierarchy expansion inequality.

    When level k sits at its running maximum, the next level is bounded below
    by r - N (r - level_k) - 2 l0 with r the running maximum of level 1.
    Inapplicable instants (level k below its running maximum) carry
    ``passed=None``.
    """

    snapshot_index: int
    time: float
    k: int
    applicable: bool
    passed: bool | None
    lhs: float
    rhs: float
    slack: float


def hierarchy_expansion_check(traj: Trajectory, vp: VertexPartition,
                              l0: float) -> list[ExpansionCheck]:
    """Evaluate the expansion inequality on the snapshot grid.

    Hypotheses are grid-level: r is the running maximum of hierarchy level 1
    up to the snapshot, and level k must attain its own running maximum there
    (within 1e-9).  Pass/fail uses the same tolerance on the slack.
    """
    if vp.is_trivial:
        raise ValueError("nontrivial partition required")
    if l0 <= 0:
        raise ValueError("l0 must be positive")
    m = vp.block_count
    n_vertices = traj.graph.vertex_count
    table = hierarchy_table(traj, vp)
    running = np.maximum.accumulate(table, axis=1)
    checks: list[ExpansionCheck] = []
    for t_idx, snap in enumerate(traj.snapshots):
        r = running[0, t_idx]
        for k in range(1, m):
            level_k = table[k - 1, t_idx]
            applicable = level_k >= running[k - 1, t_idx] - _HYPOTHESIS_TOL
            lhs = table[k, t_idx]
            rhs = r - n_vertices * (r - level_k) - 2.0 * l0
            slack = lhs - rhs
            checks.append(ExpansionCheck(
                snapshot_index=t_idx, time=snap.time, k=k,
                applicable=bool(applicable),
                passed=bool(slack >= -_HYPOTHESIS_TOL) if applicable else None,
                lhs=float(lhs), rhs=float(rhs), slack=float(slack)))
    return checks


@dataclass(frozen=True)
class SelfClusteringVerdict:
    """Whether the trajectory eventually keeps clusters tighter than l0
    inside and farther than l1 apart, with the earliest snapshot from which
    that holds through the end."""

    is_self_clustering: bool
    start_index: int | None
    start_time: float | None
    intra_series: np.ndarray
    inter_series: np.ndarray


def self_clustering_detect(traj: Trajectory, vp: VertexPartition,
                           l0: float, l1: float) -> SelfClusteringVerdict:
    """Earliest snapshot after which every snapshot satisfies both cluster
    conditions; not self-clustering when the final snapshot violates them."""
    if vp.is_trivial:
        raise ValueError("nontrivial partition required")
    if l0 <= 0 or l1 <= 0:
        raise ValueError("l0 and l1 must be positive")
    intra = np.empty(len(traj.snapshots))
    inter = np.empty(len(traj.snapshots))
    ok = np.empty(len(traj.snapshots), dtype=bool)
    for idx, snap in enumerate(traj.snapshots):
        fp = FrameworkPartition(traj.graph, snap.configuration, vp)
        intra[idx] = fp.intra_distance()
        inter[idx] = fp.inter_distance()
        ok[idx] = intra[idx] < l0 and inter[idx] > l1
    if not ok[-1]:
        return SelfClusteringVerdict(False, None, None, intra, inter)
    start = len(ok) - 1
    while start > 0 and ok[start - 1]:
        start -= 1
    return SelfClusteringVerdict(
        True, start, float(traj.snapshots[start].time), intra, inter)


@dataclass(frozen=True)
class ClusterDiagnostics:
    """Per-snapshot cluster series for one vertex partition: intra/inter
    distances, the centroid hierarchy table (rows k = 1..m, centered), and
    the self-clustering verdict."""

    vertex_partition: VertexPartition
    times: np.ndarray
    intra_series: np.ndarray
    inter_series: np.ndarray
    hierarchy: np.ndarray
    verdict: SelfClusteringVerdict


def cluster_diagnostics(traj: Trajectory, vp: VertexPartition,
                        l0: float, l1: float) -> ClusterDiagnostics:
    verdict = self_clustering_detect(traj, vp, l0, l1)
    return ClusterDiagnostics(
        vertex_partition=vp,
        times=traj.times,
        intra_series=verdict.intra_series,
        inter_series=verdict.inter_series,
        hierarchy=hierarchy_table(traj, vp),
        verdict=verdict,
    )


@dataclass(frozen=True)
class PinnedSetDistance:
    """Exact distance between the sets of configurations pinning one edge to
    two different lengths, with a witness pair attaining it."""

    exact: float
    witness_a: Configuration
    witness_b: Configuration


def pinned_edge_set_distance(g: Graph, edge: tuple[int, int], d1: float,
                             d2: float, dimension: int = 2) -> PinnedSetDistance:
    """The two sets sit exactly |d1 - d2| / sqrt(2) apart.

    The witnesses place the pinned pair symmetrically about the origin on the
    first axis at each length and share every other agent, so only the two
    pinned coordinates differ.
    """
    if d1 <= 0 or d2 <= 0:
        raise ValueError("pinned lengths must be positive")
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    i, j = min(edge), max(edge)
    if not g.has_edge(i, j):
        raise ValueError(f"({i}, {j}) is not an edge of the graph")
    exact = abs(d1 - d2) / math.sqrt(2.0)

    offset = max(d1, d2) + 1.0
    shared_axis = 1 if dimension >= 2 else 0

    def witness(d: float) -> Configuration:
        x = np.zeros((g.vertex_count, dimension))
        rank = 0
        for v in range(g.vertex_count):
            if v == i or v == j:
                continue
            rank += 1
            x[v, shared_axis] = offset * rank
        x[i, 0] = d / 2.0
        x[j, 0] = -d / 2.0
        return Configuration(x)

    return PinnedSetDistance(exact, witness(d1), witness(d2))


@dataclass(frozen=True)
class FloorEstimate:
    """Sampled upper estimate of the smallest field norm over a constrained
    configuration set; multistart random sampling plus projected descent can
    only overestimate the true infimum."""

    distance: float
    value: float
    samples: int
    constraint: str  # "pinned-edge" or "min-edge"


def _project_pinned(x: np.ndarray, i: int, j: int, d: float) -> None:
    u = x[j] - x[i]
    norm = float(np.linalg.norm(u))
    if norm < 1e-12:
        u = np.zeros(x.shape[1])
        u[0] = 1.0
        norm = 1.0
    mid = 0.5 * (x[i] + x[j])
    half = (d / (2.0 * norm)) * u
    x[i] = mid - half
    x[j] = mid + half


def _feasible(engine: _EdgeEngine, x: np.ndarray, d: float,
              keep_min: bool) -> bool:
    lengths = engine.lengths(x)
    if np.any(lengths <= 0.0):
        return False
    if keep_min and np.any(lengths < d * (1.0 - 1e-12)):
        return False
    return True


def _descend_field_norm(engine: _EdgeEngine, x: np.ndarray, i: int, j: int,
                        d: float, keep_min: bool, iterations: int = 200,
                        step: float = 1e-2) -> float:
    """Gradient-projection descent of the squared field norm with the edge
    (i, j) pinned to length d; backtracking halves the step on failure."""

    def objective(state: np.ndarray) -> float:
        f = engine.field(state)
        return float((f * f).sum())

    fd_step = 1e-6
    value = objective(x)
    for _ in range(iterations):
        grad = np.zeros_like(x)
        for a in range(x.shape[0]):
            for c in range(x.shape[1]):
                orig = x[a, c]
                x[a, c] = orig + fd_step
                plus = objective(x) if _feasible(engine, x, d, False) else value
                x[a, c] = orig - fd_step
                minus = objective(x) if _feasible(engine, x, d, False) else value
                x[a, c] = orig
                grad[a, c] = (plus - minus) / (2.0 * fd_step)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-14:
            break
        s = step
        improved = False
        while s > 1e-12:
            candidate = x - s * grad
            _project_pinned(candidate, i, j, d)
            if _feasible(engine, candidate, d, keep_min):
                cand_value = objective(candidate)
                if cand_value < value:
                    x[...] = candidate
                    value = cand_value
                    improved = True
                    break
            s *= 0.5
        if not improved:
            break
    return math.sqrt(value)


def _sample_pinned(rng: np.random.Generator, engine: _EdgeEngine,
                   n_agents: int, dimension: int, i: int, j: int, d: float,
                   spread: float, keep_min: bool) -> np.ndarray:
    for _ in range(500):
        x = rng.normal(scale=spread, size=(n_agents, dimension))
        _project_pinned(x, i, j, d)
        if _feasible(engine, x, d, keep_min):
            return x
    raise RuntimeError("could not sample a feasible pinned configuration")


def dissipation_floor_estimate(g: Graph, m: InteractionMap, d: float,
                               budget: int, dimension: int = 2,
                               seed: int = 0) -> FloorEstimate:
    """Upper estimate of the smallest field norm over configurations with
    some edge pinned to length d.

    Draws ``budget`` random configurations, pins a random edge to length d,
    and refines each by projected descent; reports the smallest field norm
    reached.  This is an estimate only: it can never certify positivity of
    the true infimum.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if d <= 0:
        raise ValueError("distance must be positive")
    if not g.edges:
        raise ValueError("graph has no edges")
    rng = np.random.default_rng(seed)
    engine = _EdgeEngine(g, m)
    spread = max(d, m.attraction_radius)
    best = math.inf
    for _ in range(budget):
        i, j = g.edges[int(rng.integers(len(g.edges)))]
        x = _sample_pinned(rng, engine, g.vertex_count, dimension, i, j, d,
                           spread, keep_min=False)
        best = min(best, _descend_field_norm(engine, x, i, j, d, keep_min=False))
    return FloorEstimate(distance=d, value=best, samples=budget,
                         constraint="pinned-edge")


def _min_edge_floor_estimate(g: Graph, m: InteractionMap, d: float,
                             budget: int, dimension: int,
                             rng: np.random.Generator) -> float:
    """Floor estimate over configurations whose shortest edge equals d."""
    engine = _EdgeEngine(g, m)
    spread = max(3.0 * d, m.attraction_radius)
    best = math.inf
    for _ in range(budget):
        i, j = g.edges[int(rng.integers(len(g.edges)))]
        x = _sample_pinned(rng, engine, g.vertex_count, dimension, i, j, d,
                           spread, keep_min=True)
        best = min(best, _descend_field_norm(engine, x, i, j, d, keep_min=True))
    return best


@dataclass(frozen=True)
class BlowupEntry:
    distance: float
    estimate: float
    applicable: bool


@dataclass(frozen=True)
class BlowupReport:
    """Floor estimates over shrinking minimum edge lengths.

    ``increasing`` is judged over the applicable entries only, those with the
    pinned length inside the certified repulsive range; outside it no growth
    is expected and the entry is flagged instead."""

    entries: tuple[BlowupEntry, ...]
    increasing: bool


def repulsion_blowup_check(g: Graph, m: InteractionMap,
                           distances: Sequence[float], dimension: int = 2,
                           budget: int = 8, seed: int = 0) -> BlowupReport:
    """Estimate the field-norm floor at each distance in a decreasing list of
    minimum edge lengths and report whether the floor grows as the minimum
    shrinks."""
    ds = [float(d) for d in distances]
    if any(d <= 0 for d in ds):
        raise ValueError("distances must be positive")
    if any(b >= a for a, b in zip(ds, ds[1:])):
        raise ValueError("distances must be strictly decreasing")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rng = np.random.default_rng(seed)
    repulsive_below = m.repulsion_radius
    entries = []
    for d in ds:
        estimate = _min_edge_floor_estimate(g, m, d, budget, dimension, rng)
        entries.append(BlowupEntry(distance=d, estimate=estimate,
                                   applicable=d < repulsive_below))
    applicable = [e.estimate for e in entries if e.applicable]
    increasing = all(b > a for a, b in zip(applicable, applicable[1:]))
    return BlowupReport(entries=tuple(entries), increasing=increasing)
