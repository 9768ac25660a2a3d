"""Command-line front end: config ingestion, simulation driving, analysis
orchestration, and persistence of snapshots and reports.

Configs are JSON with an explicit ``"version": 1``.  Snapshots are JSON
Lines, one record per snapshot, floats at 17 significant digits so values
round-trip exactly.  Reports are pretty-printed JSON.  No rendering happens
here; plot data is exported as CSV time series.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import analysis as _analysis
from . import partition as _partition
from .dynamics import (Configuration, IntegrationStats, IntegratorParams,
                       Snapshot, StiffnessError, Trajectory, edge_lengths,
                       simulate)
from .graph import Graph
from .interaction import (InteractionFunction, InteractionMap, LennardJones,
                          TabulatedFunction)

SNAPSHOT_FILE = "snapshots.jsonl"
SUMMARY_FILE = "summary.json"
CONFIG_COPY_FILE = "config.json"
TIMESERIES_FILE = "timeseries.csv"
ANALYSIS_FILE = "analysis.json"
THREADS_ENV = "FADING_FLOCK_THREADS"


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


class SnapshotFormatError(ValueError):
    """Corrupt snapshot stream; carries the offending line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"snapshot line {line_number}: {message}")
        self.line_number = line_number


# ---------------------------------------------------------------------------
# Configuration loading


@dataclass(frozen=True)
class PlacementSpec:
    scale: float = 2.0
    min_separation: float | None = None
    max_attempts: int = 1000


@dataclass(frozen=True)
class AnalysisRequests:
    partition_thresholds: tuple[float, ...] = ()
    self_clustering: tuple[tuple[float, float], ...] = ()
    hierarchy_depth: int | None = None
    floor_budget: int = 8
    floor_distances: tuple[float, ...] = ()
    max_snapshots: int = 200


@dataclass(frozen=True)
class RunConfig:
    raw: dict
    labels: tuple[str, ...]
    graph: Graph
    interactions: InteractionMap
    dimension: int
    positions: Configuration | None
    placement: PlacementSpec
    integrator: IntegratorParams
    seed: int
    analysis: AnalysisRequests


def _require(data: dict, key: str, context: str = "") -> Any:
    if key not in data:
        dotted = f"{context}.{key}" if context else key
        raise ConfigError(f"missing required field: {dotted}")
    return data[key]


def _interaction_from_spec(spec: dict, where: str) -> InteractionFunction:
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: interaction spec must be an object")
    kind = _require(spec, "kind", where)
    if kind == "lennard_jones":
        try:
            return LennardJones(
                sigma1=float(_require(spec, "sigma1", where)),
                sigma2=float(_require(spec, "sigma2", where)),
                n1=_require(spec, "n1", where),
                n2=_require(spec, "n2", where),
                margin=float(spec.get("margin", 1e-6)),
            )
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    if kind == "tabulated":
        grid = _require(spec, "grid", where)
        values = _require(spec, "values", where)
        if len(grid) != len(values):
            raise ConfigError(f"{where}: grid and values differ in length")
        grid_arr = np.asarray([float(v) for v in grid])
        vals_arr = np.asarray([float(v) for v in values])
        order = np.argsort(grid_arr)
        grid_arr, vals_arr = grid_arr[order], vals_arr[order]

        def evaluator(d: float, _g=grid_arr, _v=vals_arr) -> float:
            return float(np.interp(d, _g, _v))

        radius = spec.get("attraction_radius")
        try:
            return TabulatedFunction(
                evaluator, grid_arr,
                attraction_radius=None if radius is None else float(radius))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown interaction kind {kind!r}")


def parse_config(data: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    version = _require(data, "version")
    if version != 1:
        raise ConfigError(f"unsupported config version: {version!r}")

    graph_spec = _require(data, "graph")
    if not isinstance(graph_spec, dict):
        raise ConfigError('field "graph" must be an object')
    labels_raw = _require(graph_spec, "vertices", "graph")
    edges_raw = _require(graph_spec, "edges", "graph")
    labels = tuple(str(v) for v in labels_raw)
    if len(labels) != len(set(labels)):
        raise ConfigError("duplicate vertex labels")
    if len(labels) < 2:
        raise ConfigError("graph needs at least two vertices")
    index = {lab: k for k, lab in enumerate(labels)}

    def edge_indices(pair, where: str) -> tuple[int, int]:
        if len(pair) != 2:
            raise ConfigError(f"{where}: edges must be label pairs")
        a, b = str(pair[0]), str(pair[1])
        if a not in index or b not in index:
            raise ConfigError(f"{where}: unknown vertex label in edge [{a}, {b}]")
        return index[a], index[b]

    try:
        graph = Graph(len(labels),
                      [edge_indices(e, "graph.edges") for e in edges_raw])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not graph.is_connected():
        raise ConfigError("graph not connected")

    inter_spec = _require(data, "interactions")
    if not isinstance(inter_spec, dict):
        raise ConfigError('field "interactions" must be an object')
    default = None
    if "default" in inter_spec:
        default = _interaction_from_spec(inter_spec["default"],
                                         "interactions.default")
    per_edge = {}
    for entry in inter_spec.get("edges", []):
        where = "interactions.edges"
        pair = edge_indices(_require(entry, "edge", where), where)
        key = (min(pair), max(pair))
        if key in per_edge:
            raise ConfigError(f"{where}: duplicate interaction for edge {key}")
        per_edge[key] = _interaction_from_spec(entry, where)
    try:
        interactions = InteractionMap(graph, per_edge, default=default)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    dimension = int(data.get("dimension", 2))
    if dimension < 1:
        raise ConfigError("dimension must be at least 1")

    positions = None
    if "positions" in data:
        rows = data["positions"]
        if len(rows) != graph.vertex_count:
            raise ConfigError("positions must list one point per vertex")
        try:
            positions = Configuration(np.asarray(rows, dtype=float))
        except ValueError as exc:
            raise ConfigError(f"bad positions: {exc}") from exc
        if positions.dimension != dimension:
            raise ConfigError("positions do not match the configured dimension")

    placement_spec = data.get("placement", {})
    placement = PlacementSpec(
        scale=float(placement_spec.get("scale", 2.0)),
        min_separation=(None if placement_spec.get("min_separation") is None
                        else float(placement_spec["min_separation"])),
        max_attempts=int(placement_spec.get("max_attempts", 1000)),
    )

    integ_spec = data.get("integrator", {})
    try:
        integrator = IntegratorParams(
            rel_tol=float(integ_spec.get("rel_tol", 1e-8)),
            abs_tol=float(integ_spec.get("abs_tol", 1e-10)),
            initial_step=(None if integ_spec.get("initial_step") is None
                          else float(integ_spec["initial_step"])),
            max_step=float(integ_spec.get("max_step", 10.0)),
            horizon=float(integ_spec.get("horizon", 1e5)),
            equilibrium_tol=float(integ_spec.get("equilibrium_tol", 1e-9)),
            snapshot_interval=(None if integ_spec.get("snapshot_interval") is None
                               else float(integ_spec["snapshot_interval"])),
        )
    except ValueError as exc:
        raise ConfigError(f"bad integrator parameters: {exc}") from exc

    ana_spec = data.get("analysis", {})
    pairs = tuple((float(a), float(b)) for a, b in ana_spec.get("self_clustering", []))
    requests = AnalysisRequests(
        partition_thresholds=tuple(float(v) for v in
                                   ana_spec.get("partition_thresholds", [])),
        self_clustering=pairs,
        hierarchy_depth=(None if ana_spec.get("hierarchy_depth") is None
                         else int(ana_spec["hierarchy_depth"])),
        floor_budget=int(ana_spec.get("floor_budget", 8)),
        floor_distances=tuple(float(v) for v in
                              ana_spec.get("floor_distances", [])),
        max_snapshots=int(ana_spec.get("max_snapshots", 200)),
    )

    return RunConfig(
        raw=data, labels=labels, graph=graph, interactions=interactions,
        dimension=dimension, positions=positions, placement=placement,
        integrator=integrator, seed=int(data.get("seed", 0)),
        analysis=requests)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(data)


def place_random(cfg: RunConfig, rng: np.random.Generator) -> Configuration:
    """Uniform placement in a cube scaled to the agent count, rejecting any
    draw that puts an edge below half the repulsion radius."""
    n, dim = cfg.graph.vertex_count, cfg.dimension
    side = cfg.placement.scale * n ** (1.0 / dim) * cfg.interactions.attraction_radius
    min_sep = cfg.placement.min_separation
    if min_sep is None:
        min_sep = cfg.interactions.repulsion_radius / 2.0
    for _ in range(cfg.placement.max_attempts):
        p = Configuration(rng.uniform(0.0, side, size=(n, dim)))
        lengths = edge_lengths(cfg.graph, p)
        if lengths.size == 0 or lengths.min() >= min_sep:
            return p
    raise ConfigError("could not place agents with the required separation")


# ---------------------------------------------------------------------------
# Snapshot persistence (JSON Lines, 17 significant digits)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def snapshot_to_line(snap: Snapshot) -> str:
    x = snap.configuration.positions
    x_str = "[" + ", ".join(
        "[" + ", ".join(_fmt(c) for c in row) + "]" for row in x) + "]"
    return ('{"t": %s, "x": %s, "psi": %s, "f_norm": %s, '
            '"d_minus": %s, "d_plus": %s, "phi": %s}' % (
                _fmt(snap.time), x_str, _fmt(snap.potential),
                _fmt(snap.field_norm), _fmt(snap.min_edge_length),
                _fmt(snap.max_edge_length), _fmt(snap.diameter)))


def write_snapshots(traj: Trajectory, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for snap in traj.snapshots:
            fh.write(snapshot_to_line(snap))
            fh.write("\n")


_SNAPSHOT_KEYS = ("t", "x", "psi", "f_norm", "d_minus", "d_plus", "phi")


def read_snapshots(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SnapshotFormatError(number, f"invalid JSON ({exc.msg})") from exc
            for key in _SNAPSHOT_KEYS:
                if key not in record:
                    raise SnapshotFormatError(number, f"missing field {key!r}")
            try:
                record["x"] = np.asarray(record["x"], dtype=float)
            except (TypeError, ValueError) as exc:
                raise SnapshotFormatError(number, f"bad positions: {exc}") from exc
            records.append(record)
    if not records:
        raise SnapshotFormatError(0, "empty snapshot stream")
    return records


def trajectory_from_records(graph: Graph, records: Sequence[dict]) -> Trajectory:
    """Rebuild a trajectory from parsed snapshot records.  Aggregate run
    statistics are recomputed from the records; the collision floor is not
    recoverable and reads as NaN."""
    snaps = tuple(
        Snapshot(time=float(r["t"]),
                 configuration=Configuration(r["x"]),
                 potential=float(r["psi"]),
                 field_norm=float(r["f_norm"]),
                 min_edge_length=float(r["d_minus"]),
                 max_edge_length=float(r["d_plus"]),
                 diameter=float(r["phi"]))
        for r in records)
    stats = IntegrationStats(
        steps_accepted=0, steps_rejected=0, field_evaluations=0,
        min_edge_length_seen=min(s.min_edge_length for s in snaps),
        max_field_norm_seen=max(s.field_norm for s in snaps),
        collision_floor=math.nan)
    return Trajectory(graph=graph, snapshots=snaps, stats=stats,
                      stopped_on="unknown")


# ---------------------------------------------------------------------------
# simulate command


def _write_timeseries(traj: Trajectory, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "psi", "f_norm", "d_minus", "d_plus", "phi"])
        for snap in traj.snapshots:
            writer.writerow([_fmt(snap.time), _fmt(snap.potential),
                             _fmt(snap.field_norm), _fmt(snap.min_edge_length),
                             _fmt(snap.max_edge_length), _fmt(snap.diameter)])


def _summary_payload(cfg: RunConfig, traj: Trajectory, seed: int) -> dict:
    final = traj.final
    report = _analysis.equilibrium_report(
        cfg.graph, cfg.interactions, final.configuration,
        eps=cfg.integrator.equilibrium_tol)
    return {
        "stopped_on": traj.stopped_on,
        "seed": seed,
        "final_time": final.time,
        "final_psi": final.potential,
        "final_f_norm": final.field_norm,
        "final_d_minus": final.min_edge_length,
        "final_d_plus": final.max_edge_length,
        "final_phi": final.diameter,
        "steps_accepted": traj.stats.steps_accepted,
        "steps_rejected": traj.stats.steps_rejected,
        "field_evaluations": traj.stats.field_evaluations,
        "min_d_minus_seen": traj.stats.min_edge_length_seen,
        "max_f_norm_seen": traj.stats.max_field_norm_seen,
        "collision_floor": traj.stats.collision_floor,
        "snapshot_count": len(traj.snapshots),
        "equilibrium": {
            "is_equilibrium": report.is_equilibrium,
            "residual": report.residual,
            "d_minus": report.min_edge_length,
            "d_plus": report.max_edge_length,
            "edge_length_bound": report.edge_length_bound,
            "bound_satisfied": report.bound_satisfied,
        },
    }


def _resolved_config(cfg: RunConfig, p0: Configuration, seed: int,
                     run_index: int | None) -> dict:
    resolved = json.loads(json.dumps(cfg.raw))
    resolved["positions"] = [[float(c) for c in row] for row in p0.positions]
    resolved["seed"] = seed
    if run_index is not None:
        resolved["run_index"] = run_index
    return resolved


def _run_single(cfg: RunConfig, out_dir: Path, seed: int,
                run_index: int | None = None) -> str:
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.positions is not None:
        p0 = cfg.positions
    else:
        key = (run_index,) if run_index is not None else ()
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))
        p0 = place_random(cfg, rng)
    try:
        traj = simulate(cfg.graph, cfg.interactions, p0, cfg.integrator)
    except StiffnessError as exc:
        traj = exc.trajectory
    write_snapshots(traj, out_dir / SNAPSHOT_FILE)
    _write_timeseries(traj, out_dir / TIMESERIES_FILE)
    payload = _summary_payload(cfg, traj, seed)
    (out_dir / SUMMARY_FILE).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (out_dir / CONFIG_COPY_FILE).write_text(
        json.dumps(_resolved_config(cfg, p0, seed, run_index),
                   indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return traj.stopped_on


def _ensemble_worker(args: tuple[dict, int, int, str]) -> str:
    data, seed, run_index, out_dir = args
    cfg = parse_config(data)
    return _run_single(cfg, Path(out_dir), seed, run_index)


def _thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cmd_simulate(config_path: str, out_dir: str, seed: int | None,
                 ensemble: int) -> int:
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    failures = [(edge, rep) for edge, rep in
                zip(cfg.graph.edges, cfg.interactions.validate_all())
                if not rep.passed]
    if failures:
        edge, rep = failures[0]
        names = "; ".join(check.name for check in rep.failures())
        print(f"error: interaction on edge {edge} failed validation: {names}",
              file=sys.stderr)
        return 1
    master_seed = cfg.seed if seed is None else seed
    out = Path(out_dir)
    try:
        if ensemble <= 1:
            reason = _run_single(cfg, out, master_seed)
            reasons = [reason]
        else:
            jobs = [(cfg.raw, master_seed, k, str(out / f"run_{k:04d}"))
                    for k in range(ensemble)]
            workers = min(ensemble, _thread_cap())
            if workers <= 1:
                reasons = [_ensemble_worker(job) for job in jobs]
            else:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    reasons = list(pool.map(_ensemble_worker, jobs))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if any(reason == "stiffness" for reason in reasons):
        print("error: stiffness failure (partial trajectory written)",
              file=sys.stderr)
        return 1
    if all(reason == "equilibrium" for reason in reasons):
        return 0
    return 2


# ---------------------------------------------------------------------------
# analyze command


def _subsample_indices(count: int, cap: int) -> list[int]:
    cap = max(2, cap)
    if count <= cap:
        return list(range(count))
    picked = np.unique(np.linspace(0, count - 1, cap).round().astype(int))
    return picked.tolist()


def _blocks_as_labels(vp, labels) -> list[list[str]]:
    return [[labels[v] for v in sorted(block)] for block in vp.blocks]


def _analysis_payload(cfg: RunConfig, traj: Trajectory) -> dict:
    labels = cfg.labels
    requests = cfg.analysis
    alpha_plus = cfg.interactions.attraction_radius
    n = cfg.graph.vertex_count

    idx = _subsample_indices(len(traj.snapshots), requests.max_snapshots)
    sub = Trajectory(
        graph=traj.graph,
        snapshots=tuple(traj.snapshots[i] for i in idx),
        stats=traj.stats, stopped_on=traj.stopped_on)
    configurations = [s.configuration for s in sub.snapshots]

    thresholds = requests.partition_thresholds or (2.0 * alpha_plus,)

    per_snapshot = []
    for pos, snap in zip(idx, sub.snapshots):
        results = {}
        for l in thresholds:
            found = _partition.find_nontrivial_dilute(cfg.graph,
                                                      snap.configuration, l)
            if found is None:
                results[_fmt(l)] = {"found": False}
            else:
                results[_fmt(l)] = {
                    "found": True,
                    "blocks": _blocks_as_labels(found.vp, labels),
                    "intra": found.intra_distance(),
                    "inter": found.inter_distance(),
                }
        per_snapshot.append({"index": pos, "t": snap.time, "results": results})

    # Ramp of strictly increasing thresholds across the analyzed snapshots,
    # spanning the configured threshold range.
    lo = min(thresholds)
    hi = max(thresholds)
    if hi <= lo:
        hi = 2.0 * lo
    ramp = np.linspace(lo, hi, len(configurations)) if len(configurations) > 1 \
        else np.asarray([lo])
    witness = _partition.diluting_subsequence(cfg.graph, configurations, ramp)

    if witness is not None:
        witness_payload = {
            "found": True,
            "indices": [idx[i] for i in witness.indices],
            "blocks": _blocks_as_labels(witness.vertex_partition, labels),
            "intra_bound": witness.intra_bound,
        }
        vp = witness.vertex_partition
    else:
        witness_payload = {"found": False}
        fallback = _partition.find_nontrivial_dilute(
            cfg.graph, configurations[-1], min(thresholds))
        vp = fallback.vp if fallback is not None else None

    pairs = requests.self_clustering or (((n - 1) * alpha_plus, 2.0 * alpha_plus),)
    self_clustering_payload = []
    hierarchy_payload = None
    expansion_payload = None
    if vp is not None and not vp.is_trivial:
        for l0, l1 in pairs:
            verdict = _analysis.self_clustering_detect(sub, vp, l0, l1)
            self_clustering_payload.append({
                "l0": l0, "l1": l1,
                "blocks": _blocks_as_labels(vp, labels),
                "self_clustering": verdict.is_self_clustering,
                "start_index": (None if verdict.start_index is None
                                else idx[verdict.start_index]),
                "start_time": verdict.start_time,
                "intra": verdict.intra_series.tolist(),
                "inter": verdict.inter_series.tolist(),
            })
        depth = requests.hierarchy_depth or vp.block_count
        depth = min(depth, vp.block_count)
        table = _analysis.hierarchy_table(sub, vp)
        hierarchy_payload = {
            "blocks": _blocks_as_labels(vp, labels),
            "times": [s.time for s in sub.snapshots],
            "levels": {str(k): table[k - 1].tolist() for k in range(1, depth + 1)},
        }
        l0_check = pairs[0][0]
        checks = _analysis.hierarchy_expansion_check(sub, vp, l0_check)
        applicable = [c for c in checks if c.applicable]
        failed = [c for c in applicable if not c.passed]
        expansion_payload = {
            "l0": l0_check,
            "total": len(checks),
            "applicable": len(applicable),
            "passed": len(applicable) - len(failed),
            "failed": [{"index": c.snapshot_index, "t": c.time, "k": c.k,
                        "lhs": c.lhs, "rhs": c.rhs, "slack": c.slack}
                       for c in failed],
        }

    final = traj.final
    report = _analysis.equilibrium_report(
        cfg.graph, cfg.interactions, final.configuration,
        eps=cfg.integrator.equilibrium_tol)

    payload = {
        "snapshot_count": len(traj.snapshots),
        "analyzed_indices": idx,
        "equilibrium": {
            "t": final.time,
            "is_equilibrium": report.is_equilibrium,
            "residual": report.residual,
            "d_minus": report.min_edge_length,
            "d_plus": report.max_edge_length,
            "edge_length_bound": report.edge_length_bound,
            "bound_satisfied": report.bound_satisfied,
        },
        "dilute_partitions": {
            "thresholds": list(thresholds),
            "per_snapshot": per_snapshot,
        },
        "diluting_subsequence": witness_payload,
        "self_clustering": self_clustering_payload,
        "hierarchy": hierarchy_payload,
        "expansion_checks": expansion_payload,
    }
    if requests.floor_distances:
        payload["dissipation_floor"] = [
            {"distance": d,
             "estimate": _analysis.dissipation_floor_estimate(
                 cfg.graph, cfg.interactions, d, requests.floor_budget,
                 dimension=cfg.dimension, seed=cfg.seed).value}
            for d in requests.floor_distances]
    return payload


def cmd_analyze(snapshots_path: str, config_path: str | None,
                out_path: str | None) -> int:
    snap_file = Path(snapshots_path)
    cfg_file = Path(config_path) if config_path else snap_file.parent / CONFIG_COPY_FILE
    try:
        cfg = load_config(cfg_file)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        records = read_snapshots(snap_file)
    except SnapshotFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot read snapshots: {exc}", file=sys.stderr)
        return 1
    for number, record in enumerate(records, start=1):
        if record["x"].shape != (cfg.graph.vertex_count, cfg.dimension):
            print(f"error: snapshot line {number}: positions shape "
                  f"{record['x'].shape} does not match the config",
                  file=sys.stderr)
            return 1
    traj = trajectory_from_records(cfg.graph, records)
    payload = _analysis_payload(cfg, traj)
    target = Path(out_path) if out_path else snap_file.parent / ANALYSIS_FILE
    target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                      encoding="utf-8")
    print(f"analysis report written to {target}")
    return 0


# ---------------------------------------------------------------------------
# validate command


def cmd_validate(config_path: str) -> int:
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    all_passed = True
    for edge, rep in zip(cfg.graph.edges, cfg.interactions.validate_all()):
        a, b = cfg.labels[edge[0]], cfg.labels[edge[1]]
        print(f"edge {a}-{b}:")
        for check in rep.checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"  [{status}] {check.name} ({check.detail})")
        all_passed = all_passed and rep.passed

    def show(name: str, compute) -> None:
        try:
            print(f"{name}: {compute():.12g}")
        except ValueError as exc:
            print(f"{name}: unavailable ({exc})")

    show("repulsion radius (alpha-)",
         lambda: cfg.interactions.repulsion_radius)
    show("attraction radius (alpha+)",
         lambda: cfg.interactions.attraction_radius)
    show("pair potential floor (psi0)",
         lambda: cfg.interactions.potential_floor())
    show("equilibrium edge bound (D+)",
         lambda: (cfg.graph.vertex_count - 1) * cfg.interactions.attraction_radius)

    def initial_collision_floor() -> float:
        if cfg.positions is not None:
            p0 = cfg.positions
        else:
            rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
            p0 = place_random(cfg, rng)
        from .dynamics import potential as system_potential
        return _analysis.collision_bound(
            cfg.graph, cfg.interactions,
            system_potential(cfg.graph, cfg.interactions, p0))

    show("collision floor at p(0)", initial_collision_floor)
    return 0 if all_passed else 1


# ---------------------------------------------------------------------------
# entry point


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fading-flock",
        description="Gradient-flow multi-agent simulator with strong "
                    "repulsion, fading attraction, and cluster diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate a configured system")
    sim.add_argument("config")
    sim.add_argument("--out", default="out", help="output directory")
    sim.add_argument("--seed", type=int, default=None,
                     help="override the config master seed")
    sim.add_argument("--ensemble", type=int, default=1,
                     help="number of independently seeded runs")

    ana = sub.add_parser("analyze", help="analyze a snapshot stream")
    ana.add_argument("snapshots")
    ana.add_argument("--config", default=None,
                     help="run config (default: config.json next to snapshots)")
    ana.add_argument("--out", default=None,
                     help="report path (default: analysis.json next to snapshots)")

    val = sub.add_parser("validate", help="validate a config and print bounds")
    val.add_argument("config")

    args = parser.parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args.config, args.out, args.seed, args.ensemble)
    if args.command == "analyze":
        return cmd_analyze(args.snapshots, args.config, args.out)
    if args.command == "validate":
        return cmd_validate(args.config)
    parser.error(f"unknown command {args.command!r}")
    return 2


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
