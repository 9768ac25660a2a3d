"""Shared test fixtures: random instance generators and independent oracles.

The oracles here deliberately avoid the library's vectorized paths (plain
double loops, direct quadrature, exhaustive enumeration) so they can serve as
independent reference values.
"""

from __future__ import annotations

import numpy as np

import fading_flock as ff


def random_connected_graph(rng: np.random.Generator, n: int,
                           extra_edge_prob: float = 0.35) -> ff.Graph:
    """Random spanning tree plus independent extra edges."""
    edges = set()
    order = rng.permutation(n)
    for k in range(1, n):
        a = int(order[k])
        b = int(order[rng.integers(k)])
        edges.add((min(a, b), max(a, b)))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < extra_edge_prob:
                edges.add((i, j))
    return ff.Graph(n, sorted(edges))


def random_lj(rng: np.random.Generator) -> ff.LennardJones:
    # sigma jitter kept mild so mixed laws on one graph agree roughly on the
    # neutral distance; wildly mismatched laws make equilibria stiff enough
    # to drag explicit integration to a crawl
    n2 = int(rng.integers(3, 5))
    n1 = n2 + int(rng.integers(1, 3))
    return ff.LennardJones(float(rng.uniform(0.8, 1.25)),
                           float(rng.uniform(0.8, 1.25)), n1, n2)


def random_lj_map(rng: np.random.Generator, g: ff.Graph) -> ff.InteractionMap:
    return ff.InteractionMap(g, {edge: random_lj(rng) for edge in g.edges})


def random_configuration(rng: np.random.Generator, g: ff.Graph, dim: int,
                         span: float = 3.0, min_sep: float = 0.3) -> ff.Configuration:
    while True:
        p = ff.Configuration(rng.uniform(-span, span, size=(g.vertex_count, dim)))
        lengths = ff.edge_lengths(g, p)
        if lengths.size == 0 or lengths.min() >= min_sep:
            return p


def brute_force_field(g: ff.Graph, m: ff.InteractionMap,
                      p: ff.Configuration) -> np.ndarray:
    """Term-by-term double summation, independent of the vectorized path."""
    x = p.positions
    out = np.zeros_like(x)
    for i in range(g.vertex_count):
        for j in sorted(g.neighbors(i)):
            d = float(np.linalg.norm(x[j] - x[i]))
            out[i] += m.function_for(i, j).value(d) * (x[j] - x[i])
    return out.ravel()


def brute_force_potential(g: ff.Graph, m: ff.InteractionMap,
                          p: ff.Configuration) -> float:
    total = 0.0
    for i, j in g.edges:
        d = float(np.linalg.norm(p.positions[j] - p.positions[i]))
        total += m.function_for(i, j).pair_potential(d)
    return total


def grid_potential_minimum(f: ff.InteractionFunction, lo: float, hi: float,
                           points: int = 200001) -> float:
    """Dense-grid minimization of the pair potential, as a reference."""
    grid = np.linspace(lo, hi, points)
    return float(min(f.pair_potential(d) for d in grid))
