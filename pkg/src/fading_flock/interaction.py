"""Pairwise interaction laws with strong short-range repulsion and fading
long-range attraction.

A law is a scalar function of distance, negative (repulsive) below some
radius and positive (attractive) beyond another.  The signed force magnitude
between a pair at distance d is d times the law value, and the pair potential
is the integral of s times the law from 1 to d.  Strong repulsion means the
force magnitude and the potential both diverge at contact; fading attraction
means the force magnitude vanishes at infinity, so the potential stays
bounded as a formation spreads out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy import integrate, optimize

from .graph import Graph

# Quadrature and scalar-minimization tolerances used throughout the module.
_QUAD_ABS_TOL = 1e-10
_FLOOR_XATOL = 1e-10
_LEVEL_XTOL = 1e-13


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    """Per-condition pass/fail record for one interaction law."""

    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> tuple[ValidationCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)


def _require_positive_distance(d) -> None:
    arr = np.asarray(d, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("nonpositive distance")


class InteractionFunction:
    """Base class for interaction laws.  Subclasses provide ``value``."""

    def value(self, d):
        """Law value at distance d (> 0).  Accepts scalars or arrays."""
        raise NotImplementedError

    def force_magnitude(self, d):
        """Signed force strength d * value(d); negative means repulsion."""
        _require_positive_distance(d)
        return d * self.value(d)

    def pair_potential(self, d):
        """Integral of s * value(s) from 1 to d."""
        raise NotImplementedError

    @property
    def repulsion_radius(self) -> float:
        """Distance at or below which the law is certified repulsive."""
        raise NotImplementedError

    @property
    def attraction_radius(self) -> float:
        """Distance at or beyond which the law is certified attractive."""
        raise NotImplementedError

    def validate(self) -> ValidationReport:
        raise NotImplementedError

    def potential_floor(self) -> float:
        """Global minimum of the pair potential.

        The minimum over all positive distances is attained inside the window
        [repulsion_radius, attraction_radius]: the integrand is negative below
        it and positive beyond it.  A bounded scalar search over the window,
        compared against the endpoints, therefore gives the global value.
        """
        lo, hi = self.repulsion_radius, self.attraction_radius
        result = optimize.minimize_scalar(
            self.pair_potential, bounds=(lo, hi), method="bounded",
            options={"xatol": _FLOOR_XATOL},
        )
        return min(float(result.fun), self.pair_potential(lo), self.pair_potential(hi))

    def _attractive_force_peak(self) -> float:
        """Largest force magnitude anywhere in the attractive tail."""
        raise NotImplementedError

    def force_level_supremum(self, eta: float) -> float:
        """Largest distance where the force magnitude equals eta in absolute
        value.

        Requires eta to exceed every force magnitude in the attractive tail;
        the level set is then confined to the repulsive branch, where a single
        bracketed root is found.  As eta grows the result shrinks to zero.
        """
        if eta <= 0.0:
            raise ValueError("eta must be positive")
        if eta <= self._attractive_force_peak():
            raise ValueError("level set not confined")
        hi = self.repulsion_radius
        lo = hi / 2.0
        while self.force_magnitude(lo) > -eta:
            hi = lo
            lo /= 2.0
            if lo < 1e-300:
                raise ValueError("level set not confined")
        return float(optimize.brentq(
            lambda d: self.force_magnitude(d) + eta, lo, hi, xtol=_LEVEL_XTOL,
        ))


class LennardJones(InteractionFunction):
    """Two-term power law -sigma1 / d**n1 + sigma2 / d**n2.

    Exponents are restricted to integers n1 > n2 > 2, which guarantees strong
    repulsion, fading attraction, a closed-form pair potential, and a bounded
    potential tail.  The law has a single zero crossing at
    (sigma1 / sigma2) ** (1 / (n1 - n2)); the repulsion/attraction radii sit a
    small multiplicative margin below/above it.
    """

    __slots__ = ("sigma1", "sigma2", "n1", "n2", "margin",
                 "neutral_distance", "_repulsion_radius", "_attraction_radius")

    def __init__(self, sigma1: float, sigma2: float, n1: int, n2: int,
                 margin: float = 1e-6):
        if sigma1 <= 0 or sigma2 <= 0:
            raise ValueError("sigma1 and sigma2 must be positive")
        if int(n1) != n1 or int(n2) != n2:
            raise ValueError("exponents must be integers")
        n1, n2 = int(n1), int(n2)
        if not n1 > n2 > 2:
            raise ValueError("exponents must satisfy n1 > n2 > 2")
        if not 0 < margin < 1:
            raise ValueError("margin must be in (0, 1)")
        self.sigma1 = float(sigma1)
        self.sigma2 = float(sigma2)
        self.n1 = n1
        self.n2 = n2
        self.margin = float(margin)
        self.neutral_distance = (self.sigma1 / self.sigma2) ** (1.0 / (n1 - n2))
        self._repulsion_radius = self.neutral_distance * (1.0 - margin)
        self._attraction_radius = self.neutral_distance * (1.0 + margin)

    def value(self, d):
        _require_positive_distance(d)
        d = np.asarray(d, dtype=float)
        out = -self.sigma1 * d ** (-self.n1) + self.sigma2 * d ** (-self.n2)
        return float(out) if out.ndim == 0 else out

    def pair_potential(self, d):
        _require_positive_distance(d)
        d = np.asarray(d, dtype=float)
        out = (self.sigma1 * (d ** (2 - self.n1) - 1.0) / (self.n1 - 2)
               - self.sigma2 * (d ** (2 - self.n2) - 1.0) / (self.n2 - 2))
        return float(out) if out.ndim == 0 else out

    @property
    def tail_potential(self) -> float:
        """Limit of the pair potential at infinite distance."""
        return -self.sigma1 / (self.n1 - 2) + self.sigma2 / (self.n2 - 2)

    @property
    def repulsion_radius(self) -> float:
        return self._repulsion_radius

    @property
    def attraction_radius(self) -> float:
        return self._attraction_radius

    def _attractive_force_peak(self) -> float:
        # The force magnitude on the attractive side rises to a single hump
        # and then decays; the hump sits at a closed-form distance beyond the
        # zero crossing.
        hump = (self.sigma1 * (self.n1 - 1)
                / (self.sigma2 * (self.n2 - 1))) ** (1.0 / (self.n1 - self.n2))
        at = max(hump, self.attraction_radius)
        return self.force_magnitude(at)

    def validate(self) -> ValidationReport:
        # All conditions hold analytically under the constructor constraints;
        # the report spells out why.
        n1, n2 = self.n1, self.n2
        checks = (
            ValidationCheck(
                "strong repulsion: force magnitude diverges at contact",
                n1 > 1, f"leading term is -sigma1 * d**{1 - n1} with n1={n1} > 1"),
            ValidationCheck(
                "strong repulsion: potential diverges at contact",
                n1 >= 2, f"potential grows like d**{2 - n1} with n1={n1} >= 2"),
            ValidationCheck(
                "fading attraction: positive beyond the attraction radius",
                n1 > n2, f"slow term dominates at long range since n1={n1} > n2={n2}"),
            ValidationCheck(
                "fading attraction: force magnitude vanishes at infinity",
                n2 > 1, f"tail force decays like d**{1 - n2} with n2={n2} > 1"),
        )
        return ValidationReport(checks)

    def __repr__(self) -> str:
        return (f"LennardJones({self.sigma1}, {self.sigma2}, "
                f"{self.n1}, {self.n2})")


class TabulatedFunction(InteractionFunction):
    """User-supplied law given by an evaluator plus a sample grid.

    Positivity on an unbounded tail cannot be machine-verified from samples,
    so callers must supply the attraction radius themselves; the library only
    checks it against the grid.  The repulsion radius is the largest grid
    point below which every sample is negative.
    """

    __slots__ = ("func", "grid", "_attraction_radius", "_values",
                 "_repulsion_radius", "_neutral")

    def __init__(self, func: Callable[[float], float], grid: Sequence[float],
                 attraction_radius: float | None = None):
        grid_arr = np.asarray(sorted(float(d) for d in grid), dtype=float)
        if grid_arr.size < 4:
            raise ValueError("sample grid needs at least 4 points")
        _require_positive_distance(grid_arr)
        self.func = func
        self.grid = grid_arr
        self._attraction_radius = (
            None if attraction_radius is None else float(attraction_radius))
        self._values = np.asarray([float(func(d)) for d in grid_arr])
        self._repulsion_radius = None
        self._neutral = None

    def value(self, d):
        _require_positive_distance(d)
        if np.ndim(d) == 0:
            return float(self.func(float(d)))
        return np.asarray([float(self.func(float(x))) for x in np.ravel(d)]).reshape(np.shape(d))

    def pair_potential(self, d):
        _require_positive_distance(d)
        if np.ndim(d) != 0:
            return np.asarray([self.pair_potential(float(x)) for x in np.ravel(d)]).reshape(np.shape(d))
        d = float(d)
        lo, hi = min(1.0, d), max(1.0, d)
        # hand the quadrature the sample grid as breakpoints; user evaluators
        # are often only piecewise smooth across it
        interior = [float(p) for p in self.grid if lo < p < hi]
        val, _ = integrate.quad(lambda s: s * self.func(s), 1.0, d,
                                epsabs=_QUAD_ABS_TOL,
                                points=interior or None,
                                limit=len(interior) + 200)
        return float(val)

    def _scan_radii(self) -> None:
        negative = self._values < 0.0
        if not negative[0]:
            raise ValueError("not an attraction/repulsion function")
        head = 0
        while head + 1 < len(self.grid) and negative[head + 1]:
            head += 1
        self._repulsion_radius = float(self.grid[head])
        if head + 1 < len(self.grid):
            self._neutral = float(optimize.brentq(
                self.func, self.grid[head], self.grid[head + 1], xtol=_LEVEL_XTOL))
        else:
            raise ValueError("not an attraction/repulsion function")

    @property
    def repulsion_radius(self) -> float:
        if self._repulsion_radius is None:
            self._scan_radii()
        return self._repulsion_radius

    @property
    def neutral_distance(self) -> float:
        if self._neutral is None:
            self._scan_radii()
        return self._neutral

    @property
    def attraction_radius(self) -> float:
        if self._attraction_radius is None:
            raise ValueError("tabulated law has no attraction-radius certificate")
        if self._attraction_radius < self.repulsion_radius:
            raise ValueError("attraction-radius certificate below the repulsive range")
        return self._attraction_radius

    def _attractive_force_peak(self) -> float:
        # Certified only at grid resolution: sample the tail from the
        # attraction radius out to well past the grid.
        lo = self.attraction_radius
        hi = max(self.grid[-1] * 10.0, lo * 10.0)
        samples = np.geomspace(lo, hi, 256)
        return float(np.max(np.abs([self.force_magnitude(d) for d in samples])))

    def validate(self) -> ValidationReport:
        """Numeric trend checks on a log-spaced probe of the sampled range.

        Divergence and vanishing limits cannot be proven from finitely many
        samples; the checks certify the monotone trends a conforming law must
        display toward the ends of its sampled range.
        """
        probe = np.geomspace(self.grid[0], self.grid[-1], 64)
        head = probe[:5]
        tail = probe[-5:]
        force_head = np.asarray([self.force_magnitude(d) for d in head])
        pot_head = np.asarray([self.pair_potential(d) for d in head])
        force_tail = np.asarray([self.force_magnitude(d) for d in tail])

        repulsive_head = bool(force_head[0] < 0.0)
        force_divergent = repulsive_head and bool(np.all(np.diff(force_head) > 0.0))
        potential_divergent = repulsive_head and bool(np.all(np.diff(pot_head) < 0.0))

        if self._attraction_radius is None:
            positive_tail = False
            tail_detail = "no attraction-radius certificate supplied"
        else:
            beyond = self.grid[self.grid >= self._attraction_radius]
            sampled = np.asarray([self.func(d) for d in beyond])
            positive_tail = beyond.size > 0 and bool(np.all(sampled > 0.0))
            tail_detail = (f"{beyond.size} grid samples at or past "
                           f"{self._attraction_radius}")
        force_fading = bool(np.all(np.diff(np.abs(force_tail)) < 0.0))

        checks = (
            ValidationCheck(
                "strong repulsion: force magnitude diverges at contact",
                force_divergent,
                "force magnitude strictly decreasing toward small distances "
                "and negative at the grid head" if force_divergent
                else "grid head does not trend to minus infinity"),
            ValidationCheck(
                "strong repulsion: potential diverges at contact",
                potential_divergent,
                "pair potential strictly increasing toward small distances"
                if potential_divergent
                else "pair potential does not trend to plus infinity"),
            ValidationCheck(
                "fading attraction: positive beyond the attraction radius",
                positive_tail, tail_detail),
            ValidationCheck(
                "fading attraction: force magnitude vanishes at infinity",
                force_fading,
                "force magnitude strictly decreasing across the grid tail"
                if force_fading else
                "force magnitude does not decay across the grid tail"),
        )
        return ValidationReport(checks)

    def __repr__(self) -> str:
        return (f"TabulatedFunction(<{len(self.grid)} samples on "
                f"[{self.grid[0]:g}, {self.grid[-1]:g}]>)")


class InteractionMap:
    """Assignment of one interaction law to every edge of a graph.

    Exposes a single attraction radius valid for all edges (the largest
    per-edge radius) and vectorized per-edge evaluation for the hot paths.
    """

    def __init__(self, graph: Graph,
                 functions: Mapping[tuple[int, int], InteractionFunction] | None = None,
                 default: InteractionFunction | None = None):
        functions = dict(functions or {})
        edge_set = set(graph.edges)
        normalized: dict[tuple[int, int], InteractionFunction] = {}
        for (i, j), f in functions.items():
            key = (min(i, j), max(i, j))
            if key not in edge_set:
                raise ValueError(f"({i}, {j}) is not an edge of the graph")
            if key in normalized:
                raise ValueError(f"duplicate interaction for edge {key}")
            normalized[key] = f
        assigned = []
        for edge in graph.edges:
            f = normalized.get(edge, default)
            if f is None:
                raise ValueError(f"no interaction assigned to edge {edge}")
            assigned.append(f)
        self.graph = graph
        self.functions: tuple[InteractionFunction, ...] = tuple(assigned)
        self._edge_index = {edge: k for k, edge in enumerate(graph.edges)}
        self._floor: float | None = None

        self._lj_params = None
        if all(isinstance(f, LennardJones) for f in self.functions) and self.functions:
            self._lj_params = (
                np.asarray([f.sigma1 for f in self.functions]),
                np.asarray([f.sigma2 for f in self.functions]),
                np.asarray([float(f.n1) for f in self.functions]),
                np.asarray([float(f.n2) for f in self.functions]),
            )

    @classmethod
    def uniform(cls, graph: Graph, f: InteractionFunction) -> "InteractionMap":
        return cls(graph, default=f)

    def function_for(self, i: int, j: int) -> InteractionFunction:
        key = (min(i, j), max(i, j))
        if key not in self._edge_index:
            raise ValueError(f"({i}, {j}) is not an edge of the graph")
        return self.functions[self._edge_index[key]]

    @property
    def attraction_radius(self) -> float:
        """Single radius beyond which every edge law is attractive."""
        return max(f.attraction_radius for f in self.functions)

    @property
    def repulsion_radius(self) -> float:
        """Single radius at or below which every edge law is repulsive."""
        return min(f.repulsion_radius for f in self.functions)

    def edge_values(self, lengths: np.ndarray) -> np.ndarray:
        """Law value per edge, aligned with ``graph.edges``."""
        if self._lj_params is not None:
            s1, s2, n1, n2 = self._lj_params
            return -s1 * lengths ** (-n1) + s2 * lengths ** (-n2)
        return np.asarray([f.value(d) for f, d in zip(self.functions, lengths)])

    def edge_pair_potentials(self, lengths: np.ndarray) -> np.ndarray:
        if self._lj_params is not None:
            s1, s2, n1, n2 = self._lj_params
            return (s1 * (lengths ** (2.0 - n1) - 1.0) / (n1 - 2.0)
                    - s2 * (lengths ** (2.0 - n2) - 1.0) / (n2 - 2.0))
        return np.asarray([f.pair_potential(d)
                           for f, d in zip(self.functions, lengths)])

    def potential_floor(self) -> float:
        """Worst per-edge minimum of the pair potential.

        The total potential of any valid configuration is at least the edge
        count times this value.
        """
        if self._floor is None:
            self._floor = min(f.potential_floor() for f in self.functions)
        return self._floor

    def validate_all(self) -> tuple[ValidationReport, ...]:
        return tuple(f.validate() for f in self.functions)

    def induced(self, subset: Iterable[int]) -> "InteractionMap":
        """Interaction map of the subgraph induced by ``subset``; edge laws
        carry over from the parent edges."""
        members = sorted(set(subset))
        subgraph = self.graph.induced_subgraph(members)
        index = {v: k for k, v in enumerate(members)}
        lookup = dict(zip(self.graph.edges, self.functions))
        assigned = {}
        for i, j in self.graph.edges:
            if i in index and j in index:
                assigned[(index[i], index[j])] = lookup[(i, j)]
        return InteractionMap(subgraph, assigned)
