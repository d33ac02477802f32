"""Ground-truth machinery: exhaustive landscape enumeration and exact coloring.

All routines here are independent of the phase dynamics and serve as its
reference: brute-force enumeration of every lattice configuration, an exact
backtracking K-colorer, and exact proper-coloring counting.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph_io import Graph
from .potts import Coloring, TWO_PI

ENUMERATION_GUARD = 10_000_000
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Landscape:
    """Exhaustive view of the lattice energy landscape of a graph.

    energies holds the vector-Potts energy of every one of the N^|V| lattice
    configurations, sorted ascending.  Local minima are counted under the
    single-vertex spin-change neighbourhood.
    """

    n_states: int
    energies: np.ndarray
    min_energy: float
    num_global_minima: int
    num_local_minima: int

    def __post_init__(self):
        if self.n_states != len(self.energies):
            raise ValueError("n_states must match the energy sequence length")
        if self.num_global_minima < 1 or self.num_local_minima < self.num_global_minima:
            raise ValueError("minima counts inconsistent")


def _guard(n_states: float, what: str):
    if n_states > ENUMERATION_GUARD:
        raise ValueError(
            f"{what}: {n_states:.3g} states exceeds the enumeration guard of {ENUMERATION_GUARD}"
        )


def _spin_chunks(num_vertices: int, n_phases: int):
    """Yield (codes, spins) for all N^V configurations in fixed chunks."""
    n_states = n_phases**num_vertices
    powers = n_phases ** np.arange(num_vertices, dtype=np.int64)
    for start in range(0, n_states, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, n_states), dtype=np.int64)
        spins = (codes[:, None] // powers[None, :]) % n_phases
        yield codes, spins


def enumerate_landscape(graph: Graph, n_phases: int) -> Landscape:
    """Evaluate the vector-Potts energy of every lattice configuration.

    Guarded to N^|V| <= 10^7 states.  Energy-level comparisons use an
    absolute tolerance of 1e-9 * max(1, |E|), far below the spacing between
    distinct lattice energy levels.
    """
    n_states = n_phases**graph.num_vertices
    _guard(n_states, "enumerate_landscape")
    u, v, w = graph.edge_arrays()
    costab = np.cos(TWO_PI * np.arange(n_phases) / n_phases)
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(graph.num_vertices)]
    for (a, b), wt in zip(graph.edges, w):
        adjacency[a].append((int(b), float(wt)))
        adjacency[b].append((int(a), float(wt)))

    tol = 1e-9 * max(1.0, float(graph.num_edges))
    all_energies = np.empty(n_states, dtype=np.float64)
    num_local = 0
    for codes, spins in _spin_chunks(graph.num_vertices, n_phases):
        energies = np.zeros(len(codes))
        for e in range(len(u)):
            energies += w[e] * costab[(spins[:, u[e]] - spins[:, v[e]]) % n_phases]
        all_energies[codes[0] : codes[0] + len(codes)] = energies

        is_local = np.ones(len(codes), dtype=bool)
        for vertex in range(graph.num_vertices):
            if not adjacency[vertex] or not is_local.any():
                continue
            # energy contribution of this vertex for each candidate spin
            contrib = np.zeros((len(codes), n_phases))
            for nbr, wt in adjacency[vertex]:
                contrib += wt * costab[(np.arange(n_phases)[None, :] - spins[:, nbr, None]) % n_phases]
            current = contrib[np.arange(len(codes)), spins[:, vertex]]
            is_local &= contrib.min(axis=1) >= current - tol
        num_local += int(np.count_nonzero(is_local))

    all_energies.sort()
    min_energy = float(all_energies[0])
    num_global = int(np.count_nonzero(all_energies <= min_energy + tol))
    return Landscape(n_states, all_energies, min_energy, num_global, num_local)


def count_proper_colorings(graph: Graph, k: int) -> int:
    """Exact number of proper k-colorings, by enumeration (guarded to 10^7)."""
    _guard(k**graph.num_vertices, "count_proper_colorings")
    u, v, _ = graph.edge_arrays()
    total = 0
    for _, spins in _spin_chunks(graph.num_vertices, k):
        proper = np.ones(len(spins), dtype=bool)
        for e in range(len(u)):
            proper &= spins[:, u[e]] != spins[:, v[e]]
        total += int(np.count_nonzero(proper))
    return total


@dataclass(frozen=True)
class ColorSearchResult:
    """Outcome of the exact colorer: sat with a witness, unsat, or budget out."""

    status: str  # "sat" | "unsat" | "budget_exhausted"
    coloring: Optional[Coloring]
    nodes_expanded: int


def exact_color(graph: Graph, k: int, budget: int = 2_000_000) -> ColorSearchResult:
    """Exact k-coloring by backtracking with saturation-degree ordering.

    Branches on the uncolored vertex with the most distinctly colored
    neighbours (ties by degree), and only tries one unused color per level to
    prune color permutations.  `budget` caps node expansions so pathological
    instances fail loudly ("budget_exhausted") instead of hanging; that
    outcome is distinct from a proven "unsat".
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = graph.num_vertices
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b in graph.edges:
        adj[a].add(int(b))
        adj[b].add(int(a))

    colors = np.full(n, -1, dtype=np.int64)
    neighbour_colors: list[set[int]] = [set() for _ in range(n)]
    expanded = 0

    def pick() -> int:
        best, best_key = -1, (-1, -1)
        for vtx in range(n):
            if colors[vtx] >= 0:
                continue
            key = (len(neighbour_colors[vtx]), len(adj[vtx]))
            if key > best_key:
                best, best_key = vtx, key
        return best

    def search(num_colored: int, max_used: int) -> Optional[bool]:
        """True = sat, False = exhausted subtree, None = budget hit."""
        nonlocal expanded
        if num_colored == n:
            return True
        expanded += 1
        if expanded > budget:
            return None
        vtx = pick()
        for color in range(min(max_used + 1, k)):
            if color in neighbour_colors[vtx]:
                continue
            colors[vtx] = color
            touched = []
            for nbr in adj[vtx]:
                if colors[nbr] < 0 and color not in neighbour_colors[nbr]:
                    neighbour_colors[nbr].add(color)
                    touched.append(nbr)
            result = search(num_colored + 1, max(max_used, color + 1))
            if result:
                return True
            for nbr in touched:
                neighbour_colors[nbr].discard(color)
            colors[vtx] = -1
            if result is None:
                return None
        return False

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, n + 1000))
    try:
        outcome = search(0, 0)
    finally:
        sys.setrecursionlimit(old_limit)

    if outcome:
        return ColorSearchResult("sat", Coloring(colors, max(k, 2)), expanded)
    if outcome is None:
        return ColorSearchResult("budget_exhausted", None, expanded)
    return ColorSearchResult("unsat", None, expanded)


def landscape_csv(landscape: Landscape) -> str:
    """Sorted (index, energy) rows for plotting the landscape curve."""
    rows = ["index,energy"]
    rows += [f"{i},{repr(float(e))}" for i, e in enumerate(landscape.energies)]
    return "\n".join(rows) + "\n"
