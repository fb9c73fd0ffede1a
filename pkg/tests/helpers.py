"""Shared test utilities: random graph builders and independent oracles.

The oracles here are deliberately written in the dumbest correct style
available (forward dynamic programming, dense matrix identities, explicit
enumeration) so they share no code path with the library implementations
they check.
"""

from __future__ import annotations

import numpy as np

from walklab.graph import Graph


def random_connected_graph(
    rng: np.random.Generator,
    n: int,
    extra: int = 0,
    weighted: bool = False,
    loops: bool = False,
    parallel: bool = False,
) -> Graph:
    """Random tree plus `extra` additional edges, connected by construction."""
    edges = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.append([u, v, 1.0])
    for _ in range(extra):
        if loops and rng.random() < 0.15:
            u = int(rng.integers(0, n))
            edges.append([u, u, 1.0])
            continue
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v and not loops:
            continue
        if not parallel:
            key = (min(u, v), max(u, v))
            if any((min(a, b), max(a, b)) == key for a, b, _ in edges):
                continue
        edges.append([u, v, 1.0])
    if weighted:
        for e in edges:
            e[2] = float(rng.uniform(0.1, 4.0))
    return Graph(n, edges, name=f"random(n={n},extra={extra})")


def random_simple_connected_graph(rng: np.random.Generator, n: int, extra: int = 0) -> Graph:
    return random_connected_graph(rng, n, extra=extra)


def transition_matrix(g: Graph, lazy: bool = False) -> np.ndarray:
    """Row-stochastic walk matrix built straight from the incidence lists."""
    p = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        p[u, v] += w
        p[v, u] += w
    c = g.weighted_degrees
    p = p / c[:, None]
    if lazy:
        p = 0.5 * p + 0.5 * np.eye(g.n)
    return p


def forward_dp_hitting(g: Graph, source: int, target: int, tol: float = 1e-12, cap: int = 10**7) -> float:
    """Expected hitting time by stepping the law of the unabsorbed walk.

    E[T] = sum_{t>=1} P(T >= t); we accumulate survival mass until the
    remaining mass is negligible. Only sensible on tiny well-connected
    graphs, which is all the tests use it for.
    """
    if source == target:
        return 0.0
    p = transition_matrix(g).copy()
    p[:, target] = 0.0  # mass that arrives is absorbed and leaves the sum
    mass = np.zeros(g.n)
    mass[source] = 1.0
    total = 0.0
    for _ in range(cap):
        alive = mass.sum()  # P(T > t)
        if alive < tol:
            return total
        total += alive
        mass = mass @ p
    raise RuntimeError("forward DP did not converge")


def z_matrix_hitting(g: Graph) -> np.ndarray:
    """Hitting times through the fundamental matrix of the chain.

    With Z = (I - P + 1 pi^T)^{-1}, the expected time from i to j is
    (Z[j, j] - Z[i, j]) / pi[j].
    """
    p = transition_matrix(g)
    pi = g.weighted_degrees / g.volume
    n = g.n
    z = np.linalg.inv(np.eye(n) - p + np.outer(np.ones(n), pi))
    h = (np.diag(z)[None, :] - z) / pi[None, :]
    np.fill_diagonal(h, 0.0)
    return h


def censored_kernel(g: Graph, subset) -> np.ndarray:
    """Transition kernel of the walk watched only on `subset`.

    Schur complement of the exterior block:
    P_S = P_SS + P_SX (I - P_XX)^(-1) P_XS.
    """
    p = transition_matrix(g)
    s = sorted(set(subset))
    x = [v for v in range(g.n) if v not in set(s)]
    if not x:
        return p[np.ix_(s, s)]
    pss = p[np.ix_(s, s)]
    psx = p[np.ix_(s, x)]
    pxx = p[np.ix_(x, x)]
    pxs = p[np.ix_(x, s)]
    return pss + psx @ np.linalg.solve(np.eye(len(x)) - pxx, pxs)
