"""Electrical-network machinery: resistances, flows, cover-time bounds.

A weighted graph is read as a resistor network with edge conductances equal
to the edge weights. Self-loops never carry current, so they are invisible
to every resistance computation here; they still count toward the volume,
which is what links resistance back to commute times:

    commute(u, v) = volume * R(u, v).

The bound functions all return plain floats so reports can serialize them
without ceremony.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DisconnectedError,
    FlowValidationError,
    ParameterError,
    SizeCapError,
    UnsupportedInputError,
)
from .graph import Graph, grid2d

__all__ = [
    "harmonic_number",
    "conductance_matrix",
    "laplacian",
    "effective_resistance",
    "resistance_matrix",
    "commute_time",
    "commute_matrix",
    "unit_current_flow",
    "flow_energy",
    "thomson_gap",
    "spanning_tree_bound",
    "MerstResult",
    "merst_bound",
    "matthews_upper",
    "matthews_subset_upper",
    "matthews_lower",
    "grid_resistance_monitor",
    "rayleigh_monitor",
    "bound_report",
]


def harmonic_number(k: int) -> float:
    """h(k) = 1 + 1/2 + ... + 1/k; h(0) = 0."""
    return float(sum(1.0 / i for i in range(1, k + 1)))


def conductance_matrix(g: Graph) -> np.ndarray:
    """Symmetric pooled edge conductances, loops dropped."""
    c = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        if u != v:
            c[u, v] += w
            c[v, u] += w
    return c


def laplacian(g: Graph) -> np.ndarray:
    c = conductance_matrix(g)
    return np.diag(c.sum(axis=1)) - c


def _require_connected(g: Graph) -> None:
    if not g.is_connected:
        raise DisconnectedError(f"{g.name} is disconnected")


def effective_resistance(g: Graph, u: int, v: int) -> float:
    """R(u, v) by the voltage route.

    Pin W(u) = 1 and W(v) = 0, solve the harmonic conditions at every other
    vertex, and return 1 over the current that leaves u. The current is read
    off the unpinned Laplacian row, so Kirchhoff at u is not assumed.
    """
    if u == v:
        return 0.0
    _require_connected(g)
    lap = laplacian(g)
    a = lap.copy()
    b = np.zeros(g.n)
    a[u, :] = 0.0
    a[u, u] = 1.0
    b[u] = 1.0
    a[v, :] = 0.0
    a[v, v] = 1.0
    voltages = np.linalg.solve(a, b)
    strength = float(lap[u] @ voltages)
    if strength <= 0:
        raise ParameterError(f"non-positive current {strength} between {u} and {v}")
    return 1.0 / strength


def resistance_matrix(g: Graph) -> np.ndarray:
    """All-pairs effective resistances from one grounded factorization.

    Ground the last vertex, factor the reduced Laplacian once, and read
    every pair from the Green's function: R(u, v) = G[u,u] + G[v,v] - 2G[u,v]
    with the grounded row and column identically zero.
    """
    _require_connected(g)
    n = g.n
    if n == 1:
        return np.zeros((1, 1))
    lap = laplacian(g)
    lu, piv = scipy.linalg.lu_factor(lap[: n - 1, : n - 1])
    green = np.zeros((n, n))
    green[: n - 1, : n - 1] = scipy.linalg.lu_solve((lu, piv), np.eye(n - 1))
    diag = np.diag(green)
    r = diag[:, None] + diag[None, :] - green - green.T
    return 0.5 * (r + r.T)


def commute_time(g: Graph, u: int, v: int) -> float:
    """Expected round trip u -> v -> u; the volume-resistance identity."""
    return g.volume * effective_resistance(g, u, v)


def commute_matrix(g: Graph) -> np.ndarray:
    return g.volume * resistance_matrix(g)


# --- flows ---


def unit_current_flow(g: Graph, u: int, v: int) -> np.ndarray:
    """The unit current flow from u to v as an antisymmetric matrix.

    Entry [x, y] is the net current pushed from x to y across the pooled
    edge (x, y). This is the energy minimizer among unit flows.
    """
    if u == v:
        raise ParameterError("flow endpoints must differ")
    _require_connected(g)
    lap = laplacian(g)
    a = lap.copy()
    b = np.zeros(g.n)
    a[u, :] = 0.0
    a[u, u] = 1.0
    b[u] = 1.0
    a[v, :] = 0.0
    a[v, v] = 1.0
    voltages = np.linalg.solve(a, b)
    strength = float(lap[u] @ voltages)
    c = conductance_matrix(g)
    flow = c * (voltages[:, None] - voltages[None, :])
    return flow / strength


def flow_energy(
    g: Graph, flow: np.ndarray, source: int, sink: int, tol: float = 1e-9
) -> float:
    """Energy of a unit flow, after validating the flow laws.

    Raises FlowValidationError naming the violated law: antisymmetry,
    support (current on a non-edge), conservation at an interior vertex,
    or source strength different from 1.
    """
    flow = np.asarray(flow, dtype=float)
    n = g.n
    if flow.shape != (n, n):
        raise ParameterError(f"flow must be an ({n}, {n}) matrix")
    if source == sink:
        raise ParameterError("flow endpoints must differ")
    anti = float(np.abs(flow + flow.T).max())
    if anti > tol:
        i, j = np.unravel_index(np.abs(flow + flow.T).argmax(), flow.shape)
        raise FlowValidationError(
            f"antisymmetry violated at edge ({i}, {j}) by {anti:.3e}"
        )
    c = conductance_matrix(g)
    off_support = np.abs(flow[c == 0])
    if off_support.size and float(off_support.max()) > tol:
        raise FlowValidationError(
            f"support violated: current {float(off_support.max()):.3e} "
            f"on a non-edge"
        )
    net = flow.sum(axis=1)
    for x in range(n):
        if x in (source, sink):
            continue
        if abs(net[x]) > tol:
            raise FlowValidationError(
                f"conservation violated at vertex {x} by {net[x]:.3e}"
            )
    if abs(net[source] - 1.0) > tol:
        raise FlowValidationError(
            f"source strength is {net[source]}, expected 1 within {tol}"
        )
    if abs(net[sink] + 1.0) > tol:
        raise FlowValidationError(
            f"sink strength is {net[sink]}, expected -1 within {tol}"
        )
    upper = np.triu_indices(n, k=1)
    mask = c[upper] > 0
    return float(np.sum(flow[upper][mask] ** 2 / c[upper][mask]))


def thomson_gap(g: Graph, u: int, v: int, flow: np.ndarray) -> float:
    """Energy of the candidate flow minus R(u, v).

    Non-negative for every valid unit flow (up to solver noise); equality
    picks out the current flow.
    """
    return flow_energy(g, flow, u, v) - effective_resistance(g, u, v)


# --- cover-time bounds ---


def spanning_tree_bound(g: Graph) -> tuple[float, float]:
    """The spanning-tree cover bound pair (2m(2n-2), 4mn).

    Stated for simple unweighted connected graphs; the first number is the
    sharp form of the argument, the second its usual rounding.
    """
    if not (g.is_simple and g.is_unit_weighted):
        raise UnsupportedInputError(
            "spanning tree bound applies to simple unweighted graphs"
        )
    _require_connected(g)
    n, m = g.n, g.m
    return 2.0 * m * (2 * n - 2), 4.0 * m * n


@dataclass(frozen=True)
class MerstResult:
    bound: float  # volume * tree_weight
    tree_weight: float  # total effective resistance of the tree
    edges: tuple[tuple[int, int], ...]


def merst_bound(g: Graph) -> MerstResult:
    """Cover bound via the minimum effective resistance spanning tree.

    Builds the complete graph on V weighted by effective resistance, runs
    Kruskal on it, and returns volume * w(T*). Capped at n = 2000 by the
    dense resistance matrix.
    """
    if g.n > 2000:
        raise SizeCapError(f"merst bound capped at n=2000, got {g.n}")
    _require_connected(g)
    n = g.n
    if n == 1:
        return MerstResult(0.0, 0.0, ())
    r = resistance_matrix(g)
    pairs = sorted(
        ((float(r[u, v]), u, v) for u in range(n) for v in range(u + 1, n)),
        key=lambda t: (t[0], t[1], t[2]),
    )
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen: list[tuple[int, int]] = []
    weight = 0.0
    for resistance, u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
            weight += resistance
            if len(chosen) == n - 1:
                break
    return MerstResult(g.volume * weight, weight, tuple(chosen))


def _hitting_matrix(g: Graph) -> np.ndarray:
    from .spectral import build_kernel, exact_hitting

    return exact_hitting(build_kernel(g))


def matthews_upper(g: Graph, hitting: np.ndarray | None = None) -> float:
    """max_{u,v} H[u, v] * h(n)."""
    h = _hitting_matrix(g) if hitting is None else hitting
    return float(h.max()) * harmonic_number(g.n)


def matthews_subset_upper(
    g: Graph, subset: list[int], hitting: np.ndarray | None = None
) -> float:
    """Cover bound for a vertex subset: max pair hitting inside it times
    h(|subset|)."""
    if len(set(subset)) < 2:
        raise ParameterError("subset version needs at least two vertices")
    h = _hitting_matrix(g) if hitting is None else hitting
    sub = np.array(sorted(set(subset)))
    return float(h[np.ix_(sub, sub)].max()) * harmonic_number(len(sub))


def matthews_lower(
    g: Graph,
    subset: list[int] | None = None,
    max_size: int = 12,
    hitting: np.ndarray | None = None,
) -> float:
    """Lower cover bound min-pair-hitting(A) * h(|A| - 1).

    With an explicit subset the bound is evaluated directly. Without one,
    every subset of size 2..max_size is tried, which is only feasible on
    small graphs (capped at n = 16).
    """
    from itertools import combinations

    h = _hitting_matrix(g) if hitting is None else hitting

    def value(members: tuple[int, ...]) -> float:
        sub = np.array(members)
        block = h[np.ix_(sub, sub)]
        off = block[~np.eye(len(sub), dtype=bool)]
        return float(off.min()) * harmonic_number(len(sub) - 1)

    if subset is not None:
        members = tuple(sorted(set(subset)))
        if len(members) < 2:
            raise ParameterError("lower bound needs at least two vertices")
        return value(members)
    if g.n > 16:
        raise SizeCapError(
            f"exhaustive subset search capped at n=16, got {g.n}; "
            f"pass an explicit subset"
        )
    best = 0.0
    for size in range(2, min(max_size, g.n) + 1):
        for members in combinations(range(g.n), size):
            best = max(best, value(members))
    return best


# --- monitors ---


def grid_resistance_monitor(k: int) -> dict:
    """Check max R on the k x k grid against the 8 h(k) ceiling."""
    if k < 2:
        raise ParameterError("grid monitor needs k >= 2")
    if k > 40:
        raise SizeCapError(f"grid monitor capped at k=40, got {k}")
    g = grid2d(k, k)
    r = resistance_matrix(g)
    observed = float(r.max())
    bound = 8.0 * harmonic_number(k)
    return {
        "k": k,
        "n": g.n,
        "max_resistance": observed,
        "bound": bound,
        "passed": bool(observed < bound),
    }


def _component_resistance(g: Graph, u: int, v: int) -> float | None:
    """R(u, v) inside u's component; None when v lives elsewhere."""
    dist = g.bfs_distances(u)
    if dist[v] < 0:
        return None
    component = [x for x in range(g.n) if dist[x] >= 0]
    sub, labels = g.induced_subgraph(component)
    index = {orig: i for i, orig in enumerate(labels)}
    return effective_resistance(sub, index[u], index[v])


def rayleigh_monitor(
    g: Graph,
    edge_indices: list[int] | None = None,
    pairs: list[tuple[int, int]] | None = None,
    tol: float = 1e-9,
) -> dict:
    """Deleting an edge must not lower any effective resistance.

    Each listed edge is removed in turn and the resistances of the probe
    pairs recomputed. Pairs separated by the deletion report resistance
    None (there is no finite value, and no sentinel float pretends there
    is); such pairs satisfy the monotonicity check vacuously.
    """
    _require_connected(g)
    if edge_indices is None:
        edge_indices = list(range(g.m))
    if pairs is None:
        pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    base = resistance_matrix(g)
    deletions = []
    violations = 0
    for idx in edge_indices:
        if not 0 <= idx < g.m:
            raise ParameterError(f"edge index {idx} out of range")
        kept = [e for j, e in enumerate(g.edges) if j != idx]
        sub = Graph(g.n, kept, name=f"{g.name}-minus-{idx}")
        connected = sub.is_connected
        rsub = resistance_matrix(sub) if connected else None
        results = []
        for u, v in pairs:
            before = float(base[u, v])
            if connected:
                after: float | None = float(rsub[u, v])
            else:
                after = _component_resistance(sub, u, v)
            # a separated pair has no finite resistance; monotone vacuously
            ok = True if after is None else after >= before - tol
            if not ok:
                violations += 1
            results.append({"pair": [u, v], "before": before, "after": after, "ok": ok})
        deletions.append({"edge_index": idx, "edge": list(g.edges[idx][:2]), "pairs": results})
    return {
        "graph": g.name,
        "violations": violations,
        "passed": violations == 0,
        "deletions": deletions,
    }


def bound_report(graphs: list[Graph]) -> str:
    """CSV lines comparing exact cover (when small) with every bound."""
    from .spectral import build_kernel, exact_cover_times, exact_hitting

    out = io.StringIO()
    out.write(
        "graph_id,n,m,exact_cover,matthews_lower,matthews_upper,merst,"
        "spanning_tree_4mn\n"
    )
    for g in graphs:
        kernel = build_kernel(g)
        hitting = exact_hitting(kernel)
        exact = (
            repr(float(exact_cover_times(kernel).max())) if g.n <= 13 else ""
        )
        lower = matthews_lower(g, hitting=hitting) if g.n <= 16 else ""
        upper = matthews_upper(g, hitting=hitting)
        merst = merst_bound(g).bound
        if g.is_simple and g.is_unit_weighted:
            st = spanning_tree_bound(g)[1]
            st_cell = repr(float(st))
        else:
            st_cell = ""
        lower_cell = repr(float(lower)) if lower != "" else ""
        out.write(
            f"{g.name},{g.n},{g.m},{exact},{lower_cell},"
            f"{repr(float(upper))},{repr(float(merst))},{st_cell}\n"
        )
    return out.getvalue()
