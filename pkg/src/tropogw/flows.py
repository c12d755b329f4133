"""Integer flows on directed graphs with prescribed vertex divergences.

A :class:`FlowSystem` describes the polytope of nonnegative edge weights
``w`` with ``A w = k``, where ``A`` is the vertex-edge incidence matrix
(+1 at the tail, -1 at the head) and ``k`` the divergence (outflow minus
inflow) required at each vertex.  Its lattice points are enumerated by
solving the tree edges of a spanning forest in terms of the remaining
(free) edges.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import prod

from .errors import UnboundedPolytope, ValidationError
from .linalg import rank


@dataclass(frozen=True)
class FlowSystem:
    n_vertices: int
    edges: tuple        # (tail, head) pairs
    divergence: tuple   # k, one entry per vertex
    internal: tuple     # indices of the edges whose weights are multiplied

    def __post_init__(self):
        if len(self.divergence) != self.n_vertices:
            raise ValidationError("divergence vector length differs from vertex count")
        for tail, head in self.edges:
            if tail == head or not (0 <= tail < self.n_vertices and 0 <= head < self.n_vertices):
                raise ValidationError(f"bad edge {(tail, head)}")

    def incidence_matrix(self):
        rows = [[0] * len(self.edges) for _ in range(self.n_vertices)]
        for e, (tail, head) in enumerate(self.edges):
            rows[tail][e] += 1
            rows[head][e] -= 1
        return rows

    def dilate(self, t):
        return FlowSystem(self.n_vertices, self.edges,
                          tuple(t * k for k in self.divergence), self.internal)

    def weight(self, flow):
        return prod(flow[e] for e in self.internal)

    @property
    def cycle_rank(self):
        return _plan(self).n_free


@dataclass(frozen=True)
class _Plan:
    feasible: bool
    n_free: int
    free_edges: tuple
    # per edge: (constant, coefficients over free variables)
    expressions: tuple
    bound: int


def _components(n, edges):
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree, free = [], []
    for e, (u, v) in enumerate(edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            free.append(e)
        else:
            parent[ru] = rv
            tree.append(e)
    return tree, free, [find(v) for v in range(n)]


def _has_directed_cycle(n, edges):
    out = [[] for _ in range(n)]
    indeg = [0] * n
    for tail, head in edges:
        out[tail].append(head)
        indeg[head] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for h in out[v]:
            indeg[h] -= 1
            if indeg[h] == 0:
                stack.append(h)
    return seen < n


@lru_cache(maxsize=None)
def _plan(system):
    n, edges, k = system.n_vertices, system.edges, system.divergence
    tree, free, comp = _components(n, edges)
    nf = len(free)
    totals = {}
    for v in range(n):
        totals[comp[v]] = totals.get(comp[v], 0) + k[v]
    if any(totals.values()):
        return _Plan(False, nf, tuple(free), (), 0)
    if _has_directed_cycle(n, edges):
        raise UnboundedPolytope("a directed cycle makes the flow polytope unbounded")

    expr = [None] * len(edges)
    for j, e in enumerate(free):
        coeffs = [0] * nf
        coeffs[j] = 1
        expr[e] = (0, tuple(coeffs))
    # need[v]: what the still-unsolved tree edges at v must contribute
    need = [[k[v], [0] * nf] for v in range(n)]
    for j, e in enumerate(free):
        tail, head = edges[e]
        need[tail][1][j] -= 1
        need[head][1][j] += 1
    incident = [[] for _ in range(n)]
    for e in tree:
        tail, head = edges[e]
        incident[tail].append(e)
        incident[head].append(e)
    degree = [len(incident[v]) for v in range(n)]
    leaves = [v for v in range(n) if degree[v] == 1]
    done = set()
    while leaves:
        v = leaves.pop()
        if degree[v] != 1:
            continue
        e = next(e for e in incident[v] if e not in done)
        tail, head = edges[e]
        sign = 1 if tail == v else -1
        const, coeffs = need[v]
        value = (sign * const, tuple(sign * c for c in coeffs))
        expr[e] = value
        done.add(e)
        other = head if tail == v else tail
        other_sign = -sign
        need[other][0] -= other_sign * value[0]
        need[other][1] = [c - other_sign * d for c, d in zip(need[other][1], value[1])]
        degree[v] -= 1
        degree[other] -= 1
        if degree[other] == 1:
            leaves.append(other)
    bound = sum(v for v in k if v > 0)
    return _Plan(True, nf, tuple(free), tuple(expr), bound)


def lattice_flows(system):
    """Yield every nonnegative integer weight vector with the required divergences."""
    plan = _plan(system)
    if not plan.feasible:
        return
    nf, bound = plan.n_free, plan.bound
    constraints = [expr for e, expr in enumerate(plan.expressions) if e not in plan.free_edges]
    values = [0] * nf

    def rest_max(coeffs, start):
        return sum(c * bound for c in coeffs[start:] if c > 0)

    def emit():
        return tuple(c + sum(a * b for a, b in zip(coeffs, values))
                     for c, coeffs in plan.expressions)

    def descend(j):
        if j == nf:
            for c, coeffs in constraints:
                if c + sum(a * b for a, b in zip(coeffs, values)) < 0:
                    return
            yield emit()
            return
        lo, hi = 0, bound
        for c, coeffs in constraints:
            fixed = c + sum(a * b for a, b in zip(coeffs[:j], values[:j]))
            slack = fixed + rest_max(coeffs, j + 1)
            cj = coeffs[j]
            if cj > 0:
                lo = max(lo, -(slack // cj))
            elif cj < 0:
                hi = min(hi, slack // -cj)
            elif slack < 0:
                return
        for val in range(lo, hi + 1):
            values[j] = val
            yield from descend(j + 1)
        values[j] = 0

    yield from descend(0)


@lru_cache(maxsize=None)
def weighted_partition_function(system):
    """Sum over lattice flows of the product of internal edge weights."""
    return sum(system.weight(w) for w in lattice_flows(system))


def positive_flow_count(system):
    """Number of lattice flows whose internal weights are all positive."""
    return sum(1 for w in lattice_flows(system) if all(w[e] > 0 for e in system.internal))


def dilated_sum(system, t):
    return weighted_partition_function(system.dilate(t))


def _support(system):
    """Edges that are positive on some lattice point of the undilated polytope.

    The polytope is a lattice polytope, so its vertices are among these
    points and an edge weight vanishing on all of them vanishes identically.
    """
    support = set()
    for w in lattice_flows(system):
        support.update(e for e, val in enumerate(w) if val > 0)
    return support


def interior_sum(system, t):
    """Weighted sum over lattice points in the relative interior of the t-th dilate."""
    support = _support(system)
    total = 0
    for w in lattice_flows(system.dilate(t)):
        if all(w[e] > 0 for e in support):
            total += system.weight(w)
    return total


def polytope_dimension(system):
    """Affine dimension of the flow polytope, or -1 when it is empty."""
    points = list(lattice_flows(system))
    if not points:
        return -1
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0
