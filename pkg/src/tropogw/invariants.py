"""Connected and disconnected invariants as weighted diagram sums.

Both sums reduce to flows on the black (size-one) vertices: every end is a
pendant edge of fixed weight, so it only shifts the divergence of the black
it hangs on, and every grey (size-zero) vertex joining two blacks is a
single edge of the reduced graph whose weight enters squared.
"""
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product
from math import comb, factorial, prod

from .diagrams import cached_core_shapes, words, _blacks_before
from .errors import InfeasibleDegree, NotInLambda, ValidationError
from .flows import FlowSystem, lattice_flows
from .polygon import build_polygon, divergence_sequences, multiset_permutations
from .tangency import (DivergenceData, MultiplicityVector, from_multiplicity,
                       lambda_defect, make_divergence)


@dataclass(frozen=True)
class InvariantQuery:
    polygon: object
    genus: int
    tangency: DivergenceData
    connected: bool = True
    mode: str = "right"

    @classmethod
    def create(cls, polygon, genus, tangency, connected=True, mode="right"):
        if genus < 0:
            raise ValidationError("genus must be nonnegative")
        if isinstance(tangency, MultiplicityVector):
            if (tangency.bottom_degree != polygon.d_b
                    or tangency.top_degree != polygon.d_t):
                raise InfeasibleDegree(
                    f"multiplicities give top {tangency.top_degree}, bottom "
                    f"{tangency.bottom_degree}; polygon has d_t={polygon.d_t}, d_b={polygon.d_b}")
            tangency = from_multiplicity(tangency)
        else:
            tangency = make_divergence(tangency.x, tangency.y)
            if (tangency.top_mass != polygon.d_t
                    or tangency.bottom_mass != polygon.d_b):
                raise InfeasibleDegree(
                    f"ends have top mass {tangency.top_mass}, bottom mass "
                    f"{tangency.bottom_mass}; polygon has d_t={polygon.d_t}, d_b={polygon.d_b}")
        return cls(polygon, genus, tangency, connected, mode)


@lru_cache(maxsize=None)
def _reduced_stats(links, div):
    """(weighted sum, number of positive flows) on the graph of blacks.

    Each link (s, t) is a grey vertex between blacks s and t; both of its
    edges carry the same weight, so it contributes that weight squared.
    """
    a = len(div)
    edges = []
    for j, (src, dst) in enumerate(links):
        edges += [(src, a + j), (a + j, dst)]
    system = FlowSystem(a + len(links), tuple(edges), tuple(div) + (0,) * len(links),
                        tuple(range(len(edges))))
    total = count = 0
    for w in lattice_flows(system):
        p = system.weight(w)
        if p:
            total += p
            count += 1
    return total, count


def _connected_term(a, genus, x, y, black_div):
    """Sum over distinct orderings of y, shapes and flows for one r - l."""
    total = count = 0
    for y_order in multiset_permutations(y):
        y_signs = tuple(1 if v > 0 else -1 for v in y_order)
        y_weight = prod(abs(v) for v in y_order)
        for _, greys, whites in cached_core_shapes(a, genus, y_signs):
            base = list(black_div)
            for j, b in enumerate(whites):
                base[b] += y_order[j]
            links = tuple(sorted(greys))
            for xs in product(range(a), repeat=len(x)):
                div = list(base)
                for i, b in enumerate(xs):
                    div[b] += x[i]
                s, c = _reduced_stats(links, tuple(div))
                total += y_weight * s
                count += c
    return total, count


def _disconnected_term(a, genus, x, y, black_div):
    """Thickened diagrams grouped by what the flow count depends on: the
    links between size-one vertices, where each y end attaches and which
    y ends pass straight through a size-zero vertex."""
    nz = a + genus + len(y) - 1
    if nz < 0:
        return 0, 0
    pos = [j for j, v in enumerate(y) if v > 0]
    neg = [j for j, v in enumerate(y) if v < 0]
    total = count = 0
    for pairs in _pass_matchings(pos, neg, y):
        paired = {j for p in pairs for j in p}
        free_pos = [j for j in pos if j not in paired]
        free_neg = [j for j in neg if j not in paired]
        n_links = nz - len(pairs) - len(free_pos) - len(free_neg)
        if n_links < 0:
            continue
        for links in combinations_with_replacement(
                [(s, t) for s in range(a) for t in range(s + 1, a)], n_links):
            for heads in product(range(a), repeat=len(free_pos)):
                for tails in product(range(a), repeat=len(free_neg)):
                    intervals = ([(s + 1, t) for s, t in links]
                                 + [(0, t) for t in heads] + [(s + 1, a) for s in tails]
                                 + [(0, a)] * len(pairs))
                    ways = _placements(tuple(sorted(intervals)), a)
                    if not ways:
                        continue
                    ways //= automorphism_order(links)
                    div = list(black_div)
                    weight = 1
                    touched = {v for l in links for v in l} | set(heads) | set(tails)
                    for j, t in zip(free_pos, heads):
                        div[t] += y[j]
                        weight *= y[j]
                    for j, s in zip(free_neg, tails):
                        div[s] += y[j]
                        weight *= -y[j]
                    for x_at in product(range(a), repeat=len(x)):
                        if len(touched | set(x_at)) < a:
                            continue
                        d = list(div)
                        for i, b in enumerate(x_at):
                            d[b] += x[i]
                        sub, c = _reduced_stats(links, tuple(d))
                        total += ways * weight * sub
                        count += ways * c
    return total, count


def _pass_matchings(pos, neg, y):
    """Partial matchings of entering with leaving y ends of equal weight."""
    if not pos:
        yield ()
        return
    first, rest = pos[0], pos[1:]
    yield from _pass_matchings(rest, neg, y)
    for j in neg:
        if y[j] == -y[first]:
            others = [k for k in neg if k != j]
            for more in _pass_matchings(rest, others, y):
                yield ((first, j),) + more


@lru_cache(maxsize=None)
def _placements(intervals, a):
    """Ways to place distinguishable size-zero vertices among ``a`` ordered
    size-one vertices, vertex i going into a gap within ``intervals[i]``
    (gap g has g size-one vertices before it); order inside a gap counts."""
    kinds = sorted(Counter(intervals).items())
    state = tuple(c for _, c in kinds)

    @lru_cache(maxsize=None)
    def fill(gap, remaining):
        if gap > a:
            return 1 if not any(remaining) else 0
        ranges = [range(r + 1) if lo <= gap <= hi else range(1)
                  for ((lo, hi), _), r in zip(kinds, remaining)]
        out = 0
        for take in product(*ranges):
            ways = factorial(sum(take))
            for r, k in zip(remaining, take):
                ways *= comb(r, k)
            out += ways * fill(gap + 1, tuple(r - k for r, k in zip(remaining, take)))
        return out

    return fill(0, state)


def _run_terms(func, a, genus, x, y, sequences, threads):
    tasks = [(a, genus, tuple(x), tuple(y), tuple(s)) for s in sequences]
    if threads and threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_call, [(func,) + t for t in tasks]))
    else:
        results = [func(*t) for t in tasks]
    return sum(r[0] for r in results), sum(r[1] for r in results)


def _call(args):
    func, *rest = args
    return func(*rest)


def _prepare(query):
    if not isinstance(query, InvariantQuery):
        raise TypeError("expected an InvariantQuery")
    return query.polygon, query.tangency


def connected_invariant(query, threads=1, with_count=False):
    """Weighted count of connected floor diagrams."""
    poly, data = _prepare(query)
    seqs = list(divergence_sequences(poly, query.mode))
    value, count = _run_terms(_connected_term, poly.a, query.genus, data.x, data.y,
                              seqs, threads)
    return (value, count) if with_count else value


def disconnected_invariant(query, threads=1, with_count=False):
    """Weighted count of possibly disconnected thickened diagrams."""
    poly, data = _prepare(query)
    seqs = list(divergence_sequences(poly, query.mode))
    value, count = _run_terms(_disconnected_term, poly.a, query.genus, data.x, data.y,
                              seqs, threads)
    return (value, count) if with_count else value


def function_F(poly, genus, x, y, n1=None, n2=None, mode="right", threads=1):
    """The invariant as a function of the divergence point (x, y).

    Only the slopes and side lengths of ``poly`` are used; its top length is
    replaced by the positive mass of the point.
    """
    if n1 is not None and len(x) != n1 or n2 is not None and len(y) != n2:
        raise ValidationError("point length does not match (n1, n2)")
    data = make_divergence(x, y)
    defect = lambda_defect(poly, data)
    if defect:
        raise NotInLambda(f"balancing sum is {defect}, expected 0")
    full = build_polygon(poly.c_r, poly.c_l, poly.d_r, poly.d_l, data.top_mass, allow_open=True)
    query = InvariantQuery(full, genus, data, True, mode)
    return connected_invariant(query, threads=threads)


# ---------------------------------------------------------------------------
# thickened diagrams

@dataclass
class ThickenedFloorDiagram:
    """Vertices sit at positions of ``word`` ('S' size one, 'Z' size zero).

    ``bounded`` holds (tail position, head position, weight); the half-edge
    at the size-zero end is the thickened one.  ``ends`` holds
    (kind, label, position, weight) with kind 'x' or 'y'; a positive
    label value means the end enters from the left.
    """
    word: str
    bounded: list
    ends: list
    divergence: list
    genus: int
    x: tuple = field(default=())
    y: tuple = field(default=())

    def multiplicity(self):
        return prod(w for _, _, w in self.bounded)

    def components(self):
        parent = list(range(len(self.word)))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for t, h, _ in self.bounded:
            parent[find(t)] = find(h)
        return len({find(v) for v in range(len(self.word))})

    def is_connected(self):
        return self.components() == 1

    def check(self):
        problems = []
        n = len(self.word)
        size = [1 if ch == "S" else 0 for ch in self.word]
        thick = [0] * n
        half = [0] * n
        flow = [0] * n
        for t, h, w in self.bounded:
            if t >= h:
                problems.append("edge direction")
            if w <= 0:
                problems.append("edge weight not positive")
            if size[t] + size[h] != 1:
                problems.append("bounded edge must join sizes one and zero")
            for v in (t, h):
                half[v] += 1
                if size[v] == 0:
                    thick[v] += 1
            flow[t] += w
            flow[h] -= w
        x_seen, y_seen = Counter(), Counter()
        for kind, label, pos, w in self.ends:
            half[pos] += 1
            value = self.x[label] if kind == "x" else self.y[label]
            if abs(value) != w:
                problems.append("end weight")
            if kind == "y":
                y_seen[label] += 1
                if size[pos] != 0:
                    problems.append("y end must be thickened")
                thick[pos] += 1
            else:
                x_seen[label] += 1
                if size[pos] != 1:
                    problems.append("x end must sit on a size-one vertex")
            # entering ends carry positive value
            flow[pos] -= value
        for v in range(n):
            if thick[v] != 2 - 2 * size[v]:
                problems.append("thickened half-edge count")
            if size[v] == 1 and half[v] == 0:
                problems.append("isolated size-one vertex")
            if flow[v] != self.divergence[v]:
                problems.append("divergence")
        if any(x_seen[i] != 1 for i in range(len(self.x))) or sum(x_seen.values()) != len(self.x):
            problems.append("x labels")
        if any(y_seen[i] != 1 for i in range(len(self.y))) or sum(y_seen.values()) != len(self.y):
            problems.append("y labels")
        if 1 - n + len(self.bounded) != self.genus:
            problems.append("genus")
        return problems

    def to_json(self):
        return {"word": self.word, "genus": self.genus,
                "bounded": [{"tail": t, "head": h, "weight": w} for t, h, w in self.bounded],
                "ends": [{"kind": k, "label": l, "position": p, "weight": w}
                         for k, l, p, w in self.ends],
                "multiplicity": str(self.multiplicity()),
                "components": self.components()}


def _thickened_shapes(a, genus, n1, y_positive):
    """Yield (word, z_links, y_at, x_at).

    ``z_links[j]`` is (source, target) for the j-th size-zero vertex where
    a source/target is a black index or None for an end; ``y_at[label]``
    is the size-zero index carrying that y end; ``x_at[i]`` the black
    carrying x end i.
    """
    n2 = len(y_positive)
    nz = a + genus + n2 - 1
    if nz < 0:
        return
    pos_labels = [j for j in range(n2) if y_positive[j]]
    neg_labels = [j for j in range(n2) if not y_positive[j]]
    for word in words(a, nz, 0):
        before = _blacks_before(word)
        choices = []
        for pos, ch in enumerate(word):
            if ch == "G":
                left = before[pos]
                srcs = list(range(left)) + [None]
                dsts = list(range(left, a)) + [None]
                choices.append([(s, t) for s in srcs for t in dsts])
        word = word.replace("B", "S").replace("G", "Z")
        for z_links in product(*choices):
            entering = [j for j, (s, _) in enumerate(z_links) if s is None]
            leaving = [j for j, (_, t) in enumerate(z_links) if t is None]
            if len(entering) != len(pos_labels) or len(leaving) != len(neg_labels):
                continue
            touched = set()
            for s, t in z_links:
                touched.update(v for v in (s, t) if v is not None)
            for in_perm in permutations(entering):
                for out_perm in permutations(leaving):
                    y_at = [None] * n2
                    for label, z in zip(pos_labels, in_perm):
                        y_at[label] = z
                    for label, z in zip(neg_labels, out_perm):
                        y_at[label] = z
                    for x_at in product(range(a), repeat=n1):
                        if len(touched | set(x_at)) < a:
                            continue
                        yield word, z_links, tuple(y_at), x_at


def _thickened_shape_stats(a, z_links, y_at, x_at, x, y, black_div):
    div = list(black_div)
    for i, b in enumerate(x_at):
        div[b] += x[i]
    weight = 1
    z_fixed = {}
    for label, z in enumerate(y_at):
        value = y[label]
        if z in z_fixed and z_fixed[z] != abs(value):
            return 0, 0
        z_fixed[z] = abs(value)
    links = []
    for j, (s, t) in enumerate(z_links):
        if s is not None and t is not None:
            links.append((s, t))
        elif s is not None:
            div[s] -= z_fixed[j]
            weight *= z_fixed[j]
        elif t is not None:
            div[t] += z_fixed[j]
            weight *= z_fixed[j]
    total, count = _reduced_stats(tuple(sorted(links)), tuple(div))
    return weight * total, count


def enumerate_thickened(poly, genus, x, y, mode="right"):
    """Every weighted thickened diagram (ends labelled), connected or not."""
    data = make_divergence(x, y)
    if lambda_defect(poly, data):
        raise NotInLambda("point is not on the balancing lattice")
    a = poly.a
    for black_div in divergence_sequences(poly, mode):
        for word, z_links, y_at, x_at in _thickened_shapes(a, genus, len(x), tuple(v > 0 for v in y)):
            yield from _realize(a, genus, word, z_links, y_at, x_at, tuple(x), tuple(y), black_div)


def _realize(a, genus, word, z_links, y_at, x_at, x, y, black_div):
    s_pos = [p for p, ch in enumerate(word) if ch == "S"]
    z_pos = [p for p, ch in enumerate(word) if ch == "Z"]
    nz = len(z_pos)
    fixed = {}
    for label, z in enumerate(y_at):
        if z in fixed and fixed[z] != abs(y[label]):
            return
        fixed[z] = abs(y[label])
    # flow system on blacks + size-zero vertices + one vertex per end
    nv = a + nz + len(x) + len(y)
    edges, div = [], list(black_div) + [0] * nz + list(x) + list(y)
    kinds = []
    for j, (s, t) in enumerate(z_links):
        if s is not None:
            edges.append((s, a + j))
            kinds.append(("b", s_pos[s], z_pos[j]))
        if t is not None:
            edges.append((a + j, t))
            kinds.append(("b", z_pos[j], s_pos[t]))
    for i, b in enumerate(x_at):
        ev = a + nz + i
        edges.append((ev, b) if x[i] > 0 else (b, ev))
        kinds.append(("x", i, s_pos[b]))
    for label, z in enumerate(y_at):
        ev = a + nz + len(x) + label
        edges.append((ev, a + z) if y[label] > 0 else (a + z, ev))
        kinds.append(("y", label, z_pos[z]))
    bounded_idx = [e for e, k in enumerate(kinds) if k[0] == "b"]
    system = FlowSystem(nv, tuple(edges), tuple(div), tuple(bounded_idx))
    position_div = [0] * len(word)
    for i, p in enumerate(s_pos):
        position_div[p] = black_div[i]
    for w in lattice_flows(system):
        if any(w[e] <= 0 for e in bounded_idx):
            continue
        bounded = [(k[1], k[2], w[e]) for e, k in enumerate(kinds) if k[0] == "b"]
        ends = [(k[0], k[1], k[2], w[e]) for e, k in enumerate(kinds) if k[0] != "b"]
        yield ThickenedFloorDiagram(word, bounded, ends, position_div, genus, x, y)


def automorphism_order(values):
    return prod(factorial(c) for c in Counter(values).values())
