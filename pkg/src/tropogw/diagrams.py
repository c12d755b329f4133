"""Marked floor diagrams: shapes, weighted diagrams and structural checks.

A diagram has ``a`` black vertices (floors), ``g + a - 1`` grey vertices
and one white vertex per end.  Blacks, greys and the ``y`` ends live in a
totally ordered central region; ``x`` ends live in the unordered left
(positive divergence) or right (negative divergence) region.  All edges point
from left to right.

Shapes are built from a word over the central region: ``B`` for a black,
``G`` for a grey, ``W`` for a central white.  Blacks and whites are numbered
in order of appearance; greys are told apart by position only.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import prod

from .flows import FlowSystem, lattice_flows

BLACK, GREY, WHITE = "black", "grey", "white"


@dataclass(frozen=True)
class Skeleton:
    """Unweighted shape of a floor diagram.

    ``word`` lists the central region; ``grey_links[j]`` is the pair
    (source black, target black) of the j-th grey, ``white_links[j]`` the
    black carrying the j-th central white and ``x_links[i]`` the black
    carrying the i-th x end.
    """
    word: str
    grey_links: tuple
    white_links: tuple
    x_links: tuple

    @property
    def n_black(self):
        return self.word.count("B")

    @property
    def n_grey(self):
        return self.word.count("G")

    def flow_system(self, x, y_ordered, black_div):
        """Vertices: blacks, greys, central whites, x whites (in that order)."""
        a, ng, n2 = self.n_black, self.n_grey, len(self.white_links)
        grey0, cw0, xw0 = a, a + ng, a + ng + n2
        edges, internal = [], []
        for j, (src, dst) in enumerate(self.grey_links):
            internal += [len(edges), len(edges) + 1]
            edges += [(src, grey0 + j), (grey0 + j, dst)]
        for j, b in enumerate(self.white_links):
            internal.append(len(edges))
            edges.append((cw0 + j, b) if y_ordered[j] > 0 else (b, cw0 + j))
        for i, b in enumerate(self.x_links):
            edges.append((xw0 + i, b) if x[i] > 0 else (b, xw0 + i))
        div = tuple(black_div) + (0,) * ng + tuple(y_ordered) + tuple(x)
        return FlowSystem(len(div), tuple(edges), div, tuple(internal))


@dataclass(frozen=True)
class Vertex:
    color: str
    region: str          # "L", "C" or "R"
    position: int = None  # index in the central order, None outside it
    label: str = ""


@dataclass
class FloorDiagram:
    vertices: list
    edges: list          # (tail, head, weight)
    divergence: list     # required divergence per vertex
    genus: int
    skeleton: Skeleton = field(default=None, compare=False)

    def multiplicity(self):
        return multiplicity(self)

    def to_json(self):
        return {
            "vertices": [{"color": v.color, "region": v.region, "position": v.position,
                          "label": v.label, "divergence": d}
                         for v, d in zip(self.vertices, self.divergence)],
            "edges": [{"tail": t, "head": h, "weight": w} for t, h, w in self.edges],
            "genus": self.genus,
            "multiplicity": str(multiplicity(self)),
        }


def words(a, n_grey, n_white):
    """All arrangements of the central region, as strings over B, G, W."""
    total = a + n_grey + n_white
    for black_pos in combinations(range(total), a):
        rest = [p for p in range(total) if p not in black_pos]
        for grey_pos in combinations(rest, n_grey):
            chars = ["W"] * total
            for p in black_pos:
                chars[p] = "B"
            for p in grey_pos:
                chars[p] = "G"
            yield "".join(chars)


def _blacks_before(word):
    """For each position, the number of blacks strictly to its left."""
    out, count = [], 0
    for ch in word:
        out.append(count)
        count += ch == "B"
    return out


def _connected(a, links):
    parent = list(range(a))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for src, dst in links:
        parent[find(src)] = find(dst)
    return len({find(v) for v in range(a)}) == 1


def core_shapes(a, genus, y_signs):
    """Yield (word, grey_links, white_links) for connected central shapes."""
    n_grey = genus + a - 1
    if n_grey < 0:
        return
    for word in words(a, n_grey, len(y_signs)):
        before = _blacks_before(word)
        grey_choices, white_choices = [], []
        feasible = True
        w_index = 0
        for pos, ch in enumerate(word):
            left = before[pos]
            if ch == "G":
                opts = [(s, t) for s in range(left) for t in range(left, a)]
                grey_choices.append(opts)
            elif ch == "W":
                opts = list(range(left)) if y_signs[w_index] < 0 else list(range(left, a))
                white_choices.append(opts)
                w_index += 1
            else:
                continue
            if not opts:
                feasible = False
                break
        if not feasible:
            continue
        for greys in product(*grey_choices):
            if a > 1 and not _connected(a, greys):
                continue
            for whites in product(*white_choices):
                yield word, tuple(greys), tuple(whites)


def enumerate_skeletons(a, genus, x_signs, y_signs):
    """Every shape with the given end signs; ``y_signs`` follows the central order."""
    for word, greys, whites in core_shapes(a, genus, y_signs):
        for xs in product(range(a), repeat=len(x_signs)):
            yield Skeleton(word, greys, whites, xs)


def _signs(values):
    return tuple(1 if v > 0 else -1 for v in values)


def to_diagram(skel, x, y_ordered, black_div, weights, genus):
    a, ng = skel.n_black, skel.n_grey
    vertices = [None] * (a + ng + len(y_ordered) + len(x))
    b = g = w = 0
    for pos, ch in enumerate(skel.word):
        if ch == "B":
            vertices[b] = Vertex(BLACK, "C", pos, f"B{b + 1}")
            b += 1
        elif ch == "G":
            vertices[a + g] = Vertex(GREY, "C", pos, f"G{g + 1}")
            g += 1
        else:
            vertices[a + ng + w] = Vertex(WHITE, "C", pos, f"y{w + 1}")
            w += 1
    base = a + ng + len(y_ordered)
    for i, v in enumerate(x):
        vertices[base + i] = Vertex(WHITE, "L" if v > 0 else "R", None, f"x{i + 1}")
    system = skel.flow_system(x, y_ordered, black_div)
    edges = [(t, h, wt) for (t, h), wt in zip(system.edges, weights)]
    return FloorDiagram(vertices, edges, list(system.divergence), genus, skel)


def enumerate_weighted(a, genus, x, y_ordered, black_div):
    """Every weighted diagram with the given divergences, each once.

    ``black_div`` is the sequence r - l for the ordered blacks.
    """
    for skel in enumerate_skeletons(a, genus, _signs(x), _signs(y_ordered)):
        system = skel.flow_system(x, y_ordered, black_div)
        for weights in lattice_flows(system):
            if all(weights[e] > 0 for e in system.internal):
                yield to_diagram(skel, x, y_ordered, black_div, weights, genus)


def multiplicity(diagram):
    """Product of the weights of edges joining two central vertices."""
    verts = diagram.vertices
    return prod(w for t, h, w in diagram.edges
                if verts[t].region == "C" and verts[h].region == "C")


def structural_check(diagram, genus=None, n_black=None):
    """Return the list of violated conditions; empty when the diagram is valid."""
    problems = []
    verts, edges = diagram.vertices, diagram.edges
    nv = len(verts)
    out_w = [0] * nv
    in_w = [0] * nv
    nbrs = [[] for _ in range(nv)]
    ins = [0] * nv
    outs = [0] * nv
    for t, h, w in edges:
        if t == h:
            problems.append("loop")
            continue
        if w <= 0:
            problems.append("edge weight not positive")
        out_w[t] += w
        in_w[h] += w
        outs[t] += 1
        ins[h] += 1
        nbrs[t].append(h)
        nbrs[h].append(t)
        vt, vh = verts[t], verts[h]
        if vt.region == "R" or vh.region == "L":
            problems.append("edge direction")
        elif vt.region == "C" and vh.region == "C" and vt.position >= vh.position:
            problems.append("edge direction")
    for v, vert in enumerate(verts):
        if vert.region in ("L", "R") and vert.color != WHITE:
            problems.append("non-white vertex outside the central region")
        if vert.color == WHITE:
            if len(nbrs[v]) != 1:
                problems.append("white valency")
            elif verts[nbrs[v][0]].color != BLACK:
                problems.append("white attachment")
        elif vert.color == GREY:
            if ins[v] != 1 or outs[v] != 1:
                problems.append("grey valency")
            elif any(verts[u].color != BLACK for u in nbrs[v]) or nbrs[v][0] == nbrs[v][1]:
                problems.append("grey neighbours")
        if out_w[v] - in_w[v] != diagram.divergence[v]:
            problems.append(f"divergence at {vert.label or v}")
    if any(d != 0 for d, vert in zip(diagram.divergence, verts) if vert.color == GREY):
        problems.append("grey divergence")
    blacks = sum(1 for v in verts if v.color == BLACK)
    greys = sum(1 for v in verts if v.color == GREY)
    whites = sum(1 for v in verts if v.color == WHITE)
    g = diagram.genus if genus is None else genus
    if n_black is not None and blacks != n_black:
        problems.append("black count")
    if greys != g + blacks - 1:
        problems.append("grey count")
    bg = sum(1 for t, h, _ in edges if {verts[t].color, verts[h].color} == {BLACK, GREY})
    bw = sum(1 for t, h, _ in edges if {verts[t].color, verts[h].color} == {BLACK, WHITE})
    if bg != 2 * (g + blacks - 1):
        problems.append("black-grey edge count")
    if bw != whites:
        problems.append("black-white edge count")
    if 1 - nv + len(edges) != g:
        problems.append("genus")
    if nv and not _graph_connected(nv, edges):
        problems.append("connected")
    return problems


def _graph_connected(n, edges):
    adj = [[] for _ in range(n)]
    for t, h, _ in edges:
        adj[t].append(h)
        adj[h].append(t)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


@lru_cache(maxsize=None)
def cached_core_shapes(a, genus, y_signs):
    return tuple(core_shapes(a, genus, y_signs))
