"""Wall arrangements on the divergence lattice and chamber sampling.

Points live on the hyperplane ``sum(x) + sum(y) + excess = 0``.  One
coordinate is eliminated through that equation, and every wall is stored
as an affine form in the remaining chart coordinates, content-reduced with
its first nonzero coefficient positive, so that coincident walls merge.
"""
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import gcd

from .errors import InsufficientSamples, OnWall, OrderingViolation, ValidationError


@dataclass(frozen=True)
class Wall:
    kind: str          # "mixed", "equalizer" or "ordering"
    source: tuple      # mixed: (S, T, k, t); equalizer/ordering: index pair
    form: tuple        # chart coefficients followed by the constant
    merged: int = 1    # number of generating tuples with this hyperplane

    def evaluate(self, chart_point):
        *coeffs, const = self.form
        return sum(c * v for c, v in zip(coeffs, chart_point)) + const

    def describe(self, names):
        *coeffs, const = self.form
        terms = [f"{c}*{n}" if c != 1 else n for c, n in zip(coeffs, names) if c]
        text = " + ".join(terms) if terms else "0"
        if const:
            text += f" + {const}" if const > 0 else f" - {-const}"
        return text + " = 0"

    def to_json(self, names):
        return {"kind": self.kind, "equation": self.describe(names), "merged": self.merged}


@dataclass(frozen=True)
class ChamberSignature:
    signs: tuple

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.signs)


class Arrangement:
    """Walls on the hyperplane ``sum(e_i v_i) + offset = 0`` of full coordinates.

    ``lattice_coeffs[elim]`` must be 1; the chart drops coordinate ``elim``.
    """

    def __init__(self, names, lattice_coeffs, offset, elim, raw_walls):
        self.names = tuple(names)
        self.lattice_coeffs = tuple(lattice_coeffs)
        self.offset = offset
        self.elim = elim
        assert self.lattice_coeffs[elim] == 1
        self.chart_names = tuple(n for i, n in enumerate(self.names) if i != elim)
        merged = {}
        order = []
        self.raw_count = 0
        for kind, source, coeffs, const in raw_walls:
            if not any(coeffs) and const == 0:
                continue
            self.raw_count += 1
            form = self._normalize(coeffs, const)
            if form is None:
                continue
            if form in merged:
                merged[form][2] += 1
            else:
                merged[form] = [kind, source, 1]
                order.append(form)
        self.walls = [Wall(merged[f][0], merged[f][1], f, merged[f][2]) for f in order]

    @property
    def dimension(self):
        return len(self.chart_names)

    def _normalize(self, coeffs, const):
        fe = coeffs[self.elim]
        chart = [c - fe * e for i, (c, e) in enumerate(zip(coeffs, self.lattice_coeffs))
                 if i != self.elim]
        const = const - fe * self.offset
        if not any(chart):
            return None
        content = 0
        for v in chart + [const]:
            content = gcd(content, v)
        chart = [v // content for v in chart]
        const //= content
        lead = next(v for v in chart if v)
        if lead < 0:
            chart = [-v for v in chart]
            const = -const
        return tuple(chart) + (const,)

    def on_lattice(self, point):
        return sum(e * v for e, v in zip(self.lattice_coeffs, point)) + self.offset == 0

    def to_chart(self, point):
        return tuple(v for i, v in enumerate(point) if i != self.elim)

    def from_chart(self, chart_point):
        it = iter(chart_point)
        full = [0 if i == self.elim else next(it) for i in range(len(self.names))]
        full[self.elim] = -self.offset - sum(e * v for e, v in zip(self.lattice_coeffs, full))
        return tuple(full)

    def chart_signature(self, chart_point):
        signs = []
        for idx, wall in enumerate(self.walls):
            val = wall.evaluate(chart_point)
            if val == 0:
                raise OnWall(f"point lies on wall {idx}: {wall.describe(self.chart_names)}", idx)
            signs.append(1 if val > 0 else -1)
        return ChamberSignature(tuple(signs))

    def signature(self, point):
        if not self.on_lattice(point):
            raise ValidationError("point is not on the lattice hyperplane")
        return self.chart_signature(self.to_chart(point))

    def in_chamber(self, chart_point, signature):
        for wall, sign in zip(self.walls, signature.signs):
            val = wall.evaluate(chart_point)
            if val == 0 or (val > 0) != (sign > 0):
                return False
        return True


def _mixed_raw(n1, n2, c_r, c_l, d_r, d_l):
    for S_mask in product((0, 1), repeat=n1):
        for T_mask in product((0, 1), repeat=n2):
            for ks in product(*(range(d + 1) for d in d_r)):
                for ts in product(*(range(d + 1) for d in d_l)):
                    yield S_mask, T_mask, ks, ts


def _equalizers(n2):
    return list(combinations(range(n2), 2))


def _lattice_arrangement(c_r, c_l, d_r, d_l, n1, n2):
    names = [f"x{i + 1}" for i in range(n1)] + [f"y{j + 1}" for j in range(n2)]
    excess = sum(c * d for c, d in zip(c_r, d_r)) - sum(c * d for c, d in zip(c_l, d_l))
    raw = []
    for S_mask, T_mask, ks, ts in _mixed_raw(n1, n2, c_r, c_l, d_r, d_l):
        const = sum(c * k for c, k in zip(c_r, ks)) - sum(c * t for c, t in zip(c_l, ts))
        raw.append(("mixed", (S_mask, T_mask, ks, ts), list(S_mask + T_mask), const))
    for i, j in _equalizers(n2):
        coeffs = [0] * (n1 + n2)
        coeffs[n1 + i], coeffs[n1 + j] = 1, -1
        raw.append(("equalizer", (i, j), coeffs, 0))
    return Arrangement(names, [1] * (n1 + n2), excess, n1 + n2 - 1, raw)


@lru_cache(maxsize=None)
def lattice_arrangement(c_r, c_l, d_r, d_l, n1, n2):
    if n1 + n2 == 0:
        raise ValidationError("need at least one end")
    return _lattice_arrangement(tuple(c_r), tuple(c_l), tuple(d_r), tuple(d_l), n1, n2)


def walls(poly, n1, n2):
    return lattice_arrangement(poly.c_r, poly.c_l, poly.d_r, poly.d_l, n1, n2).walls


def chamber_signature(poly, n1, n2, x, y):
    arr = lattice_arrangement(poly.c_r, poly.c_l, poly.d_r, poly.d_l, n1, n2)
    if len(x) != n1 or len(y) != n2:
        raise ValidationError("point length does not match (n1, n2)")
    return arr.signature(tuple(x) + tuple(y))


@lru_cache(maxsize=None)
def extended_arrangement(d_r, d_l, n1, n2):
    """Arrangement in (x, y, c_r, c_l) with the slopes treated as variables."""
    n, m = len(d_r), len(d_l)
    if n1 + n2 == 0:
        raise ValidationError("need at least one end")
    names = ([f"x{i + 1}" for i in range(n1)] + [f"y{j + 1}" for j in range(n2)]
             + [f"cr{i + 1}" for i in range(n)] + [f"cl{j + 1}" for j in range(m)])
    lattice = [1] * (n1 + n2) + list(d_r) + [-d for d in d_l]
    raw = []
    for S_mask, T_mask, ks, ts in _mixed_raw(n1, n2, None, None, d_r, d_l):
        coeffs = list(S_mask + T_mask) + list(ks) + [-t for t in ts]
        raw.append(("mixed", (S_mask, T_mask, ks, ts), coeffs, 0))
    width = len(names)
    for i, j in _equalizers(n2):
        coeffs = [0] * width
        coeffs[n1 + i], coeffs[n1 + j] = 1, -1
        raw.append(("equalizer", (i, j), coeffs, 0))
    base = n1 + n2
    for i in range(n - 1):
        coeffs = [0] * width
        coeffs[base + i], coeffs[base + i + 1] = 1, -1
        raw.append(("ordering", ("r", i), coeffs, 0))
    for j in range(m - 1):
        coeffs = [0] * width
        coeffs[base + n + j], coeffs[base + n + j + 1] = -1, 1
        raw.append(("ordering", ("l", j), coeffs, 0))
    return Arrangement(names, lattice, 0, n1 + n2 - 1, raw)


def extended_signature(d_r, d_l, n1, n2, x, y, c_r, c_l):
    if any(u <= v for u, v in zip(c_r, c_r[1:])) or any(u >= v for u, v in zip(c_l, c_l[1:])):
        raise OrderingViolation("slopes are not strictly ordered")
    arr = extended_arrangement(tuple(d_r), tuple(d_l), n1, n2)
    return arr.signature(tuple(x) + tuple(y) + tuple(c_r) + tuple(c_l))


def chamber_label(poly, n1, n2, x, y):
    """Per-coordinate label '+', '0' or '-' when each coordinate v has
    exactly the two walls v = 0 and v = -kappa (kappa > 0); otherwise None.

    '+' means v > 0, '0' means -kappa < v < 0 and '-' means v < -kappa.
    """
    offsets = set()
    for ks in product(*(range(d + 1) for d in poly.d_r)):
        for ts in product(*(range(d + 1) for d in poly.d_l)):
            offsets.add(sum(c * k for c, k in zip(poly.c_r, ks))
                        - sum(c * t for c, t in zip(poly.c_l, ts)))
    offsets.discard(0)
    if len(offsets) != 1:
        return None
    kappa = offsets.pop()
    if kappa <= 0:
        return None
    label = []
    for v in tuple(x) + tuple(y):
        if v == 0 or v == -kappa:
            raise OnWall(f"coordinate {v} lies on a wall")
        label.append("+" if v > 0 else "0" if v > -kappa else "-")
    return "".join(label)


def sample_chamber(arrangement, anchor, count, radius, seed=0, max_tries=None):
    """Distinct lattice points with the anchor's signature, anchor first.

    Points are drawn from the box of the given radius around the anchor in
    chart coordinates: exhaustively when the box is small, otherwise by
    seeded rejection sampling.
    """
    anchor = tuple(anchor)
    sig = arrangement.signature(anchor)
    centre = arrangement.to_chart(anchor)
    found = [anchor]
    if count <= 1:
        return found
    dim = arrangement.dimension
    rng = random.Random(seed)
    seen = {centre}
    if (2 * radius + 1) ** dim <= 20000:
        offsets = list(product(range(-radius, radius + 1), repeat=dim))
        rng.shuffle(offsets)
        candidates = iter(offsets)
    else:
        tries = max_tries or 200 * count

        def draw():
            for _ in range(tries):
                yield tuple(rng.randint(-radius, radius) for _ in range(dim))
        candidates = draw()
    for off in candidates:
        pt = tuple(c + o for c, o in zip(centre, off))
        if pt in seen:
            continue
        seen.add(pt)
        if arrangement.in_chamber(pt, sig):
            found.append(arrangement.from_chart(pt))
            if len(found) >= count:
                return found
    raise InsufficientSamples(
        f"found {len(found)} of {count} points within radius {radius} of the anchor")


def box_inside(arrangement, centre_chart, radius, signature):
    """True when every corner (hence the whole box) lies in the chamber."""
    for corner in product((-radius, radius), repeat=arrangement.dimension):
        pt = tuple(c + o for c, o in zip(centre_chart, corner))
        if not arrangement.in_chamber(pt, signature):
            return False
    return True


def deep_anchor(arrangement, direction, radius, max_scale=1 << 12):
    """Scale ``direction`` (chart coordinates) until a box of the given
    radius around it fits in a single chamber; return the full point."""
    scale = 1
    while scale <= max_scale:
        centre = tuple(scale * d for d in direction)
        try:
            sig = arrangement.chart_signature(centre)
        except OnWall:
            sig = None
        if sig is not None and box_inside(arrangement, centre, radius, sig):
            return arrangement.from_chart(centre)
        scale *= 2
    raise InsufficientSamples("no box of the requested radius fits in a chamber along this ray")
