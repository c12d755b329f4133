"""h-transverse lattice polygons described by edge slopes and lengths.

A polygon is stored only through its slope data ``c_r`` (right side, top to
bottom, strictly decreasing), ``c_l`` (left side, strictly increasing), the
lattice lengths ``d_r`` and ``d_l`` of those edges and the length ``d_t`` of
the top edge.  The bottom length follows from balancing.
"""
from dataclasses import dataclass
from collections import Counter
from math import factorial

from .errors import DegeneratePolygon, LengthMismatch, OrderingViolation


@dataclass(frozen=True)
class HTransversePolygon:
    c_r: tuple
    c_l: tuple
    d_r: tuple
    d_l: tuple
    d_t: int

    @property
    def a(self):
        return sum(self.d_r)

    @property
    def n(self):
        return len(self.c_r)

    @property
    def m(self):
        return len(self.c_l)

    @property
    def slope_excess(self):
        """Sum of c_r*d_r minus sum of c_l*d_l; equals d_b - d_t."""
        return (sum(c * d for c, d in zip(self.c_r, self.d_r))
                - sum(c * d for c, d in zip(self.c_l, self.d_l)))

    @property
    def d_b(self):
        return self.d_t + self.slope_excess

    def to_json(self):
        return {"c_r": list(self.c_r), "c_l": list(self.c_l),
                "d_r": list(self.d_r), "d_l": list(self.d_l),
                "d_t": self.d_t, "d_b": self.d_b, "a": self.a}


def _ints(values, name):
    out = []
    for v in values:
        if isinstance(v, bool) or int(v) != v:
            raise LengthMismatch(f"{name} must contain integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


def build_polygon(c_r, c_l, d_r, d_l, d_t, *, allow_open=False):
    """Validate slope/length data and return the polygon.

    With ``allow_open`` the top or bottom edge may have length zero; this
    is used when the polygon is reconstructed from a point of the
    divergence lattice whose entries all have the same sign.
    """
    c_r, c_l = _ints(c_r, "c_r"), _ints(c_l, "c_l")
    d_r, d_l = _ints(d_r, "d_r"), _ints(d_l, "d_l")
    d_t = int(d_t)
    if not c_r or not c_l:
        raise LengthMismatch("both sides need at least one edge")
    if len(c_r) != len(d_r):
        raise LengthMismatch(f"c_r has {len(c_r)} entries but d_r has {len(d_r)}")
    if len(c_l) != len(d_l):
        raise LengthMismatch(f"c_l has {len(c_l)} entries but d_l has {len(d_l)}")
    if any(d <= 0 for d in d_r + d_l):
        raise DegeneratePolygon("edge lengths d_r, d_l must be positive")
    if any(u <= v for u, v in zip(c_r, c_r[1:])):
        raise OrderingViolation(f"c_r must be strictly decreasing, got {list(c_r)}")
    if any(u >= v for u, v in zip(c_l, c_l[1:])):
        raise OrderingViolation(f"c_l must be strictly increasing, got {list(c_l)}")
    if sum(d_r) != sum(d_l):
        raise LengthMismatch(f"sum(d_r)={sum(d_r)} differs from sum(d_l)={sum(d_l)}")
    poly = HTransversePolygon(c_r, c_l, d_r, d_l, d_t)
    low = 0 if allow_open else 1
    if d_t < low:
        raise DegeneratePolygon(f"top length must be at least {low}, got {d_t}")
    if poly.d_b < low:
        raise DegeneratePolygon(f"derived bottom length d_b={poly.d_b} is not positive")
    return poly


def boundary_multisets(poly):
    """Right and left slope multisets, each listed in edge order."""
    right = [c for c, d in zip(poly.c_r, poly.d_r) for _ in range(d)]
    left = [c for c, d in zip(poly.c_l, poly.d_l) for _ in range(d)]
    return right, left


def multiset_permutations(items):
    """Yield each distinct arrangement of ``items`` once, in lexicographic order."""
    seq = sorted(items)
    n = len(seq)
    while True:
        yield list(seq)
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1:] = reversed(seq[i + 1:])


def arrangement_count(items):
    count = factorial(len(items))
    for mult in Counter(items).values():
        count //= factorial(mult)
    return count


# How the slope multisets are distributed over the ordered floors.
ARRANGEMENT_MODES = ("right", "both", "fixed")


def divergence_sequences(poly, mode="right"):
    """Yield the black-vertex divergence sequences r - l.

    ``right`` permutes the right multiset and keeps the left one in edge
    order, ``both`` permutes both independently, ``fixed`` uses the edge
    order on both sides.  Sequences may repeat across arrangements and are
    yielded once per arrangement.
    """
    right, left = boundary_multisets(poly)
    if mode not in ARRANGEMENT_MODES:
        raise ValueError(f"unknown arrangement mode {mode!r}")
    rights = multiset_permutations(right) if mode != "fixed" else [right]
    for r in rights:
        lefts = multiset_permutations(left) if mode == "both" else [left]
        for l in lefts:
            yield tuple(ri - li for ri, li in zip(r, l))
