"""Divergence sequences (x, y) and their multiplicity-vector encoding.

``x`` holds the divergences of the ends meeting the left/right regions and
``y`` those of the ends placed among the floors.  A positive entry is an end
of that weight on the top divisor, a negative entry one on the bottom.
"""
from collections import Counter
from dataclasses import dataclass

from .errors import InconsistentDegrees, NotInLambda, ZeroEntry


@dataclass(frozen=True)
class DivergenceData:
    x: tuple
    y: tuple

    @property
    def n1(self):
        return len(self.x)

    @property
    def n2(self):
        return len(self.y)

    @property
    def top_mass(self):
        return sum(v for v in self.x + self.y if v > 0)

    @property
    def bottom_mass(self):
        return -sum(v for v in self.x + self.y if v < 0)

    def to_json(self):
        return {"x": list(self.x), "y": list(self.y)}


@dataclass(frozen=True)
class MultiplicityVector:
    """Sparse counts: ``alpha[i]`` is the number of x entries equal to -i,
    ``alpha_tilde[i]`` the number equal to +i, likewise ``beta`` for y."""
    alpha: tuple = ()
    beta: tuple = ()
    alpha_tilde: tuple = ()
    beta_tilde: tuple = ()

    @classmethod
    def from_maps(cls, alpha=None, beta=None, alpha_tilde=None, beta_tilde=None):
        return cls(*(_normalize(m) for m in (alpha, beta, alpha_tilde, beta_tilde)))

    @property
    def bottom_degree(self):
        return sum(i * c for i, c in self.alpha + self.beta)

    @property
    def top_degree(self):
        return sum(i * c for i, c in self.alpha_tilde + self.beta_tilde)

    def to_json(self):
        names = ("alpha", "beta", "alpha_tilde", "beta_tilde")
        parts = (self.alpha, self.beta, self.alpha_tilde, self.beta_tilde)
        return {name: {str(i): c for i, c in part} for name, part in zip(names, parts)}


def _normalize(counts):
    """Accept a dict i -> count, or a list whose (i-1)-th entry counts i."""
    if counts is None:
        return ()
    if isinstance(counts, str):
        counts = [int(ch) for ch in counts]
    if isinstance(counts, dict):
        items = ((int(i), int(c)) for i, c in counts.items())
    else:
        items = ((i + 1, int(c)) for i, c in enumerate(counts))
    out = []
    for i, c in items:
        if i <= 0 or c < 0:
            raise InconsistentDegrees(f"bad multiplicity entry {i}: {c}")
        if c:
            out.append((i, c))
    return tuple(sorted(out))


def make_divergence(x, y):
    x, y = tuple(int(v) for v in x), tuple(int(v) for v in y)
    if any(v == 0 for v in x + y):
        raise ZeroEntry(f"divergence entries must be nonzero, got x={list(x)} y={list(y)}")
    return DivergenceData(x, y)


def lambda_defect(poly, data):
    """The balancing sum that vanishes exactly on the lattice."""
    return sum(data.x) + sum(data.y) + poly.slope_excess


def check_in_lambda(poly, data):
    defect = lambda_defect(poly, data)
    if defect:
        raise NotInLambda(f"balancing sum is {defect}, expected 0")
    if data.top_mass != poly.d_t or data.bottom_mass != poly.d_b:
        raise InconsistentDegrees(
            f"ends have top mass {data.top_mass} and bottom mass {data.bottom_mass}, "
            f"polygon has d_t={poly.d_t}, d_b={poly.d_b}")


def to_multiplicity(data):
    parts = [Counter(), Counter(), Counter(), Counter()]
    for v in data.x:
        parts[0 if v < 0 else 2][abs(v)] += 1
    for v in data.y:
        parts[1 if v < 0 else 3][abs(v)] += 1
    return MultiplicityVector(*(tuple(sorted(p.items())) for p in parts))


def from_multiplicity(mv, poly=None):
    """Canonical (x, y): each sorted descending.  Checks degrees if a polygon is given."""
    if poly is not None:
        if mv.bottom_degree != poly.d_b or mv.top_degree != poly.d_t:
            raise InconsistentDegrees(
                f"multiplicities give top {mv.top_degree}, bottom {mv.bottom_degree}; "
                f"polygon has d_t={poly.d_t}, d_b={poly.d_b}")
    x = [i for i, c in mv.alpha_tilde for _ in range(c)] + [-i for i, c in mv.alpha for _ in range(c)]
    y = [i for i, c in mv.beta_tilde for _ in range(c)] + [-i for i, c in mv.beta for _ in range(c)]
    return DivergenceData(tuple(sorted(x, reverse=True)), tuple(sorted(y, reverse=True)))


def canonical(data):
    return DivergenceData(tuple(sorted(data.x, reverse=True)), tuple(sorted(data.y, reverse=True)))


def point_count(poly, genus, mv):
    """Number of point conditions 2a + g + (number of y ends) - 1."""
    y_ends = sum(c for _, c in mv.beta) + sum(c for _, c in mv.beta_tilde)
    return 2 * poly.a + genus + y_ends - 1
