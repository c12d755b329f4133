"""Fit chamber polynomials from exact invariant values and validate them."""
from dataclasses import dataclass

from .chambers import deep_anchor, extended_arrangement, lattice_arrangement, sample_chamber
from .errors import OrderingViolation, ValidationError
from .invariants import function_F
from .polygon import build_polygon
from .polynomials import interpolate, monomials, parity_degree_check


def degree_bound(a, genus, n2):
    return n2 + 3 * genus + 2 * a - 2


@dataclass
class FitReport:
    polynomial: object
    bound: int
    chart: tuple
    training: list       # (full point, value)
    holdout: list        # (full point, value, predicted)
    parity: object = None

    @property
    def holdout_ok(self):
        return all(v == p for _, v, p in self.holdout)

    @property
    def passed(self):
        ok = self.holdout_ok and self.polynomial.total_degree <= self.bound
        return ok and (self.parity is None or self.parity.passed)

    def to_json(self):
        out = {"polynomial": self.polynomial.to_json(), "degree_bound": self.bound,
               "chart": list(self.chart), "training_points": len(self.training),
               "holdout": [{"point": list(pt), "value": str(v), "predicted": str(p)}
                           for pt, v, p in self.holdout],
               "holdout_ok": self.holdout_ok, "passed": self.passed}
        if self.parity is not None:
            out["parity"] = self.parity.to_json()
        return out


def _fit(arrangement, points, evaluate, bound, holdout):
    basis = len(monomials(arrangement.dimension, bound))
    train_n = len(points) - holdout
    if train_n < basis:
        raise ValidationError(f"need {basis} training points, have {train_n}")
    values = [evaluate(pt) for pt in points]
    train = [(arrangement.to_chart(pt), v) for pt, v in zip(points[:train_n], values)]
    poly = interpolate(train, bound, arrangement.chart_names)
    checks = [(pt, v, poly(arrangement.to_chart(pt)))
              for pt, v in zip(points[train_n:], values[train_n:])]
    return poly, list(zip(points[:train_n], values[:train_n])), checks


def fit_lattice_chamber(poly, genus, n1, n2, anchor, radius=6, margin=5, holdout=5,
                        seed=0, mode="right"):
    """Fit F on the chamber of ``anchor`` (a full point x + y) with fixed slopes."""
    arr = lattice_arrangement(poly.c_r, poly.c_l, poly.d_r, poly.d_l, n1, n2)
    bound = degree_bound(poly.a, genus, n2)
    count = len(monomials(arr.dimension, bound)) + margin + holdout
    points = sample_chamber(arr, anchor, count, radius, seed)

    def evaluate(pt):
        return function_F(poly, genus, pt[:n1], pt[n1:], mode=mode)

    fitted, train, checks = _fit(arr, points, evaluate, bound, holdout)
    return FitReport(fitted, bound, arr.chart_names, train, checks)


def fit_extended_chamber(d_r, d_l, genus, n1, n2, anchor, radius=3, margin=5, holdout=5,
                         seed=0, mode="right"):
    """Fit F jointly in (x, y, c_r, c_l) on the chamber of the extended
    arrangement containing ``anchor`` scaled up until a box of the given
    radius fits, then check degree and parity."""
    d_r, d_l = tuple(d_r), tuple(d_l)
    arr = extended_arrangement(d_r, d_l, n1, n2)
    n, m = len(d_r), len(d_l)
    bound = degree_bound(sum(d_r), genus, n2)
    if not arr.on_lattice(tuple(anchor)):
        raise ValidationError("anchor is not on the balancing lattice")
    centre = deep_anchor(arr, arr.to_chart(tuple(anchor)), radius)
    count = len(monomials(arr.dimension, bound)) + margin + holdout
    points = sample_chamber(arr, centre, count, radius, seed)

    def evaluate(pt):
        k = n1 + n2
        c_r, c_l = pt[k:k + n], pt[k + n:k + n + m]
        if any(u <= v for u, v in zip(c_r, c_r[1:])) or any(u >= v for u, v in zip(c_l, c_l[1:])):
            raise OrderingViolation("sample left the ordered slope region")
        top = sum(v for v in pt[:k] if v > 0)
        shape = build_polygon(c_r, c_l, d_r, d_l, top, allow_open=True)
        return function_F(shape, genus, pt[:n1], pt[n1:k], mode=mode)

    fitted, train, checks = _fit(arr, points, evaluate, bound, holdout)
    report = FitReport(fitted, bound, arr.chart_names, train, checks)
    report.parity = parity_degree_check(fitted, bound)
    return report
