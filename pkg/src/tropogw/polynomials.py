"""Exact polynomials: interpolation, degree and parity checks, and the
composition sums used in closed-form chamber expressions."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .errors import InconsistentSamples, RankDeficient
from .flows import dilated_sum, interior_sum, polytope_dimension
from .linalg import Underdetermined, Unsolvable, solve


@dataclass(frozen=True)
class MultivariatePolynomial:
    variables: tuple
    terms: dict = field(hash=False)   # exponent tuple -> Fraction, no zeros

    @classmethod
    def build(cls, variables, terms):
        clean = {tuple(e): Fraction(c) for e, c in terms.items() if c != 0}
        return cls(tuple(variables), clean)

    @property
    def total_degree(self):
        """Degree of the zero polynomial is reported as -1."""
        return max((sum(e) for e in self.terms), default=-1)

    def degrees(self):
        return sorted({sum(e) for e in self.terms})

    def __call__(self, point):
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(point, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def __eq__(self, other):
        return (isinstance(other, MultivariatePolynomial)
                and self.variables == other.variables and self.terms == other.terms)

    def to_json(self):
        def fmt(c):
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return {"variables": list(self.variables),
                "terms": {",".join(map(str, e)): fmt(c) for e, c in sorted(self.terms.items())},
                "total_degree": self.total_degree}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(self.variables, exps) if e)
            parts.append(f"({coeff})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def monomials(nvars, max_degree):
    """Exponent vectors of total degree at most ``max_degree``, by degree."""
    out = []
    for d in range(max_degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    return out


def interpolate(samples, max_degree, variables=None):
    """The unique polynomial of degree at most ``max_degree`` through ``samples``.

    ``samples`` is a list of (point, value).  Raises InconsistentSamples when
    no such polynomial exists and RankDeficient when it is not unique.
    """
    if not samples:
        raise RankDeficient("no samples")
    nvars = len(samples[0][0])
    if variables is None:
        variables = tuple(f"v{i}" for i in range(nvars))
    basis = monomials(nvars, max_degree)
    rows, rhs = [], []
    for point, value in samples:
        row = []
        for exps in basis:
            term = 1
            for v, e in zip(point, exps):
                if e:
                    term *= v ** e
            row.append(term)
        rows.append(row)
        rhs.append(value)
    try:
        coeffs = solve(rows, rhs)
    except Unsolvable:
        raise InconsistentSamples(
            f"no polynomial of degree <= {max_degree} fits the {len(samples)} samples") from None
    except Underdetermined as exc:
        raise RankDeficient(
            f"samples determine only {exc.rank} of {len(basis)} coefficients") from None
    return MultivariatePolynomial.build(variables, dict(zip(basis, coeffs)))


@lru_cache(maxsize=None)
def gamma(genus, w):
    """Sum over compositions of w into genus+1 positive parts of the product of squares."""
    if w < genus + 1:
        return 0
    if genus == 0:
        return w * w
    return sum(first * first * gamma(genus - 1, w - first) for first in range(1, w - genus + 1))


def gamma_shifted(genus, k, w):
    return gamma(genus, abs(w + k))


@dataclass
class ParityReport:
    passed: bool
    bound: int
    total_degree: int
    degree_ok: bool
    parity_ok: bool
    attains_bound: bool
    degrees: list

    def to_json(self):
        return dict(self.__dict__)


def parity_degree_check(poly, bound):
    degrees = poly.degrees()
    degree_ok = poly.total_degree <= bound
    parity_ok = all((d - bound) % 2 == 0 for d in degrees)
    return ParityReport(degree_ok and parity_ok, bound, poly.total_degree, degree_ok,
                        parity_ok, poly.total_degree == bound, degrees)


@dataclass
class ReciprocityReport:
    passed: bool
    dimension: int
    degree: int
    polynomial: MultivariatePolynomial
    checks: list   # (t, interior side, polynomial side)

    def to_json(self):
        return {"passed": self.passed, "dimension": self.dimension, "degree": self.degree,
                "polynomial": self.polynomial.to_json(),
                "checks": [{"t": t, "interior": str(lhs), "extended": str(rhs)}
                           for t, lhs, rhs in self.checks]}


def ehrhart_extend_and_check(system, checks=3):
    """Compare interior sums of the reflected polytope with the extended
    dilation polynomial at negative arguments."""
    dim = polytope_dimension(system)
    if dim < 0:
        raise RankDeficient("empty flow polytope")
    degree = dim + len(system.internal)
    samples = [((t,), dilated_sum(system, t)) for t in range(1, degree + 3)]
    poly = interpolate(samples, degree, ("t",))
    sign_f = (-1) ** len(system.internal)
    rows = []
    ok = True
    for t in range(1, checks + 1):
        # weight of -z equals sign_f times weight of z for a homogeneous product
        lhs = sign_f * interior_sum(system, t)
        rhs = (-1) ** dim * poly((-t,))
        rows.append((t, lhs, rhs))
        ok = ok and lhs == rhs
    return ReciprocityReport(ok, dim, degree, poly, rows)
