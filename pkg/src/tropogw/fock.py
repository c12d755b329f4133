"""Two-species bosonic Fock space and matrix elements of floor operators.

Generators are pairs ``(kind, n)`` with kind ``"a"`` or ``"b"`` and
``n != 0``; the only nonzero brackets are ``[a_n, b_{-n}] = [b_n, a_{-n}] = n``.
Negative indices create, positive indices annihilate.

States are polynomials in commuting creation variables ``A_n = a_{-n}`` and
``B_n = b_{-n}`` applied to the vacuum; ``a_n`` acts as ``n d/dB_n`` and
``b_n`` as ``n d/dA_n``.  A state vector is a dict mapping
``(A modes, B modes)`` (sorted tuples) to a Laurent polynomial in ``u``
(a dict exponent -> Fraction).
"""
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .errors import TruncationTooSmall, ValidationError
from .invariants import automorphism_order
from .polygon import divergence_sequences
from .tangency import lambda_defect, make_divergence


# ---------------------------------------------------------------------------
# operator algebra

def _check_generator(gen):
    kind, n = gen
    if kind not in ("a", "b") or n == 0:
        raise ValidationError(f"bad generator {gen!r}")


@dataclass(frozen=True)
class OperatorMonomial:
    generators: tuple
    u: int = 0
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        for gen in self.generators:
            _check_generator(gen)

    def is_normal_ordered(self):
        seen_annihilator = False
        for _, n in self.generators:
            if n > 0:
                seen_annihilator = True
            elif seen_annihilator:
                return False
        return True

    def __str__(self):
        word = " ".join(f"{k}_{{{n}}}" for k, n in self.generators) or "1"
        return f"({self.coeff})*u^{self.u}*{word}"


class OperatorSum:
    """Formal sum of monomials; identical (generators, u) terms merge."""

    def __init__(self, terms=None):
        self.terms = defaultdict(Fraction)
        for mono in terms or ():
            self.add(mono)

    def add(self, mono):
        key = (tuple(mono.generators), mono.u)
        self.terms[key] += Fraction(mono.coeff)
        if self.terms[key] == 0:
            del self.terms[key]

    def monomials(self):
        return [OperatorMonomial(g, u, c) for (g, u), c in sorted(self.terms.items())]

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        return OperatorSum(self.monomials() + other.monomials())

    def __mul__(self, other):
        out = OperatorSum()
        for (g1, u1), c1 in self.terms.items():
            for (g2, u2), c2 in other.terms.items():
                out.add(OperatorMonomial(g1 + g2, u1 + u2, c1 * c2))
        return out

    def __eq__(self, other):
        return isinstance(other, OperatorSum) and dict(self.terms) == dict(other.terms)

    def scalar_part(self):
        """Laurent polynomial formed by the terms without generators."""
        out = {}
        for (g, u), c in self.terms.items():
            if not g:
                out[u] = out.get(u, 0) + c
        return {u: c for u, c in out.items() if c}


def bracket(left, right):
    """[left, right] for an annihilator on the left and a creator on the right."""
    (k1, n1), (k2, n2) = left, right
    if k1 != k2 and n1 == -n2:
        return n1
    return 0


def _canonical(word):
    creators = sorted(g for g in word if g[1] < 0)
    annihilators = sorted(g for g in word if g[1] > 0)
    return tuple(creators + annihilators)


@lru_cache(maxsize=None)
def _normal_order_word(word):
    """Map normal-ordered canonical words to integer coefficients."""
    for i in range(len(word) - 1):
        if word[i][1] > 0 and word[i + 1][1] < 0:
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2:]
            out = Counter(_normal_order_word(swapped))
            c = bracket(word[i], word[i + 1])
            if c:
                for w, v in _normal_order_word(word[:i] + word[i + 2:]).items():
                    out[w] += c * v
            return {w: v for w, v in out.items() if v}
    return {_canonical(word): 1}


def normal_order(mono):
    out = OperatorSum()
    for word, c in _normal_order_word(tuple(mono.generators)).items():
        out.add(OperatorMonomial(word, mono.u, mono.coeff * c))
    return out


def normal_order_sum(op):
    out = OperatorSum()
    for mono in op.monomials():
        for m in normal_order(mono).monomials():
            out.add(m)
    return out


def _partitions(n, largest=None):
    """Partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _aut(parts):
    return prod(factorial(c) for c in Counter(parts).values())


def truncated_M_c(c, cap):
    """Terms of the floor operator with divergence c whose annihilated and
    created masses are both at most ``cap``.

    The sum over index sequences with 1/m! becomes one monomial per pair of
    partitions with coefficient 1/(|Aut| of the annihilated parts times that
    of the created parts); each created mode carries one power of u and the
    whole operator carries u^-1.
    """
    out = OperatorSum()
    for pos in range(max(c, 0), cap + 1):
        neg = pos - c
        if neg < 0 or neg > cap or pos + neg == 0:
            continue
        for p_parts in _partitions(pos):
            for q_parts in _partitions(neg):
                gens = tuple(("a", -q) for q in sorted(q_parts)) + tuple(("a", p) for p in sorted(p_parts))
                coeff = Fraction(1, _aut(p_parts) * _aut(q_parts))
                out.add(OperatorMonomial(gens, len(q_parts) - 1, coeff))
    return out


def truncated_M(cap):
    """Pass-through operator: sum of b_{-m} b_m for m <= cap, net power u^0."""
    return OperatorSum(OperatorMonomial((("b", -m), ("b", m)), 0, Fraction(1))
                       for m in range(1, cap + 1))


# ---------------------------------------------------------------------------
# states

@dataclass(frozen=True)
class FockState:
    """Basis vector v_{mu,nu}: a-modes mu and b-modes nu over |Aut mu||Aut nu|."""
    mu: tuple = ()
    nu: tuple = ()

    def __post_init__(self):
        if any(p <= 0 for p in self.mu + self.nu):
            raise ValidationError("partition parts must be positive")
        object.__setattr__(self, "mu", tuple(sorted(self.mu, reverse=True)))
        object.__setattr__(self, "nu", tuple(sorted(self.nu, reverse=True)))

    @property
    def normalization(self):
        return Fraction(1, _aut(self.mu) * _aut(self.nu))

    def creators(self):
        return tuple(("a", -p) for p in self.mu) + tuple(("b", -p) for p in self.nu)

    def annihilators(self):
        """Generators of the dual (bra) vector."""
        return tuple(("a", p) for p in self.mu) + tuple(("b", p) for p in self.nu)

    def vector(self, spectator=False):
        """Vector with key (A, B, A0, B0); spectator modes go to A0, B0."""
        a, b = tuple(sorted(self.mu)), tuple(sorted(self.nu))
        key = ((), (), a, b) if spectator else (a, b, (), ())
        return {key: {0: self.normalization}}


def norm_formula(left, right):
    """Closed form of the pairing of two basis vectors."""
    if left.mu != right.nu or left.nu != right.mu:
        return Fraction(0)
    return Fraction(prod(left.mu) * prod(left.nu), _aut(left.mu) * _aut(left.nu))


def _laurent_add(target, source, scale=1, shift=0):
    for u, c in source.items():
        target[u + shift] = target.get(u + shift, 0) + c * scale


def _clean(vec):
    out = {}
    for key, poly in vec.items():
        poly = {u: c for u, c in poly.items() if c}
        if poly:
            out[key] = poly
    return out


def _remove(modes, n):
    rest = list(modes)
    rest.remove(n)
    return tuple(rest)


def apply_generator(gen, vec):
    """Act with one generator.  Keys are (A, B, A0, B0): A0 and B0 hold
    spectator modes of an initial state, which annihilators act on like
    any other mode."""
    kind, n = gen
    out = {}
    for key, poly in vec.items():
        amodes, bmodes, a0, b0 = key
        if n < 0:
            if kind == "a":
                new = (tuple(sorted(amodes + (-n,))), bmodes, a0, b0)
            else:
                new = (amodes, tuple(sorted(bmodes + (-n,))), a0, b0)
            _laurent_add(out.setdefault(new, {}), poly)
            continue
        # a_n differentiates in B_n, b_n in A_n
        slot = 1 if kind == "a" else 0
        for pool in (slot, slot + 2):
            mult = key[pool].count(n)
            if mult:
                new = list(key)
                new[pool] = _remove(key[pool], n)
                _laurent_add(out.setdefault(tuple(new), {}), poly, n * mult)
    return _clean(out)


def apply_monomial(mono, vec):
    for gen in reversed(mono.generators):
        vec = apply_generator(gen, vec)
        if not vec:
            return {}
    if mono.coeff != 1 or mono.u:
        vec = {k: {u + mono.u: c * mono.coeff for u, c in p.items()} for k, p in vec.items()}
    return vec


def apply_sum(op, vec):
    out = {}
    for mono in op.monomials():
        for key, poly in apply_monomial(mono, vec).items():
            _laurent_add(out.setdefault(key, {}), poly)
    return _clean(out)


def pair(state, vec, spectators=True):
    """<state | vec> as a Laurent polynomial.

    With ``spectators`` false, components of ``vec`` that still hold
    spectator modes are dropped.
    """
    target = (tuple(sorted(state.nu)), tuple(sorted(state.mu)))
    total = {}
    for (amodes, bmodes, a0, b0), poly in vec.items():
        if (a0 or b0) and not spectators:
            continue
        if (tuple(sorted(amodes + a0)), tuple(sorted(bmodes + b0))) == target:
            _laurent_add(total, poly)
    # annihilating A^nu B^mu by b_nu a_mu gives prod(parts) * |Aut| each
    factor = state.normalization * prod(state.mu) * prod(state.nu) * _aut(state.mu) * _aut(state.nu)
    return {u: c * factor for u, c in total.items() if c}


def inner_product(left, right):
    """Pairing of two state vectors, extended bilinearly."""
    total = {}
    for (amodes, bmodes, a0, b0), lpoly in left.items():
        amodes, bmodes = tuple(sorted(amodes + a0)), tuple(sorted(bmodes + b0))
        # left basis element A^amodes B^bmodes equals |Aut| times v_{amodes,bmodes}
        state = FockState(amodes, bmodes)
        scale = 1 / state.normalization
        for u, c in pair(state, right).items():
            for u2, c2 in lpoly.items():
                total[u + u2] = total.get(u + u2, 0) + c * c2 * scale
    return {u: c for u, c in total.items() if c}


# ---------------------------------------------------------------------------
# vacuum expectations two ways

def _expand(ops):
    """Yield (tuple of factor words, u, coefficient) over all monomial choices."""
    lists = [op.monomials() for op in ops]

    def rec(i, words, u, coeff):
        if i == len(lists):
            yield words, u, coeff
            return
        for mono in lists[i]:
            yield from rec(i + 1, words + (mono.generators,), u + mono.u, coeff * mono.coeff)

    yield from rec(0, (), 0, Fraction(1))


def _feynman_value(factors):
    """Sum over complete pairings: each annihilator contracts with a creator
    of opposite kind and opposite index in a strictly later factor."""
    gens = [(f, g) for f, word in enumerate(factors) for g in word]
    n = len(gens)
    used = [False] * n

    def rec(start):
        i = start
        while i < n and used[i]:
            i += 1
        if i == n:
            return 1
        fi, gi = gens[i]
        if gi[1] < 0:
            return 0
        used[i] = True
        total = 0
        for j in range(i + 1, n):
            if not used[j]:
                fj, gj = gens[j]
                if fj > fi and gj[1] < 0:
                    c = bracket(gi, gj)
                    if c:
                        used[j] = True
                        total += c * rec(i + 1)
                        used[j] = False
        used[i] = False
        return total

    return rec(0)


def vacuum_expectation(out, ops, in_, method="normal_order", cap=None):
    """<out| product of ops |in> as a dict u-exponent -> Fraction.

    ``ops`` are applied right to left as written.  ``method`` is
    ``"normal_order"`` (commutator rewriting of each full word),
    ``"feynman"`` (pairings between normal-ordered factors) or
    ``"operator"`` (action on polynomial states).
    """
    if cap is not None:
        for p in out.mu + out.nu + in_.mu + in_.nu:
            if p > cap:
                raise TruncationTooSmall(f"state part {p} exceeds the energy cap {cap}")
    scale = out.normalization * in_.normalization
    result = {}
    if method == "operator":
        vec = in_.vector()
        for op in reversed(ops):
            vec = apply_sum(op, vec)
        return pair(out, vec)
    for words, u, coeff in _expand(ops):
        if method == "feynman":
            value = _feynman_sum([out.annihilators()] + list(words) + [in_.creators()])
        elif method == "normal_order":
            word = out.annihilators() + tuple(g for w in words for g in w) + in_.creators()
            value = _normal_order_word(word).get((), 0)
        else:
            raise ValidationError(f"unknown method {method!r}")
        if value:
            result[u] = result.get(u, 0) + coeff * value * scale
    return {u: c for u, c in result.items() if c}


def _feynman_sum(factors):
    """Wick pairings after normal ordering each factor separately."""
    expanded = [list(_normal_order_word(tuple(w)).items()) for w in factors]
    total = 0

    def rec(i, chosen, coeff):
        nonlocal total
        if i == len(expanded):
            total += coeff * _feynman_value(chosen)
            return
        for word, c in expanded[i]:
            rec(i + 1, chosen + [word], coeff * c)

    rec(0, [], 1)
    return total


def word_expectation(word, method):
    """Vacuum expectation of a single product of generators."""
    if method == "normal_order":
        return _normal_order_word(tuple(word)).get((), 0)
    if method == "feynman":
        return _feynman_value([(g,) for g in word])
    if method == "operator":
        vec = {((), (), (), ()): {0: Fraction(1)}}
        for g in reversed(word):
            vec = apply_generator(g, vec)
        return vec.get(((), (), (), ()), {}).get(0, 0)
    raise ValidationError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# matrix elements for the invariants

def _sub_multisets(modes):
    items = sorted(Counter(modes).items())

    def rec(i, taken):
        if i == len(items):
            yield taken
            return
        mode, have = items[i]
        for k in range(have + 1):
            yield from rec(i + 1, taken + (mode,) * k)

    yield from rec(0, ())


def _apply_floor(c, vec):
    """Exact action of the floor operator with divergence c (no truncation)."""
    out = {}
    for key, poly in vec.items():
        single = {key: poly}
        for taken in _sub_multisets(key[1] + key[3]):
            neg = sum(taken) - c
            if neg < 0 or sum(taken) + neg == 0:
                continue
            part = single
            for p in taken:
                part = apply_generator(("a", p), part)
            p_aut = _aut(taken)
            for (amodes, bmodes, a0, b0), ppoly in part.items():
                for q_parts in _partitions(neg):
                    coeff = Fraction(1, p_aut * _aut(q_parts))
                    new = (tuple(sorted(amodes + q_parts)), bmodes, a0, b0)
                    _laurent_add(out.setdefault(new, {}), ppoly, coeff, len(q_parts) - 1)
    return _clean(out)


def _apply_pass(vec):
    out = {}
    for key, poly in vec.items():
        for m in set(key[0] + key[2]):
            for (amodes, bmodes, a0, b0), ppoly in apply_generator(("b", m), {key: poly}).items():
                new = (amodes, tuple(sorted(bmodes + (m,))), a0, b0)
                _laurent_add(out.setdefault(new, {}), ppoly)
    return _clean(out)


def _add_vec(target, source):
    for key, poly in source.items():
        _laurent_add(target.setdefault(key, {}), poly)


def shuffle_product(black_div, n_pass, vec, cap=None):
    """Sum over interleavings of the floor operators (order kept) with
    ``n_pass`` pass-through operators, applied to ``vec``."""
    a = len(black_div)
    floors = ([(lambda v, c=-s: _apply_floor(c, v)) for s in black_div] if cap is None else
              [(lambda v, op=truncated_M_c(-s, cap): apply_sum(op, v)) for s in black_div])
    passing = (_apply_pass if cap is None else
               (lambda v, op=truncated_M(cap): apply_sum(op, v)))
    layer = {0: vec}   # j -> vector after i floors and j pass-throughs
    for i in range(a + 1):
        if i > 0:
            layer = {j: floors[i - 1](v) for j, v in layer.items()}
        for j in range(1, n_pass + 1):
            prev = layer.get(j - 1, {})
            if prev:
                extra = passing(prev)
                merged = dict(layer.get(j, {}))
                _add_vec(merged, extra)
                layer[j] = _clean(merged)
        # keep only consistent entries for the next floor step
    return layer.get(n_pass, {})


def matrix_element_invariant(poly, genus, x, y, mode="right", cap=None, bare_edges=False):
    """Disconnected invariant from the Fock space matrix element.

    The incoming state carries the positive ends (x on b-modes, y on
    a-modes) and the outgoing state the negative ones.  With ``cap`` set,
    truncated operators are used instead of the exact action.

    A mode of the incoming state contracted straight into the outgoing
    state is an edge without vertices, which no diagram contains; such
    terms are dropped unless ``bare_edges`` is set.
    """
    data = make_divergence(x, y)
    if lambda_defect(poly, data):
        raise ValidationError("point is not on the balancing lattice")
    xp = tuple(v for v in x if v > 0)
    xm = tuple(-v for v in x if v < 0)
    yp = tuple(v for v in y if v > 0)
    ym = tuple(-v for v in y if v < 0)
    ket = FockState(mu=yp, nu=xp)
    bra = FockState(mu=ym, nu=xm)
    if cap is not None:
        for p in xp + xm + yp + ym:
            if p > cap:
                raise TruncationTooSmall(f"state part {p} exceeds the energy cap {cap}")
    n_pass = poly.a + genus + len(y) - 1
    if n_pass < 0:
        return 0
    target_u = genus - 1 + len(xm) + len(ym)
    total = Fraction(0)
    for black_div in divergence_sequences(poly, mode):
        vec = shuffle_product(black_div, n_pass, ket.vector(spectator=True), cap)
        total += pair(bra, vec, spectators=bare_edges).get(target_u, 0)
    prefactor = Fraction(automorphism_order(x) * automorphism_order(y),
                         prod(abs(v) for v in x) * prod(abs(v) for v in y))
    value = prefactor * total
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral matrix element {value}")
    return int(value)
