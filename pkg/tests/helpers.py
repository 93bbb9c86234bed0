"""Shared generators for the test suite (random polynomials, fields, specs)."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from sosgevrey.fields import XI1, FieldSymbol, OperatorSpec
from sosgevrey.normalform import classify_case, compute_q, factor_p, with_q
from sosgevrey.symcore import ONE, ZERO, X1, X2, X3, Poly

exponents = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)).filter(
    lambda e: sum(e) <= 4
)
coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(exponents, coefficients, max_size=4).map(Poly)
fields = st.builds(FieldSymbol, polys, polys, polys)


def rand_poly(rng: random.Random, max_deg: int = 4, terms: int = 4, variables=(1, 2, 3)) -> Poly:
    out = {}
    for _ in range(rng.randint(0, terms)):
        e = [0, 0, 0]
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            e[rng.choice(variables) - 1] += 1
        out[tuple(e)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return Poly(out)


def rand_field(rng: random.Random, max_deg: int = 4) -> FieldSymbol:
    return FieldSymbol(*(rand_poly(rng, max_deg) for _ in range(3)))


def oleinik_radkevic(p: int, q: int) -> OperatorSpec:
    return OperatorSpec(XI1, FieldSymbol(ZERO, X1 ** (p - 1), ZERO), FieldSymbol(ZERO, ZERO, X1 ** (q - 1)))


def standard_form(spec: OperatorSpec):
    """factor_p -> classify_case -> compute_q without the Sigma_1 detection."""
    _, pf = factor_p(spec)
    sf = classify_case(pf, allow_degenerate=True)
    return with_q(sf, compute_q(sf))


def random_type_i0(rng: random.Random, p: int | None = None, q: int | None = None) -> OperatorSpec:
    """A random Case I spec with E(0) != 0, i.e. of type I_0."""
    p = p or rng.randint(1, 3)
    q = q or p + rng.randint(1, 3)
    while True:
        alpha = rng.choice([1, 2, -1, Fraction(1, 2)]) + rand_poly(rng, 2, 2, (2, 3))
        lam = rng.randint(-2, 2) + rand_poly(rng, 2, 2, (2, 3))
        a22, a32, a23, a33 = (rand_poly(rng, 2, 3) for _ in range(4))
        a23 = a23 + rng.randint(-2, 2)
        a33 = a33 + rng.randint(-2, 2)
        e0 = -lam.const_term() * a23.const_term() + a33.const_term()
        if e0 != 0 and alpha.const_term() != 0:
            break
    xp, xq = X1 ** (p - 1), X1 ** (q - p)
    a21, a31 = rand_poly(rng, 2, 2), rand_poly(rng, 2, 2)
    F2 = FieldSymbol(a21, xp * (alpha + X1 * a22), xp * xq * a23)
    F3 = FieldSymbol(a31, xp * (lam * alpha + X1 * a32), xp * xq * a33)
    return OperatorSpec(XI1, F2, F3)


# -- differential operators with polynomial coefficients ---------------------
# {(e1, e2, e3): c} means sum c * d1^e1 d2^e2 d3^e3.  Used as an independent
# oracle for commutators.

def as_operator(X: FieldSymbol) -> dict[tuple[int, int, int], Poly]:
    out = {}
    for i, c in enumerate(X.coeffs):
        if not c.is_zero():
            e = [0, 0, 0]
            e[i] = 1
            out[tuple(e)] = c
    return out


def d3_power(m: int) -> dict[tuple[int, int, int], Poly]:
    return {(0, 0, m): ONE}


def _binom(n: int, k: int) -> int:
    from math import comb
    return comb(n, k)


def compose(A, B):
    """(A o B) via Leibniz: c d^a (e d^b) = c sum_g C(a, g) (d^g e) d^(a-g+b)."""
    out: dict[tuple[int, int, int], Poly] = {}
    for a, c in A.items():
        for b, e in B.items():
            for g1 in range(a[0] + 1):
                for g2 in range(a[1] + 1):
                    for g3 in range(a[2] + 1):
                        de = e.diff(1, g1).diff(2, g2).diff(3, g3)
                        if de.is_zero():
                            continue
                        w = _binom(a[0], g1) * _binom(a[1], g2) * _binom(a[2], g3)
                        key = (a[0] - g1 + b[0], a[1] - g2 + b[1], a[2] - g3 + b[2])
                        out[key] = out.get(key, ZERO) + c * de * w
    return {k: v for k, v in out.items() if not v.is_zero()}


def op_add(A, B, sign: int = 1):
    out = dict(A)
    for k, v in B.items():
        out[k] = out.get(k, ZERO) + v * sign
    return {k: v for k, v in out.items() if not v.is_zero()}


def op_scale(A, c: Poly):
    return {k: v * c for k, v in A.items() if not (v * c).is_zero()}


def op_truncate(A, order: int):
    return {k: v.truncate(order) for k, v in A.items() if not v.truncate(order).is_zero()}


__all__ = [
    "X1", "X2", "X3", "ONE", "ZERO",
    "polys", "fields", "rand_poly", "rand_field", "oleinik_radkevic", "standard_form",
    "random_type_i0", "as_operator", "d3_power", "compose", "op_add", "op_scale", "op_truncate",
]
