"""Rewriting fields in the X-basis for type I_0 Case I operators.

A field ``alpha*xi1 + x1^(p-1)*beta*xi2 + x1^(q-1)*gamma*xi3`` is written as
``a*X1 + b*X2 + c*X3`` with truncated power series a, b, c.  The 2x2 system for
(b, c) has a determinant that is a unit exactly when the operator is of type
I_0, so it is solved by series inversion.

Commutators with d/dx3 are expanded on top of that.  The convention here is
the real derivative ``d3 = d/dx3``: the factors of 1/i carried by D3 only
multiply the table by powers of -i and are left out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .fields import FieldSymbol
from .normalform import CaseI, NotTypeI0, StandardForm
from .symcore import ZERO, X1, NotDivisible, Poly, div_exact, mul_trunc, series_inverse


@dataclass(frozen=True)
class BasisCoeffs:
    a: Poly
    b: Poly
    c: Poly
    trunc: int

    def as_tuple(self) -> tuple[Poly, Poly, Poly]:
        return (self.a, self.b, self.c)


def basis_matrix(sf: StandardForm) -> tuple[tuple[Poly, Poly], tuple[Poly, Poly]]:
    """[[B22, B32], [a23, a33]] acting on (b, c)."""
    d = sf.case_data
    if not isinstance(d, CaseI) or sf.q is None:
        raise NotTypeI0("basis rewriting needs a Case I standard form with q known")
    return ((sf.B[0][0], sf.B[1][0]), (d.a23, d.a33))


def combine(coeffs: BasisCoeffs | tuple[Poly, Poly, Poly], sf: StandardForm) -> FieldSymbol:
    a, b, c = coeffs.as_tuple() if isinstance(coeffs, BasisCoeffs) else coeffs
    X = sf.reassemble().fields
    return X[0].scale(a) + X[1].scale(b) + X[2].scale(c)


def _strip(poly: Poly, power: int, what: str) -> Poly:
    if power == 0:
        return poly
    try:
        return div_exact(poly, X1 ** power)
    except NotDivisible as exc:
        raise ValueError(f"{what} coefficient is not divisible by x1^{power}") from exc


def solve_basis(target: FieldSymbol, sf: StandardForm, trunc: int = 8) -> BasisCoeffs:
    """Coefficients (a, b, c) with a*X1 + b*X2 + c*X3 = target mod degree trunc."""
    p, q = sf.p, sf.q
    (m11, m12), (m21, m22) = basis_matrix(sf)
    beta = _strip(target.c2, p - 1, "xi2")
    gamma = _strip(target.c3, q - 1, "xi3")
    det = m11 * m22 - m12 * m21
    if det.evaluate((0, 0, 0)) == 0:
        raise NotTypeI0("the basis matrix is singular at the origin")
    inv = series_inverse(det, trunc)
    b = mul_trunc(beta * m22 - gamma * m12, inv, trunc)
    c = mul_trunc(m11 * gamma - m21 * beta, inv, trunc)
    a = (target.c1 - b * sf.a21 - c * sf.a31).truncate(trunc)
    out = BasisCoeffs(a, b, c, trunc)
    resid = combine(out, sf) - target
    if not resid.map(lambda e: e.truncate(trunc)).is_zero():
        raise ArithmeticError("basis reassembly left a residual below the truncation order")
    return out


@dataclass
class GammaTable:
    """Entries gamma[(l, h)] for a fixed field X_j and l = 0..m."""

    j: int
    m: int
    trunc: int
    entries: dict[tuple[int, int], Poly]

    def entry(self, l: int, h: int) -> Poly:
        return self.entries[(l, h)]


def expand_commutator(sf: StandardForm, j: int, m: int, trunc: int = 8) -> GammaTable:
    """Table with -d3^m X_j = sum_l C(m, l) sum_h gamma[l, h] X_h d3^(m-l).

    Equivalently ``[X_j, d3^m] = sum_{l >= 1} C(m, l) sum_h gamma[l, h] X_h
    d3^(m-l)``, and gamma[0, h] = -delta_{jh}.
    """
    if not 1 <= j <= 3:
        raise ValueError("j must be 1, 2 or 3")
    if m < 0 or m > 4:
        raise ValueError("m must lie in 0..4")
    X = sf.reassemble().field(j)
    entries: dict[tuple[int, int], Poly] = {}
    for h in (1, 2, 3):
        entries[(0, h)] = Poly.const(-1 if h == j else 0)
    for l in range(1, m + 1):
        dX = X.diff(3, l)
        if dX.is_zero():
            co = (ZERO, ZERO, ZERO)
        else:
            co = solve_basis(-dX, sf, trunc).as_tuple()
        for h in (1, 2, 3):
            entries[(l, h)] = co[h - 1]
    table = GammaTable(j, m, trunc, entries)
    # the l = 0 row must reproduce -X_j itself
    row0 = combine(tuple(entries[(0, h)] for h in (1, 2, 3)), sf)
    if row0 != -X:
        raise ArithmeticError("gamma^(0) does not reassemble to -X_j")
    return table


def coefficient_norm(p: Poly, degree: int) -> Fraction:
    """Sum of |coefficients| over terms of total degree <= degree."""
    return sum((abs(c) for e, c in p.items() if sum(e) <= degree), Fraction(0))


def growth_constants(table: GammaTable, degree: int | None = None) -> dict[str, float]:
    """Smallest C with norm(gamma^(l)) <= C^l * l! for each l >= 1 (reported only)."""
    degree = table.trunc - 1 if degree is None else degree
    out = {}
    for l in range(1, table.m + 1):
        total = sum(coefficient_norm(table.entry(l, h), degree) for h in (1, 2, 3))
        out[str(l)] = float(total / math.factorial(l)) ** (1.0 / l) if total else 0.0
    return out
