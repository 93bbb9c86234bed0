"""Reduction of three polynomial vector fields to the standard forms, recovery
of the Hörmander numbers (p, q), the Case I / IIa / IIb classification, the
side conditions and the type index r.

Pipeline order::

    detect_sigma1 -> apply_cov -> factor_p -> classify_case -> compute_q
        -> check_th1_conditions -> compute_type_r -> gevrey_threshold

Throughout, ``B`` is the 2x2 block of xi'-coefficients of (X2, X3) after the
common factor x1**(p-1) has been divided out, and ``M(x') = B(0, x')``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Any, Sequence

from .fields import XI1, FieldSymbol, OperatorSpec
from .symcore import (
    ONE,
    ZERO,
    X1,
    NotDivisible,
    Poly,
    Series1,
    content_in,
    div_exact,
    gcd_in_x1,
    gcd_list,
    series_inverse,
    series_ord,
)

Matrix2 = tuple[tuple[Poly, Poly], tuple[Poly, Poly]]
ORIGIN = (0, 0, 0)


class ClassificationError(Exception):
    """Base class; ``kind`` groups errors for the CLI exit codes."""

    kind = "assumption"


class NotStandardX1(ClassificationError):
    pass


class NoCommonFactor(ClassificationError):
    pass


class NonGraphFactor(ClassificationError):
    pass


class BasePointNotCharacteristic(ClassificationError):
    pass


class InfiniteOrder(ClassificationError):
    pass


class A4Violated(ClassificationError):
    pass


class NeedsCoordinateChange(ClassificationError):
    kind = "coordinates"


class LastLayerNotElliptic(ClassificationError):
    pass


class AboveTruncation(ClassificationError):
    kind = "truncation"


class NotTypeI0(ClassificationError):
    pass


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------

def xi_block(spec: OperatorSpec) -> Matrix2:
    return ((spec.X2.c2, spec.X2.c3), (spec.X3.c2, spec.X3.c3))


def det2(m: Matrix2) -> Poly:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def map2(m: Matrix2, fn) -> Matrix2:
    return tuple(tuple(fn(e) for e in row) for row in m)  # type: ignore[return-value]


def at_x1_zero(p: Poly) -> Poly:
    return p.at(1, 0)


@dataclass(frozen=True)
class CharManifold:
    """Sigma_1 = {xi1 = 0, x1 = g(x')} with A = (x1 - g) * tildeA."""

    g: Poly
    tildeA: Matrix2
    multiplicity: int = 1


@dataclass(frozen=True)
class CaseI:
    alpha: Poly           # B22(0, x'), alpha(0) != 0
    lam_alpha: Poly       # B32(0, x') = lambda * alpha
    lam0: Fraction        # lambda(0)
    # filled once q is known
    a22: Poly = ZERO
    a23: Poly = ZERO
    a32: Poly = ZERO
    a33: Poly = ZERO

    def tildeA(self) -> Matrix2:
        return ((self.a22, self.a23), (self.a32, self.a33))

    def lam_series(self, order: int) -> Poly:
        """lambda(x') as a series truncated at total degree ``order``."""
        return (self.lam_alpha * series_inverse(self.alpha, order)).truncate(order)


@dataclass(frozen=True)
class CaseIIa:
    j: int
    multiplicity: int
    T: Matrix2 = ((ZERO, ZERO), (ZERO, ZERO))      # (B - B|_{xj=0}) / xj
    hatA: Matrix2 = ((ZERO, ZERO), (ZERO, ZERO))   # B|_{xj=0} / x1^(q-p)


@dataclass(frozen=True)
class CaseIIb:
    subcase: str          # "b1" | "b2"
    Y: tuple[Poly, Poly]  # (alpha, beta), primitive
    h0: tuple[Poly, Poly]  # h(0, x')
    h: tuple[Poly, Poly] = (ZERO, ZERO)
    hatA: Matrix2 = ((ZERO, ZERO), (ZERO, ZERO))


@dataclass(frozen=True)
class StandardForm:
    """Fields X1 = xi1, X_k = a_k1 xi1 + x1^(p-1) * (row k of B) xi'."""

    spec: OperatorSpec
    p: int
    a21: Poly
    a31: Poly
    B: Matrix2
    case: str | None = None
    case_data: Any = None
    q: int | None = None
    swapped: bool = False
    degenerate: bool = False  # p == q with Sigma_p already empty

    @property
    def subcase(self) -> str | None:
        if isinstance(self.case_data, CaseIIb):
            return self.case_data.subcase
        if isinstance(self.case_data, CaseIIa):
            return f"x{self.case_data.j}"
        return None

    def reassemble(self) -> OperatorSpec:
        """Rebuild the fields from the stored pieces (tests exact round trip)."""
        B = self.B
        d = self.case_data
        if self.q is not None and d is not None:
            qp = self.q - self.p
            xq = X1 ** qp
            if isinstance(d, CaseI):
                B = ((d.alpha + X1 * d.a22, xq * d.a23), (d.lam_alpha + X1 * d.a32, xq * d.a33))
            elif isinstance(d, CaseIIa):
                xj = Poly.var(d.j)
                B = tuple(
                    tuple(xj * d.T[i][k] + xq * d.hatA[i][k] for k in range(2)) for i in range(2)
                )
            elif isinstance(d, CaseIIb):
                B = tuple(
                    tuple(d.h[i] * d.Y[k] + xq * d.hatA[i][k] for k in range(2)) for i in range(2)
                )
        xp = X1 ** (self.p - 1)
        X2 = FieldSymbol(self.a21, xp * B[0][0], xp * B[0][1])
        X3 = FieldSymbol(self.a31, xp * B[1][0], xp * B[1][1])
        return self.spec.with_fields(XI1, X2, X3)

    def sigma_p_layer(self) -> dict[str, Any] | None:
        """Relative equation of Sigma_p inside Sigma_1, for stratification."""
        d = self.case_data
        if self.degenerate or d is None:
            return None
        if isinstance(d, CaseI):
            return {"kind": "covector", "alpha": ONE, "beta": ZERO, "text": "xi2 = 0"}
        if isinstance(d, CaseIIa):
            return {"kind": "graph_x", "j": d.j, "text": f"x{d.j} = 0"}
        a, b = d.Y
        return {"kind": "covector", "alpha": a, "beta": b, "text": f"({a})*xi2 + ({b})*xi3 = 0"}


@dataclass
class Verdict:
    id: str
    verdict: str  # proven | verified_on_samples | violated
    witness: Any = None

    def to_dict(self) -> dict[str, Any]:
        w = self.witness
        if isinstance(w, tuple):
            w = [str(Fraction(v)) for v in w]
        return {"id": self.id, "verdict": self.verdict, "witness": w}


@dataclass
class ClassificationReport:
    name: str | None = None
    case: str | None = None
    subcase: str | None = None
    p: int | None = None
    q: int | None = None
    r: int | None = None
    threshold: Fraction | None = None
    conditions: list[Verdict] = field(default_factory=list)
    layers: list[dict[str, Any]] = field(default_factory=list)
    truncation: dict[str, int] = field(default_factory=dict)
    stages: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    error: str | None = None
    error_kind: str | None = None


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

def _push_forward(X: FieldSymbol, g: Poly) -> FieldSymbol:
    sub = {1: X1 + g}
    c1 = X.c1 - X.c2 * g.diff(2) - X.c3 * g.diff(3)
    return FieldSymbol(c1.subs(sub), X.c2.subs(sub), X.c3.subs(sub))


def apply_cov(spec: OperatorSpec, g: Poly) -> OperatorSpec:
    """Change of variables y1 = x1 - g(x'), y' = x'.

    Fields are pushed forward; the covariables transform linearly, so the
    result is again a triple of first-order symbols.  Sigma_1 = {x1 = g}
    becomes {y1 = 0}.
    """
    if g.degree(1) > 0:
        raise ValueError("g must depend on (x2, x3) only")
    if g.is_zero():
        return spec
    return spec.with_fields(*(_push_forward(X, g) for X in spec.fields))


def recenter(spec: OperatorSpec) -> OperatorSpec:
    """Move the base point to the origin and the codirection to +e3."""
    out = spec
    if any(spec.base_point):
        shift = {i + 1: Poly.var(i + 1) + spec.base_point[i] for i in range(3)}
        out = out.with_fields(*(X.map(lambda c: c.subs(shift)) for X in out.fields))
    axis, sign = spec.codirection
    if axis == 1:
        raise BasePointNotCharacteristic("codirection e1 is never characteristic when X1 = xi1")
    if axis == 2:
        swap = {2: Poly.var(3), 3: Poly.var(2)}
        out = out.with_fields(
            *(FieldSymbol(X.c1.subs(swap), X.c3.subs(swap), X.c2.subs(swap)) for X in out.fields)
        )
    if sign < 0:
        flip = {3: -Poly.var(3)}
        out = out.with_fields(
            *(FieldSymbol(X.c1.subs(flip), X.c2.subs(flip), -X.c3.subs(flip)) for X in out.fields)
        )
    return OperatorSpec(out.X1, out.X2, out.X3)


# ---------------------------------------------------------------------------
# Sigma_1 and p
# ---------------------------------------------------------------------------

def detect_sigma1(spec: OperatorSpec) -> CharManifold:
    if not spec.x1_is_standard():
        raise NotStandardX1("X1 must equal xi1 (the non-characteristic field)")
    A = xi_block(spec)
    entries = [e for row in A for e in row]
    if all(e.is_zero() for e in entries):
        raise NoCommonFactor("the xi'-block vanishes identically")
    G = gcd_in_x1(entries)
    m = G.degree(1)
    if m <= 0:
        raise NoCommonFactor("the xi'-block entries have no common factor in x1")
    parts = G.coeffs_in(1)
    lc = parts[m]
    if not lc.is_const():
        raise NonGraphFactor(f"common factor {G} is not of the form (x1 - g(x'))^m")
    G = G / lc.const_term()
    g = -parts.get(m - 1, ZERO) / lc.const_term() / m
    if (X1 - g) ** m != G:
        raise NonGraphFactor(f"common factor {G} is not a power of a graph x1 - g(x')")
    if g.const_term() != 0:
        raise BasePointNotCharacteristic(f"Sigma_1 = {{x1 = {g}}} misses the base point")
    lin = X1 - g
    tilde = map2(A, lambda e: div_exact(e, lin))
    return CharManifold(g, tilde, m)


@dataclass(frozen=True)
class PartialForm:
    spec: OperatorSpec
    p: int
    B: Matrix2


def factor_p(spec: OperatorSpec) -> tuple[int, PartialForm]:
    """p - 1 is the smallest x1-order among the four xi'-entries."""
    A = xi_block(spec)
    orders = [e.ord_var(1) for row in A for e in row]
    low = min(orders)
    if low == math.inf:
        raise InfiniteOrder("all xi'-entries vanish: the Hörmander condition fails")
    p = int(low) + 1
    B = map2(A, lambda e: e.shift_down(1, p - 1))
    return p, PartialForm(spec, p, B)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _swap_rows(pf: PartialForm) -> PartialForm:
    s = pf.spec
    return PartialForm(s.with_fields(s.X1, s.X3, s.X2), pf.p, (pf.B[1], pf.B[0]))


def _monomial_unit_split(c: Poly) -> tuple[int, int] | None:
    """If c = u * x_j^m with u(0) != 0 and m >= 1, return (j, m)."""
    if c.evaluate(ORIGIN) != 0:
        return None
    for j in (2, 3):
        m = c.ord_var(j)
        if m == math.inf or m == 0:
            continue
        if c.shift_down(j, int(m)).evaluate(ORIGIN) != 0:
            return j, int(m)
    return None


def _rank_one_split(M: Matrix2) -> tuple[tuple[Poly, Poly], tuple[Poly, Poly]]:
    """Write M = h (x) Y with Y primitive; raises NotDivisible if impossible."""
    row = M[0] if not (M[0][0].is_zero() and M[0][1].is_zero()) else M[1]
    cg = gcd_list(row)
    Y = (div_exact(row[0], cg), div_exact(row[1], cg))
    h = []
    for r in M:
        if r[0].is_zero() and r[1].is_zero():
            h.append(ZERO)
            continue
        hi = div_exact(r[0], Y[0]) if not Y[0].is_zero() else div_exact(r[1], Y[1])
        if hi * Y[0] != r[0] or hi * Y[1] != r[1]:
            raise NotDivisible("rows are not polynomial multiples of a common covector")
        h.append(hi)
    return (h[0], h[1]), Y


def _degenerate_case_I(pf: PartialForm, swapped: bool) -> StandardForm:
    M = map2(pf.B, at_x1_zero)
    if M[0][0].evaluate(ORIGIN) == 0:
        pf, swapped = _swap_rows(pf), not swapped
        M = map2(pf.B, at_x1_zero)
    alpha, lam_alpha = M[0][0], M[1][0]
    data = CaseI(alpha, lam_alpha, lam_alpha.evaluate(ORIGIN) / alpha.evaluate(ORIGIN))
    a21, a31 = pf.spec.X2.c1, pf.spec.X3.c1
    return StandardForm(pf.spec, pf.p, a21, a31, pf.B, "I", data, swapped=swapped, degenerate=True)


def classify_case(pf: PartialForm, allow_degenerate: bool = False) -> StandardForm:
    """Decide Case I / IIa / IIb from M(x') = B(0, x').

    With ``allow_degenerate`` an invertible M(0) is read as the p = q
    situation (Sigma_p already empty) and classified as Case I with q = p;
    otherwise it is an (A4) violation.
    """
    M = map2(pf.B, at_x1_zero)
    detM = det2(M)
    if detM.evaluate(ORIGIN) != 0:
        if allow_degenerate:
            return _degenerate_case_I(pf, False)
        raise A4Violated("det M(0) != 0: Sigma_p is empty near (0; e3)")
    a21, a31 = pf.spec.X2.c1, pf.spec.X3.c1
    c = gcd_list([e for row in M for e in row])
    if c.evaluate(ORIGIN) == 0:
        split = _monomial_unit_split(c)
        if split is None:
            raise NeedsCoordinateChange(f"content {c} of M vanishes at 0 but is not unit * x_j^m")
        j, m = split
        return StandardForm(pf.spec, pf.p, a21, a31, pf.B, "IIa", CaseIIa(j, m))
    if not detM.is_zero():
        raise NeedsCoordinateChange("M(x') has generic rank 2 with det M(0) = 0")
    try:
        h, Y = _rank_one_split(M)
    except NotDivisible as exc:
        raise NeedsCoordinateChange(str(exc)) from exc
    alpha, beta = Y
    if beta.evaluate(ORIGIN) != 0:
        raise A4Violated("(0; e3) does not lie on Sigma_p: beta(0) != 0")
    swapped = False
    if h[0].evaluate(ORIGIN) == 0:
        if h[1].evaluate(ORIGIN) == 0:
            raise A4Violated("h(0) = 0: Sigma_p is not a codimension-one manifold at (0; e3)")
        pf, swapped, h = _swap_rows(pf), True, (h[1], h[0])
        a21, a31 = a31, a21
        M = map2(pf.B, at_x1_zero)
    if alpha.evaluate(ORIGIN) != 0:
        if not beta.is_zero():
            raise NeedsCoordinateChange(
                f"Case I with relative equation ({alpha})*xi2 + ({beta})*xi3 = 0; "
                "straighten it to xi2 = 0 first"
            )
        lam_alpha = M[1][0]
        data = CaseI(M[0][0], lam_alpha, lam_alpha.evaluate(ORIGIN) / M[0][0].evaluate(ORIGIN))
        return StandardForm(pf.spec, pf.p, a21, a31, pf.B, "I", data, swapped=swapped)
    db2 = beta.diff(2).evaluate(ORIGIN)
    db3 = beta.diff(3).evaluate(ORIGIN)
    if db2 != 0:
        sub, norm = "b1", db2
    elif db3 != 0:
        sub, norm = "b2", db3
    else:
        raise NeedsCoordinateChange("beta has vanishing gradient at 0")
    Y = (alpha / norm, beta / norm)
    h = (h[0] * norm, h[1] * norm)
    return StandardForm(pf.spec, pf.p, a21, a31, pf.B, "IIb", CaseIIb(sub, Y, h), swapped=swapped)


def _min_order(ps: Sequence[Poly]) -> float | int:
    return min(p.ord_var(1) for p in ps)


def _iib_split(B: Matrix2, Y: tuple[Poly, Poly]) -> tuple[int | float, tuple[Poly, Poly]]:
    """Peel x1-layers of B that are multiples of Y; return (q - p, h)."""
    layers = [
        [e.coeffs_in(1) for e in row] for row in B
    ]
    top = max((max(d.keys(), default=0) for row in layers for d in row), default=0)
    h = [ZERO, ZERO]
    for k in range(top + 1):
        hk = []
        for i in range(2):
            u = layers[i][0].get(k, ZERO)
            v = layers[i][1].get(k, ZERO)
            if u.is_zero() and v.is_zero():
                hk.append(ZERO)
                continue
            if (u * Y[1] - v * Y[0]).is_zero():
                try:
                    w = div_exact(u, Y[0]) if not Y[0].is_zero() else div_exact(v, Y[1])
                except NotDivisible:
                    return k, (h[0], h[1])
                hk.append(w)
            else:
                return k, (h[0], h[1])
        for i in range(2):
            h[i] = h[i] + X1 ** k * hk[i]
    return math.inf, (h[0], h[1])


def compute_q(sf: StandardForm) -> int:
    """Recover q and verify ellipticity of the last layer at the base point."""
    d, B, p = sf.case_data, sf.B, sf.p
    if sf.degenerate:
        return p
    if isinstance(d, CaseI):
        qp = _min_order([B[0][1], B[1][1]])
        if qp == math.inf:
            raise LastLayerNotElliptic("the xi3-column vanishes: q is infinite")
        qp = int(qp)
        col = [B[0][1].shift_down(1, qp), B[1][1].shift_down(1, qp)]
        if all(c.evaluate(ORIGIN) == 0 for c in col):
            raise LastLayerNotElliptic("(a23, a33)(0) = (0, 0)")
        return p + qp
    if isinstance(d, CaseIIa):
        rest = [e.at(d.j, 0) for row in B for e in row]
        qp = _min_order(rest)
        if qp == math.inf:
            raise LastLayerNotElliptic(f"B vanishes on x{d.j} = 0: q is infinite")
        qp = int(qp)
        M = map2(B, at_x1_zero)
        T0 = map2(M, lambda e: e.shift_down(d.j, 1))
        if det2(T0).evaluate(ORIGIN) == 0:
            raise LastLayerNotElliptic("det tildeA(0) = 0")
        hat0 = [e.shift_down(1, qp).at(1, 0) for e in rest]
        if (hat0[0] * hat0[3] - hat0[1] * hat0[2]).evaluate(ORIGIN) == 0:
            raise LastLayerNotElliptic(f"det hatA = 0 at x1 = x{d.j} = 0")
        return p + qp
    if isinstance(d, CaseIIb):
        qp, _ = _iib_split(B, d.Y)
        if qp == math.inf:
            raise LastLayerNotElliptic("B is a multiple of Y to all orders: q is infinite")
        qp = int(qp)
        hat0 = [B[i][k].coeffs_in(1).get(qp, ZERO).evaluate(ORIGIN) for i in range(2) for k in range(2)]
        if hat0[0] * hat0[3] - hat0[1] * hat0[2] == 0:
            raise LastLayerNotElliptic("det hatA(0) = 0")
        return p + qp
    raise ValueError("classify_case has not been run")


def with_q(sf: StandardForm, q: int) -> StandardForm:
    """Fill in the q-dependent pieces of the case data."""
    d, B, p = sf.case_data, sf.B, sf.p
    qp = q - p
    if isinstance(d, CaseI):
        d = replace(
            d,
            a22=div_exact(B[0][0] - d.alpha, X1),
            a32=div_exact(B[1][0] - d.lam_alpha, X1),
            a23=B[0][1].shift_down(1, qp),
            a33=B[1][1].shift_down(1, qp),
        )
    elif isinstance(d, CaseIIa):
        xj = Poly.var(d.j)
        rest = map2(B, lambda e: e.at(d.j, 0))
        T = tuple(tuple(div_exact(B[i][k] - rest[i][k], xj) for k in range(2)) for i in range(2))
        hat = map2(rest, lambda e: e.shift_down(1, qp))
        d = replace(d, T=T, hatA=hat)
    elif isinstance(d, CaseIIb):
        _, h = _iib_split(B, d.Y)
        hat = tuple(
            tuple(div_exact(B[i][k] - h[i] * d.Y[k], X1 ** qp) for k in range(2)) for i in range(2)
        )
        d = replace(d, h=h, hatA=hat)
    return replace(sf, q=q, case_data=d)


# ---------------------------------------------------------------------------
# side conditions
# ---------------------------------------------------------------------------

def independence_expression(sf: StandardForm) -> Poly:
    """The quantity that must not vanish for x1 != 0.

    Case I uses alpha times the bracketed Case I expression (alpha is a unit
    near 0, so the zero sets agree there); Case IIb divides det B by
    x1^(q-p); Case IIa is det B itself.
    """
    d = sf.case_data
    detB = det2(sf.B)
    if sf.degenerate:
        return detB
    qp = sf.q - sf.p
    if isinstance(d, CaseI):
        return div_exact(detB, X1 ** qp)
    if isinstance(d, CaseIIb):
        return div_exact(detB, X1 ** qp)
    return detB


def sample_grid(n: int, half_width: Fraction = Fraction(1, 4)) -> list[Fraction]:
    if n < 2:
        return [Fraction(0)]
    w = Fraction(half_width)
    return [-w + 2 * w * k / (n - 1) for k in range(n)]


def nonvanishing_off_x1(expr: Poly, cid: str, grid: int = 11) -> Verdict:
    """Two-tier check that expr != 0 whenever x1 != 0 near the origin."""
    m = expr.ord_var(1)
    if m != math.inf:
        u = expr.shift_down(1, int(m))
        u0 = u.evaluate(ORIGIN)
        if u0 != 0:
            return Verdict(cid, "proven", f"x1^{int(m)} * u with u(0) = {u0}")
    axis = sample_grid(grid)
    for pt in product(axis, repeat=3):
        if pt[0] == 0:
            continue
        if expr.evaluate(pt) == 0:
            return Verdict(cid, "violated", pt)
    return Verdict(cid, "verified_on_samples", f"{len(axis)}^3 grid in [-1/4, 1/4]^3")


def check_th1_conditions(sf: StandardForm, grid: int = 11) -> list[Verdict]:
    d = sf.case_data
    out: list[Verdict] = []
    if isinstance(d, CaseI):
        out.append(Verdict("alpha_nonzero_at_origin", "proven", str(d.alpha.evaluate(ORIGIN))))
        col = (d.a23.evaluate(ORIGIN), d.a33.evaluate(ORIGIN))
        if sf.degenerate:
            out.append(Verdict("sigma_p_empty_p_equals_q", "proven", "det M(0) != 0"))
        else:
            out.append(Verdict("last_layer_elliptic", "proven", [str(v) for v in col]))
    elif isinstance(d, CaseIIa):
        out.append(Verdict("last_layer_elliptic", "proven",
                           f"det tildeA(0) and det hatA at x1 = x{d.j} = 0 nonzero"))
    elif isinstance(d, CaseIIb):
        out.append(Verdict("h2_nonzero_at_origin", "proven", str(d.h[0].evaluate(ORIGIN))))
        out.append(Verdict("last_layer_elliptic", "proven", "det hatA(0) != 0"))
    out.append(nonvanishing_off_x1(independence_expression(sf), "fields_independent_off_sigma1", grid))
    return out


# ---------------------------------------------------------------------------
# type index and threshold
# ---------------------------------------------------------------------------

def type_series(sf: StandardForm, trunc: int, xbar: Sequence[Fraction] = (0, 0)) -> Series1:
    """E(t) = -lam*a23(t, xbar) + a33(t, xbar) + t/alpha * det tildeA(t, xbar)."""
    d = sf.case_data
    pt = {2: Poly.const(xbar[0]), 3: Poly.const(xbar[1])}
    alpha0 = d.alpha.subs(pt).const_term()
    lam0 = d.lam_alpha.subs(pt).const_term() / alpha0
    a23 = Series1.from_poly_in_x1(d.a23.subs(pt), trunc)
    a33 = Series1.from_poly_in_x1(d.a33.subs(pt), trunc)
    det = Series1.from_poly_in_x1(det2(d.tildeA()).subs(pt), trunc)
    return a23 * (-lam0) + a33 + det.shift(1) * (1 / alpha0)


def default_trunc(sf: StandardForm) -> int:
    return 2 * (sf.q + 1)


def compute_type_r(sf: StandardForm, trunc: int | None = None) -> int:
    if sf.case != "I":
        raise ValueError("the type index is defined in Case I only")
    trunc = trunc or default_trunc(sf)
    r = series_ord(type_series(sf, trunc))
    if r == math.inf:
        raise AboveTruncation(f"E(t) vanishes to order {trunc}")
    return int(r)


def type_r_samples(sf: StandardForm, trunc: int, n: int = 5) -> dict[str, int | None]:
    """r at sampled xbar' in [-1/8, 1/8]^2 (diagnostic for uniformity)."""
    out = {}
    for xb in product(sample_grid(n, Fraction(1, 8)), repeat=2):
        if sf.case_data.alpha.evaluate((0, *xb)) == 0:
            continue
        r = series_ord(type_series(sf, trunc, xb))
        out[f"{xb[0]},{xb[1]}"] = None if r == math.inf else int(r)
    return out


def gevrey_threshold(report: ClassificationReport) -> Fraction | None:
    if report.case == "I" and report.r == 0 and report.p and report.q:
        return Fraction(report.q, report.p)
    return None


# ---------------------------------------------------------------------------
# convenience
# ---------------------------------------------------------------------------

def standard_form_of(spec: OperatorSpec, allow_degenerate: bool = True) -> StandardForm:
    """Run the reduction on a spec that is already in standard coordinates."""
    try:
        cm = detect_sigma1(spec)
        if not cm.g.is_zero():
            from .fields import NotStandardForm
            raise NotStandardForm(f"Sigma_1 is x1 = {cm.g}, not x1 = 0")
    except NoCommonFactor:
        pass
    _, pf = factor_p(spec)
    sf = classify_case(pf, allow_degenerate=allow_degenerate)
    return with_q(sf, compute_q(sf))
