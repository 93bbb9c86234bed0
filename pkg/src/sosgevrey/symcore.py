"""Exact sparse polynomials in x1, x2, x3 over the rationals, plus truncated series.

Everything downstream (vector fields, normal forms, basis rewriting) is built
on :class:`Poly`.  Coefficients are :class:`fractions.Fraction`; nothing in the
package ever rounds.

Exponents are triples ``(e1, e2, e3)``; variables are numbered 1, 2, 3.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
Exponent = tuple[int, int, int]
Scalar = Union[int, Fraction]

NVARS = 3
_ZERO_EXP: Exponent = (0, 0, 0)


class AllZero(ValueError):
    """Raised when a gcd is requested of nothing but zero polynomials."""


class NotDivisible(ArithmeticError):
    """Raised by :func:`div_exact` when the division leaves a remainder."""


def _check_var(var: int) -> int:
    if var not in (1, 2, 3):
        raise ValueError(f"variable index must be 1, 2 or 3, got {var!r}")
    return var - 1


class Poly:
    """Immutable sparse polynomial in x1, x2, x3 with rational coefficients.

    Zero coefficients are never stored, so the zero polynomial has an empty
    term map and equality is plain dict equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != NVARS or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent {exp!r}")
                c = Fraction(c)
                if c:
                    clean[tuple(exp)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction]) -> "Poly":
        # caller guarantees: no zero coefficients, well-formed exponents
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({_ZERO_EXP: c})

    @classmethod
    def var(cls, i: int, power: int = 1) -> "Poly":
        k = _check_var(i)
        exp = [0, 0, 0]
        exp[k] = power
        return cls({tuple(exp): 1})

    @classmethod
    def monomial(cls, exp: Exponent, c: Scalar = 1) -> "Poly":
        return cls({tuple(exp): c})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_const(self) -> bool:
        return all(e == _ZERO_EXP for e in self._terms)

    def const_term(self) -> Fraction:
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def coeff(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def degree(self, var: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        k = _check_var(var)
        return max((e[k] for e in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def variables(self) -> set[int]:
        return {k + 1 for e in self._terms for k in range(NVARS) if e[k]}

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading term in lex order x1 > x2 > x3."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms)
        return exp, self._terms[exp]

    # -- ring operations --------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(x: "Poly | Scalar") -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as a polynomial")

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "Poly | Scalar") -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Poly._raw({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Poly":
        if isinstance(other, Poly):
            if not other.is_const():
                raise TypeError("use div_exact for polynomial division")
            other = other.const_term()
        other = Fraction(other)
        if not other:
            raise ZeroDivisionError("polynomial divided by zero")
        return Poly._raw({e: c / other for e, c in self._terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus and substitution ---------------------------------------
    def diff(self, var: int, times: int = 1) -> "Poly":
        k = _check_var(var)
        out = {}
        for e, c in self._terms.items():
            if e[k] < times:
                continue
            f = 1
            for j in range(times):
                f *= e[k] - j
            ne = list(e)
            ne[k] -= times
            out[tuple(ne)] = c * f
        return Poly._raw(out)

    def ord_var(self, var: int) -> float | int:
        """Largest m with var**m dividing self; ``math.inf`` for zero."""
        k = _check_var(var)
        if not self._terms:
            return math.inf
        return min(e[k] for e in self._terms)

    def shift_down(self, var: int, m: int) -> "Poly":
        """Divide by var**m; the division must be exact."""
        if m == 0:
            return self
        k = _check_var(var)
        out = {}
        for e, c in self._terms.items():
            if e[k] < m:
                raise NotDivisible(f"x{var}^{m} does not divide {self}")
            ne = list(e)
            ne[k] -= m
            out[tuple(ne)] = c
        return Poly._raw(out)

    def coeffs_in(self, var: int) -> dict[int, "Poly"]:
        """Split as sum_k var**k * c_k with c_k free of var."""
        k = _check_var(var)
        out: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self._terms.items():
            ne = list(e)
            d = ne[k]
            ne[k] = 0
            out.setdefault(d, {})[tuple(ne)] = c
        return {d: Poly._raw(t) for d, t in out.items()}

    def subs(self, values: Mapping[int, "Poly | Scalar"]) -> "Poly":
        """Simultaneously substitute polynomials for variables."""
        if not values:
            return self
        idx = {_check_var(v): self._coerce(p) for v, p in values.items()}
        power_cache: dict[tuple[int, int], Poly] = {}

        def pw(k: int, n: int) -> Poly:
            key = (k, n)
            if key not in power_cache:
                power_cache[key] = idx[k] ** n
            return power_cache[key]

        result = ZERO
        for e, c in self._terms.items():
            kept = [0 if k in idx else e[k] for k in range(NVARS)]
            term = Poly._raw({tuple(kept): c})
            for k in idx:
                if e[k]:
                    term = term * pw(k, e[k])
            result = result + term
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        total = Fraction(0)
        x = [Fraction(v) for v in point]
        for e, c in self._terms.items():
            total += c * x[0] ** e[0] * x[1] ** e[1] * x[2] ** e[2]
        return total

    def at(self, var: int, value: Scalar) -> "Poly":
        """Partial evaluation: set one variable to a rational value."""
        return self.subs({var: Poly.const(value)})

    def truncate(self, order: int) -> "Poly":
        """Drop every term of total degree >= order."""
        return Poly._raw({e: c for e, c in self._terms.items() if sum(e) < order})

    # -- printing ---------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        # graded lex, highest first: deterministic and readable
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                f"x{k + 1}" + (f"^{e[k]}" if e[k] > 1 else "") for k in range(NVARS) if e[k]
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            if i == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


ZERO = Poly._raw({})
ONE = Poly._raw({_ZERO_EXP: Fraction(1)})
X1, X2, X3 = Poly.var(1), Poly.var(2), Poly.var(3)


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def diff(p: Poly, var: int) -> Poly:
    return p.diff(var)


def ord_var(p: Poly, var: int) -> float | int:
    return p.ord_var(var)


# ---------------------------------------------------------------------------
# division and gcd
# ---------------------------------------------------------------------------

def divmod_poly(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Multivariate division by a single divisor in lex order.

    The remainder is zero exactly when ``b`` divides ``a``.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lb, cb = b.leading()
    q: dict[Exponent, Fraction] = {}
    r = a
    rem = ZERO
    while r:
        lr, cr = r.leading()
        if all(x >= y for x, y in zip(lr, lb)):
            e = (lr[0] - lb[0], lr[1] - lb[1], lr[2] - lb[2])
            c = cr / cb
            q[e] = q.get(e, 0) + c
            r = r - Poly._raw({e: c}) * b
        else:
            lt = Poly._raw({lr: cr})
            rem = rem + lt
            r = r - lt
    return Poly({e: c for e, c in q.items()}), rem


def div_exact(a: Poly, b: Poly) -> Poly:
    q, r = divmod_poly(a, b)
    if r:
        raise NotDivisible(f"({b}) does not divide ({a})")
    return q


def divides(b: Poly, a: Poly) -> bool:
    if b.is_zero():
        return a.is_zero()
    return divmod_poly(a, b)[1].is_zero()


def _normalize(p: Poly) -> Poly:
    """Scale so the lex-leading coefficient is 1."""
    if p.is_zero():
        return p
    return p / p.leading()[1]


def _main_var(*ps: Poly) -> int | None:
    vs: set[int] = set()
    for p in ps:
        vs |= p.variables()
    return min(vs) if vs else None


def _prem(a: Poly, b: Poly, var: int) -> Poly:
    """Pseudo-remainder of a by b as polynomials in ``var``."""
    db = b.degree(var)
    lcb = b.coeffs_in(var)[db]
    r = a
    while not r.is_zero() and r.degree(var) >= db:
        dr = r.degree(var)
        lcr = r.coeffs_in(var)[dr]
        r = r * lcb - lcr * Poly.var(var, dr - db) * b
    return r


def content_in(p: Poly, var: int) -> Poly:
    """Gcd of the coefficients of p viewed as a polynomial in ``var``."""
    g = ZERO
    for c in p.coeffs_in(var).values():
        g = gcd(g, c)
        if g == ONE:
            break
    return g


def primitive_part(p: Poly, var: int) -> Poly:
    if p.is_zero():
        return p
    return div_exact(p, content_in(p, var))


def gcd(a: Poly, b: Poly) -> Poly:
    """Gcd in Q[x1, x2, x3] by recursive primitive remainder sequences.

    Normalized so that the lex-leading coefficient is 1; gcd(0, 0) = 0.
    """
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    if a.is_const() or b.is_const():
        return ONE
    v = _main_var(a, b)
    if a.degree(v) == 0 and b.degree(v) == 0:
        # neither involves v after all; recurse on the next variable
        vs = (a.variables() | b.variables()) - {v}
        v = min(vs)
    if a.degree(v) == 0 or b.degree(v) == 0:
        # one side is free of v: the gcd divides its content
        if a.degree(v) == 0:
            a, b = b, a
        return gcd(content_in(a, v), b)
    ca, cb = content_in(a, v), content_in(b, v)
    c = gcd(ca, cb)
    f, g = div_exact(a, ca), div_exact(b, cb)
    if f.degree(v) < g.degree(v):
        f, g = g, f
    while not g.is_zero():
        r = _prem(f, g, v)
        f, g = g, (primitive_part(r, v) if not r.is_zero() else r)
        if not g.is_zero() and g.degree(v) == 0:
            # unit in Q(other vars)[v]: primitive parts are coprime
            f = ONE
            break
    h = primitive_part(f, v) if f.degree(v) > 0 else ONE
    return _normalize(c * h)


def gcd_list(ps: Iterable[Poly]) -> Poly:
    g = ZERO
    for p in ps:
        g = gcd(g, p)
    return g


def gcd_in_x1(entries: Sequence[Poly]) -> Poly:
    """Gcd of the entries in Q(x2, x3)[x1], returned primitive in x1.

    The content in (x2, x3) is stripped and the result is scaled so that its
    leading coefficient in x1 has lex-leading coefficient 1.
    """
    if all(e.is_zero() for e in entries):
        raise AllZero("gcd_in_x1 of all-zero entries")
    g = gcd_list(entries)
    if g.degree(1) <= 0:
        return ONE
    g = primitive_part(g, 1)
    lc = g.coeffs_in(1)[g.degree(1)]
    return g / lc.leading()[1]


def sign_normalize(p: Poly) -> Poly:
    return _normalize(p)


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------

def series_inverse(u: Poly, order: int) -> Poly:
    """Inverse of a unit (nonzero constant term) modulo total degree ``order``."""
    u0 = u.const_term()
    if not u0:
        raise ZeroDivisionError(f"{u} is not a unit: zero constant term")
    w = (u - u0) / u0  # u = u0 * (1 + w), w has no constant term
    inv = ONE
    term = ONE
    for _ in range(1, order):
        term = (term * -w).truncate(order)
        if term.is_zero():
            break
        inv = inv + term
    return (inv / u0).truncate(order)


def mul_trunc(a: Poly, b: Poly, order: int) -> Poly:
    return (a.truncate(order) * b.truncate(order)).truncate(order)


class Series1:
    """Univariate truncated series sum_{k<N} c_k v**k + O(v**N).

    ``var`` is a tag ('x1' or 't'); the coefficients are :class:`Poly` in the
    remaining variables.
    """

    __slots__ = ("var", "coeffs", "order")

    def __init__(self, coeffs: Sequence[Poly | Scalar], order: int, var: str = "t"):
        if var not in ("x1", "t"):
            raise ValueError("series variable must be 'x1' or 't'")
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = [Poly._coerce(c) for c in list(coeffs)[:order]]
        cs += [ZERO] * (order - len(cs))
        self.var = var
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def from_poly_in_x1(cls, p: Poly, order: int, var: str = "t") -> "Series1":
        parts = p.coeffs_in(1)
        return cls([parts.get(k, ZERO) for k in range(order)], order, var)

    def _check(self, other: "Series1") -> int:
        if self.var != other.var:
            raise ValueError("series in different variables")
        return min(self.order, other.order)

    def __add__(self, other: "Series1") -> "Series1":
        n = self._check(other)
        return Series1([self.coeffs[k] + other.coeffs[k] for k in range(n)], n, self.var)

    def __sub__(self, other: "Series1") -> "Series1":
        n = self._check(other)
        return Series1([self.coeffs[k] - other.coeffs[k] for k in range(n)], n, self.var)

    def __neg__(self) -> "Series1":
        return Series1([-c for c in self.coeffs], self.order, self.var)

    def __mul__(self, other: "Series1 | Poly | Scalar") -> "Series1":
        if not isinstance(other, Series1):
            c = Poly._coerce(other)
            return Series1([x * c for x in self.coeffs], self.order, self.var)
        n = self._check(other)
        out = [ZERO] * n
        for i in range(n):
            if self.coeffs[i].is_zero():
                continue
            for j in range(n - i):
                out[i + j] = out[i + j] + self.coeffs[i] * other.coeffs[j]
        return Series1(out, n, self.var)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Series1":
        """Multiply by v**k."""
        return Series1([ZERO] * k + list(self.coeffs), self.order, self.var)

    def inverse(self) -> "Series1":
        c0 = self.coeffs[0] if self.order else ZERO
        if not c0.is_const() or c0.is_zero():
            raise ZeroDivisionError("series inverse needs a nonzero constant leading coefficient")
        inv0 = Fraction(1) / c0.const_term()
        out = [Poly.const(inv0)]
        for k in range(1, self.order):
            acc = ZERO
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append(acc * -inv0)
        return Series1(out, self.order, self.var)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series1):
            return NotImplemented
        return (self.var, self.order, self.coeffs) == (other.var, other.order, other.coeffs)

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c})*{self.var}^{k}" for k, c in enumerate(self.coeffs) if c
        ) or "0"
        return f"Series1({body} + O({self.var}^{self.order}))"


def series_ord(s: Series1) -> float | int:
    for k, c in enumerate(s.coeffs):
        if not c.is_zero():
            return k
    return math.inf
