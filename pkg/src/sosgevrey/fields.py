"""First-order symbols c1*xi1 + c2*xi2 + c3*xi3, their brackets, and the
Hörmander / stratification checks built on iterated brackets.

For symbols linear in xi the Poisson bracket is the symbol of the commutator
of the vector fields, so :func:`bracket` is implemented as the commutator
``[F, G]`` acting on functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .symcore import ONE, ZERO, Poly, Scalar


class NotStandardForm(ValueError):
    pass


@dataclass(frozen=True)
class FieldSymbol:
    c1: Poly = ZERO
    c2: Poly = ZERO
    c3: Poly = ZERO

    @property
    def coeffs(self) -> tuple[Poly, Poly, Poly]:
        return (self.c1, self.c2, self.c3)

    def coeff(self, i: int) -> Poly:
        return self.coeffs[i - 1]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other: "FieldSymbol") -> "FieldSymbol":
        return FieldSymbol(*(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldSymbol") -> "FieldSymbol":
        return FieldSymbol(*(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldSymbol":
        return FieldSymbol(*(-a for a in self.coeffs))

    def scale(self, a: Poly | Scalar) -> "FieldSymbol":
        return FieldSymbol(*(c * a for c in self.coeffs))

    def apply(self, f: Poly) -> Poly:
        """The field acting on a function as a derivation."""
        return self.c1 * f.diff(1) + self.c2 * f.diff(2) + self.c3 * f.diff(3)

    def diff(self, var: int, times: int = 1) -> "FieldSymbol":
        """Coefficient-wise partial derivative."""
        return FieldSymbol(*(c.diff(var, times) for c in self.coeffs))

    def map(self, fn) -> "FieldSymbol":
        return FieldSymbol(*(fn(c) for c in self.coeffs))

    def evaluate(self, point: Sequence[Scalar]) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(c.evaluate(point) for c in self.coeffs)

    def __str__(self) -> str:
        parts = [f"({c})*xi{i}" for i, c in enumerate(self.coeffs, 1) if c]
        return " + ".join(parts) or "0"


XI1 = FieldSymbol(ONE, ZERO, ZERO)
XI2 = FieldSymbol(ZERO, ONE, ZERO)
XI3 = FieldSymbol(ZERO, ZERO, ONE)


@dataclass(frozen=True)
class BracketWord:
    indices: tuple[int, ...]

    def __post_init__(self):
        if not self.indices or any(i not in (1, 2, 3) for i in self.indices):
            raise ValueError(f"bad bracket word {self.indices!r}")

    def __len__(self) -> int:
        return len(self.indices)

    @classmethod
    def parse(cls, text: str) -> "BracketWord":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))


@dataclass(frozen=True)
class OperatorSpec:
    X1: FieldSymbol
    X2: FieldSymbol
    X3: FieldSymbol
    base_point: tuple[Fraction, Fraction, Fraction] = (Fraction(0), Fraction(0), Fraction(0))
    codirection: tuple[int, int] = (3, 1)  # (axis, sign): e3 by default

    @property
    def fields(self) -> tuple[FieldSymbol, FieldSymbol, FieldSymbol]:
        return (self.X1, self.X2, self.X3)

    def field(self, j: int) -> FieldSymbol:
        return self.fields[j - 1]

    def with_fields(self, X1, X2, X3) -> "OperatorSpec":
        return OperatorSpec(X1, X2, X3, self.base_point, self.codirection)

    def x1_is_standard(self) -> bool:
        return self.X1 == XI1


def bracket(F: FieldSymbol, G: FieldSymbol) -> FieldSymbol:
    """Commutator [F, G]: component i is F(G.c_i) - G(F.c_i)."""
    return FieldSymbol(*(F.apply(g) - G.apply(f) for f, g in zip(F.coeffs, G.coeffs)))


def iterated_bracket(spec: OperatorSpec, word: BracketWord | Sequence[int]) -> FieldSymbol:
    """Right-nested bracket {X_i1, {X_i2, ..., {X_ik-1, X_ik}...}}."""
    idx = word.indices if isinstance(word, BracketWord) else tuple(word)
    if not idx:
        raise ValueError("empty bracket word")
    out = spec.field(idx[-1])
    for i in reversed(idx[:-1]):
        out = bracket(spec.field(i), out)
    return out


def brackets_by_length(spec: OperatorSpec, max_len: int) -> list[list[FieldSymbol]]:
    """Distinct symbols X_I grouped by |I| = 1..max_len (zero symbols dropped).

    Uses X_{(i, I')} = {X_i, X_I'} so each level is built from the previous
    one; duplicates are collapsed, which keeps the levels small.
    """
    levels: list[list[FieldSymbol]] = []
    current = list(dict.fromkeys(f for f in spec.fields if not f.is_zero()))
    for length in range(1, max_len + 1):
        if length > 1:
            nxt = []
            for inner in current:
                for X in spec.fields:
                    b = bracket(X, inner)
                    if not b.is_zero():
                        nxt.append(b)
            current = list(dict.fromkeys(nxt))
        levels.append(current)
    return levels


# -- exact linear algebra over Q ------------------------------------------

def rank(vectors: Iterable[Sequence[Fraction]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                f = rows[i][col] / rows[rk][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rk])]
        rk += 1
    return rk


@dataclass
class HormanderFail:
    span_dim: int
    max_len: int

    def __bool__(self) -> bool:
        return False


def hormander_check(spec: OperatorSpec, point: Sequence[Scalar] | None = None,
                    max_len: int = 8) -> int | HormanderFail:
    """Smallest m <= max_len such that the X_I with |I| <= m span R^3 at point."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    pt = tuple(Fraction(v) for v in (point if point is not None else spec.base_point))
    vecs: list[tuple[Fraction, ...]] = []
    dim = 0
    for m, level in enumerate(brackets_by_length(spec, max_len), 1):
        vecs.extend(f.evaluate(pt) for f in level)
        dim = rank(vecs)
        if dim == 3:
            return m
    return HormanderFail(dim, max_len)


def hormander_grid(spec: OperatorSpec, n: int = 5, half_width: Fraction = Fraction(1, 4),
                   max_len: int = 8) -> dict[str, object]:
    """Run :func:`hormander_check` on an n**3 grid in [-w, w]^3."""
    if n < 1:
        raise ValueError("grid needs at least one point per axis")
    w = Fraction(half_width)
    axis = [Fraction(0)] if n == 1 else [-w + 2 * w * k / (n - 1) for k in range(n)]
    results = {}
    worst = 0
    failures = []
    for pt in product(axis, repeat=3):
        m = hormander_check(spec, pt, max_len)
        if isinstance(m, HormanderFail):
            failures.append(pt)
        else:
            worst = max(worst, m)
            results[pt] = m
    return {"points": len(axis) ** 3, "max_length": worst, "failures": failures}


# -- stratification --------------------------------------------------------

@dataclass
class StratumLayer:
    level: int
    status: str  # "base" | "equal" | "codim_drop" | "empty"
    equation: str | None = None
    generators: list[tuple[Poly, Poly]] = field(default_factory=list)

    def to_dict(self) -> dict[str, object]:
        return {"level": self.level, "status": self.status, "equation": self.equation}


def restrict_to_sigma1(X: FieldSymbol) -> tuple[Poly, Poly]:
    """(xi2, xi3) coefficients of X on {x1 = 0, xi1 = 0}, as polynomials in x'."""
    return (X.c2.at(1, 0), X.c3.at(1, 0))


def _vanishes_on_layer(v: tuple[Poly, Poly], layer) -> bool:
    kind = layer["kind"]
    if kind == "graph_x":  # layer {x_j = 0}
        j = layer["j"]
        return v[0].at(j, 0).is_zero() and v[1].at(j, 0).is_zero()
    # layer {alpha*xi2 + beta*xi3 = 0}: v must be parallel to (alpha, beta)
    alpha, beta = layer["alpha"], layer["beta"]
    return (v[0] * beta - v[1] * alpha).is_zero()


def stratification(spec: OperatorSpec, max_level: int, sf=None) -> list[StratumLayer]:
    """Layer-by-layer description of Sigma_1 ⊇ Sigma_2 ⊇ ... near (0; e3).

    Generators of each level are the brackets of that length restricted to
    ``{x1 = 0, xi1 = 0}``.  After the first codimension drop the relative
    equation of Sigma_p (read off the normal form ``sf``) is substituted to
    decide equality; emptiness means some generator has a nonzero xi3
    coefficient at the origin.
    """
    if sf is None:
        from .normalform import standard_form_of
        sf = standard_form_of(spec)
    if not spec.x1_is_standard():
        raise NotStandardForm("X1 must equal xi1")
    for X in spec.fields[1:]:
        for c in (X.c2, X.c3):
            if not c.at(1, 0).is_zero():
                if sf.p > 1:
                    raise NotStandardForm("Sigma_1 is not {x1 = 0} in these coordinates")
    layer_eq = sf.sigma_p_layer()
    out: list[StratumLayer] = []
    dropped = False
    emptied = False
    origin = (0, 0, 0)
    for h, level in enumerate(brackets_by_length(spec, max_level), 1):
        gens = [restrict_to_sigma1(X) for X in level]
        gens = [g for g in gens if not (g[0].is_zero() and g[1].is_zero())]
        if emptied:
            out.append(StratumLayer(h, "empty", None, gens))
            continue
        if any(g[1].evaluate(origin) != 0 for g in gens):
            emptied = True
            out.append(StratumLayer(h, "empty", "zero section", gens))
            continue
        if not gens:
            out.append(StratumLayer(h, "base" if not dropped else "equal", None, gens))
            continue
        if not dropped:
            if layer_eq is None or not all(_vanishes_on_layer(g, layer_eq) for g in gens):
                raise NotStandardForm(f"level {h}: generators do not cut out the expected layer")
            dropped = True
            out.append(StratumLayer(h, "codim_drop", layer_eq["text"], gens))
            continue
        if all(_vanishes_on_layer(g, layer_eq) for g in gens):
            out.append(StratumLayer(h, "equal", None, gens))
        else:
            # a further drop: not one of the admissible chains
            out.append(StratumLayer(h, "codim_drop", "extra", gens))
    return out


def chain_summary(layers: Sequence[StratumLayer]) -> str:
    return " ".join(f"{l.level}:{l.status}" for l in layers)
