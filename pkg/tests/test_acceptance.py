"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
(shown in the terminal summary) before asserting."""
from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from pathlib import Path

from conftest import ACCEPTANCE_LINES
from helpers import (
    compose,
    d3_power,
    oleinik_radkevic,
    op_add,
    op_truncate,
    rand_field,
    rand_poly,
    random_type_i0,
    standard_form,
    as_operator,
    op_scale,
)
from sosgevrey.basisrewrite import combine, expand_commutator, solve_basis
from sosgevrey.estimsim import ceiling_bound, max_weight
from sosgevrey.fields import (
    FieldSymbol,
    OperatorSpec,
    bracket,
    chain_summary,
    hormander_check,
    stratification,
)
from sosgevrey.normalform import A4Violated, apply_cov, check_th1_conditions, classify_case, factor_p
from sosgevrey.pipeline import exit_code, run_pipeline
from sosgevrey.specparse import SpecDocument, parse_spec
from sosgevrey.symcore import ONE, X1, X2, ZERO

CORPUS = Path(__file__).resolve().parents[1] / "src" / "sosgevrey" / "corpus"


def record(num: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] criterion {num}: {title} ({elapsed:.2f}s, limit {limit:g}s)"
    if detail:
        line += f" :: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, detail
    assert within, f"took {elapsed:.2f}s, limit {limit}s"


def test_criterion_1_corpus_classification():
    expected = {
        "case1_ex1_p2_q3.op": ("I", None, 2, 3, 0),
        "case1_ex1_p2_q5.op": ("I", None, 2, 5, 0),
        "case1_ex1_p3_q4.op": ("I", None, 3, 4, 0),
        "or_p2_q5.op": ("I", None, 2, 5, 0),
        "case1_ex3_p2_q4.op": ("I", None, 2, 4, 2),
        "case2a_p2_q3.op": ("IIa", "x2", 2, 3, None),
        "case2b_lambda_x3sq.op": ("IIb", "b1", 2, 4, None),
    }
    t0 = time.perf_counter()
    bad = []
    for name, want in expected.items():
        rep = run_pipeline(parse_spec((CORPUS / name).read_text()))
        got = (rep.case, rep.subcase, rep.p, rep.q, rep.r)
        if got != want or exit_code(rep) != 0:
            bad.append(f"{name}: {got} != {want}")
    record(1, "corpus classification", not bad, time.perf_counter() - t0, 5,
           "; ".join(bad) or f"{len(expected)} files exact")


def test_criterion_2_threshold():
    t0 = time.perf_counter()
    bad = []
    for p in range(1, 7):
        for q in range(p, 7):
            rep = run_pipeline(SpecDocument(oleinik_radkevic(p, q)))
            if rep.threshold != Fraction(q, p):
                bad.append(f"({p},{q}) -> {rep.threshold}")
    record(2, "threshold q/p for Oleinik-Radkevic, 1 <= p <= q <= 6", not bad,
           time.perf_counter() - t0, 5, "; ".join(bad) or "21 pairs exact")


def test_criterion_3_bracket_algebra():
    rng = random.Random(31)
    t0 = time.perf_counter()
    anti = all(bracket(F, G) == -bracket(G, F)
               for F, G in ((rand_field(rng), rand_field(rng)) for _ in range(500)))
    jac = True
    for _ in range(200):
        F, G, H = rand_field(rng), rand_field(rng), rand_field(rng)
        s = bracket(F, bracket(G, H)) + bracket(G, bracket(H, F)) + bracket(H, bracket(F, G))
        jac &= s.is_zero()
    leib = True
    for _ in range(200):
        F, G, g = rand_field(rng), rand_field(rng), rand_poly(rng)
        leib &= bracket(F, G.scale(g)) == bracket(F, G).scale(g) + G.scale(F.apply(g))
    record(3, "bracket antisymmetry / Jacobi / Leibniz", anti and jac and leib,
           time.perf_counter() - t0, 30, f"antisymmetry={anti} jacobi={jac} leibniz={leib}")


def test_criterion_4_hormander_numbers():
    t0 = time.perf_counter()
    bad = [(p, q) for q in range(1, 7) for p in range(1, q + 1)
           if hormander_check(oleinik_radkevic(p, q)) != q]
    record(4, "Hormander number equals q for q <= 6", not bad, time.perf_counter() - t0, 10,
           f"failures {bad}" if bad else "21 pairs exact")


def test_criterion_5_stratification_chain():
    t0 = time.perf_counter()
    layers = stratification(oleinik_radkevic(2, 5), 5)
    got = chain_summary(layers)
    want = "1:base 2:codim_drop 3:equal 4:equal 5:empty"
    ok = got == want and layers[1].equation == "xi2 = 0"
    record(5, "stratification chain for (2,5)", ok, time.perf_counter() - t0, 5, got)


def _commutator_direct(sf, j, m):
    X = as_operator(sf.reassemble().field(j))
    D = d3_power(m)
    return op_add(compose(X, D), compose(D, X), -1)


def _commutator_from_table(sf, table, m):
    out: dict = {}
    basis = sf.reassemble().fields
    for l in range(1, m + 1):
        for h in (1, 2, 3):
            g = table.entry(l, h)
            if not g.is_zero():
                out = op_add(out, op_scale(compose(as_operator(basis[h - 1]), d3_power(m - l)),
                                           g * math.comb(m, l)))
    return out


def test_criterion_6_basis_and_commutators():
    rng = random.Random(61)
    trunc = 8
    t0 = time.perf_counter()
    resid_ok = 0
    for _ in range(100):
        sf = standard_form(random_type_i0(rng))
        target = FieldSymbol(rand_poly(rng, 3), X1 ** (sf.p - 1) * rand_poly(rng, 3),
                             X1 ** (sf.q - 1) * rand_poly(rng, 3))
        resid = combine(solve_basis(target, sf, trunc), sf) - target
        resid_ok += resid.map(lambda e: e.truncate(trunc)).is_zero()
    table_ok = delta_ok = 0
    checks = 0
    for _ in range(20):
        sf = standard_form(random_type_i0(rng))
        for j in (1, 2, 3):
            for m in range(1, 5):
                table = expand_commutator(sf, j, m, trunc)
                checks += 1
                table_ok += (op_truncate(_commutator_direct(sf, j, m), trunc)
                             == op_truncate(_commutator_from_table(sf, table, m), trunc))
                delta_ok += all(table.entry(0, h) == (-ONE if h == j else ZERO) for h in (1, 2, 3))
    ok = resid_ok == 100 and table_ok == checks and delta_ok == checks
    record(6, "basis rewriting and commutator tables", ok, time.perf_counter() - t0, 60,
           f"residual zero {resid_ok}/100, tables {table_ok}/{checks}, gamma0=-delta {delta_ok}/{checks}")


def test_criterion_7_estimate_bound():
    t0 = time.perf_counter()
    over, short, mismatch = [], [], []
    for p in range(1, 6):
        for q in range(p, 6):
            for r in (10, 20, 40, 60):
                w = max_weight(p, q, r)[0]
                if w > ceiling_bound(p, q, r):
                    over.append((p, q, r, w))
                if r == 60 and w < 0.95 * Fraction(q, p) * r:
                    short.append(f"({p},{q}) weight {w} < 0.95*{Fraction(q, p) * r}")
    for p in range(1, 5):
        for q in range(p, 5):
            for r in (1, 2, 5, 10, 20):
                if max_weight(p, q, r)[0] != max_weight(p, q, r, "exhaustive")[0]:
                    mismatch.append((p, q, r))
    detail = (f"bound violations {over or 'none'}; dp/exhaustive mismatches {mismatch or 'none'}; "
              f"within 5% at r=60: {'all' if not short else 'missing ' + ', '.join(short)}")
    record(7, "estimate simulator bound", not over and not short and not mismatch,
           time.perf_counter() - t0, 120, detail)


def test_criterion_8_cov_functoriality():
    rng = random.Random(81)
    t0 = time.perf_counter()
    good = 0
    for _ in range(50):
        F, G = rand_field(rng), rand_field(rng)
        g = rand_poly(rng, 2, 3, (2, 3))
        moved = apply_cov(OperatorSpec(F, G, bracket(F, G)), g)
        good += moved.X3 == bracket(moved.X1, moved.X2)
    record(8, "change of variables commutes with bracket", good == 50, time.perf_counter() - t0, 30,
           f"{good}/50 exact")


def test_criterion_9_negative_controls():
    t0 = time.perf_counter()
    x1, x2 = X1, X2
    bad_spec = OperatorSpec(FieldSymbol(ONE, ZERO, ZERO),
                            FieldSymbol(ZERO, x1, x1 * x1),
                            FieldSymbol(ZERO, x1, x1 * x1 * (1 + x1 - x2)))
    verdicts = {v.id: v for v in check_th1_conditions(standard_form(bad_spec))}
    v = verdicts["fields_independent_off_sigma1"]
    witness_ok = v.verdict == "violated" and v.witness[0] != 0 and v.witness[0] == v.witness[1]
    rep = run_pipeline(SpecDocument(bad_spec))
    pipe_ok = exit_code(rep) == 2
    a4_spec = oleinik_radkevic(2, 2)
    try:
        classify_case(factor_p(a4_spec)[1])
        a4_ok = False
    except A4Violated:
        a4_ok = True
    strict = run_pipeline(SpecDocument(a4_spec), strict=True)
    a4_ok &= strict.error is not None and "A4Violated" in strict.error and exit_code(strict) == 2
    record(9, "negative controls", witness_ok and pipe_ok and a4_ok, time.perf_counter() - t0, 5,
           f"witness {tuple(str(w) for w in v.witness)} ({v.verdict}), A4Violated reported={a4_ok}")
