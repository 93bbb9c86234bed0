"""Command line entry point: ``sosgevrey <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import estimsim
from .basisrewrite import expand_commutator, growth_constants, solve_basis
from .fields import (
    BracketWord,
    NotStandardForm,
    chain_summary,
    hormander_check,
    iterated_bracket,
    stratification,
)
from .normalform import ClassificationError
from .pipeline import (
    EXIT_OK,
    EXIT_PARSE,
    check_expectations,
    exit_code,
    report_json,
    report_text,
    run_pipeline,
    standard_form_for,
)
from .specparse import ParseError, parse_field, parse_spec


def _load(path: str):
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def cmd_classify(args) -> int:
    doc = _load(args.file)
    rep = run_pipeline(doc, trunc=args.trunc, grid=args.grid, strict=args.strict)
    print(report_text(rep))
    if args.json:
        Path(args.json).write_text(report_json(rep) + "\n", encoding="utf-8")
    return exit_code(rep)


def cmd_stratify(args) -> int:
    doc = _load(args.file)
    sf = standard_form_for(doc)
    layers = stratification(sf.spec, args.max_level, sf)
    for layer in layers:
        eq = f"  {layer.equation}" if layer.equation else ""
        print(f"Sigma_{layer.level}: {layer.status}{eq}")
    print(chain_summary(layers))
    return EXIT_OK


def cmd_bracket(args) -> int:
    doc = _load(args.file)
    word = BracketWord.parse(args.word)
    print(iterated_bracket(doc.spec, word))
    if args.hormander:
        m = hormander_check(doc.spec, max_len=args.hormander)
        print(f"hormander number at base point: {m if m else 'not reached'}")
    return EXIT_OK


def cmd_expand(args) -> int:
    doc = _load(args.file)
    sf = standard_form_for(doc)
    table = expand_commutator(sf, args.j, args.m, args.trunc)
    for (l, h), val in sorted(table.entries.items()):
        print(f"gamma[l={l}, h={h}] = {val}")
    print("growth constants: " + json.dumps(growth_constants(table)))
    return EXIT_OK


def cmd_basis(args) -> int:
    doc = _load(args.file)
    sf = standard_form_for(doc)
    target = parse_field(args.target)
    co = solve_basis(target, sf, args.trunc)
    print(f"a = {co.a}\nb = {co.b}\nc = {co.c}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    w, trace = estimsim.max_weight(args.p, args.q, args.r, args.mode)
    bound = estimsim.ceiling_bound(args.p, args.q, args.r)
    ok, bad = estimsim.verify_exponent_identities(trace)
    print(f"max weight K+L = {w} (K={trace.K}, L={trace.L}); ceil(q r / p) = {bound}")
    print(f"weight / r = {w / args.r:.4f}, q / p = {args.q / args.p:.4f}")
    print(f"exponent identities: {'ok' if ok else f'fail at step {bad}'}")
    if args.trace:
        trace.write(args.trace)
    return EXIT_OK


def _corpus_one(path: str) -> tuple[str, int, list[str], str]:
    try:
        doc = _load(path)
    except ParseError as exc:
        return path, EXIT_PARSE, [str(exc)], ""
    rep = run_pipeline(doc)
    return path, exit_code(rep), check_expectations(doc, rep), report_text(rep)


def cmd_corpus(args) -> int:
    files = sorted(str(f) for f in Path(args.dir).glob("*.op"))
    failures = 0
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for path, code, bad, _ in pool.map(_corpus_one, files):
            status = "ok" if not bad else "MISMATCH"
            failures += bool(bad)
            print(f"{status:9} exit={code} {Path(path).name}")
            for b in bad:
                print(f"          {b}")
    print(f"{len(files) - failures}/{len(files)} files match their expectations")
    return 1 if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sosgevrey", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="reduce a spec to its standard form and report")
    c.add_argument("file")
    c.add_argument("--json", help="also write the JSON report here")
    c.add_argument("--trunc", type=int, help="series truncation for the type index")
    c.add_argument("--grid", type=int, default=11, help="sample points per axis")
    c.add_argument("--strict", action="store_true", help="treat det M(0) != 0 as an error")
    c.set_defaults(fn=cmd_classify)

    s = sub.add_parser("stratify", help="print the bracket stratification")
    s.add_argument("file")
    s.add_argument("--max-level", type=int, default=8)
    s.set_defaults(fn=cmd_stratify)

    b = sub.add_parser("bracket", help="evaluate an iterated bracket")
    b.add_argument("file")
    b.add_argument("--word", required=True, help="comma separated indices, e.g. 1,1,3")
    b.add_argument("--hormander", type=int, metavar="MAXLEN", help="also report the Hörmander number")
    b.set_defaults(fn=cmd_bracket)

    e = sub.add_parser("expand", help="commutator table of X_j with d3^m")
    e.add_argument("file")
    e.add_argument("-j", type=int, required=True)
    e.add_argument("-m", type=int, required=True)
    e.add_argument("--trunc", type=int, default=8)
    e.set_defaults(fn=cmd_expand)

    r = sub.add_parser("basis", help="write a field in the X-basis")
    r.add_argument("file")
    r.add_argument("--target", required=True, help='field expression, e.g. "x1^4*D3"')
    r.add_argument("--trunc", type=int, default=8)
    r.set_defaults(fn=cmd_basis)

    m = sub.add_parser("estimate-sim", help="search the estimate rewrite system")
    m.add_argument("-p", type=int, required=True)
    m.add_argument("-q", type=int, required=True)
    m.add_argument("-r", type=int, required=True)
    m.add_argument("--mode", choices=estimsim.MODES, default="dp")
    m.add_argument("--trace", help="write the optimal derivation here")
    m.set_defaults(fn=cmd_estimate)

    k = sub.add_parser("corpus", help="classify every .op file in a directory")
    k.add_argument("dir")
    k.add_argument("--jobs", type=int, default=None)
    k.set_defaults(fn=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ClassificationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3 if exc.kind == "coordinates" else 2
    except NotStandardForm as exc:
        print(f"not in standard form: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
