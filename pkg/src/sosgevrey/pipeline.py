"""Drive the reduction stages on a parsed spec and collect a report."""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import metadata
from typing import Any

from . import normalform as nf
from .fields import NotStandardForm, hormander_check, stratification
from .specparse import SpecDocument

STAGES = (
    "recenter",
    "detect_sigma1",
    "apply_cov",
    "factor_p",
    "classify_case",
    "compute_q",
    "check_th1_conditions",
    "compute_type_r",
    "gevrey_threshold",
    "stratification",
)

EXIT_OK, EXIT_ASSUMPTION, EXIT_COORDINATES, EXIT_PARSE = 0, 2, 3, 4

_ASSUMPTION_HINT = {
    "NotStandardX1": "A1",
    "NoCommonFactor": "A2",
    "NonGraphFactor": "A2",
    "BasePointNotCharacteristic": "A2",
    "InfiniteOrder": "A3",
    "A4Violated": "A4",
    "LastLayerNotElliptic": "A4",
}


def versions() -> dict[str, str]:
    try:
        v = metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - running from a checkout
        v = "0.0.0"
    return {"artifact": v, "report_schema": "1"}


def run_pipeline(doc: SpecDocument, trunc: int | None = None, grid: int = 11,
                 strict: bool = False, max_level: int | None = None) -> nf.ClassificationReport:
    """Run every stage in order; the first hard error marks the rest skipped.

    With ``strict`` an invertible M(0) is an (A4) violation.  Otherwise it is
    read as the degenerate p = q situation and classified as Case I.
    """
    rep = nf.ClassificationReport(name=doc.name)
    state: dict[str, Any] = {}

    def stage(name: str, fn) -> bool:
        if rep.error is not None:
            rep.stages[name] = "skipped"
            return False
        try:
            fn()
        except nf.ClassificationError as exc:
            rep.error = f"{name}: {type(exc).__name__}: {exc}"
            rep.error_kind = exc.kind
            hint = _ASSUMPTION_HINT.get(type(exc).__name__)
            if hint:
                rep.notes.append(f"assumption {hint} fails")
            rep.stages[name] = f"failed ({type(exc).__name__})"
            return False
        rep.stages.setdefault(name, "ok")
        return True

    def s_recenter():
        state["spec"] = nf.recenter(doc.spec)

    def s_detect():
        try:
            state["cm"] = nf.detect_sigma1(state["spec"])
        except nf.NoCommonFactor:
            # no x1-factor at all: p = 1 with Sigma_1 = {x1 = 0} taken as given
            state["cm"] = None
            rep.stages["detect_sigma1"] = "ok (no common factor: p = 1)"

    def s_cov():
        cm = state["cm"]
        if cm is not None and not cm.g.is_zero():
            state["spec"] = nf.apply_cov(state["spec"], cm.g)
            rep.notes.append(f"changed variables y1 = x1 - ({cm.g})")

    def s_factor():
        p, state["pf"] = nf.factor_p(state["spec"])
        rep.p = p

    def s_classify():
        sf = nf.classify_case(state["pf"], allow_degenerate=not strict)
        state["sf"] = sf
        rep.case, rep.subcase = sf.case, sf.subcase
        if sf.swapped:
            rep.notes.append("X2 and X3 swapped so that X2 carries the xi2 direction at 0")
        if sf.degenerate:
            rep.notes.append("det M(0) != 0: Sigma_p is already empty, read as q = p")

    def s_q():
        sf = state["sf"]
        q = nf.compute_q(sf)
        state["sf"] = nf.with_q(sf, q)
        rep.q = q

    def s_conditions():
        rep.conditions = nf.check_th1_conditions(state["sf"], grid)

    def s_type():
        sf = state["sf"]
        if sf.case != "I":
            rep.stages["compute_type_r"] = "n/a (not Case I)"
            return
        n = trunc or nf.default_trunc(sf)
        rep.truncation["type_series"] = n
        try:
            rep.r = nf.compute_type_r(sf, n)
        except nf.AboveTruncation as exc:
            rep.stages["compute_type_r"] = f"unknown ({exc})"
            return
        samples = nf.type_r_samples(sf, n)
        if any(v != rep.r for v in samples.values()):
            rep.notes.append(f"type index varies with x-bar': {samples}")

    def s_threshold():
        rep.threshold = nf.gevrey_threshold(rep)

    def s_strat():
        sf = state["sf"]
        h = max_level or (rep.q or sf.p) + 1
        try:
            layers = stratification(state["spec"], h, sf)
        except NotStandardForm as exc:
            rep.stages["stratification"] = f"unavailable ({exc})"
            return
        rep.layers = [layer.to_dict() for layer in layers]

    for name, fn in zip(STAGES, (s_recenter, s_detect, s_cov, s_factor, s_classify, s_q,
                                 s_conditions, s_type, s_threshold, s_strat)):
        stage(name, fn)
    return rep


def exit_code(rep: nf.ClassificationReport) -> int:
    if rep.error_kind == "coordinates":
        return EXIT_COORDINATES
    if rep.error is not None:
        return EXIT_ASSUMPTION
    if any(c.verdict == "violated" for c in rep.conditions):
        return EXIT_ASSUMPTION
    return EXIT_OK


def _frac(x: Fraction | None) -> dict[str, int] | None:
    return None if x is None else {"num": x.numerator, "den": x.denominator}


def report_dict(rep: nf.ClassificationReport) -> dict[str, Any]:
    return {
        "name": rep.name,
        "case": rep.case,
        "subcase": rep.subcase,
        "p": rep.p,
        "q": rep.q,
        "r": rep.r,
        "threshold": _frac(rep.threshold),
        "conditions": [c.to_dict() for c in rep.conditions],
        "layers": rep.layers,
        "truncation": rep.truncation,
        "stages": rep.stages,
        "notes": rep.notes,
        "error": rep.error,
        "versions": versions(),
    }


def report_json(rep: nf.ClassificationReport) -> str:
    return json.dumps(report_dict(rep), sort_keys=True, indent=2)


def report_text(rep: nf.ClassificationReport) -> str:
    thr = "unknown" if rep.threshold is None else str(rep.threshold)
    lines = [
        f"name:      {rep.name or '-'}",
        f"case:      {rep.case or '-'}{'' if not rep.subcase else ' (' + rep.subcase + ')'}",
        f"p, q:      {rep.p}, {rep.q}",
        f"type r:    {'-' if rep.r is None else rep.r}",
        f"threshold: {thr}",
    ]
    for c in rep.conditions:
        lines.append(f"condition {c.id}: {c.verdict}" + (f" [{c.witness}]" if c.witness is not None else ""))
    if rep.layers:
        lines.append("layers:    " + " ".join(f"{l['level']}:{l['status']}" for l in rep.layers))
    for n in rep.notes:
        lines.append(f"note:      {n}")
    if rep.error:
        lines.append(f"error:     {rep.error}")
    return "\n".join(lines)


def check_expectations(doc: SpecDocument, rep: nf.ClassificationReport) -> list[str]:
    """Mismatches between declared ``expect:`` values and the report."""
    got = {
        "case": rep.case,
        "subcase": rep.subcase,
        "p": rep.p,
        "q": rep.q,
        "r": rep.r,
        "threshold": rep.threshold,
        "exit": exit_code(rep),
    }
    bad = []
    for key, want in doc.expect.items():
        have = got.get(key)
        if key == "threshold":
            ok = (have is None and want == "unknown") or (have is not None and want != "unknown"
                                                          and Fraction(want) == have)
        elif key in ("p", "q", "r", "exit"):
            ok = (have is None and want == "unknown") or (have is not None and str(have) == want)
        else:
            ok = str(have) == want
        if not ok:
            bad.append(f"{key}: expected {want}, got {have}")
    return bad


def hormander_line(doc: SpecDocument) -> str:
    m = hormander_check(doc.spec)
    return f"hormander: {m}" if m else f"hormander: fails (span {m.span_dim} up to length {m.max_len})"


def standard_form_for(doc: SpecDocument) -> nf.StandardForm:
    """Standard form of a document after recentering and straightening Sigma_1."""
    spec = nf.recenter(doc.spec)
    try:
        cm = nf.detect_sigma1(spec)
        spec = nf.apply_cov(spec, cm.g)
    except nf.NoCommonFactor:
        pass
    return nf.standard_form_of(spec)
