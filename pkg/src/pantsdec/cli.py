"""Command line interface.

Exit status: 0 on success or a true verdict, 1 on a false verdict, 2 on
malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .complex import SpecialComplex, census, default_dots, is_closed, is_even, validate
from .groups import PipelineError, parse_presentation, synthesize, verify_certificate
from .invariants import (assemble_nodal, attach_self_intersections, check_iso_criteria,
                         h1_invariants)
from .labeling import Labeling, check_admissible, euler_characteristic, even_auto_label
from .moves import classify_polygon, enumerate_admissible, normalized_form
from .tropical import (NotInPi, build_pi2_complex, classify, fiber_descriptor, pi2_project,
                       sample_fiber)

SCHEMA_VERSION = 1
OK, FALSE, BAD = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _complex(doc: dict) -> SpecialComplex:
    try:
        return SpecialComplex.from_json(doc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _labeled(doc: dict) -> tuple[SpecialComplex, Labeling]:
    X = _complex(doc)
    if "labels" not in doc:
        raise InputError("document has no 'labels' array")
    try:
        return X, Labeling.from_json(doc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def labeled_document(X: SpecialComplex, lab: Labeling) -> dict:
    doc = X.to_json()
    doc["labels"] = lab.to_json()["labels"]
    return doc


def _emit(report: dict, out: str | None) -> None:
    report = {"schema_version": SCHEMA_VERSION, **report}
    text = json.dumps(report, indent=2, sort_keys=False)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    rep = validate(_complex(_load(args.file)))
    _emit({"command": "validate", **rep.to_json()}, args.out)
    return OK if rep.ok else FALSE


def cmd_census(args) -> int:
    X = _complex(_load(args.file))
    _emit({"command": "census", "census": census(X).to_json(), "euler": euler_characteristic(X),
           "even": is_even(X), "closed": is_closed(X)}, args.out)
    return OK


def cmd_check(args) -> int:
    X, lab = _labeled(_load(args.file))
    try:
        verdict = check_admissible(X, lab)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"command": "check", **verdict.to_json()}, args.out)
    return OK if verdict.ok else FALSE


def cmd_label(args) -> int:
    X = _complex(_load(args.file))
    if not is_even(X):
        print("complex is not even; no automatic labeling", file=sys.stderr)
        return FALSE
    dots = X.dots if (X.dots and not args.default_dots) else default_dots(X)
    try:
        lab = even_auto_label(X, dots, chains=args.chains)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return FALSE
    _emit({"command": "label", **labeled_document(X.with_dots(dots), lab)}, args.out)
    return OK


def cmd_classify(args) -> int:
    X, lab = _labeled(_load(args.file))
    trace: list = []
    try:
        admissible = check_admissible(X, lab).ok
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not admissible:
        print("labeling is not admissible", file=sys.stderr)
        return FALSE
    try:
        d = classify_polygon(X, lab, trace=trace)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {"command": "classify", "raw": d.to_json(), "normalized": normalized_form(d).to_json()}
    if args.trace:
        report["trace"] = [r.to_json() for r in trace]
    else:
        report["moves"] = [{"kind": r.kind.value, "site": r.site} for r in trace]
    _emit(report, args.out)
    return OK


def cmd_invariants(args) -> int:
    doc = _load(args.file)
    X = _complex(doc)
    lab = _labeled(doc)[1] if "labels" in doc else None
    nodal = assemble_nodal(X)
    if lab is not None:
        attach_self_intersections(X, lab, nodal)
    iso = check_iso_criteria(X, nodal)
    _emit({"command": "invariants", "census": census(X).to_json(),
           "euler": euler_characteristic(X), "nodal": nodal.to_json(),
           "h1": h1_invariants(X).to_json(), "iso_criteria": iso.to_json()}, args.out)
    return OK


def cmd_synth(args) -> int:
    try:
        p = parse_presentation(args.presentation)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        cert = synthesize(p)
    except PipelineError as exc:
        print(f"pipeline failed at {exc.stage}: {exc.message}", file=sys.stderr)
        return FALSE
    doc = cert.to_json()
    text = json.dumps(doc, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        v = doc["verdicts"]
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": "synth", "out": args.out,
                          "h1": v["h1"]["complex"]["text"], "euler": v["euler"],
                          "iso_criteria": v["iso_criteria"]["verdict"]}))
    else:
        print(text)
    return OK


def cmd_verify(args) -> int:
    doc = _load(args.file)
    try:
        rep = verify_certificate(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc!r}") from exc
    _emit({"command": "verify", **rep.to_json()}, args.out)
    return OK if rep.ok else FALSE


def _point(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad point {text!r}") from exc


def cmd_tropical(args) -> int:
    if args.action == "model":
        X, dots, lab = build_pi2_complex()
        _emit({"command": "tropical model", **labeled_document(X.with_dots(dots), lab)}, args.out)
        return OK
    x = _point(args.point)
    if args.action == "classify":
        try:
            t = classify(x, args.tol)
        except NotInPi:
            _emit({"command": "tropical classify", "point": x, "in_pi": False}, args.out)
            return FALSE
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        desc = fiber_descriptor(t).to_json() if t.l <= 2 and len(x) <= 4 else None
        _emit({"command": "tropical classify", "point": x, "in_pi": True, "type": t.to_json(),
               "fiber": desc}, args.out)
        return OK
    if args.action == "project":
        try:
            y = pi2_project(x, args.tol)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        _emit({"command": "tropical project", "point": x, "image": [float(v) for v in y]}, args.out)
        return OK
    if len(x) != args.n + 2:
        raise InputError(f"--point needs {args.n + 2} coordinates for n = {args.n}")
    try:
        z = sample_fiber(x, args.count, args.tol)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow([f"{part}{i}" for i in range(len(x)) for part in ("re", "im")])
        for row in z:
            w.writerow([repr(float(v)) for c in row for v in (c.real, c.imag)])
    finally:
        if args.out:
            fh.close()
    return OK


def cmd_enumerate(args) -> int:
    rows = enumerate_admissible(args.n, args.kmax)
    _emit({"command": "enumerate", "n": args.n, "kmax": args.kmax, "count": len(rows),
           "labelings": [{"labels": [m.to_list() for m in mats], "type": d.to_json()}
                         for mats, d in rows]}, args.out)
    return OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pantsdec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file=True):
        p = sub.add_parser(name, help=help_)
        if file:
            p.add_argument("file", help="JSON document, or - for stdin")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "check the incidence structure of a complex")
    add("census", cmd_census, "vertex and edge counts by stratum, Euler characteristic")
    add("check", cmd_check, "admissibility of a labeled complex")
    p = add("label", cmd_label, "admissible labeling of an even complex")
    p.add_argument("--default-dots", action="store_true",
                   help="ignore dots stored in the document")
    p.add_argument("--chains", choices=("all", "odd"), default="all")
    p = add("classify", cmd_classify, "diffeomorphism type of a labeled polygon")
    p.add_argument("--trace", action="store_true", help="include full move snapshots")
    add("invariants", cmd_invariants, "nodal surface, H1 and the pi_1 criteria")
    p = add("synth", cmd_synth, "build a certificate for a presentation", file=False)
    p.add_argument("presentation", help='e.g. "a,b | abAB"')
    add("verify", cmd_verify, "recheck a stored certificate")
    p = add("tropical", cmd_tropical, "model geometry", file=False)
    p.add_argument("action", choices=("sample", "model", "classify", "project"))
    p.add_argument("--n", type=int, choices=(1, 2), default=1)
    p.add_argument("--point", default="1,1,0.5")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-9)
    p = add("enumerate", cmd_enumerate, "admissible polygon labelings", file=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, default=3)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return BAD if exc.code else OK
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD


if __name__ == "__main__":
    sys.exit(main())
