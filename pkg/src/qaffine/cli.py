"""Command line interface: expression commands, verification sweeps, the
R-token cocycle and presentation export.

Exit codes: 0 on success or all checks passing, 1 when a verification sweep
reports failures (or an internal consistency check trips), 2 on usage or
syntax errors.  All output is deterministic for a fixed command line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bicross, rcalc
from .errors import ConsistencyError, ParseError, SearchExhaustedError, StructureError
from .formatting import (
    format_poly,
    format_scalar,
    format_tensor,
    format_word,
    poly_to_json,
    scalar_to_json,
    tensor_to_json,
)
from .hopf import antipode, coproduct, counit, verify_hopf
from .ncalg import local_confluence_report, word_degree
from .parser import parse_expression
from .presentations import builtin_presentation, export_presentation, load_presentation
from .qscalar import ONE


def _resolve_presentation(name_or_path):
    try:
        return builtin_presentation(name_or_path)
    except LookupError:
        path = Path(name_or_path)
        if path.exists():
            return load_presentation(json.loads(path.read_text()))
        raise


def _emit(args, text, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _ext_sort_key(item):
    (m, w), _ = item
    return (abs(m) + word_degree(w), m, w)


def _format_ext(x):
    if not x.terms:
        return "0"
    parts = []
    for (m, w), c in sorted(x.terms.items(), key=_ext_sort_key):
        cw = "1" if m == 0 else ("c" if m == 1 else f"c^{m}")
        body = f"{cw} (x) {format_word(w)}"
        if c == ONE:
            parts.append(body)
        elif c == -ONE:
            parts.append(f"-{body}")
        else:
            parts.append(f"{format_scalar(c)}*{body}")
    out = []
    for t in parts:
        if not out:
            out.append(t)
        elif t.startswith("-"):
            out.append(f" - {t[1:]}")
        else:
            out.append(f" + {t}")
    return "".join(out)


def _ext_to_json(x):
    return {
        "type": "ext",
        "terms": [
            {"coeff": format_scalar(c), "c": m, "word": format_word(w)}
            for (m, w), c in sorted(x.terms.items(), key=_ext_sort_key)
        ],
    }


def _format_ext_tensor(t):
    if not t.terms:
        return "0"
    parts = []
    for legs, c in sorted(t.terms.items(), key=lambda kv: tuple(map(repr, kv[0]))):
        body = " (x) ".join(
            f"({'1' if m == 0 else ('c' if m == 1 else f'c^{m}')} (x) {format_word(w)})"
            for m, w in legs
        )
        prefix = "" if c == ONE else ("-" if c == -ONE else f"{format_scalar(c)}*")
        parts.append(prefix + body)
    out = []
    for text in parts:
        if not out:
            out.append(text)
        elif text.startswith("-"):
            out.append(f" - {text[1:]}")
        else:
            out.append(f" + {text}")
    return "".join(out)


def _ext_tensor_to_json(t):
    return {
        "type": "ext_tensor",
        "terms": [
            {
                "coeff": format_scalar(c),
                "legs": [{"c": m, "word": format_word(w)} for m, w in legs],
            }
            for legs, c in sorted(t.terms.items(), key=lambda kv: tuple(map(repr, kv[0])))
        ],
    }


def _parse_ext_part(args, c_text, h_text):
    cz = builtin_presentation("cz")
    loop = builtin_presentation("loop")
    a = bicross.CZElement.from_poly(parse_expression(c_text, cz))
    h = parse_expression(h_text, loop)
    return bicross.ExtElement.from_parts(a, h)


def build_parser():
    top = argparse.ArgumentParser(
        prog="qaffine",
        description="Exact symbolic engine for the central-extension structure "
        "of the q-deformed affine sl2 algebra.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, pres_default="affine_new"):
        p.add_argument("--presentation", default=pres_default,
                       help="builtin name or presentation JSON path")
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("norm", help="normal-order an expression")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("mul", help="product of two expressions")
    p.add_argument("left")
    p.add_argument("right")
    common(p)

    p = sub.add_parser("coprod", help="coproduct of an expression")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("counit", help="counit of an expression")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("antipode", help="antipode of an expression")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("jmap", help="section j: loop -> affine_new")
    p.add_argument("expr")
    common(p, "loop")

    p = sub.add_parser("beta", help="grading coaction: loop -> loop (x) CZ")
    p.add_argument("expr")
    common(p, "loop")

    p = sub.add_parser("cocycle", help="quantum 2-cocycle chi of two loop elements")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--method", choices=["direct", "jinv"], default="direct")
    p.add_argument("--inverse", action="store_true", help="compute chi^-1 instead")
    common(p, "loop")

    p = sub.add_parser("extmul", help="product in the extension CZ (x) loop")
    p.add_argument("--left-c", default="1")
    p.add_argument("--left-h", required=True)
    p.add_argument("--right-c", default="1")
    p.add_argument("--right-h", required=True)
    common(p, "loop")

    p = sub.add_parser("extcoprod", help="cross coproduct of a (c-part, loop-part) pair")
    p.add_argument("--c", default="1")
    p.add_argument("--h", required=True)
    common(p, "loop")

    p = sub.add_parser("verify", help="exhaustive verification sweeps")
    p.add_argument("check", choices=["hopf", "cocycle", "ext", "iso", "confluence"])
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--basis-degree", type=int, default=None,
                   help="basis bijectivity bound for iso (default degree+1)")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("rcalc", help="R-matrix token calculus")
    rsub = p.add_subparsers(dest="rcommand", required=True)
    rc = rsub.add_parser("cocycle", help="chi on sign-pure matrix-generator words")
    rc.add_argument("--minus", type=int, required=True, help="number of m^- tokens")
    rc.add_argument("--plus", type=int, required=True, help="number of m^+ tokens")
    rc.add_argument("--labels", default=None, help="comma-separated spectral labels")
    rc.add_argument("--method", choices=["direct", "closed"], default="closed")
    rc.add_argument("--order", choices=["mp", "pm"], default="mp",
                    help="mp: chi(minus (x) plus); pm: chi(plus (x) minus)")
    rc.add_argument("--depth", type=int, default=12)
    rc.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("presentation", help="presentation inspection")
    psub = p.add_subparsers(dest="pcommand", required=True)
    pe = psub.add_parser("export", help="dump a builtin presentation as JSON")
    pe.add_argument("name")
    pe.add_argument("--format", choices=["text", "json"], default="json")

    return top


_VERIFY_DEFAULTS = {"hopf": 4, "cocycle": 3, "ext": 3, "iso": 3, "confluence": 4}


def _run_verify(args):
    degree = args.degree
    if degree is None:
        degree = _VERIFY_DEFAULTS[args.check]
    if args.check == "hopf":
        pres = _resolve_presentation(args.presentation)
        report = verify_hopf(pres, degree)
    elif args.check == "confluence":
        pres = _resolve_presentation(args.presentation)
        report = local_confluence_report(pres, degree)
    elif args.check == "cocycle":
        report = bicross.verify_cocycle_condition(degree)
    elif args.check == "ext":
        report = bicross.verify_ext_compatibility(degree, seed=args.seed)
    else:
        report = bicross.verify_isomorphism(
            degree, basis_degree=args.basis_degree, seed=args.seed
        )
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.ok else 1


def _run_rcalc(args):
    n, m = args.minus, args.plus
    if n < 0 or m < 0:
        raise ValueError("--minus and --plus must be nonnegative")
    if args.labels:
        labels = [s.strip() for s in args.labels.split(",")]
        if len(labels) != n + m:
            raise ValueError(f"expected {n + m} labels, got {len(labels)}")
    else:
        labels = [f"z{i + 1}" for i in range(n + m)]
    minus = rcalc.m_word([(-1, i + 1, labels[i]) for i in range(n)])
    plus = rcalc.m_word([(1, n + i + 1, labels[n + i]) for i in range(m)])
    left, right = (minus, plus) if args.order == "mp" else (plus, minus)
    if args.method == "direct":
        tokens = rcalc.rc_cocycle_direct(left, right, max_depth=args.depth)
    else:
        tokens = rcalc.rc_cocycle_closed(left, right)
    if args.format == "json":
        print(json.dumps([t.to_json() for t in tokens], indent=2))
    else:
        print(" ".join(t.text() for t in tokens) if tokens else "identity")
    return 0


def dispatch(argv):
    """Run one command line; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return _dispatch_command(args)
    except (ParseError, StructureError, LookupError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ConsistencyError, SearchExhaustedError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def _dispatch_command(args):
    cmd = args.command
    if cmd == "verify":
        return _run_verify(args)
    if cmd == "rcalc":
        return _run_rcalc(args)
    if cmd == "presentation":
        data = export_presentation(builtin_presentation(args.name))
        print(json.dumps(data, indent=2))
        return 0

    if cmd in ("norm", "mul", "coprod", "counit", "antipode"):
        pres = _resolve_presentation(args.presentation)
        if cmd == "norm":
            p = parse_expression(args.expr, pres)
            _emit(args, format_poly(p), poly_to_json(p))
        elif cmd == "mul":
            p = parse_expression(args.left, pres) * parse_expression(args.right, pres)
            _emit(args, format_poly(p), poly_to_json(p))
        elif cmd == "coprod":
            t = coproduct(parse_expression(args.expr, pres), pres)
            _emit(args, format_tensor(t), tensor_to_json(t))
        elif cmd == "counit":
            s = counit(parse_expression(args.expr, pres), pres)
            _emit(args, format_scalar(s), scalar_to_json(s))
        else:
            p = antipode(parse_expression(args.expr, pres), pres)
            _emit(args, format_poly(p), poly_to_json(p))
        return 0

    loop = builtin_presentation("loop")
    if cmd == "jmap":
        p = bicross.section_j(parse_expression(args.expr, loop))
        _emit(args, format_poly(p), poly_to_json(p))
        return 0
    if cmd == "beta":
        t = bicross.coaction_beta(parse_expression(args.expr, loop))
        _emit(args, format_tensor(t), tensor_to_json(t))
        return 0
    if cmd == "cocycle":
        h = parse_expression(args.left, loop)
        g = parse_expression(args.right, loop)
        if args.inverse:
            v = bicross.chi_conv_inverse(h, g)
        else:
            v = bicross.cocycle_chi(h, g, method=args.method)
        p = v.to_poly()
        _emit(args, format_poly(p), poly_to_json(p))
        return 0
    if cmd == "extmul":
        x = _parse_ext_part(args, args.left_c, args.left_h)
        y = _parse_ext_part(args, args.right_c, args.right_h)
        prod = bicross.ext_product(x, y)
        _emit(args, _format_ext(prod), _ext_to_json(prod))
        return 0
    if cmd == "extcoprod":
        x = _parse_ext_part(args, args.c, args.h)
        t = bicross.ext_coproduct(x)
        _emit(args, _format_ext_tensor(t), _ext_tensor_to_json(t))
        return 0
    raise ValueError(f"unhandled command {cmd!r}")


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
