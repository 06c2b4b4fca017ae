"""Command-line front end.

Exit statuses::

    0  success (reproduce: no mismatching cell)
    1  reproduce found a mismatching cell
    2  usage error, unparsable input, unknown table id
    3  bracket of a non-homogeneous expression
    4  structure is not square-zero (witness on stderr), or is zero
    5  classify given a structure with several components

A STRUCTURE argument is a JSON structure file, a cochain expression (components
of different degrees separated by ";"), or a
family name (d_0, d_star, d_infty, d_lambda, d_sharp, d_lambda_e,
d_infty_ext) completed by --m, --n, --lambda and --a.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import families, structfile, tables
from .cochains import HomogeneityError, ParseError, format_cochain, format_rational, parse_cochain
from .coderivation import LInfinityStructure, bracket, is_codifferential
from .cohomology import cohomology, filtered_cohomology
from .graded import SPACE_1_2

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INHOMOGENEOUS, EXIT_NOT_SQUARE_ZERO, EXIT_SEVERAL = 0, 1, 2, 3, 4, 5

VALUE_FLAGS = ("--lambda", "--a", "--m")

FAMILY_NAMES = ("d_0", "d_star", "d_infty", "d_lambda", "d_sharp", "d_lambda_e", "d_infty_ext")


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _parse(text: str):
    try:
        return parse_cochain(text)
    except (ParseError, HomogeneityError) as exc:
        status = EXIT_INHOMOGENEOUS if isinstance(exc, HomogeneityError) else EXIT_USAGE
        raise CliError(str(exc), status) from None


def load_structure(source: str, args) -> LInfinityStructure:
    m = args.m if args.m is not None else 0
    try:
        if source in FAMILY_NAMES:
            if source == "d_lambda_e":
                return _extension("build_d_lambda_e", m, args)
            if source == "d_infty_ext":
                return _extension("build_d_infty_ext", m, args, args.a)
            if source == "d_lambda" and args.lam is None:
                raise CliError("d_lambda needs --lambda", EXIT_USAGE)
            return families.structure(families.family(source, m, args.lam))
        path = Path(source)
        if source.endswith(".json") or path.is_file():
            return structfile.load(path)
    except (structfile.StructureFileError, OSError, ValueError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    comps = {}
    for part in source.split(";"):
        c = _parse(part)
        if not c.is_zero:
            comps[c.degree] = comps[c.degree] + c if c.degree in comps else c
    return LInfinityStructure(SPACE_1_2, comps)


def _extension(builder: str, m: int, args, a=None) -> LInfinityStructure:
    from . import extensions

    if args.n is None:
        raise CliError("extension families need --n", EXIT_USAGE)
    fn = getattr(extensions, builder)
    return fn(m, args.n) if a is None else fn(m, args.n, a)


def _require_codifferential(d: LInfinityStructure) -> None:
    if d.is_zero:
        raise CliError("the zero structure has no leading term", EXIT_NOT_SQUARE_ZERO)
    ok, witness = is_codifferential(d)
    if not ok:
        raise CliError(f"not square-zero; [d,d] has the component {format_cochain(witness)}", EXIT_NOT_SQUARE_ZERO)


# -- subcommands ---------------------------------------------------------------


def cmd_bracket(args) -> int:
    a = _parse(args.a_expr)
    b = _parse(args.b_expr) if args.b_expr is not None else a
    try:
        out = bracket(a, b)
    except HomogeneityError as exc:
        raise CliError(str(exc), EXIT_INHOMOGENEOUS) from None
    _emit(args, {"bracket": format_cochain(out)}, format_cochain(out))
    return EXIT_OK


def cmd_check(args) -> int:
    d = load_structure(args.structure, args)
    if d.is_zero:
        raise CliError("the zero structure has no leading term", EXIT_NOT_SQUARE_ZERO)
    ok, witness = is_codifferential(d)
    data = {"square_zero": ok, "witness": None if ok else format_cochain(witness),
            "leading_degree": d.leading_degree, "truncation": d.truncation}
    _emit(args, data, "square-zero" if ok else f"not square-zero: {format_cochain(witness)}")
    return EXIT_OK if ok else EXIT_NOT_SQUARE_ZERO


def cmd_cohomology(args) -> int:
    d = load_structure(args.structure, args)
    _require_codifferential(d)
    top = args.max_degree if args.max_degree is not None else d.leading_degree + 6
    degrees = range(1, top + 1)
    if d.is_homogeneous:
        report = cohomology(d, degrees, check=False)
        kind = "graded"
    else:
        report = filtered_cohomology(d, degrees, check=False)
        kind = "filtered"
    data = {"leading_degree": report.leading_degree, "kind": kind, "degrees": report.to_json()}
    _emit(args, data, report.table())
    return EXIT_OK


def _witness_json(g) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in g.matrix]


def cmd_classify(args) -> int:
    from .moduli import canonical_form

    d = load_structure(args.structure, args)
    _require_codifferential(d)
    if not d.is_homogeneous:
        raise CliError("classify needs a homogeneous codifferential", EXIT_SEVERAL)
    tag, g = canonical_form(d.leading_term)
    data = dict(tag.to_json(), witness=_witness_json(g))
    rows = "; ".join(" ".join(r) for r in data["witness"])
    _emit(args, data, f"{tag}\nwitness g: {rows}\nrepresentative: {format_cochain(tag.representative())}")
    return EXIT_OK


def cmd_extend(args) -> int:
    from .extensions import standard_form

    d = load_structure(args.structure, args)
    _require_codifferential(d)
    sf = standard_form(d, args.max_degree)
    replay = sf.replay_matches()
    data = {
        "standard_form": structfile.structure_to_json(sf.structure),
        "secondary_degree": sf.secondary_degree,
        "irremovable_degrees": sf.irremovable,
        "transcript": sf.transcript,
        "replay_matches": replay,
        "notes": sf.notes,
    }
    lines = [f"standard form: {sf.structure}",
             f"secondary term degree: {sf.secondary_degree}",
             f"irremovable degrees: {sf.irremovable or 'none'}"]
    lines += [f"  {m['move']}: {m['data']}" for m in sf.transcript]
    lines += [f"note: {n}" for n in sf.notes]
    lines.append("replay reproduces the input" if replay else "replay does NOT reproduce the input")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    try:
        ids = tables.resolve(args.table_id, args.golden_dir)
    except tables.UnknownTable:
        known = ", ".join(tables.table_ids(args.golden_dir) + sorted(tables.ALIASES) + ["all"])
        raise CliError(f"unknown table {args.table_id!r}; known: {known}", EXIT_USAGE) from None
    results = [tables.reproduce(t, args.golden_dir) for t in ids]
    if args.json:
        print(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True))
    else:
        print("\n".join(line for r in results for line in r.lines()))
    return EXIT_OK if all(r.ok for r in results) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--m", type=int, help="family parameter m (degree m+2; -1 gives degree 1)")
    common.add_argument("--n", type=int, help="extension parameter n > m")
    common.add_argument("--lambda", dest="lam", type=_rational, help="d_lambda parameter")
    common.add_argument("--a", type=_rational, default=Fraction(0), help="d_infty_ext coefficient")
    common.add_argument("--max-degree", type=int, help="top degree (cohomology) or truncation (extend)")
    common.add_argument("--golden-dir", type=Path, help="directory of golden tables")

    p = argparse.ArgumentParser(prog="linfty", description=__doc__.split("\n\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("bracket", parents=[common], help="[a, b], or the self-bracket [a, a]")
    s.add_argument("a_expr")
    s.add_argument("b_expr", nargs="?")
    s.set_defaults(func=cmd_bracket)
    for name, func, text in (("check", cmd_check, "is the structure square-zero"),
                             ("cohomology", cmd_cohomology, "z|b|h table of [., d]"),
                             ("classify", cmd_classify, "family of a homogeneous codifferential"),
                             ("extend", cmd_extend, "standard form of an extension")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("structure")
        s.set_defaults(func=func)
    s = sub.add_parser("reproduce", parents=[common], help="diff a stored table against the engine")
    s.add_argument("table_id")
    s.set_defaults(func=cmd_reproduce)
    return p


def _glue_negative_values(argv):
    # argparse would read "--lambda -3/2" as two options
    out, it = [], iter(argv)
    for a in it:
        if a in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"linfty: {exc}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
