"""Command line interface: ``hfkn <subcommand> ...``.

Exit status is 0 on success, 1 when a computation fails and 2 on a usage
error.  Output is deterministic: identical arguments give identical bytes.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .complex import _fmt_frac

__all__ = ["main", "run", "parse_n_range", "format_degrees"]


class UsageError(Exception):
    pass


def parse_n_range(text: str) -> list[int]:
    """``"3"`` -> [3]; ``"2..4"`` -> [2, 3, 4]; ``"1,3"`` -> [1, 3]."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                if hi < lo:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            elif part:
                out.append(int(part))
    except ValueError as e:
        raise UsageError(f"bad --n value {text!r}") from e
    if not out or min(out) < 1:
        raise UsageError("--n needs values >= 1")
    return out


def format_degrees(dims: dict, var: str = "q") -> str:
    """Poincaré polynomial in ascending degree; fractional exponents in parentheses."""
    terms = []
    for d in sorted(dims):
        c = dims[d]
        if not c:
            continue
        d = Fraction(d)
        if d == 0:
            mono = ""
        elif d == 1:
            mono = var
        else:
            e = _fmt_frac(d)
            mono = f"{var}^{e}" if d.denominator == 1 else f"{var}^({e})"
        if not mono:
            body = str(abs(c))
        else:
            body = mono if abs(c) == 1 else f"{abs(c)}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _laurent_dims(P) -> dict:
    return {Fraction(dict(m).get("q", 0)): int(c) for m, c in P.items()}


def _emit(args, text: str, data) -> None:
    body = json.dumps(data, indent=2, sort_keys=True) if args.format == "json" else text
    if not body.endswith("\n"):
        body += "\n"
    if args.output:
        Path(args.output).write_text(body)
    else:
        sys.stdout.write(body)


# ---------------------------------------------------------------------------
# inputs


def _master_from_args(args):
    from .hfk import MasterComplex, builtin, staircase

    given = [x for x in (args.knot, args.alexander_exponents, args.file) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --knot, --alexander-exponents, --file")
    if args.knot:
        try:
            return builtin(args.knot)
        except KeyError as e:
            raise UsageError(str(e.args[0])) from e
    if args.alexander_exponents:
        try:
            exps = [int(x) for x in args.alexander_exponents.split(",") if x.strip()]
        except ValueError as e:
            raise UsageError("--alexander-exponents takes comma-separated integers") from e
        return staircase(exps, getattr(args, "orientation", "into_odd"))
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}") from e
    return MasterComplex.from_json(text, check=False)


def _braid_from_args(args) -> tuple[int, list[int], int]:
    from .poly import BRAIDS, parse_braid

    given = [x for x in (args.knot, args.braid) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --knot, --braid")
    if args.knot:
        if args.knot not in BRAIDS:
            raise UsageError(f"unknown braid {args.knot!r}; known: {sorted(BRAIDS)}")
        strands, word = BRAIDS[args.knot]
        return strands, list(word), 1
    strands, word = parse_braid(args.braid)
    fields = dict(p.split("=", 1) for p in args.braid.replace(";", " ").split() if "=" in p)
    mark = int(fields["mark"]) if fields.get("mark", "").strip() else 1
    return strands, word, mark


# ---------------------------------------------------------------------------
# subcommands


def _cmd_hfkn(args) -> None:
    from .hfk import hfk_n, reduced_hfk_n

    C = _master_from_args(args)
    ns = parse_n_range(args.n)
    lines, data = [], []
    for n in ns:
        if args.reduced:
            dims = reduced_hfk_n(C, n)
            table = dims.project(0)
            lines.append(f"n={n}  reduced HFK_n  total {dims.total()}")
            lines.append(f"  Poincare: {format_degrees(table)}")
            data.append({"n": n, "reduced": True, "dims": {_fmt_frac(k): v for k, v in table.items()},
                         "total": dims.total()})
            continue
        r = hfk_n(C, n, route=args.route)
        table = r.dims.project(0)
        lines.append(f"n={n}  HFK_n  total {r.total_dim()}  (route {r.route}; {r.convention})")
        if r.module is not None:
            lines.append(f"  module:   {r.module}")
        lines.append(f"  Poincare: {format_degrees(table)}")
        data.append(r.to_dict())
    _emit(args, "\n".join(lines), data)


def _cmd_kr(args) -> None:
    from .kr import BraidDiagram, conjecture_grading, euler_char, kr_complex, kr_homology

    strands, word, mark = _braid_from_args(args)
    D = BraidDiagram.from_word(word, strands, mark)
    flavor = "reduced" if args.reduced else ("middle" if args.middle else "unreduced")
    n = args.sln
    K = kr_complex(D, flavor, n)
    H = kr_homology(K, cutoff=args.cutoff, method=args.method)
    mode = "HOMFLY" if n is None else f"sl_{n}"
    keys = "(q,h,v,parity)" if n is None else "(gr_n,gr_v,parity)"
    lines = [f"{mode} {flavor} KR homology of strands={strands} word={','.join(map(str, word))}",
             f"  total {H.total()}" + (" (truncated)" if H.truncated else ""),
             f"  dims {keys}: {H}"]
    data = {"mode": mode, "flavor": flavor, "strands": strands, "word": word, "mark": mark,
            "total": H.total(), "truncated": H.truncated,
            "dims": [[_fmt_frac(x) for x in k] + [v] for k, v in H.table.items()]}
    try:
        chi = euler_char(H)
        lines.append(f"  euler characteristic: {chi}")
        data["euler_char"] = str(chi)
    except ValueError:
        pass
    if n is not None:
        conj = conjecture_grading(H, n)
        lines.append(f"  conjecture grading: {format_degrees(conj)}")
        data["conjecture_grading"] = {_fmt_frac(k): v for k, v in conj.items()}
    _emit(args, "\n".join(lines), data)


def _cmd_homfly(args) -> None:
    from .poly import braid_closure, homfly, sln_specialize

    strands, word, _ = _braid_from_args(args)
    D = braid_closure(word, strands)
    P = homfly(D, reduced=args.reduced)
    data = {"strands": strands, "word": word, "reduced": args.reduced, "homfly": str(P)}
    lines = [f"HOMFLY-PT{' (reduced)' if args.reduced else ''}: {P}"]
    if args.sln is not None:
        Pn = sln_specialize(P, args.sln, reduced=args.reduced)
        lines.append(f"sl_{args.sln}: {format_degrees(_laurent_dims(Pn))}")
        data["sln"] = {"n": args.sln, "value": str(Pn)}
    _emit(args, "\n".join(lines), data)


def _cmd_sscheck(args) -> None:
    from .ring import parse_laurent
    from .sscheck import conjecture_report, format_report, ss_step

    if args.knot:
        if args.source or args.target:
            raise UsageError("use either --knot or --source/--target")
        rows = conjecture_report(args.knot, parse_n_range(args.n or "1..4"))
        _emit(args, format_report(rows, "text"), [r.to_dict() for r in rows])
        return
    if not (args.source and args.target and args.step):
        raise UsageError("sscheck needs --knot, or --source, --target and --step")
    try:
        P, Q = parse_laurent(args.source), parse_laurent(args.target)
    except ValueError as e:
        raise UsageError(str(e)) from e
    v = ss_step(P, Q, args.step, shift=args.shift)
    lines = [f"{'compatible' if v.compatible else 'incompatible'} (step {v.step})"]
    if v.compatible:
        lines.append(f"  shift {v.shift}, witness {v.witness}")
    else:
        lines.append(f"  {v.certificate}")
    lines.append(f"  dims {v.dim_source} -> {v.dim_target}, parity {'ok' if v.parity_ok else 'FAIL'}")
    _emit(args, "\n".join(lines), v.to_dict())


def _cmd_validate(args) -> None:
    from .hfk import validate_master

    if args.braid:
        from .kr import BraidDiagram, kr_complex, square_is

        strands, word, mark = _braid_from_args(args)
        D = BraidDiagram.from_word(word, strands, mark)
        ns = parse_n_range(args.n) if args.n else []
        results = {"homfly": square_is(kr_complex(D, "middle", None), 0)}
        for n in ns:
            results[f"sl_{n}"] = square_is(kr_complex(D, "middle", n), 0)
        ok = all(results.values())
        text = "\n".join(f"{k}: d^2 {'= 0' if v else '!= 0'}" for k, v in results.items())
        _emit(args, text, {"ok": ok, "checks": results})
        if not ok:
            raise ComputationFailed("d^2 != 0")
        return
    C = _master_from_args(args)
    diag = validate_master(C)
    _emit(args, f"{'valid' if diag.ok else 'INVALID'}: {diag.message}",
          {"ok": diag.ok, "message": diag.message})
    if not diag.ok:
        raise ComputationFailed(diag.message)


class ComputationFailed(Exception):
    pass


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hfkn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")

    h = sub.add_parser("hfkn", help="HFK_n of a knot Floer master complex")
    h.add_argument("--knot", help="built-in id: unknot, trefoil, 4_1, T<p>,<q>, ...")
    h.add_argument("--alexander-exponents", help="staircase from exponents, e.g. 1,0,-1")
    h.add_argument("--file", help="master complex JSON")
    h.add_argument("--orientation", choices=("into_odd", "out_of_odd"), default="into_odd")
    h.add_argument("--n", default="2", help="n, a range 2..4 or a list 1,3")
    h.add_argument("--route", choices=("auto", "A", "B", "C"), default="auto")
    h.add_argument("--reduced", action="store_true")
    common(h)
    h.set_defaults(func=_cmd_hfkn)

    k = sub.add_parser("kr", help="Khovanov-Rozansky homology of a braid closure")
    k.add_argument("--knot", help="built-in braid name (unknot, hopf, trefoil, ...)")
    k.add_argument("--braid", help='e.g. "strands=2 word=1,1,1 mark=1"')
    k.add_argument("--sln", type=int, help="sl_n homology; omit for HOMFLY-PT")
    g = k.add_mutually_exclusive_group()
    g.add_argument("--reduced", action="store_true")
    g.add_argument("--middle", action="store_true")
    k.add_argument("--cutoff", type=Fraction, help="primary degree bound")
    k.add_argument("--method", choices=("auto", "direct"), default="auto")
    common(k)
    k.set_defaults(func=_cmd_kr)

    f = sub.add_parser("homfly", help="HOMFLY-PT polynomial of a braid closure")
    f.add_argument("--knot")
    f.add_argument("--braid")
    f.add_argument("--reduced", action="store_true")
    f.add_argument("--sln", type=int, help="also print the a = q^n specialisation")
    common(f)
    f.set_defaults(func=_cmd_homfly)

    s = sub.add_parser("sscheck", help="spectral-sequence compatibility")
    s.add_argument("--knot")
    s.add_argument("--n", help="range for --knot (default 1..4)")
    s.add_argument("--source", help="Laurent polynomial in q, e.g. 'q^3 + 4*q^5'")
    s.add_argument("--target")
    s.add_argument("--step", type=int)
    s.add_argument("--shift", type=int, help="fix the alignment instead of searching")
    common(s)
    s.set_defaults(func=_cmd_sscheck)

    v = sub.add_parser("validate", help="check a master complex or KR complex")
    v.add_argument("--knot")
    v.add_argument("--alexander-exponents")
    v.add_argument("--file")
    v.add_argument("--orientation", choices=("into_odd", "out_of_odd"), default="into_odd")
    v.add_argument("--braid", help="check d^2 = 0 on the KR complex of this braid")
    v.add_argument("--n", help="sl_n values to check with --braid")
    common(v)
    v.set_defaults(func=_cmd_validate)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # bare flags mean the hfkn subcommand: `hfkn --knot unknot --n 3`
    if argv and argv[0].startswith("-") and argv[0] not in ("-h", "--help"):
        argv.insert(0, "hfkn")
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except UsageError as e:
        print(f"hfkn {args.command}: {e}", file=sys.stderr)
        return 2
    except ComputationFailed as e:
        print(f"hfkn {args.command}: {e}", file=sys.stderr)
        return 1
    except (ArithmeticError, ValueError, RuntimeError, KeyError) as e:
        print(f"hfkn {args.command}: error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
