"""Command-line front end.

Exit status: 0 when every check passes, 1 when a duality or layer check
fails, 2 on usage errors (including arity caps without ``--force``).
"""
from __future__ import annotations

import argparse
import json
import sys

from .barkoszul import bar_complex, bar_complex_module, check_module_pk, check_poincare_koszul
from .cubes import MAX_K, UnsupportedLayer, layer_report
from .exactla import dims_to_csv, parse_field
from .modules import builtin_module, configuration_module, restrict
from .operads import MORPHISMS, builtin_morphism, builtin_operad

CAPS = {
    "operad show": {"com": 9, "lie": 8, "pois": 8},
    "bar": {"com": 6, "lie": 6, "pois": 5, "module": 5},
    "koszul": {"pois": 5, "module": 5},
    "module": 6,
}


class UsageError(Exception):
    pass


def _cap(limit, value, what, force):
    if value > limit and not force:
        raise UsageError(f"{what} {value} exceeds the cap {limit}; pass --force to run anyway")


def _operad(args):
    name = args.name or args.operad
    if name is None:
        raise UsageError("an operad name is required (com, lie or pois)")
    if name == "pois" and args.n is None:
        raise UsageError("pois needs --n")
    try:
        return name, builtin_operad(name, args.n if name == "pois" else None)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _module(kind, n):
    try:
        return builtin_module(kind, n)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _emit(args, data, human_lines, csv_table=None):
    if getattr(args, "csv", False):
        if csv_table is None:
            raise UsageError("this command has no CSV form")
        text = dims_to_csv(csv_table)
    elif getattr(args, "json", None) is not None:
        text = json.dumps(data, indent=2) + "\n"
        if args.json != "-":
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
            return
    else:
        text = "\n".join(human_lines) + "\n"
    sys.stdout.write(text)


def _poly_dims(p):
    return {e: c for e, c in sorted(p.coeffs.items())}


def _space_data(labels, degrees):
    return [{"label": lab, "degree": d} for lab, d in zip(labels, degrees)]


# --- commands --------------------------------------------------------------------

def cmd_operad_show(args):
    name, O = _operad(args)
    _cap(CAPS["operad show"][name], args.arity, "arity", args.force)
    k = args.arity
    if k < 1:
        raise UsageError("arity must be >= 1")
    P = O.poincare(k)
    data = {"operad": O.name, "arity": k, "dimension": O.dim(k), "poincare": P.to_json()}
    lines = [f"{O.name}({k}): dimension {O.dim(k)}, Poincaré polynomial {P}"]
    if args.basis:
        data["basis"] = _space_data(O.labels(k), O.degrees(k))
        lines += [f"  {lab}\t{d}" for lab, d in zip(O.labels(k), O.degrees(k))]
    _emit(args, data, lines, _poly_dims(P))
    return 0


def _module_report(R, args):
    k = args.arity
    _cap(CAPS["module"], k, "arity", args.force)
    P = R.poincare(k)
    data = {"module": R.name, "operad": R.operad.name, "arity": k, "dimension": R.dim(k), "poincare": P.to_json()}
    lines = [f"{R.name} over {R.operad.name}, arity {k}: dimension {R.dim(k)}, Poincaré polynomial {P}"]
    if args.basis:
        data["basis"] = _space_data(R.labels(k), R.degrees(k))
        lines += [f"  {lab}\t{d}" for lab, d in zip(R.labels(k), R.degrees(k))]
    _emit(args, data, lines, _poly_dims(P))
    return 0


def cmd_module_show(args):
    return _module_report(_module(args.kind, args.n), args)


def cmd_module_restrict(args):
    if args.n is None:
        raise UsageError("--n is required")
    try:
        f = builtin_morphism(args.along, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from e
    R = _module(args.kind, args.n)
    if f.target is not R.operad:
        raise UsageError(f"{args.along} lands in {f.target.name}, but the module is over {R.operad.name}")
    return _module_report(restrict(R, f), args)


def cmd_bar_homology(args):
    field = parse_field(args.field)
    if args.module:
        _cap(CAPS["bar"]["module"], args.arity, "arity", args.force)
        R = _module(args.module, args.n)
        bc = bar_complex_module(R, args.arity)
        subject = R.name
    else:
        name, O = _operad(args)
        _cap(CAPS["bar"][name], args.arity, "arity", args.force)
        if args.arity < 2:
            raise UsageError("the operadic bar complex needs arity >= 2")
        bc = bar_complex(O, args.arity)
        subject = O.name
    h = bc.homology(field)
    data = {
        "source": subject,
        "arity": args.arity,
        "field": field.name,
        "chain_dims": {str(j): v for j, v in bc.dims().items()},
        "homology": {str(j): v for j, v in sorted(h.items())},
        "euler_characteristic": bc.euler_characteristic(),
    }
    lines = [
        f"B({subject})({args.arity}) over {field.name}",
        "  chains:   " + ", ".join(f"{j}: {v}" for j, v in bc.dims().items()),
        "  homology: " + (", ".join(f"{j}: {v}" for j, v in sorted(h.items())) or "0"),
        f"  euler characteristic {bc.euler_characteristic()}",
    ]
    _emit(args, data, lines, h)
    return 0


def _report_exit(rep, field):
    if not rep.euler_consistent():
        return 1
    if field.p:
        return 0  # away from Q the comparison is informational
    return 0 if rep.passed else 1


def cmd_koszul_check(args):
    field = parse_field(args.field)
    name, O = _operad(args)
    if name != "pois":
        raise UsageError("the duality report is defined for pois")
    _cap(CAPS["koszul"]["pois"], args.max_arity, "max arity", args.force)
    rep = check_poincare_koszul(O, args.n, range(args.min_arity, args.max_arity + 1), field)
    _emit(args, rep.to_data(), rep.lines())
    return _report_exit(rep, field)


def cmd_koszul_check_module(args):
    field = parse_field(args.field)
    if args.n is None:
        raise UsageError("--n is required")
    _cap(CAPS["koszul"]["module"], args.max_arity, "max arity", args.force)
    R = _module(args.module, args.n)
    if args.target:
        target = _module(args.target, args.n)
    elif args.module == "sphere-diagonal":
        target = configuration_module(args.n)
    else:
        target = R
    d = args.d if args.d is not None else args.n
    lo = args.min_arity or R.min_arity
    rep = check_module_pk(R, args.n, d, range(lo, args.max_arity + 1), target, field)
    _emit(args, rep.to_data(), rep.lines())
    return _report_exit(rep, field)


def cmd_layers(args):
    if args.k > MAX_K:
        raise UsageError(f"k must be at most {MAX_K}")
    try:
        rep = layer_report(args.n, args.k)
    except UnsupportedLayer as e:
        raise UsageError(str(e)) from e
    except ValueError as e:
        raise UsageError(str(e)) from e
    _emit(args, rep.to_data(), rep.lines())
    return 0 if rep.passed else 1


def cmd_selftest(args):
    from .selftest import run

    ok = run(full=args.full, out=sys.stdout)
    return 0 if ok else 1


# --- parser ----------------------------------------------------------------------

def _common(p, csv=True):
    p.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                   help="emit JSON (to PATH if given)")
    if csv:
        p.add_argument("--csv", action="store_true", help="emit a degree,dimension table")
    p.add_argument("--force", action="store_true", help="ignore arity caps")


def build_parser():
    ap = argparse.ArgumentParser(prog="opforge", description="Exact computations with operads, modules and bar complexes.")
    sub = ap.add_subparsers(dest="command", required=True)

    op = sub.add_parser("operad", help="operad tables").add_subparsers(dest="action", required=True)
    p = op.add_parser("show", help="dimensions and basis of an operad")
    p.add_argument("operad", nargs="?", choices=["com", "lie", "pois"])
    p.add_argument("--name", choices=["com", "lie", "pois"])
    p.add_argument("--n", type=int)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--basis", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_operad_show)

    mod = sub.add_parser("module", help="right modules").add_subparsers(dest="action", required=True)
    kinds = ["config", "sphere-diagonal", "torus-diagonal", "cp2-diagonal", "pois", "pois+", "com", "com+"]
    p = mod.add_parser("show", help="dimensions and basis of a module")
    p.add_argument("--kind", choices=kinds, default="config")
    p.add_argument("--n", type=int)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--basis", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_module_show)
    p = mod.add_parser("restrict", help="restrict a module along a morphism")
    p.add_argument("--along", choices=MORPHISMS, required=True)
    p.add_argument("--kind", choices=kinds, default="config")
    p.add_argument("--n", type=int)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--basis", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_module_restrict)

    bar = sub.add_parser("bar", help="bar complexes").add_subparsers(dest="action", required=True)
    p = bar.add_parser("homology", help="homology of a bar complex")
    p.add_argument("--operad", choices=["com", "lie", "pois"])
    p.add_argument("--module", choices=kinds)
    p.add_argument("--n", type=int)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--field", default="Q", help="Q (default) or a prime p")
    _common(p)
    p.set_defaults(func=cmd_bar_homology, name=None)

    ks = sub.add_parser("koszul", help="Poincaré–Koszul duality reports").add_subparsers(dest="action", required=True)
    p = ks.add_parser("check", help="operad report")
    p.add_argument("--operad", choices=["pois"], default="pois")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min-arity", type=int, default=2)
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--field", default="Q")
    _common(p, csv=False)
    p.set_defaults(func=cmd_koszul_check, name=None)
    p = ks.add_parser("check-module", help="module report")
    p.add_argument("--module", choices=kinds, default="sphere-diagonal")
    p.add_argument("--target", choices=kinds)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--min-arity", type=int)
    p.add_argument("--max-arity", type=int, default=4)
    p.add_argument("--field", default="Q")
    _common(p, csv=False)
    p.set_defaults(func=cmd_koszul_check_module)

    p = sub.add_parser("layers", help="total fibers of configuration cubes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _common(p, csv=False)
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--full", action="store_true", help="include the slower arities")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"opforge: error: {e}\n")
        return 2
    except ValueError as e:
        sys.stderr.write(f"opforge: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
