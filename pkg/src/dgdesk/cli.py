"""Command line entry point.

Every input file is JSON with a "kind" field; most commands also accept a
builtin name in place of a file.  Exit status: 0 when every requested check
passes, 1 when one fails, 2 on usage or parse errors.
"""

import argparse
import json
import os
import re
import sys

from . import dgcat, gscomplex, hopf, monoidal2, simplicial, tetra
from .cochain import CochainComplex, cohomology_dims, is_acyclic, lambda_complex
from .report import Report

KINDS = ("hopf", "bialgebra", "tetramodule", "dgcat", "dg-algebra", "monoidal-dgcat", "complex")

_DECIMAL = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+(\.\d*)?[eE][+-]?\d+|\d+\.\d*[eE][+-]?\d+)$")


class ParseError(ValueError):
    pass


def _check_scalars(data, path="$"):
    """Reject floats and decimal strings anywhere; scalars are exact rationals."""
    if isinstance(data, float):
        raise ParseError("%s: %r is not an exact rational" % (path, data))
    if isinstance(data, str) and _DECIMAL.match(data):
        raise ParseError("%s: %r is not an exact rational (write p/q)" % (path, data))
    if isinstance(data, dict):
        for k, v in data.items():
            _check_scalars(v, "%s.%s" % (path, k))
    elif isinstance(data, list):
        for i, v in enumerate(data):
            _check_scalars(v, "%s[%d]" % (path, i))


def from_data(data):
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("$: missing 'kind' field")
    _check_scalars(data)
    kind = data["kind"]
    try:
        if kind in ("hopf", "bialgebra"):
            return hopf.from_json(data)
        if kind == "tetramodule":
            return tetra.from_json(data)
        if kind == "dgcat":
            return dgcat.FiniteDgCategory.from_json(data)
        if kind == "dg-algebra":
            c = dgcat.FiniteDgCategory.from_json(data["category"])
            return simplicial.DgAlgebra(c, data.get("object"))
        if kind == "monoidal-dgcat":
            return simplicial.StrictMonoidal.from_json(data)
        if kind == "complex":
            return CochainComplex.from_json(data)
    except (KeyError, ValueError) as e:
        raise ParseError("$.%s: %s" % (kind, e)) from None
    raise ParseError("$.kind: unknown kind %r (expected one of %s)" % (kind, ", ".join(KINDS)))


def parse(path):
    """Read one object file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError("%s: line %d column %d: %s" % (path, e.lineno, e.colno, e.msg)) from None
    except OSError as e:
        raise ParseError("%s: %s" % (path, e.strerror)) from None
    return from_data(data)


def serialize(obj) -> dict:
    if isinstance(obj, hopf.Bialgebra):
        return hopf.to_json(obj)
    if isinstance(obj, tetra.Tetramodule):
        return tetra.to_json(obj)
    if isinstance(obj, dgcat.FiniteDgCategory):
        return obj.to_json()
    if isinstance(obj, simplicial.DgAlgebra):
        return {"kind": "dg-algebra", "category": obj.cat.to_json(), "object": obj.obj}
    if isinstance(obj, simplicial.StrictMonoidal):
        return obj.to_json()
    if isinstance(obj, CochainComplex):
        return dict(obj.to_json(), kind="complex")
    raise TypeError("cannot serialize %r" % (obj,))


def emit_report(r: Report, fmt="table") -> str:
    return r.render(fmt)


# ---------------------------------------------------------------------------
# loading with builtins

def _expect(obj, types, what):
    if not isinstance(obj, types):
        raise ParseError("expected %s, got %s" % (what, type(obj).__name__))
    return obj


def load_hopf(arg):
    if os.path.exists(arg):
        return _expect(parse(arg), hopf.Bialgebra, "a Hopf algebra or bialgebra")
    try:
        return hopf.builtin(arg)
    except hopf.HopfError as e:
        raise ParseError(str(e)) from None


def load_tetra(arg):
    """A file, or ``regular:B``, ``free:B[:w]``, ``zero:B`` with B a builtin name."""
    if os.path.exists(arg):
        return _expect(parse(arg), tetra.Tetramodule, "a tetramodule")
    kind, _, rest = arg.partition(":")
    w = 1
    if kind == "free" and rest.count(":") and rest.rsplit(":", 1)[1].isdigit():
        rest, w = rest.rsplit(":", 1)[0], int(rest.rsplit(":", 1)[1])
    makers = {"regular": tetra.regular_tetramodule, "zero": tetra.zero_tetramodule,
              "free": lambda b: tetra.free_tetramodule(b, w)}
    if kind not in makers or not rest:
        raise ParseError("unknown tetramodule %r (file, regular:B, free:B[:w] or zero:B)" % arg)
    return makers[kind](load_hopf(rest))


DG_BUILTINS = {"two-object": dgcat.two_object_example, "point": dgcat.one_object}
ALGEBRAS = {"Q": simplicial.ground_field, "dual-numbers": simplicial.dual_numbers}
MONOIDAL = {"trivial": (simplicial.trivial_monoidal, ()),
            "acyclic": (simplicial.acyclic_monoidal, ("a",)),
            "indiscrete": (simplicial.indiscrete_monoidal, ("a",))}


def load_dgcat(arg):
    if os.path.exists(arg):
        return _expect(parse(arg), dgcat.FiniteDgCategory, "a dg category")
    if arg in DG_BUILTINS:
        return DG_BUILTINS[arg]()
    raise ParseError("unknown dg category %r (builtins: %s)" % (arg, ", ".join(DG_BUILTINS)))


def load_algebra(arg):
    if os.path.exists(arg):
        obj = parse(arg)
        if isinstance(obj, dgcat.FiniteDgCategory):
            obj = simplicial.DgAlgebra(obj)
        return _expect(obj, simplicial.DgAlgebra, "a dg algebra")
    if arg in ALGEBRAS:
        return ALGEBRAS[arg]()
    raise ParseError("unknown dg algebra %r (builtins: %s)" % (arg, ", ".join(ALGEBRAS)))


def load_monoidal(arg):
    if os.path.exists(arg):
        return _expect(parse(arg), simplicial.StrictMonoidal, "a monoidal dg category"), None
    if arg in MONOIDAL:
        make, j = MONOIDAL[arg]
        return make(), j
    raise ParseError("unknown monoidal model %r (builtins: %s)" % (arg, ", ".join(MONOIDAL)))


def window(text):
    m = re.match(r"^(-?\d+):(-?\d+)$", text)
    if not m:
        raise argparse.ArgumentTypeError("window must look like -6:0")
    lo, hi = int(m.group(1)), int(m.group(2))
    if not lo <= 0 <= hi:
        raise argparse.ArgumentTypeError("window must contain 0")
    return lo, hi


# ---------------------------------------------------------------------------
# commands

def _emit(args, obj, default):
    if args.emit is None:
        return
    path = args.emit or default
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize(obj), fh, indent=1, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    print("wrote %s" % path, file=sys.stderr)


def _slug(name):
    return re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_") or "out"


def _hopf_report(b):
    if isinstance(b, hopf.HopfAlgebra):
        return hopf.validate_hopf(b)
    return hopf.validate_bialgebra(b)


def cmd_hopf(args):
    b = load_hopf(args.source)
    _emit(args, b, _slug(args.source) + ".json")
    return _hopf_report(b)


def cmd_tetra(args):
    if args.action == "check":
        t = load_tetra(args.modules[0])
        _emit(args, t, "tetramodule.json")
        return tetra.validate_tetramodule(t)
    if args.action == "decompose":
        d = tetra.tetra_decomposition_report(load_tetra(args.modules[0]))
        return d.report
    if args.action == "tensor":
        if len(args.modules) != 2:
            raise ParseError("tensor needs two tetramodules")
        m, n = (load_tetra(a) for a in args.modules)
        p = monoidal2.internal_product(m, n, args.variant)
        p.report.info("dimension", "", dim=p.dim)
        _emit(args, p.tetramodule, "product.json")
        return p.report
    if args.action == "eh-check":
        if len(args.modules) != 4:
            raise ParseError("eh-check needs four tetramodules")
        return monoidal2.eckmann_hilton(*(load_tetra(a) for a in args.modules)).report
    if args.action == "exactness":
        n = load_tetra(args.modules[0])
        if len(args.modules) == 3:
            a, c = load_tetra(args.modules[1]), load_tetra(args.modules[2])
            ses = monoidal2.split_sequence(a, c)
        elif len(args.modules) == 1:
            B = n.base
            f, r = tetra.free_tetramodule(B, 1), tetra.regular_tetramodule(B)
            ses = monoidal2.kernel_sequence(f, r, B.m.relabel(f.space, r.space))
        else:
            raise ParseError("exactness takes N, or N A C for the split sequence A → A⊕C → C")
        return monoidal2.exactness_check(n, ses, args.variant)
    raise ParseError("unknown tetra action %r" % args.action)


def cmd_gs(args):
    b = load_hopf(args.source)
    if args.seed is not None:
        b = gscomplex.change_basis(b, gscomplex.random_basis_change(b, args.seed))
    g = gscomplex.build_gs_bicomplex(b, args.pmax, args.qmax, normalized=args.normalized)
    r = Report("GS cohomology of %s, window (%d, %d)" % (b.name or args.source, args.pmax, args.qmax))
    r.extend(gscomplex.square_report(g))
    degrees = args.degrees and [int(x) for x in args.degrees.split(",")]
    h = gscomplex.gs_cohomology(g, degrees)
    for n, d in sorted(h.items()):
        r.info("H^%d" % n, "", dim=d)
    skipped = sorted(set(degrees or []) - set(h))
    if skipped:
        r.info("outside window", ", ".join(map(str, skipped)))
    if args.oracle and 2 in h:
        o = gscomplex.deformation_oracle(b)
        r.add("H^2 = deformation oracle", h[2] == o, "", oracle=o, bicomplex=h[2])
    return r


def cmd_dg(args):
    if args.action == "lambda":
        r = Report("Λ complexes")
        for n in range(1, args.n + 1):
            c = lambda_complex(n)
            r.add("Λ(%d) acyclic" % n, is_acyclic(c), "", dims=c.dims())
        return r
    c = load_dgcat(args.source)
    if args.action == "quotient":
        kill = [x for x in (args.kill or "").split(",") if x]
        if not kill:
            raise ParseError("--kill needs at least one object")
        try:
            q = dgcat.drinfeld_quotient(c, kill, args.window)
        except dgcat.DgError as e:
            raise ParseError(str(e)) from None
        r = Report("Drinfeld quotient %s" % q.name)
        r.extend(q.generator_report())
        degs = list(range(args.window[0], 1))
        for x in q.objects:
            for y in q.objects:
                h = cohomology_dims(q.hom(x, y).complex, degs)
                r.info("H Hom(%s, %s)" % (x, y), "", **{str(n): d for n, d in h.items() if d})
        r.add("killed objects acyclic", all(is_acyclic(q.hom(z, z).complex, degs) for z in kill))
        return r
    if args.action == "psi-check":
        marks = [set(m.split(",")) - {""} for m in (args.marks or "").split(";")]
        try:
            p = dgcat.PCat(c, marks)
        except dgcat.DgError as e:
            raise ParseError(str(e)) from None
        _, r = dgcat.psi_comparison(p, args.window)
        return r
    raise ParseError("unknown dg action %r" % args.action)


def cmd_nerve(args):
    a = load_algebra(args.source)
    try:
        p = simplicial.leinster_nerve(a, args.levels)
    except simplicial.SimplicialError as e:
        r = Report("Leinster nerve")
        r.add("associative", False, str(e))
        return r
    return simplicial.validate_leinster(p)


def cmd_pipeline(args):
    if args.kld:
        return simplicial.kld_desk_check(args.length, args.window)
    m, j = load_monoidal(args.source)
    if args.ideal is not None:
        j = [x for x in args.ideal.split(",") if x]
    try:
        p = simplicial.deligne_pipeline(m, j or (), args.nmax, args.window)
    except simplicial.SimplicialError as e:
        r = Report("pipeline %s" % m.name)
        r.add("input", False, str(e))
        return r
    return p.report


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized steps")
    common.add_argument("--emit", nargs="?", const="", default=None, metavar="PATH",
                        help="write the (resulting) object as JSON")

    ap = argparse.ArgumentParser(
        prog="dgdesk", description=__doc__.splitlines()[0],
        epilog="Exit status: 0 all checks pass, 1 a check failed, 2 usage or parse error. "
               "All computations run in a single thread; there is no thread-count setting.")
    sub = ap.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hopf", help="Hopf algebras").add_subparsers(dest="action", required=True)
    for name in ("check", "builtin"):
        p = h.add_parser(name, parents=[common])
        p.add_argument("source", help="file or builtin name (trivial, sweedler, Z/n)")
        p.set_defaults(func=cmd_hopf)

    t = sub.add_parser("tetra", help="tetramodules").add_subparsers(dest="action", required=True)
    for name in ("check", "tensor", "decompose", "eh-check", "exactness"):
        p = t.add_parser(name, parents=[common])
        p.add_argument("modules", nargs="+", help="files or regular:B, free:B[:w], zero:B")
        p.add_argument("--variant", "--op", type=int, choices=(1, 2), default=1,
                       help="which internal product (1 or 2)")
        p.set_defaults(func=cmd_tetra)

    g = sub.add_parser("gs", help="Gerstenhaber-Schack").add_subparsers(dest="action", required=True)
    p = g.add_parser("cohomology", parents=[common])
    p.add_argument("source")
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--qmax", type=int, default=3)
    p.add_argument("--degrees", default=None, help="comma-separated list")
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--oracle", action="store_true", help="compare H^2 with the deformation oracle")
    p.set_defaults(func=cmd_gs)

    d = sub.add_parser("dg", help="dg categories").add_subparsers(dest="action", required=True)
    p = d.add_parser("quotient", parents=[common])
    p.add_argument("source")
    p.add_argument("--kill", required=True)
    p.add_argument("--window", type=window, default=(-6, 0))
    p.set_defaults(func=cmd_dg)
    p = d.add_parser("lambda", parents=[common])
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_dg)
    p = d.add_parser("psi-check", parents=[common])
    p.add_argument("source")
    p.add_argument("--marks", required=True, help="subsets separated by ';', objects by ','")
    p.add_argument("--window", type=window, default=(-5, 0))
    p.set_defaults(func=cmd_dg)

    n = sub.add_parser("nerve", help="Leinster nerves").add_subparsers(dest="action", required=True)
    p = n.add_parser("check", parents=[common])
    p.add_argument("source", help="file or builtin (Q, dual-numbers)")
    p.add_argument("--levels", type=int, default=4)
    p.set_defaults(func=cmd_nerve)

    pl = sub.add_parser("pipeline", help="Hom∘Dr∘F").add_subparsers(dest="action", required=True)
    p = pl.add_parser("run", parents=[common])
    p.add_argument("source", nargs="?", default="trivial",
                   help="file or builtin (trivial, acyclic, indiscrete)")
    p.add_argument("--ideal", default=None, help="comma-separated objects")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--window", type=window, default=(-6, 0))
    p.add_argument("--kld", action="store_true", help="run the Hochschild desk check instead")
    p.add_argument("--length", type=int, default=4, help="bar length for --kld")
    p.set_defaults(func=cmd_pipeline)
    return ap


def dispatch(argv=None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # "--window -6:0" would read the value as an option
    for i in range(len(argv) - 1):
        if argv[i] == "--window" and argv[i + 1].startswith("-"):
            argv[i:i + 2] = ["--window=" + argv[i + 1], ""]
    argv = [a for a in argv if a != ""]
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        r = args.func(args)
    except (ParseError, hopf.HopfError, tetra.TetraError, dgcat.DgError,
            simplicial.SimplicialError, gscomplex.GsError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    print(emit_report(r, args.format))
    return 0 if r.ok else 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
