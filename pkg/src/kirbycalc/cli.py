"""Command-line front end.

Exit codes: 0 success, 2 validation failure (bad input, bad category,
failed preconditions), 3 resource limit (skein cap).  Errors are
reported as one JSON object on stderr so scripts can parse them.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import library
from .category import validate_target_category
from .diagram import (
    KirbyDiagram,
    TwoHandle,
    blow_up,
    cancel_12,
    cancel_23,
    fundamental_group,
    parse_kdf,
    slide_22,
)
from .engine import (
    InvariantRequest,
    cp2_value,
    cp2bar_value,
    identity_group_functor,
    invariant,
)
from .errors import KirbyCalcError, ResourceLimit, SchemaError
from .groups import count_flat_connections, group_by_name, group_from_json
from .pointed import anyonic, category_data, modular_extension, pointed_from_json, pointed_functor
from .templieb import TLCategory, category_data_tl, integer_spin_functor
from .category import identity_functor


def fmt_complex(z, digits=12):
    z = complex(z)
    if abs(z.imag) < 5e-13:
        return "%.*g" % (digits, z.real + 0.0)
    return "%.*g%+.*gi" % (digits, z.real + 0.0, digits, z.imag)


def build_functor(args):
    backend = args.backend
    if backend == "group":
        if getattr(args, "group_file", None):
            with open(args.group_file) as fh:
                G = group_from_json(fh.read())
        else:
            G = group_by_name(args.group)
        return identity_group_functor(G)
    if backend == "pointed":
        if getattr(args, "category", None):
            with open(args.category) as fh:
                cat = pointed_from_json(fh.read())
            cd = category_data(cat)
            return pointed_functor(cd, cd, lambda a: a, "id")
        if not getattr(args, "factors", None) or not args.anyonic:
            raise SchemaError("give --factors N --anyonic or a --category file")
        factors = tuple(int(x) for x in args.factors.split(","))
        if args.functor == "refine":
            if len(factors) != 1:
                raise SchemaError("--functor refine needs a single cyclic factor")
            return modular_extension(factors[0])
        cd = category_data(anyonic(factors[0])) if len(factors) == 1 else None
        if cd is None:
            from .pointed import product

            cat = anyonic(factors[0])
            for n in factors[1:]:
                cat = product(cat, anyonic(n))
            cd = category_data(cat)
        return pointed_functor(cd, cd, lambda a: a, "id")
    if backend == "templieb":
        cat = TLCategory(args.r)
        if args.functor == "integer-spins":
            return integer_spin_functor(cat)
        return identity_functor(category_data_tl(cat))
    raise SchemaError("unknown backend %r" % backend)


def load_diagram(args) -> KirbyDiagram:
    if getattr(args, "library", None):
        return library.get(args.library).diagram
    if getattr(args, "diagram", None):
        with open(args.diagram) as fh:
            return parse_kdf(fh.read())
    raise SchemaError("give exactly one of --library or --diagram")


def _print_result(result, fmt):
    if fmt == "json":
        print(result.to_json())
    elif fmt == "csv":
        print("diagram,functor,backend,chi,sigma,value_re,value_im")
        print(
            "%s,%s,%s,%d,%d,%.12g,%.12g"
            % (
                result.diagram,
                result.functor,
                result.backend,
                result.chi,
                result.sigma,
                result.value.real,
                result.value.imag,
            )
        )
    else:
        for key in ("diagram", "backend", "functor"):
            print("%-14s %s" % (key, getattr(result, key)))
        for key in ("h1", "h2", "chi", "sigma"):
            print("%-14s %d" % (key, getattr(result, key)))
        print("%-14s %s" % ("numerator", fmt_complex(result.numerator)))
        print("%-14s %s" % ("normalization", fmt_complex(result.normalization)))
        print("%-14s %s" % ("value", fmt_complex(result.value)))


def cmd_invariant(args):
    functor = build_functor(args)
    diagram = load_diagram(args)
    result = invariant(
        InvariantRequest(
            functor, diagram, tolerance=args.tolerance, skein_cap=args.skein_cap
        )
    )
    _print_result(result, args.format)
    return 0


def cmd_table(args):
    functor = build_functor(args)

    def row(name):
        entry = library.get(name)
        if functor.target.backend == "templieb" and entry.diagram.pd is None:
            return None
        result = invariant(
            InvariantRequest(
                functor,
                entry.diagram,
                tolerance=args.tolerance,
                skein_cap=args.skein_cap,
            )
        )
        want = library.expected_value(entry, functor)
        status = ""
        if want is not None:
            status = "ok" if abs(result.value - want) <= 1e-9 else "MISMATCH"
        return (
            name,
            entry.chi,
            entry.sigma,
            fmt_complex(result.value),
            "" if want is None else fmt_complex(want),
            status,
        )

    names = library.names()
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(row, names))
    else:
        rows = [row(n) for n in names]
    rows = [r for r in rows if r is not None]
    if args.format == "csv":
        print("name,chi,sigma,value,expected,status")
        for r in rows:
            print(",".join(str(x) for x in r))
    elif args.format == "json":
        print(
            json.dumps(
                [
                    dict(
                        zip(
                            ("name", "chi", "sigma", "value", "expected", "status"), r
                        )
                    )
                    for r in rows
                ],
                sort_keys=True,
            )
        )
    else:
        print(
            "%-22s %4s %6s %22s %22s %s"
            % ("name", "chi", "sigma", "value", "expected", "status")
        )
        for r in rows:
            print("%-22s %4d %6d %22s %22s %s" % r)
    if any(r[5] == "MISMATCH" for r in rows):
        return 2
    return 0


def random_diagram(rng, name):
    """Small random diagram for the move suites."""
    h1 = rng.randint(0, 2)
    h2 = rng.randint(1, 4)
    ones = ["g%d" % i for i in range(1, h1 + 1)]
    twos = []
    for k in range(1, h2 + 1):
        word = []
        if ones:
            for _ in range(rng.randint(0, 4)):
                word.append((rng.choice(ones), rng.choice((1, -1))))
        twos.append(
            TwoHandle("t%d" % k, rng.randint(-3, 3), tuple(word))
        )
    linking = {}
    for i in range(h2):
        for j in range(i + 1, h2):
            v = rng.randint(-3, 3)
            if v:
                linking[(twos[i].id, twos[j].id)] = v
    return KirbyDiagram(name, ones, twos, linking)


def cmd_check_moves(args):
    functor = build_functor(args)
    rng = random.Random(args.seed)
    devs = {"slide_22": 0.0, "cancel_12": 0.0, "cancel_23": 0.0, "blow_up": 0.0}
    plus, minus = cp2_value(functor), cp2bar_value(functor)

    def value(d):
        return invariant(
            InvariantRequest(functor, d, skein_cap=args.skein_cap)
        ).value

    for trial in range(args.trials):
        d = random_diagram(rng, "random%d" % trial)
        base = value(d)
        if d.h2 >= 2:
            ids = [t.id for t in d.two_handles]
            a, b = rng.sample(ids, 2)
            slid = slide_22(d, a, b, rng.choice((1, -1)))
            devs["slide_22"] = max(devs["slide_22"], abs(value(slid) - base))
        # append a cancelling pair, check the value, cancel it again
        paired = d.replace(
            one_handles=d.one_handles + ("gx",),
            two_handles=d.two_handles + (TwoHandle("tx", 0, (("gx", 1),)),),
        )
        devs["cancel_12"] = max(devs["cancel_12"], abs(value(paired) - base))
        devs["cancel_12"] = max(
            devs["cancel_12"], abs(value(cancel_12(paired, "gx", "tx")) - base)
        )
        trivial = d.replace(two_handles=d.two_handles + (TwoHandle("tz", 0),))
        devs["cancel_23"] = max(devs["cancel_23"], abs(value(trivial) - base))
        devs["cancel_23"] = max(
            devs["cancel_23"], abs(value(cancel_23(trivial, "tz")) - base)
        )
        devs["blow_up"] = max(
            devs["blow_up"], abs(value(blow_up(d, 1)) - base * plus)
        )
        devs["blow_up"] = max(
            devs["blow_up"], abs(value(blow_up(d, -1)) - base * minus)
        )
    worst = max(devs.values())
    for move in sorted(devs):
        print("%-10s max deviation %.3e" % (move, devs[move]))
    print("overall    max deviation %.3e over %d trials (seed %d)"
          % (worst, args.trials, args.seed))
    return 0 if worst <= args.tolerance else 2


def cmd_pi1(args):
    diagram = load_diagram(args)
    pres = fundamental_group(diagram)
    print("generators:", " ".join(pres.generators) if pres.generators else "(none)")
    if pres.relators:
        for rel in pres.relators:
            word = " ".join(
                "%s%s" % (g, "" if s > 0 else "^-1") for g, s in rel
            )
            print("relator:", word if word else "(empty)")
    else:
        print("relators: (none)")
    if getattr(args, "group", None):
        G = group_by_name(args.group)
        print(
            "homomorphisms to %s: %d" % (G.name, count_flat_connections(pres, G))
        )
    return 0


def cmd_library(args):
    if args.action == "list":
        for name in library.names():
            entry = library.get(name)
            print(
                "%-22s chi=%3d sigma=%3d pi1=%-8s pd=%s"
                % (name, entry.chi, entry.sigma, entry.pi1,
                   "yes" if entry.diagram.pd is not None else "no")
            )
        return 0
    entry = library.get(args.name)
    text = entry.diagram.to_kdf()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args):
    code = 0
    if getattr(args, "library", None) or getattr(args, "diagram", None):
        diagram = load_diagram(args)  # parsing runs the full validation
        print("diagram %s: ok (h1=%d, h2=%d)" % (diagram.name, diagram.h1, diagram.h2))
    if args.backend:
        functor = build_functor(args)
        report = validate_target_category(functor.target)
        print(
            "category %s: %s%s"
            % (
                report.category,
                "ok" if report.ok else "invalid",
                " (modular)" if report.modular else "",
            )
        )
        for problem in report.problems:
            print("  problem:", problem)
        if not report.ok:
            code = 2
    return code


def _add_backend_args(p, required=False):
    p.add_argument("--backend", choices=("group", "pointed", "templieb"),
                   required=required)
    p.add_argument("--group", help="builtin group name (S3, D4, Q8, Zn)")
    p.add_argument("--group-file", help="JSON multiplication table")
    p.add_argument("--factors", help="cyclic factors, e.g. 5 or 2,4")
    p.add_argument("--anyonic", action="store_true",
                   help="use the anyonic quadratic form on Z_n")
    p.add_argument("--category", help="pointed category JSON file")
    p.add_argument("--r", type=int, default=4, help="Temperley-Lieb level")
    p.add_argument("--functor", default="id",
                   help="id, refine (pointed) or integer-spins (templieb)")


def _add_diagram_args(p):
    p.add_argument("--library", help="builtin diagram name")
    p.add_argument("--diagram", help="KDF file")


def _add_common(p):
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--skein-cap", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "table"), default="table")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def make_parser():
    parser = argparse.ArgumentParser(
        prog="kirbycalc",
        description="Dichromatic invariants of closed 4-manifolds "
        "from Kirby diagrams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="compute one invariant")
    _add_diagram_args(p)
    _add_backend_args(p, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("table", help="evaluate the whole library")
    _add_backend_args(p, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("check-moves", help="randomized move-invariance suite")
    _add_backend_args(p, required=True)
    _add_common(p)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_check_moves)

    p = sub.add_parser("pi1", help="fundamental group presentation")
    _add_diagram_args(p)
    p.add_argument("--group", help="also count homomorphisms to this group")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("library", help="list or export builtin diagrams")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.set_defaults(func=cmd_library)

    p = sub.add_parser("validate", help="validate categories and diagrams")
    _add_diagram_args(p)
    _add_backend_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimit as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except (KirbyCalcError, OSError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
