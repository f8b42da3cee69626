"""Command-line entry point: binquartic <command> [options].

Exit codes: 0 success, 1 computational error, 2 usage error.  Integers are
printed in full and exact rationals as num/den; ratios against X^(5/6) are
irrational and printed to six decimals.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction

ZETA2 = math.pi ** 2 / 6


class Table:
    """Rows with a fixed column order, written as CSV or JSON lines."""

    def __init__(self, columns, fmt, out=None):
        self.columns = columns
        self.fmt = fmt
        self.out = out or sys.stdout
        if fmt == "csv":
            self.writer = csv.writer(self.out, lineterminator="\n")
            self.writer.writerow(columns)

    def row(self, *values):
        values = [_text(v) for v in values]
        if self.fmt == "csv":
            self.writer.writerow(values)
        else:
            self.out.write(json.dumps(dict(zip(self.columns, values))) + "\n")


def _text(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _positive_rational(text):
    x = _rational(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return x


def _prime(text):
    import sympy
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not sympy.isprime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def _scale(X):
    return float(X) ** (5 / 6)


# ---------------------------------------------------------------- commands

def cmd_eligible(args):
    from .enumeration import count_eligible_pairs, eligible_pairs
    target = {"+": Fraction(8, 135), "-": Fraction(32, 135)}[args.disc_sign]
    if args.rows:
        t = Table(["I", "J"], args.format)
        n = 0
        for pair in eligible_pairs(args.height_max, args.disc_sign):
            t.row(pair.I, pair.J)
            n += 1
    else:
        n = count_eligible_pairs(args.height_max, args.disc_sign)
    s = Table(["sign", "X", "count", "ratio", "target", "target_value"], args.format)
    s.row(args.disc_sign, args.height_max, n, n / _scale(args.height_max), target, float(target))
    return 0


CLASS_TARGETS = {"0": Fraction(4, 135), "1": Fraction(32, 135), "2": Fraction(8, 135)}


def _open_cache(path):
    if path is None:
        return None
    from .cache import FiberCache
    return FiberCache(path)


def cmd_count_classes(args):
    from .enumeration import count_quartic_classes
    types = None if args.root_type == "all" else [args.root_type]
    predicate = None if args.filter == "none" else "strongly-maximal"
    cache = _open_cache(args.cache)
    res = count_quartic_classes(args.height_max, types, predicate, cache)
    t = Table(["root_type", "X", "count", "ratio", "target", "target_value"], args.format)
    rows = ["0", "1", "2+", "2-", "2"] if args.root_type == "all" else [args.root_type]
    for key in rows:
        idx = key[0]
        if key == "2":
            n = res.by_index(2, args.weighted)
        else:
            n = (res.weighted if args.weighted else res.counts)[key]
        target_text, target_value = "", ""
        if key in CLASS_TARGETS:
            base = CLASS_TARGETS[idx]
            if predicate is None:
                target_text, target_value = f"{base} zeta(2)", float(base) * ZETA2
            else:
                target_text, target_value = f"{base} / zeta(2)", float(base) / ZETA2
        t.row(key, args.height_max, n, float(n) / _scale(args.height_max), target_text, target_value)
    t.row("reducible", args.height_max, res.reducible, "", "", "")
    t.row("big-stabilizer", args.height_max, res.big_stabilizer, "", "", "")
    return 0


def cmd_densities(args):
    from . import local
    p = args.prime
    t = Table(["family", "row", "count", "total", "density", "target", "status"], args.format)
    failures = 0

    def emit(row, got, target, total):
        nonlocal failures
        ok = got == target
        failures += not ok
        t.row(args.family, row, got * total, total, got, target, "OK" if ok else "MISMATCH")

    if args.family == "monic-cubic":
        total = p ** 3
        for sym, target in local.monic_type_densities(p).items():
            emit(sym, local.density("monic-cubic", p, sym), target, total)
        total = p ** 6
        for sym, target in local.monic_maximal_type_densities(p).items():
            emit("maximal " + sym, local.density("monic-cubic", p, sym, True), target, total)
        emit("maximal", local.density("monic-cubic", p, maximal=True), local.maximal_monic_density(p), total)
    elif args.family == "quartic":
        total = p ** 10
        for sym, target in local.strongly_maximal_quartic_type_densities(p).items():
            emit("strongly-maximal " + sym, local.density("quartic", p, sym, True), target, total)
        emit("strongly-maximal", local.density("quartic", p, maximal=True),
             local.strongly_maximal_quartic_density(p), total)
    else:
        total = p ** 8
        emit("maximal", local.density("general-cubic", p, maximal=True),
             local.maximal_general_cubic_density(p), total)
    return 1 if failures else 0


def _parse_curve(text):
    try:
        A, B = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected A,B")
    return A, B


def cmd_selmer(args):
    from .selmer import EllipticCurve, infinite_order_certificate, selmer_report
    E = EllipticCurve(*args.curve)
    rep = selmer_report(E)
    t = Table(["curve", "I", "J", "class", "representative", "soluble_at"], args.format)
    for k, c in enumerate(rep.classes):
        places = " ".join(str(p) for p in c.certificate)
        t.row(str(E), rep.pair.I, rep.pair.J, k, ",".join(str(x) for x in c.representative), places)
    cert = infinite_order_certificate(E)
    s = Table(["curve", "selmer_size", "insoluble_classes", "infinite_order_point"], args.format)
    point = "" if cert is None else f"({_text(cert[0][0])},{_text(cert[0][1])}); {cert[1]}P has x={_text(cert[2][0])}"
    s.row(str(E), rep.size, rep.insoluble, point)
    return 0


def _family(text):
    from pathlib import Path
    from .selmer import CurveFamily
    path = Path(text)
    if path.is_file():
        text = path.read_text()
    try:
        return CurveFamily.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def cmd_selmer_average(args):
    from .selmer import predicted_mean, selmer_average
    target = predicted_mean()
    t = Table(["X", "curves", "mean", "mean_value", "histogram", "non_rigid", "two_torsion", "target"], args.format)
    for X in _ladder(args.height_max, args.ladder):
        a = selmer_average(args.family, X)
        hist = " ".join(f"{k}:{v}" for k, v in sorted(a.histogram.items()))
        mean = a.mean if a.mean is not None else ""
        t.row(X, a.total, mean, float(a.mean) if a.mean is not None else "", hist,
              a.non_rigid, a.two_torsion, target)
    return 0


def _ladder(top, rungs):
    return [top / 10 ** k for k in range(rungs - 1, -1, -1)]


def _condition(text):
    try:
        p, sym = text.split(":")
        return int(p), sym
    except ValueError:
        raise argparse.ArgumentTypeError("expected p:symbol, e.g. 3:(111)")


def cmd_classgroup(args):
    from .classgroup import TARGETS, doubling_ladder, mcc_ladder
    key = (args.signature, args.narrow)
    if key not in TARGETS:
        raise ValueError("the narrow group only differs for totally real fields")
    cache = _open_cache(args.cache)
    rungs = mcc_ladder(doubling_ladder(args.height_max, args.ladder), args.condition, cache)
    t = Table(["X", "signature", "narrow", "fields", "mean", "mean_value", "histogram", "target"], args.format)
    for X, res in rungs.items():
        a = res[key]
        hist = " ".join(f"{k}:{v}" for k, v in sorted(a.histogram.items()))
        mean = a.mean if a.mean is not None else ""
        t.row(X, args.signature, args.narrow, a.fields, mean,
              float(a.mean) if a.mean is not None else "", hist, TARGETS[key])
    return 0


def cmd_nmono(args):
    from .enumeration import n_monogenized_cubic_count
    pos, neg = n_monogenized_cubic_count(args.height_max, args.delta)
    scale = float(args.height_max) ** (5 / 6 + 2 * float(args.delta) / 3)
    t = Table(["sign", "X", "delta", "count", "ratio", "target", "target_value"], args.format)
    for sign, n, target in (("+", pos, Fraction(4, 45)), ("-", neg, Fraction(16, 45))):
        t.row(sign, args.height_max, args.delta, n, n / scale, target, float(target))
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    ap = argparse.ArgumentParser(prog="binquartic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=["csv", "json-lines"], default="csv")
        return sp

    sp = command("eligible", cmd_eligible, "eligible invariant pairs below a height")
    sp.add_argument("--height-max", type=_positive_rational, required=True)
    sp.add_argument("--disc-sign", choices=["+", "-"], required=True)
    sp.add_argument("--count-only", dest="rows", action="store_false",
                    help="skip the listing and count arithmetically")

    sp = command("count-classes", cmd_count_classes, "GL2(Z)-classes of irreducible quartics")
    sp.add_argument("--height-max", type=_positive_rational, required=True)
    sp.add_argument("--root-type", choices=["0", "1", "2+", "2-", "all"], default="all")
    sp.add_argument("--filter", choices=["none", "strongly-maximal"], default="none")
    sp.add_argument("--weighted", type=_on_off, default=False, metavar="{on,off}")
    sp.add_argument("--cache", default=None, help="cache directory")

    sp = command("densities", cmd_densities, "exact p-adic densities against closed forms")
    sp.add_argument("--prime", type=_prime, required=True)
    sp.add_argument("--family", choices=["monic-cubic", "quartic", "general-cubic"], required=True)

    sp = command("selmer", cmd_selmer, "2-Selmer group of y^2 = x^3 + Ax + B")
    sp.add_argument("--curve", type=_parse_curve, required=True, metavar="A,B")

    sp = command("selmer-average", cmd_selmer_average, "average Selmer size over a family")
    sp.add_argument("--height-max", type=_positive_rational, required=True)
    sp.add_argument("--family", type=_family, default="all",
                    help="'all', a constraint string 'm:A,B|A,B;...', or a file holding one")
    sp.add_argument("--ladder", type=int, default=1, help="rungs, dividing X by 10 each step")

    sp = command("classgroup", cmd_classgroup, "average 2-torsion of class groups")
    sp.add_argument("--height-max", type=_positive_rational, required=True)
    sp.add_argument("--signature", choices=["totally-real", "complex"], required=True)
    sp.add_argument("--narrow", type=_on_off, default=False, metavar="{on,off}")
    sp.add_argument("--condition", type=_condition, action="append", default=[],
                    help="splitting condition p:symbol on the cubic; repeatable")
    sp.add_argument("--ladder", type=int, default=1, help="rungs, halving X each step")
    sp.add_argument("--cache", default=None, help="cache directory")

    sp = command("nmono", cmd_nmono, "n-monogenized cubic counts")
    sp.add_argument("--height-max", type=_positive_rational, required=True)
    sp.add_argument("--delta", type=_rational, required=True)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
