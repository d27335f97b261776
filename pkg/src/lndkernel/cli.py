"""Command-line driver: ``lndkernel <verb> ...``.

Exit status is 0 on success or when every check passes, 1 when a
verification fails, and 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from . import derivation, families, fgideal, grading, groebner, imagekernel, sagbi
from .polyring import R, MonomialOrder, Polynomial, PolynomialSyntaxError, VariableSet, parse

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_MEMBER_NAME = re.compile(r"\b(beta|gamma|delta)(\d+)\b")


class UsageError(Exception):
    pass


def parse_expression(text: str) -> Polynomial:
    """Parse over R; ``g`` and family members such as ``beta0`` or ``gamma12`` are allowed."""
    found = {m.group(0): (m.group(1), int(m.group(2))) for m in _MEMBER_NAME.finditer(text)}
    names = ["g"] + sorted(found)
    p = parse(text, R.extend(*names))
    bindings = {"g": parse(families.G_TEXT)}
    if found:
        archive = families.build_archive(max(n for _, n in found.values()))
        bindings.update({name: archive.eta(kind, n) for name, (kind, n) in found.items()})
    return p.substitute(bindings, R)


def _order(name: str):
    if name == "s-lex":
        return MonomialOrder.lex(R, ("x", "s", "t", "u", "v"))
    return R.default_order()


def _show(p: Polynomial, args) -> str:
    return p.to_str(_order(args.order)) if p.ring == R else str(p)


def _emit(report, out=None) -> int:
    text = report.render()
    print(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# verbs

def cmd_poly(args) -> int:
    print(_show(parse_expression(args.expr), args))
    return EXIT_OK


def cmd_derive(args) -> int:
    der = derivation.DELTA if args.delta else derivation.D
    p = parse_expression(args.expr)
    if args.action == "apply":
        print(_show(derivation.apply(der, p), args))
    elif args.action == "power":
        if args.i is None:
            raise UsageError("derive power needs an exponent")
        print(_show(derivation.apply_power(der, p, args.i), args))
    elif args.action == "index":
        print(derivation.nilpotency_index(der, p))
    elif args.action == "invariant":
        print("true" if derivation.is_invariant(p, der) else "false")
    return EXIT_OK


def cmd_exp(args) -> int:
    p = parse_expression(args.expr)
    if args.alpha is None:
        print(derivation.exp_action(p))
    else:
        try:
            alpha = Fraction(args.alpha)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad rational {args.alpha!r}") from None
        print(_show(derivation.exp_action(p, alpha), args))
    return EXIT_OK


def cmd_slice(args) -> int:
    a = args.a
    if args.action == "basis":
        for p in grading.slice_basis(a, args.k).polynomials():
            print(_show(p, args))
    elif args.action == "kernel":
        basis = imagekernel.r_kernel_slice(a, args.k) if args.with_v else imagekernel.kernel_slice(a, args.k)
        for p in basis:
            print(_show(p, args))
    elif args.action == "map":
        sm = imagekernel.slice_map(a, args.k)
        print("domain  " + " ".join(_show(p, args) for p in sm.domain.polynomials()))
        print("codomain " + " ".join(_show(p, args) for p in sm.codomain.polynomials()))
        for row in sm.matrix:
            print(" ".join(str(c) for c in row))
    elif args.action == "count":
        print(grading.count_kernel_monomials(a))
    elif args.action == "truncation":
        t = imagekernel.truncation_dims(a)
        print(f"n={t.n} slice=({t.degree},{t.rho}) dim_M={t.dim_M} dim_N={t.dim_N} "
              f"dim_piM={t.dim_piM} dim_piN={t.dim_piN}")
    elif args.action == "det":
        print(imagekernel.binomial_determinant(a))
    return EXIT_OK


def _ideal_ring(args):
    if args.vars:
        names = [n.strip() for n in args.vars.split(",") if n.strip()]
        return VariableSet(names)
    return R


def cmd_groebner(args) -> int:
    if args.action == "elimination":
        gb = imagekernel._j_basis(0, parse("x^3"), imagekernel.KERNEL_GENERATORS)
        for p in gb:
            print(p.to_str(imagekernel.J_ORDER))
        return EXIT_OK
    if not args.file:
        raise UsageError(f"groebner {args.action} needs an ideal file")
    ring = _ideal_ring(args)
    gens = groebner.read_ideal_file(args.file, ring)
    if not gens:
        raise UsageError("ideal file has no generators")
    order = ring.default_order()
    if args.action == "basis":
        for p in groebner.buchberger(gens, order):
            print(p.to_str(order))
        return EXIT_OK
    if args.expr is None:
        raise UsageError(f"groebner {args.action} needs --expr")
    target = parse(args.expr, ring)
    if args.action == "member":
        res = groebner.ideal_membership(target, gens, order)
        if res.member:
            print("MEMBER")
            for q, g in zip(res.quotients, gens):
                print(f"  ({q.to_str(order)}) * ({g.to_str(order)})")
        else:
            print(f"NOT-MEMBER normal form = {res.normal_form.to_str(order)}")
    else:
        print("true" if groebner.radical_membership(target, gens, order) else "false")
    return EXIT_OK


def cmd_image(args) -> int:
    res = imagekernel.image_membership(parse_expression(args.expr))
    if res.member:
        print(f"MEMBER preimage = {_show(res.preimage, args)}")
    else:
        print(f"NOT-MEMBER q~ = {res.normal_form.to_str(imagekernel.J_ORDER)}")
    return EXIT_OK


def cmd_families(args) -> int:
    if args.action == "build":
        archive = families.build_archive(args.upto)
        text = families.dump_archive(archive, _order(args.order))
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    if args.action == "verify":
        if not args.path:
            raise UsageError("families verify needs an archive path")
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
        try:
            archive = families.load_archive(text)
        except families.ArchiveFormatError as exc:
            print(f"FAIL {exc}")
            return EXIT_FAIL
        return _emit(families.verify_archive(archive), args.out)
    # show
    if not args.path:
        raise UsageError("families show needs KIND:N, e.g. gamma:2")
    kind, _, n = args.path.partition(":")
    if kind not in families.KINDS or not n.isdigit():
        raise UsageError(f"bad family reference {args.path!r}")
    archive = families.build_archive(int(n))
    print(_show(archive.eta(kind, int(n)), args))
    return EXIT_OK


def cmd_sagbi(args) -> int:
    archive = families.build_archive(args.upto)
    if args.expr:
        labels, gens = sagbi.generator_set(archive, args.upto)
        res = sagbi.subduct(parse_expression(args.expr), gens)
        print(f"residue = {_show(res.residue, args)}")
        for c, parts in res.expression:
            names = " * ".join(
                ("g" if labels[j][0] == "g" else f"{labels[j][0]}_{labels[j][1]}") + (f"^{k}" if k > 1 else "")
                for j, k in parts
            )
            print(f"  {c} * {names or '1'}")
        return EXIT_OK
    return _emit(sagbi.verify_sagbi(archive, args.upto), args.out)


def cmd_fgideal(args) -> int:
    return _emit(fgideal.fg_ideal_summary(args.upto), args.out)


def verify_all(N: int):
    """Every suite in dependency order, as one report."""
    from .report import Report

    rep = Report(f"verify-N{N}")
    archive = families.build_archive(N)
    rep.extend(families.verify_archive(archive))
    gb = imagekernel._j_basis(0, parse("x^3"), imagekernel.KERNEL_GENERATORS)
    rep.check(groebner.is_groebner(gb), "elimination ideal basis is a Groebner basis")
    rep.extend(sagbi.verify_sagbi(archive, N))
    rep.extend(fgideal.verify_fixed_point_ideals(archive))
    rep.extend(fgideal.fg_ideal_summary(N))
    return rep


def cmd_verify(args) -> int:
    return _emit(verify_all(args.upto), args.out)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=("r-lex", "s-lex"), default="r-lex",
                        help="print order: r-lex is lex v>u>t>s>x, s-lex is lex x>s>t>u>v")
    common.add_argument("--out", help="also write the output to this file")

    ap = argparse.ArgumentParser(prog="lndkernel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("poly", parents=[common], help="parse and print a polynomial")
    p.add_argument("expr")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("derive", parents=[common], help="apply D (or Delta)")
    p.add_argument("action", choices=("apply", "power", "index", "invariant"))
    p.add_argument("expr")
    p.add_argument("i", nargs="?", type=int)
    p.add_argument("--delta", action="store_true", help="use Delta instead of D")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("exp", parents=[common], help="exp(alpha D) applied to a polynomial")
    p.add_argument("expr")
    p.add_argument("--alpha", help="rational value; formal when omitted")
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("slice", parents=[common], help="graded slices of S")
    p.add_argument("action", choices=("basis", "kernel", "map", "count", "truncation", "det"))
    p.add_argument("a", type=int)
    p.add_argument("k", type=int, nargs="?", default=0)
    p.add_argument("--with-v", action="store_true", help="kernel of D on the slice of R")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("groebner", parents=[common], help="Groebner bases and membership")
    p.add_argument("action", choices=("basis", "member", "radical", "elimination"))
    p.add_argument("file", nargs="?")
    p.add_argument("--expr")
    p.add_argument("--vars", help="comma-separated variables, most significant last")
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("image", parents=[common], help="membership in Delta(S)")
    p.add_argument("action", choices=("member",))
    p.add_argument("expr")
    p.set_defaults(func=cmd_image)

    p = sub.add_parser("families", parents=[common], help="build, verify or show the families")
    p.add_argument("action", choices=("build", "verify", "show"))
    p.add_argument("path", nargs="?")
    p.add_argument("--upto", type=int, default=6)
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("sagbi", parents=[common], help="subduction and the SAGBI checks")
    p.add_argument("--upto", type=int, default=4)
    p.add_argument("--expr", help="subduct this polynomial instead of running the checks")
    p.set_defaults(func=cmd_sagbi)

    p = sub.add_parser("fgideal", parents=[common], help="finite generation ideal checks")
    p.add_argument("--upto", type=int, default=4)
    p.set_defaults(func=cmd_fgideal)

    p = sub.add_parser("verify-paper", parents=[common], help="run every suite")
    p.add_argument("--upto", type=int, default=6)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "upto", 0) < 0:
        print("error: --upto must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        code = args.func(args)
    except PolynomialSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
