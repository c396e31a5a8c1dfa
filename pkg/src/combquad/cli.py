"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error.  All numeric inputs are
exact: rationals "p/q" or decimal strings; binary floats never cross the CLI
boundary.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath

from . import builder, combine, composite, expr, families, rules
from .errors import CombquadError
from .exact import rational_from_str, rational_to_str
from .numeric import NumericContext, decimal_str


def _rational(text: str) -> Fraction:
    try:
        return rational_from_str(text)
    except CombquadError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _n_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad subdivision list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty subdivision list")
    return values


def _node_list(text: str) -> list[Fraction]:
    return [_rational(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="combquad",
        description="Construct, classify, combine and evaluate quadrature rules "
        "on [-1,1] in exact arithmetic.",
        epilog="Expression grammar for --expr:\n" + expr.GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="degree, moments, defect and sign of a rule")
    sp.add_argument("--rule", required=True, metavar="FILE")

    sp = sub.add_parser("combine", help="degree-raising combination of two rules")
    sp.add_argument("--a", required=True, metavar="FILE")
    sp.add_argument("--b", required=True, metavar="FILE")
    sp.add_argument(
        "--least-squares-check",
        action="store_true",
        help="also solve the normal equations and require equal coefficients",
    )

    sp = sub.add_parser("mean", help="mean rule of two rules")
    sp.add_argument("--a", required=True, metavar="FILE")
    sp.add_argument("--b", required=True, metavar="FILE")

    sp = sub.add_parser("build", help="combined rule from degree-1 rules")
    sp.add_argument("--nodes", type=_node_list, metavar="LIST", help="e.g. 1/2,1/3,1/4")
    sp.add_argument("--random", action="store_true", help="draw pseudorandom nodes")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k", type=int, default=1, help="node count for --random")
    sp.add_argument("--tol", type=_rational, default=Fraction(1, 10**4))
    sp.add_argument("--base", choices=["midpoint", "trapezoid"], default="midpoint")
    sp.add_argument("--out", metavar="FILE", help="write the flattened rule file")

    sp = sub.add_parser("eval", help="composite evaluation and error table (CSV)")
    sp.add_argument("--rule", required=True, metavar="FILE")
    sp.add_argument("--expr", required=True, metavar="STR")
    sp.add_argument("--a", required=True, type=_rational)
    sp.add_argument("--b", required=True, type=_rational)
    sp.add_argument("--n-list", required=True, type=_n_list, metavar="N1,N2,...")
    sp.add_argument("--prec", required=True, type=int, metavar="DIGITS")
    sp.add_argument("--ref", metavar="pi|RAT", help="reference value for errors")
    sp.add_argument("--exact", action="store_true", help="exact rational evaluation")

    sp = sub.add_parser("regionmap", help="raster the sign regions of a rule family")
    sp.add_argument(
        "--family", required=True, choices=["two-point", "three-point-slice"]
    )
    sp.add_argument("--fix", type=_rational, help="t2 for the three-point slice")
    sp.add_argument("--grid", required=True, type=int)
    sp.add_argument("--band", type=_rational, default=Fraction(1, 1000))
    sp.add_argument("--out", required=True, metavar="FILE.pgm|FILE.csv")

    sp = sub.add_parser("legendre-nodes", help="rationalized positive Legendre roots")
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--tol", required=True, type=_rational)

    sub.add_parser("pi-demo", help="scripted reproduction of the headline numbers")
    return p


def _cmd_classify(args) -> int:
    c = rules.classify(rules.load_rule(args.rule))
    print(
        f"degree={c.degree} mu={rational_to_str(c.principal_moment)}"
        f" mu_Q={c.rule_moment} gamma={c.defect}"
        f" gamma_decimal={decimal_str(c.defect)} sign={c.sign.value}"
        + (" warning=not-exact-on-constants" if c.warning else "")
    )
    return 0


def _cmd_combine(args, use_mean: bool) -> int:
    a = rules.load_rule(args.a)
    b = rules.load_rule(args.b)
    if use_mean:
        report = combine.mean_rule(a, b)
    else:
        report = combine.combine_pair(a, b)
        if args.least_squares_check:
            ls = combine.least_squares_coeffs(a, b)
            if ls != tuple(report.combination.coefficients()):
                raise CombquadError(
                    "combine: least-squares oracle disagrees with combination"
                )
    print(json.dumps(report.to_jsonable(), indent=2))
    return 0


def _cmd_build(args) -> int:
    if args.random:
        if args.nodes:
            raise CombquadError("build: --nodes and --random are mutually exclusive")
        nodes = builder.random_rational_nodes(args.seed, args.k, args.tol)
    else:
        if not args.nodes:
            raise CombquadError("build: provide --nodes or --random")
        nodes = args.nodes
    base = builder.BaseRule(args.base)
    built = builder.build_combined(builder.BuilderInput(tuple(nodes), base))
    print(json.dumps(built.to_jsonable(), indent=2))
    if args.out:
        rules.save_rule(built.flattened, args.out)
    return 0


def _cmd_eval(args) -> int:
    rule = rules.load_rule(args.rule)
    integrand = expr.parse(args.expr)
    context = NumericContext(args.prec)
    rows = composite.run_error_table(
        rule,
        integrand,
        args.a,
        args.b,
        args.n_list,
        context,
        reference=args.ref,
        exact=args.exact,
    )
    print("n,value,signed_error,significant_digits")
    for n, value, report in rows:
        if isinstance(value, Fraction):
            value_text = rational_to_str(value)
        else:
            with mpmath.workdps(context.precision_digits):
                value_text = mpmath.nstr(value, context.precision_digits)
        if report is None:
            print(f"{n},{value_text},,")
        else:
            with mpmath.workdps(context.working_dps):
                err_text = mpmath.nstr(report.signed_error, 6)
            digits = "" if report.significant_digits is None else report.significant_digits
            print(f"{n},{value_text},{err_text},{digits}")
    return 0


def _cmd_regionmap(args) -> int:
    family = families.Family(args.family)
    spec = families.RasterSpec(
        family=family,
        grid_size=args.grid,
        fixed_coordinate=args.fix,
        boundary_band=args.band,
    )
    raster = families.region_raster(spec)
    out = str(args.out)
    if out.endswith(".pgm"):
        with open(out, "wb") as fh:
            fh.write(raster.to_pgm_bytes())
    elif out.endswith(".csv"):
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(raster.to_csv_text())
    else:
        raise CombquadError(f"regionmap: output must end in .pgm or .csv, got {out}")
    print(f"wrote {args.grid}x{args.grid} {family.value} map to {out}")
    return 0


def _cmd_legendre_nodes(args) -> int:
    if args.n < 1:
        raise CombquadError(f"legendre-nodes: n must be >= 1, got {args.n}")
    digits = max(30, _tolerance_digits(args.tol) + 15)
    roots = builder.legendre_roots(args.n, digits)
    positive = [r for r in roots if r > 0]
    nodes = [builder.rationalize(r, args.tol) for r in positive]
    print(",".join(rational_to_str(t) for t in nodes))
    return 0


def _tolerance_digits(tol: Fraction) -> int:
    digits = 0
    scaled = tol
    while scaled < 1:
        scaled *= 10
        digits += 1
    return digits


def _check(name: str, ok: bool, detail: str, failures: list) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"{status} {name}: {detail}")
    if not ok:
        failures.append(name)


def _cmd_pi_demo(args) -> int:
    failures: list[str] = []
    g = expr.parse("2/(1+t^2)")
    ctx = NumericContext(30)
    pi30 = composite.pi_reference(ctx)

    def on_g(rule, exact=True):
        job = composite.CompositeJob(rule, -1, 1, 1, g, ctx, exact=exact)
        return composite.composite_apply(job)

    # degree-5 combination of the symmetric two-point rule and Simpson
    two_pt = families.two_point_rule(-_sqrt3_over_3(), _sqrt3_over_3())
    simpson = rules.simpson()
    rep = combine.combine_pair(two_pt, simpson)
    _check(
        "combined-degree5-coefficients",
        rep.combination.coefficients() == (Fraction(3, 5), Fraction(2, 5)),
        f"coefficients {[str(c) for c in rep.combination.coefficients()]}",
        failures,
    )
    y_val = on_g(rep.flattened)
    _check("combined-degree5-value", y_val == Fraction(47, 15), f"Y(g) = {y_val}", failures)
    with ctx.workdps():
        errs = [float(pi30 - 3), float(pi30 - mpmath.mpf(10) / 3), float(pi30 - mpmath.mpf(47) / 15)]
    _check(
        "combined-degree5-errors",
        abs(errs[0] - 0.14) < 0.005 and abs(errs[1] + 0.19) < 0.005 and abs(errs[2] - 0.0083) < 0.005,
        f"errors vs pi ~ {[round(e, 4) for e in errs]}",
        failures,
    )

    # mean of Gauss-3 with the 5-point combination above
    mean1 = combine.mean_rule(families.gauss3(), rep.flattened)
    val = on_g(mean1.flattened)
    _check(
        "mean-degree7",
        mean1.output_classification.degree == 7
        and mean1.output_classification.defect == Fraction(-16, 1575)
        and val == Fraction(1321, 420),
        f"degree {mean1.output_classification.degree}, defect {mean1.output_classification.defect}, value {val}",
        failures,
    )

    # mean of Gauss-3 with the open 5-node Newton-Cotes rule
    mean2 = combine.mean_rule(families.gauss3(), rules.open_newton_cotes5())
    w0 = dict(mean2.flattened.points)[_zero_node()]
    vals = (
        on_g(families.gauss3()),
        on_g(rules.open_newton_cotes5()),
        on_g(mean2.flattened),
    )
    _check(
        "mean-gauss3-nc5",
        w0 == Fraction(1606, 11088)
        and mean2.output_classification.defect == Fraction(16, 1125)
        and vals == (Fraction(19, 6), Fraction(3756, 1189), Fraction(156637, 49938)),
        f"weight(0) = {w0}, gamma = {mean2.output_classification.defect}, values = {tuple(str(v) for v in vals)}",
        failures,
    )

    # combined open rule from nodes 1/2, 1/3, 1/4
    built = builder.build_combined(
        builder.BuilderInput((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)))
    )
    expected = (
        Fraction(-4426, 105),
        Fraction(5344, 315),
        Fraction(-5589, 49),
        Fraction(309248, 2205),
    )
    _check(
        "built-degree7",
        built.coefficients == expected
        and built.classification.degree == 7
        and built.gamma == Fraction(1817, 15120),
        f"coefficients {[str(c) for c in built.coefficients]}, gamma {built.gamma}",
        failures,
    )

    # degree-11 rules over the published rational node set, and the composite run
    nodes = (
        Fraction(41349881, 277750224),
        Fraction(26322066, 60734531),
        Fraction(209827923, 308838634),
        Fraction(130457471, 150806838),
        Fraction(272617463, 279921589),
    )
    mid = builder.build_combined(builder.BuilderInput(nodes, builder.BaseRule.MIDPOINT))
    trap = builder.build_combined(builder.BuilderInput(nodes, builder.BaseRule.TRAPEZOID))
    g_mid = float(decimal_to_float(mid.gamma))
    g_trap = float(decimal_to_float(trap.gamma))
    _check(
        "legendre-gamma",
        mid.classification.degree == 11
        and trap.classification.degree == 11
        and abs(g_mid - 2.105e-17) < 0.01 * 2.105e-17
        and abs(g_trap + 5.243e-18) < 0.01 * 5.243e-18,
        f"gamma_mid ~ {g_mid:.4g}, gamma_trap ~ {g_trap:.4g}",
        failures,
    )
    ctx80 = NumericContext(80)
    job = composite.CompositeJob(trap.flattened, -1, 1, 1024, g, ctx80, reference="pi")
    value = composite.composite_apply(job)
    report = composite.error_report(value, "pi", ctx80)
    with ctx80.workdps():
        err = report.signed_error
        ok = mpmath.mpf("1.0e-61") <= err <= mpmath.mpf("1.3e-61")
        err_text = mpmath.nstr(err, 4)
    _check("composite-pi-60-digits", ok, f"pi - value = {err_text}", failures)

    return 1 if failures else 0


def _sqrt3_over_3():
    from .exact import surd_canonicalize

    return surd_canonicalize(Fraction(1, 3))


def _zero_node():
    from .exact import exactify

    return exactify(0)


def decimal_to_float(x):
    """float of an exact scalar (demo display only)."""
    with mpmath.workdps(30):
        return float(x.to_mpf() if hasattr(x, "to_mpf") else mpmath.mpf(x))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "combine":
            return _cmd_combine(args, use_mean=False)
        if args.command == "mean":
            return _cmd_combine(args, use_mean=True)
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "regionmap":
            return _cmd_regionmap(args)
        if args.command == "legendre-nodes":
            return _cmd_legendre_nodes(args)
        if args.command == "pi-demo":
            return _cmd_pi_demo(args)
        raise CombquadError(f"unknown command {args.command}")
    except CombquadError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
