import random
from fractions import Fraction

import mpmath
import pytest

from combquad.builder import BuilderInput, build_combined
from combquad.combine import mean_rule
from combquad.composite import (
    CompositeJob,
    composite_apply,
    error_report,
    pi_reference,
    resolve_reference,
    run_error_table,
    transform,
)
from combquad.errors import DomainError, EvaluationError, RepresentationError
from combquad.expr import eval_exact, parse
from combquad.families import gauss3
from combquad.numeric import NumericContext, machin_pi_scaled, pairwise_sum
from combquad.rules import midpoint, open_newton_cotes5, simpson, trapezoid

G = parse("2/(1+t^2)")


def test_transform_examples():
    tr = transform(trapezoid(), 0, 1)
    assert tr.points == ((Fraction(0), Fraction(1, 2)), (Fraction(1), Fraction(1, 2)))
    mid = transform(midpoint(), 0, 2)
    assert mid.points == ((Fraction(1), Fraction(2)),)
    simp = transform(simpson(), 0, 2)
    assert [(n.as_fraction(), w) for n, w in simp.points] == [
        (0, Fraction(1, 3)),
        (1, Fraction(4, 3)),
        (2, Fraction(1, 3)),
    ]
    # moment oracle on [0, 2]: integral of x^j is 2^(j+1)/(j+1)
    for j in range(4):
        value = sum(w * n.as_fraction() ** j for n, w in simp.points)
        assert value == Fraction(2 ** (j + 1), j + 1)


def test_transform_requires_increasing_interval():
    with pytest.raises(DomainError):
        transform(midpoint(), 1, 1)
    with pytest.raises(DomainError):
        transform(midpoint(), 2, -1)


def test_composite_exact_midpoint():
    ctx = NumericContext(20)
    job = CompositeJob(midpoint(), -1, 1, 2, G, ctx, exact=True)
    # hand evaluation: g(-1/2) = g(1/2) = 8/5
    assert composite_apply(job) == Fraction(16, 5)


def test_composite_n1_equals_single_application():
    ctx = NumericContext(20)
    for rule in (midpoint(), simpson(), gauss3()):
        job = CompositeJob(rule, -1, 1, 1, G, ctx, exact=True)
        single = sum(w * eval_exact(G, node) for node, w in rule.points)
        assert composite_apply(job) == single


def test_composite_exact_grouping_independent():
    ctx = NumericContext(20)
    for n in (1, 2, 3, 5, 8):
        job = CompositeJob(simpson(), -1, 1, n, G, ctx, exact=True)
        value = composite_apply(job)
        # sequential-order oracle
        width = Fraction(2, n)
        total = Fraction(0)
        for s in range(n):
            tr = transform(simpson(), -1 + s * width, -1 + (s + 1) * width)
            for node, w in tr.points:
                total += w * eval_exact(G, node)
        assert value == total


def test_composite_exact_mode_rejects_transcendentals():
    ctx = NumericContext(20)
    with pytest.raises(RepresentationError):
        composite_apply(CompositeJob(midpoint(), -1, 1, 1, parse("sin(t)"), ctx, exact=True))


def test_composite_names_pole_node():
    ctx = NumericContext(20)
    bad = parse("1/t")
    with pytest.raises(EvaluationError):
        composite_apply(CompositeJob(midpoint(), -1, 1, 1, bad, ctx, exact=True))
    with pytest.raises(EvaluationError):
        composite_apply(CompositeJob(midpoint(), -1, 1, 1, bad, ctx))


def test_composite_float_matches_exact():
    ctx = NumericContext(40)
    for n in (1, 4, 9):
        exact = composite_apply(CompositeJob(simpson(), -1, 1, n, G, ctx, exact=True))
        approx = composite_apply(CompositeJob(simpson(), -1, 1, n, G, ctx))
        with ctx.workdps():
            diff = abs(approx - mpmath.mpf(exact.numerator) / exact.denominator)
            assert diff < mpmath.mpf(10) ** -38


def test_guard_digits_suffice():
    rule = gauss3()
    for prec in (20, 40):
        v1 = composite_apply(CompositeJob(rule, -1, 1, 7, G, NumericContext(prec)))
        v2 = composite_apply(CompositeJob(rule, -1, 1, 7, G, NumericContext(2 * prec)))
        with mpmath.workdps(3 * prec):
            assert abs(v1 - v2) / abs(v2) < mpmath.mpf(10) ** -prec


def _abs_error(rule, n, ctx):
    value = composite_apply(CompositeJob(rule, -1, 1, n, G, ctx))
    report = error_report(value, "pi", ctx)
    with ctx.workdps():
        return abs(report.signed_error)


# On [-1,1] the model integrand superconverges: its odd derivatives of order
# 3 and 7 vanish at +/-1, so the h^(m+1) endpoint term of the composite error
# expansion drops out for these degree-3/7 rules and the observed ratio is
# 2^(m+3), not the generic 2^(m+1).
@pytest.mark.parametrize(
    "rule_factory,degree,n_values",
    [
        (simpson, 3, (8, 16, 32)),
        (
            lambda: build_combined(
                BuilderInput((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)))
            ).flattened,
            7,
            (8, 16),
        ),
        (
            lambda: mean_rule(gauss3(), open_newton_cotes5()).flattened,
            7,
            (8, 16),
        ),
    ],
)
def test_convergence_order_on_symmetric_interval(rule_factory, degree, n_values):
    rule = rule_factory()
    ctx = NumericContext(60)
    order = 2 ** (degree + 3)
    with ctx.workdps():
        for n in n_values:
            ratio = _abs_error(rule, n, ctx) / _abs_error(rule, 2 * n, ctx)
            assert order / 2 <= ratio <= order * 2


def test_convergence_order_generic_interval():
    # [0, 1/2] breaks the symmetry, restoring the generic 2^(m+1) rate
    ctx = NumericContext(60)
    with mpmath.workdps(80):
        reference = mpmath.nstr(2 * mpmath.atan(mpmath.mpf(1) / 2), 70)

    def abs_error(rule, n):
        value = composite_apply(CompositeJob(rule, 0, Fraction(1, 2), n, G, ctx))
        with ctx.workdps():
            return abs(error_report(value, reference, ctx).signed_error)

    w3 = build_combined(
        BuilderInput((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)))
    ).flattened
    with ctx.workdps():
        for n in (8, 16, 32):
            ratio = abs_error(simpson(), n) / abs_error(simpson(), 2 * n)
            assert 8 <= ratio <= 32
        for n in (4, 8, 16):
            ratio = abs_error(w3, n) / abs_error(w3, 2 * n)
            assert 128 <= ratio <= 512


def test_pi_reference_values():
    ctx = NumericContext(10)
    with ctx.workdps():
        assert mpmath.nstr(pi_reference(ctx), 10) == "3.141592654"
    ctx1 = NumericContext(1)
    with ctx1.workdps():
        assert abs(pi_reference(ctx1) - mpmath.mpf("3.14159265")) < mpmath.mpf("1e-8")


def test_pi_reference_against_mpmath():
    # independent check of the Machin series against mpmath's pi
    for digits in (10, 60, 600):
        ctx = NumericContext(digits)
        with mpmath.workdps(digits + 20):
            assert abs(pi_reference(ctx) - mpmath.pi) < mpmath.mpf(10) ** -(digits + 5)


def test_pi_reference_stable_under_extra_guard():
    # series truncation error stays far inside the 10 guard digits: the
    # 600-digit value is unchanged by 50 extra guard digits
    a = machin_pi_scaled(610)
    b = machin_pi_scaled(660) // 10**50
    assert abs(a - b) < 10**5  # agree through digit 605 of 610


def test_error_report_examples():
    ctx = NumericContext(30)
    r = error_report(Fraction(47, 15), "pi", ctx)
    with ctx.workdps():
        assert abs(r.signed_error - mpmath.mpf("0.00825932")) < mpmath.mpf("1e-6")
    r2 = error_report(Fraction(1321, 420), "pi", ctx)
    with ctx.workdps():
        assert abs(r2.signed_error + mpmath.mpf("0.0036450")) < mpmath.mpf("1e-6")
    assert r.significant_digits == 2


def test_error_report_edge_cases():
    ctx = NumericContext(25)
    same = error_report(Fraction(3, 7), Fraction(3, 7), ctx)
    assert same.signed_error == 0
    assert same.significant_digits == 25  # capped at the context precision
    zero_ref = error_report(Fraction(1, 100), Fraction(0), ctx)
    assert zero_ref.significant_digits is None
    with ctx.workdps():
        assert zero_ref.signed_error == mpmath.mpf(-1) / 100
    huge = error_report(Fraction(1000), Fraction(1, 10), ctx)
    assert huge.significant_digits == 0


def test_resolve_reference_forms():
    ctx = NumericContext(20)
    with ctx.workdps():
        assert resolve_reference("3/2", ctx) == mpmath.mpf(3) / 2
        assert resolve_reference("1.25", ctx) == mpmath.mpf("1.25")
        assert resolve_reference(Fraction(2), ctx) == 2
        assert abs(resolve_reference("pi", ctx) - mpmath.pi) < mpmath.mpf("1e-19")
    with pytest.raises(DomainError):
        resolve_reference("two", ctx)


def test_run_error_table_shape():
    ctx = NumericContext(20)
    rows = run_error_table(simpson(), G, Fraction(-1), Fraction(1), [1, 2], ctx, "pi", exact=True)
    assert [n for n, _, _ in rows] == [1, 2]
    assert rows[0][1] == Fraction(10, 3)
    assert all(report is not None for _, _, report in rows)
    rows2 = run_error_table(simpson(), G, Fraction(-1), Fraction(1), [2], ctx)
    assert rows2[0][2] is None


def test_pairwise_sum_orderings():
    rng = random.Random(1)
    values = [Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(37)]
    assert pairwise_sum(values) == sum(values)
    assert pairwise_sum([]) == 0
