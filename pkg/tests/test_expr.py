import random
from fractions import Fraction

import mpmath
import pytest

from combquad.errors import EvaluationError, ExactnessError, ExprSyntaxError
from combquad.exact import surd_canonicalize
from combquad.expr import (
    BinOp,
    Call,
    Neg,
    Num,
    Pow,
    Var,
    eval_exact,
    eval_float,
    is_exactly_evaluable,
    parse,
    unparse,
)
from combquad.numeric import NumericContext


def test_parse_model_integrand():
    e = parse("2/(1+t^2)")
    assert e == BinOp("/", Num(Fraction(2)), BinOp("+", Num(Fraction(1)), Pow(Var(), 2)))


def test_parse_variable():
    assert parse("t") == Var()
    assert parse(" t ") == Var()


def test_parse_error_offsets():
    with pytest.raises(ExprSyntaxError) as err:
        parse("2/(1+t^2")
    assert err.value.offset == 8
    with pytest.raises(ExprSyntaxError) as err:
        parse("2 +")
    assert err.value.offset == 3
    with pytest.raises(ExprSyntaxError) as err:
        parse("sin 3")
    assert err.value.offset == 4
    with pytest.raises(ExprSyntaxError) as err:
        parse("2 @ 3")
    assert err.value.offset == 2


def test_parse_unknown_identifier():
    with pytest.raises(ExprSyntaxError) as err:
        parse("2*foo(t)")
    assert "foo" in str(err.value)
    assert err.value.offset == 2


def test_precedence_and_associativity():
    assert eval_exact(parse("1-2-3"), 0) == -4
    assert eval_exact(parse("12/3/2"), 0) == 2
    assert eval_exact(parse("2+3*4"), 0) == 14
    # '^' binds tighter than unary minus
    assert eval_exact(parse("-t^2"), Fraction(3)) == -9
    assert eval_exact(parse("(-t)^2"), Fraction(3)) == 9
    assert eval_exact(parse("--2"), 0) == 2


def test_power_requires_integer_literal():
    with pytest.raises(ExprSyntaxError):
        parse("t^t")
    with pytest.raises(ExprSyntaxError):
        parse("t^1.5")
    with pytest.raises(ExprSyntaxError):
        parse("t^-1")


def test_decimal_literals_are_exact():
    e = parse("0.5*t + 0.125")
    assert eval_exact(e, Fraction(1, 4)) == Fraction(1, 4)
    assert is_exactly_evaluable(e)


def test_eval_exact_examples():
    e = parse("2/(1+t^2)")
    assert eval_exact(e, Fraction(1, 2)) == Fraction(8, 5)
    assert eval_exact(e, 0) == 2
    with pytest.raises(EvaluationError):
        eval_exact(parse("1/t"), 0)


def test_eval_exact_rejects_transcendentals():
    with pytest.raises(ExactnessError):
        eval_exact(parse("sin(t)"), 0)
    with pytest.raises(ExactnessError):
        eval_exact(parse("pi"), 0)
    assert not is_exactly_evaluable(parse("sqrt(t)"))


def test_eval_exact_at_surd_points():
    e = parse("2/(1+t^2)")
    node = surd_canonicalize(Fraction(3, 5))
    assert eval_exact(e, node) == Fraction(5, 4)
    s3 = surd_canonicalize(Fraction(1, 3))
    assert eval_exact(e, s3) == Fraction(3, 2)
    # a value that stays irrational comes back as an exact surd
    assert eval_exact(parse("t + 1"), s3) == 1 + s3


def test_eval_float_examples():
    ctx = NumericContext(30)
    with mpmath.workdps(40):
        one = eval_float(parse("2/(1+t^2)"), 1, ctx)
        assert abs(one - 1) < mpmath.mpf(10) ** -29
        pi_val = eval_float(parse("pi"), 0, ctx)
        assert abs(pi_val - mpmath.pi) < mpmath.mpf(10) ** -29
        atan1 = eval_float(parse("atan(t)"), 1, ctx)
        assert abs(atan1 - mpmath.pi / 4) < mpmath.mpf(10) ** -29


def test_eval_float_domain_errors():
    ctx = NumericContext(20)
    with pytest.raises(EvaluationError):
        eval_float(parse("log(t)"), -1, ctx)
    with pytest.raises(EvaluationError):
        eval_float(parse("sqrt(t)"), -1, ctx)
    with pytest.raises(EvaluationError):
        eval_float(parse("1/t"), 0, ctx)


def test_float_exact_agreement_at_random_points():
    ctx = NumericContext(25)
    exprs = [parse("2/(1+t^2)"), parse("(t^3 - t/2 + 1/4)/(1 + t^2)")]
    rng = random.Random(314159)
    with mpmath.workdps(40):
        eps = mpmath.mpf(10) ** -23
        for _ in range(1000):
            t = Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
            e = rng.choice(exprs)
            exact = eval_exact(e, t)
            approx = eval_float(e, t, ctx)
            scale = max(1, abs(exact))
            assert abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) < eps * scale


def test_unparse_round_trip_fixed_point():
    samples = [
        "2/(1+t^2)",
        "1 - 2 - 3*t",
        "-t^2 + (1+t)^3",
        "sin(cos(t)) * exp(t) - log(1+t^2)/atan(t)",
        "0.5*t - 1.25",
        "2^3 / sqrt(1 + t^2)",
        "-(t + 1)",
        "t/(2*(1+t))",
    ]
    for text in samples:
        tree = parse(text)
        assert parse(unparse(tree)) == tree
        # idempotent pretty-printing
        assert unparse(parse(unparse(tree))) == unparse(tree)


def test_call_and_neg_unparse_shapes():
    assert unparse(parse("sin(t)")) == "sin(t)"
    assert unparse(parse("-t^2")) == "-t^2"
    assert unparse(parse("(-t)^2")) == "(-t)^2"
    assert unparse(Neg(BinOp("+", Var(), Num(Fraction(1))))) == "-(t + 1)"
    assert unparse(Call("atan", Var())) == "atan(t)"
