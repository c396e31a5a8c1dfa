"""Affine transport of rules, composite application, error reporting.

A rule on [-1,1] is carried to [a,b] by x = a + (b-a)(t+1)/2 with weights
scaled by (b-a)/2; the composite form applies the transported rule on n equal
subintervals and sums by a fixed balanced tree, so float-mode results are
reproducible bit for bit at a given precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError, EvaluationError, RepresentationError
from .exact import ExactScalar, exactify, fraction_to_mpf
from .expr import Expr, _eval_mpf, eval_exact, is_exactly_evaluable
from .numeric import NumericContext, pairwise_sum, pi_reference
from .rules import QuadRule

__all__ = [
    "NumericContext",
    "pi_reference",
    "TransportedRule",
    "CompositeJob",
    "transform",
    "composite_apply",
    "ErrorReport",
    "error_report",
    "resolve_reference",
    "run_error_table",
]


@dataclass(frozen=True)
class TransportedRule:
    """Rule data moved to [a, b]; nodes may leave [-1,1], so not a QuadRule."""

    points: tuple[tuple[ExactScalar, Fraction], ...]
    a: Fraction
    b: Fraction


def transform(rule: QuadRule, a, b) -> TransportedRule:
    """Exact affine transport of nodes and weights to [a, b]."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise DomainError(f"composite: need a < b, got [{a}, {b}]")
    half = (b - a) / 2
    shift = a + half
    points = tuple((shift + half * node, half * w) for node, w in rule.points)
    return TransportedRule(points, a, b)


@dataclass(frozen=True)
class CompositeJob:
    rule: QuadRule
    a: Fraction
    b: Fraction
    n: int
    integrand: Expr
    context: NumericContext
    reference: object = None  # "pi", a Fraction, or an exact decimal string
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a >= self.b:
            raise DomainError(f"composite: need a < b, got [{self.a}, {self.b}]")
        if self.n < 1:
            raise DomainError(f"composite: subdivision count must be >= 1, got {self.n}")


def _composite_exact(job: CompositeJob) -> Fraction:
    width = (job.b - job.a) / job.n
    sub_values = []
    for s in range(job.n):
        lo = job.a + s * width
        tr = transform(job.rule, lo, lo + width)
        terms = [w * eval_exact(job.integrand, node) for node, w in tr.points]
        sub_values.append(pairwise_sum(terms))
    total = exactify(pairwise_sum(sub_values))
    if not total.is_rational:
        raise RepresentationError(
            "composite: exact value is irrational; use float mode"
        )
    return total.as_fraction()


def _composite_float(job: CompositeJob):
    ctx = job.context
    with ctx.workdps():
        # surd nodes hit mpf once per job; subintervals reuse the cached values
        base_nodes = [node.to_mpf() for node in job.rule.nodes]
        base_weights = [fraction_to_mpf(w) for w in job.rule.weights]
        width = (job.b - job.a) / job.n
        half = fraction_to_mpf(width / 2)
        sub_values = []
        for s in range(job.n):
            center = fraction_to_mpf(job.a + s * width + width / 2)
            terms = []
            for t, w in zip(base_nodes, base_weights):
                x = center + half * t
                try:
                    terms.append(w * _eval_mpf(job.integrand, x, ctx))
                except ZeroDivisionError:
                    raise EvaluationError(
                        f"composite: integrand undefined at node {mpmath.nstr(x, 17)}"
                    ) from None
            sub_values.append(pairwise_sum(terms))
        total = half * pairwise_sum(sub_values)
    with mpmath.workdps(ctx.precision_digits):
        return +total


def composite_apply(job: CompositeJob):
    """Composite value over n equal subintervals.

    Exact mode returns a Fraction (integrand restricted to +,-,*,/,^); float
    mode returns an mpf at the context precision.
    """
    if job.exact:
        if not is_exactly_evaluable(job.integrand):
            raise RepresentationError(
                "composite: integrand uses pi or a function; exact mode unavailable"
            )
        return _composite_exact(job)
    return _composite_float(job)


@dataclass(frozen=True)
class ErrorReport:
    signed_error: object  # mpf
    significant_digits: int | None


def resolve_reference(reference, context: NumericContext):
    """Reference value as an mpf at working precision ("pi", rational, decimal)."""
    with context.workdps():
        if isinstance(reference, str) and reference.strip().lower() == "pi":
            return pi_reference(context)
        if isinstance(reference, str):
            try:
                return fraction_to_mpf(Fraction(reference.strip()))
            except (ValueError, ZeroDivisionError):
                raise DomainError(
                    f"composite: bad reference {reference!r}; use 'pi', 'p/q' or a decimal"
                ) from None
        if isinstance(reference, (int, Fraction)):
            return fraction_to_mpf(Fraction(reference))
        if isinstance(reference, ExactScalar):
            return reference.to_mpf()
        return mpmath.mpf(reference)


def error_report(value, reference, context: NumericContext) -> ErrorReport:
    """Signed error (reference - value) and significant agreement digits."""
    with context.workdps():
        ref = resolve_reference(reference, context)
        if isinstance(value, Fraction):
            val = fraction_to_mpf(value)
        elif isinstance(value, ExactScalar):
            val = value.to_mpf()
        else:
            val = mpmath.mpf(value)
        err = ref - val
        if ref == 0:
            return ErrorReport(err, None)
        if err == 0:
            return ErrorReport(err, context.precision_digits)
        rel = abs(err) / abs(ref)
        digits = int(mpmath.floor(-mpmath.log10(rel)))
    return ErrorReport(err, max(0, min(digits, context.precision_digits)))


def run_error_table(rule, integrand, a, b, n_list, context, reference=None, exact=False):
    """Rows (n, value, ErrorReport-or-None) shaped like the error tables."""
    rows = []
    for n in n_list:
        job = CompositeJob(rule, a, b, n, integrand, context, reference, exact)
        value = composite_apply(job)
        report = error_report(value, reference, context) if reference is not None else None
        rows.append((n, value, report))
    return rows
