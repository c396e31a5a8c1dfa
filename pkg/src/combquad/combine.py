"""Pairwise rule combination: degree-raising combined rule and the mean rule.

Given two rules of common degree m whose moments at t^(m+1) differ, the unique
coefficient-sum-1 combination exact at t^(m+1) raises the degree; the mean
rule extends this with an arithmetic-mean branch for equal moments, and the
same coefficients solve the least-squares moment-matching problem, which
serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, RepresentationError
from .exact import rational_to_str
from .rules import (
    QuadRule,
    RuleClassification,
    classification_to_jsonable,
    classify,
    moment,
    rule_to_jsonable,
)


@dataclass(frozen=True)
class LinearCombination:
    """Coefficient list over constituent rules; producers keep sum(coeffs) = 1."""

    terms: tuple[tuple[Fraction, QuadRule], ...]

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c for c, _ in self.terms)


@dataclass(frozen=True)
class CombineReport:
    combination: LinearCombination
    flattened: QuadRule
    input_classifications: tuple[RuleClassification, RuleClassification]
    output_classification: RuleClassification
    bracketing: bool

    def to_jsonable(self) -> dict:
        return {
            "coefficients": [rational_to_str(c) for c in self.combination.coefficients()],
            "bracketing": self.bracketing,
            "input_classifications": [
                classification_to_jsonable(c) for c in self.input_classifications
            ],
            "output_classification": classification_to_jsonable(
                self.output_classification
            ),
            "flattened": rule_to_jsonable(self.flattened),
        }


def flatten(comb: LinearCombination) -> QuadRule:
    """Merge coefficient-scaled points; equal nodes sum, zero weights drop."""
    acc: dict = {}
    order: list = []
    for coeff, rule in comb.terms:
        for node, w in rule.points:
            if node in acc:
                acc[node] += coeff * w
            else:
                acc[node] = coeff * w
                order.append(node)
    points = [(node, acc[node]) for node in order if acc[node]]
    points.sort(key=lambda p: p[0])
    label = " + ".join(
        f"{rational_to_str(c)}*({rule.label or 'rule'})" for c, rule in comb.terms
    )
    return QuadRule(points, label)


def _paired_classifications(a: QuadRule, b: QuadRule, caller: str):
    ca, cb = classify(a), classify(b)
    if ca.degree != cb.degree:
        raise DomainError(
            f"combine: {caller} needs equal degrees, got {ca.degree} and {cb.degree}"
        )
    if ca.degree < 0:
        raise DomainError(f"combine: {caller} needs degree >= 0 rules")
    return ca, cb


def _as_rational_coeff(x, what: str) -> Fraction:
    try:
        return x.as_fraction() if hasattr(x, "as_fraction") else Fraction(x)
    except RepresentationError:
        raise RepresentationError(
            f"combine: {what} is irrational; coefficients must be rational"
        ) from None


def _build_report(alpha, beta, a, b, ca, cb) -> CombineReport:
    comb = LinearCombination(((alpha, a), (beta, b)))
    flat = flatten(comb)
    return CombineReport(
        combination=comb,
        flattened=flat,
        input_classifications=(ca, cb),
        output_classification=classify(flat),
        bracketing=alpha >= 0 and beta >= 0,
    )


def combine_pair(a: QuadRule, b: QuadRule) -> CombineReport:
    """Degree-raising combination with coefficients
    ((mu - mu_B)/(mu_A - mu_B), (mu_A - mu)/(mu_A - mu_B))."""
    ca, cb = _paired_classifications(a, b, "combine_pair")
    mu_a, mu_b = ca.rule_moment, cb.rule_moment
    if mu_a == mu_b:
        raise DomainError(
            "combine: rule moments at t^(m+1) coincide; use mean_rule instead"
        )
    mu = ca.principal_moment
    denom = mu_a - mu_b
    alpha = _as_rational_coeff((mu - mu_b) / denom, "combination coefficient")
    beta = _as_rational_coeff((mu_a - mu) / denom, "combination coefficient")
    return _build_report(alpha, beta, a, b, ca, cb)


def mean_rule(a: QuadRule, b: QuadRule) -> CombineReport:
    """Mean rule: arithmetic mean when the rule moments agree, otherwise the
    same coefficients as combine_pair; output degree is at least m+1."""
    ca, cb = _paired_classifications(a, b, "mean_rule")
    if ca.rule_moment == cb.rule_moment:
        half = Fraction(1, 2)
        return _build_report(half, half, a, b, ca, cb)
    mu = ca.principal_moment
    denom = cb.rule_moment - ca.rule_moment
    alpha = _as_rational_coeff((cb.rule_moment - mu) / denom, "mean coefficient")
    beta = _as_rational_coeff((mu - ca.rule_moment) / denom, "mean coefficient")
    return _build_report(alpha, beta, a, b, ca, cb)


def least_squares_coeffs(a: QuadRule, b: QuadRule) -> tuple[Fraction, Fraction]:
    """Coefficients of the least-squares best approximation to the moment
    vector (mu_0, ..., mu_m, mu); the independent oracle for combine_pair."""
    ca, cb = _paired_classifications(a, b, "least_squares_coeffs")
    mu_a = _as_rational_coeff(ca.rule_moment, "rule moment")
    mu_b = _as_rational_coeff(cb.rule_moment, "rule moment")
    mu = ca.principal_moment
    m = ca.degree
    s = sum((moment(i) ** 2 for i in range(m + 1)), Fraction(0))
    g11 = s + mu_a * mu_a
    g12 = s + mu_a * mu_b
    g22 = s + mu_b * mu_b
    r1 = s + mu_a * mu
    r2 = s + mu_b * mu
    det = g11 * g22 - g12 * g12  # equals s*(mu_a - mu_b)^2
    if det == 0:
        raise DomainError(
            "combine: normal equations are singular (equal rule moments)"
        )
    alpha = (r1 * g22 - r2 * g12) / det
    beta = (g11 * r2 - g12 * r1) / det
    return alpha, beta
