"""Quadrature rules on [-1,1]: data type, exact moments, degree classification.

A rule of degree m integrates every monomial t^j, j <= m, exactly but fails
at j = m+1.  The defect gamma = (exact moment) - (rule moment) at that first
failing power determines the rule's sign, and two equal-degree rules with
opposite-sign defects are companions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, InternalError
from .exact import (
    ExactScalar,
    exactify,
    node_from_jsonable,
    node_to_jsonable,
    rational_from_str,
    rational_to_str,
    scalar_pow,
)
from .numeric import decimal_str, pairwise_sum


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


def _as_weight(w) -> Fraction:
    if isinstance(w, ExactScalar):
        if not w.is_rational:
            raise DomainError(f"rules: weight {w} is not rational")
        return w.as_fraction()
    try:
        return Fraction(w)
    except (TypeError, ValueError) as e:
        raise DomainError(f"rules: bad weight {w!r}: {e}") from None


class QuadRule:
    """Finite list of (node, weight) pairs; nodes distinct and inside [-1,1].

    Value object: equality compares the point list only, never the label.
    """

    __slots__ = ("_points", "_rational_nodes", "label")

    def __init__(self, points, label: str = ""):
        pts = []
        for node, weight in points:
            pts.append((exactify(node), _as_weight(weight)))
        if not pts:
            raise DomainError("rules: a rule needs at least one point")
        seen = set()
        for node, _ in pts:
            if node in seen:
                raise DomainError(f"rules: duplicate node {node}")
            seen.add(node)
            # membership test is exact; for surd nodes sign() compares squares
            if (node - 1).sign() > 0 or (node + 1).sign() < 0:
                raise DomainError(f"rules: node {node} outside [-1, 1]")
        self._points = tuple(pts)
        if all(node.is_rational for node, _ in pts):
            self._rational_nodes = tuple(node.as_fraction() for node, _ in pts)
        else:
            self._rational_nodes = None
        self.label = label

    @property
    def points(self) -> tuple:
        return self._points

    @property
    def nodes(self) -> tuple:
        return tuple(node for node, _ in self._points)

    @property
    def weights(self) -> tuple:
        return tuple(w for _, w in self._points)

    def __len__(self):
        return len(self._points)

    def __eq__(self, other):
        if not isinstance(other, QuadRule):
            return NotImplemented
        return self._points == other._points

    def __hash__(self):
        return hash(self._points)

    def __repr__(self):
        return f"QuadRule({self.label or 'unnamed'}, {len(self)} points)"

    def relabeled(self, label: str) -> "QuadRule":
        return QuadRule(self._points, label)


@dataclass(frozen=True)
class RuleClassification:
    """Degree, principal moment mu, rule moment, defect and sign.

    The principal moment is the exact integral of t^(m+1): 2/(m+2) for odd
    degrees (every combination example) and 0 for even ones.  ``warning`` is
    set for rules that are not even exact on constants (reported as degree -1
    rather than an error).
    """

    degree: int
    principal_moment: Fraction
    rule_moment: ExactScalar
    defect: ExactScalar
    sign: Sign
    warning: bool = False


def moment(j: int) -> Fraction:
    """Exact integral of t^j over [-1,1]: 0 for odd j, 2/(j+1) for even j."""
    if j < 0:
        raise DomainError(f"rules: moment index must be >= 0, got {j}")
    return Fraction(0) if j % 2 else Fraction(2, j + 1)


def apply_monomial(rule: QuadRule, j: int) -> ExactScalar:
    """Exact value of the rule applied to t^j."""
    if j < 0:
        raise DomainError(f"rules: monomial power must be >= 0, got {j}")
    if rule._rational_nodes is not None:
        # fast path: pure Fraction arithmetic (powers of reduced fractions
        # need no gcd work)
        terms = [w * t**j for t, w in zip(rule._rational_nodes, rule.weights)]
        return exactify(pairwise_sum(terms))
    terms = [w * scalar_pow(node, j) for node, w in rule.points]
    return exactify(pairwise_sum(terms))


def classify(rule: QuadRule) -> RuleClassification:
    """Find the degree by scanning moments; capped at j = 2n for n nodes."""
    cap = 2 * len(rule)
    for j in range(cap + 1):
        value = apply_monomial(rule, j)
        if value != moment(j):
            m = j - 1
            mu = moment(m + 1)
            defect = mu - value
            sign = Sign.POSITIVE if defect.sign() > 0 else Sign.NEGATIVE
            return RuleClassification(m, mu, value, defect, sign, warning=m < 0)
    raise InternalError(
        f"rules: no failing moment up to j = {cap}; rule data corrupt"
    )


def is_companion(a: QuadRule, b: QuadRule) -> bool:
    """Equal degree with opposite-sign defects."""
    ca, cb = classify(a), classify(b)
    return ca.degree == cb.degree and ca.defect.sign() * cb.defect.sign() < 0


# -- common rules ----------------------------------------------------------------


def midpoint() -> QuadRule:
    return QuadRule([(0, 2)], "midpoint")


def trapezoid() -> QuadRule:
    return QuadRule([(-1, 1), (1, 1)], "trapezoid")


def simpson() -> QuadRule:
    third = Fraction(1, 3)
    return QuadRule([(-1, third), (0, 4 * third), (1, third)], "simpson")


def open_newton_cotes5() -> QuadRule:
    s = Fraction(1, 576)
    pts = [
        (Fraction(-4, 5), 275 * s),
        (Fraction(-2, 5), 100 * s),
        (0, 402 * s),
        (Fraction(2, 5), 100 * s),
        (Fraction(4, 5), 275 * s),
    ]
    return QuadRule(pts, "open-nc-5")


# -- serialization (rule file format, UTF-8 JSON) ---------------------------------


def exact_to_jsonable(x) -> str | dict:
    v = exactify(x)
    if v.is_rational:
        return rational_to_str(v.as_fraction())
    return {
        "rational": rational_to_str(v.rational_part),
        "surds": {str(d): rational_to_str(c) for d, c in v.surd_terms.items()},
    }


def rule_to_jsonable(rule: QuadRule) -> dict:
    return {
        "label": rule.label,
        "points": [
            {"node": node_to_jsonable(node), "weight": rational_to_str(w)}
            for node, w in rule.points
        ],
    }


def rule_from_jsonable(data) -> QuadRule:
    if not isinstance(data, dict) or "points" not in data:
        raise DomainError("rules: rule document must be an object with a 'points' list")
    pts = []
    for entry in data["points"]:
        if not isinstance(entry, dict) or "node" not in entry or "weight" not in entry:
            raise DomainError(f"rules: bad rule point {entry!r}")
        if not isinstance(entry["weight"], str):
            raise DomainError("rules: weights must be rational strings")
        pts.append((node_from_jsonable(entry["node"]), rational_from_str(entry["weight"])))
    return QuadRule(pts, str(data.get("label", "")))


def classification_to_jsonable(c: RuleClassification) -> dict:
    return {
        "degree": c.degree,
        "principal_moment": rational_to_str(c.principal_moment),
        "rule_moment": exact_to_jsonable(c.rule_moment),
        "defect": exact_to_jsonable(c.defect),
        "defect_decimal": decimal_str(c.defect),
        "sign": c.sign.value,
        "warning": c.warning,
    }


def save_rule(rule: QuadRule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rule_to_jsonable(rule), fh, indent=2)
        fh.write("\n")


def load_rule(path) -> QuadRule:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise DomainError(f"rules: {path} is not valid JSON: {e}") from None
    return rule_from_jsonable(data)
