"""Degree-(2k+1) rules combined from k+1 degree-1 rules with rational nodes.

The base rule (midpoint or trapezoid) plus k symmetric two-point rules
g(-t)+g(t) give a moment-matching linear system that is Vandermonde in the
squared nodes; its exact rational solution yields coefficients summing to 1
and a combined rule of degree 2k+1.  Node sources: explicit lists, a seeded
splitmix64 stream rationalized by continued fractions, or rationalized
Legendre roots.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

from .errors import DomainError, InternalError, NumericError
from .exact import rational_to_str
from .numeric import decimal_str, mpf_to_fraction
from .rules import (
    QuadRule,
    RuleClassification,
    classification_to_jsonable,
    classify,
    exact_to_jsonable,
    rule_to_jsonable,
)


class BaseRule(Enum):
    MIDPOINT = "midpoint"
    TRAPEZOID = "trapezoid"


# Flag rules whose squared nodes are closer than this: exact construction is
# fine, but applying them in fixed precision may lose digits.
CONDITIONING_GAP = Fraction(1, 1000)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class BuilderInput:
    positive_nodes: tuple[Fraction, ...]
    base: BaseRule = BaseRule.MIDPOINT
    label: str = ""

    def __post_init__(self):
        nodes = tuple(Fraction(t) for t in self.positive_nodes)
        object.__setattr__(self, "positive_nodes", nodes)
        if not nodes:
            raise DomainError("builder: at least one positive node is required")
        if len(set(nodes)) != len(nodes):
            raise DomainError("builder: nodes must be pairwise distinct")
        for t in nodes:
            if not 0 < t < 1:
                raise DomainError(f"builder: node {t} not strictly inside (0, 1)")


@dataclass(frozen=True)
class BuiltRule:
    coefficients: tuple[Fraction, ...]
    base: BaseRule
    flattened: QuadRule
    classification: RuleClassification
    conditioning_warning: bool

    @property
    def gamma(self):
        return self.classification.defect

    def to_jsonable(self) -> dict:
        return {
            "base": self.base.value,
            "coefficients": [rational_to_str(c) for c in self.coefficients],
            "coefficient_sum": rational_to_str(sum(self.coefficients)),
            "degree": self.classification.degree,
            "gamma": exact_to_jsonable(self.classification.defect),
            "gamma_decimal": decimal_str(self.classification.defect),
            "conditioning_warning": self.conditioning_warning,
            "classification": classification_to_jsonable(self.classification),
            "flattened": rule_to_jsonable(self.flattened),
        }


def solve_rational_system(matrix, rhs) -> list[Fraction]:
    """Exact solve of a dense rational system.

    Columns are scaled to integers, eliminated fraction-free (Bareiss) with
    partial pivoting by magnitude, and back-substituted exactly.
    """
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix) or len(rhs) != n:
        raise InternalError("builder: malformed linear system")
    col_scale = []
    for j in range(n):
        s = 1
        for i in range(n):
            d = matrix[i][j].denominator
            s = s * d // math.gcd(s, d)
        col_scale.append(s)
    rhs_scale = 1
    for v in rhs:
        d = v.denominator
        rhs_scale = rhs_scale * d // math.gcd(rhs_scale, d)
    a = [
        [int(matrix[i][j] * col_scale[j]) for j in range(n)]
        + [int(rhs[i] * rhs_scale)]
        for i in range(n)
    ]
    prev = 1
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0:
            raise InternalError("builder: singular moment system")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        lead = a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col]
            row = a[r]
            prow = a[col]
            for c in range(col + 1, n + 1):
                row[c] = (lead * row[c] - factor * prow[c]) // prev
            row[col] = 0
        prev = lead
    y = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = Fraction(a[i][n])
        for j in range(i + 1, n):
            s -= a[i][j] * y[j]
        y[i] = s / a[i][i]
    return [y[j] * col_scale[j] / rhs_scale for j in range(n)]


def build_combined(inp: BuilderInput) -> BuiltRule:
    """Solve the exact moment system and classify the flattened rule.

    The returned classification carries the measured degree (expected 2k+1),
    never an assumed one.
    """
    nodes = inp.positive_nodes
    k = len(nodes)
    base_x = Fraction(0) if inp.base is BaseRule.MIDPOINT else Fraction(1)
    xs = [base_x] + [t * t for t in nodes]
    if len(set(xs)) != len(xs):
        raise DomainError("builder: squared nodes collide with the base node")
    matrix = [[xs[j] ** i for j in range(k + 1)] for i in range(k + 1)]
    rhs = [Fraction(1, 2 * i + 1) for i in range(k + 1)]
    coeffs = solve_rational_system(matrix, rhs)

    points = []
    if inp.base is BaseRule.MIDPOINT:
        if coeffs[0]:
            points.append((Fraction(0), 2 * coeffs[0]))
    else:
        if coeffs[0]:
            points.append((Fraction(-1), coeffs[0]))
            points.append((Fraction(1), coeffs[0]))
    for t, c in zip(nodes, coeffs[1:]):
        if c:
            points.append((-t, c))
            points.append((t, c))
    points.sort(key=lambda p: p[0])
    label = inp.label or f"combined-{inp.base.value}-k{k}"
    flat = QuadRule(points, label)

    sorted_x = sorted(xs)
    gap = min(b - a for a, b in zip(sorted_x, sorted_x[1:]))
    return BuiltRule(
        coefficients=tuple(coeffs),
        base=inp.base,
        flattened=flat,
        classification=classify(flat),
        conditioning_warning=gap < CONDITIONING_GAP,
    )


# -- pseudorandom nodes --------------------------------------------------------


def splitmix64(seed: int):
    """Infinite stream of 64-bit words from the splitmix64 recurrence."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def random_rational_nodes(seed: int, k: int, tolerance) -> list[Fraction]:
    """k distinct rationals in (0, 1), deterministic in the seed.

    Each draw maps the high 53 bits of the next splitmix64 word to a dyadic
    rational in [0, 1), rationalizes it to the tolerance, and redraws on
    duplicates or endpoint values.
    """
    if k < 1:
        raise DomainError(f"builder: k must be >= 1, got {k}")
    tol = Fraction(tolerance)
    if not 0 < tol < 1:
        raise DomainError(f"builder: tolerance must lie in (0, 1), got {tol}")
    stream = splitmix64(seed)
    nodes: list[Fraction] = []
    seen = set()
    attempts = 0
    limit = 1000 * k
    while len(nodes) < k:
        attempts += 1
        if attempts > limit:
            raise DomainError(
                f"builder: gave up after {limit} draws without {k} distinct nodes"
            )
        u = Fraction(next(stream) >> 11, 1 << 53)
        r = rationalize(u, tol)
        if r <= 0 or r >= 1 or r in seen:
            continue
        seen.add(r)
        nodes.append(r)
    return nodes


def _to_exact_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, decimal.Decimal):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        return mpf_to_fraction(x)
    raise DomainError(f"builder: cannot take {x!r} as an exact real")


def _simplest_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """Smallest-denominator rational in the closed interval [lo, hi]."""
    if hi < lo:
        raise InternalError("builder: empty interval")
    if hi < 0:
        return -_simplest_in_interval(-hi, -lo)
    if lo <= 0:
        return Fraction(0)
    floor_lo = lo.numerator // lo.denominator
    if lo.denominator == 1:
        return lo
    if floor_lo + 1 <= hi:
        return Fraction(floor_lo + 1)
    inner = _simplest_in_interval(1 / (hi - floor_lo), 1 / (lo - floor_lo))
    return floor_lo + 1 / inner


def rationalize(x, tolerance) -> Fraction:
    """Rational with the smallest denominator within `tolerance` of x.

    Equivalent to walking the continued-fraction convergents/semiconvergents
    of x; ties at the minimal denominator resolve to the nearest value
    (half-even).
    """
    tol = Fraction(tolerance)
    if tol <= 0:
        raise DomainError(f"builder: tolerance must be > 0, got {tol}")
    v = _to_exact_fraction(x)
    q = _simplest_in_interval(v - tol, v + tol).denominator
    result = Fraction(round(v * q), q)
    if abs(v - result) > tol:
        raise InternalError("builder: rationalization missed its tolerance")
    return result


# -- Legendre roots --------------------------------------------------------------


def _legendre_pair(n: int, x):
    """(P_n(x), P_n'(x)) by the three-term recurrence."""
    p_prev = mpmath.mpf(1)
    p = x
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1)
    return p, dp


def legendre_roots(n: int, precision_digits: int) -> list[mpmath.mpf]:
    """Roots of the degree-n Legendre polynomial, ascending, in (-1, 1).

    Newton iteration from cos(pi*(i - 1/4)/(n + 1/2)) at precision_digits + 20
    working digits; raises NumericError after 200 steps without convergence.
    """
    if n < 1:
        raise DomainError(f"builder: Legendre degree must be >= 1, got {n}")
    if precision_digits < 1:
        raise DomainError("builder: precision_digits must be >= 1")
    roots = []
    with mpmath.workdps(precision_digits + 20):
        stop = mpmath.mpf(10) ** -(precision_digits + 10)
        for i in range(1, n + 1):
            x = mpmath.cos(mpmath.pi * (4 * i - 1) / (4 * n + 2))
            for _ in range(200):
                p, dp = _legendre_pair(n, x)
                dx = p / dp
                x -= dx
                if abs(dx) < stop:
                    break
            else:
                raise NumericError(
                    f"builder: Newton failed to converge for root {i} of P_{n}"
                )
            roots.append(x)
    return sorted(roots)
