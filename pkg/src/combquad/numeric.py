"""High-precision numeric support: contexts, pi, deterministic summation."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DomainError
from .exact import fraction_to_mpf

# Internal computations carry this many decimal guard digits beyond the
# requested precision.
GUARD_DIGITS = 10


@dataclass(frozen=True)
class NumericContext:
    """Decimal working precision for float-mode evaluation.

    mpmath's round-to-nearest-even is the only rounding mode used.
    """

    precision_digits: int
    rounding_mode: str = field(default="round-half-even")

    def __post_init__(self):
        if self.precision_digits < 1:
            raise DomainError(
                f"composite: precision_digits must be >= 1, got {self.precision_digits}"
            )
        if self.rounding_mode != "round-half-even":
            raise DomainError(
                f"composite: unsupported rounding mode {self.rounding_mode!r}"
            )

    @property
    def working_dps(self) -> int:
        return self.precision_digits + GUARD_DIGITS

    def workdps(self):
        return mpmath.workdps(self.working_dps)


def machin_pi_scaled(scale: int) -> int:
    """floor(pi * 10**scale) up to a few ulps, via pi = 16*atan(1/5) - 4*atan(1/239)."""
    one = 10**scale

    def arctan_inv(x: int) -> int:
        # sum_k (-1)^k / ((2k+1) x^(2k+1)), scaled by `one`
        power = one // x
        x2 = x * x
        total = 0
        k = 0
        while power:
            term = power // (2 * k + 1)
            total += -term if k & 1 else term
            power //= x2
            k += 1
        return total

    return 16 * arctan_inv(5) - 4 * arctan_inv(239)


def pi_reference(context: NumericContext) -> mpmath.mpf:
    """pi to the context precision, from the Machin arctangent series.

    The series is evaluated in exact integer arithmetic at guard precision, so
    the trailing digit of the decimal rendering is correctly rounded.
    """
    scale = context.working_dps
    scaled = machin_pi_scaled(scale)
    with context.workdps():
        return mpmath.mpf(scaled) / 10**scale


def pairwise_sum(values):
    """Sum by a fixed balanced tree over the index order.

    Deterministic regardless of execution strategy; works for Fractions,
    ExactScalars and mpmath floats alike.
    """
    vals = list(values)
    if not vals:
        return 0
    while len(vals) > 1:
        nxt = [
            vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i]
            for i in range(0, len(vals), 2)
        ]
        vals = nxt
    return vals[0]


def worker_limit() -> int:
    """Parallelism cap from COMBQUAD_THREADS (default 1)."""
    raw = os.environ.get("COMBQUAD_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"COMBQUAD_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise DomainError(f"COMBQUAD_THREADS must be a positive integer, got {n}")
    return n


def decimal_str(x, digits: int = 20) -> str:
    """Render an exact or mpf value as a decimal string with `digits` significant digits."""
    with mpmath.workdps(digits + GUARD_DIGITS):
        if hasattr(x, "to_mpf"):
            v = x.to_mpf()
        elif isinstance(x, Fraction):
            v = fraction_to_mpf(x)
        else:
            v = mpmath.mpf(x)
        return mpmath.nstr(v, digits)


def mpf_to_fraction(x) -> Fraction:
    """Exact value of a finite mpmath float.

    Reads the mantissa/exponent directly; passing through mpmath.mpf() would
    silently re-round to the ambient precision.
    """
    if not hasattr(x, "_mpf_"):
        x = mpmath.mpf(x)
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)  # the gmpy backend hands back mpz
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise DomainError(f"numeric: {x} is not a finite number")
    v = Fraction(man) * (Fraction(2) ** exp)
    return -v if sign else v
