"""Exact scalars: arbitrary-size rationals extended with quadratic surds.

A value is stored as ``rational + sum(c_d * sqrt(d))`` where every key ``d``
is a squarefree integer >= 2 and every coefficient ``c_d`` is a nonzero
``Fraction``.  This canonical form is unique, so equality is structural and
decidable, which is what degree classification relies on.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DomainError, IndeterminateSignError, InternalError, RepresentationError

Rational = Fraction

# Trial-division factorization refuses inputs beyond this bound; every surd in
# practice involves integers < 100, so the default is generous.
DEFAULT_FACTOR_BOUND = 10**12

# Numeric fallback for signs of multi-surd values: 200 digits, with the result
# accepted only when clearly nonzero.
_SIGN_FALLBACK_DPS = 200
_SIGN_FALLBACK_FLOOR = Fraction(1, 10**150)


@lru_cache(maxsize=4096)
def _square_split(n: int) -> tuple[int, int]:
    """Split n >= 1 into (f, m) with n = f*f*m and m squarefree."""
    if n < 1:
        raise InternalError(f"exact: _square_split expects n >= 1, got {n}")
    f = 1
    m = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    m *= n  # leftover prime
    return f, m


def _check_factor_bound(n: int, bound: int) -> None:
    if n > bound:
        raise RepresentationError(
            f"exact: integer {n} exceeds the factorization bound {bound}"
        )


@lru_cache(maxsize=4096)
def _smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise InternalError(f"exact: no prime factor of {n}")
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1 if p == 2 else 2
    return n


def fraction_to_mpf(q: Fraction) -> mpmath.mpf:
    """Convert exactly at the current mpmath working precision."""
    return mpmath.mpf(q.numerator) / q.denominator


class ExactScalar:
    """Immutable element of Q extended by square roots of squarefree integers."""

    __slots__ = ("_rat", "_surds")

    def __init__(self, rational=0, surds=None, *, bound: int = DEFAULT_FACTOR_BOUND):
        if isinstance(rational, ExactScalar):
            if surds:
                raise DomainError("exact: cannot combine an ExactScalar with extra surds")
            self._rat = rational._rat
            self._surds = rational._surds
            return
        self._rat = Fraction(rational)
        terms: dict[int, Fraction] = {}
        if surds:
            for d, c in surds.items():
                d = int(d)
                if d < 2:
                    raise DomainError(f"exact: surd key {d} must be >= 2")
                _check_factor_bound(d, bound)
                f, m = _square_split(d)
                if f != 1 or m != d:
                    raise DomainError(f"exact: surd key {d} is not squarefree")
                c = Fraction(c)
                if c:
                    terms[d] = terms.get(d, Fraction(0)) + c
        self._surds = {d: c for d, c in sorted(terms.items()) if c}

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def _raw(rat: Fraction, surds: dict[int, Fraction]) -> "ExactScalar":
        # internal fast path: inputs already canonical (keys squarefree, no zeros)
        x = object.__new__(ExactScalar)
        x._rat = rat
        x._surds = dict(sorted(surds.items()))
        return x

    @property
    def rational_part(self) -> Fraction:
        return self._rat

    @property
    def surd_terms(self) -> dict[int, Fraction]:
        return dict(self._surds)

    @property
    def is_rational(self) -> bool:
        return not self._surds

    def as_fraction(self) -> Fraction:
        if self._surds:
            raise RepresentationError(f"exact: {self} is not rational")
        return self._rat

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "ExactScalar | None":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar._raw(Fraction(x), {})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        surds = dict(self._surds)
        for d, c in o._surds.items():
            s = surds.get(d, Fraction(0)) + c
            if s:
                surds[d] = s
            else:
                surds.pop(d, None)
        return ExactScalar._raw(self._rat + o._rat, surds)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._raw(-self._rat, {d: -c for d, c in self._surds.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        rat = self._rat * o._rat
        surds: dict[int, Fraction] = {}

        def _acc_surd(d: int, c: Fraction) -> None:
            if not c:
                return
            s = surds.get(d, Fraction(0)) + c
            if s:
                surds[d] = s
            else:
                surds.pop(d, None)

        if o._rat:
            for d, c in self._surds.items():
                _acc_surd(d, c * o._rat)
        if self._rat:
            for d, c in o._surds.items():
                _acc_surd(d, c * self._rat)
        for d1, c1 in self._surds.items():
            for d2, c2 in o._surds.items():
                # sqrt(d1)*sqrt(d2) = g*sqrt(m) with g = gcd, m squarefree
                g = math.gcd(d1, d2)
                m = (d1 // g) * (d2 // g)
                coeff = c1 * c2 * g
                if m == 1:
                    rat += coeff
                else:
                    _acc_surd(m, coeff)
        return ExactScalar._raw(rat, surds)

    __rmul__ = __mul__

    def _flip_prime(self, p: int) -> "ExactScalar":
        # Galois conjugation sending sqrt(p) to -sqrt(p)
        return ExactScalar._raw(
            self._rat,
            {d: (-c if d % p == 0 else c) for d, c in self._surds.items()},
        )

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("exact: division by zero")
        num = self
        den = o
        # rationalize the denominator one prime at a time; each step removes
        # that prime from every surd key of den, so this terminates
        while den._surds:
            p = _smallest_prime_factor(min(den._surds))
            conj = den._flip_prime(p)
            num = num * conj
            den = den * conj
        inv = 1 / den._rat
        return ExactScalar._raw(
            num._rat * inv, {d: c * inv for d, c in num._surds.items()}
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, j):
        return scalar_pow(self, j)

    # -- predicates and ordering ----------------------------------------------

    def is_zero(self) -> bool:
        return not self._rat and not self._surds

    def sign(self) -> int:
        """Exact sign (-1, 0, 1); multi-surd values fall back to a certified
        200-digit evaluation and raise if the magnitude is below 1e-150."""
        if not self._surds:
            r = self._rat
            return (r > 0) - (r < 0)
        if len(self._surds) == 1:
            ((d, c),) = self._surds.items()
            a = self._rat
            sc = 1 if c > 0 else -1
            if not a:
                return sc
            sa = 1 if a > 0 else -1
            if sa == sc:
                return sa
            lhs = a * a
            rhs = c * c * d
            if lhs == rhs:
                raise InternalError("exact: a^2 == c^2*d with squarefree d >= 2")
            return sa if lhs > rhs else sc
        with mpmath.workdps(_SIGN_FALLBACK_DPS):
            v = self.to_mpf()
            if abs(v) > fraction_to_mpf(_SIGN_FALLBACK_FLOOR):
                return 1 if v > 0 else -1
        raise IndeterminateSignError(
            f"exact: sign of {self} indeterminate at {_SIGN_FALLBACK_DPS} digits"
        )

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._rat == o._rat and self._surds == o._surds

    def __hash__(self):
        if not self._surds:
            return hash(self._rat)
        return hash((self._rat, tuple(self._surds.items())))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    # -- conversion ------------------------------------------------------------

    def to_mpf(self) -> mpmath.mpf:
        """Evaluate at the current mpmath working precision."""
        v = fraction_to_mpf(self._rat)
        for d, c in self._surds.items():
            v += fraction_to_mpf(c) * mpmath.sqrt(d)
        return v

    def __str__(self):
        parts = []
        if self._rat or not self._surds:
            parts.append(str(self._rat))
        for d, c in self._surds.items():
            term = f"sqrt({d})" if abs(c) == 1 else f"{abs(c)}*sqrt({d})"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"ExactScalar({self})"


def exactify(x) -> ExactScalar:
    """Coerce an int, Fraction or ExactScalar to ExactScalar."""
    v = ExactScalar._coerce(x)
    if v is None:
        raise DomainError(f"exact: cannot interpret {x!r} as an exact scalar")
    return v


def surd_canonicalize(s, *, bound: int = DEFAULT_FACTOR_BOUND) -> ExactScalar:
    """Canonical form of sqrt(s) for a positive rational s.

    Writes s = p/q, sqrt(s) = sqrt(p*q)/q and extracts the largest square
    factor of p*q, so e.g. sqrt(3/5) becomes (1/5)*sqrt(15).
    """
    s = Fraction(s)
    if s <= 0:
        raise DomainError(f"exact: surd_canonicalize requires s > 0, got {s}")
    p, q = s.numerator, s.denominator
    n = p * q
    _check_factor_bound(n, bound)
    f, m = _square_split(n)
    coeff = Fraction(f, q)
    if m == 1:
        return ExactScalar._raw(coeff, {})
    return ExactScalar._raw(Fraction(0), {m: coeff})


def scalar_pow(x, j: int) -> ExactScalar:
    """Exact x**j for a nonnegative integer j, in canonical form."""
    if j < 0 or j != int(j):
        raise DomainError(f"exact: exponent must be a nonnegative integer, got {j}")
    j = int(j)
    v = exactify(x)
    if v.is_rational:
        return ExactScalar._raw(v.rational_part**j, {})
    if not v.rational_part and len(v._surds) == 1:
        ((d, c),) = v._surds.items()
        half, odd = divmod(j, 2)
        r = c**j * Fraction(d) ** half
        if odd:
            return ExactScalar._raw(Fraction(0), {d: r})
        return ExactScalar._raw(r, {})
    # general case: binary exponentiation in the ring (closed under products)
    result = ExactScalar._raw(Fraction(1), {})
    base = v
    while j:
        if j & 1:
            result = result * base
        base = base * base
        j >>= 1
    return result


# -- text encodings used by the rule file format -------------------------------


def rational_to_str(q: Fraction) -> str:
    return str(Fraction(q))


def rational_from_str(text: str) -> Fraction:
    """Parse "p/q", "p" or an exact decimal string like "0.5"."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"exact: bad rational literal {text!r}: {e}") from None


def node_to_jsonable(x) -> str | dict:
    """Encode a node as "p/q" or {"sqrt": "p/q", "sign": +/-1}."""
    v = exactify(x)
    if v.is_rational:
        return rational_to_str(v.as_fraction())
    if not v.rational_part and len(v.surd_terms) == 1:
        ((d, c),) = v.surd_terms.items()
        return {"sqrt": rational_to_str(c * c * d), "sign": 1 if c > 0 else -1}
    raise RepresentationError(
        f"exact: node {v} is neither rational nor a pure square root"
    )


def node_from_jsonable(value) -> ExactScalar:
    if isinstance(value, str):
        return exactify(rational_from_str(value))
    if isinstance(value, dict):
        try:
            s = rational_from_str(value["sqrt"])
            sgn = int(value["sign"])
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"exact: bad surd node object {value!r}: {e}") from None
        if sgn not in (1, -1):
            raise DomainError(f"exact: surd node sign must be 1 or -1, got {sgn}")
        return sgn * surd_canonicalize(s)
    raise DomainError(f"exact: bad node encoding {value!r}")
