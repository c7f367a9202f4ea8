"""Real polynomials with exact rational evaluation of decimal-surrogate coefficients.

Coefficients are given as decimal strings (or integers, or fractions) and
stored as exact :class:`fractions.Fraction` values. A coefficient flagged as
irrational is a truncated decimal expansion of some irrational number; it
must carry at least :data:`MIN_DIGITS` significant digits, and its
truncation error (half a unit in the last place) is tracked so that floors
and phase reductions can tell when the surrogate stops being trustworthy.
"""

from decimal import Decimal
from fractions import Fraction
import math

import mpmath

from .errors import AmbiguityError, DomainError

__all__ = [
    "MIN_DIGITS",
    "AMBIGUITY",
    "RealPolynomial",
    "surrogate",
    "SQRT2",
    "GOLDEN",
    "floor_poly",
    "floor_values",
]

MIN_DIGITS = 60
AMBIGUITY = 2.0**-40


def surrogate(expr, digits=64):
    """Decimal string of ``expr`` (an mpmath expression in ``mp``) to ``digits`` significant digits."""
    with mpmath.workdps(digits + 10):
        value = expr(mpmath) if callable(expr) else mpmath.mpf(expr)
        return mpmath.nstr(value, digits, strip_zeros=False)


SQRT2 = surrogate(lambda m: m.sqrt(2))
# fractional part of the golden mean, (sqrt 5 - 1) / 2
GOLDEN = surrogate(lambda m: (m.sqrt(5) - 1) / 2)


def _significant_digits(text):
    d = Decimal(text)
    digits = d.as_tuple().digits
    # strip leading zeros of the coefficient tuple
    i = 0
    while i < len(digits) - 1 and digits[i] == 0:
        i += 1
    return len(digits) - i, d.as_tuple().exponent


def _parse(c):
    if isinstance(c, Fraction):
        return c, None
    if isinstance(c, int):
        return Fraction(c), None
    if isinstance(c, str):
        try:
            d = Decimal(c.strip())
        except ArithmeticError as exc:
            raise DomainError(f"cannot parse coefficient {c!r}") from exc
        if not d.is_finite():
            raise DomainError(f"coefficient {c!r} is not finite")
        return Fraction(d), c.strip()
    raise DomainError(f"coefficients must be decimal strings, integers or fractions, got {type(c).__name__}")


class RealPolynomial:
    """``P(t) = b_0 + b_1 t + ... + b_d t^d`` with exact surrogate coefficients.

    ``irrational`` is a collection of indices whose coefficients stand for
    irrational numbers. Those must be decimal strings with at least
    ``MIN_DIGITS`` significant digits.
    """

    def __init__(self, coefficients, irrational=(), name=None):
        coefficients = list(coefficients)
        if len(coefficients) < 2:
            raise DomainError("degree must be at least 1")
        parsed = [_parse(c) for c in coefficients]
        self.coeffs = tuple(p[0] for p in parsed)
        if self.coeffs[-1] == 0:
            raise DomainError("leading coefficient must be nonzero")
        self.irrational = frozenset(int(i) for i in irrational)
        bad = [j for j in self.irrational if not 0 <= j < len(parsed)]
        if bad:
            raise DomainError(f"irrational flags {bad} outside 0..{len(parsed) - 1}")
        errs = []
        for j, (value, text) in enumerate(parsed):
            if j not in self.irrational:
                errs.append(Fraction(0))
                continue
            if text is None:
                raise DomainError(f"irrational coefficient b_{j} must be a decimal string")
            sig, exp = _significant_digits(text)
            if sig < MIN_DIGITS:
                raise DomainError(f"irrational coefficient b_{j} has {sig} significant digits, need {MIN_DIGITS}")
            errs.append(Fraction(1, 2) * Fraction(10) ** exp)
        self.errors = tuple(errs)
        self.texts = tuple(p[1] if p[1] is not None else str(p[0]) for p in parsed)
        self.name = name

    @classmethod
    def monomial(cls, coefficient, degree, irrational=True, name=None):
        coeffs = [0] * degree + [coefficient]
        return cls(coeffs, irrational=(degree,) if irrational else (), name=name)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def is_rational(self):
        return not self.irrational

    @property
    def is_monomial(self):
        return all(c == 0 for c in self.coeffs[1:-1])

    @property
    def descriptor(self):
        if self.name:
            return self.name
        terms = []
        for j, t in enumerate(self.texts):
            if self.coeffs[j] == 0:
                continue
            short = t if len(t) <= 12 else t[:10] + "..."
            terms.append(short if j == 0 else f"{short}*n^{j}")
        return " + ".join(terms)

    def without_constant(self):
        """``Q = P - b_0``."""
        coeffs = [0] + list(self.texts[1:])
        return RealPolynomial(coeffs, irrational=self.irrational - {0})

    def exact(self, n):
        """``P(n)`` as an exact fraction of the surrogate coefficients."""
        n = int(n)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def uncertainty(self, n):
        """Bound on ``|P(n) - P_true(n)|`` from coefficient truncation."""
        n = abs(int(n))
        return sum((e * n**j for j, e in enumerate(self.errors)), Fraction(0))

    def integer_form(self):
        """``(numerators, D)`` with ``P(t) = sum_j numerators[j] t^j / D`` exactly."""
        D = 1
        for c in self.coeffs:
            D = D * c.denominator // math.gcd(D, c.denominator)
        return tuple(int(c * D) for c in self.coeffs), D

    def __call__(self, n):
        return float(self.exact(n))

    def __repr__(self):
        return f"RealPolynomial({self.descriptor!r})"


def floor_poly(P, n):
    """Exact ``floor(P(n))`` for an integer ``n >= 1``.

    For polynomials with irrational-flagged coefficients, a value within
    ``2**-40`` (or within the surrogate's truncation error) of an integer is
    refused with :class:`AmbiguityError` instead of guessing a side.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    value = P.exact(n)
    fl = math.floor(value)
    if P.is_rational:
        return fl
    frac = value - fl
    residual = min(frac, 1 - frac)
    if residual < max(Fraction(AMBIGUITY), 2 * P.uncertainty(n)):
        raise AmbiguityError(f"P({n}) is within {float(residual):.3g} of an integer", int(n), float(residual))
    return fl


def floor_values(P, ns):
    """``(floors, fractional parts)`` of ``P(n)`` for many ``n``, with the same ambiguity rule."""
    nums, D = P.integer_form()
    errs = [float(e) for e in P.errors]
    floors, fracs = [], []
    for n in ns:
        n = int(n)
        if n < 1:
            raise DomainError(f"n must be a positive integer, got {n!r}")
        acc = 0
        for c in reversed(nums):
            acc = acc * n + c
        q, r = divmod(acc, D)
        if not P.is_rational:
            residual = min(r, D - r) / D
            tol = max(AMBIGUITY, 2 * sum(e * float(n) ** j for j, e in enumerate(errs)))
            if residual < tol:
                raise AmbiguityError(f"P({n}) is within {residual:.3g} of an integer", n, residual)
        floors.append(q)
        fracs.append(r / D)
    return floors, fracs
