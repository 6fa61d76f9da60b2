"""Working-precision context shared by every numerical routine.

All arithmetic is carried out with :mod:`mpmath` inside a private
``MPContext`` owned by a :class:`PrecisionCtx`, so two contexts with
different digit counts can be used side by side (e.g. from different
threads) without touching mpmath's global ``mp`` object.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import mpmath

DEFAULT_DIGITS = 300
DEFAULT_GUARD = 10
DIGITS_ENV_VAR = "WILKSHIFT_DIGITS"


@dataclass(frozen=True)
class PrecisionCtx:
    """Decimal working precision plus the comparison tolerance derived from it.

    ``tol = 10**(guard - digits)``; ``guard`` digits are sacrificed to
    accumulated rounding before two quantities are declared equal.
    """

    digits: int = DEFAULT_DIGITS
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        if not isinstance(self.digits, int) or not isinstance(self.guard, int):
            raise TypeError("digits and guard must be integers")
        if self.digits < 50:
            raise ValueError(f"digits must be >= 50, got {self.digits}")
        if not 0 < self.guard < self.digits:
            raise ValueError(f"guard must satisfy 0 < guard < digits, got {self.guard}")
        if self.digits - self.guard <= 40:
            raise ValueError("tolerance 10**(guard - digits) must be below 1e-40")

    @classmethod
    def from_env(cls, default: int = DEFAULT_DIGITS, guard: int = DEFAULT_GUARD) -> PrecisionCtx:
        raw = os.environ.get(DIGITS_ENV_VAR)
        return cls(int(raw) if raw else default, guard)

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        ctx = mpmath.MPContext()
        ctx.dps = self.digits
        return ctx

    @cached_property
    def tol(self):
        return self.mp.mpf(10) ** (self.guard - self.digits)

    def num(self, value):
        """Coerce ``value`` to an mpf of this context.

        Strings are parsed as decimals at full precision and Fractions are
        rounded once; binary floats are taken at their exact binary value.
        Values already carried at this precision are returned unchanged.
        """
        context = getattr(value, "context", None)
        if context is not None and context.prec == self.mp.prec:
            return value
        if isinstance(value, Fraction):
            return self.mp.fdiv(value.numerator, value.denominator)
        return self.mp.mpf(value)

    def with_digits(self, digits: int) -> PrecisionCtx:
        return PrecisionCtx(digits, self.guard)

    def __getstate__(self):
        return {"digits": self.digits, "guard": self.guard}

    def __setstate__(self, state):
        object.__setattr__(self, "digits", state["digits"])
        object.__setattr__(self, "guard", state["guard"])


def as_fraction(value) -> Fraction:
    """Exact rational value of an mpf, int, Fraction or decimal string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    man, exp = value.man_exp
    man = int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


@lru_cache(maxsize=None)
def context_for(digits: int, guard: int = DEFAULT_GUARD) -> PrecisionCtx:
    """Shared context instance for a digit count (used when none is passed)."""
    return PrecisionCtx(digits, guard)


def infer_ctx(*values) -> PrecisionCtx:
    """Context matching the precision of the first mpf among ``values``."""
    for v in values:
        context = getattr(v, "context", None)
        if context is not None:
            return context_for(max(context.dps, 50))
    return context_for(DEFAULT_DIGITS)
