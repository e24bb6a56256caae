"""Exact coefficient arithmetic for the supported base rings.

A RingSpec describes one of F_p (p prime), Q, or Z and performs all
arithmetic on plain Python values: residues are ints in [0, p), rationals
are fractions.Fraction in lowest terms, integers are arbitrary-precision
ints.  Values carry no ring tag of their own; the polynomial layer pins one
RingSpec per context and refuses to mix them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError

PRIME_FIELD = "prime-field"
RATIONALS = "rationals"
INTEGERS = "integers"

# Trial division stays fast up to this bound; larger moduli are refused.
_MAX_MODULUS = 2**31


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of the coefficient rings F_p, Q, Z with exact operations."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == PRIME_FIELD:
            if not isinstance(self.p, int) or self.p >= _MAX_MODULUS:
                raise UsageError("prime modulus must be an int below 2^31")
            if not _is_prime(self.p):
                raise UsageError(f"modulus {self.p} is not prime")
        elif self.kind in (RATIONALS, INTEGERS):
            if self.p is not None:
                raise UsageError(f"{self.kind} takes no modulus")
        else:
            raise UsageError(f"unknown coefficient ring kind {self.kind!r}")

    # -- identification -------------------------------------------------

    @staticmethod
    def from_string(text: str) -> "RingSpec":
        """Parse a ring label: "F2", "F3", "Fp:<p>", "Q", "Z"."""
        t = text.strip()
        if t == "Q":
            return RingSpec(RATIONALS)
        if t == "Z":
            return RingSpec(INTEGERS)
        if t.startswith("Fp:"):
            body = t[3:]
        elif t.startswith("F"):
            body = t[1:]
        else:
            raise UsageError(f"unknown coefficient ring {text!r}")
        if not body.isdigit():
            raise UsageError(f"unknown coefficient ring {text!r}")
        return RingSpec(PRIME_FIELD, int(body))

    def __str__(self) -> str:
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == INTEGERS:
            return "Z"
        return f"F{self.p}" if self.p in (2, 3) else f"Fp:{self.p}"

    @property
    def is_field(self) -> bool:
        return self.kind != INTEGERS

    def characteristic(self) -> int:
        return self.p if self.kind == PRIME_FIELD else 0

    # -- canonical values ------------------------------------------------

    def normalize(self, value):
        """Canonical form of a raw int/Fraction value in this ring."""
        if self.kind == PRIME_FIELD:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise UsageError("fractional value in a prime field")
                value = value.numerator
            if not isinstance(value, int):
                raise UsageError(f"bad coefficient {value!r} for {self}")
            return value % self.p
        if self.kind == RATIONALS:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise UsageError(f"bad coefficient {value!r} for Q")
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise UsageError("fractional value in Z")
            return value.numerator
        if not isinstance(value, int):
            raise UsageError(f"bad coefficient {value!r} for Z")
        return value

    def from_int(self, n: int):
        return self.normalize(n)

    @property
    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def is_zero(self, a) -> bool:
        return a == 0

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.kind == PRIME_FIELD else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == PRIME_FIELD else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == PRIME_FIELD else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == PRIME_FIELD else -a

    def is_unit(self, a) -> bool:
        if a == 0:
            return False
        if self.kind == INTEGERS:
            return a in (1, -1)
        return True

    def invert(self, a):
        """Multiplicative inverse; UsageError if a is not a unit."""
        if not self.is_unit(a):
            raise UsageError(f"{a!r} is not a unit in {self}")
        if self.kind == PRIME_FIELD:
            return pow(a, -1, self.p)
        if self.kind == RATIONALS:
            return 1 / Fraction(a)
        return a

    def try_exact_divide(self, a, b):
        """a/b when the quotient exists in the ring, else None.

        Division by zero is an error rather than None: the caller asked a
        different question.
        """
        if b == 0:
            raise ZeroDivisionError(f"exact division by zero in {self}")
        if self.kind == PRIME_FIELD:
            return (a * pow(b, -1, self.p)) % self.p
        if self.kind == RATIONALS:
            return Fraction(a) / Fraction(b)
        q, r = divmod(a, b)
        return q if r == 0 else None

    # -- text -------------------------------------------------------------

    def format_coeff(self, a) -> str:
        return str(a)

    def parse_coeff(self, num: int, den: int | None):
        """Build a coefficient from integer literals (den only over Q)."""
        if den is None:
            return self.normalize(num)
        if self.kind != RATIONALS:
            raise UsageError("fraction literals are only valid over Q")
        if den == 0:
            raise UsageError("zero denominator in coefficient")
        return Fraction(num, den)


def Fp(p: int) -> RingSpec:
    return RingSpec(PRIME_FIELD, p)


def QQ() -> RingSpec:
    return RingSpec(RATIONALS)


def ZZ() -> RingSpec:
    return RingSpec(INTEGERS)
