"""Exact arithmetic: residues mod an odd prime d and the cyclotomic ring Z[w].

Amplitudes live in Z[w] * d**(-k/2), where w = exp(2*pi*i/d).  Because d is
prime, 1 + w + ... + w**(d-1) = 0 is the only relation, so coordinates on
the basis w**0 .. w**(d-2) are unique and equality is decidable exactly.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

MAX_MODULUS = 997  # well above the supported 3 <= d <= 97 band


class NotPrimeError(ValueError):
    pass


class IsTwoError(ValueError):
    pass


class OutOfRangeError(ValueError):
    pass


class ModulusMismatchError(ValueError):
    pass


class ScaleParityError(ValueError):
    """Adding amplitudes whose d**(-k/2) scales differ by an odd step."""


class NotRationalError(ValueError):
    """Amplitude is not a rational number (nonzero w-coordinates or odd scale)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """Validated odd prime modulus."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2 or self.d > MAX_MODULUS:
            raise OutOfRangeError(f"modulus must be an integer in [3, {MAX_MODULUS}], got {self.d!r}")
        if self.d == 2:
            raise IsTwoError("d = 2 is not supported; d must be an odd prime")
        if not _is_prime(self.d):
            raise NotPrimeError(f"{self.d} is not prime")

    def residue(self, value: int) -> "Residue":
        return Residue(value, self)


def make_prime(d: int) -> PrimeModulus:
    """Validate d as an odd prime modulus."""
    return PrimeModulus(d)


@dataclass(frozen=True)
class Residue:
    """Element of Z_d, always stored reduced."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.d)

    def _check(self, other: "Residue") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatchError(
                f"mixing residues mod {self.modulus.d} and mod {other.modulus.d}"
            )

    def __add__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue(self.value + other.value, self.modulus)

    def __sub__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue(self.value - other.value, self.modulus)

    def __mul__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue(self.value * other.value, self.modulus)

    def __neg__(self) -> "Residue":
        return Residue(-self.value, self.modulus)

    def __int__(self) -> int:
        return self.value


def inv(x: Residue) -> Residue:
    """Multiplicative inverse in Z_d."""
    if x.value == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {x.modulus.d}")
    return Residue(pow(x.value, x.modulus.d - 2, x.modulus.d), x.modulus)


def half(x: Residue) -> Residue:
    """x / 2 in Z_d; well defined since d is odd."""
    return x * inv(Residue(2, x.modulus))


def inv_mod(value: int, d: int) -> int:
    if value % d == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {d}")
    return pow(value, d - 2, d)


def half_mod(value: int, d: int) -> int:
    return (value * inv_mod(2, d)) % d


class CycloAmplitude:
    """Element of Z[w] times d**(-scale/2), in canonical coordinates.

    Canonical form: the w**(d-1) coordinate is folded away using
    1 + w + ... + w**(d-1) = 0, and while every coordinate is divisible
    by d the scale is lowered by two steps.  Zero is always
    (all-zero coords, scale 0).
    """

    __slots__ = ("modulus", "coeffs", "scale")

    def __init__(self, modulus: PrimeModulus, coeffs, scale: int = 0, _canonical: bool = False):
        d = modulus.d
        if _canonical:
            self.modulus = modulus
            self.coeffs = tuple(coeffs)
            self.scale = scale
            return
        work = list(coeffs)
        if len(work) == d:
            top = work[d - 1]
            work = [c - top for c in work[: d - 1]]
        elif len(work) != d - 1:
            raise ValueError(f"expected {d - 1} or {d} coefficients, got {len(work)}")
        if all(c == 0 for c in work):
            scale = 0
        else:
            while all(c % d == 0 for c in work):
                work = [c // d for c in work]
                scale -= 2
        self.modulus = modulus
        self.coeffs = tuple(work)
        self.scale = scale

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, modulus: PrimeModulus) -> "CycloAmplitude":
        return cls(modulus, (0,) * (modulus.d - 1), 0, _canonical=True)

    @classmethod
    def one(cls, modulus: PrimeModulus, scale: int = 0) -> "CycloAmplitude":
        coeffs = [0] * (modulus.d - 1)
        coeffs[0] = 1
        return cls(modulus, coeffs, scale)

    @classmethod
    def root(cls, modulus: PrimeModulus, t: int, scale: int = 0) -> "CycloAmplitude":
        """w**t at the given scale."""
        d = modulus.d
        coeffs = [0] * d
        coeffs[t % d] = 1
        return cls(modulus, coeffs, scale)

    # -- helpers -------------------------------------------------------

    def _check(self, other: "CycloAmplitude") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatchError(
                f"mixing amplitudes mod {self.modulus.d} and mod {other.modulus.d}"
            )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _aligned(self, other: "CycloAmplitude"):
        """Coefficient lists of self and other brought to a common scale."""
        k = max(self.scale, other.scale)
        d = self.modulus.d
        a, b = list(self.coeffs), list(other.coeffs)
        if not self.is_zero():
            diff = k - self.scale
            if diff % 2:
                raise ScaleParityError("cannot align scales differing by an odd step")
            a = [c * d ** (diff // 2) for c in a]
        if not other.is_zero():
            diff = k - other.scale
            if diff % 2:
                raise ScaleParityError("cannot align scales differing by an odd step")
            b = [c * d ** (diff // 2) for c in b]
        return a, b, k

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "CycloAmplitude") -> "CycloAmplitude":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b, k = self._aligned(other)
        return CycloAmplitude(self.modulus, [x + y for x, y in zip(a, b)], k)

    def __sub__(self, other: "CycloAmplitude") -> "CycloAmplitude":
        return self + (-other)

    def __neg__(self) -> "CycloAmplitude":
        return CycloAmplitude(self.modulus, tuple(-c for c in self.coeffs), self.scale, _canonical=True)

    def __mul__(self, other: "CycloAmplitude") -> "CycloAmplitude":
        self._check(other)
        d = self.modulus.d
        if self.is_zero() or other.is_zero():
            return CycloAmplitude.zero(self.modulus)
        out = [0] * d
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(other.coeffs):
                if cj == 0:
                    continue
                out[(i + j) % d] += ci * cj
        return CycloAmplitude(self.modulus, out, self.scale + other.scale)

    def conj(self) -> "CycloAmplitude":
        d = self.modulus.d
        out = [0] * d
        for i, ci in enumerate(self.coeffs):
            out[(d - i) % d] = ci
        return CycloAmplitude(self.modulus, out, self.scale)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloAmplitude):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if (self.scale - other.scale) % 2:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.modulus, self.coeffs, self.scale))

    def __repr__(self):
        return f"CycloAmplitude(d={self.modulus.d}, coeffs={self.coeffs}, scale={self.scale})"

    # -- conversions ---------------------------------------------------

    def to_complex(self) -> complex:
        d = self.modulus.d
        z = 0j
        for i, c in enumerate(self.coeffs):
            if c:
                z += c * cmath.exp(2j * cmath.pi * i / d)
        return z * d ** (-self.scale / 2)

    def to_fraction(self) -> Fraction:
        """Exact rational value; raises if the amplitude is irrational."""
        if self.is_zero():
            return Fraction(0)
        if any(c != 0 for c in self.coeffs[1:]):
            raise NotRationalError(f"{self!r} has nonzero root-of-unity coordinates")
        if self.scale % 2:
            raise NotRationalError(f"{self!r} carries an odd power of 1/sqrt(d)")
        d = self.modulus.d
        k = self.scale // 2
        if k >= 0:
            return Fraction(self.coeffs[0], d**k)
        return Fraction(self.coeffs[0] * d**(-k))

    def magnitude_squared(self) -> Fraction:
        return (self.conj() * self).to_fraction()


def cyclo_root_power(t: Residue) -> CycloAmplitude:
    """w**t with scale 0."""
    return CycloAmplitude.root(t.modulus, t.value)


def cyclo_add(a: CycloAmplitude, b: CycloAmplitude) -> CycloAmplitude:
    return a + b


def cyclo_mul(a: CycloAmplitude, b: CycloAmplitude) -> CycloAmplitude:
    return a * b


def cyclo_conj(a: CycloAmplitude) -> CycloAmplitude:
    return a.conj()


def cyclo_to_complex(a: CycloAmplitude) -> complex:
    return a.to_complex()


def fraction_as_d_power(p: Fraction, d: int) -> str:
    """Render a rational with d-power denominator as 'a/d^k'."""
    if p == 0:
        return "0"
    num, den = p.numerator, p.denominator
    k = 0
    while den % d == 0:
        den //= d
        k += 1
    if den != 1:
        raise ValueError(f"denominator of {p} is not a power of {d}")
    if k == 0:
        return str(num)
    return f"{num}/{d}^{k}"
