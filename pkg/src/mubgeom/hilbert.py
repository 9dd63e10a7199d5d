"""Kets and generalized-permutation (monomial) operators over the exact backend.

A monomial operator is w**phase * X**x_power * Z**z_power, optionally followed
(rightmost, applied first) by the inversion |n> -> |-n>.  Every operator used
by the construction is of this form, so application is O(d) and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import CycloAmplitude, ModulusMismatchError, PrimeModulus


@dataclass(frozen=True)
class Ket:
    """State vector of dimension d or d**2 with exact amplitudes."""

    dim: int
    modulus: PrimeModulus
    amps: tuple

    def __post_init__(self):
        if len(self.amps) != self.dim:
            raise ValueError(f"expected {self.dim} amplitudes, got {len(self.amps)}")

    def _check(self, other: "Ket") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatchError("kets built over different moduli")
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Ket") -> "Ket":
        self._check(other)
        return Ket(self.dim, self.modulus, tuple(a + b for a, b in zip(self.amps, other.amps)))

    def __sub__(self, other: "Ket") -> "Ket":
        self._check(other)
        return Ket(self.dim, self.modulus, tuple(a - b for a, b in zip(self.amps, other.amps)))

    def scaled(self, factor: CycloAmplitude) -> "Ket":
        return Ket(self.dim, self.modulus, tuple(a * factor for a in self.amps))

    def norm_squared(self) -> Fraction:
        total = CycloAmplitude.zero(self.modulus)
        for a in self.amps:
            if not a.is_zero():
                total = total + a.conj() * a
        return total.to_fraction()

    def is_normalized(self) -> bool:
        return self.norm_squared() == 1

    def to_complex_list(self) -> list:
        return [a.to_complex() for a in self.amps]


def basis_ket(modulus: PrimeModulus, dim: int, n: int) -> Ket:
    """Computational-basis unit vector |n> in the given dimension."""
    if not 0 <= n < dim:
        raise IndexError(f"basis index {n} out of range for dimension {dim}")
    amps = [CycloAmplitude.zero(modulus)] * dim
    amps[n] = CycloAmplitude.one(modulus)
    return Ket(dim, modulus, tuple(amps))


def zero_ket(modulus: PrimeModulus, dim: int) -> Ket:
    return Ket(dim, modulus, (CycloAmplitude.zero(modulus),) * dim)


def tensor(k1: Ket, k2: Ket) -> Ket:
    """Two-particle product; slot n1*d + n2, particle 1 the left factor."""
    if k1.modulus != k2.modulus:
        raise ModulusMismatchError("tensor factors built over different moduli")
    d = k1.modulus.d
    if k1.dim != d or k2.dim != d:
        raise ValueError("tensor expects two single-particle kets of dimension d")
    amps = []
    zero = CycloAmplitude.zero(k1.modulus)
    for a in k1.amps:
        if a.is_zero():
            amps.extend([zero] * d)
        else:
            amps.extend(a * b for b in k2.amps)
    return Ket(d * d, k1.modulus, tuple(amps))


def inner(bra: Ket, ket: Ket) -> CycloAmplitude:
    """<bra|ket> = sum conj(bra_i) * ket_i, exact."""
    bra._check(ket)
    total = CycloAmplitude.zero(bra.modulus)
    for a, b in zip(bra.amps, ket.amps):
        if not (a.is_zero() or b.is_zero()):
            total = total + a.conj() * b
    return total


@dataclass(frozen=True)
class MonomialOperator:
    """w**phase * X**x_power * Z**z_power * (inversion if flagged)."""

    modulus: PrimeModulus
    x_power: int = 0
    z_power: int = 0
    inverted: bool = False
    phase: int = 0

    def __post_init__(self):
        d = self.modulus.d
        object.__setattr__(self, "x_power", self.x_power % d)
        object.__setattr__(self, "z_power", self.z_power % d)
        object.__setattr__(self, "phase", self.phase % d)


def identity_op(modulus: PrimeModulus) -> MonomialOperator:
    return MonomialOperator(modulus)


def x_op(modulus: PrimeModulus, power: int = 1) -> MonomialOperator:
    return MonomialOperator(modulus, x_power=power)


def z_op(modulus: PrimeModulus, power: int = 1) -> MonomialOperator:
    return MonomialOperator(modulus, z_power=power)


def inversion_op(modulus: PrimeModulus) -> MonomialOperator:
    return MonomialOperator(modulus, inverted=True)


def apply_monomial(op: MonomialOperator, k: Ket) -> Ket:
    """Exact action on a single-particle ket.

    |n> -> w**(phase + z_power * s) |s + x_power>  with s = -n if inverted
    else n.
    """
    d = op.modulus.d
    if k.modulus != op.modulus:
        raise ModulusMismatchError("operator and ket built over different moduli")
    if k.dim != d:
        raise ValueError(f"monomials act on dimension {d}, got ket of dimension {k.dim}")
    out = [CycloAmplitude.zero(op.modulus)] * d
    for n, amp in enumerate(k.amps):
        if amp.is_zero():
            continue
        s = (-n) % d if op.inverted else n
        out[(s + op.x_power) % d] = amp * CycloAmplitude.root(
            op.modulus, op.phase + op.z_power * s
        )
    return Ket(d, op.modulus, tuple(out))


def compose(op1: MonomialOperator, op2: MonomialOperator) -> MonomialOperator:
    """Monomial with dense matrix equal to matrix(op1) @ matrix(op2).

    Commutation picks up Z**c X**a = w**(c*a) X**a Z**c, and the inversion
    of op1 flips the sign of op2's powers as it moves right.
    """
    if op1.modulus != op2.modulus:
        raise ModulusMismatchError("composing operators over different moduli")
    sign = -1 if op1.inverted else 1
    phase = op1.phase + op2.phase + op1.z_power * sign * op2.x_power
    return MonomialOperator(
        op1.modulus,
        x_power=op1.x_power + sign * op2.x_power,
        z_power=op1.z_power + sign * op2.z_power,
        inverted=op1.inverted != op2.inverted,
        phase=phase,
    )


def adjoint(op: MonomialOperator) -> MonomialOperator:
    """Conjugate transpose, normalized back to the canonical written order."""
    a, c, t = op.x_power, op.z_power, op.phase
    if op.inverted:
        return MonomialOperator(op.modulus, x_power=a, z_power=c, inverted=True, phase=c * a - t)
    return MonomialOperator(op.modulus, x_power=-a, z_power=-c, inverted=False, phase=c * a - t)


def monomial_matrix(op: MonomialOperator) -> list:
    """Dense d x d matrix of exact amplitudes; the cross-check oracle path."""
    d = op.modulus.d
    zero = CycloAmplitude.zero(op.modulus)
    rows = [[zero] * d for _ in range(d)]
    for n in range(d):
        s = (-n) % d if op.inverted else n
        rows[(s + op.x_power) % d][n] = CycloAmplitude.root(op.modulus, op.phase + op.z_power * s)
    return rows
