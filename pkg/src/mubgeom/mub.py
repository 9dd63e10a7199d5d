"""The d+1 mutually unbiased bases for an odd prime dimension d.

Bases are labeled by b in {CB, 0, 1, ..., d-1}.  CB is the computational
basis; it is a genuine distinct label, never a residue (conflating it with
a numeric b breaks the conjugation map and the line equation).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

from .arith import CycloAmplitude, PrimeModulus, half_mod
from .hilbert import Ket, apply_monomial, basis_ket, MonomialOperator

CB = "CB"  # computational-basis column label
BasisLabel = Union[int, str]


def all_basis_labels(modulus: PrimeModulus) -> list:
    return [CB] + list(range(modulus.d))


def _check_label(modulus: PrimeModulus, b: BasisLabel) -> None:
    if b == CB:
        return
    if not isinstance(b, int) or not 0 <= b < modulus.d:
        raise ValueError(f"basis label must be CB or an integer in [0, {modulus.d}), got {b!r}")


def state_exponents(modulus: PrimeModulus, m: int, b: int) -> list:
    """Phase exponent at each slot n of |m;b>, reduced in Z_d before use."""
    d = modulus.d
    b_half = half_mod(b, d)
    return [(b_half * n * (n - 1) - n * m) % d for n in range(d)]


@lru_cache(maxsize=None)
def _mub_state_cached(d: int, m: int, b) -> Ket:
    modulus = PrimeModulus(d)
    if b == CB:
        return basis_ket(modulus, d, m)
    amps = tuple(
        CycloAmplitude.root(modulus, t, scale=1) for t in state_exponents(modulus, m, b)
    )
    return Ket(d, modulus, amps)


def mub_state(modulus: PrimeModulus, m: int, b: BasisLabel) -> Ket:
    """State m of basis b: amplitudes w**((b/2)n(n-1) - nm)/sqrt(d), or |m> for CB."""
    _check_label(modulus, b)
    return _mub_state_cached(modulus.d, m % modulus.d, b)


def tilde(modulus: PrimeModulus, m: int, b: BasisLabel) -> tuple:
    """Complex-conjugation partner (d-m, d-b); identity on the CB column."""
    _check_label(modulus, b)
    d = modulus.d
    if b == CB:
        return (m % d, CB)
    return ((d - m) % d, (d - b) % d)


def check_eigenrelation(modulus: PrimeModulus, m: int, b: int) -> bool:
    """X Z**b |m;b> = w**m |m;b>, exactly."""
    if b == CB:
        raise ValueError("the eigenrelation is stated for numeric basis labels only")
    _check_label(modulus, b)
    state = mub_state(modulus, m, b)
    op = MonomialOperator(modulus, x_power=1, z_power=b)
    expected = state.scaled(CycloAmplitude.root(modulus, m))
    return apply_monomial(op, state).amps == expected.amps


def overlap_magnitude_squared(
    modulus: PrimeModulus, idx1: tuple, idx2: tuple
) -> Fraction:
    """|<m1;b1|m2;b2>|**2 as an exact rational."""
    m1, b1 = idx1
    m2, b2 = idx2
    _check_label(modulus, b1)
    _check_label(modulus, b2)
    d = modulus.d
    m1, m2 = m1 % d, m2 % d
    if b1 == CB and b2 == CB:
        return Fraction(1) if m1 == m2 else Fraction(0)
    if b1 == CB or b2 == CB:
        # one amplitude of a flat state: magnitude 1/sqrt(d)
        return Fraction(1, d)
    e1 = state_exponents(modulus, m1, b1)
    e2 = state_exponents(modulus, m2, b2)
    counts = [0] * d
    for t1, t2 in zip(e1, e2):
        counts[(t2 - t1) % d] += 1
    amp = CycloAmplitude(modulus, counts, scale=2)
    return amp.magnitude_squared()


def projector_element(modulus: PrimeModulus, m: int, b: int, n: int, n2: int) -> CycloAmplitude:
    """<n| (|m;b><m;b|) |n2> = (1/d) w**((n - n2)((b/2)(n + n2 - 1) - m))."""
    if b == CB:
        raise ValueError("use cb_projector_element for the computational-basis column")
    _check_label(modulus, b)
    d = modulus.d
    t = ((n - n2) * (half_mod(b, d) * (n + n2 - 1) - m)) % d
    return CycloAmplitude.root(modulus, t, scale=2)


def cb_projector_element(modulus: PrimeModulus, m: int, n: int, n2: int) -> CycloAmplitude:
    """<n| (|m><m|) |n2> for the CB column: delta_{n,m} delta_{n,n2}."""
    d = modulus.d
    if n % d == m % d and n % d == n2 % d:
        return CycloAmplitude.one(modulus)
    return CycloAmplitude.zero(modulus)
