import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubgeom.arith import (
    CycloAmplitude,
    IsTwoError,
    ModulusMismatchError,
    NotPrimeError,
    NotRationalError,
    OutOfRangeError,
    PrimeModulus,
    Residue,
    ScaleParityError,
    cyclo_root_power,
    fraction_as_d_power,
    half,
    inv,
    make_prime,
)


class TestMakePrime:
    def test_accepts_odd_primes(self):
        for d in (3, 5, 7, 11, 13, 97):
            assert make_prime(d).d == d

    def test_rejects_two(self):
        with pytest.raises(IsTwoError):
            make_prime(2)

    def test_rejects_composites(self):
        for d in (9, 15, 91):
            with pytest.raises(NotPrimeError):
                make_prime(d)

    def test_rejects_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            make_prime(1)
        with pytest.raises(OutOfRangeError):
            make_prime(-7)


class TestResidue:
    def test_reduction(self):
        mod = make_prime(5)
        assert Residue(7, mod).value == 2
        assert (Residue(3, mod) + Residue(4, mod)).value == 2

    def test_inv(self):
        assert inv(Residue(2, make_prime(3))).value == 2
        assert inv(Residue(3, make_prime(7))).value == 5

    def test_inv_zero(self):
        with pytest.raises(ZeroDivisionError):
            inv(Residue(0, make_prime(5)))

    def test_half(self):
        assert half(Residue(1, make_prime(3))).value == 2
        assert half(Residue(2, make_prime(5))).value == 1
        assert half(Residue(0, make_prime(7))).value == 0

    @given(st.sampled_from([3, 5, 7, 11]), st.integers(0, 100))
    def test_half_doubles_back(self, d, x):
        mod = make_prime(d)
        r = Residue(x, mod)
        assert (Residue(2, mod) * half(r)).value == r.value

    def test_modulus_mixing_rejected(self):
        with pytest.raises(ModulusMismatchError):
            Residue(1, make_prime(3)) + Residue(1, make_prime(5))


class TestCycloAmplitude:
    def test_root_power_wraps(self):
        mod = make_prime(5)
        assert cyclo_root_power(Residue(0, mod)) == CycloAmplitude.one(mod)
        assert cyclo_root_power(Residue(5, mod)) == CycloAmplitude.one(mod)

    def test_top_root_canonicalizes(self):
        mod = make_prime(5)
        top = CycloAmplitude.root(mod, 4)
        assert top.coeffs == (-1, -1, -1, -1)

    def test_all_roots_sum_to_zero(self):
        mod = make_prime(7)
        total = CycloAmplitude.zero(mod)
        for t in range(7):
            total = total + CycloAmplitude.root(mod, t)
        assert total.is_zero()

    def test_root_times_inverse_root(self):
        mod = make_prime(7)
        assert CycloAmplitude.root(mod, 1) * CycloAmplitude.root(mod, 6) == CycloAmplitude.one(mod)

    def test_conj(self):
        mod = make_prime(5)
        assert CycloAmplitude.root(mod, 2).conj() == CycloAmplitude.root(mod, 3)

    def test_scale_alignment(self):
        mod = make_prime(3)
        # d * d^(-2/2) == 1
        scaled = CycloAmplitude(mod, (3, 0), scale=2)
        assert scaled == CycloAmplitude.one(mod)

    def test_odd_scale_addition_rejected(self):
        mod = make_prime(3)
        with pytest.raises(ScaleParityError):
            CycloAmplitude.one(mod, scale=0) + CycloAmplitude.one(mod, scale=1)

    def test_zero_is_unique(self):
        mod = make_prime(3)
        z = CycloAmplitude(mod, (5, 0), scale=4) - CycloAmplitude(mod, (5, 0), scale=4)
        assert z.coeffs == (0, 0) and z.scale == 0

    def test_to_complex_examples(self):
        mod = make_prime(3)
        z = CycloAmplitude.root(mod, 1).to_complex()
        assert abs(z - complex(-0.5, 0.8660254037844387)) < 1e-12
        assert CycloAmplitude.zero(mod).to_complex() == 0
        assert abs(CycloAmplitude.one(mod, scale=1).to_complex() - 3**-0.5) < 1e-12

    def test_to_fraction(self):
        mod = make_prime(3)
        assert CycloAmplitude(mod, (2, 0), scale=4).to_fraction() == Fraction(2, 9)
        with pytest.raises(NotRationalError):
            CycloAmplitude.root(mod, 1).to_fraction()
        with pytest.raises(NotRationalError):
            CycloAmplitude.one(mod, scale=1).to_fraction()


amplitudes = st.builds(
    lambda d, coeffs, scale: CycloAmplitude(PrimeModulus(d), coeffs[: d - 1], 2 * scale),
    st.just(7),
    st.lists(st.integers(-50, 50), min_size=6, max_size=6),
    st.integers(0, 2),
)


class TestRingProperties:
    @given(amplitudes, amplitudes, amplitudes)
    def test_associativity_and_distributivity(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c

    @given(amplitudes, amplitudes)
    def test_conj_multiplicative(self, a, b):
        assert (a * b).conj() == a.conj() * b.conj()

    @given(amplitudes, amplitudes)
    @settings(max_examples=50)
    def test_complex_morphism(self, a, b):
        assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-9
        assert abs((a + b).to_complex() - (a.to_complex() + b.to_complex())) < 1e-9

    @given(amplitudes)
    def test_zero_bridge(self, a):
        assert a.is_zero() == (abs(a.to_complex()) < 1e-9)

    @given(amplitudes)
    def test_canonicalization_idempotent(self, a):
        again = CycloAmplitude(a.modulus, a.coeffs, a.scale)
        assert again.coeffs == a.coeffs and again.scale == a.scale


def test_fraction_rendering():
    assert fraction_as_d_power(Fraction(1, 9), 3) == "1/3^2"
    assert fraction_as_d_power(Fraction(0), 3) == "0"
    assert fraction_as_d_power(Fraction(5), 3) == "5"
    with pytest.raises(ValueError):
        fraction_as_d_power(Fraction(1, 2), 3)
