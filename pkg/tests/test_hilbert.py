import itertools

import pytest

from mubgeom.arith import CycloAmplitude, PrimeModulus
from mubgeom.hilbert import (
    MonomialOperator,
    adjoint,
    apply_monomial,
    basis_ket,
    compose,
    identity_op,
    inner,
    inversion_op,
    monomial_matrix,
    tensor,
    x_op,
    z_op,
)

MOD3 = PrimeModulus(3)
MOD5 = PrimeModulus(5)


def matmul(mod, a, b):
    d = mod.d
    zero = CycloAmplitude.zero(mod)
    out = [[zero] * d for _ in range(d)]
    for i in range(d):
        for k in range(d):
            acc = zero
            for j in range(d):
                acc = acc + a[i][j] * b[j][k]
            out[i][k] = acc
    return out


def some_operators(mod):
    d = mod.d
    ops = []
    for a, c, i, t in itertools.product(range(d), range(d), (False, True), range(d)):
        ops.append(MonomialOperator(mod, x_power=a, z_power=c, inverted=i, phase=t))
    return ops


class TestBasisKet:
    def test_unit_positions(self):
        k = basis_ket(MOD3, 3, 0)
        assert [a.is_zero() for a in k.amps] == [False, True, True]
        assert basis_ket(MOD3, 9, 8).amps[8] == CycloAmplitude.one(MOD3)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            basis_ket(MOD3, 3, 3)


class TestApplyMonomial:
    def test_x_wraps(self):
        d = MOD3.d
        assert apply_monomial(x_op(MOD3), basis_ket(MOD3, d, d - 1)).amps == basis_ket(MOD3, d, 0).amps

    def test_z_phases(self):
        got = apply_monomial(z_op(MOD3), basis_ket(MOD3, 3, 1))
        assert got.amps[1] == CycloAmplitude.root(MOD3, 1)

    def test_inversion(self):
        got = apply_monomial(inversion_op(MOD3), basis_ket(MOD3, 3, 1))
        assert got.amps == basis_ket(MOD3, 3, 2).amps


class TestCompose:
    def test_identity_neutral(self):
        op = MonomialOperator(MOD3, x_power=2, z_power=1)
        assert compose(op, identity_op(MOD3)) == op
        assert compose(identity_op(MOD3), op) == op

    def test_zx_vs_xz_phase_from_dense_oracle(self):
        # Z then X vs X then Z differ by one root of unity; the dense
        # product decides which way it goes
        zx = compose(z_op(MOD3), x_op(MOD3))
        xz = compose(x_op(MOD3), z_op(MOD3))
        assert matmul(MOD3, monomial_matrix(z_op(MOD3)), monomial_matrix(x_op(MOD3))) == monomial_matrix(zx)
        assert zx == MonomialOperator(MOD3, x_power=1, z_power=1, phase=1)
        assert xz == MonomialOperator(MOD3, x_power=1, z_power=1, phase=0)

    def test_double_inversion_is_identity(self):
        assert compose(inversion_op(MOD3), inversion_op(MOD3)) == identity_op(MOD3)

    def test_matches_dense_product_exhaustively(self):
        ops = some_operators(MOD3)
        for op1 in ops[::7]:
            for op2 in ops[::5]:
                dense = matmul(MOD3, monomial_matrix(op1), monomial_matrix(op2))
                assert dense == monomial_matrix(compose(op1, op2))

    def test_associative(self):
        ops = some_operators(MOD3)[::11]
        for a, b, c in itertools.product(ops[:4], ops[2:6], ops[4:8]):
            assert compose(compose(a, b), c) == compose(a, compose(b, c))


class TestAdjoint:
    def test_matches_dense_conjugate_transpose(self):
        for op in some_operators(MOD3):
            mat = monomial_matrix(op)
            dagger = [[mat[j][i].conj() for j in range(3)] for i in range(3)]
            assert dagger == monomial_matrix(adjoint(op))

    def test_unitary(self):
        for op in some_operators(MOD5)[::13]:
            assert compose(op, adjoint(op)) == identity_op(MOD5)


class TestTensorAndInner:
    def test_tensor_slots(self):
        k = tensor(basis_ket(MOD3, 3, 1), basis_ket(MOD3, 3, 2))
        assert [i for i, a in enumerate(k.amps) if not a.is_zero()] == [5]
        k0 = tensor(basis_ket(MOD3, 3, 0), basis_ket(MOD3, 3, 0))
        assert not k0.amps[0].is_zero()

    def test_orthonormal_basis(self):
        for n in range(3):
            for n2 in range(3):
                ip = inner(basis_ket(MOD3, 3, n), basis_ket(MOD3, 3, n2))
                assert ip.to_fraction() == (1 if n == n2 else 0)

    def test_conjugate_symmetry(self):
        from mubgeom.mub import mub_state

        k1 = mub_state(MOD3, 0, 1)
        k2 = mub_state(MOD3, 1, 2)
        assert inner(k1, k2) == inner(k2, k1).conj()

    def test_inner_factorizes_over_tensor(self):
        from mubgeom.mub import mub_state

        a, b = mub_state(MOD3, 0, 1), mub_state(MOD3, 1, 2)
        c, e = mub_state(MOD3, 2, 0), mub_state(MOD3, 0, 0)
        lhs = inner(tensor(a, b), tensor(c, e))
        assert lhs == inner(a, c) * inner(b, e)

    def test_tensor_of_normalized_is_normalized(self):
        from mubgeom.mub import mub_state

        assert tensor(mub_state(MOD3, 1, 2), mub_state(MOD3, 2, 0)).is_normalized()

    def test_apply_matches_dense_on_mub_states(self):
        from mubgeom.mub import mub_state

        state = mub_state(MOD3, 1, 1)
        for op in some_operators(MOD3)[::17]:
            mat = monomial_matrix(op)
            direct = apply_monomial(op, state)
            for i in range(3):
                acc = CycloAmplitude.zero(MOD3)
                for j in range(3):
                    acc = acc + mat[i][j] * state.amps[j]
                assert acc == direct.amps[i]
