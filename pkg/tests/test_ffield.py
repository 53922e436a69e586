"""
Tests for finite field, polynomial and matrix arithmetic
"""

import itertools

import numpy as np
import pytest

from linmap.errors import DimensionMismatch, NonPrime, NotPrimePower, TooLarge, ZeroModulus
from linmap.ffield import (
    ONE,
    X,
    FieldElement,
    Matrix,
    companion,
    field_ctx,
    field_for_q,
    format_matrix,
    format_poly,
    irreducibles,
    is_irreducible,
    mat_ops,
    monic_polys,
    parse_matrix,
    parse_poly,
    poly_divmod,
    poly_mod,
    poly_mod_pow,
    poly_mul,
    poly_to_str,
)


class TestFieldCtx:
    """Test field construction and its guards"""

    def test_prime_field(self):
        """Test F_2 is residue arithmetic with modulus x"""
        F = field_ctx(2, 1)
        assert F.q == 2
        assert F.modulus == X
        assert F.add(1, 1) == 0

    def test_f4_modulus(self):
        """Test F_4 uses x^2+x+1, the only irreducible quadratic over F_2"""
        assert field_ctx(2, 2).modulus == (1, 1, 1)

    def test_f8_modulus_is_smallest(self):
        """Test F_8 picks x^3+x+1 before x^3+x^2+1"""
        assert field_ctx(2, 3).modulus == (1, 1, 0, 1)

    def test_composite_characteristic(self):
        """Test a composite p is rejected"""
        with pytest.raises(NonPrime):
            field_ctx(4, 1)

    def test_guards(self):
        """Test extension degree and field size guards"""
        with pytest.raises(TooLarge):
            field_ctx(2, 9)
        with pytest.raises(TooLarge):
            field_ctx(1031, 2)

    def test_field_for_q(self):
        """Test prime powers decompose and others are rejected"""
        assert field_for_q(9).p == 3
        assert field_for_q(9).d == 2
        assert field_for_q(7).d == 1
        with pytest.raises(NotPrimePower):
            field_for_q(6)
        with pytest.raises(NotPrimePower):
            field_for_q(1)

    def test_element_codes(self):
        """Test coordinate view round-trips through codes"""
        F = field_ctx(3, 2)
        assert F.element(5) == FieldElement((2, 1))
        assert F.code(FieldElement((2, 1))) == 5
        with pytest.raises(ValueError):
            F.element(9)


class TestFieldArithmetic:
    """Test F_q arithmetic"""

    def test_f4_table(self):
        """Test x*x = x+1 and x*(x+1) = 1 in F_4"""
        F = field_ctx(2, 2)
        assert F.mul(2, 2) == 3
        assert F.mul(2, 3) == 1
        assert F.inv(2) == 3

    def test_zero_has_no_inverse(self):
        """Test inverting zero fails"""
        with pytest.raises(ZeroDivisionError):
            field_ctx(5, 1).inv(0)

    @pytest.mark.parametrize("q", [3, 4, 8, 9])
    def test_axioms_exhaustive(self, q):
        """Test associativity, distributivity and inverses on every triple"""
        F = field_for_q(q)
        for a, b, c in itertools.product(range(q), repeat=3):
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        for a in range(1, q):
            assert F.mul(a, F.inv(a)) == 1
            assert F.add(a, F.neg(a)) == 0

    @pytest.mark.parametrize("q", [2, 3, 4, 9, 16])
    def test_vectorised_helpers(self, q):
        """Test mul_row and add_arrays agree with scalar arithmetic"""
        F = field_for_q(q)
        xs = np.arange(q, dtype=np.int64)
        for a in range(q):
            assert list(F.mul_row(a)) == [F.mul(a, x) for x in range(q)]
            assert list(F.add_arrays(np.full(q, a, dtype=np.int64), xs)) == [F.add(a, x) for x in range(q)]


class TestPolynomials:
    """Test polynomial arithmetic over F_q"""

    def test_mod_pow_examples(self):
        """Test x^3 = 1 mod x^2+x+1 over F_2, and trivial exponents"""
        F = field_ctx(2, 1)
        f = (1, 1, 1)
        assert poly_mod_pow(X, 3, f, F) == ONE
        assert poly_mod_pow(X, 1, f, F) == X
        assert poly_mod_pow(X, 0, f, F) == ONE

    def test_mod_pow_zero_modulus(self):
        """Test degree-zero and zero moduli are rejected"""
        F = field_ctx(2, 1)
        with pytest.raises(ZeroModulus):
            poly_mod_pow(X, 2, (), F)
        with pytest.raises(ZeroModulus):
            poly_mod_pow(X, 2, ONE, F)
        with pytest.raises(ZeroModulus):
            poly_divmod(X, (), F)

    def test_divmod_reconstructs(self):
        """Test a = q*b + r with deg r < deg b"""
        F = field_ctx(5, 1)
        a, b = (3, 0, 4, 1, 2), (1, 2, 1)
        quot, rem = poly_divmod(a, b, F)
        rebuilt = poly_mul(quot, b, F)
        for i, c in enumerate(rem):
            rebuilt = rebuilt[:i] + (F.add(rebuilt[i], c),) + rebuilt[i + 1:]
        assert rebuilt == a
        assert len(rem) < len(b)

    def test_irreducibles_over_f2(self):
        """Test irreducible lists for small degrees"""
        F = field_ctx(2, 1)
        assert irreducibles(F, 1) == [(0, 1), (1, 1)]
        assert irreducibles(F, 2) == [(1, 1, 1)]
        assert irreducibles(F, 3) == [(1, 1, 0, 1), (1, 0, 1, 1)]

    def test_irreducible_counts(self):
        """Test the number of monic irreducibles (necklace counts)"""
        assert len(irreducibles(field_ctx(2, 1), 4)) == 3
        assert len(irreducibles(field_ctx(3, 1), 2)) == 3
        assert len(irreducibles(field_for_q(4), 2)) == 6

    def test_irreducible_guard(self):
        """Test degree and search-size guards"""
        with pytest.raises(TooLarge):
            irreducibles(field_ctx(2, 1), 7)
        with pytest.raises(TooLarge):
            irreducibles(field_ctx(17, 1), 6)

    @pytest.mark.parametrize("q,t", [(2, 4), (3, 3), (4, 2)])
    def test_irreducibles_have_no_small_divisor(self, q, t):
        """Test every irreducible is coprime to all monic polys of degree <= t/2"""
        F = field_for_q(q)
        for f in irreducibles(F, t):
            for k in range(1, t // 2 + 1):
                for g in monic_polys(F, k):
                    assert poly_mod(f, g, F) != ()

    @pytest.mark.parametrize("q,t", [(2, 3), (2, 4), (3, 2), (5, 2)])
    def test_lagrange(self, q, t):
        """Test x^(q^t - 1) = 1 mod every irreducible f with f(0) != 0"""
        F = field_for_q(q)
        for f in irreducibles(F, t):
            if f[0]:
                assert poly_mod_pow(X, q ** t - 1, f, F) == ONE

    def test_reducible(self):
        """Test (x+1)^2 is not irreducible"""
        F = field_ctx(2, 1)
        assert not is_irreducible((1, 0, 1), F)

    def test_text_round_trip(self):
        """Test the comma format, low degree first"""
        F = field_ctx(2, 1)
        assert parse_poly("1,1,1", F) == (1, 1, 1)
        assert format_poly((1, 1, 0, 1), F) == "1,1,0,1"
        assert poly_to_str((1, 1, 0, 1), F) == "x^3+x+1"
        assert parse_poly("1,0,0", F) == (1,)

    def test_parse_rejects_bad_digit(self):
        """Test a coefficient outside the field"""
        with pytest.raises(ValueError):
            parse_poly("1,3", field_ctx(3, 1))


class TestMatrices:
    """Test matrix operations"""

    def test_kernel_examples(self):
        """Test kernel dimensions of identity, zero and a Jordan block"""
        ops = mat_ops(field_ctx(2, 1))
        assert ops.kernel_dim(ops.identity(3)) == 0
        assert ops.kernel_dim(ops.zero(3)) == 3
        assert ops.kernel_dim(Matrix.of([[0, 0], [1, 0]])) == 1

    def test_rank_nullity(self):
        """Test kernel_dim + |image_basis| = n on random matrices"""
        rng = np.random.default_rng(7)
        for q in (2, 3, 4, 5):
            ops = mat_ops(field_for_q(q))
            for n in range(1, 5):
                for _ in range(10):
                    T = Matrix.of(rng.integers(0, q, size=(n, n)).tolist())
                    assert ops.kernel_dim(T) + len(ops.image_basis(T)) == n
                    for v in ops.kernel_basis(T):
                        assert ops.apply(T, v) == (0,) * n

    def test_dimension_mismatch(self):
        """Test non-square and mismatched operands"""
        ops = mat_ops(field_ctx(2, 1))
        with pytest.raises(DimensionMismatch):
            Matrix.of([[1, 0]])
        with pytest.raises(DimensionMismatch):
            ops.mul(ops.identity(2), ops.identity(3))
        with pytest.raises(DimensionMismatch):
            ops.apply(ops.identity(2), (1, 0, 0))

    def test_companion(self):
        """Test the companion matrix of x^2+x+1 over F_2 has order 3"""
        F = field_ctx(2, 1)
        ops = mat_ops(F)
        C = companion((1, 1, 1), F)
        assert C.rows == ((0, 1), (1, 1))
        assert ops.pow(C, 3) == ops.identity(2)
        assert ops.pow(C, 1) != ops.identity(2)

    def test_pow_and_apply(self):
        """Test a nilpotent Jordan block dies at its size"""
        ops = mat_ops(field_ctx(3, 1))
        J = Matrix.of([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
        assert not ops.is_zero(ops.pow(J, 2))
        assert ops.is_zero(ops.pow(J, 3))
        assert ops.apply(J, (1, 2, 0)) == (0, 1, 2)

    def test_block_diag(self):
        """Test blocks land on the diagonal"""
        ops = mat_ops(field_ctx(2, 1))
        M = ops.block_diag(Matrix.of([[1]]), Matrix.of([[0, 1], [1, 1]]))
        assert M.rows == ((1, 0, 0), (0, 0, 1), (0, 1, 1))

    def test_matrix_text(self):
        """Test semicolon separated rows"""
        F = field_ctx(2, 1)
        assert parse_matrix("1,0;0,1", F) == mat_ops(F).identity(2)
        assert format_matrix(Matrix.of([[0, 1], [1, 1]]), F) == "0,1;1,1"
