from fractions import Fraction

import pytest

from dgglue.fields import QQ, PrimeField, FieldError
from dgglue.linalg import Matrix, kron, quotient_maps
from dgglue.samples import random_invertible, random_matrix, rng


def test_prime_field_rejects_composites():
    with pytest.raises(FieldError):
        PrimeField(6)


def test_rational_parse_format():
    assert QQ.parse("3/4") == Fraction(3, 4)
    assert QQ.format(Fraction(-1, 2)) == "-1/2"
    assert QQ.format(Fraction(5)) == "5"


def test_rank_identity_and_zero():
    assert Matrix.identity(QQ, 3).rank() == 3
    assert Matrix.zeros(QQ, 2, 5).rank() == 0


def test_rank_dependent_rows():
    m = Matrix.from_rows(QQ, [[1, 2], [2, 4]])
    assert m.rank() == 1


def test_kernel_identity_empty():
    assert Matrix.identity(QQ, 4).kernel_basis().ncols == 0


def test_kernel_zero_map():
    k = Matrix.zeros(QQ, 2, 3).kernel_basis()
    assert k.ncols == 3 and k.rank() == 3


def test_kernel_one_relation():
    k = Matrix.from_rows(QQ, [[1, 1]]).kernel_basis()
    assert k.ncols == 1
    col = k.columns()[0]
    assert col[0] == -col[1] != 0


@pytest.mark.parametrize("p", [2, 5, 7])
def test_rank_kernel_random_modp(p):
    field = PrimeField(p)
    r = rng(p)
    for _ in range(25):
        m = random_matrix(field, r, r.randrange(5), r.randrange(5))
        k = m.kernel_basis()
        assert (m @ k).is_zero()
        assert k.ncols == m.ncols - m.rank()


def test_solve_consistency():
    r = rng(3)
    field = PrimeField(5)
    for _ in range(25):
        a = random_matrix(field, r, 4, 3)
        x = random_matrix(field, r, 3, 2)
        b = a @ x
        sol = a.solve(b)
        assert sol is not None and a @ sol == b


def test_solve_inconsistent_returns_none():
    a = Matrix.from_rows(QQ, [[1], [0]])
    b = Matrix.from_rows(QQ, [[0], [1]])
    assert a.solve(b) is None


def test_inverse_roundtrip():
    r = rng(11)
    for field in (QQ, PrimeField(7)):
        for _ in range(10):
            n = r.randrange(1, 5)
            m = random_invertible(field, r, n)
            assert m @ m.inverse() == Matrix.identity(field, n)


def test_block_and_stack():
    a = Matrix.identity(QQ, 2)
    b = Matrix.zeros(QQ, 2, 1)
    h = Matrix.hstack([a, b])
    assert h.shape == (2, 3)
    v = Matrix.vstack([a, Matrix.zeros(QQ, 1, 2)])
    assert v.shape == (3, 2)
    blk = Matrix.block(QQ, [2, 1], [2], {(0, 0): a, (1, 0): Matrix.zeros(QQ, 1, 2)})
    assert blk.shape == (3, 2)


def test_kron_shape_and_values():
    a = Matrix.from_rows(QQ, [[2]])
    b = Matrix.from_rows(QQ, [[1, 0], [0, 3]])
    k = kron(a, b)
    assert k.shape == (2, 2) and k.get(1, 1) == 6


def test_quotient_maps():
    sub = Matrix.from_rows(QQ, [[1], [1], [0]])
    proj, lift = quotient_maps(QQ, 3, sub)
    assert (proj @ sub).is_zero()
    assert proj @ lift == Matrix.identity(QQ, 2)


def test_quotient_maps_full_and_zero():
    proj, lift = quotient_maps(QQ, 2, Matrix.identity(QQ, 2))
    assert proj.nrows == 0
    proj, lift = quotient_maps(QQ, 2, Matrix.zeros(QQ, 2, 0))
    assert proj.nrows == 2 and proj @ lift == Matrix.identity(QQ, 2)


def test_sparse_dense_agree():
    r = rng(5)
    field = PrimeField(7)
    assert Matrix.zeros(field, 80, 80).entries is not None  # sparse above threshold
    small = random_matrix(field, r, 8, 8)
    assert small.rows is not None  # dense below threshold
    # embed in a sparse container and compare every operation
    big = Matrix.zeros(field, 80, 80)
    for (i, j), v in small.items():
        big.set(i, j, v)
    assert big.rank() == small.rank()
    prod_sparse = big @ big
    prod_dense = small @ small
    assert all(prod_sparse.get(i, j) == prod_dense.get(i, j)
               for i in range(8) for j in range(8))
