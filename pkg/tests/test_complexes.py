import pytest

from dgglue.fields import QQ, PrimeField
from dgglue.linalg import Matrix
from dgglue.complexes import (Complex, ComplexError, GradedMap, cone,
                              graded_map_to_vec, hom_complex,
                              induced_cohomology_map, is_quasi_iso,
                              one_dim_complex, tensor, tensor_map,
                              vec_to_graded_map)
from dgglue.samples import random_chain_map, random_complex, rng


def two_term(field, mat_rows, lo=-1):
    m = Matrix.from_rows(field, mat_rows)
    return Complex(field, {lo: m.ncols, lo + 1: m.nrows}, {lo: m})


def test_d_squared_enforced():
    bad = Matrix.from_rows(QQ, [[1]])
    with pytest.raises(ComplexError):
        Complex(QQ, {0: 1, 1: 1, 2: 1}, {0: bad, 1: bad})


def test_shift_zero_is_identity():
    c = two_term(QQ, [[1, 1]])
    assert c.shift(0) == c
    assert c.shift(1).shift(-1) == c


def test_shift_window_and_sign():
    c = one_dim_complex(QQ, 0)
    assert c.shift(2).dims == {-2: 1}
    d = two_term(QQ, [[1, 1]])
    assert d.shift(1).d(-2) == d.d(-1).scaled(QQ(-1))
    assert d.shift(2).d(-3) == d.d(-1)


def test_shift_cohomology_relation():
    r = rng(0)
    c = random_complex(PrimeField(5), r, -2, 2, 3)
    h = c.cohomology()
    hs = c.shift(3).cohomology()
    assert hs == {k - 3: v for k, v in h.items()}


def test_cone_of_identity_acyclic():
    r = rng(1)
    for _ in range(5):
        c = random_complex(QQ, r, -2, 1, 2)
        assert cone(GradedMap.identity(c)).is_acyclic()


def test_cone_of_zero_splits():
    c = two_term(QQ, [[1, 1]])
    d = one_dim_complex(QQ, 0)
    z = GradedMap.zero(c, d, 0)
    expected = {}
    for k, v in d.cohomology().items():
        expected[k] = expected.get(k, 0) + v
    for k, v in c.cohomology().items():
        expected[k - 1] = expected.get(k - 1, 0) + v
    assert cone(z).cohomology() == expected


def test_cone_example_from_rank_computation():
    # (1 1): Q^2 -> Q in degree 0 has H^{-1} of dimension one and H^0 zero
    src = Complex(QQ, {0: 2}, {})
    tgt = Complex(QQ, {0: 1}, {})
    f = GradedMap(src, tgt, 0, {0: Matrix.from_rows(QQ, [[1, 1]])})
    assert cone(f).cohomology() == {-1: 1}


def test_cone_rejects_nonclosed():
    c = two_term(QQ, [[1, 1]])
    d = one_dim_complex(QQ, 0)
    f = GradedMap(c, d, 0, {0: Matrix.from_rows(QQ, [[1]])})
    assert not f.is_closed()
    with pytest.raises(ComplexError):
        cone(f)


def test_cone_rejects_wrong_degree():
    c = one_dim_complex(QQ)
    f = GradedMap(c, c.shift(-1), 1, {0: Matrix.identity(QQ, 1)})
    with pytest.raises(ComplexError):
        cone(f)


def test_cone_long_exact_sequence(field):
    r = rng(17)
    for _ in range(6):
        c = random_complex(field, r, -1, 1, 2)
        d = random_complex(field, r, -1, 1, 2)
        f = random_chain_map(r, c, d)
        cn = cone(f)
        for k in range(-3, 3):
            hk = induced_cohomology_map(f, k)
            hk1 = induced_cohomology_map(f, k + 1)
            coker = hk.nrows - hk.rank()
            kernel = hk1.ncols - hk1.rank()
            assert cn.cohomology().get(k, 0) == coker + kernel


def test_cohomology_examples():
    assert one_dim_complex(QQ).cohomology() == {0: 1}
    c = two_term(QQ, [[1]])
    assert c.cohomology() == {}
    d = two_term(QQ, [[1, 1]])
    assert d.cohomology() == {-1: 1}


def test_tensor_with_unit():
    c = two_term(QQ, [[1, 1]])
    u = one_dim_complex(QQ)
    assert tensor(c, u).cohomology() == c.cohomology()
    assert tensor(u, c).cohomology() == c.cohomology()


def test_hom_from_unit():
    c = two_term(QQ, [[1, 1]])
    assert hom_complex(one_dim_complex(QQ), c).cohomology() == c.cohomology()


def test_hom_acyclic_with_itself():
    acyclic = two_term(QQ, [[1]])
    assert acyclic.is_acyclic()
    assert hom_complex(acyclic, acyclic).is_acyclic()


def test_kuenneth(field):
    r = rng(23)
    for _ in range(6):
        c = random_complex(field, r, -1, 1, 2)
        d = random_complex(field, r, -1, 1, 2)
        hc, hd = c.cohomology(), d.cohomology()
        expected = {}
        for i, a in hc.items():
            for j, b in hd.items():
                expected[i + j] = expected.get(i + j, 0) + a * b
        assert tensor(c, d).cohomology() == expected


def test_tensor_differential_squares(field):
    r = rng(29)
    for _ in range(5):
        c = random_complex(field, r, -2, 2, 2)
        d = random_complex(field, r, -1, 1, 2)
        t = tensor(c, d)
        for k in t.degrees():
            assert (t.d(k + 1) @ t.d(k)).is_zero()


def test_graded_map_vec_roundtrip():
    r = rng(31)
    c = random_complex(QQ, r, -1, 1, 2)
    d = random_complex(QQ, r, -1, 1, 2)
    f = random_chain_map(r, c, d)
    vec = graded_map_to_vec(f)
    g = vec_to_graded_map(c, d, 0, vec)
    assert f == g


def test_tensor_map_is_chain_map():
    r = rng(37)
    c1 = random_complex(QQ, r, -1, 1, 2)
    c2 = random_complex(QQ, r, -1, 1, 2)
    f = random_chain_map(r, c1, c2)
    g = random_chain_map(r, c1, c2)
    fm = tensor_map(f, g)
    assert fm.is_closed()


def test_cone_of_degreewise_iso_acyclic(field):
    from dgglue.samples import random_invertible
    r = rng(41)
    for _ in range(4):
        c = random_complex(field, r, -2, 1, 2)
        conj = {k: random_invertible(field, r, c.dim(k)) for k in c.degrees()}
        d = Complex(field, dict(c.dims),
                    {k: conj[k + 1] @ (c.d(k) @ conj[k].inverse())
                     for k in c.dims if not c.d(k).is_zero()})
        f = GradedMap(c, d, 0, {k: conj[k] for k in c.degrees()})
        assert f.is_closed() and f.is_iso()
        assert cone(f).is_acyclic()


def test_quasi_iso_detection():
    c = two_term(QQ, [[1, 1]])
    assert is_quasi_iso(GradedMap.identity(c))
    z = GradedMap.zero(c, c, 0)
    assert not is_quasi_iso(z)
