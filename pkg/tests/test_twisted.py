import pytest

from dgglue.fields import QQ
from dgglue.linalg import Matrix
from dgglue.complexes import Complex
from dgglue.dgcat import HomElt, field_category, validate_category, ext_table
from dgglue.filtlab import truncated_polynomial_algebra, proj_dgcat
from dgglue.samples import (random_closed_tw_morphism, random_filtered_algebra,
                            random_twisted_complex, rng)
from dgglue.twisted import (TwError, TwMorphism, TwistedComplex, bare, cone_tw,
                            shift_hom, tw_category, tw_compose, tw_hom,
                            tw_identity, tw_is_closed, tw_morphism_to_vec,
                            vec_to_tw_morphism)

from conftest import a2_category


def test_shift_hom_degrees(field):
    k = field_category(field, obj="x")
    assert shift_hom(k, ("x", 0), ("x", 0)).dims == {0: 1}
    assert shift_hom(k, ("x", 3), ("x", 3)).dims == {0: 1}
    a2 = a2_category(field)
    # one-dimensional in degree -1 for the pair (A[0], B[1])
    assert shift_hom(a2, ("0:x", 0), ("1:y", 1)).dims == {-1: 1}


def test_shift_hom_sign():
    # differential of the shifted hom is (-1)^l d
    c = Complex(QQ, {0: 1, 1: 1}, {0: Matrix.from_rows(QQ, [[1]])})

    def comp(a, b, cc, i, j):
        rows = c.dim(i + j)
        m = Matrix.zeros(QQ, rows, c.dim(i) * c.dim(j))
        if rows and (i == 0 or j == 0):
            m.set(0, 0, QQ.one)
        return m

    from dgglue.dgcat import DgCategory
    cat = DgCategory(QQ, ["*"], {("*", "*"): c}, comp, {"*": (QQ.one,)})
    assert shift_hom(cat, ("*", 0), ("*", 1)).d(-1) == c.d(0).scaled(QQ(-1))
    assert shift_hom(cat, ("*", 0), ("*", 2)).d(-2) == c.d(0)


def test_tw_hom_of_bare_objects_is_shift_hom(field):
    a2 = a2_category(field)
    t1 = bare(a2, "0:x", 0)
    t2 = bare(a2, "1:y", 1)
    assert tw_hom(t1, t2).dims == shift_hom(a2, ("0:x", 0), ("1:y", 1)).dims


def test_cone_of_identity_on_bare_object(field):
    k = field_category(field)
    c = cone_tw(tw_identity(bare(k, "*")))
    assert c.terms == (("*", 0), ("*", 1))
    assert (0, 1) in c.delta
    assert tw_hom(c, c).is_acyclic()


def test_cone_of_zero_block_diagonal(field):
    k = field_category(field)
    b1, b2 = bare(k, "*"), bare(k, "*", 1)
    z = TwMorphism(b1, b2, 0, {})
    c = cone_tw(z)
    assert c.terms == (("*", 1), ("*", 1))
    assert c.delta == {}


def test_cone_of_a2_arrow(field):
    a2 = a2_category(field)
    bx, by = bare(a2, "0:x"), bare(a2, "1:y")
    arrow = TwMorphism(bx, by, 0, {(0, 0): HomElt("0:x", "1:y", 0, (field.one,))})
    assert tw_is_closed(arrow)
    cn = cone_tw(arrow)
    assert tw_hom(cn, cn).cohomology() == {0: 1}


def test_cone_rejects_nonclosed():
    # over the dual numbers with a nonzero differential-like delta this is
    # easiest to trigger via a non-chain map between twisted complexes
    field = QQ
    k = field_category(field)
    b = bare(k, "*")
    c = cone_tw(tw_identity(b))
    # projection onto the shifted summand is not closed
    p = TwMorphism(c, b.shift(1), 0, {(0, 1): k.id_elt("*")})
    if not tw_is_closed(p):
        with pytest.raises(TwError):
            cone_tw(p)


def test_maurer_cartan_validation():
    field = QQ
    a2 = a2_category(field)
    # delta with delta^2 != 0: arrow after identity with no cancelling term
    arrow = HomElt("0:x", "1:y", 0, (field.one,))
    ident = HomElt("0:x", "0:x", 0, (field.one,))
    with pytest.raises(TwError):
        TwistedComplex(a2, [("1:y", 0), ("0:x", 1), ("0:x", 2)],
                       {(0, 1): arrow, (1, 2): ident})


def test_tw_category_full_subcategory(field):
    a2 = a2_category(field)
    cat = tw_category(a2, {"x": bare(a2, "0:x"), "y": bare(a2, "1:y")})
    assert validate_category(cat) == []
    assert ext_table(cat)[("x", "y")] == {0: 1}
    assert ext_table(cat)[("y", "x")] == {}


def test_tw_category_identity_is_diagonal(field):
    a2 = a2_category(field)
    bx = bare(a2, "0:x")
    arrow_cone = cone_tw(TwMorphism(bx, bare(a2, "1:y"), 0,
                                    {(0, 0): HomElt("0:x", "1:y", 0, (field.one,))}))
    idm = tw_identity(arrow_cone)
    assert set(idm.entries) == {(0, 0), (1, 1)}


def test_composition_of_closed_maps_closed(field):
    r = rng(5)
    alg = truncated_polynomial_algebra(field, 2)
    cat = proj_dgcat(alg)
    t1 = random_twisted_complex(cat, r, depth=2)
    t2 = random_twisted_complex(cat, r, depth=2)
    t3 = random_twisted_complex(cat, r, depth=1)
    f = random_closed_tw_morphism(r, t1, t2)
    g = random_closed_tw_morphism(r, t2, t3)
    assert tw_is_closed(tw_compose(g, f))


def test_tw_hom_differential_squares(field):
    r = rng(9)
    for seed in range(3):
        alg = random_filtered_algebra(field, rng(100 + seed))
        cat = proj_dgcat(alg)
        t1 = random_twisted_complex(cat, r, depth=2)
        t2 = random_twisted_complex(cat, r, depth=2)
        h = tw_hom(t1, t2)
        for k in h.degrees():
            assert (h.d(k + 1) @ h.d(k)).is_zero()


def test_tw_morphism_vec_roundtrip(field):
    r = rng(13)
    a2 = a2_category(field)
    t1 = random_twisted_complex(a2, r, depth=2)
    t2 = random_twisted_complex(a2, r, depth=2)
    f = random_closed_tw_morphism(r, t1, t2)
    vec = tw_morphism_to_vec(f)
    g = vec_to_tw_morphism(t1, t2, 0, vec)
    assert tw_morphism_to_vec(g) == vec


def test_sod_backward_vanishing(field):
    # component-pure twisted complexes over a directed category have no
    # backward homs at all, hence acyclic backward hom complexes
    a2 = a2_category(field)
    ty = cone_tw(tw_identity(bare(a2, "1:y")))
    tx = cone_tw(tw_identity(bare(a2, "0:x")))
    h = tw_hom(ty, tx)
    assert h.total_dim() == 0 and h.is_acyclic()


def test_iterated_cone_satisfies_mc(field):
    r = rng(21)
    alg = random_filtered_algebra(field, rng(55))
    cat = proj_dgcat(alg)
    for _ in range(3):
        t = random_twisted_complex(cat, r, depth=3)
        assert t.maurer_cartan_defect() is None
