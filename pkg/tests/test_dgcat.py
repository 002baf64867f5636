from dgglue.fields import QQ
from dgglue.linalg import Matrix
from dgglue.complexes import Complex
from dgglue.dgcat import (DgCategory, DgFunctor, bimodules_equal,
                          cats_equal, check_directed, compose_functors,
                          directed_assemble, ext_table, field_category,
                          functors_equal, h0_category, identity_functor,
                          is_hom_isomorphism, restricted_diagonal,
                          validate_category, validate_functor)
from dgglue.filtlab import truncated_polynomial_algebra, \
    refinement_functor, refine, generated_ideal

from conftest import a2_category, dual_numbers_category


def test_field_category_valid(field):
    assert validate_category(field_category(field)) == []


def test_mutated_composition_reported():
    k = field_category(QQ)
    bad_table = {("*", "*", "*"): {(0, 0): Matrix.from_rows(QQ, [[2]])}}
    bad = DgCategory(QQ, ["*"], {("*", "*"): k.hom("*", "*")}, bad_table,
                     {"*": (QQ.one,)})
    violations = validate_category(bad)
    assert violations and any("unit" in v for v in violations)


def test_mutated_associativity_reported():
    from dgglue.dgcat import algebra_category
    kx3 = truncated_polynomial_algebra(QQ, 3)
    cat = algebra_category(QQ, 3, kx3.mul_basis, kx3.unit)
    assert validate_category(cat) == []
    m = Matrix.from_rows(QQ, cat.comp_matrix("*", "*", "*", 0, 0).to_lists())
    m.set(0, 1 * 3 + 2, QQ.one)  # x * x^2 := 1, so (x x) x^2 != x (x x^2)
    bad = DgCategory(QQ, ["*"], {("*", "*"): cat.hom("*", "*")},
                     {("*", "*", "*"): {(0, 0): m}}, {"*": cat.ids["*"]})
    violations = validate_category(bad)
    assert any("associativity" in v for v in violations)


def test_a2_path_category(field):
    a2 = a2_category(field)
    assert validate_category(a2) == []
    table = ext_table(a2)
    assert table[("0:x", "1:y")] == {0: 1}
    assert table[("1:y", "0:x")] == {}


def test_directed_assemble_zero_bimodules(field):
    k0 = field_category(field, obj="x")
    k1 = field_category(field, obj="y")
    cat = directed_assemble([k0, k1])
    assert validate_category(cat) == []
    assert cat.hom("0:x", "1:y").dims == {}
    assert cat.hom("1:y", "0:x").dims == {}


def test_directed_assemble_single_component(field):
    dual = dual_numbers_category(field)
    cat = directed_assemble([dual])
    assert validate_category(cat) == []
    assert cat.hom("0:*", "0:*") == dual.hom("*", "*")


def test_check_directed(field):
    a2 = a2_category(field)
    assert check_directed(a2, [["0:x"], ["1:y"]])
    assert not check_directed(a2, [["1:y"], ["0:x"]])
    one = field_category(field)
    assert check_directed(one, [["*"]])


def test_ext_table_field_and_dual():
    assert ext_table(field_category(QQ)) == {("*", "*"): {0: 1}}
    assert ext_table(dual_numbers_category(QQ)) == {("*", "*"): {0: 2}}


def test_h0_category_of_degree_zero_cat():
    a2 = a2_category(QQ)
    h0 = h0_category(a2)
    assert h0.hom_dims[("0:x", "1:y")] == 1
    assert h0.hom_dims[("1:y", "0:x")] == 0
    assert h0.ids["0:x"] == (QQ.one,)


def test_h0_kills_acyclic_hom():
    c = Complex(QQ, {-1: 1, 0: 1}, {-1: Matrix.from_rows(QQ, [[1]])})

    def comp(a, b, cc, i, j):
        rows = c.dim(i + j)
        cols = c.dim(i) * c.dim(j)
        m = Matrix.zeros(QQ, rows, cols)
        # multiplication making degree -1 square to zero and unit in degree 0
        if i == 0 and j == 0 and rows:
            m.set(0, 0, QQ.one)
        elif i + j == -1 and rows:
            m.set(0, 0, QQ.one)
        return m

    cat = DgCategory(QQ, ["*"], {("*", "*"): c}, comp, {"*": (QQ.one,)})
    assert validate_category(cat) == []
    assert h0_category(cat).hom_dims[("*", "*")] == 0


def test_functor_validation_and_composition(field):
    dual = dual_numbers_category(field)
    k = field_category(field)
    unit = DgFunctor(k, dual, {"*": "*"},
                     {("*", "*"): {0: Matrix.from_rows(field, [[1], [0]])}})
    assert validate_functor(unit) == []
    idd = identity_functor(dual)
    assert functors_equal(compose_functors(idd, unit), unit)
    # associativity of functor composition
    f3 = compose_functors(idd, compose_functors(idd, unit))
    f3b = compose_functors(compose_functors(idd, idd), unit)
    assert functors_equal(f3, f3b)


def test_functor_must_preserve_identity():
    dual = dual_numbers_category(QQ)
    k = field_category(QQ)
    bad = DgFunctor(k, dual, {"*": "*"},
                    {("*", "*"): {0: Matrix.from_rows(QQ, [[0], [1]])}})
    assert validate_functor(bad)


def test_restricted_diagonal_identity_is_diagonal(field):
    dual = dual_numbers_category(field)
    idd = identity_functor(dual)
    bim = restricted_diagonal(dual, idd, idd)
    assert bim.values("*", "*") == dual.hom("*", "*")


def test_restricted_diagonal_single_objects():
    a2 = a2_category(QQ)
    kx = field_category(QQ, obj="s")
    fx = DgFunctor(kx, a2, {"s": "1:y"},
                   {("s", "s"): {0: Matrix.identity(QQ, 1)}})
    gx = DgFunctor(kx, a2, {"s": "0:x"},
                   {("s", "s"): {0: Matrix.identity(QQ, 1)}})
    bim = restricted_diagonal(a2, fx, gx)
    assert bim.values("s", "s") == a2.hom("0:x", "1:y")


def test_restricted_diagonal_composition_agrees():
    # restriction along a composite equals restriction computed in two ways
    dual = dual_numbers_category(QQ)
    k = field_category(QQ)
    unit = DgFunctor(k, dual, {"*": "*"},
                     {("*", "*"): {0: Matrix.from_rows(QQ, [[1], [0]])}})
    idd = identity_functor(dual)
    one = compose_functors(idd, unit)
    bim1 = restricted_diagonal(dual, one, one)
    bim2 = restricted_diagonal(dual, unit, unit)
    assert bimodules_equal(bim1, bim2)


def test_ext_table_invariant_under_hom_isomorphism():
    alg = truncated_polynomial_algebra(QQ, 2)
    ideal = generated_ideal(alg, [(QQ.zero, QQ.one)])
    refined = refine(alg, ideal, 2)
    f = refinement_functor(alg, refined, 2)
    assert is_hom_isomorphism(f)
    src_table = ext_table(f.source)
    tgt_table = ext_table(f.target)
    for (a, b), t in src_table.items():
        assert t == tgt_table[(f.obj_map[a], f.obj_map[b])]


def test_cats_equal():
    assert cats_equal(field_category(QQ), field_category(QQ))
    assert not cats_equal(field_category(QQ), dual_numbers_category(QQ))
