"""The generalized arrow category of a punctured cube, the glued category,
the canonical comparison functor pi, and the quasi-fully-faithful test.

Hom complexes between component objects are totalizations over the interval
shapes J_ij = {I : {i,j} <= I <= {i..j}}; composition pushes both factors into
the join vertex and carries the Koszul sign (-1)^{|g| |word(f)|}.  X-words
concatenate without signs because of the descending-index order, see
`hypercube`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .complexes import GradedMap, induced_cohomology_map
from .dgcat import DgCategory, HomElt
from .hypercube import (DgCube, bimodule_cube, interval_shape,
                        punctured_shape, t_layout, totalize)
from .linalg import Matrix
from .twisted import TwistedComplex, TwMorphism, tw_hom, _hom_layout, \
    tw_morphism_to_vec, tw_category


class GlueError(ValueError):
    pass


def _label(i: int, obj) -> str:
    return f"{i}:{obj}"


@dataclass
class GacCategory:
    """The generalized arrow dg category plus summand provenance."""

    cube: DgCube
    category: DgCategory
    pair_cubes: dict = dc_field(default_factory=dict)

    def layout(self, la: str, lb: str, m: int):
        """Summand blocks (I, base_degree, dim, offset) of hom(la, lb)^m."""
        cube = self.pair_cubes.get((la, lb))
        if cube is None:
            return []
        out = []
        off = 0
        for I, a_deg, d in t_layout(cube, m):
            out.append((I, a_deg, d, off))
            off += d
        return out

    def component_of(self, label: str) -> int:
        return int(label.split(":", 1)[0])

    def embed(self, la: str, lb: str, I, elt_deg: int, vec) -> HomElt:
        """Place an A_I-element into the summand I of hom(la, lb)."""
        I = frozenset(I)
        field = self.category.field
        m = elt_deg - len(self._word(la, lb, I))
        total = self.category.hom(la, lb).dim(m)
        out = [field.zero] * total
        for J, a_deg, d, off in self.layout(la, lb, m):
            if J == I and a_deg == elt_deg:
                for r, v in enumerate(vec):
                    out[off + r] = v
                return HomElt(la, lb, m, tuple(out))
        # zero summands are dropped from the layout; only zero data may land
        if all(field.is_zero(v) for v in vec):
            return HomElt(la, lb, m, tuple(out))
        raise GlueError(f"no summand {sorted(I)} in hom({la},{lb})^{m}")

    def _word(self, la, lb, I):
        i = self.component_of(la)
        j = self.component_of(lb)
        return frozenset(range(i, j + 1)) - I


def gac(cube: DgCube) -> GacCategory:
    """Build the generalized arrow dg category of the punctured cube."""
    n = cube.n
    field = cube.field
    comp_objs = {i: cube.vertices[frozenset({i})].objects for i in range(n)}
    labels = [( i, x) for i in range(n) for x in comp_objs[i]]
    objects = [_label(i, x) for i, x in labels]

    pair_cubes = {}
    hom = {}
    for i, x in labels:
        for j, y in labels:
            if i > j:
                continue
            la, lb = _label(i, x), _label(j, y)
            shape = interval_shape({i, j}, set(range(i, j + 1)))
            pc = bimodule_cube(cube, x, y, shape=shape,
                               a_vertex={i}, b_vertex={j},
                               top=set(range(i, j + 1)))
            pair_cubes[(la, lb)] = pc
            hom[(la, lb)] = totalize(pc)

    out = GacCategory(cube, None, pair_cubes)

    push_cache = {}

    def push(start: frozenset, I: frozenset):
        key = (start, I)
        f = push_cache.get(key)
        if f is None:
            f = cube.push_functor(start, I)
            push_cache[key] = f
        return f

    def comp_fn(la, lb, lc, deg_i, deg_j):
        i = out.component_of(la)
        j = out.component_of(lb)
        k = out.component_of(lc)
        rows = hom.get((la, lc), None)
        rows = rows.dim(deg_i + deg_j) if rows is not None else 0
        nbc = hom.get((lb, lc))
        nbc = nbc.dim(deg_i) if nbc is not None else 0
        nab = hom.get((la, lb))
        nab = nab.dim(deg_j) if nab is not None else 0
        mat = Matrix.zeros(field, rows, nbc * nab)
        if rows == 0 or nbc == 0 or nab == 0:
            return mat
        g_layout = out.layout(lb, lc, deg_i)
        f_layout = out.layout(la, lb, deg_j)
        tgt_layout = out.layout(la, lc, deg_i + deg_j)
        tgt_off = {(I, a): off for I, a, d, off in tgt_layout}
        for Ig, ag, dg, offg in g_layout:
            for If, af, df, offf in f_layout:
                J = Ig | If
                key = (J, ag + af)
                if key not in tgt_off:
                    continue
                # Koszul sign: g passes the X-word of f
                word_f = frozenset(range(i, j + 1)) - If
                sgn_exp = ag * len(word_f)
                sgn = field.one if sgn_exp % 2 == 0 else field.neg(field.one)
                push_g = push(Ig, J)
                push_f = push(If, J)
                amb = cube.vertices[J]
                base = tgt_off[key]
                xg, yg = _pair_objs(cube, lb, lc, Ig)
                xf, yf = _pair_objs(cube, la, lb, If)
                for gi in range(dg):
                    vecg = [field.zero] * dg
                    vecg[gi] = field.one
                    ge = HomElt(xg, yg, ag, tuple(vecg))
                    ge_p = push_g.apply(ge) if J != Ig else ge
                    for fi in range(df):
                        vecf = [field.zero] * df
                        vecf[fi] = field.one
                        fe = HomElt(xf, yf, af, tuple(vecf))
                        fe_p = push_f.apply(fe) if J != If else fe
                        prod = amb.compose(ge_p, fe_p)
                        col = (offg + gi) * nab + (offf + fi)
                        for r, v in enumerate(prod.vec):
                            if not field.is_zero(v):
                                mat.add_at(base + r, col, field.mul(sgn, v))
        return mat

    ids = {}
    for i, x in labels:
        comp_cat = cube.vertices[frozenset({i})]
        ids[_label(i, x)] = tuple(comp_cat.ids[x])
    category = DgCategory(field, objects, hom, comp_fn, ids)
    out.category = category
    return out


def _pair_objs(cube: DgCube, la: str, lb: str, I):
    """Objects (V a, V b) of the vertex A_I underlying a hom summand."""
    i = int(la.split(":", 1)[0])
    j = int(lb.split(":", 1)[0])
    x = la.split(":", 1)[1]
    y = lb.split(":", 1)[1]
    return (cube.push_object({i}, x, I), cube.push_object({j}, y, I))


def glue(g: GacCategory, objs: dict) -> DgCategory:
    """tw-category of the generalized arrow category on the named objects."""
    return tw_category(g.category, objs)


def pi_object(g: GacCategory, a) -> TwistedComplex:
    """pi(a): terms V_{n-1-p} a [p], alpha entries (-1)^q identities."""
    cube = g.cube
    n = cube.n
    field = cube.field
    terms = []
    for p in range(n):
        comp = n - 1 - p
        obj = cube.push_object(frozenset(), a, {comp})
        terms.append((_label(comp, obj), p))
    delta = {}
    for p in range(n):
        for q in range(p):
            comp_p, comp_q = n - 1 - p, n - 1 - q
            I = frozenset({comp_p, comp_q})
            amb_obj = cube.push_object(frozenset(), a, I)
            id_vec = cube.vertices[I].ids[amb_obj]
            sgn = field.one if q % 2 == 0 else field.neg(field.one)
            vec = tuple(field.mul(sgn, v) for v in id_vec)
            elt = g.embed(terms[p][0], terms[q][0], I, 0, vec)
            delta[(q, p)] = elt
    return TwistedComplex(g.category, terms, delta)


def pi_morphism(g: GacCategory, f: HomElt, pia: TwistedComplex,
                pib: TwistedComplex) -> TwMorphism:
    """pi(f): the diagonal matrix with entries (-1)^{(n-1-i)|f|} V_i f."""
    cube = g.cube
    n = cube.n
    field = cube.field
    entries = {}
    for p in range(n):
        comp = n - 1 - p
        push = cube.push_functor(frozenset(), frozenset({comp}))
        vf = push.apply(f)
        sgn = field.one if (p * f.degree) % 2 == 0 else field.neg(field.one)
        elt = g.embed(pia.terms[p][0], pib.terms[p][0], frozenset({comp}),
                      f.degree, tuple(field.mul(sgn, v) for v in vf.vec))
        entries[(p, p)] = elt
    return TwMorphism(pia, pib, f.degree, entries)


def pi_comparison_map(g: GacCategory, a, b) -> GradedMap:
    """The chain map A_empty(a, b) -> Hom_Glue(pi a, pi b) induced by pi."""
    cube = g.cube
    init = cube.initial()
    src = init.hom(a, b)
    pia, pib = pi_object(g, a), pi_object(g, b)
    tgt = tw_hom(pia, pib)
    field = cube.field
    comps = {}
    for m in src.degrees():
        mat = Matrix.zeros(field, tgt.dim(m), src.dim(m))
        for idx in range(src.dim(m)):
            f = init.basis_elt(a, b, m, idx)
            vec = tw_morphism_to_vec(pi_morphism(g, f, pia, pib))
            for r, v in enumerate(vec):
                if not field.is_zero(v):
                    mat.set(r, idx, v)
        comps[m] = mat
    return GradedMap(src, tgt, 0, comps)


def check_qff(cube: DgCube):
    """Decide quasi-full-faithfulness of pi; returns (verdict, report).

    For every object pair of the initial vertex the report records the
    cohomology tables of both sides and whether the induced map is an
    isomorphism in every degree.
    """
    g = gac(cube)
    init = cube.initial()
    report = {}
    ok = True
    for a in init.objects:
        for b in init.objects:
            cm = pi_comparison_map(g, a, b)
            if not cm.is_closed():
                raise GlueError("internal: pi comparison map is not closed")
            lo = min(cm.source.lo, cm.target.lo) - 1
            hi = max(cm.source.hi, cm.target.hi) + 1
            iso = True
            for k in range(lo, hi + 1):
                m = induced_cohomology_map(cm, k)
                if m.nrows != m.ncols or m.rank() != m.nrows:
                    iso = False
                    break
            report[(a, b)] = {
                "source": cm.source.cohomology(),
                "glue": cm.target.cohomology(),
                "isomorphism": iso,
            }
            ok = ok and iso
    return ok, report


def hom_iso_check(cube: DgCube, a, b, g: GacCategory = None) -> bool:
    """Build the explicit comparison t(punctured)(a,b)[1] -> Hom(pi a, pi b)[n]
    and verify it is a chain isomorphism fitting over the boundary map."""
    if g is None:
        g = gac(cube)
    n = cube.n
    field = cube.field
    init = cube.initial()
    punct = bimodule_cube(cube, a, b, shape=punctured_shape(cube.top))
    T = totalize(punct)
    pia, pib = pi_object(g, a), pi_object(g, b)
    H = tw_hom(pia, pib)
    T1 = T.shift(1)
    Hn = H.shift(n)

    def tw_block_offsets(m):
        out = {}
        off = 0
        for (q, p), a_deg, d in _hom_layout(pia, pib, m):
            out[(q, p, a_deg)] = off
            off += d
        return out

    comps = {}
    for k in T1.degrees():
        mat = Matrix.zeros(field, Hn.dim(k), T1.dim(k))
        tw_off = tw_block_offsets(k + n)
        src_off = 0
        for I, a_deg, d in t_layout(punct, k + 1):
            i, j = min(I), max(I)
            p, q = n - 1 - i, n - 1 - j
            gac_deg = (k + n) + q - p
            base = tw_off.get((q, p, gac_deg))
            if base is None:
                raise GlueError("internal: missing tw block in comparison map")
            # offset of summand I inside the Gac hom complex
            inner = None
            for J, a2, d2, off2 in g.layout(pia.terms[p][0], pib.terms[q][0],
                                            gac_deg):
                if J == I and a2 == a_deg:
                    inner = off2
                    break
            if inner is None:
                raise GlueError("internal: missing Gac summand in comparison map")
            exp = (n - i - 1) * a_deg + (n - 1) * len(I) - i
            sgn = field.one if exp % 2 == 0 else field.neg(field.one)
            for r in range(d):
                mat.set(base + inner + r, src_off + r, sgn)
            src_off += d
        comps[k] = mat
    iso = GradedMap(T1, Hn, 0, comps)
    if not (iso.is_closed() and iso.is_iso()):
        return False

    # triangle: the boundary f -> sum_i (-1)^{n-1-i} V_i f followed by the
    # comparison map must agree with pi itself.
    hom_ab = init.hom(a, b)
    for m in hom_ab.degrees():
        for idx in range(hom_ab.dim(m)):
            f = init.basis_elt(a, b, m, idx)
            # delta(f) in T^{m-(n-1)}; block {i} has base degree m
            t_deg = m - (n - 1)
            vec = [field.zero] * T.dim(t_deg)
            off = 0
            for I, a_deg, d, in t_layout(punct, t_deg):
                if len(I) == 1 and a_deg == m:
                    i = min(I)
                    push = cube.push_functor(frozenset(), I)
                    vf = push.apply(f)
                    sgn = field.one if (n - 1 - i) % 2 == 0 else field.neg(field.one)
                    for r, v in enumerate(vf.vec):
                        vec[off + r] = field.mul(sgn, v)
                off += d
            lhs = iso.comp(t_deg - 1).apply(vec)
            rhs = tw_morphism_to_vec(pi_morphism(g, f, pia, pib))
            if tuple(lhs) != tuple(rhs):
                return False
    return True
