"""Finite presentations of dg categories, dg functors and dg bimodules.

Hom complexes carry chosen bases; composition is stored as structure
constants per basis-degree pair, so every axiom (Leibniz, associativity,
unitality) is a finite exact linear identity.  A bilinear composition
hom(b,c)^i (x) hom(a,b)^j -> hom(a,c)^{i+j} is flattened with column index
g_idx * dim hom(a,b)^j + f_idx.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .complexes import Complex, GradedMap, cohomology_basis, zero_complex
from .linalg import Matrix


class DgError(ValueError):
    pass


@dataclass(frozen=True)
class HomElt:
    """A homogeneous morphism: coordinates in hom(src, tgt) at one degree."""

    src: str
    tgt: str
    degree: int
    vec: tuple

    def is_zero(self, field) -> bool:
        return all(field.is_zero(x) for x in self.vec)


class DgCategory:
    """A dg category on finitely many objects with based hom complexes.

    `comp` may be a dict {(a, b, c): {(i, j): Matrix}} or a callable
    (a, b, c, i, j) -> Matrix; results are cached either way.
    """

    def __init__(self, field, objects, hom: dict, comp, ids: dict):
        self.field = field
        self.objects = tuple(objects)
        self._hom = dict(hom)
        for pair in self._hom:
            if pair[0] not in self.objects or pair[1] not in self.objects:
                raise DgError(f"hom pair {pair} references unknown object")
        self._comp = comp
        self._comp_cache = {}
        self.ids = dict(ids)
        for a in self.objects:
            if a not in self.ids:
                raise DgError(f"missing identity for object {a!r}")

    def hom(self, a, b) -> Complex:
        c = self._hom.get((a, b))
        if c is None:
            return zero_complex(self.field)
        return c

    def comp_matrix(self, a, b, c, i, j) -> Matrix:
        """Matrix of hom(b,c)^i (x) hom(a,b)^j -> hom(a,c)^{i+j}."""
        key = (a, b, c, i, j)
        cached = self._comp_cache.get(key)
        if cached is not None:
            return cached
        rows = self.hom(a, c).dim(i + j)
        cols = self.hom(b, c).dim(i) * self.hom(a, b).dim(j)
        if rows == 0 or cols == 0:
            m = Matrix.zeros(self.field, rows, cols)
        elif callable(self._comp):
            m = self._comp(a, b, c, i, j)
        else:
            m = self._comp.get((a, b, c), {}).get((i, j))
            if m is None:
                m = Matrix.zeros(self.field, rows, cols)
        if m.shape != (rows, cols):
            raise DgError(f"composition table {key} has shape {m.shape}, "
                          f"expected ({rows},{cols})")
        self._comp_cache[key] = m
        return m

    def id_elt(self, a) -> HomElt:
        return HomElt(a, a, 0, tuple(self.ids[a]))

    def basis_elt(self, a, b, degree, idx) -> HomElt:
        n = self.hom(a, b).dim(degree)
        vec = [self.field.zero] * n
        vec[idx] = self.field.one
        return HomElt(a, b, degree, tuple(vec))

    def compose(self, g: HomElt, f: HomElt) -> HomElt:
        """g after f."""
        if f.tgt != g.src:
            raise DgError(f"cannot compose {g.src}<-... with ...->{f.tgt}")
        m = self.comp_matrix(f.src, f.tgt, g.tgt, g.degree, f.degree)
        field = self.field
        nj = len(f.vec)
        flat = [field.zero] * (len(g.vec) * nj)
        for gi, gv in enumerate(g.vec):
            if field.is_zero(gv):
                continue
            for fi, fv in enumerate(f.vec):
                if not field.is_zero(fv):
                    flat[gi * nj + fi] = field.mul(gv, fv)
        return HomElt(f.src, g.tgt, g.degree + f.degree, m.apply(flat))

    def d_elt(self, f: HomElt) -> HomElt:
        m = self.hom(f.src, f.tgt).d(f.degree)
        return HomElt(f.src, f.tgt, f.degree + 1, m.apply(f.vec))

    def left_mult(self, g: HomElt, a) -> GradedMap:
        """Post-composition with g in hom(b, c): hom(a, b) -> hom(a, c)."""
        source = self.hom(a, g.src)
        target = self.hom(a, g.tgt)
        field = self.field
        comps = {}
        for j in source.degrees():
            m = self.comp_matrix(a, g.src, g.tgt, g.degree, j)
            nj = source.dim(j)
            out = Matrix.zeros(field, target.dim(j + g.degree), nj)
            for (r, col), v in m.items():
                gi, fi = divmod(col, nj)
                if not field.is_zero(g.vec[gi]):
                    out.add_at(r, fi, field.mul(v, g.vec[gi]))
            comps[j] = out
        return GradedMap(source, target, g.degree, comps)

    def right_mult(self, f: HomElt, c) -> GradedMap:
        """Pre-composition with f in hom(a, b): hom(b, c) -> hom(a, c)."""
        source = self.hom(f.tgt, c)
        target = self.hom(f.src, c)
        field = self.field
        comps = {}
        for i in source.degrees():
            m = self.comp_matrix(f.src, f.tgt, c, i, f.degree)
            nj = len(f.vec)
            out = Matrix.zeros(field, target.dim(i + f.degree), source.dim(i))
            for (r, col), v in m.items():
                gi, fi = divmod(col, nj)
                if not field.is_zero(f.vec[fi]):
                    out.add_at(r, gi, field.mul(v, f.vec[fi]))
            comps[i] = out
        return GradedMap(source, target, f.degree, comps)

    def hom_basis(self, a, b):
        """All basis elements of hom(a, b), ordered by (degree, index)."""
        h = self.hom(a, b)
        return [self.basis_elt(a, b, k, i)
                for k in h.degrees() for i in range(h.dim(k))]


def elt_add(field, x: HomElt, y: HomElt) -> HomElt:
    if (x.src, x.tgt, x.degree) != (y.src, y.tgt, y.degree):
        raise DgError("cannot add inhomogeneous elements")
    return HomElt(x.src, x.tgt, x.degree,
                  tuple(field.add(u, v) for u, v in zip(x.vec, y.vec)))


def elt_scale(field, c, x: HomElt) -> HomElt:
    return HomElt(x.src, x.tgt, x.degree, tuple(field.mul(c, v) for v in x.vec))


# -- validation -----------------------------------------------------------


def validate_category(cat: DgCategory, max_report: int = 20) -> list:
    """Check all dg category axioms on bases; returns a list of violations."""
    bad = []
    field = cat.field

    def report(msg):
        if len(bad) < max_report:
            bad.append(msg)

    for a in cat.objects:
        ida = cat.id_elt(a)
        if len(ida.vec) != cat.hom(a, a).dim(0):
            report(f"identity of {a!r} has wrong length")
            continue
        if not cat.d_elt(ida).is_zero(field):
            report(f"identity of {a!r} is not closed")
    # units act as identities
    for a in cat.objects:
        for b in cat.objects:
            idb, ida = cat.id_elt(b), cat.id_elt(a)
            for f in cat.hom_basis(a, b):
                if cat.compose(idb, f).vec != f.vec:
                    report(f"left unit fails on hom({a!r},{b!r}) deg {f.degree}")
                    break
                if cat.compose(f, ida).vec != f.vec:
                    report(f"right unit fails on hom({a!r},{b!r}) deg {f.degree}")
                    break
    # Leibniz: d(g f) = dg f + (-1)^|g| g df
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                for g in cat.hom_basis(b, c):
                    sgn = field.one if g.degree % 2 == 0 else field.neg(field.one)
                    for f in cat.hom_basis(a, b):
                        lhs = cat.d_elt(cat.compose(g, f))
                        rhs = elt_add(field, cat.compose(cat.d_elt(g), f),
                                      elt_scale(field, sgn, cat.compose(g, cat.d_elt(f))))
                        if lhs.vec != rhs.vec:
                            report(f"Leibniz fails at ({a!r},{b!r},{c!r}) on "
                                   f"degrees ({g.degree},{f.degree})")
                            break
    # associativity
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                for e in cat.objects:
                    for h in cat.hom_basis(c, e):
                        for g in cat.hom_basis(b, c):
                            hg = cat.compose(h, g)
                            for f in cat.hom_basis(a, b):
                                if cat.compose(hg, f).vec != \
                                        cat.compose(h, cat.compose(g, f)).vec:
                                    report(f"associativity fails at "
                                           f"({a!r},{b!r},{c!r},{e!r})")
                                    break
    return bad


def cats_equal(c1: DgCategory, c2: DgCategory, check_comp: bool = True) -> bool:
    """Structural equality: objects, hom complexes, identities, composition."""
    if c1 is c2:
        return True
    if c1.objects != c2.objects or c1.field != c2.field:
        return False
    for a in c1.objects:
        for b in c1.objects:
            if c1.hom(a, b) != c2.hom(a, b):
                return False
    for a in c1.objects:
        if tuple(c1.ids[a]) != tuple(c2.ids[a]):
            return False
    if check_comp:
        for a in c1.objects:
            for b in c1.objects:
                for c in c1.objects:
                    for i in c1.hom(b, c).degrees():
                        for j in c1.hom(a, b).degrees():
                            if c1.comp_matrix(a, b, c, i, j) != \
                                    c2.comp_matrix(a, b, c, i, j):
                                return False
    return True


# -- dg functors ----------------------------------------------------------


class DgFunctor:
    def __init__(self, source: DgCategory, target: DgCategory,
                 obj_map: dict, hom_maps: dict):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.hom_maps = hom_maps  # (a, b) -> {degree: Matrix}

    def apply_obj(self, a):
        return self.obj_map[a]

    def hom_matrix(self, a, b, degree) -> Matrix:
        tgt_hom = self.target.hom(self.obj_map[a], self.obj_map[b])
        m = self.hom_maps.get((a, b), {}).get(degree)
        if m is None:
            return Matrix.zeros(self.source.field,
                                tgt_hom.dim(degree), self.source.hom(a, b).dim(degree))
        return m

    def hom_graded_map(self, a, b) -> GradedMap:
        src = self.source.hom(a, b)
        tgt = self.target.hom(self.obj_map[a], self.obj_map[b])
        return GradedMap(src, tgt, 0,
                         {k: self.hom_matrix(a, b, k) for k in src.degrees()})

    def apply(self, f: HomElt) -> HomElt:
        m = self.hom_matrix(f.src, f.tgt, f.degree)
        return HomElt(self.obj_map[f.src], self.obj_map[f.tgt], f.degree,
                      m.apply(f.vec))


def identity_functor(cat: DgCategory) -> DgFunctor:
    maps = {}
    for a in cat.objects:
        for b in cat.objects:
            h = cat.hom(a, b)
            maps[(a, b)] = {k: Matrix.identity(cat.field, h.dim(k))
                            for k in h.degrees()}
    return DgFunctor(cat, cat, {a: a for a in cat.objects}, maps)


def compose_functors(g: DgFunctor, f: DgFunctor) -> DgFunctor:
    """g after f."""
    obj_map = {a: g.obj_map[f.obj_map[a]] for a in f.source.objects}
    maps = {}
    for a in f.source.objects:
        for b in f.source.objects:
            h = f.source.hom(a, b)
            maps[(a, b)] = {
                k: g.hom_matrix(f.obj_map[a], f.obj_map[b], k) @ f.hom_matrix(a, b, k)
                for k in h.degrees()}
    return DgFunctor(f.source, g.target, obj_map, maps)


def functors_equal(f: DgFunctor, g: DgFunctor) -> bool:
    if f.obj_map != g.obj_map:
        return False
    for a in f.source.objects:
        for b in f.source.objects:
            for k in f.source.hom(a, b).degrees():
                if f.hom_matrix(a, b, k) != g.hom_matrix(a, b, k):
                    return False
    return True


def validate_functor(F: DgFunctor, max_report: int = 20) -> list:
    bad = []
    src, tgt = F.source, F.target
    field = src.field

    def report(msg):
        if len(bad) < max_report:
            bad.append(msg)

    for a in src.objects:
        if a not in F.obj_map or F.obj_map[a] not in tgt.objects:
            report(f"object map misses {a!r}")
            return bad
    for a in src.objects:
        if F.apply(src.id_elt(a)).vec != tgt.id_elt(F.obj_map[a]).vec:
            report(f"functor does not preserve identity of {a!r}")
    for a in src.objects:
        for b in src.objects:
            if not F.hom_graded_map(a, b).is_closed():
                report(f"hom map ({a!r},{b!r}) does not commute with d")
    for a in src.objects:
        for b in src.objects:
            for c in src.objects:
                for g in src.hom_basis(b, c):
                    Fg = F.apply(g)
                    for f in src.hom_basis(a, b):
                        if F.apply(src.compose(g, f)).vec != \
                                tgt.compose(Fg, F.apply(f)).vec:
                            report(f"functor breaks composition at ({a!r},{b!r},{c!r})")
                            break
    return bad


def is_hom_isomorphism(F: DgFunctor) -> bool:
    """Degreewise bijectivity of every hom map."""
    for a in F.source.objects:
        for b in F.source.objects:
            if not F.hom_graded_map(a, b).is_iso():
                return False
    return True


# -- bimodules ------------------------------------------------------------


class Bimodule:
    """A dg bimodule: values(b, a) contravariant in b, covariant in a.

    `cat_a` acts by post-composition shapes (left action), `cat_b` by
    pre-composition shapes (right action).  Action tables follow the same
    flattening convention as composition.
    """

    def __init__(self, cat_b: DgCategory, cat_a: DgCategory, values: dict,
                 left_act: Callable, right_act: Callable):
        self.cat_b = cat_b
        self.cat_a = cat_a
        self._values = values
        self.left_act = left_act    # (b, a1, a2, i, j) -> Matrix
        self.right_act = right_act  # (b2, b1, a, i, j) -> Matrix

    def values(self, b, a) -> Complex:
        v = self._values.get((b, a))
        if v is None:
            return zero_complex(self.cat_a.field)
        return v

    def act_left(self, u: HomElt, b, m_deg: int) -> Matrix:
        """Matrix of values(b, u.src)^{m_deg} -> values(b, u.tgt)^{m_deg+|u|}."""
        field = self.cat_a.field
        mat = self.left_act(b, u.src, u.tgt, u.degree, m_deg)
        nj = self.values(b, u.src).dim(m_deg)
        out = Matrix.zeros(field, self.values(b, u.tgt).dim(m_deg + u.degree), nj)
        for (r, col), v in mat.items():
            ui, mi = divmod(col, nj)
            if not field.is_zero(u.vec[ui]):
                out.add_at(r, mi, field.mul(v, u.vec[ui]))
        return out

    def act_right(self, v: HomElt, a, m_deg: int) -> Matrix:
        """Matrix of values(v.tgt, a)^{m_deg} -> values(v.src, a)^{m_deg+|v|}."""
        field = self.cat_a.field
        mat = self.right_act(v.src, v.tgt, a, m_deg, v.degree)
        nj = len(v.vec)
        out = Matrix.zeros(field, self.values(v.src, a).dim(m_deg + v.degree),
                           self.values(v.tgt, a).dim(m_deg))
        for (r, col), w in mat.items():
            mi, vi = divmod(col, nj)
            if not field.is_zero(v.vec[vi]):
                out.add_at(r, mi, field.mul(w, v.vec[vi]))
        return out


def restricted_diagonal(cat: DgCategory, f: DgFunctor, g: DgFunctor) -> Bimodule:
    """The bimodule (b', a') -> hom_cat(g b', f a') along functors into `cat`."""
    if f.target is not cat or g.target is not cat:
        raise DgError("restriction functors must land in the given category")
    values = {}
    for b in g.source.objects:
        for a in f.source.objects:
            values[(b, a)] = cat.hom(g.obj_map[b], f.obj_map[a])

    def left_act(b, a1, a2, i, j):
        # u in hom_{f.source}(a1, a2)^i acts by post-composition with f(u)
        field = cat.field
        gb = g.obj_map[b]
        src_dim = f.source.hom(a1, a2).dim(i)
        m_dim = cat.hom(gb, f.obj_map[a1]).dim(j)
        out = Matrix.zeros(field, cat.hom(gb, f.obj_map[a2]).dim(i + j),
                           src_dim * m_dim)
        for us in range(src_dim):
            fu = f.apply(f.source.basis_elt(a1, a2, i, us))
            m = cat.left_mult(fu, gb).comp(j)
            for (r, mi), w in m.items():
                out.add_at(r, us * m_dim + mi, w)
        return out

    def right_act(b2, b1, a, i, j):
        field = cat.field
        fa = f.obj_map[a]
        v_dim = g.source.hom(b2, b1).dim(j)
        m_dim = cat.hom(g.obj_map[b1], fa).dim(i)
        out = Matrix.zeros(field, cat.hom(g.obj_map[b2], fa).dim(i + j),
                           m_dim * v_dim)
        for vs in range(v_dim):
            gv = g.apply(g.source.basis_elt(b2, b1, j, vs))
            m = cat.right_mult(gv, fa).comp(i)
            for (r, mi), w in m.items():
                out.add_at(r, mi * v_dim + vs, w)
        return out

    return Bimodule(g.source, f.source, values, left_act, right_act)


def bimodules_equal(m1: Bimodule, m2: Bimodule) -> bool:
    """Structural equality of values and action tables on bases."""
    if m1.cat_a.objects != m2.cat_a.objects or m1.cat_b.objects != m2.cat_b.objects:
        return False
    for b in m1.cat_b.objects:
        for a in m1.cat_a.objects:
            if m1.values(b, a) != m2.values(b, a):
                return False
    for b in m1.cat_b.objects:
        for a1 in m1.cat_a.objects:
            for a2 in m1.cat_a.objects:
                for u in m1.cat_a.hom_basis(a1, a2):
                    for j in m1.values(b, a1).degrees():
                        if m1.act_left(u, b, j) != m2.act_left(u, b, j):
                            return False
    for a in m1.cat_a.objects:
        for b1 in m1.cat_b.objects:
            for b2 in m1.cat_b.objects:
                for v in m1.cat_b.hom_basis(b2, b1):
                    for i in m1.values(b1, a).degrees():
                        if m1.act_right(v, a, i) != m2.act_right(v, a, i):
                            return False
    return True


# -- directed assembly ----------------------------------------------------


def block_label(i: int, obj) -> str:
    return f"{i}:{obj}"


def directed_assemble(components, bimods=None, mults=None) -> DgCategory:
    """Assemble a directed dg category from components and connecting bimodules.

    `bimods[(i, j)]` for i > j is a Bimodule with cat_b = components[j]
    (source side) and cat_a = components[i]; morphisms run from lower block
    index to higher, hom(block i, block j) = 0 for i > j.  `mults[(i, k, j)]`
    for j < k < i gives values(x,y)^q in phi_kj, values(y,z)^p in phi_ik ->
    values(x,z)^{p+q}, flattened with column index g_idx * dim_q + f_idx.
    """
    bimods = bimods or {}
    mults = mults or {}
    components = list(components)
    field = components[0].field
    objects = []
    where = {}
    for i, comp in enumerate(components):
        for x in comp.objects:
            lbl = block_label(i, x)
            objects.append(lbl)
            where[lbl] = (i, x)

    hom = {}
    for la in objects:
        for lb in objects:
            i, x = where[la]
            j, y = where[lb]
            if i == j:
                hom[(la, lb)] = components[i].hom(x, y)
            elif i < j:
                phi = bimods.get((j, i))
                if phi is not None:
                    hom[(la, lb)] = phi.values(x, y)

    def comp_fn(la, lb, lc, i_deg, j_deg):
        ia, x = where[la]
        ib, y = where[lb]
        ic, z = where[lc]
        rows = hom.get((la, lc), zero_complex(field)).dim(i_deg + j_deg)
        cols = hom.get((lb, lc), zero_complex(field)).dim(i_deg) * \
            hom.get((la, lb), zero_complex(field)).dim(j_deg)
        if rows == 0 or cols == 0:
            return Matrix.zeros(field, rows, cols)
        if ia == ib == ic:
            return components[ia].comp_matrix(x, y, z, i_deg, j_deg)
        if ia == ib < ic:
            # g in phi_{ic,ia}(y, z), f in component ia: right action
            return _right_action_table(bimods[(ic, ia)], x, y, z, i_deg, j_deg)
        if ia < ib == ic:
            phi = bimods[(ic, ia)]
            return _left_action_table(phi, x, y, z, i_deg, j_deg)
        if ia < ib < ic:
            table = mults.get((ic, ib, ia))
            if table is None:
                raise DgError(f"missing multiplication map for blocks "
                              f"({ic},{ib},{ia})")
            m = table(x, y, z, i_deg, j_deg) if callable(table) else \
                table.get(((x, y, z), (i_deg, j_deg)))
            if m is None:
                m = Matrix.zeros(field, rows, cols)
            return m
        return Matrix.zeros(field, rows, cols)

    ids = {}
    for lbl in objects:
        i, x = where[lbl]
        ids[lbl] = components[i].ids[x]
    return DgCategory(field, objects, hom, comp_fn, ids)


def _right_action_table(phi: Bimodule, x, y, z, i_deg, j_deg) -> Matrix:
    """phi.values(y,z)^i (x) hom_B(x,y)^j -> phi.values(x,z)^{i+j} as a table."""
    field = phi.cat_a.field
    src_g = phi.values(y, z).dim(i_deg)
    src_f = phi.cat_b.hom(x, y).dim(j_deg)
    out = Matrix.zeros(field, phi.values(x, z).dim(i_deg + j_deg), src_g * src_f)
    for fi in range(src_f):
        v = phi.cat_b.basis_elt(x, y, j_deg, fi)
        m = phi.act_right(v, z, i_deg)
        for (r, gi), w in m.items():
            out.add_at(r, gi * src_f + fi, w)
    return out


def _left_action_table(phi: Bimodule, x, y, z, i_deg, j_deg) -> Matrix:
    """hom_A(y,z)^i (x) phi.values(x,y)^j -> phi.values(x,z)^{i+j} as a table."""
    field = phi.cat_a.field
    src_g = phi.cat_a.hom(y, z).dim(i_deg)
    src_f = phi.values(x, y).dim(j_deg)
    out = Matrix.zeros(field, phi.values(x, z).dim(i_deg + j_deg), src_g * src_f)
    for gi in range(src_g):
        u = phi.cat_a.basis_elt(y, z, i_deg, gi)
        m = phi.act_left(u, x, j_deg)
        for (r, fi), w in m.items():
            out.add_at(r, gi * src_f + fi, w)
    return out


def check_directed(cat: DgCategory, partition) -> bool:
    """True iff hom(x, y) is acyclic for x in a later block, y in an earlier one."""
    seen = [x for block in partition for x in block]
    if sorted(seen) != sorted(cat.objects):
        raise DgError("partition does not cover the objects exactly")
    for pi, later in enumerate(partition):
        for qi in range(pi):
            for x in later:
                for y in partition[qi]:
                    if not cat.hom(x, y).is_acyclic():
                        return False
    return True


def ext_table(cat: DgCategory) -> dict:
    """Cohomology dimension table of every hom complex."""
    return {(a, b): cat.hom(a, b).cohomology()
            for a in cat.objects for b in cat.objects}


@dataclass
class H0Category:
    """An ordinary category presented by H^0 hom bases and composition tables."""

    objects: tuple
    hom_dims: dict       # (a, b) -> dim H^0
    comp: dict           # (a, b, c) -> Matrix, columns flattened g*dim+f
    ids: dict            # a -> coordinate tuple in H^0(hom(a, a))


def h0_category(cat: DgCategory) -> H0Category:
    field = cat.field
    reps = {}
    projs = {}
    cycles = {}
    for a in cat.objects:
        for b in cat.objects:
            r, p, z = cohomology_basis(cat.hom(a, b), 0)
            reps[(a, b)] = r
            projs[(a, b)] = p
            cycles[(a, b)] = z
    hom_dims = {pair: reps[pair].ncols for pair in reps}

    def to_h0(pair, vec):
        coords = cycles[pair].solve(Matrix.column(field, vec))
        if coords is None:
            raise DgError("element is not a cocycle")
        return tuple(x for row in (projs[pair] @ coords).to_lists() for x in row)

    comp = {}
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                nbc, nab = hom_dims[(b, c)], hom_dims[(a, b)]
                nac = hom_dims[(a, c)]
                m = Matrix.zeros(field, nac, nbc * nab)
                for gi in range(nbc):
                    g = HomElt(b, c, 0, tuple(x for row in
                                              (reps[(b, c)].submatrix((0, reps[(b, c)].nrows),
                                                                      (gi, gi + 1))).to_lists()
                                              for x in row))
                    for fi in range(nab):
                        f = HomElt(a, b, 0, tuple(x for row in
                                                  (reps[(a, b)].submatrix((0, reps[(a, b)].nrows),
                                                                          (fi, fi + 1))).to_lists()
                                                  for x in row))
                        gf = cat.compose(g, f)
                        for r, v in enumerate(to_h0((a, c), gf.vec)):
                            if not field.is_zero(v):
                                m.add_at(r, gi * nab + fi, v)
                comp[(a, b, c)] = m
    ids = {a: to_h0((a, a), cat.id_elt(a).vec) for a in cat.objects}
    return H0Category(cat.objects, hom_dims, comp, ids)


# -- small constructors ----------------------------------------------------


def field_category(field, obj="*") -> DgCategory:
    """The ground field as a one-object dg category in degree zero."""
    hom = {(obj, obj): Complex(field, {0: 1}, {})}

    def comp_fn(a, b, c, i, j):
        return Matrix.identity(field, 1)

    return DgCategory(field, [obj], hom, comp_fn, {obj: (field.one,)})


def algebra_category(field, dim: int, mult: Callable, unit, obj="*",
                     name_prefix=None) -> DgCategory:
    """A finite-dimensional algebra as a one-object dg category in degree 0.

    `mult(i, j)` returns the coordinate tuple of e_i * e_j.
    """
    hom = {(obj, obj): Complex(field, {0: dim}, {})}
    table = Matrix.zeros(field, dim, dim * dim)
    for i in range(dim):
        for j in range(dim):
            for r, v in enumerate(mult(i, j)):
                if not field.is_zero(v):
                    table.set(r, i * dim + j, v)
    comp = {(obj, obj, obj): {(0, 0): table}}
    return DgCategory(field, [obj], hom, comp, {obj: tuple(unit)})
