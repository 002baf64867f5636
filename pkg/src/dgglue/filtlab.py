"""Finite-length filtered Artinian algebras: truncations, graded modules,
Auslander algebras, truncated tensor products, Veronese/refinement, and the
dg-category squares that feed the gluing engine.

A filtration is a descending chain of ideals F^0 = A >= F^{-1} >= ... >=
F^{-n} = 0 with F^i F^j <= F^{i+j}.  Graded modules over the associated Rees
algebra are stored on the window [-n+1, 0]; degrees >= 0 are canonical copies
of degree 0, so the distinguished degree-one element only ever appears through
the transition maps.  All quotient spaces carry first-pivot complement bases,
making every construction reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Complex
from .dgcat import DgCategory, DgFunctor
from .linalg import Matrix, quotient_maps


class FiltError(ValueError):
    pass


class FilteredAlgebra:
    """A finite-dimensional commutative unital algebra with an ideal filtration.

    `mult` maps a pair of basis indices to the coordinate tuple of the
    product; `filtration[k]` is a matrix whose columns span F^{-k}, for
    k = 0..length (F^0 the whole algebra, F^{-length} = 0).
    """

    def __init__(self, field, dim: int, mult, unit, length: int,
                 filtration, basis_names=None):
        self.field = field
        self.dim = dim
        self.unit = tuple(unit)
        self.length = length
        self.basis_names = tuple(basis_names) if basis_names else \
            tuple(f"e{i}" for i in range(dim))
        if callable(mult):
            self._mult = {(i, j): tuple(mult(i, j))
                          for i in range(dim) for j in range(dim)}
        else:
            self._mult = {k: tuple(v) for k, v in mult.items()}
        self.filtration = [m for m in filtration]
        if len(self.filtration) != length + 1:
            raise FiltError("filtration must list F^0 .. F^{-length}")
        self._quot_cache = {}
        self._membership_cache = {}

    # -- algebra arithmetic -------------------------------------------

    def mul_basis(self, i, j):
        return self._mult[(i, j)]

    def mul_vec(self, u, v):
        field = self.field
        out = [field.zero] * self.dim
        for i, a in enumerate(u):
            if field.is_zero(a):
                continue
            for j, b in enumerate(v):
                if field.is_zero(b):
                    continue
                c = field.mul(a, b)
                for r, w in enumerate(self._mult[(i, j)]):
                    if not field.is_zero(w):
                        out[r] = field.add(out[r], field.mul(c, w))
        return tuple(out)

    def mul_matrix(self, u) -> Matrix:
        """Left multiplication by the ambient vector u."""
        cols = []
        field = self.field
        for j in range(self.dim):
            basis = [field.zero] * self.dim
            basis[j] = field.one
            cols.append(self.mul_vec(u, basis))
        m = Matrix.zeros(field, self.dim, self.dim)
        for j, col in enumerate(cols):
            for i, v in enumerate(col):
                if not field.is_zero(v):
                    m.set(i, j, v)
        return m

    # -- filtration access ---------------------------------------------

    def fil(self, s: int) -> Matrix:
        """Basis matrix of F^s (whole algebra for s >= 0, zero for s <= -n)."""
        if s >= 0:
            return Matrix.identity(self.field, self.dim)
        if s <= -self.length:
            return Matrix.zeros(self.field, self.dim, 0)
        return self.filtration[-s]

    def in_fil(self, s: int, vec) -> bool:
        b = self.fil(s)
        return b.solve(Matrix.column(self.field, vec)) is not None

    def fil_coords(self, s: int, vec):
        """Coordinates of an ambient vector in the F^s basis."""
        sol = self.fil(s).solve(Matrix.column(self.field, vec))
        if sol is None:
            raise FiltError(f"vector is not in F^{s}")
        return tuple(x for row in sol.to_lists() for x in row)

    def quot(self, s: int, t: int) -> "FiltQuot":
        """The quotient F^s / F^t with a deterministic complement basis."""
        key = (max(min(s, 0), -self.length), max(min(t, 0), -self.length))
        q = self._quot_cache.get(key)
        if q is not None:
            return q
        s, t = key
        bs, bt = self.fil(s), self.fil(t)
        inside = bs.solve(bt)
        if inside is None:
            raise FiltError(f"F^{t} is not contained in F^{s}")
        proj, lift = quotient_maps(self.field, bs.ncols, inside)
        q = FiltQuot(self, s, t, bs, proj, lift, proj.nrows)
        self._quot_cache[key] = q
        return q


@dataclass
class FiltQuot:
    """F^s / F^t with projection/lift relative to the F^s basis."""

    alg: FilteredAlgebra
    s: int
    t: int
    basis: Matrix
    proj: Matrix
    lift: Matrix
    dim: int

    def from_ambient(self, vec):
        return self.proj.apply(self.alg.fil_coords(self.s, vec))

    def to_ambient(self, coords):
        return self.basis.apply(self.lift.apply(coords))


def validate_filtration(alg: FilteredAlgebra, max_report: int = 20) -> list:
    """Check all filtered-algebra axioms; returns a list of violations."""
    bad = []
    field = alg.field

    def report(msg):
        if len(bad) < max_report:
            bad.append(msg)

    one = alg.unit
    for i in range(alg.dim):
        e = [field.zero] * alg.dim
        e[i] = field.one
        if alg.mul_vec(one, e) != tuple(e):
            report(f"unit fails on basis {i}")
    for i in range(alg.dim):
        for j in range(alg.dim):
            ei = [field.zero] * alg.dim
            ei[i] = field.one
            ej = [field.zero] * alg.dim
            ej[j] = field.one
            if alg.mul_vec(ei, ej) != alg.mul_vec(ej, ei):
                report(f"commutativity fails at ({i},{j})")
            for k in range(alg.dim):
                ek = [field.zero] * alg.dim
                ek[k] = field.one
                lhs = alg.mul_vec(alg.mul_vec(ei, ej), ek)
                rhs = alg.mul_vec(ei, alg.mul_vec(ej, ek))
                if lhs != rhs:
                    report(f"associativity fails at ({i},{j},{k})")
    if alg.fil(0).ncols != alg.dim or alg.fil(0).rank() != alg.dim:
        report("F^0 is not the whole algebra")
    if alg.fil(-alg.length).ncols != 0:
        report(f"F^{-alg.length} is not zero")
    for k in range(alg.length):
        big, small = alg.fil(-k), alg.fil(-k - 1)
        if big.solve(small) is None:
            report(f"F^{-k - 1} not contained in F^{-k}")
    # each F^{-k} an ideal, and F^i F^j <= F^{i+j}
    for a in range(alg.length + 1):
        for b in range(alg.length + 1):
            fa, fb = alg.fil(-a), alg.fil(-b)
            for ca in fa.columns():
                for cb in fb.columns():
                    prod = alg.mul_vec(ca, cb)
                    if not alg.in_fil(-a - b, prod):
                        report(f"F^{-a} * F^{-b} escapes F^{-a - b}")
    return bad


# -- graded modules ---------------------------------------------------------


class GradedModule:
    """A length-L graded module over the Rees algebra of a filtered algebra.

    dims[k] is the dimension of the component in degree -k (k = 0..L-1);
    tau[k]: degree -k -> degree -k+1 for k = 1..L-1; act[(j, k)] is the list,
    over the F^{-j} basis, of action matrices degree -k -> degree -k-j.
    """

    def __init__(self, alg: FilteredAlgebra, length: int, dims, tau: dict,
                 act: dict):
        self.alg = alg
        self.length = length
        self.dims = list(dims)
        if len(self.dims) != length:
            raise FiltError("need one component dimension per window degree")
        self.tau = dict(tau)
        self.act = dict(act)

    def dim_at(self, d: int) -> int:
        """Dimension of the degree-d component (canonical copies above 0)."""
        if d > 0:
            d = 0
        k = -d
        if k >= self.length:
            return 0
        return self.dims[k]

    def tau_at(self, d: int) -> Matrix:
        """Transition map from degree d to degree d+1."""
        if d >= 0:
            return Matrix.identity(self.alg.field, self.dim_at(0))
        k = -d
        if k >= self.length:
            return Matrix.zeros(self.alg.field, self.dim_at(d + 1), 0)
        m = self.tau.get(k)
        if m is None:
            return Matrix.zeros(self.alg.field, self.dim_at(d + 1), self.dims[k])
        return m

    def act_basis(self, j: int, k: int, s: int) -> Matrix:
        """Action of the s-th F^{-j} basis vector: degree -k -> degree -k-j."""
        field = self.alg.field
        if k + j >= self.length:
            return Matrix.zeros(field, 0, self.dims[k] if k < self.length else 0)
        mats = self.act.get((j, k))
        if mats is None:
            return Matrix.zeros(field, self.dims[k + j], self.dims[k])
        return mats[s]

    def act_elem(self, j: int, k: int, ambient_vec) -> Matrix:
        """Action of an ambient vector lying in F^{-j}: degree -k -> -k-j."""
        field = self.alg.field
        coords = self.alg.fil_coords(-j, ambient_vec)
        rows = self.dims[k + j] if k + j < self.length else 0
        out = Matrix.zeros(field, rows, self.dims[k] if k < self.length else 0)
        for s, c in enumerate(coords):
            if not field.is_zero(c):
                out = out + self.act_basis(j, k, s).scaled(c)
        return out

    def act_deg(self, ambient_vec, deg: int, d_src: int) -> Matrix:
        """Action of the Rees element (vec, deg): degree d_src -> d_src + deg.

        Requires vec in F^{min(deg, 0)}.  Routes through the stored window
        and climbs with transition maps; identifications above degree zero
        are the canonical ones.
        """
        field = self.alg.field
        d_tgt = d_src + deg
        if self.dim_at(d_src) == 0 or self.dim_at(d_tgt) == 0:
            return Matrix.zeros(field, self.dim_at(d_tgt), self.dim_at(d_src))
        j = max(0, -deg)
        base = min(d_src, 0)
        k = -base
        m = self.act_elem(j, k, ambient_vec)
        cur = base - j
        if m.nrows == 0 and self.dim_at(d_tgt) != 0:
            # action factored through a vanishing component
            return Matrix.zeros(field, self.dim_at(d_tgt), self.dim_at(d_src))
        while cur < d_tgt:
            m = self.tau_at(cur) @ m
            cur += 1
        return m

    def zero_like(self):
        return tuple(Matrix.zeros(self.alg.field, d, d) for d in self.dims)


def validate_module(m: GradedModule, max_report: int = 20) -> list:
    bad = []
    alg = m.alg
    field = alg.field

    def report(msg):
        if len(bad) < max_report:
            bad.append(msg)

    # unit acts as identity on every component
    for k in range(m.length):
        if m.act_elem(0, k, alg.unit) != Matrix.identity(field, m.dims[k]):
            report(f"unit does not act as identity at degree {-k}")
    # associativity: (f g) m = f (g m) for filtration basis vectors
    for a in range(alg.length):
        fa = alg.fil(-a)
        for b in range(alg.length):
            fb = alg.fil(-b)
            for ca in fa.columns():
                for cb in fb.columns():
                    prod = alg.mul_vec(ca, cb)
                    for k in range(m.length):
                        if k + a + b >= m.length:
                            continue
                        lhs = m.act_elem(a + b, k, prod)
                        rhs = m.act_elem(a, k + b, ca) @ m.act_elem(b, k, cb)
                        if lhs != rhs:
                            report(f"action associativity fails at "
                                   f"(F^{-a},F^{-b},deg {-k})")
    # transition equivariance: f t^{-j+1} = t (f t^{-j}) and t-centrality
    for j in range(1, alg.length):
        fj = alg.fil(-j)
        for cj in fj.columns():
            for k in range(m.length):
                if k + j < m.length:
                    lhs = m.act_elem(j - 1, k, cj)
                    rhs = m.tau_at(-k - j) @ m.act_elem(j, k, cj)
                    if lhs != rhs:
                        report(f"transition equivariance fails (j={j}, k={k})")
                elif k + j == m.length and k + j - 1 < m.length:
                    if not m.act_elem(j - 1, k, cj).is_zero():
                        report(f"boundary action not killed (j={j}, k={k})")
                if 0 < k and k + j < m.length:
                    lhs = m.act_elem(j, k - 1, cj) @ m.tau_at(-k)
                    rhs = m.tau_at(-k - j) @ m.act_elem(j, k, cj)
                    if lhs != rhs:
                        report(f"t-centrality fails (j={j}, k={k})")
    # degree-zero action commutes with transitions
    for k in range(1, m.length):
        for i in range(alg.dim):
            e = [field.zero] * alg.dim
            e[i] = field.one
            lhs = m.act_elem(0, k - 1, e) @ m.tau_at(-k)
            rhs = m.tau_at(-k) @ m.act_elem(0, k, e)
            if lhs != rhs:
                report(f"degree-zero action not t-central (k={k}, basis {i})")
    return bad


def truncated_free(alg: FilteredAlgebra, i: int) -> GradedModule:
    """P_i: the truncated free module with components F^{i-k} / F^{i-n}."""
    n = alg.length
    if not (0 <= i < n):
        raise FiltError("generator index out of range")
    field = alg.field
    quots = [alg.quot(i - k, i - n) for k in range(n)]
    dims = [q.dim for q in quots]
    tau = {}
    for k in range(1, n):
        src, tgt = quots[k], quots[k - 1]
        m = Matrix.zeros(field, tgt.dim, src.dim)
        for c in range(src.dim):
            unitc = [field.zero] * src.dim
            unitc[c] = field.one
            amb = src.to_ambient(unitc)
            for r, v in enumerate(tgt.from_ambient(amb)):
                if not field.is_zero(v):
                    m.set(r, c, v)
        tau[k] = m
    act = {}
    for j in range(n):
        fj = alg.fil(-j)
        for k in range(n - j):
            mats = []
            for col in fj.columns():
                src, tgt = quots[k], quots[k + j]
                m = Matrix.zeros(field, tgt.dim, src.dim)
                for c in range(src.dim):
                    unitc = [field.zero] * src.dim
                    unitc[c] = field.one
                    amb = alg.mul_vec(col, src.to_ambient(unitc))
                    for r, v in enumerate(tgt.from_ambient(amb)):
                        if not field.is_zero(v):
                            m.set(r, c, v)
                mats.append(m)
            act[(j, k)] = mats
    return GradedModule(alg, n, dims, tau, act)


def free_generator_coords(alg: FilteredAlgebra, i: int):
    """Coordinates of the class of 1 in the degree -i component of P_i."""
    return alg.quot(0, i - alg.length).from_ambient(alg.unit)


def zero_module(alg: FilteredAlgebra, length=None) -> GradedModule:
    length = alg.length if length is None else length
    return GradedModule(alg, length, [0] * length, {}, {})


def direct_sum_modules(mods) -> GradedModule:
    mods = list(mods)
    alg = mods[0].alg
    field = alg.field
    length = mods[0].length
    if any(m.length != length for m in mods):
        raise FiltError("direct sum needs equal lengths")
    dims = [sum(m.dims[k] for m in mods) for k in range(length)]
    tau = {}
    for k in range(1, length):
        tau[k] = Matrix.block(field, [m.dims[k - 1] for m in mods],
                              [m.dims[k] for m in mods],
                              {(i, i): m.tau_at(-k) for i, m in enumerate(mods)})
    act = {}
    for j in range(alg.length):
        nj = alg.fil(-j).ncols
        for k in range(length - j):
            mats = []
            for s in range(nj):
                mats.append(Matrix.block(
                    field, [m.dims[k + j] for m in mods],
                    [m.dims[k] for m in mods],
                    {(i, i): m.act_basis(j, k, s) for i, m in enumerate(mods)}))
            act[(j, k)] = mats
    return GradedModule(alg, length, dims, tau, act)


def module_hom(m1: GradedModule, m2: GradedModule):
    """Degree-zero Rees-linear maps m1 -> m2: (dimension, basis).

    Each basis element is a tuple of per-component matrices.  Solved as one
    exact linear system over the equivariance conditions.
    """
    if m1.alg is not m2.alg and m1.alg != m2.alg:
        raise FiltError("modules over different algebras")
    if m1.length != m2.length:
        raise FiltError("modules of different lengths")
    alg = m1.alg
    field = alg.field
    L = m1.length
    sizes = [m2.dims[k] * m1.dims[k] for k in range(L)]
    offsets = []
    acc = 0
    for s in sizes:
        offsets.append(acc)
        acc += s
    total = acc

    def unknown_index(k, r, c):
        return offsets[k] + r * m1.dims[k] + c

    rows = []

    def add_equation(coeffs):
        row = {i: v for i, v in coeffs.items() if not field.is_zero(v)}
        if row:
            rows.append(row)

    def equivariance(map_src: Matrix, map_tgt: Matrix, k_src: int, k_tgt: int):
        # phi_{k_tgt} o map_src - map_tgt o phi_{k_src} = 0, entrywise
        for r in range(map_tgt.nrows):
            for c in range(m1.dims[k_src]):
                eq = {}
                for (mrow, mcol), v in map_src.items():
                    if mcol == c:
                        idx = unknown_index(k_tgt, r, mrow)
                        eq[idx] = field.add(eq.get(idx, field.zero), v)
                for (mrow, mcol), v in map_tgt.items():
                    if mrow == r:
                        idx = unknown_index(k_src, mcol, c)
                        eq[idx] = field.sub(eq.get(idx, field.zero), v)
                add_equation(eq)

    for k in range(1, L):
        equivariance(m1.tau_at(-k), m2.tau_at(-k), k, k - 1)
    for j in range(alg.length):
        nj = alg.fil(-j).ncols
        for k in range(L - j):
            for s in range(nj):
                equivariance(m1.act_basis(j, k, s), m2.act_basis(j, k, s),
                             k, k + j)
    if total == 0:
        return 0, []
    mat = Matrix.zeros(field, len(rows), total)
    for r, row in enumerate(rows):
        for c, v in row.items():
            mat.set(r, c, v)
    if len(rows) == 0:
        basis = Matrix.identity(field, total)
    else:
        basis = mat.kernel_basis()
    out = []
    for col in basis.columns():
        mats = []
        for k in range(L):
            m = Matrix.zeros(field, m2.dims[k], m1.dims[k])
            for r in range(m2.dims[k]):
                for c in range(m1.dims[k]):
                    v = col[unknown_index(k, r, c)]
                    if not field.is_zero(v):
                        m.set(r, c, v)
            mats.append(m)
        out.append(tuple(mats))
    return basis.ncols, out


def apply_module_map(mats, m1: GradedModule, vec_k: int, vec):
    return mats[vec_k].apply(vec)


# -- projective generators and the Auslander algebra ------------------------


def proj_dgcat(alg: FilteredAlgebra) -> DgCategory:
    """The dg category of the truncated-free generators, in degree zero.

    Objects 0..n-1; hom(i, j) = F^{j-i} / F^{j-n} concentrated in degree 0,
    with composition the multiplication of representatives.
    """
    n = alg.length
    field = alg.field
    objects = [str(i) for i in range(n)]
    quots = {}
    hom = {}
    for i in range(n):
        for j in range(n):
            q = alg.quot(j - i, j - n)
            quots[(i, j)] = q
            hom[(str(i), str(j))] = Complex(field, {0: q.dim}, {})

    def comp_fn(a, b, c, deg_i, deg_j):
        if deg_i != 0 or deg_j != 0:
            raise FiltError("projective generators live in degree zero")
        i, j, k = int(a), int(b), int(c)
        qg, qf, qt = quots[(j, k)], quots[(i, j)], quots[(i, k)]
        out = Matrix.zeros(field, qt.dim, qg.dim * qf.dim)
        for gi in range(qg.dim):
            gunit = [field.zero] * qg.dim
            gunit[gi] = field.one
            g_amb = qg.to_ambient(gunit)
            for fi in range(qf.dim):
                funit = [field.zero] * qf.dim
                funit[fi] = field.one
                prod = alg.mul_vec(g_amb, qf.to_ambient(funit))
                for r, v in enumerate(qt.from_ambient(prod)):
                    if not field.is_zero(v):
                        out.set(r, gi * qf.dim + fi, v)
        return out

    ids = {str(i): tuple(quots[(i, i)].from_ambient(alg.unit)) for i in range(n)}
    return DgCategory(field, objects, hom, comp_fn, ids)


class AuslanderAlgebra:
    """The block-matrix algebra with block (i, j) = F^{i-j} / F^{i-n}.

    Basis elements are triples (i, j, s) with s indexing the deterministic
    quotient basis of the block; multiplication is matrix multiplication
    with products of representatives.
    """

    def __init__(self, alg: FilteredAlgebra):
        self.alg = alg
        self.n = alg.length
        self.field = alg.field
        self.blocks = {(i, j): alg.quot(i - j, i - self.n)
                       for i in range(self.n) for j in range(self.n)}
        self.basis = [(i, j, s) for i in range(self.n) for j in range(self.n)
                      for s in range(self.blocks[(i, j)].dim)]
        self.index = {b: t for t, b in enumerate(self.basis)}
        self.dim = len(self.basis)

    def block_dim(self, i, j) -> int:
        return self.blocks[(i, j)].dim

    def total_dim(self) -> int:
        return self.dim

    def unit_vec(self):
        field = self.field
        out = [field.zero] * self.dim
        for i in range(self.n):
            q = self.blocks[(i, i)]
            for s, v in enumerate(q.from_ambient(self.alg.unit)):
                out[self.index[(i, i, s)]] = v
        return tuple(out)

    def mul_basis(self, t1, t2):
        """Product of basis elements; (i,j,s) * (j',k,u) is zero unless j = j'."""
        field = self.field
        i, j, s = self.basis[t1]
        j2, k, u = self.basis[t2]
        out = [field.zero] * self.dim
        if j != j2:
            return tuple(out)
        qa, qb = self.blocks[(i, j)], self.blocks[(j, k)]
        ea = [field.zero] * qa.dim
        ea[s] = field.one
        eb = [field.zero] * qb.dim
        eb[u] = field.one
        prod = self.alg.mul_vec(qa.to_ambient(ea), qb.to_ambient(eb))
        qt = self.blocks[(i, k)]
        for r, v in enumerate(qt.from_ambient(prod)):
            out[self.index[(i, k, r)]] = v
        return tuple(out)

    def validate(self, max_report: int = 10) -> list:
        bad = []
        field = self.field
        one = self.unit_vec()

        def mul_vec(u, v):
            out = [field.zero] * self.dim
            for t1, a in enumerate(u):
                if field.is_zero(a):
                    continue
                for t2, b in enumerate(v):
                    if field.is_zero(b):
                        continue
                    c = field.mul(a, b)
                    for r, w in enumerate(self.mul_basis(t1, t2)):
                        if not field.is_zero(w):
                            out[r] = field.add(out[r], field.mul(c, w))
            return tuple(out)

        for t in range(self.dim):
            e = [field.zero] * self.dim
            e[t] = field.one
            if mul_vec(one, e) != tuple(e) or mul_vec(e, one) != tuple(e):
                bad.append(f"unit fails on basis {self.basis[t]}")
        for t1 in range(self.dim):
            for t2 in range(self.dim):
                p12 = self.mul_basis(t1, t2)
                for t3 in range(self.dim):
                    e3 = [self.field.zero] * self.dim
                    e3[t3] = self.field.one
                    lhs = mul_vec(p12, e3)
                    rhs = mul_vec([self.field.one if t == t1 else self.field.zero
                                   for t in range(self.dim)],
                                  self.mul_basis(t2, t3))
                    if lhs != rhs:
                        bad.append(f"associativity fails at "
                                   f"{self.basis[t1]},{self.basis[t2]},{self.basis[t3]}")
                        if len(bad) >= max_report:
                            return bad
        return bad


def auslander(alg: FilteredAlgebra) -> AuslanderAlgebra:
    return AuslanderAlgebra(alg)


@dataclass
class AuslanderModule:
    """A right module over the Auslander algebra: the row (M^0 ... M^{-n+1})."""

    aus: AuslanderAlgebra
    dims: list          # dims[i] = dim of row slot i (= M^{-i})
    action: dict        # basis triple (i, j, s) -> Matrix slot i -> slot j


def auslander_E(aus: AuslanderAlgebra, m: GradedModule) -> AuslanderModule:
    """The row-module image of a graded module under the Morita equivalence."""
    if m.length != aus.n:
        raise FiltError("module length must match the algebra length")
    action = {}
    for (i, j, s) in aus.basis:
        q = aus.blocks[(i, j)]
        e = [aus.field.zero] * q.dim
        e[s] = aus.field.one
        amb = q.to_ambient(e)
        action[(i, j, s)] = m.act_deg(amb, i - j, -i)
    return AuslanderModule(aus, list(m.dims), action)


def auslander_module_hom(m1: AuslanderModule, m2: AuslanderModule):
    """Right-module maps between row modules: (dimension, basis).

    Independent of `module_hom`: solves the equivariance system over the
    Auslander basis directly.
    """
    aus = m1.aus
    field = aus.field
    n = aus.n
    sizes = [m2.dims[i] * m1.dims[i] for i in range(n)]
    offsets = []
    acc = 0
    for s in sizes:
        offsets.append(acc)
        acc += s
    total = acc

    def unknown_index(i, r, c):
        return offsets[i] + r * m1.dims[i] + c

    rows = []
    for (i, j, s) in aus.basis:
        a1 = m1.action[(i, j, s)]
        a2 = m2.action[(i, j, s)]
        for r in range(m2.dims[j]):
            for c in range(m1.dims[i]):
                eq = {}
                for (mr, mc), v in a1.items():
                    if mc == c:
                        idx = unknown_index(j, r, mr)
                        eq[idx] = field.add(eq.get(idx, field.zero), v)
                for (mr, mc), v in a2.items():
                    if mr == r:
                        idx = unknown_index(i, mc, c)
                        eq[idx] = field.sub(eq.get(idx, field.zero), v)
                eq = {k: v for k, v in eq.items() if not field.is_zero(v)}
                if eq:
                    rows.append(eq)
    if total == 0:
        return 0, []
    mat = Matrix.zeros(field, len(rows), total)
    for r, row in enumerate(rows):
        for c, v in row.items():
            mat.set(r, c, v)
    basis = mat.kernel_basis() if rows else Matrix.identity(field, total)
    return basis.ncols, basis


def end_algebra_iso_auslander(alg: FilteredAlgebra, max_report: int = 10) -> list:
    """Verify End((+)_i P_i) is isomorphic to the Auslander algebra.

    Identifies hom(P_i, P_j) with block (j, i) by evaluating at the free
    generator and checks that the identification is bijective and turns
    composition into matrix multiplication.  Returns a list of violations.
    """
    field = alg.field
    n = alg.length
    aus = auslander(alg)
    ps = [truncated_free(alg, i) for i in range(n)]
    gens = [free_generator_coords(alg, i) for i in range(n)]
    bad = []
    hom_bases = {}
    ev_maps = {}
    for i in range(n):
        for j in range(n):
            dim, basis = module_hom(ps[i], ps[j])
            blk = aus.blocks[(j, i)]
            if dim != blk.dim:
                bad.append(f"hom(P_{i},P_{j}) has dimension {dim}, "
                           f"block ({j},{i}) has {blk.dim}")
                continue
            hom_bases[(i, j)] = basis
            ev = Matrix.zeros(field, blk.dim, dim)
            for t, mats in enumerate(basis):
                img = mats[i].apply(gens[i])
                for r, v in enumerate(img):
                    if not field.is_zero(v):
                        ev.set(r, t, v)
            if not ev.is_invertible():
                bad.append(f"evaluation hom(P_{i},P_{j}) -> block ({j},{i}) "
                           f"is not bijective")
            ev_maps[(i, j)] = ev
    if bad:
        return bad[:max_report]

    def ev_of(i, j, mats):
        img = mats[i].apply(gens[i])
        return tuple(img)

    for i in range(n):
        for j in range(n):
            for k in range(n):
                for mats_f in hom_bases[(i, j)]:
                    for mats_g in hom_bases[(j, k)]:
                        comp = tuple(mats_g[t] @ mats_f[t] for t in range(n))
                        lhs = ev_of(i, k, comp)
                        # product of blocks (k,j) * (j,i) in the Auslander algebra
                        bg = aus.blocks[(k, j)]
                        bf = aus.blocks[(j, i)]
                        g_amb = bg.to_ambient(ev_of(j, k, mats_g))
                        f_amb = bf.to_ambient(ev_of(i, j, mats_f))
                        prod = alg.mul_vec(g_amb, f_amb)
                        rhs = tuple(aus.blocks[(k, i)].from_ambient(prod))
                        if lhs != rhs:
                            bad.append(f"multiplication tables differ at "
                                       f"({i},{j},{k})")
                            if len(bad) >= max_report:
                                return bad
    return bad


# -- truncation, shifts, Veronese -------------------------------------------


def shift_module(m: GradedModule, i: int) -> GradedModule:
    """M(i) for i >= 0, as a module of length (length + i)."""
    if i < 0:
        raise FiltError("only nonnegative shifts are materialized")
    alg = m.alg
    L = m.length + i
    dims = [m.dim_at(i - k) for k in range(L)]
    tau = {k: m.tau_at(i - k) for k in range(1, L)}
    act = {}
    for j in range(alg.length):
        nj = alg.fil(-j).ncols
        for k in range(L - j):
            mats = []
            for s in range(nj):
                col = alg.fil(-j).columns()[s]
                mats.append(m.act_deg(col, -j, i - k))
            act[(j, k)] = mats
    return GradedModule(alg, L, dims, tau, act)


def truncate(m: GradedModule, n: int) -> GradedModule:
    """The left truncation to length n: components M^{-k} / tau^{n-k}(M^{-n})."""
    if m.length < n:
        raise FiltError("module is shorter than the truncation length")
    alg = m.alg
    field = alg.field
    projs = []
    lifts = []
    dims = []
    for k in range(n):
        if m.length <= n:
            sub = Matrix.zeros(field, m.dims[k], 0)
        else:
            # image of M^{-n} under the chain of transitions up to degree -k
            mat = Matrix.identity(field, m.dims[n])
            cur = -n
            while cur < -k:
                mat = m.tau_at(cur) @ mat
                cur += 1
            sub = mat
        proj, lift = quotient_maps(field, m.dims[k], sub)
        projs.append(proj)
        lifts.append(lift)
        dims.append(proj.nrows)
    tau = {}
    for k in range(1, n):
        tau[k] = projs[k - 1] @ (m.tau_at(-k) @ lifts[k])
    act = {}
    for j in range(alg.length):
        nj = alg.fil(-j).ncols
        for k in range(n - j):
            mats = []
            for s in range(nj):
                mats.append(projs[k + j] @ (m.act_basis(j, k, s) @ lifts[k]))
            act[(j, k)] = mats
    out = GradedModule(alg, n, dims, tau, act)
    out.trunc_proj = projs
    out.trunc_lift = lifts
    return out


def veronese(m: GradedModule, d: int, target_alg: FilteredAlgebra) -> GradedModule:
    """The d-th Veronese: components M^{d i}, over the coarse algebra.

    `m` lives over a d-refinement of `target_alg` (same underlying algebra,
    filtration G with G^{di} = F^i)."""
    alg = m.alg
    if m.length != d * target_alg.length:
        raise FiltError("length mismatch in Veronese")
    L = target_alg.length
    field = alg.field
    dims = [m.dim_at(-d * k) for k in range(L)]
    tau = {}
    for k in range(1, L):
        mat = Matrix.identity(field, m.dim_at(-d * k))
        cur = -d * k
        for _ in range(d):
            mat = m.tau_at(cur) @ mat
            cur += 1
        tau[k] = mat
    act = {}
    for j in range(L):
        fj = target_alg.fil(-j)
        for k in range(L - j):
            mats = []
            for col in fj.columns():
                mats.append(m.act_deg(col, -d * j, -d * k))
            act[(j, k)] = mats
    return GradedModule(target_alg, L, dims, tau, act)


def floor_refinement(alg: FilteredAlgebra, d: int) -> FilteredAlgebra:
    """The d-refinement G^i = F^{floor(i/d)} (left adjoint to the Veronese)."""
    n = alg.length
    filtration = []
    for k in range(d * n + 1):
        s = -((k + d - 1) // d)
        filtration.append(alg.fil(s))
    return FilteredAlgebra(alg.field, alg.dim, alg._mult, alg.unit,
                           d * n, filtration, alg.basis_names)


def epsilon(m: GradedModule, d: int, target_alg: FilteredAlgebra) -> GradedModule:
    """The left adjoint of the Veronese: components M^{floor(i/d)}.

    `target_alg` must be the floor refinement of m's algebra."""
    alg = m.alg
    L = d * m.length
    field = alg.field
    if target_alg.length != L:
        raise FiltError("epsilon target must have length d * length")
    dims = [m.dim_at(-((k + d - 1) // d)) for k in range(L)]

    def floor_deg(i):
        # floor(i / d) for the (possibly negative) degree i
        return i // d

    tau = {}
    for k in range(1, L):
        lo, hi = floor_deg(-k), floor_deg(-k + 1)
        if lo == hi:
            tau[k] = Matrix.identity(field, m.dim_at(lo))
        else:
            tau[k] = m.tau_at(lo)
    act = {}
    for j in range(target_alg.length):
        fj = target_alg.fil(-j)
        jf = -floor_deg(-j)
        for k in range(L - j):
            mats = []
            src_deg = floor_deg(-k)
            tgt_deg = floor_deg(-k - j)
            for col in fj.columns():
                base = m.act_deg(col, -jf, src_deg)
                cur = src_deg - jf
                while cur < tgt_deg:
                    base = m.tau_at(cur) @ base
                    cur += 1
                # tgt_deg <= src_deg - jf always; climb handled, now descend:
                mats.append(base)
            act[(j, k)] = mats
    return GradedModule(target_alg, L, dims, tau, act)


def free_hom_map(alg: FilteredAlgebra, a: int, b: int, coords):
    """Per-component matrices of the map P_a -> P_b with 1 -> coords.

    `coords` lives in the quotient F^{b-a} / F^{b-n}; the component at
    degree -c sends a class [g] to [f g].
    """
    field = alg.field
    n = alg.length
    f_amb = alg.quot(b - a, b - n).to_ambient(coords)
    out = []
    for c in range(n):
        qs = alg.quot(a - c, a - n)
        qt = alg.quot(b - c, b - n)
        m = Matrix.zeros(field, qt.dim, qs.dim)
        for col in range(qs.dim):
            unit = [field.zero] * qs.dim
            unit[col] = field.one
            prod = alg.mul_vec(f_amb, qs.to_ambient(unit))
            for r, v in enumerate(qt.from_ambient(prod)):
                if not field.is_zero(v):
                    m.set(r, col, v)
        out.append(m)
    return out


def module_cokernel(src: GradedModule, tgt: GradedModule, mats) -> GradedModule:
    """The cokernel of a module map given by per-component matrices."""
    alg = tgt.alg
    field = alg.field
    L = tgt.length
    projs = []
    lifts = []
    dims = []
    for c in range(L):
        proj, lift = quotient_maps(field, tgt.dims[c], mats[c])
        projs.append(proj)
        lifts.append(lift)
        dims.append(proj.nrows)
    tau = {}
    for k in range(1, L):
        tau[k] = projs[k - 1] @ (tgt.tau_at(-k) @ lifts[k])
    act = {}
    for j in range(alg.length):
        nj = alg.fil(-j).ncols
        for k in range(L - j):
            row = []
            for s in range(nj):
                row.append(projs[k + j] @ (tgt.act_basis(j, k, s) @ lifts[k]))
            act[(j, k)] = row
    return GradedModule(alg, L, dims, tau, act)


# -- presentations and the truncated tensor product -------------------------


def greedy_presentation(m: GradedModule):
    """Two steps of the greedy resolution by truncated frees.

    Returns (gens0, gens1, phi) where gens0/gens1 list generator degrees
    k (one P_k per entry) and phi[(r, s)] is the quotient-coordinate vector
    in F^{k_r - k_s} / F^{k_r - n} describing the block P_{k_s} -> P_{k_r}
    of the relation map.  The cokernel of phi is m.
    """
    alg = m.alg
    field = alg.field
    n = alg.length
    if m.length != n:
        raise FiltError("presentations need module length = algebra length")
    gens0 = []
    for k in range(n):
        gens0.extend([(k, tuple(col))
                      for col in Matrix.identity(field, m.dims[k]).columns()])

    # the surjection P0 = (+)_r P_{k_r} -> m, componentwise
    quots0 = {}
    for r, (k, v) in enumerate(gens0):
        quots0[r] = [alg.quot(k - c, k - n) for c in range(n)]

    def surjection_matrix(c):
        blocks = []
        for r, (k, vvec) in enumerate(gens0):
            q = quots0[r][c]
            mat = Matrix.zeros(field, m.dims[c], q.dim)
            for t in range(q.dim):
                unit = [field.zero] * q.dim
                unit[t] = field.one
                f_amb = q.to_ambient(unit)
                img = m.act_deg(f_amb, k - c, -k).apply(vvec)
                for rr, v in enumerate(img):
                    if not field.is_zero(v):
                        mat.set(rr, t, v)
            blocks.append(mat)
        return Matrix.hstack(blocks) if blocks else Matrix.zeros(field, m.dims[c], 0)

    kernels = {c: surjection_matrix(c).kernel_basis() for c in range(n)}
    gens1 = []
    phi = {}
    for c in range(n):
        kb = kernels[c]
        for col_idx, col in enumerate(kb.columns()):
            s = len(gens1)
            gens1.append((c, None))
            off = 0
            for r, (k, _) in enumerate(gens0):
                q = quots0[r][c]
                chunk = tuple(col[off:off + q.dim])
                off += q.dim
                if any(not field.is_zero(x) for x in chunk):
                    phi[(r, s)] = chunk
    return gens0, gens1, phi


def tensor_with_free(alg: FilteredAlgebra, i: int, m: GradedModule) -> GradedModule:
    """P_i (x)_n m = l^n(m(i)), with the truncation quotient data attached."""
    return truncate(shift_module(m, i), alg.length)


def induced_tensor_map(alg: FilteredAlgebra, a: int, b: int, coords,
                       m: GradedModule, ta: GradedModule, tb: GradedModule):
    """The map l^n(m(a)) -> l^n(m(b)) induced by a hom P_a -> P_b.

    `coords` are quotient coordinates in F^{b-a} / F^{b-n}; `ta`, `tb` the
    attached truncations of m(a), m(b).  Returns per-component matrices.
    """
    field = alg.field
    n = alg.length
    q = alg.quot(b - a, b - n)
    f_amb = q.to_ambient(coords)
    out = []
    for c in range(n):
        raw = m.act_deg(f_amb, b - a, a - c)
        out.append(tb.trunc_proj[c] @ (raw @ ta.trunc_lift[c]))
    return out


def tensor_n(m1: GradedModule, m2: GradedModule) -> GradedModule:
    """The truncated tensor product l^n(m1 (x) m2), via a presentation of m1."""
    alg = m1.alg
    field = alg.field
    n = alg.length
    gens0, gens1, phi = greedy_presentation(m1)
    t0 = {r: tensor_with_free(alg, k, m2) for r, (k, _) in enumerate(gens0)}
    t1 = {s: tensor_with_free(alg, c, m2) for s, (c, _) in enumerate(gens1)}
    # assemble the big map (+)_s T1_s -> (+)_r T0_r and take cokernels
    sum0 = direct_sum_modules([t0[r] for r in range(len(gens0))]) if gens0 else \
        zero_module(alg)
    comp_maps = {}
    for (r, s), coords in phi.items():
        a = gens1[s][0]
        b = gens0[r][0]
        comp_maps[(r, s)] = induced_tensor_map(alg, a, b, coords, m2,
                                               t1[s], t0[r])
    projs = []
    lifts = []
    dims = []
    for c in range(n):
        rows = sum(t0[r].dims[c] for r in range(len(gens0)))
        cols = sum(t1[s].dims[c] for s in range(len(gens1)))
        img = Matrix.zeros(field, rows, cols)
        coff = 0
        for s in range(len(gens1)):
            roff = 0
            for r in range(len(gens0)):
                blk = comp_maps.get((r, s))
                if blk is not None and not blk[c].is_zero():
                    for (rr, cc), v in blk[c].items():
                        img.set(roff + rr, coff + cc, v)
                roff += t0[r].dims[c]
            coff += t1[s].dims[c]
        proj, lift = quotient_maps(field, rows, img)
        projs.append(proj)
        lifts.append(lift)
        dims.append(proj.nrows)
    tau = {}
    for k in range(1, n):
        tau[k] = projs[k - 1] @ (sum0.tau_at(-k) @ lifts[k])
    act = {}
    for j in range(alg.length):
        nj = alg.fil(-j).ncols
        for k in range(n - j):
            mats = []
            for s in range(nj):
                mats.append(projs[k + j] @ (sum0.act_basis(j, k, s) @ lifts[k]))
            act[(j, k)] = mats
    out = GradedModule(alg, n, dims, tau, act)
    out.tensor_proj = projs
    out.tensor_parts = (gens0, t0)
    return out


def tensor_unit_map(m: GradedModule):
    """The canonical comparison P_0 (x)_n m -> m; returns (tensor, matrices).

    Evaluation sends the generator of each presentation summand to its image
    in m; well-definedness on the cokernel follows from functoriality.
    """
    alg = m.alg
    field = alg.field
    n = alg.length
    p0 = truncated_free(alg, 0)
    t = tensor_n(p0, m)
    gens0, t0 = t.tensor_parts
    maps = []
    for c in range(n):
        rows = m.dims[c]
        cols_total = sum(t0[r].dims[c] for r in range(len(gens0)))
        mat = Matrix.zeros(field, rows, cols_total)
        coff = 0
        for r, (k, vvec) in enumerate(gens0):
            # generator r is a quotient class of P_0 at degree -k: lift it
            q0 = alg.quot(-k, -n)
            gen_amb = q0.to_ambient(vvec)
            tr = t0[r]
            for tcol in range(tr.dims[c]):
                unit = [field.zero] * tr.dims[c]
                unit[tcol] = field.one
                lifted = tr.trunc_lift[c].apply(unit)   # element of m(k)^{-c}
                img = m.act_deg(gen_amb, -k, k - c).apply(lifted)
                for rr, v in enumerate(img):
                    if not field.is_zero(v):
                        mat.set(rr, coff + tcol, v)
            coff += tr.dims[c]
        # descend to the cokernel coordinates through a section
        sec = Matrix.zeros(field, cols_total, t.dims[c])
        # the cokernel projection has a right inverse given by lifting
        proj = t.tensor_proj[c]
        sol = proj.solve(Matrix.identity(field, t.dims[c]))
        if sol is None:
            raise FiltError("internal: cokernel projection not surjective")
        maps.append(mat @ sol)
    return t, maps


# -- refinements -------------------------------------------------------------


def power_ideal(alg: FilteredAlgebra, gens: Matrix, d: int) -> Matrix:
    """Column basis of the d-th power of the ideal spanned by `gens`."""
    field = alg.field
    if d == 0:
        return Matrix.identity(field, alg.dim)
    cur = gens
    for _ in range(d - 1):
        cols = []
        for u in cur.columns():
            for v in gens.columns():
                cols.append(alg.mul_vec(u, v))
        cur = _span(field, alg.dim, cols)
    return cur


def _span(field, dim, vectors) -> Matrix:
    if not vectors:
        return Matrix.zeros(field, dim, 0)
    m = Matrix.zeros(field, dim, len(vectors))
    for j, v in enumerate(vectors):
        for i, x in enumerate(v):
            if not field.is_zero(x):
                m.set(i, j, x)
    piv = m.column_space_pivots()
    cols = m.columns()
    keep = [cols[j] for j in piv]
    out = Matrix.zeros(field, dim, len(keep))
    for j, v in enumerate(keep):
        for i, x in enumerate(v):
            if not field.is_zero(x):
                out.set(i, j, x)
    return out


def is_ideal(alg: FilteredAlgebra, gens: Matrix) -> bool:
    for i in range(alg.dim):
        e = [alg.field.zero] * alg.dim
        e[i] = alg.field.one
        for v in gens.columns():
            prod = alg.mul_vec(e, v)
            if gens.solve(Matrix.column(alg.field, prod)) is None:
                return False
    return True


def refine(alg: FilteredAlgebra, ideal: Matrix, d: int) -> FilteredAlgebra:
    """The d-refinement G^i = F^j I^r + F^{j-1} for i = jd - r, 0 <= r < d."""
    field = alg.field
    if not is_ideal(alg, ideal):
        raise FiltError("refinement input does not span an ideal")
    for v in power_ideal(alg, ideal, d).columns():
        if not alg.in_fil(-1, v):
            raise FiltError("I^d is not contained in F^{-1}")
    n = alg.length
    filtration = [alg.fil(0)]
    powers = {r: power_ideal(alg, ideal, r) for r in range(d)}
    for k in range(1, d * n + 1):
        # G^{-k} = F^j I^r + F^{j-1} where -k = j d - r, j <= 0 <= r < d
        j = -(k // d)
        r = j * d + k
        cols = []
        fj = alg.fil(j)
        for u in fj.columns():
            for v in powers[r].columns():
                cols.append(alg.mul_vec(u, v))
        for u in alg.fil(j - 1).columns():
            cols.append(tuple(u))
        filtration.append(_span(field, alg.dim, cols))
    out = FilteredAlgebra(field, alg.dim, alg._mult, alg.unit, d * n,
                          filtration, alg.basis_names)
    return out


@dataclass
class AlgebraMap:
    """A filtered algebra map; `matrix` sends source coordinates to target."""

    src: FilteredAlgebra
    tgt: FilteredAlgebra
    matrix: Matrix

    def apply(self, vec):
        return self.matrix.apply(vec)


def validate_algebra_map(f: AlgebraMap, max_report: int = 10) -> list:
    bad = []
    field = f.src.field
    if f.apply(f.src.unit) != tuple(f.tgt.unit):
        bad.append("map does not preserve the unit")
    for i in range(f.src.dim):
        ei = [field.zero] * f.src.dim
        ei[i] = field.one
        for j in range(f.src.dim):
            ej = [field.zero] * f.src.dim
            ej[j] = field.one
            lhs = f.apply(f.src.mul_vec(ei, ej))
            rhs = f.tgt.mul_vec(f.apply(ei), f.apply(ej))
            if lhs != rhs:
                bad.append(f"map is not multiplicative at ({i},{j})")
                if len(bad) >= max_report:
                    return bad
    for k in range(f.src.length + 1):
        for v in f.src.fil(-k).columns():
            if not f.tgt.in_fil(-k, f.apply(v)):
                bad.append(f"map does not respect F^{-k}")
                break
    return bad


def refinement_functor(alg: FilteredAlgebra, refined: FilteredAlgebra,
                       d: int, src_cat=None, tgt_cat=None) -> DgFunctor:
    """proj_dgcat(alg) -> proj_dgcat(refined): i -> d i, identity on classes."""
    n = alg.length
    if refined.length != d * n:
        raise FiltError("refined algebra must have length d n")
    src = src_cat if src_cat is not None else proj_dgcat(alg)
    tgt = tgt_cat if tgt_cat is not None else proj_dgcat(refined)
    field = alg.field
    obj_map = {str(i): str(d * i) for i in range(n)}
    hom_maps = {}
    for i in range(n):
        for j in range(n):
            qs = alg.quot(j - i, j - n)
            qt = refined.quot(d * j - d * i, d * j - d * n)
            m = Matrix.zeros(field, qt.dim, qs.dim)
            for c in range(qs.dim):
                unit = [field.zero] * qs.dim
                unit[c] = field.one
                for r, v in enumerate(qt.from_ambient(qs.to_ambient(unit))):
                    if not field.is_zero(v):
                        m.set(r, c, v)
            hom_maps[(str(i), str(j))] = {0: m}
    return DgFunctor(src, tgt, obj_map, hom_maps)


def base_change_functor(f: AlgebraMap, src_cat=None, tgt_cat=None) -> DgFunctor:
    """proj_dgcat(src) -> proj_dgcat(tgt) along a filtered algebra map."""
    if f.src.length != f.tgt.length:
        raise FiltError("base change needs equal lengths")
    n = f.src.length
    field = f.src.field
    src = src_cat if src_cat is not None else proj_dgcat(f.src)
    tgt = tgt_cat if tgt_cat is not None else proj_dgcat(f.tgt)
    obj_map = {str(i): str(i) for i in range(n)}
    hom_maps = {}
    for i in range(n):
        for j in range(n):
            qs = f.src.quot(j - i, j - n)
            qt = f.tgt.quot(j - i, j - n)
            m = Matrix.zeros(field, qt.dim, qs.dim)
            for c in range(qs.dim):
                unit = [field.zero] * qs.dim
                unit[c] = field.one
                img = f.apply(qs.to_ambient(unit))
                for r, v in enumerate(qt.from_ambient(img)):
                    if not field.is_zero(v):
                        m.set(r, c, v)
            hom_maps[(str(i), str(j))] = {0: m}
    return DgFunctor(src, tgt, obj_map, hom_maps)


def generated_ideal(alg: FilteredAlgebra, vectors) -> Matrix:
    """The ideal generated by the given ambient vectors."""
    cols = []
    field = alg.field
    for v in vectors:
        for i in range(alg.dim):
            e = [field.zero] * alg.dim
            e[i] = field.one
            cols.append(alg.mul_vec(e, v))
    return _span(field, alg.dim, cols)


def refinement_square(alg: FilteredAlgebra, alg2: FilteredAlgebra,
                      f: AlgebraMap, ideal: Matrix, d: int, ideal2=None):
    """The 2-cube of projective-generator categories from compatible refinements.

    Direction 0 is base change along f, direction 1 is the refinement; the
    horizontal edges are hom-isomorphisms, so the square is acyclic.
    Returns the DgCube.
    """
    from .hypercube import DgCube
    if f.src is not alg or f.tgt is not alg2:
        raise FiltError("algebra map endpoints mismatch")
    if ideal2 is None:
        ideal2 = generated_ideal(alg2, [f.apply(v) for v in ideal.columns()])
    else:
        for v in ideal.columns():
            if ideal2.solve(Matrix.column(alg.field, f.apply(v))) is None:
                raise FiltError("ideals are not compatible with the map")
    ref1 = refine(alg, ideal, d)
    ref2 = refine(alg2, ideal2, d)
    fd = AlgebraMap(ref1, ref2, f.matrix)
    bad = validate_algebra_map(fd)
    if bad:
        raise FiltError(f"refined map invalid: {bad[0]}")
    c00 = proj_dgcat(alg)
    c10 = proj_dgcat(alg2)
    c01 = proj_dgcat(ref1)
    c11 = proj_dgcat(ref2)
    v_left = base_change_functor(f, c00, c10)
    e_bottom = refinement_functor(alg, ref1, d, c00, c01)
    e_top = refinement_functor(alg2, ref2, d, c10, c11)
    v_right = base_change_functor(fd, c01, c11)
    vertices = {frozenset(): c00, frozenset({0}): c10,
                frozenset({1}): c01, frozenset({0, 1}): c11}
    edges = {(frozenset(), 0): v_left, (frozenset(), 1): e_bottom,
             (frozenset({0}), 1): e_top, (frozenset({1}), 0): v_right}
    return DgCube(alg.field, 2, vertices, edges)


# -- graded pieces and induction ---------------------------------------------


def gr_piece(m: GradedModule, i: int) -> int:
    """Dimension of the degree -i component (the i-th graded piece)."""
    if not (0 <= i < m.length):
        raise FiltError("graded piece index out of range")
    return m.dims[i]


def induce(alg: FilteredAlgebra, v_dim: int, i: int) -> GradedModule:
    """v (x) P_i for a v_dim-dimensional space: a direct sum of copies of P_i."""
    if not (0 <= i < alg.length):
        raise FiltError("induction index out of range")
    p = truncated_free(alg, i)
    if v_dim == 0:
        return zero_module(alg)
    return direct_sum_modules([p] * v_dim)


# -- convenience constructors -------------------------------------------------


def poly_truncation_mult(field, m: int):
    """Multiplication table of k[x]/x^m on the basis 1, x, .., x^{m-1}."""
    def mult(i, j):
        out = [field.zero] * m
        if i + j < m:
            out[i + j] = field.one
        return tuple(out)
    return mult


def adic_filtration(field, dim, mult, unit, ideal: Matrix, length=None,
                    basis_names=None) -> FilteredAlgebra:
    """The I-adic filtration F^{-k} = I^k, of the ideal's nilpotency length."""
    probe = FilteredAlgebra(field, dim, mult, unit, 1,
                            [Matrix.identity(field, dim),
                             Matrix.zeros(field, dim, 0)], basis_names)
    ideal = generated_ideal(probe, ideal.columns())
    powers = [Matrix.identity(field, dim)]
    cur = ideal
    while cur.ncols and len(powers) < dim + 2:
        powers.append(cur)
        cur = power_ideal(probe, ideal, len(powers))
    n = length if length is not None else len(powers)
    filtration = []
    for k in range(n + 1):
        filtration.append(powers[k] if k < len(powers) else
                          Matrix.zeros(field, dim, 0))
    if filtration[-1].ncols != 0:
        raise FiltError("ideal is not nilpotent within the requested length")
    return FilteredAlgebra(field, dim, mult, unit, n, filtration, basis_names)


def truncated_polynomial_algebra(field, m: int, powers=None,
                                 length=None) -> FilteredAlgebra:
    """k[x]/x^m with the filtration F^{-k} = (x^{powers[k]}) (default x-adic)."""
    mult = poly_truncation_mult(field, m)
    unit = [field.zero] * m
    unit[0] = field.one
    names = tuple("1" if i == 0 else f"x^{i}" if i > 1 else "x" for i in range(m))
    if powers is None:
        x = Matrix.zeros(field, m, 1)
        x.set(1, 0, field.one)
        return adic_filtration(field, m, mult, unit, x, length, names)
    n = len(powers) - 1
    filtration = []
    for k, p in enumerate(powers):
        cols = max(0, m - p)
        mat = Matrix.zeros(field, m, cols)
        for c in range(cols):
            mat.set(p + c, c, field.one)
        filtration.append(mat)
    return FilteredAlgebra(field, m, mult, unit, n, filtration, names)
