"""JSON (de)serialization of every entity kind, plus the Document container.

Scalars: rationals as "a/b" strings (plain integers accepted on input),
prime-field elements as canonical integers in [0, p).  Subsets of cube
coordinates are comma-joined sorted integers with "" for the empty set; edge
keys are "I|l".  Every encoder/decoder pair round-trips structurally.
"""

from __future__ import annotations

import json

from .complexes import Complex, GradedMap
from .dgcat import DgCategory, DgFunctor
from .fields import field_from_config
from .filtlab import AlgebraMap, FilteredAlgebra, GradedModule
from .hypercube import ComplexCube, DgCube, full_shape
from .linalg import Matrix
from .twisted import TwistedComplex


class DocumentError(ValueError):
    pass


def scalar_out(field, x):
    return field.format(x) if field.name == "Q" else x


def scalar_in(field, s):
    return field.parse(s)


def matrix_out(field, m: Matrix):
    return [[scalar_out(field, v) for v in row] for row in m.to_lists()]


def matrix_in(field, rows, shape=None) -> Matrix:
    m = Matrix.from_rows(field, [[scalar_in(field, v) for v in row]
                                 for row in rows])
    if shape is not None and m.shape != shape and m.nrows * m.ncols == 0:
        m = Matrix.zeros(field, *shape)
    if shape is not None and m.shape != shape:
        raise DocumentError(f"matrix shape {m.shape} != expected {shape}")
    return m


def subset_out(I) -> str:
    return ",".join(str(x) for x in sorted(I))


def subset_in(s) -> frozenset:
    if s == "":
        return frozenset()
    return frozenset(int(x) for x in s.split(","))


# -- complexes ---------------------------------------------------------------


def complex_out(c: Complex):
    return {
        "window": [c.lo, c.hi],
        "dims": {str(k): d for k, d in sorted(c.dims.items())},
        "diff": {str(k): matrix_out(c.field, m)
                 for k, m in sorted(c.diffs.items())},
    }


def complex_in(field, data) -> Complex:
    dims = {int(k): int(d) for k, d in data.get("dims", {}).items()}
    diffs = {}
    for k, rows in data.get("diff", {}).items():
        k = int(k)
        diffs[k] = matrix_in(field, rows,
                             shape=(dims.get(k + 1, 0), dims.get(k, 0)))
    return Complex(field, dims, diffs)


def graded_map_out(f: GradedMap):
    return {
        "degree": f.degree,
        "comps": {str(k): matrix_out(f.source.field, m)
                  for k, m in sorted(f.comps.items())},
    }


def graded_map_in(field, data, source: Complex, target: Complex) -> GradedMap:
    degree = int(data.get("degree", 0))
    comps = {}
    for k, rows in data.get("comps", {}).items():
        k = int(k)
        comps[k] = matrix_in(field, rows,
                             shape=(target.dim(k + degree), source.dim(k)))
    return GradedMap(source, target, degree, comps)


# -- dg categories -----------------------------------------------------------


def category_out(cat: DgCategory):
    hom = {}
    comp = {}
    for a in cat.objects:
        for b in cat.objects:
            h = cat.hom(a, b)
            if h.dims:
                hom[f"{a}->{b}"] = complex_out(h)
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                tables = {}
                for i in cat.hom(b, c).degrees():
                    for j in cat.hom(a, b).degrees():
                        m = cat.comp_matrix(a, b, c, i, j)
                        if not m.is_zero():
                            tables[f"{i},{j}"] = matrix_out(cat.field, m)
                if tables:
                    comp[f"{a}|{b}|{c}"] = tables
    return {
        "objects": list(cat.objects),
        "hom": hom,
        "comp": comp,
        "ids": {a: [scalar_out(cat.field, v) for v in cat.ids[a]]
                for a in cat.objects},
    }


def category_in(field, data) -> DgCategory:
    objects = list(data["objects"])
    hom = {}
    for key, cdata in data.get("hom", {}).items():
        a, b = key.split("->")
        hom[(a, b)] = complex_in(field, cdata)
    comp = {}
    for key, tables in data.get("comp", {}).items():
        a, b, c = key.split("|")
        comp[(a, b, c)] = {}
        for dkey, rows in tables.items():
            i, j = (int(x) for x in dkey.split(","))
            comp[(a, b, c)][(i, j)] = matrix_in(field, rows)
    ids = {a: tuple(scalar_in(field, v) for v in vec)
           for a, vec in data["ids"].items()}
    return DgCategory(field, objects, hom, comp, ids)


def functor_out(f: DgFunctor, src_name: str, tgt_name: str):
    hom_maps = {}
    for a in f.source.objects:
        for b in f.source.objects:
            h = f.source.hom(a, b)
            maps = {str(k): matrix_out(f.source.field, f.hom_matrix(a, b, k))
                    for k in h.degrees()}
            if maps:
                hom_maps[f"{a}->{b}"] = maps
    return {"source": src_name, "target": tgt_name,
            "obj_map": dict(f.obj_map), "hom_maps": hom_maps}


def functor_in(field, data, src: DgCategory, tgt: DgCategory) -> DgFunctor:
    obj_map = dict(data["obj_map"])
    hom_maps = {}
    for key, maps in data.get("hom_maps", {}).items():
        a, b = key.split("->")
        hom_maps[(a, b)] = {}
        for k, rows in maps.items():
            k = int(k)
            hom_maps[(a, b)][k] = matrix_in(
                field, rows,
                shape=(tgt.hom(obj_map[a], obj_map[b]).dim(k),
                       src.hom(a, b).dim(k)))
    return DgFunctor(src, tgt, obj_map, hom_maps)


# -- cubes --------------------------------------------------------------------


def complex_cube_out(cube: ComplexCube, names: dict):
    """`names` maps id(complex) -> name for vertex reuse; inline otherwise."""
    vertices = {}
    for I, v in cube.vertices.items():
        vertices[subset_out(I)] = complex_out(v)
    edges = {}
    for (I, l), e in cube.edges.items():
        edges[f"{subset_out(I)}|{l}"] = graded_map_out(e)
    return {"top": sorted(cube.top),
            "shape": [subset_out(I) for I in
                      sorted(cube.shape, key=lambda s: (len(s), sorted(s)))],
            "vertices": vertices, "edges": edges}


def complex_cube_in(field, data) -> ComplexCube:
    top = frozenset(int(x) for x in data["top"])
    if "shape" in data:
        shape = frozenset(subset_in(s) for s in data["shape"])
    else:
        shape = full_shape(top)
    vertices = {subset_in(k): complex_in(field, v)
                for k, v in data["vertices"].items()}
    edges = {}
    for key, e in data["edges"].items():
        ikey, l = key.split("|")
        I = subset_in(ikey)
        l = int(l)
        edges[(I, l)] = graded_map_in(field, e, vertices[I], vertices[I | {l}])
    return ComplexCube(field, top, shape, vertices, edges)


def dg_cube_out(cube: DgCube, cat_names: dict, fun_names: dict):
    return {"n": cube.n,
            "vertices": {subset_out(I): cat_names[id(v)]
                         for I, v in cube.vertices.items()},
            "edges": {f"{subset_out(I)}|{l}": fun_names[id(e)]
                      for (I, l), e in cube.edges.items()}}


def dg_cube_in(field, data, categories: dict, functors: dict) -> DgCube:
    n = int(data["n"])
    vertices = {subset_in(k): categories[v] for k, v in data["vertices"].items()}
    edges = {}
    for key, fname in data["edges"].items():
        ikey, l = key.split("|")
        edges[(subset_in(ikey), int(l))] = functors[fname]
    return DgCube(field, n, vertices, edges, validate=True, deep_validate=False)


# -- filtered algebras and modules --------------------------------------------


def algebra_out(alg: FilteredAlgebra):
    mult = {}
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            vec = alg.mul_basis(i, j)
            if any(not alg.field.is_zero(v) for v in vec):
                mult[f"{i},{j}"] = [scalar_out(alg.field, v) for v in vec]
    return {
        "basis": list(alg.basis_names),
        "unit": [scalar_out(alg.field, v) for v in alg.unit],
        "mult": mult,
        "length": alg.length,
        "filtration": {str(k): matrix_out(alg.field, alg.filtration[k])
                       for k in range(1, alg.length + 1)},
    }


def algebra_in(field, data) -> FilteredAlgebra:
    basis = list(data["basis"])
    dim = len(basis)
    unit = tuple(scalar_in(field, v) for v in data["unit"])
    raw = {}
    for key, vec in data["mult"].items():
        i, j = (int(x) for x in key.split(","))
        raw[(i, j)] = tuple(scalar_in(field, v) for v in vec)

    def mult(i, j):
        if (i, j) in raw:
            return raw[(i, j)]
        if (j, i) in raw:
            return raw[(j, i)]
        return tuple(field.zero for _ in range(dim))

    length = int(data["length"])
    filtration = [Matrix.identity(field, dim)]
    for k in range(1, length + 1):
        rows = data["filtration"].get(str(k), [])
        if rows:
            filtration.append(matrix_in(field, rows))
        else:
            filtration.append(Matrix.zeros(field, dim, 0))
    return FilteredAlgebra(field, dim, mult, unit, length, filtration, basis)


def module_out(m: GradedModule):
    alg = m.alg
    act = {}
    for (j, k), mats in sorted(m.act.items()):
        act[f"{j},{k}"] = [matrix_out(alg.field, mat) for mat in mats]
    return {
        "length": m.length,
        "dims": list(m.dims),
        "tau": {str(k): matrix_out(alg.field, m.tau_at(-k))
                for k in range(1, m.length)},
        "act": act,
    }


def module_in(field, data, alg: FilteredAlgebra) -> GradedModule:
    length = int(data.get("length", alg.length))
    dims = [int(d) for d in data["dims"]]
    tau = {}
    for k, rows in data.get("tau", {}).items():
        k = int(k)
        tau[k] = matrix_in(field, rows, shape=(dims[k - 1], dims[k]))
    act = {}
    for key, mats in data.get("act", {}).items():
        j, k = (int(x) for x in key.split(","))
        nj = alg.fil(-j).ncols
        if len(mats) != nj:
            raise DocumentError(f"action ({j},{k}) needs {nj} matrices")
        act[(j, k)] = [matrix_in(field, rows,
                                 shape=(dims[k + j] if k + j < length else 0,
                                        dims[k]))
                       for rows in mats]
    return GradedModule(alg, length, dims, tau, act)


def algebra_map_out(f: AlgebraMap, src_name: str, tgt_name: str):
    return {"source": src_name, "target": tgt_name,
            "matrix": matrix_out(f.src.field, f.matrix)}


def algebra_map_in(field, data, src: FilteredAlgebra,
                   tgt: FilteredAlgebra) -> AlgebraMap:
    return AlgebraMap(src, tgt, matrix_in(field, data["matrix"],
                                          shape=(tgt.dim, src.dim)))


def twisted_out(t: TwistedComplex, cat_name: str):
    field = t.cat.field
    return {
        "category": cat_name,
        "terms": [{"obj": obj, "shift": s} for obj, s in t.terms],
        "delta": {f"{i},{j}": [scalar_out(field, v) for v in e.vec]
                  for (i, j), e in sorted(t.delta.items())},
    }


def twisted_in(field, data, cat: DgCategory) -> TwistedComplex:
    terms = []
    for term in data["terms"]:
        if isinstance(term, dict):
            terms.append((term["obj"], int(term.get("shift", 0))))
        else:
            terms.append((term[0], int(term[1])))
    delta = {}
    for key, vec in data.get("delta", {}).items():
        i, j = (int(x) for x in key.split(","))
        delta[(i, j)] = tuple(scalar_in(field, v) for v in vec)
    return TwistedComplex(cat, terms, delta)


# -- documents ----------------------------------------------------------------


class Document:
    """A parsed input document: one field, named entities, command params."""

    def __init__(self, field, params=None):
        self.field = field
        self.params = params or {}
        self.complexes = {}
        self.graded_maps = {}
        self.categories = {}
        self.functors = {}
        self.complex_cubes = {}
        self.dg_cubes = {}
        self.filtered_algebras = {}
        self.modules = {}
        self.twisted_complexes = {}
        self.algebra_maps = {}


def parse_document(data, default_field=None) -> Document:
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    cfg = data.get("field", default_field)
    if cfg is None:
        raise DocumentError("document does not declare a field")
    if default_field is not None and data.get("field") is not None \
            and data["field"] != default_field:
        raise DocumentError("field flag conflicts with the document")
    field = field_from_config(cfg)
    doc = Document(field, data.get("params", {}))
    for name, cdata in data.get("complexes", {}).items():
        doc.complexes[name] = complex_in(field, cdata)
    for name, cdata in data.get("categories", {}).items():
        doc.categories[name] = category_in(field, cdata)
    for name, fdata in data.get("functors", {}).items():
        src = doc.categories[fdata["source"]]
        tgt = doc.categories[fdata["target"]]
        doc.functors[name] = functor_in(field, fdata, src, tgt)
    for name, mdata in data.get("graded_maps", {}).items():
        src = doc.complexes[mdata["source"]]
        tgt = doc.complexes[mdata["target"]]
        doc.graded_maps[name] = graded_map_in(field, mdata, src, tgt)
    for name, cdata in data.get("complex_cubes", {}).items():
        doc.complex_cubes[name] = complex_cube_in(field, cdata)
    for name, cdata in data.get("dg_cubes", {}).items():
        doc.dg_cubes[name] = dg_cube_in(field, cdata, doc.categories,
                                        doc.functors)
    for name, adata in data.get("filtered_algebras", {}).items():
        doc.filtered_algebras[name] = algebra_in(field, adata)
    for name, mdata in data.get("modules", {}).items():
        alg = doc.filtered_algebras[mdata["algebra"]]
        doc.modules[name] = module_in(field, mdata, alg)
    for name, fdata in data.get("algebra_maps", {}).items():
        src = doc.filtered_algebras[fdata["source"]]
        tgt = doc.filtered_algebras[fdata["target"]]
        doc.algebra_maps[name] = algebra_map_in(field, fdata, src, tgt)
    # twisted complexes may live over constructed categories (e.g. the
    # generalized arrow category of a named cube), so they stay raw here and
    # are resolved by the consumer
    doc.twisted_complexes = dict(data.get("twisted_complexes", {}))
    return doc


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)
