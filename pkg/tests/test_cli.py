import json
import subprocess
import sys
from pathlib import Path

from dgglue import io as dio
from dgglue.fields import QQ, PrimeField
from dgglue.linalg import Matrix

ROOT = Path(__file__).resolve().parents[1]
DOCS = ROOT / "documents"


def run_cli(args, stdin_text=None, tmp_path=None):
    cmd = [sys.executable, "-m", "dgglue.cli"] + args
    return subprocess.run(cmd, input=stdin_text, capture_output=True,
                          text=True, cwd=ROOT)


def test_auslander_bundled_document():
    res = run_cli(["auslander", "--in", str(DOCS / "dual_numbers.json")])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["total_dim"] == 5
    assert rep["blocks"] == {"0,0": 2, "0,1": 1, "1,0": 1, "1,1": 1}


def test_totalize_bundled_one_cube():
    res = run_cli(["totalize", "--in", str(DOCS / "one_cube.json")])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["cohomology"] == {"-1": 1, "-2": 1}
    res2 = run_cli(["check-acyclic", "--in", str(DOCS / "one_cube.json")])
    rep2 = json.loads(res2.stdout)
    assert rep2["kind"] == "complex_cube" and rep2["verdict"] is False


def test_refine_square_pipeline(tmp_path):
    res = run_cli(["refine-square", "--in", str(DOCS / "refine_square_input.json")])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    doc = rep["document"]
    square_doc = tmp_path / "square.json"
    square_doc.write_text(json.dumps(doc))
    res2 = run_cli(["check-qff", "--in", str(square_doc)])
    assert res2.returncode == 0
    rep2 = json.loads(res2.stdout)
    assert rep2["verdict"] is True


def test_check_qff_bundled_square():
    res = run_cli(["check-qff", "--in", str(DOCS / "refinement_square.json")])
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"] is True


def test_reports_byte_identical():
    out1 = run_cli(["check-qff", "--in", str(DOCS / "refinement_square.json")])
    out2 = run_cli(["check-qff", "--in", str(DOCS / "refinement_square.json")])
    assert out1.stdout == out2.stdout


def test_timing_flag_adds_field():
    res = run_cli(["auslander", "--in", str(DOCS / "dual_numbers.json"),
                   "--timing"])
    assert "timing" in json.loads(res.stdout)


def test_exit_code_on_false_verdict(tmp_path):
    # a negative verdict still exits 0
    from conftest import unit_inclusion_cube
    from dgglue.cli import _dg_cube_document
    cube = unit_inclusion_cube(QQ)
    doc = _dg_cube_document(cube, params={"cube": "cube1"})
    doc["dg_cubes"] = {"cube1": list(doc["dg_cubes"].values())[0]}
    p = tmp_path / "bad_cube.json"
    p.write_text(json.dumps(doc))
    res = run_cli(["check-qff", "--in", str(p)])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["verdict"] is False
    assert rep["pairs"]["*|*"]["source"] == {"0": 1}
    assert rep["pairs"]["*|*"]["glue"] == {"0": 2}
    res2 = run_cli(["check-acyclic", "--in", str(p)])
    assert json.loads(res2.stdout)["verdict"] is False


def test_exit_code_on_malformed_input(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    res = run_cli(["cohomology", "--in", str(p)])
    assert res.returncode == 1
    p2 = tmp_path / "noref.json"
    p2.write_text(json.dumps({"field": "Q", "params": {"complex": "missing"}}))
    res2 = run_cli(["cohomology", "--in", str(p2)])
    assert res2.returncode == 1
    assert "error" in json.loads(res2.stdout)


def test_max_dim_guard(tmp_path):
    res = run_cli(["check-qff", "--in", str(DOCS / "refinement_square.json"),
                   "--max-dim", "1"])
    assert res.returncode == 1
    assert "exceeds" in json.loads(res.stdout)["error"]


def test_field_flag_conflict(tmp_path):
    p = tmp_path / "doc.json"
    p.write_text(json.dumps({"field": "Q", "params": {}}))
    res = run_cli(["ext-table", "--in", str(p), "--field", "Fp:7"])
    assert res.returncode == 1


def test_validate_command(tmp_path):
    doc = {
        "field": "Q",
        "complexes": {"c": {"dims": {"0": 1}, "diff": {}}},
        "params": {"target": "c"},
    }
    p = tmp_path / "v.json"
    p.write_text(json.dumps(doc))
    res = run_cli(["validate", "--in", str(p)])
    rep = json.loads(res.stdout)
    assert rep["verdict"] is True and rep["kind"] == "complex"


def test_ext_table_and_proj_dgcat(tmp_path):
    res = run_cli(["proj-dgcat", "--in", str(DOCS / "dual_numbers.json")])
    rep = json.loads(res.stdout)
    catdoc = {"field": "Q", "categories": {"pc": rep["category"]},
              "params": {"category": "pc"}}
    p = tmp_path / "cat.json"
    p.write_text(json.dumps(catdoc))
    res2 = run_cli(["ext-table", "--in", str(p)])
    rep2 = json.loads(res2.stdout)
    assert rep2["table"]["0|0"] == {"0": 2}
    assert rep2["table"]["0|1"] == {"0": 1}


def test_refine_command():
    doc = json.loads((DOCS / "refine_square_input.json").read_text())
    doc["params"] = {"algebra": "kx4", "d": 2, "ideal": [["0", "1", "0", "0"]]}
    res = run_cli(["refine"], stdin_text=json.dumps(doc))
    rep = json.loads(res.stdout)
    assert rep["length"] == 4
    # refined algebra re-parses
    alg_doc = {"field": "Q", "filtered_algebras": {"g": rep["algebra"]},
               "params": {"target": "g"}}
    res2 = run_cli(["validate"], stdin_text=json.dumps(alg_doc))
    assert json.loads(res2.stdout)["verdict"] is True


def test_gac_hom_and_hom_iso():
    res = run_cli(["gac-hom", "--in", str(DOCS / "refinement_square.json"),
                   "--param", "source=0:0", "--param", "target=1:0"])
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert "hom" in rep and "cohomology" in rep
    res2 = run_cli(["hom-iso", "--in", str(DOCS / "refinement_square.json")])
    assert json.loads(res2.stdout)["verdict"] is True


def test_glue_command(tmp_path):
    doc = json.loads((DOCS / "refinement_square.json").read_text())
    # bare objects over the generalized arrow category of the square
    doc["twisted_complexes"] = {
        "t0": {"terms": [["0:0", 0]], "delta": {}},
        "t1": {"terms": [["1:0", 0]], "delta": {}},
    }
    doc["params"] = {"cube": "square", "objects": "t0,t1"}
    res = run_cli(["glue"], stdin_text=json.dumps(doc))
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert set(rep["category"]["objects"]) == {"t0", "t1"}


def test_stack_extend_commands(tmp_path):
    from conftest import collapse_square
    from dgglue.cli import _dg_cube_document
    doc = _dg_cube_document(collapse_square(QQ))
    doc["dg_cubes"]["square2"] = doc["dg_cubes"]["square"]
    doc["params"] = {"first": "square", "second": "square2"}
    res = run_cli(["extend"], stdin_text=json.dumps(doc))
    assert res.returncode == 0
    rep = json.loads(res.stdout)
    assert rep["cube"]["dg_cubes"]
    res2 = run_cli(["stack"], stdin_text=json.dumps(doc))
    assert res2.returncode == 0


def test_parallel_flag_matches_serial():
    serial = run_cli(["check-qff", "--in", str(DOCS / "refinement_square.json")])
    par = run_cli(["check-qff", "--in", str(DOCS / "refinement_square.json"),
                   "--parallel", "2"])
    assert serial.stdout == par.stdout


def test_roundtrip_entities():
    # every emitted entity re-parses to a structurally equal value
    from dgglue.filtlab import truncated_polynomial_algebra, truncated_free
    from dgglue.complexes import Complex
    field = PrimeField(7)
    alg = truncated_polynomial_algebra(field, 3)
    data = dio.algebra_out(alg)
    back = dio.algebra_in(field, data)
    assert back.length == alg.length
    assert all(back.fil(-k) == alg.fil(-k) for k in range(4))
    assert all(back.mul_basis(i, j) == alg.mul_basis(i, j)
               for i in range(3) for j in range(3))
    m = truncated_free(alg, 1)
    mdata = dio.module_out(m)
    mback = dio.module_in(field, mdata, alg)
    assert mback.dims == m.dims
    assert all(mback.tau_at(-k) == m.tau_at(-k) for k in range(1, 3))
    c = Complex(field, {0: 2, 1: 1},
                {0: Matrix.from_rows(field, [[1, 0]])})
    assert dio.complex_in(field, dio.complex_out(c)) == c
    # categories, functors and cubes round-trip through the document schema
    from conftest import collapse_square
    from dgglue.cli import _dg_cube_document
    from dgglue.dgcat import cats_equal, functors_equal
    from dgglue.io import parse_document
    sq = collapse_square(field)
    doc = parse_document(_dg_cube_document(sq, params={}))
    back = doc.dg_cubes["square"]
    for I in sq.vertices:
        assert cats_equal(sq.vertices[I], back.vertices[I])
    for key in sq.edges:
        assert functors_equal(sq.edges[key], back.edges[key])
    from dgglue.samples import random_tensor_cube, rng as mkrng
    cube = random_tensor_cube(field, mkrng(5), 2, max_dim=1)
    data = dio.complex_cube_out(cube, {})
    back2 = dio.complex_cube_in(field, data)
    from dgglue.hypercube import cubes_equal
    assert cubes_equal(cube, back2)
