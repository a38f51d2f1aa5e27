import io
import json
import subprocess
import sys

import pytest

from aqftlab.cli import DocumentError, load_schema, run, validate_document
from tests.conftest import FIXTURES


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, doc):
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(doc))
    return str(p)


CL1 = {"kind": "algebra", "builtin": "clifford", "q": [1]}
DISKS3 = {"kind": "orthogonal_category", "circle": {"n": 3, "site": "disks"}}


def test_hopf_galois_on_fixtures():
    code, out, _ = call("hopf-galois", str(FIXTURES / "clifford2.json"), str(FIXTURES / "parity.json"))
    assert code == 0
    assert out.splitlines()[0] == "HOPF-GALOIS: bijective"


def test_exterior_parity_not_surjective(tmp_path):
    docs = {"documents": [
        {"kind": "algebra", "id": "ext", "builtin": "exterior", "n": 2},
        {"kind": "action", "group": {"kind": "group", "builtin": "Z2"}, "algebra": "ext", "builtin": "parity", "n_generators": 2},
    ]}
    code, out, _ = call("hopf-galois", "--json", write(tmp_path, "ext", docs))
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "HOPF-GALOIS: not_surjective"
    assert data["witness"] is not None


def test_truncated_and_gauge(tmp_path):
    theory = str(FIXTURES / "trivial_theory.json")
    group = str(FIXTURES / "z2.json")
    code, out, _ = call("truncated", theory, group)
    assert code == 0 and out.startswith("TRUNCATED: no")
    code, out, _ = call("gauge", theory, group)
    assert code == 0 and out.startswith("GAUGE: ok")
    assert "truncation_iso: verified" in out


def test_pointwise_equivariant_theory_is_truncated(tmp_path):
    doc = {"kind": "equivariant_aqft", "site": {"kind": "orthogonal_category", "circle": {"n": 2, "site": "opens"}},
           "pointwise_action": {"kind": "action", "group": {"kind": "group", "builtin": "Z2"}, "algebra": CL1,
                                "builtin": "parity", "n_generators": 1}}
    code, out, _ = call("truncated", write(tmp_path, "eq", doc))
    assert code == 0 and out.startswith("TRUNCATED: yes")


def test_validate_and_operad(tmp_path):
    code, out, _ = call("validate", *(str(p) for p in sorted(FIXTURES.glob("*.json"))))
    assert code == 0 and out.startswith("VALID: yes")
    code, out, _ = call("check-operad", str(FIXTURES / "trivial_theory.json"), "--max-arity", "2")
    assert code == 0 and out.startswith("OPERAD: ok")


def test_validate_reports_bad_algebra(tmp_path):
    bad = {"kind": "algebra", "dim": 2, "unit": [1, 0], "mult": [[0, 0, 0, 1]]}
    code, out, _ = call("validate", write(tmp_path, "bad", bad))
    assert code == 1 and out.startswith("VALID: no")


def test_poset_category_document(tmp_path):
    doc = {"kind": "orthogonal_category", "objects": ["a", "b", "c"], "less": [["a", "c"], ["b", "c"]],
           "orthogonal": [[["a", "c"], ["b", "c"]]]}
    code, out, _ = call("check-operad", write(tmp_path, "poset", doc))
    assert code == 0 and out.startswith("OPERAD: ok")


def test_aqft_check_and_roundtrip(tmp_path):
    doc = {"kind": "aqft", "site": DISKS3, "pointwise": CL1}
    path = write(tmp_path, "cl", doc)
    code, out, _ = call("aqft-check", path)
    assert code == 0 and out.startswith("AQFT: valid")
    code, out, _ = call("pfa-roundtrip", path)
    assert code == 0 and out.startswith("PFA-ROUNDTRIP: identity")


def test_anticommuting_theory_is_invalid(tmp_path):
    cl2 = {"kind": "algebra", "builtin": "clifford", "q": [1, 1]}
    doc = {"kind": "aqft", "site": {"kind": "orthogonal_category", "circle": {"n": 2, "site": "opens"}},
           "algebras": {"arc0_1": CL1, "arc1_1": CL1, "S1": cl2},
           "maps": {"arc0_1->S1": [[1, 0], [0, 1], [0, 0], [0, 0]], "arc1_1->S1": [[1, 0], [0, 0], [0, 1], [0, 0]]}}
    code, out, _ = call("aqft-check", write(tmp_path, "anti", doc))
    assert code == 1 and out.startswith("AQFT: invalid")


def test_extend(tmp_path):
    doc = {"kind": "aqft", "site": DISKS3, "pointwise": CL1}
    code, out, _ = call("extend", write(tmp_path, "cl", doc), "--to", "arc0_2", "--degree-bound", "4")
    assert code == 0 and out.startswith("EXTEND: dim 4")
    assert "cocone: commutes" in out


def test_descent_check_valid_and_overridden(tmp_path):
    theory = {"kind": "aqft", "id": "k", "site": DISKS3, "constant": {"kind": "algebra", "builtin": "field"}}
    desc = {"kind": "descent_object", "theory": "k", "over": "arc0_2", "construction": "from_module", "dim": 2}
    path = write(tmp_path, "d", {"documents": [theory, desc]})
    code, out, _ = call("descent-check", path)
    assert code == 0 and out.startswith("DESCENT: valid")
    # a zero coherence matrix is never invertible
    bad = dict(desc, override_xi={"1": [[0, 0], [0, 0]]})
    path = write(tmp_path, "bad", {"documents": [theory, bad]})
    code, out, _ = call("descent-check", path)
    assert code == 1 and out.startswith("DESCENT: invalid")


def test_loop_category_builtin_and_document():
    code, out, _ = call("loop-category", "--group", "S3")
    assert code == 0 and out.startswith("LOOP-CATEGORY: 8 simple objects")
    code, out, _ = call("loop-category", "--group", "z2", str(FIXTURES / "z2.json"), "--json")
    assert code == 0 and json.loads(out)["simple_objects"] == 4


def test_malformed_inputs_exit_two(tmp_path):
    assert call("hopf-galois")[0] == 2
    assert call("no-such-command")[0] == 2
    assert call("loop-category", "--group", "Q8")[0] == 2
    code, _, err = call("validate", write(tmp_path, "x", {"kind": "algebra", "bogus": 1}))
    assert code == 2 and "error" in err
    code, out, _ = call("--json", "validate", write(tmp_path, "y", {"kind": "nothing"}))
    assert code == 2 and json.loads(out)["verdict"] == "ERROR"
    code, _, err = call("aqft-check", write(tmp_path, "ref", {"kind": "aqft", "site": "missing", "constant": CL1}))
    assert code == 2 and "unresolved" in err


def test_output_is_deterministic():
    a = call("--json", "loop-category", "--group", "Z3")[1]
    b = call("--json", "loop-category", "--group", "Z3")[1]
    assert a == b


def test_every_schema_loads():
    for kind in ("orthogonal_category", "algebra", "group", "action", "aqft", "equivariant_aqft", "embedding", "descent_object"):
        assert load_schema(kind)["type"] == "object"
    with pytest.raises(DocumentError):
        validate_document({"kind": "algebra", "builtin": "clifford", "q": "x"})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "aqftlab", "loop-category", "--group", "Z2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("LOOP-CATEGORY: 4")
