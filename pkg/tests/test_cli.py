import json

from aslab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_ad_basic(capsys):
    code, out, _ = run_cli(
        capsys, "analyze-ad", "--field", "GF(2)(Z)", "--poly", "X^2-X-Z"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    res = doc["result"]
    assert res["c1"] and res["c2"] and res["c3"]
    assert res["eigenvalues"] == ["0", "1"]
    assert res["recovered"]["q"] == "X^2+X+Z"


def test_analyze_ad_matrix_input(capsys):
    mat = json.dumps({"field": "GF(2)", "entries": [["0", "1"], ["1", "1"]]})
    code, out, _ = run_cli(capsys, "analyze-ad", "--field", "GF(2)", "--matrix", mat)
    assert code == 0
    assert json.loads(out)["result"]["c3"] is True


def test_decompose_tensor_oracle(capsys):
    code, out, _ = run_cli(capsys, "decompose-tensor", "--p", "2", "--n", "2", "--m", "3")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["blocks"] == [4, 2] and res["method"] == "oracle"


def test_decompose_tensor_formula(capsys):
    code, out, _ = run_cli(
        capsys, "decompose-tensor", "--p", "2", "--n", "2", "--m", "4",
        "--alpha", "1", "--beta", "1",
    )
    res = json.loads(out)["result"]
    assert res["blocks"] == [4, 4] and res["method"] == "formula"
    assert res["eigenvalue"] == "0"


def test_irreducible_reducible_with_witness(capsys):
    code, out, _ = run_cli(
        capsys, "irreducible", "--K", "GF(2)", "--n", "1", "--e", "1", "--r", "2", "--g", "Z"
    )
    assert code == 0
    res = json.loads(out)["result"]
    assert res["verdict"] == "reducible"
    assert res["witness"] == "X^2+X+Z"
    assert res["oracle_checked"] and res["oracle_agrees"]


def test_irreducible_no_oracle(capsys):
    code, out, _ = run_cli(
        capsys, "irreducible", "--K", "GF(3)", "--n", "1", "--g", "Z", "--no-oracle"
    )
    res = json.loads(out)["result"]
    assert res["verdict"] == "irreducible"
    assert res["oracle_checked"] is False and res["oracle_agrees"] is None


def test_primitive_element_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "primitive-element", "--field", "GF(4)(Z)", "--n", "2",
        "--a", "Z", "--subspace", "1",
    )
    assert code == 0
    res = json.loads(out)["result"]
    assert res["alpha_h"] == "X^2+X"
    assert res["degree_over_f"] == 2 and res["property_p"]


def test_subfield_lattice_json_and_dot(capsys):
    code, out, _ = run_cli(capsys, "subfield-lattice", "--p", "2", "--n", "2", "--a", "Z")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["subspace_count"] == 5  # 1 + 3 + 1
    code, out, _ = run_cli(
        capsys, "--format", "dot", "subfield-lattice", "--p", "2", "--n", "2", "--a", "Z"
    )
    assert code == 0
    assert out.startswith("digraph") and "->" in out


def test_dickson_subcommand(capsys):
    code, out, _ = run_cli(capsys, "dickson", "--p", "3", "--m", "1")
    res = json.loads(out)["result"]
    assert res["coefficients"]["f_0"] == "2*B_1^2"


def test_text_format(capsys):
    code, out, _ = run_cli(
        capsys, "--format", "text", "decompose-tensor", "--p", "2", "--n", "1", "--m", "2"
    )
    assert code == 0
    assert "blocks" in out and "{" not in out.splitlines()[0]


def test_bad_field_exits_2(capsys):
    assert run_cli(capsys, "analyze-ad", "--field", "GF(6)", "--poly", "X")[0] == 2


def test_bad_poly_exits_2(capsys):
    assert run_cli(capsys, "analyze-ad", "--field", "GF(2)", "--poly", "X^2-W")[0] == 2


def test_missing_input_exits_2(capsys):
    assert run_cli(capsys, "analyze-ad", "--field", "GF(2)")[0] == 2


def test_byte_identical_reruns(capsys):
    args = ("analyze-ad", "--field", "GF(2)(Z)", "--poly", "X^2-X-Z", "--seed", "5")
    _, out1, _ = run_cli(capsys, args[0], *args[1:])
    _, out2, _ = run_cli(capsys, args[0], *args[1:])
    assert out1 == out2


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ASLAB_SEED", "42")
    _, out, _ = run_cli(capsys, "decompose-tensor", "--p", "2", "--n", "1", "--m", "2")
    assert json.loads(out)["seed"] == 42
    monkeypatch.setenv("ASLAB_SEED", "notanint")
    assert run_cli(capsys, "decompose-tensor", "--p", "2", "--n", "1", "--m", "2")[0] == 2


def test_grid_quick_suite(capsys):
    code, out, err = run_cli(capsys, "grid", "--suite", "quick")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert "tensor: PASS" in err


def test_grid_unknown_suite(capsys):
    assert run_cli(capsys, "grid", "--suite", "nope")[0] == 2


def test_grid_single_suite(capsys):
    code, out, _ = run_cli(capsys, "grid", "--suite", "similarity")
    assert code == 0
    doc = json.loads(out)
    assert [s["suite"] for s in doc["suites"]] == ["similarity"]


def test_consistency_failure_exits_3(capsys, monkeypatch):
    # force a criterion/oracle disagreement to exercise the exit path
    import aslab.cli as cli_mod

    monkeypatch.setattr(cli_mod, "bivariate_irreducible_oracle", lambda h: False)
    code, _, err = run_cli(
        capsys, "irreducible", "--K", "GF(2)", "--n", "1", "--g", "Z"
    )
    assert code == 3
    assert "consistency" in err
