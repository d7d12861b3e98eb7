"""Instance-file parsing, report generation, exit codes, determinism."""

import json

import numpy as np
import pytest

from jder.cli import Instance, InstanceError, load_instance, main, run
from jder.solver import DERIVATION, JORDAN, AdditiveMap, check_map

MATRIX_INSTANCE = """
[instance]
format_version = 1

[ring]
kind = matrix
size = 2

[ring.base]
kind = zmod
modulus = 2
"""

CHAIN_INSTANCE = """
[instance]
format_version = 1

[preorder]
labels = a b c
pairs = a<=b b<=c

[ring]
kind = zmod
modulus = 2
"""

ANTICHAIN_INSTANCE = """
[instance]
format_version = 1

[preorder]
labels = a b

[ring]
kind = zmod
modulus = 4
"""

TRIANGULAR_INSTANCE = """
[instance]
format_version = 1

[ring]
kind = triangular

[ring.left]
kind = zmod
modulus = 2

[ring.right]
kind = zmod
modulus = 2

[ring.module]
rank = 1
left_action = 0 0 : 1
right_action = 0 0 : 1
"""

CONSTANTS_INSTANCE = """
[instance]
format_version = 1

[ring]
kind = constants
modulus = 4
rank = 2
constants =
    0 0 : 1 0
    0 1 : 0 1
    1 0 : 0 1
labels = one x
unit = 1 0
"""


def write(tmp_path, text, name="inst.ini"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# -- parsing -------------------------------------------------------------------


def test_load_matrix_instance(tmp_path):
    inst = load_instance(write(tmp_path, MATRIX_INSTANCE))
    assert inst.preorder is None
    assert inst.ring.rank == 4 and inst.ring.modulus == 2
    assert inst.ring.is_unital
    assert inst.task == {}


def test_load_preorder_and_task(tmp_path):
    text = CHAIN_INSTANCE + "\n[task]\ncommand = compare\nseed = 9\ntrials = 17\nbudget = 5\nmoduli = 2 3\nmode = randomized\n"
    inst = load_instance(write(tmp_path, text))
    assert inst.preorder.labels == ("a", "b", "c")
    assert inst.preorder.leq("a", "c")
    assert inst.task == {
        "command": "compare",
        "seed": 9,
        "trials": 17,
        "budget": 5,
        "moduli": (2, 3),
        "mode": "randomized",
    }


def test_load_constants_instance(tmp_path):
    inst = load_instance(write(tmp_path, CONSTANTS_INSTANCE))
    ring = inst.ring
    assert ring.labels == ("one", "x")
    assert ring.is_unital
    x = ring.basis_element(1)
    assert (x * x).coeffs == (0, 0)


def test_load_triangular_instance(tmp_path):
    ring = load_instance(write(tmp_path, TRIANGULAR_INSTANCE)).ring
    assert ring.rank == 3 and ring.is_unital


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        ("missing_instance", "[instance]"),
        ("bad_version", "format_version"),
        ("unknown_key", "unknown key"),
        ("unknown_section", "unknown section"),
        ("bad_pair", "a<=b"),
        ("bad_command", "unknown command"),
        ("bad_mode", "mode"),
        ("nonassociative", "associative"),
        ("missing_ring", "[ring]"),
    ],
)
def test_rejections(tmp_path, mutation, fragment):
    texts = {
        "missing_instance": "[ring]\nkind = zmod\nmodulus = 2\n",
        "bad_version": "[instance]\nformat_version = 7\n\n[ring]\nkind = zmod\nmodulus = 2\n",
        "unknown_key": MATRIX_INSTANCE + "\n[task]\ncolour = red\n",
        "unknown_section": MATRIX_INSTANCE + "\n[mystery]\nx = 1\n",
        "bad_pair": "[instance]\nformat_version = 1\n\n[preorder]\nlabels = a b\npairs = a<b\n\n[ring]\nkind = zmod\nmodulus = 2\n",
        "bad_command": MATRIX_INSTANCE + "\n[task]\ncommand = summon\n",
        "bad_mode": MATRIX_INSTANCE + "\n[task]\nmode = psychic\n",
        "nonassociative": "[instance]\nformat_version = 1\n\n[ring]\nkind = constants\nmodulus = 2\nrank = 2\nconstants =\n    0 0 : 0 1\n    1 0 : 1 0\n",
        "missing_ring": "[instance]\nformat_version = 1\n",
    }
    with pytest.raises(InstanceError) as err:
        load_instance(write(tmp_path, texts[mutation]))
    assert fragment in str(err.value)


def test_nonassociative_error_names_a_triple(tmp_path):
    text = "[instance]\nformat_version = 1\n\n[ring]\nkind = constants\nmodulus = 2\nrank = 2\nconstants =\n    0 0 : 0 1\n    1 0 : 1 0\n"
    with pytest.raises(InstanceError) as err:
        load_instance(write(tmp_path, text))
    assert "b0*b0" in str(err.value)


def test_constants_table_line_validation(tmp_path):
    base = "[instance]\nformat_version = 1\n\n[ring]\nkind = constants\nmodulus = 2\nrank = 2\nconstants =\n"
    for line, fragment in [
        ("    0 0 0 1\n", "missing ':'"),
        ("    0 : 0 1\n", "two indices"),
        ("    0 5 : 0 1\n", "out of range"),
        ("    0 0 : 1\n", "needs 2 entries"),
        ("    0 0 : 0 1\n    0 0 : 1 0\n", "repeats"),
    ]:
        with pytest.raises(InstanceError) as err:
            load_instance(write(tmp_path, base + line))
        assert fragment in str(err.value)


# -- command execution ---------------------------------------------------------


def test_compare_matrix_ring(tmp_path):
    inst = load_instance(write(tmp_path, MATRIX_INSTANCE))
    report = run("compare", inst)
    result = report["result"]
    assert result["verdict"] == "Equal" and result["witness"] is None
    assert result["derivations"]["cardinality"] == 8
    assert result["jordan"]["basis"]["generators"] == result["derivations"]["basis"]["generators"]
    assert report["instance"]["ring"]["rank"] == 4


def test_solver_reports_embed_basis(tmp_path):
    inst = load_instance(write(tmp_path, MATRIX_INSTANCE))
    der = run("solve-der", inst)["result"]
    jder = run("solve-jder", inst)["result"]
    assert der["kind"] == DERIVATION and jder["kind"] == JORDAN
    assert der["basis"]["dim"] == 16 and der["basis"]["modulus"] == 2
    assert der["cardinality"] == 8 == jder["cardinality"]
    assert all(len(g) == 16 for g in der["basis"]["generators"])


def test_fi_build(tmp_path):
    inst = load_instance(write(tmp_path, CHAIN_INSTANCE))
    result = run("fi-build", inst)["result"]
    assert result["rank"] == 6
    assert result["classes"] == [["a"], ["b"], ["c"]]
    assert ["a", "c"] in result["pairs"]
    assert result["isolated_classes"] == []
    assert result["family_conditions_ok"]


def test_verdict_conditional(tmp_path):
    inst = load_instance(write(tmp_path, ANTICHAIN_INSTANCE))
    result = run("verdict", inst)["result"]
    assert result["outcome"] == "ConditionalOnCoefficientRing"
    assert result["isolated_elements"] == ["a", "b"]
    assert all(fact["kind"] == "conditional" for fact in result["facts"])


def test_cross_check_consistency(tmp_path):
    inst = load_instance(write(tmp_path, ANTICHAIN_INSTANCE))
    result = run("cross-check", inst)["result"]
    assert result["consistent"]
    assert result["fi_comparison"]["verdict"] == result["ring_comparison"]["verdict"]
    assert result["fi_rank"] == 2


def test_dprime_and_identities(tmp_path):
    inst = load_instance(write(tmp_path, CHAIN_INSTANCE))
    dprime = run("dprime-check", inst)["result"]
    assert dprime["ok"] and len(dprime["generators"]) >= 1
    identities = run("identities", inst)["result"]
    assert identities["ok"]
    names = {o["name"] for o in identities["generators"][0]["identities"]}
    assert "incidence-block" in names and "herstein" in names


def test_identities_randomized_depends_only_on_seed(tmp_path):
    inst = load_instance(write(tmp_path, CHAIN_INSTANCE))
    a = run("identities", inst, seed=5, trials=20, mode="randomized")
    b = run("identities", inst, seed=5, trials=20, mode="randomized")
    assert a == b


def test_command_must_match_declared(tmp_path):
    text = MATRIX_INSTANCE + "\n[task]\ncommand = compare\n"
    inst = load_instance(write(tmp_path, text))
    with pytest.raises(InstanceError, match="declares command"):
        run("solve-der", inst)


def test_preorder_required_for_structural_commands(tmp_path):
    inst = load_instance(write(tmp_path, MATRIX_INSTANCE))
    for command in ("fi-build", "verdict", "cross-check"):
        with pytest.raises(InstanceError, match="preorder"):
            run(command, inst)


def test_search_small_modulus_finds_nothing(tmp_path):
    inst = load_instance(write(tmp_path, MATRIX_INSTANCE))
    result = run("search", inst, moduli=(2,))["result"]
    assert result["rings_checked"] == 30
    assert not result["found"]
    assert result["note"] == "none found in family"
    assert result["counterexamples"] == []


def test_search_modulus_four_finds_witnessed_counterexamples(tmp_path):
    from jder.rings import build_ring

    inst = load_instance(write(tmp_path, MATRIX_INSTANCE))
    result = run("search", inst, moduli=(4,))["result"]
    assert result["found"] and result["note"] is None
    first = result["counterexamples"][0]
    ring = build_ring(
        first["modulus"], np.array(first["constants"]).reshape((first["rank"],) * 3)
    )
    witness = AdditiveMap.from_array(ring, np.array(first["witness"]))
    assert check_map(ring, witness, JORDAN).ok
    assert not check_map(ring, witness, DERIVATION).ok


# -- entry point ---------------------------------------------------------------


def test_main_writes_deterministic_report(tmp_path, capsys):
    path = write(tmp_path, CHAIN_INSTANCE)
    out1, out2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    assert main(["compare", "--input", path, "--out", out1]) == 0
    assert main(["compare", "--input", path, "--out", out2]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "elapsed_seconds=" in captured.err
    text1 = open(out1, encoding="utf-8").read()
    assert text1 == open(out2, encoding="utf-8").read()
    report = json.loads(text1)
    assert report["command"] == "compare"
    assert report["result"]["verdict"] == "Equal"
    assert report["instance"]["fi_rank"] == 6


def test_main_stdout_report(tmp_path, capsys):
    path = write(tmp_path, MATRIX_INSTANCE)
    assert main(["solve-der", "--input", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["cardinality"] == 8


def test_main_flag_overrides_task_seed(tmp_path, capsys):
    path = write(tmp_path, CHAIN_INSTANCE + "\n[task]\nseed = 4\n")
    assert main(["identities", "--input", path, "--seed", "11"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 11
    assert main(["identities", "--input", path]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 4


def test_main_validation_exit_code(tmp_path, capsys):
    path = write(tmp_path, MATRIX_INSTANCE + "\n[task]\ncolour = red\n")
    assert main(["compare", "--input", path]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "unknown key" in captured.err


def test_main_size_budget_exit_code(tmp_path, capsys):
    path = write(tmp_path, CHAIN_INSTANCE)
    assert main(["cross-check", "--input", path, "--budget", "2"]) == 2
    assert "budget" in capsys.readouterr().err


def test_main_missing_file_exit_code(tmp_path, capsys):
    assert main(["compare", "--input", str(tmp_path / "ghost.ini")]) == 2
    assert "cannot read" in capsys.readouterr().err
