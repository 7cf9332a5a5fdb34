import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clonekit import GeneratorSet, InputError, QSet, characteristic, uv_pair
from clonekit.catalog import catalog_entry
from clonekit.cli import main
from clonekit.io import dumps, from_json, load_generators, loads, to_json
from clonekit.verify import verify_decomposition_theorem

from conftest import EVEN, MAJ, XOR


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    u, v = uv_pair()
    return {
        "uv": write(tmp_path / "uv.json", {"k": 3, "functions": [to_json(u), to_json(v)], "symmetrize": True}),
        "cons2": write(tmp_path / "cons2.json", {"k": 3, "families": [{"kind": "conservative", "n": 2}]}),
        "maj": write(tmp_path / "maj.json", to_json(MAJ)),
        "even": write(tmp_path / "even.json", to_json(EVEN)),
        "maj_gens": write(tmp_path / "maj_gens.json", {"k": 2, "functions": [to_json(MAJ)]}),
        "xor_gens": write(tmp_path / "xor_gens.json", {"k": 2, "functions": [to_json(XOR)]}),
        "pairs": write(tmp_path / "pairs.json", {"type": "subsets", "m": 3, "sets": [[0, 1], [0, 2], [1, 2]]}),
        "dir": tmp_path,
    }


@pytest.mark.parametrize(
    "obj",
    [
        MAJ,
        EVEN,
        catalog_entry("3/uv").gens,
        catalog_entry("3/L3").gens,
    ],
)
def test_round_trip(obj):
    assert from_json(loads(dumps(obj))) == obj


def test_characteristic_round_trip():
    chi = characteristic(catalog_entry("3/uv").gens)
    again = from_json(loads(dumps(chi)))
    assert again == chi
    assert dumps(again) == dumps(chi)


def test_report_round_trip():
    report = verify_decomposition_theorem("d2", catalog_entry("3/cons2").gens, 2)
    assert dumps(from_json(loads(dumps(report)))) == dumps(report)


@given(st.integers(1, 3).flatmap(lambda m: st.lists(st.tuples(*[st.integers(0, 2)] * m), min_size=1).map(lambda r: QSet.of(3, m, r))))
def test_qset_round_trip(H):
    assert from_json(loads(dumps(H))) == H


def test_generator_loading():
    assert load_generators("catalog:3/uv") == catalog_entry("3/uv").gens
    assert load_generators({"k": 2}) == GeneratorSet(2)
    with pytest.raises(InputError):
        load_generators("3/uv")
    with pytest.raises(InputError):
        load_generators({"k": 2, "families": [{"kind": "nonsense"}]})
    with pytest.raises(InputError):
        from_json({"type": "mystery"})
    with pytest.raises(InputError):
        loads("{not json")


def test_cli_slice(capsys, files):
    out = files["dir"] / "slice.json"
    code, _, _ = run(capsys, "clone", "slice", "--gens", files["uv"], "--arity", "2", "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert data["type"] == "function_set" and len(data["arities"]["2"]) == 4


def test_cli_r_and_function(capsys, files):
    code, out, _ = run(capsys, "clone", "r", "--gens", "catalog:3/L3")
    assert code == 0 and json.loads(out) == {"type": "arity", "value": 3, "exact": True}
    code, out, _ = run(capsys, "fn", "--fn", files["maj"])
    assert code == 0 and json.loads(out)["is_d_function"]


def test_cli_invariance_exit_codes(capsys, files):
    code, out, _ = run(capsys, "galois", "inv", "--gens", files["xor_gens"], "--set", files["even"])
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "galois", "inv", "--gens", files["maj_gens"], "--set", files["even"])
    assert code == 1
    assert len(json.loads(out)["closure"]["rows"]) == 8


def test_cli_decomposition(capsys, files):
    code, out, _ = run(capsys, "decomp", "check", "--set", files["even"], "--family", files["pairs"])
    assert code == 1 and len(json.loads(out)["intersection"]["rows"]) == 8
    code, out, _ = run(capsys, "decomp", "families", "--set", files["even"], "--n", "3")
    assert code == 0 and json.loads(out)["small_columns"] == [0, 1, 2]


def test_cli_conditions_and_classes(capsys, files):
    assert run(capsys, "delta", "--gens", files["cons2"], "--kind", "2")[0] == 0
    assert run(capsys, "delta", "--gens", files["uv"], "--kind", "2")[0] == 1
    assert run(capsys, "delta", "--gens", files["uv"], "--kind", "s")[0] == 2
    code, out, _ = run(capsys, "post", "identify", "--gens", files["maj_gens"])
    assert code == 0 and json.loads(out)["name"] == "D2"


def test_cli_characteristic(capsys, files):
    a, b = files["dir"] / "a.json", files["dir"] / "b.json"
    assert run(capsys, "chi", "compute", "--gens", files["uv"], "--out", str(a))[0] == 0
    assert run(capsys, "chi", "compute", "--gens", "catalog:3/cons2", "--out", str(b))[0] == 0
    code, out, _ = run(capsys, "chi", "compare", "--a", str(a), "--b", str(a))
    assert code == 0 and json.loads(out)["equal"]
    code, out, _ = run(capsys, "chi", "compare", "--a", str(a), "--b", str(b))
    assert code == 1 and "R_2" in json.loads(out)["differences"]
    code, out, _ = run(capsys, "chi", "classify", "--gens", files["uv"])
    assert json.loads(out)["case"] == 6


def test_cli_verify_theorem(capsys, files):
    code, out, _ = run(capsys, "verify", "theorem", "--which", "d2", "--gens", files["cons2"], "--m", "2", "--exhaustive")
    report = json.loads(out)
    assert code == 0 and report["instances"] == 511 and report["passed"]


def test_cli_premise_failure_is_an_input_error(capsys, files):
    code, _, err = run(capsys, "verify", "theorem", "--which", "d2", "--gens", files["uv"], "--m", "2", "--exhaustive")
    assert code == 2 and "error" in err


def test_cli_sampled_needs_seed(capsys, files):
    code, _, err = run(capsys, "verify", "theorem", "--which", "d2", "--gens", files["cons2"], "--m", "3")
    assert code == 2 and "--seed" in err


def test_cli_bad_input(capsys, files):
    assert run(capsys, "clone", "slice", "--gens", "missing.json", "--arity", "2")[0] == 2
    assert run(capsys, "clone", "slice", "--gens", files["uv"])[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "clone", "slice", "--gens", files["cons2"], "--arity", "3", "--cap", "100")[0] == 2


def test_cli_output_is_deterministic(capsys, files):
    argv = ["verify", "theorem", "--which", "s3", "--gens", "catalog:3/L3", "--m", "3", "--samples", "50", "--seed", "11"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)["seed"] == 11


def test_cli_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--k", "3")
    names = {e["name"]: e["expected_case"] for e in json.loads(out)}
    assert code == 0 and names["uv"] == 6 and names["L3"] == 3


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "clonekit.cli", "clone", "r", "--gens", "catalog:3/uv"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 2
    proc = subprocess.run([sys.executable, "-m", "clonekit.cli", "fn", "--fn", "nowhere.json"], capture_output=True, text=True)
    assert proc.returncode == 2
