import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pretense.cli import ExperimentConfig, main, parse_checkpoints, parse_spec_arg


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "pretense.cli", *args],
        capture_output=True,
        text=True,
    )


def test_sums_documented_example():
    r = run_cli("sums", "--spec", "one", "--N", "100", "--checkpoints", "10,100")
    assert r.returncode == 0
    assert r.stdout.splitlines() == [
        "n_or_x,re,im,abs",
        "10,10,0,10",
        "100,100,0,100",
    ]


def test_exit_code_usage_error():
    assert run_cli().returncode == 2
    assert run_cli("no-such-command").returncode == 2
    assert run_cli("eval", "--N", "10").returncode == 2  # missing --spec


def test_exit_code_computation_error():
    r = run_cli("eval", "--spec", "char:4:7", "--N", "10")
    assert r.returncode == 1
    assert "error:" in r.stderr
    r = run_cli("distance", "--kind", "beta", "--spec", "one", "--spec2", "one",
                "--beta", "2.0", "--N", "100")
    assert r.returncode == 1


def test_eval_writes_table(tmp_path):
    out = tmp_path / "mu.csv"
    r = run_cli("eval", "--spec", "moebius", "--N", "30", "--out", str(out))
    assert r.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n_or_x,re,im,abs"
    assert lines[1] == "1,1,0,1"
    assert lines[30] == "30,-1,0,1"


def test_sieve_summary():
    r = run_cli("sieve", "--N", "1000")
    assert json.loads(r.stdout) == {"count": 168, "largest": 997, "limit": 1000}


def test_quotient_and_inverse_json():
    r = run_cli("quotient", "--spec", "one", "--spec2", "delta",
                "--primes", "2,3", "--k", "4")
    obj = json.loads(r.stdout)
    assert obj[0]["prime"] == 2
    # one * h = delta means h is moebius: coeffs 1, -1, 0, 0, 0
    assert obj[0]["coeffs"][:3] == [[1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]]

    r = run_cli("inverse", "--spec", "one", "--primes", "2", "--k", "3")
    obj = json.loads(r.stdout)
    assert obj[0]["coeffs"][:2] == [[1.0, 0.0], [-1.0, 0.0]]


def test_distance_report_json():
    r = run_cli("distance", "--spec", "one", "--spec2", "liouville",
                "--N", "10000", "--kind", "beta", "--beta", "0.5")
    obj = json.loads(r.stdout)
    assert obj["kind"] == "beta"
    assert obj["params"]["beta"] == 0.5


def test_construct_descriptor_pipeline(tmp_path):
    desc = tmp_path / "spec.json"
    r = run_cli("construct", "sparse-dyadic", "--spec", "char:4:1",
                "--intervals", "3,4", "--out", str(desc))
    assert r.returncode == 0
    obj = json.loads(desc.read_text())
    assert obj["construction"] == "sparse-dyadic"
    r = run_cli("sums", "--spec", str(desc), "--N", "1000",
                "--checkpoints", "10,1000")
    assert r.returncode == 0


def test_growth_fit_reads_sums_csv(tmp_path):
    csvp = tmp_path / "s.csv"
    run_cli("sums", "--spec", "one", "--N", "100000",
            "--checkpoints", "1e3:1e5", "--out", str(csvp))
    r = run_cli("growth-fit", str(csvp))
    fit = json.loads(r.stdout)
    assert fit["exponent"] == pytest.approx(1.0, abs=1e-3)


def test_lseries_value():
    r = run_cli("lseries", "--spec", "one", "--s", "2", "--N", "100000")
    obj = json.loads(r.stdout)
    assert obj["value"][0] == pytest.approx(1.6449340668482264, abs=1e-5)
    assert obj["tail_bound"] is not None


def test_hseries_delta_quotient():
    r = run_cli("hseries", "--spec", "one", "--spec2", "delta", "--sigma", "1.0")
    obj = json.loads(r.stdout)
    assert obj["kind"] == "H-sigma"
    assert obj["partials"][-1] == pytest.approx(1.5 + 4.0 / 3.0)


def test_degree_subcommand():
    r = run_cli("degree", "--constituents", "one,one", "--p", "3", "--k", "5")
    obj = json.loads(r.stdout)
    assert obj["degree"] == 2
    assert obj["coeffs"]["alpha"] == [[1.0, 0.0], [2.0, 0.0], [1.0, 0.0]]
    assert max(obj["residuals"]) <= 1e-12


def test_xi_point_lookup():
    r = run_cli("xi", "--spec", "one", "--N", "10000", "--alpha", "1",
                "--x", "123.5", "--mode", "exact")
    obj = json.loads(r.stdout)
    assert obj["value"][0] == pytest.approx(123 / 123.5)


def test_verify_table_and_artifact(tmp_path):
    r = run_cli("verify", "remark1", "--seed", "5", "--out", str(tmp_path))
    assert r.returncode == 0
    assert "PASS  remark1:h-powers-of-two" in r.stdout
    obj = json.loads((tmp_path / "remark1.json").read_text())
    assert obj["all_passed"] is True and obj["seed"] == 5


def test_verify_unknown_bundle_is_usage_error():
    assert run_cli("verify", "thm9").returncode == 2


def test_bundle_json_accepts_numpy_bool_rows():
    # rows built from numpy-scalar comparisons carry np.bool_, which
    # json.dumps rejects unless the serializer coerces it
    from pretense.verify import CheckResult, bundle_json

    row = CheckResult(bundle="b", name="n", passed=np.bool_(True), detail="d")
    obj = json.loads(bundle_json("b", 1, [row]))
    assert obj["results"][0]["passed"] is True


def test_verify_thread_count_does_not_change_output(tmp_path):
    a = run_cli("verify", "remark1", "--seed", "11", "--threads", "1",
                "--out", str(tmp_path / "a"))
    b = run_cli("verify", "remark1", "--seed", "11", "--threads", "4",
                "--out", str(tmp_path / "b"))
    assert a.stdout == b.stdout
    assert (tmp_path / "a" / "remark1.json").read_bytes() == \
           (tmp_path / "b" / "remark1.json").read_bytes()


# ---------------------------------------------------------------------------
# spec/checkpoint argument parsing (in process)

def test_parse_spec_arg_shorthands():
    assert parse_spec_arg("one").name == "one"
    chi = parse_spec_arg("char:4:1")
    assert chi.value(3, 1) == -1.0
    k = parse_spec_arg("kron:-4")
    assert k.value(3, 1) == -1.0
    r = parse_spec_arg("random:42")
    assert r.params["seed"] == 42


def test_parse_spec_arg_inline_json():
    spec = parse_spec_arg(json.dumps({"construction": "character", "q": 4, "index": 1}))
    assert spec.value(5, 1) == 1.0


def test_parse_spec_arg_rejects_garbage():
    from pretense.errors import InvalidArgumentError

    with pytest.raises(InvalidArgumentError):
        parse_spec_arg("zeta-of-everything")


def test_parse_checkpoints_forms():
    import numpy as np

    assert list(parse_checkpoints("10,20,30", 100)) == [10.0, 20.0, 30.0]
    g = parse_checkpoints("10:1000", 10**6)
    assert g[0] == 10 and g[-1] <= 1000
    d = parse_checkpoints(None, 50)
    assert d[0] >= 1 and d[-1] <= 50


# ---------------------------------------------------------------------------
# config files

config_key = st.text(
    alphabet=st.sampled_from("abcdefghijklmnopqrstuvwxyz_.0123456789"),
    min_size=1, max_size=12,
).filter(lambda s: not s.startswith("."))
config_value = st.text(
    alphabet=st.characters(blacklist_characters="\n\r\x00%=[]#;",
                           blacklist_categories=("Cs",)),
    min_size=0, max_size=30,
).map(str.strip)


@given(st.dictionaries(config_key, config_value, max_size=8))
@settings(max_examples=50, deadline=None)
def test_config_roundtrip_lossless(args):
    cfg = ExperimentConfig({"args": args} if args else {})
    assert ExperimentConfig.loads(cfg.dumps()) == cfg


def test_config_supplies_defaults(tmp_path):
    cfg = ExperimentConfig({
        "args": {"N": "100", "checkpoints": "10,100"},
        "spec": {"construction": "character", "q": "4", "index": "1"},
    })
    path = tmp_path / "exp.cfg"
    cfg.dump(path)
    r = run_cli("sums", "--config", str(path))
    assert r.returncode == 0
    rows = r.stdout.splitlines()[1:]
    assert rows[0].startswith("10,") and rows[1].startswith("100,")


def test_config_explicit_flag_wins(tmp_path):
    cfg = ExperimentConfig({"args": {"N": "100", "checkpoints": "10,100"},
                            "spec": {"construction": "one"}})
    path = tmp_path / "exp.cfg"
    cfg.dump(path)
    r = run_cli("sums", "--config", str(path), "--checkpoints", "25,100")
    assert r.stdout.splitlines()[1] == "25,25,0,25"


def test_config_nested_descriptor(tmp_path):
    cfg = ExperimentConfig({
        "args": {"N": "1000", "checkpoints": "1000"},
        "spec": {
            "construction": "squarefree-restrict",
            "base.construction": "character",
            "base.q": "4",
            "base.index": "1",
        },
    })
    path = tmp_path / "exp.cfg"
    cfg.dump(path)
    r = run_cli("sums", "--config", str(path))
    assert r.returncode == 0


def test_main_in_process_exit_codes(capsys):
    assert main(["sieve", "--N", "50"]) == 0
    capsys.readouterr()
    assert main(["eval", "--spec", "char:4:9", "--N", "10"]) == 1
