import json
from pathlib import Path

from click.testing import CliRunner

from msum.cli import main
from msum.store import ResultStore

GOLDEN = Path(__file__).parent / "golden"


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env)


def golden(name: str) -> str:
    return (GOLDEN / name).read_text().rstrip("\n")


def test_m_basic():
    res = run("m", "4", "7")
    assert res.exit_code == 0
    assert "m=3" in res.output
    assert "4^0+4^1+4^2" in res.output


def test_m_golden():
    res = run("m", "4", "7")
    assert res.output.rstrip("\n") == golden("m_4_7.txt")


def test_m_congruent_one():
    res = run("m", "1", "9")
    assert res.exit_code == 0
    assert "m=9" in res.output and "q=1 mod e" in res.output


def test_m_from_corollary8_list():
    res = run("m", "9", "26")
    assert res.exit_code == 0
    assert "m=6" in res.output


def test_m_usage_error_names_coprimality():
    res = run("m", "2", "4")
    assert res.exit_code == 2
    assert "coprime" in res.output


def test_m_json():
    res = run("m", "4", "7", "--format", "json")
    doc = json.loads(res.output)
    assert doc["m"] == 3 and doc["witness"] == [0, 1, 2]
    assert doc["n"] == 3 and doc["e1"] == 1 and doc["ceil_bound"] == 3


def test_m_grouped_witness_for_long_sums():
    res = run("m", "8", "63")  # m = 14: witness rendered in grouped form
    assert res.exit_code == 0
    assert "m=14" in res.output
    assert "*8^" in res.output


def test_table_csv():
    res = run("table", "--e-max", "12")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "e,q,n,e1,m"
    assert "7,2,3,1,3" in lines  # m(2,7) = 3
    assert "7,4,3,1,3" in lines  # m(4,7) = 3
    # deterministic ordering: e ascending, q ascending within e
    keys = [tuple(map(int, ln.split(",")[:2])) for ln in lines[1:]]
    assert keys == sorted(keys)


def test_table_json_schema():
    res = run("table", "--e-max", "8", "--format", "json")
    doc = json.loads(res.output)
    assert set(doc) == {"rows"}
    for row in doc["rows"]:
        assert set(row) == {"e", "q", "n", "e1", "m"}
        assert all(isinstance(v, int) for v in row.values())


def test_table_out_file(tmp_path):
    out = tmp_path / "grid.csv"
    res = run("table", "--e-max", "6", "--out", str(out))
    assert res.exit_code == 0
    assert out.read_text().startswith("e,q,n,e1,m")


def test_table_q_range_clamped():
    res = run("table", "--e-max", "10", "--q-min", "2", "--q-max", "3")
    qs = {int(ln.split(",")[1]) for ln in res.output.strip().splitlines()[1:]}
    assert qs <= {2, 3}


def test_verify_writes_report_and_exits_zero(tmp_path):
    runner = CliRunner()
    with runner.isolated_filesystem(temp_dir=tmp_path):
        res = runner.invoke(main, ["verify", "corollary8", "--e-max", "30",
                                   "--jobs", "1"])
        assert res.exit_code == 0, res.output
        doc = json.loads(Path("reports/corollary8.json").read_text())
        assert doc["ok"] is True and doc["claim_id"] == "corollary8"


def test_verify_custom_report_path(tmp_path):
    report = tmp_path / "out.json"
    res = run("verify", "lemma3", "--e-max", "40", "--jobs", "1",
              "--report", str(report))
    assert res.exit_code == 0
    assert json.loads(report.read_text())["ok"] is True


def test_verify_unknown_claim_usage_error():
    res = run("verify", "nosuch")
    assert res.exit_code == 2
    assert "unknown claim" in res.output


def test_verify_cap_exceeded_exit_3(tmp_path):
    # k_cap = 1 leaves the (11, 1) tower short of its limit of 5
    res = run("verify", "prop14", "--p-max", "61", "--k-cap", "1",
              "--report", str(tmp_path / "r.json"))
    assert res.exit_code == 3


def test_sequence_golden_text():
    res = run("sequence", "23", "11", "5")
    assert res.exit_code == 0
    assert res.output.rstrip("\n") == golden("sequence_23_11_5.txt")


def test_sequence_golden_csv():
    res = run("sequence", "53", "13", "4", "--format", "csv")
    assert res.output.rstrip("\n") == golden("sequence_53_13_4.csv")


def test_sequence_json():
    res = run("sequence", "23", "11", "3", "--format", "json")
    doc = json.loads(res.output)
    assert doc["m_sequence"] == [3, 5, 9]
    assert doc["levels"][0]["modulus"] == 23


def test_sequence_usage_error():
    res = run("sequence", "23", "7", "3")  # 7 does not divide 22
    assert res.exit_code == 2


def test_exceptions_golden():
    res = run("exceptions", "5")
    assert res.output.rstrip("\n") == golden("exceptions_5.txt")
    res = run("exceptions", "7")
    assert res.output.rstrip("\n") == golden("exceptions_7.txt")


def test_exceptions_json():
    res = run("exceptions", "5", "--format", "json")
    doc = json.loads(res.output)
    assert doc["threshold"] == [5, 1]
    assert doc["entries"] == [[11, 1, 3], [61, 1, 4]]
    assert doc["complete"] is True


def test_claims_listing():
    res = run("claims")
    assert res.exit_code == 0
    assert "corollary8" in res.output and "example16" in res.output


def test_store_env_and_flag_precedence(tmp_path):
    env_store = tmp_path / "env.bin"
    flag_store = tmp_path / "flag.bin"
    res = run("m", "4", "7", env={"MSUM_STORE": str(env_store)})
    assert res.exit_code == 0
    assert env_store.exists()
    before = len(ResultStore(env_store))
    res = run("m", "9", "26", "--store", str(flag_store),
              env={"MSUM_STORE": str(env_store)})
    assert res.exit_code == 0
    assert flag_store.exists()
    assert len(ResultStore(flag_store)) == 1
    assert len(ResultStore(env_store)) == before  # flag beat the environment


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "msum", "m", "4", "7"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "m=3" in out.stdout
