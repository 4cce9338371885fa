"""CLI: exit-code contract, schema-valid outputs, determinism modulo the
timestamp field, file writing."""

import json
import subprocess
import sys

import pytest

from crossint._doc import read_doc, strip_volatile
from crossint.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify_key_grid_ok(capsys):
    code, out, _ = run(capsys, "certify", "--lemma", "key", "--k", "8..12")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "cert/1"
    assert doc["all_hold"] is True
    assert len(doc["records"]) == sum(k for k in range(8, 13))


def test_certify_single_k_and_csv(capsys):
    code, out, _ = run(capsys, "certify", "--lemma", "key", "--k", "8", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("lemma_id,n,k,t,lhs,rhs,holds,flags")
    assert len(lines) == 1 + 8  # header + one record per n in 17..24


def test_certify_ratio_with_t(capsys):
    code, out, _ = run(capsys, "certify", "--lemma", "ratio", "--t", "3", "--k", "8..10")
    assert code == 0
    assert json.loads(out)["all_hold"] is True


def test_certify_usage_errors(capsys):
    assert run(capsys, "certify", "--lemma", "key", "--k", "8..23", "--n", "50")[0] == 2
    assert run(capsys, "certify", "--lemma", "key", "--k", "banana")[0] == 2
    assert run(capsys, "certify", "--lemma", "key", "--k", "9..8")[0] == 2
    assert run(capsys, "certify", "--lemma", "key", "--k", "8", "--t", "3")[0] == 2
    assert run(capsys, "certify", "--lemma", "fmono", "--k", "8", "--n", "20")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["certify", "--lemma", "bogus", "--k", "8"])
    assert exc.value.code == 2


def test_certify_nonstrict_flags_out_of_range(capsys):
    # far outside its window the key inequality genuinely fails for small k;
    # non-strict mode must compute that honestly and flag every record
    code, out, _ = run(
        capsys, "certify", "--lemma", "key", "--k", "8..12", "--n", "50",
        "--no-strict-paper-ranges",
    )
    doc = json.loads(out)
    assert code == 1 and doc["all_hold"] is False
    assert all("outside_paper_range" in r["flags"] for r in doc["records"])
    assert [r["holds"] for r in doc["records"]] == [False, False, True, True, True]


def test_certify_out_file(tmp_path, capsys):
    path = tmp_path / "key.json"
    code, _, _ = run(capsys, "certify", "--lemma", "key", "--k", "8", "--out", str(path))
    assert code == 0
    assert read_doc(path, expect_schema="cert/1")["all_hold"] is True


def test_hm_command(tmp_path, capsys):
    code, out, _ = run(capsys, "hm", "--n", "7", "--k", "3")
    assert code == 0
    assert "size=13" in out and "expected=13" in out
    path = tmp_path / "hm.json"
    code, out, _ = run(capsys, "hm", "--n", "7", "--k", "3", "--format", "json",
                       "--out", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "family/1" and len(doc["sets"]) == 13
    assert read_doc(path, expect_schema="family/1") == doc
    assert run(capsys, "hm", "--n", "6", "--k", "3")[0] == 2


def test_example1_command(tmp_path, capsys):
    code, out, _ = run(
        capsys, "example1", "--n", "7", "--k", "3", "--f0", "2,3,4", "--g0", "4,5,6"
    )
    assert code == 0
    assert "product=169" in out
    prefix = tmp_path / "pair"
    code, out, _ = run(
        capsys, "example1", "--n", "7", "--k", "3", "--f0", "2,3,4", "--g0", "4,5,6",
        "--format", "json", "--out", str(prefix),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["product"] == 169 and doc["hm_sizes"] is True
    assert len(read_doc(f"{prefix}.f.json", expect_schema="family/1")["sets"]) == 13
    assert len(read_doc(f"{prefix}.g.json", expect_schema="family/1")["sets"]) == 13
    assert run(capsys, "example1", "--n", "7", "--k", "3", "--f0", "2,3,4",
               "--g0", "5,6,7")[0] == 2
    assert run(capsys, "example1", "--n", "7", "--k", "3", "--f0", "x",
               "--g0", "4,5,6")[0] == 2


def test_mixed_command(capsys):
    code, out, _ = run(
        capsys, "mixed", "--n", "9", "--k", "4", "--l", "2",
        "--f0", "2,3,4,5", "--g0", "5,6",
    )
    assert code == 0
    assert "product=185" in out
    assert run(capsys, "mixed", "--n", "8", "--k", "4", "--l", "2",
               "--f0", "2,3,4,5", "--g0", "5,6")[0] == 2


def test_search_command_and_cache(capsys):
    code, out, _ = run(capsys, "search", "--n", "5", "--k", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "search" and doc["best_product"] == 9
    assert doc["optimal"] is True and doc["matches_conjecture"] is True
    code2, out2, _ = run(capsys, "search", "--n", "5", "--k", "2")
    assert code2 == 0
    assert out2 == out  # cache returns the identical document


def test_search_json_deterministic_modulo_timestamp(capsys):
    _, a, _ = run(capsys, "search", "--n", "5", "--k", "2", "--no-cache")
    _, b, _ = run(capsys, "search", "--n", "5", "--k", "2", "--no-cache")
    assert strip_volatile(json.loads(a)) == strip_volatile(json.loads(b))


def test_search_budget_exhaustion_exit_3(capsys):
    code, out, _ = run(
        capsys, "search", "--n", "7", "--k", "3", "--budget", "0.0", "--format", "human"
    )
    assert code == 3
    assert "optimal=False" in out


def test_search_forced_bb_mode_matches_oracle(capsys):
    code, out, _ = run(capsys, "search", "--n", "5", "--k", "2", "--mode", "bb")
    assert code == 0
    assert json.loads(out)["best_product"] == 9


def test_trials_command(capsys):
    code, out, _ = run(
        capsys, "trials", "--prop", "hilton", "--n", "8", "--k", "3",
        "--trials", "200", "--seed", "42",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "trial" and doc["violations"] == 0
    assert doc["seed"] == 42 and doc["trials"] == 200
    assert run(capsys, "trials", "--prop", "fk", "--n", "8", "--k", "3",
               "--u", "2", "--trials", "10")[0] == 2


def test_trials_prop21(capsys):
    code, out, _ = run(capsys, "trials", "--prop", "prop21", "--n", "6", "--k", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "prop21" and doc["violations"] == 0


def test_appendix_scan(capsys):
    code, out, _ = run(capsys, "appendix-scan", "--max-k", "30")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "appendix_scan"
    assert doc["pow57"]["min_k"] == 12
    assert doc["pow57"]["matches_reference"] is False
    assert doc["f_below_one"]["min_k"] == 24


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "crossint", "certify", "--lemma", "key", "--k", "8",
         "--format", "human"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "all_hold=True" in proc.stdout
    usage = subprocess.run(
        [sys.executable, "-m", "crossint", "certify", "--lemma", "key", "--k", "8",
         "--n", "99"],
        capture_output=True,
        text=True,
    )
    assert usage.returncode == 2
