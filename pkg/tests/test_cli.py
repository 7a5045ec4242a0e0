import json
import subprocess
import sys
from pathlib import Path

import pytest

from bozec.cli import main

A2 = {
    "indices": [{"name": "i", "a_ii": 2, "s": 1}, {"name": "j", "a_ii": 2, "s": 1}],
    "a_off_diag": [["i", "j", -1], ["j", "i", -1]],
    "nu": [],
    "max_l": 3,
}
ISO = {
    "indices": [{"name": "i0", "a_ii": 0, "s": 1}],
    "a_off_diag": [],
    "nu": [],
    "max_l": 3,
}
BAD = {
    "indices": [{"name": "x", "a_ii": 1, "s": 1}],
    "a_off_diag": [],
}


@pytest.fixture()
def datum_file(tmp_path):
    def write(data, name="datum.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    return write


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCommands:
    def test_primitive_example(self, datum_file, capsys):
        code, out, _ = run_cli(
            ["--datum", datum_file(ISO), "primitive", "--index", "i0", "--level", "2"], capsys
        )
        assert code == 0
        assert "(-1/2)*e[i0,1]*e[i0,1]" in out
        assert "tau = 1/2" in out

    def test_gram_json(self, datum_file, capsys):
        code, out, _ = run_cli(
            ["--datum", datum_file(ISO), "--format", "json", "gram", "--degree", "i0=2"], capsys
        )
        assert code == 0
        data = json.loads(out)
        assert data["rank"] == 2
        assert data["basis"] == [[["i0", 1], ["i0", 1]], [["i0", 2]]]

    def test_serre_check_vacuous_rank1(self, datum_file, capsys):
        # rank-1 real datum has no serre relations to check: vacuous pass
        rank1 = {"indices": [{"name": "x", "a_ii": 2, "s": 1}], "a_off_diag": [], "nu": []}
        code, out, _ = run_cli(["--datum", datum_file(rank1), "serre-check"], capsys)
        assert code == 0

    def test_serre_check_a2(self, datum_file, capsys):
        code, out, _ = run_cli(["--datum", datum_file(A2), "serre-check"], capsys)
        assert code == 0
        assert "eq-1.1-radical" in out
        assert "FAIL" not in out

    def test_radical_check(self, datum_file, capsys):
        code, out, _ = run_cli(["--datum", datum_file(A2), "radical-check"], capsys)
        assert code == 0
        assert "serre-in-u" in out

    def test_identity_suite_only(self, datum_file, capsys):
        code, out, _ = run_cli(
            ["--datum", datum_file(A2), "identity-suite", "--only", "eq-2.4"], capsys
        )
        assert code == 0
        assert "eq-2.4" in out and "FAIL" not in out

    def test_identity_suite_unknown_name(self, datum_file, capsys):
        code, _, err = run_cli(
            ["--datum", datum_file(A2), "identity-suite", "--only", "nope"], capsys
        )
        assert code == 1
        assert "unknown identity names" in err

    def test_identity_suite_list(self, datum_file, capsys):
        code, out, _ = run_cli(["identity-suite", "--list"], capsys)
        assert code == 0
        assert "thm-3.6" in out
        assert "lemma-2.1" in out

    def test_braid_check(self, datum_file, capsys):
        code, out, _ = run_cli(
            ["--datum", datum_file(A2), "braid-check", "--pair", "i,j", "--target", "module"],
            capsys,
        )
        assert code == 0
        assert "m_ij=3" in out

    def test_module_character(self, datum_file, capsys):
        code, out, _ = run_cli(
            ["--datum", datum_file(A2), "--depth", "3", "module", "--weight", "i=1,j=0"], capsys
        )
        assert code == 0
        data = json.loads(out)
        assert {"weight": {"i": 1, "j": 0}, "dimension": 1} in data

    def test_datum_error_exit_1(self, datum_file, capsys):
        code, _, err = run_cli(["--datum", datum_file(BAD), "serre-check"], capsys)
        assert code == 1
        assert "diagonal-even" in err

    def test_missing_datum_exit_1(self, capsys):
        code, _, err = run_cli(["serre-check"], capsys)
        assert code == 1

    def test_exit_2_on_inconclusive(self, datum_file, capsys):
        # a module too shallow for its weight leaves the braid check with no
        # verifiable vectors
        code, out, _ = run_cli(
            [
                "--datum", datum_file(A2), "--depth", "6",
                "braid-check", "--pair", "i,j", "--target", "module",
                "--weight", "i=3,j=3",
            ],
            capsys,
        )
        assert code == 2
        assert "??" in out


class TestDeterminismAndCache:
    def test_json_reports_byte_identical(self, datum_file, capsys):
        args = [
            "--datum", datum_file(A2), "--format", "json", "--seed", "11",
            "identity-suite", "--only", "eq-2.4", "--only", "prop-1.1-symmetry",
        ]
        _, out1, _ = run_cli(args, capsys)
        _, out2, _ = run_cli(args, capsys)
        assert out1 == out2

    def test_seed_changes_sampled_params(self, datum_file, capsys):
        base = ["--datum", datum_file(A2), "--format", "json"]
        _, out1, _ = run_cli(base + ["--seed", "1", "identity-suite", "--only", "eq-3.4"], capsys)
        _, out2, _ = run_cli(base + ["--seed", "1", "identity-suite", "--only", "eq-3.4"], capsys)
        assert out1 == out2

    def test_cache_transparency(self, datum_file, capsys, tmp_path):
        cache = str(tmp_path / "cache")
        datum = datum_file(ISO)
        args_nocache = ["--datum", datum, "--no-cache", "--format", "json", "gram", "--degree", "i0=3"]
        args_cache = [
            "--datum", datum, "--cache-dir", cache, "--format", "json", "gram", "--degree", "i0=3",
        ]
        _, cold, _ = run_cli(args_cache, capsys)  # populates the cache
        _, warm, _ = run_cli(args_cache, capsys)  # reads it back
        _, off, _ = run_cli(args_nocache, capsys)
        assert cold == warm == off
        assert list(Path(cache).rglob("*.json"))

    def test_cache_inspect_and_clear(self, datum_file, capsys, tmp_path):
        cache = str(tmp_path / "cache")
        datum = datum_file(ISO)
        run_cli(["--datum", datum, "--cache-dir", cache, "gram", "--degree", "i0=2"], capsys)
        code, out, _ = run_cli(["--datum", datum, "--cache-dir", cache, "cache", "inspect"], capsys)
        assert code == 0
        assert "b2" in out
        code, out, _ = run_cli(["--datum", datum, "--cache-dir", cache, "cache", "clear"], capsys)
        assert code == 0
        assert "removed" in out

    def test_cache_env_var(self, datum_file, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("BOZEC_CACHE_DIR", str(tmp_path / "envcache"))
        run_cli(["--datum", datum_file(ISO), "gram", "--degree", "i0=2"], capsys)
        assert list((tmp_path / "envcache").rglob("*.json"))


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        p = tmp_path / "d.json"
        p.write_text(json.dumps(ISO))
        proc = subprocess.run(
            [sys.executable, "-m", "bozec", "--datum", str(p), "primitive", "--index", "i0", "--level", "1"],
            capture_output=True,
            text=True,
            cwd="/root/pkg",
        )
        assert proc.returncode == 0
        assert "tau = 1" in proc.stdout
