import json

import pytest

from plbc.cli import main

GOLDEN_CANDIDATES = """\
# schema=plbc.candidates.v1
index,l,r,d0,d1
0,0,100,0,21
1,10,90,3,19
2,20,80,5,17
3,30,70,7,15
4,40,60,9,13
5,50,50,11,11
6,60,40,13,9
7,70,30,15,7
8,80,20,17,5
9,90,10,19,3
10,100,0,21,0
"""


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestCode:
    def test_descriptor(self, capsys):
        rc, out, _ = run_cli(capsys, "code", "--n", "15", "--k", "7", "--l", "4")
        assert rc == 0
        desc = json.loads(out)
        assert desc["schema"] == "plbc.code.v1"
        assert desc["d0"] == 3 and desc["d1"] == 3
        assert desc["g_poly"] == "13"

    def test_n1023_candidate_l50(self, capsys):
        rc, out, _ = run_cli(capsys, "code", "--n", "1023", "--k", "923", "--l", "50")
        assert rc == 0
        desc = json.loads(out)
        assert desc["d0"] == 11 and desc["d1"] == 11

    def test_construction_error_exit3(self, capsys):
        rc, _, err = run_cli(capsys, "code", "--n", "1023", "--k", "923", "--l", "5")
        assert rc == 3
        assert "not a multiple of m=10" in err

    def test_usage_error_exit2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["code", "--n", "15", "--k", "7"])  # --l is required
        assert exc.value.code == 2


class TestCandidates:
    def test_golden_csv(self, capsys):
        rc, out, _ = run_cli(
            capsys, "candidates", "--n", "1023", "--k", "923", "--m", "10"
        )
        assert rc == 0
        assert out == GOLDEN_CANDIDATES

    def test_small_family(self, capsys):
        rc, out, _ = run_cli(capsys, "candidates", "--n", "15", "--k", "7")
        assert rc == 0
        rows = out.strip().splitlines()[2:]
        assert len(rows) == 3

    def test_indivisible_exit2(self, capsys):
        rc, _, err = run_cli(capsys, "candidates", "--n", "1023", "--k", "920")
        assert rc == 2
        assert "not a multiple" in err


class TestCapacity:
    def test_preset_rows(self, capsys):
        rc, out, _ = run_cli(capsys, "capacity", "--preset", "table2")
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "# schema=plbc.capacity.v1"
        assert lines[1] == "channel_id,epsilon,p,p_tilde,c_min,c_max"
        assert len(lines) == 9
        for line in lines[2:]:
            c_min = float(line.split(",")[4])
            assert abs(c_min - 0.9624) < 5e-4

    def test_channel4_cmax(self, capsys):
        rc, out, _ = run_cli(capsys, "capacity", "--epsilon", "4e-3", "--p", "2e-3")
        row = out.strip().splitlines()[2].split(",")
        assert abs(float(row[5]) - 0.9753) < 5e-4

    def test_zero_channel(self, capsys):
        rc, out, _ = run_cli(capsys, "capacity", "--epsilon", "0", "--p", "0")
        row = out.strip().splitlines()[2].split(",")
        assert float(row[4]) == 1.0 and float(row[5]) == 1.0

    def test_preset_and_explicit_conflict(self, capsys):
        rc, _, err = run_cli(
            capsys, "capacity", "--preset", "table2", "--epsilon", "0.1", "--p", "0"
        )
        assert rc == 2

    def test_missing_channel_exit2(self, capsys):
        rc, _, err = run_cli(capsys, "capacity")
        assert rc == 2


class TestSimulate:
    def test_clean_channel(self, capsys):
        rc, out, _ = run_cli(
            capsys, "simulate", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0", "--p", "0", "--trials", "2048", "--seed", "1",
            "--threads", "1",
        )
        assert rc == 0
        row = out.strip().splitlines()[2].split(",")
        assert row[6] == "0" and row[7] == "0"

    def test_needs_trials(self, capsys):
        rc, _, err = run_cli(
            capsys, "simulate", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0", "--p", "0",
        )
        assert rc == 2
        assert "--trials" in err

    def test_same_seed_identical_output(self, capsys, tmp_path):
        argv = [
            "simulate", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0.2", "--p", "0.02", "--trials", "2048",
            "--seed", "7", "--threads", "1",
        ]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(argv + ["--out", str(f1)]) == 0
        assert main(argv + ["--out", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_json_format(self, capsys):
        rc, out, _ = run_cli(
            capsys, "simulate", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0.1", "--p", "0", "--trials", "1024", "--seed", "2",
            "--threads", "1", "--format", "json",
        )
        obj = json.loads(out)
        assert obj["schema"] == "plbc.simulate.v1"
        assert obj["rows"][0]["trials"] == 1024


class TestBound:
    def test_sweep_shape(self, capsys):
        rc, out, _ = run_cli(capsys, "bound", "--preset", "table2")
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "# schema=plbc.bound.v1"
        assert len(lines) == 2 + 11 * 7

    def test_single_candidate(self, capsys):
        rc, out, _ = run_cli(
            capsys, "bound", "--l", "20", "--epsilon", "4e-3", "--p", "2e-3"
        )
        lines = out.strip().splitlines()
        assert len(lines) == 3
        row = lines[2].split(",")
        assert row[7] == "binomial-approx"
        assert 0 < float(row[10]) < 1

    def test_aw_method_flag(self, capsys):
        rc, out, _ = run_cli(
            capsys, "bound", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0.05", "--p", "0.01", "--aw", "exact",
        )
        row = out.strip().splitlines()[2].split(",")
        assert row[7] == "exact-enumeration"

    def test_infeasible_aw_exit2(self, capsys):
        rc, _, err = run_cli(
            capsys, "bound", "--l", "30", "--epsilon", "4e-3", "--p", "2e-3",
            "--aw", "exact",
        )
        assert rc == 2


class TestAllocate:
    def test_boundary_eps_zero(self, capsys):
        rc, out, _ = run_cli(
            capsys, "allocate", "--n", "15", "--k", "7",
            "--epsilon", "0", "--p", "0.01",
        )
        assert rc == 0
        obj = json.loads(out)
        assert obj["reports"][0]["best_l"] == 0

    def test_boundary_p_zero(self, capsys):
        rc, out, _ = run_cli(
            capsys, "allocate", "--n", "15", "--k", "7",
            "--epsilon", "0.3", "--p", "0",
        )
        obj = json.loads(out)
        assert obj["reports"][0]["best_l"] == 8
        assert obj["reports"][0]["best_r"] == 0

    def test_report_schema(self, capsys):
        rc, out, _ = run_cli(
            capsys, "allocate", "--n", "15", "--k", "7",
            "--epsilon", "0.05", "--p", "0.01",
        )
        rep = json.loads(out)["reports"][0]
        assert set(rep) == {
            "channel_id", "channel", "method", "candidates", "best_l", "best_r"
        }
        assert rep["method"] == "bound"
        assert len(rep["candidates"]) == 3

    def test_csv_format(self, capsys):
        rc, out, _ = run_cli(
            capsys, "allocate", "--n", "15", "--k", "7",
            "--epsilon", "0.05", "--p", "0.01", "--format", "csv",
        )
        lines = out.strip().splitlines()
        assert lines[0] == "# schema=plbc.allocate.v1"
        assert len(lines) == 5
        assert sum(line.endswith(",1") for line in lines[2:]) == 1

    def test_simulation_needs_trials(self, capsys):
        rc, _, err = run_cli(
            capsys, "allocate", "--n", "15", "--k", "7",
            "--epsilon", "0.1", "--p", "0.01", "--method", "simulation",
        )
        assert rc == 2


class TestThreadsEnv:
    def test_env_override_invalid(self, capsys, monkeypatch):
        monkeypatch.setenv("PLBC_THREADS", "lots")
        rc, _, err = run_cli(
            capsys, "simulate", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0", "--p", "0", "--trials", "64",
        )
        assert rc == 2
        assert "PLBC_THREADS" in err

    def test_env_override_used(self, capsys, monkeypatch):
        monkeypatch.setenv("PLBC_THREADS", "1")
        rc, out, _ = run_cli(
            capsys, "simulate", "--n", "15", "--k", "7", "--l", "4",
            "--epsilon", "0", "--p", "0", "--trials", "64",
        )
        assert rc == 0
