"""End-to-end CLI behaviour: exit codes, file outputs, reproducibility.

Commands run in-process through ``main(argv)`` for speed; one subprocess
test exercises the installed console script.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from netsurv import (
    decompose_trial,
    fixture,
    load_cohort,
    overall_km,
    write_cohort,
    write_life_table,
)
from netsurv.cli import EXIT_DATA, EXIT_OK, EXIT_VALIDATION, main

from conftest import make_flat_table


def run(args, cwd):
    """Invoke a subcommand with its outputs routed to ``cwd``."""
    return main(args[:1] + ["--output-dir", str(cwd)] + args[1:])


@pytest.fixture()
def flat_table_file(tmp_path):
    path = tmp_path / "table.csv"
    write_life_table(make_flat_table(0.025), path)
    return path


@pytest.fixture()
def cohort_file(tmp_path):
    code = run(
        ["simulate", "--rr", "2", "--n", "400", "--seed", "5",
         "--censoring-rate", "0.05", "--out", "cohort.csv"],
        tmp_path,
    )
    assert code == EXIT_OK
    return tmp_path / "cohort.csv"


class TestCurves:
    def test_outputs_and_values(self, tmp_path, capsys):
        code = run(["curves", "--rr", "1", "2", "--grid", "0:10:0.5"], tmp_path)
        assert code == EXIT_OK
        for name in ("curves_rr1.csv", "curves_rr2.csv", "curves_summary.csv"):
            assert (tmp_path / name).exists()
        lines = (tmp_path / "curves_rr2.csv").read_text().splitlines()
        assert lines[0] == "t,S_A,S_AC,S_net,gap_pp"
        row5 = dict(zip(lines[0].split(","), lines[11].split(",")))
        assert row5["t"] == "5"
        assert row5["S_net"] == "0.352993"  # 6 significant digits
        assert row5["S_A"] == "0.399993"
        out = capsys.readouterr().out
        assert "rr=2: max gap" in out

    def test_summary_table(self, tmp_path):
        run(["curves", "--grid", "0:10:0.5"], tmp_path)
        lines = (tmp_path / "curves_summary.csv").read_text().splitlines()
        assert lines[0] == "rr,S_A_5,S_AC_5,S_net_5,gap_pp_5"
        assert len(lines) == 6  # header + default five-rr grid
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == first[3]  # rr=1: S_A == S_net

    def test_json_format(self, tmp_path):
        code = run(["curves", "--rr", "2", "--grid", "0:5:1",
                    "--format", "json"], tmp_path)
        assert code == EXIT_OK
        doc = json.loads((tmp_path / "curves_rr2.json").read_text())
        assert doc["columns"] == ["t", "S_A", "S_AC", "S_net", "gap_pp"]
        assert len(doc["rows"]) == 6
        assert doc["rows"][0][1] == 1.0

    def test_invalid_rr_exits_validation(self, tmp_path):
        assert run(["curves", "--rr", "0.5"], tmp_path) == EXIT_VALIDATION

    def test_bad_grid_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["curves", "--grid", "oops"], tmp_path)
        assert exc.value.code == EXIT_VALIDATION


class TestSimulate:
    def test_reproducible_bytes(self, tmp_path, capsys):
        args = ["simulate", "--rr", "1.5", "--n", "200", "--seed", "7",
                "--out", "a.csv"]
        assert run(args, tmp_path) == EXIT_OK
        args[-1] = "b.csv"
        assert run(args, tmp_path) == EXIT_OK
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert "wrote 200 subjects" in capsys.readouterr().out

    def test_seed_changes_output(self, tmp_path):
        run(["simulate", "--rr", "1.5", "--n", "50", "--seed", "1",
             "--out", "a.csv"], tmp_path)
        run(["simulate", "--rr", "1.5", "--n", "50", "--seed", "2",
             "--out", "b.csv"], tmp_path)
        assert (tmp_path / "a.csv").read_text() != (tmp_path / "b.csv").read_text()

    def test_parallel_same_bytes(self, tmp_path):
        run(["simulate", "--rr", "2", "--n", "500", "--seed", "3",
             "--out", "serial.csv"], tmp_path)
        run(["simulate", "--rr", "2", "--n", "500", "--seed", "3",
             "--parallel", "4", "--out", "par.csv"], tmp_path)
        assert (tmp_path / "serial.csv").read_text() == (tmp_path / "par.csv").read_text()

    def test_round_trip_preserves_cohort(self, cohort_file):
        back = load_cohort(cohort_file)
        assert len(back) == 400
        assert all(r.true_cause is not None for r in back if r.status.is_death)


class TestEstimate:
    def test_outputs(self, tmp_path, cohort_file, flat_table_file, capsys):
        code = run(
            ["estimate", "--cohort", str(cohort_file),
             "--lifetable", str(flat_table_file), "--horizon", "3"],
            tmp_path,
        )
        assert code == EXIT_OK
        for name in ("km_overall.csv", "km_cause_specific.csv",
                     "pohar_perme.csv", "km_disease_attributable.csv"):
            assert (tmp_path / name).exists(), name
        smr_doc = json.loads((tmp_path / "smr.json").read_text())
        assert smr_doc["horizon_years"] == 3
        assert smr_doc["convention"] == "expected_probability"
        assert smr_doc["smr"] > 0
        assert "estimates written" in capsys.readouterr().out

    def test_km_file_matches_library(self, tmp_path, cohort_file, flat_table_file):
        run(["estimate", "--cohort", str(cohort_file),
             "--lifetable", str(flat_table_file)], tmp_path)
        km = overall_km(load_cohort(cohort_file))
        lines = (tmp_path / "km_overall.csv").read_text().splitlines()
        assert lines[0] == "time,survival,at_risk,variance"
        assert len(lines) == 1 + len(km)
        first = lines[1].split(",")
        assert float(first[0]) == pytest.approx(km.times[0], rel=1e-5)
        assert float(first[1]) == pytest.approx(km.values[0], rel=1e-5)

    def test_person_time_flag(self, tmp_path, cohort_file, flat_table_file):
        run(["estimate", "--cohort", str(cohort_file),
             "--lifetable", str(flat_table_file), "--person-time"], tmp_path)
        doc = json.loads((tmp_path / "smr.json").read_text())
        assert doc["convention"] == "person_time"

    def test_unlabeled_cohort_skips_attributable(self, tmp_path, flat_table_file):
        cohort, table, _ = fixture("vacurg")
        cpath = tmp_path / "trial.csv"
        tpath = tmp_path / "trial_table.csv"
        write_cohort(cohort, cpath)
        write_life_table(table, tpath)
        code = run(["estimate", "--cohort", str(cpath),
                    "--lifetable", str(tpath), "--horizon", "3"], tmp_path)
        assert code == EXIT_OK
        assert not (tmp_path / "km_disease_attributable.csv").exists()

    def test_missing_file_exits_data(self, tmp_path, flat_table_file):
        code = run(["estimate", "--cohort", str(tmp_path / "nope.csv"),
                    "--lifetable", str(flat_table_file)], tmp_path)
        assert code == EXIT_DATA

    def test_malformed_cohort_exits_data(self, tmp_path, flat_table_file, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("id,age,sex,year,time,status,arm\nx,60,male,1970,1.0,dead,\n")
        code = run(["estimate", "--cohort", str(bad),
                    "--lifetable", str(flat_table_file)], tmp_path)
        assert code == EXIT_DATA
        assert "unknown status" in capsys.readouterr().err

    def test_coverage_gap_exits_data(self, tmp_path, cohort_file):
        narrow = tmp_path / "narrow.csv"
        write_life_table(make_flat_table(0.025, ages=(60, 62), years=(1970, 1971)), narrow)
        code = run(["estimate", "--cohort", str(cohort_file),
                    "--lifetable", str(narrow)], tmp_path)
        assert code == EXIT_DATA


class TestDecompose:
    def test_fixture_outputs(self, tmp_path, capsys):
        code = run(["decompose", "--fixture", "vacurg"], tmp_path)
        assert code == EXIT_OK
        doc = json.loads((tmp_path / "decomposition.json").read_text())
        cohort, table, horizon = fixture("vacurg")
        report = decompose_trial(
            cohort.arm("placebo"), cohort.arm("estrogen"), table, horizon
        )
        assert doc["component_d_pct"] == pytest.approx(13.5)
        assert doc["component_b_pp"] == pytest.approx(report.component_b_pp)
        assert doc["cause_a_contrast"]["risk_difference_pp"] == pytest.approx(
            report.treated.cause_a_pct - report.reference.cause_a_pct
        )
        text = (tmp_path / "decomposition.txt").read_text()
        assert text.rstrip("\n") == report.to_text()
        assert "13.5%" in capsys.readouterr().out

    def test_own_files_two_arms(self, tmp_path, flat_table_file):
        run(["simulate", "--rr", "1", "--n", "300", "--seed", "11",
             "--max-follow-up", "3", "--arm", "ref", "--out", "ref.csv"], tmp_path)
        run(["simulate", "--rr", "3", "--n", "300", "--seed", "12",
             "--max-follow-up", "3", "--arm", "trt", "--out", "trt.csv"], tmp_path)
        ref = load_cohort(tmp_path / "ref.csv")
        trt = load_cohort(tmp_path / "trt.csv")
        both = tmp_path / "both.csv"
        merged = [r for r in ref] + [
            type(r)(id="t" + r.id, profile=r.profile, time=r.time,
                    status=r.status, true_cause=r.true_cause, arm=r.arm)
            for r in trt
        ]
        from netsurv.cohort import Cohort, Provenance

        write_cohort(Cohort(merged, Provenance("ingested", "merge")), both)
        code = run(["decompose", "--cohort", str(both),
                    "--lifetable", str(flat_table_file),
                    "--reference-arm", "ref", "--treated-arm", "trt",
                    "--horizon", "3"], tmp_path)
        assert code == EXIT_OK
        doc = json.loads((tmp_path / "decomposition.json").read_text())
        assert doc["treated"]["label"] == "treated"
        assert doc["horizon_years"] == 3

    def test_missing_flags_exit_validation(self, tmp_path):
        assert run(["decompose"], tmp_path) == EXIT_VALIDATION

    def test_unknown_fixture_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["decompose", "--fixture", "unknown"], tmp_path)
        assert exc.value.code == EXIT_VALIDATION


class TestAdvise:
    def test_flag_path(self, tmp_path, capsys):
        code = run(
            ["advise", "--removed-d", "yes", "--rr", "2.6",
             "--reliable-cod", "no", "--lifetables-remove-baseline", "no"],
            tmp_path,
        )
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["estimand"] == "net"
        assert doc["components"] == "A+B+C"

    def test_answers_file_and_out(self, tmp_path, capsys):
        answers = tmp_path / "answers.json"
        answers.write_text(json.dumps({
            "removed_general_population_mortality": True,
            "reliable_cause_of_death": True,
            "observed_rr": 3.0,
        }))
        code = run(["advise", "--answers", str(answers),
                    "--out", "verdict.json"], tmp_path)
        assert code == EXIT_OK
        doc = json.loads((tmp_path / "verdict.json").read_text())
        assert doc["estimand"] == "cause_specific"
        assert doc == json.loads(capsys.readouterr().out)

    def test_missing_answers_exit_validation(self, tmp_path):
        assert run(["advise"], tmp_path) == EXIT_VALIDATION
        assert run(["advise", "--removed-d", "yes"], tmp_path) == EXIT_VALIDATION

    def test_yesno_parse_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run(["advise", "--removed-d", "maybe"], tmp_path)
        assert exc.value.code == EXIT_VALIDATION


class TestLifetableCheck:
    def test_complete(self, tmp_path, cohort_file, flat_table_file, capsys):
        code = run(["lifetable-check", "--cohort", str(cohort_file),
                    "--lifetable", str(flat_table_file)], tmp_path)
        assert code == EXIT_OK
        assert "coverage complete" in capsys.readouterr().out

    def test_gaps_listed(self, tmp_path, cohort_file, capsys):
        narrow = tmp_path / "narrow.csv"
        write_life_table(make_flat_table(0.025, ages=(60, 63), years=(1970, 1972)), narrow)
        code = run(["lifetable-check", "--cohort", str(cohort_file),
                    "--lifetable", str(narrow)], tmp_path)
        assert code == EXIT_DATA
        out = capsys.readouterr().out
        assert "missing" in out
        assert "age=64" in out


def test_console_script_smoke(tmp_path):
    proc = subprocess.run(
        ["netsurv", "curves", "--rr", "2", "--grid", "0:2:1",
         "--output-dir", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "curves_rr2.csv").exists()
    assert "max gap" in proc.stdout


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "netsurv.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "netsurv" in proc.stdout
