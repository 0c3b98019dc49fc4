"""End-to-end CLI tests (in-process via main(argv), plus one subprocess smoke)."""

import json
import subprocess
import sys

import pytest

from collider_lab.cli import main

M_POINT = [
    "--set", "structure=m", "--set", "a=0.2", "--set", "b=0.2",
    "--set", "c=0.2", "--set", "d=0.2", "--set", "rho=0",
]

BINARY_POINT = [
    "--set", "structure=binary_m", "--set", "a=0.3", "--set", "b=0.25",
    "--set", "c=0.2", "--set", "d=0.35", "--set", "rho=0.3", "--set", "alpha=0.5",
]


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- bias / ratio -----------------------------------------------------------


def test_bias_csv_exact_bytes(capsys):
    code, out, err = run(capsys, ["bias", *M_POINT, "--format", "csv"])
    assert code == 0 and err == ""
    assert out == (
        "estimator,method,value\n"
        "unadjusted,closed_form,0\n"
        "adjusted,closed_form,-0.00160256410256\n"
    )


def test_bias_text_default_format(capsys):
    code, out, _ = run(capsys, ["bias", *M_POINT, "--estimator", "adjusted"])
    assert code == 0
    assert out == "estimator=adjusted method=closed_form value=-0.00160256410256\n"


def test_bias_json_lines_parse_and_cross_engine(capsys):
    code, out, _ = run(
        capsys,
        ["bias", *M_POINT, "--engine", "both", "--estimator", "adjusted",
         "--format", "json-lines"],
    )
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["method"] for r in records] == ["closed_form", "sem_engine"]
    assert records[0]["value"] == records[1]["value"] == -0.00160256410256


def test_paper_literal_flag_changes_binary_m_adjusted(capsys):
    _, reference, _ = run(capsys, ["bias", *BINARY_POINT, "--estimator", "adjusted", "--format", "csv"])
    _, literal, _ = run(
        capsys,
        ["bias", *BINARY_POINT, "--estimator", "adjusted", "--format", "csv", "--paper-literal"],
    )
    assert reference.splitlines()[1] == "adjusted,closed_form,0.0373987372422"
    assert literal.splitlines()[1] == "adjusted,closed_form,0.124662457474"


def test_ratio_text(capsys):
    argv = ["ratio", *M_POINT[:-2], "--set", "rho=0.2"]
    code, out, _ = run(capsys, argv)
    assert code == 0
    assert out == "ratio=0.71364423632\n"


def test_ratio_undefined_at_rho_zero_exits_3(capsys):
    code, out, err = run(capsys, ["ratio", *M_POINT])
    assert code == 3 and out == ""
    assert err.startswith("error:") and "undefined" in err


# --- scenario loading ---------------------------------------------------------


def test_scenario_file_and_inline_override(capsys, tmp_path):
    path = tmp_path / "point.scenario"
    path.write_text("structure = m\na = 0.1\nb = 0.2\nc = 0.2\nd = 0.2\nrho = 0\n")
    code, out, _ = run(
        capsys, ["bias", "--scenario", str(path), "--estimator", "adjusted", "--format", "csv"]
    )
    assert code == 0
    assert out.splitlines()[1] == "adjusted,closed_form,-0.000800320128051"
    # inline --set wins over the file
    code, out, _ = run(
        capsys,
        ["bias", "--scenario", str(path), "--set", "a=0.2",
         "--estimator", "adjusted", "--format", "csv"],
    )
    assert code == 0
    assert out.splitlines()[1] == "adjusted,closed_form,-0.00160256410256"


def test_missing_scenario_exits_2(capsys):
    code, out, err = run(capsys, ["bias"])
    assert code == 2 and out == ""
    assert "no scenario given" in err


def test_unknown_scenario_key_exits_2(capsys):
    code, _, err = run(capsys, ["bias", "--set", "structure=m", "--set", "q=1"])
    assert code == 2
    assert err == "error: unknown key 'q' for structure 'm'\n"


def test_invalid_scenario_value_exits_2_with_constraint(capsys):
    code, _, err = run(
        capsys,
        ["bias", "--set", "structure=m", "--set", "a=1.5", "--set", "b=0",
         "--set", "c=0", "--set", "d=0", "--set", "rho=0"],
    )
    assert code == 2
    assert "a^2 <= 1" in err


def test_malformed_set_exits_2(capsys):
    code, _, err = run(capsys, ["bias", "--set", "structure=m", "--set", "a"])
    assert code == 2
    assert "--set expects key=value" in err


# --- simulate -------------------------------------------------------------------


def test_simulate_is_deterministic_and_echoes_config(capsys):
    argv = ["simulate", *M_POINT[:-2], "--set", "rho=0.2", "--estimator", "adjusted",
            "--n", "20000", "--seed", "7", "--format", "csv"]
    code, first, _ = run(capsys, argv)
    assert code == 0
    code, second, _ = run(capsys, argv)
    assert first == second
    header, row = first.splitlines()
    assert header == "estimator,bias_estimate,std_error,n,seed"
    fields = row.split(",")
    assert fields[0] == "adjusted" and fields[3] == "20000" and fields[4] == "7"
    assert abs(float(fields[1])) < 5 * float(fields[2]) + 0.01


def test_simulate_no_intercept_runs(capsys):
    code, out, _ = run(
        capsys,
        ["simulate", *M_POINT, "--estimator", "unadjusted", "--n", "5000",
         "--no-intercept", "--format", "csv"],
    )
    assert code == 0
    assert out.splitlines()[1].split(",")[0] == "unadjusted"


# --- sweep / region ---------------------------------------------------------------


def test_sweep_writes_csv_and_prints_path(capsys, tmp_path):
    out_path = tmp_path / "line.csv"
    code, out, _ = run(
        capsys,
        ["sweep", "--family", "m", "--axis", "a:-0.5:0.5:5",
         "--tie", "b=a", "--tie", "c=a", "--tie", "d=a",
         "--fix", "rho=0.2", "--out", str(out_path)],
    )
    assert code == 0
    assert out == f"{out_path}\n"
    lines = out_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "a,feasible,warning,bias_unadj,bias_adj,ratio"
    assert len(lines) == 6


def test_sweep_tie_with_multiplier(capsys, tmp_path):
    out_path = tmp_path / "scaled.csv"
    code, _, _ = run(
        capsys,
        ["sweep", "--family", "m", "--axis", "a:0.1:0.5:3",
         "--tie", "b=a", "--tie", "c=0.5*a", "--tie", "d=a",
         "--fix", "rho=0.2", "--out", str(out_path)],
    )
    assert code == 0
    assert len(out_path.read_text(encoding="utf-8").splitlines()) == 4


def test_sweep_to_missing_directory_exits_4(capsys):
    code, _, err = run(
        capsys,
        ["sweep", "--family", "m", "--axis", "a:-0.5:0.5:3",
         "--tie", "b=a", "--tie", "c=a", "--tie", "d=a",
         "--fix", "rho=0", "--out", "/nonexistent_dir_xyz/out.csv"],
    )
    assert code == 4
    assert err.startswith("error:")


def test_region_csv_exact(capsys):
    code, out, _ = run(
        capsys,
        ["region", "--family", "m", "--axis", "a:-0.5:0.5:11",
         "--tie", "b=a", "--tie", "c=a", "--tie", "d=a",
         "--fix", "rho=0.2", "--predicate", "adjusted_smaller", "--format", "csv"],
    )
    assert code == 0
    assert out == (
        "predicate,fraction,n_feasible,n_hits\n"
        "adjusted_smaller,0.909090909091,11,10\n"
    )


def test_region_value_predicates(capsys):
    base = ["region", "--family", "m", "--axis", "a:-0.5:0.5:11",
            "--tie", "b=a", "--tie", "c=a", "--tie", "d=a", "--fix", "rho=0"]
    code, out, _ = run(capsys, [*base, "--predicate", "abs_below=0.01", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[1].startswith("abs_below(0.01),")
    code, out, _ = run(capsys, [*base, "--predicate", "below_min_frac=0.05", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[1].startswith("below_min_frac(0.05),")


def test_region_with_no_feasible_cells_exits_2(capsys):
    code, _, err = run(
        capsys,
        ["region", "--family", "m", "--axis", "rho:2:3:4",
         "--fix", "a=0.2", "--fix", "b=0.2", "--fix", "c=0.2", "--fix", "d=0.2",
         "--predicate", "adjusted_smaller"],
    )
    assert code == 2
    assert "no feasible grid cells" in err


def test_bad_grid_arguments_exit_2(capsys):
    for argv in (
        ["sweep", "--family", "m", "--axis", "a:0:1", "--out", "x.csv"],
        ["sweep", "--family", "m", "--axis", "a:0:1:nope", "--out", "x.csv"],
        ["region", "--family", "m", "--axis", "a:0:0.5:3", "--tie", "b=*a",
         "--predicate", "adjusted_smaller"],
        ["region", "--family", "m", "--axis", "a:0:0.5:3", "--tie", "b=a",
         "--tie", "c=a", "--tie", "d=a", "--fix", "rho=0",
         "--predicate", "biggest"],
    ):
        code, _, err = run(capsys, argv)
        assert code == 2, argv
        assert err.startswith("error:")


# --- figures --------------------------------------------------------------------


def test_figures_command_writes_all_datasets(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        ["figures", "--out", str(tmp_path / "figs"), "--points-1d", "24",
         "--points-2d", "7", "--stats-points", "10"],
    )
    assert code == 0
    printed = out.splitlines()
    assert len(printed) == 17
    assert printed[-1].endswith("figstats.csv")
    for line in printed:
        path = tmp_path / "figs" / line.rsplit("/", 1)[-1]
        assert path.exists()


# --- parse ----------------------------------------------------------------------


def test_parse_prints_implied_covariance(capsys, tmp_path):
    path = tmp_path / "chain.sem"
    path.write_text("var U\nvar T\nedge U T 0.5\nstandardize on\n")
    code, out, _ = run(capsys, ["parse", str(path), "--format", "csv"])
    assert code == 0
    assert out == "variable,U,T\nU,1,0.5\nT,0.5,1\n"
    code, out, _ = run(capsys, ["parse", str(path)])
    assert out == "variable=U U=1 T=0.5\nvariable=T U=0.5 T=1\n"


def test_parse_reports_line_numbers(capsys, tmp_path):
    path = tmp_path / "broken.sem"
    path.write_text("var U\nvar T\nedge U T\n")
    code, _, err = run(capsys, ["parse", str(path)])
    assert code == 2
    assert "line 3" in err


def test_parse_missing_file_exits_4(capsys, tmp_path):
    code, _, err = run(capsys, ["parse", str(tmp_path / "absent.sem")])
    assert code == 4
    assert err.startswith("error:")


# --- entry points ------------------------------------------------------------------


def test_module_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "collider_lab.cli", "ratio",
         *M_POINT[:-2], "--set", "rho=0.2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert result.returncode == 0
    assert result.stdout == "ratio=0.71364423632\n"


def test_unknown_subcommand_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    capsys.readouterr()
    assert info.value.code == 2
