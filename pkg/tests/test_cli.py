import numpy as np
import pytest

from regdigraph.cli import main
from regdigraph.core import read_matrix_stream, validate, write_matrix_stream


def write_cfg(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SING_CFG = "experiment = singularity\nn = 4\nd = 2\ntrials = 5\nseed = 1\n"


def test_usage_error_exits_1(capsys):
    assert main([]) == 1
    assert main(["clcd"]) == 1  # missing --vector
    capsys.readouterr()


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "subcommand" in capsys.readouterr().out or True


def test_clcd_two_point(capsys):
    assert main(["clcd", "--vector", "0.5,-0.5"]) == 0
    out = capsys.readouterr().out.strip()
    assert abs(float(out) - 10.0 / 11.0) < 1e-9


def test_clcd_infinite(capsys):
    assert main(["clcd", "--vector", "0.5,-0.5", "--max-scale", "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "inf"


def test_clcd_bad_vector(capsys):
    assert main(["clcd", "--vector", "0.5,zebra"]) == 1
    assert "error:" in capsys.readouterr().err


def test_qclcd_ranks(capsys):
    argv = ["qclcd", "--vector", "0.5,-0.5,0.3", "--sets", "0,1;1,2;2"]
    assert main(argv + ["--rank", "1"]) == 0
    first = capsys.readouterr().out.strip()
    assert abs(float(first) - 10.0 / 11.0) < 1e-9
    assert main(argv + ["--rank", "3"]) == 0
    assert capsys.readouterr().out.strip() == "inf"


def test_qclcd_index_out_of_range(capsys):
    assert main(["qclcd", "--vector", "0.5,-0.5", "--sets", "0,5"]) == 1
    assert "outside" in capsys.readouterr().err


def test_sample_stream_and_determinism(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SING_CFG)
    assert main(["sample", "--config", cfg]) == 0
    first = capsys.readouterr().out
    matrices = read_matrix_stream(first)
    assert len(matrices) == 5
    for m in matrices:
        validate(m.entries, 2)
    assert main(["sample", "--config", cfg]) == 0
    assert capsys.readouterr().out == first
    assert main(["sample", "--config", cfg, "--seed", "9"]) == 0
    assert capsys.readouterr().out != first


def test_sample_out_file(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SING_CFG)
    out = tmp_path / "draws.txt"
    assert main(["sample", "--config", cfg, "--out", str(out)]) == 0
    capsys.readouterr()
    assert len(read_matrix_stream(out.read_text())) == 5


def test_enumerate_family(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "experiment = singularity\nn = 3\nd = 1\ntrials = 1\n")
    assert main(["enumerate", "--config", cfg]) == 0
    captured = capsys.readouterr()
    assert len(read_matrix_stream(captured.out)) == 6
    assert "6 matrices" in captured.err


def test_svd_stream(tmp_path, capsys):
    ones = validate(np.ones((2, 2), dtype=np.int64), 2)
    ident = validate(np.eye(3, dtype=np.int64), 1)
    stream = tmp_path / "matrices.txt"
    stream.write_text(write_matrix_stream([ones, ident]))
    assert main(["svd", "--input", str(stream)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "index,n,d,s_min,restricted_s_min,exact_singular"
    assert out[1].startswith("0,2,2,") and out[1].endswith("true")
    assert out[2].startswith("1,3,1,") and out[2].endswith("false")


def test_svd_missing_input(tmp_path, capsys):
    assert main(["svd", "--input", str(tmp_path / "nope.txt")]) == 1
    assert "error:" in capsys.readouterr().err


def test_experiment_stdout_and_summary(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SING_CFG)
    with pytest.warns(UserWarning):
        code = main(["experiment", "--config", cfg])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("experiment,n,d,trials,singular_count,p_hat,half_width\n")
    assert "singular_count = 5" in out


def test_experiment_out_file(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SING_CFG)
    dest = tmp_path / "result.csv"
    with pytest.warns(UserWarning):
        assert main(["experiment", "--config", cfg, "--out", str(dest)]) == 0
    captured = capsys.readouterr()
    assert f"wrote {dest}" in captured.err
    assert dest.read_text().startswith("experiment,")


def test_experiment_bad_config_exits_1(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "experiment = singularity\nn = 4\nd = 2\n")
    assert main(["experiment", "--config", cfg]) == 1
    assert "error:" in capsys.readouterr().err


def test_experiment_unwritable_out_exits_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, SING_CFG)
    missing = tmp_path / "no-such-dir" / "result.csv"
    with pytest.warns(UserWarning):
        code = main(["experiment", "--config", cfg, "--out", str(missing)])
    assert code == 2
    assert "runtime failure" in capsys.readouterr().err


def test_rerandom_subcommand_forces_experiment(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "experiment = singularity\nn = 4\nd = 2\ntrials = 50\nseed = 3\n")
    with pytest.warns(UserWarning):
        assert main(["rerandom", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert out.startswith("experiment,n,d,atom,count,expected\n")
    assert "mode = exact" in out


def test_quasirand_subcommand_forces_experiment(tmp_path, capsys):
    text = (
        "experiment = singularity\nn = 12\nd = 3\ntrials = 1\nseed = 4\n"
        "depth = 2\ncheck_budget = 20000\n"
    )
    cfg = write_cfg(tmp_path, text)
    with pytest.warns(UserWarning):
        assert main(["quasirand", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert out.startswith("experiment,n,d,trial,holds,")
