import numpy as np
import pytest
from click.testing import CliRunner

from cmdist import DistanceMatrix
from cmdist.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fimi_files(tmp_path):
    a = tmp_path / "a.fimi"
    b = tmp_path / "b.fimi"
    a.write_text("0 1\n0\n0 1\n")
    b.write_text("1\n0 1\n\n# comment\n1\n")
    return str(a), str(b)


class TestDist:
    def test_identical_files_zero(self, runner, fimi_files):
        a, _ = fimi_files
        result = runner.invoke(cli, ["dist", a, a])
        assert result.exit_code == 0
        assert result.output.strip() == "0.000000000"

    def test_nine_decimal_format(self, runner, fimi_files):
        a, b = fimi_files
        result = runner.invoke(cli, ["dist", a, b])
        assert result.exit_code == 0
        value = result.output.strip()
        assert len(value.split(".")[1]) == 9
        assert float(value) > 0

    def test_deterministic_reruns(self, runner, fimi_files):
        a, b = fimi_files
        first = runner.invoke(cli, ["dist", a, b, "--features", "cov"])
        second = runner.invoke(cli, ["dist", a, b, "--features", "cov"])
        assert first.output == second.output

    def test_family_file(self, runner, fimi_files, tmp_path):
        a, b = fimi_files
        fam = tmp_path / "family.txt"
        fam.write_text("0\n1\n0 1\n")
        plain = runner.invoke(cli, ["dist", a, b, "--features", str(fam)])
        cov = runner.invoke(cli, ["dist", a, b, "--features", "cov"])
        assert plain.exit_code == 0
        assert plain.output == cov.output

    def test_base_leq_cm(self, runner, fimi_files):
        a, b = fimi_files
        cm = runner.invoke(cli, ["dist", a, b, "--features", "cov"])
        base = runner.invoke(cli, ["dist", a, b, "--features", "cov",
                                   "--distance", "base"])
        assert float(base.output) <= float(cm.output) + 1e-9

    def test_missing_file_exit_2(self, runner, tmp_path):
        result = runner.invoke(cli, ["dist", str(tmp_path / "no.fimi"),
                                     str(tmp_path / "no.fimi")])
        assert result.exit_code == 2

    def test_malformed_file_exit_2(self, runner, tmp_path):
        bad = tmp_path / "bad.fimi"
        bad.write_text("0 x\n")
        result = runner.invoke(cli, ["dist", str(bad), str(bad)])
        assert result.exit_code == 2
        assert "input error" in result.output

    def test_fisher_singular_exit_3(self, runner, tmp_path):
        left = tmp_path / "l.fimi"
        right = tmp_path / "r.fimi"
        left.write_text("0\n1\n")
        # constant columns give a singular empirical covariance
        right.write_text("0 1\n0 1\n")
        result = runner.invoke(cli, ["dist", str(left), str(right),
                                     "--distance", "fisher"])
        assert result.exit_code == 3
        assert "numerical error" in result.output


class TestMatrix:
    def test_tsv_structure(self, runner, fimi_files):
        a, b = fimi_files
        result = runner.invoke(cli, ["matrix", a, b])
        assert result.exit_code == 0
        matrix = DistanceMatrix.from_tsv(result.output)
        assert matrix.labels == ("a", "b")
        assert matrix.values[0, 0] == 0.0
        assert matrix.values[0, 1] == matrix.values[1, 0] > 0

    def test_out_file(self, runner, fimi_files, tmp_path):
        a, b = fimi_files
        out = tmp_path / "m.tsv"
        direct = runner.invoke(cli, ["matrix", a, b, "--out", str(out)])
        assert direct.exit_code == 0
        piped = runner.invoke(cli, ["matrix", a, b])
        assert out.read_text() == piped.output

    def test_fisher_header_comment(self, runner, fimi_files):
        a, b = fimi_files
        result = runner.invoke(cli, ["matrix", a, b, "--distance",
                                     "fisher", "--solver", "pinv"])
        assert result.exit_code == 0
        assert result.output.startswith("# asymmetric")

    def test_freq_features(self, runner, fimi_files):
        a, b = fimi_files
        result = runner.invoke(cli, ["matrix", a, b, "--features", "freq",
                                     "--min-support", "0.5"])
        assert result.exit_code == 0


class TestMine:
    def test_family_with_supports(self, runner, fimi_files):
        a, _ = fimi_files
        result = runner.invoke(cli, ["mine", a, "--min-support", "0.6"])
        assert result.exit_code == 0
        lines = result.output.strip().split("\n")
        itemsets = [line.split("#")[0].split() for line in lines]
        assert ["0"] in itemsets and ["1"] in itemsets
        assert ["0", "1"] in itemsets
        assert all("# support" in line for line in lines)

    def test_output_usable_as_family_file(self, runner, fimi_files,
                                          tmp_path):
        a, b = fimi_files
        fam = tmp_path / "mined.txt"
        mined = runner.invoke(cli, ["mine", a, b, "--min-support", "0.5",
                                    "--out", str(fam)])
        assert mined.exit_code == 0
        result = runner.invoke(cli, ["dist", a, b, "--features", str(fam)])
        assert result.exit_code == 0


class TestSeq2db:
    def test_window_lines(self, runner, tmp_path):
        src = tmp_path / "events.txt"
        src.write_text("a b c a\n")
        result = runner.invoke(cli, ["seq2db", str(src), "-w", "2"])
        assert result.exit_code == 0
        lines = result.output.strip().split("\n")
        assert lines[0] == "# alphabet: a b c"
        assert lines[1:] == ["0 1", "1 2", "0 2"]

    def test_window_too_long_exit_2(self, runner, tmp_path):
        src = tmp_path / "events.txt"
        src.write_text("a b\n")
        result = runner.invoke(cli, ["seq2db", str(src), "-w", "5"])
        assert result.exit_code == 2

    def test_round_trip_through_dist(self, runner, tmp_path):
        src = tmp_path / "events.txt"
        src.write_text(("a b c d " * 20).strip() + "\n")
        db = tmp_path / "db.fimi"
        converted = runner.invoke(cli, ["seq2db", str(src), "-w", "3",
                                        "--out", str(db)])
        assert converted.exit_code == 0
        result = runner.invoke(cli, ["dist", str(db), str(db)])
        assert result.exit_code == 0
        assert result.output.strip() == "0.000000000"


class TestCluster:
    def make_matrix(self, tmp_path):
        values = np.full((4, 4), 1.0)
        np.fill_diagonal(values, 0.0)
        values[0, 1] = values[1, 0] = 0.1
        values[2, 3] = values[3, 2] = 0.1
        path = tmp_path / "m.tsv"
        path.write_text(DistanceMatrix(("w", "x", "y", "z"),
                                       values).to_tsv())
        return str(path)

    def test_linkage_pairs(self, runner, tmp_path):
        result = runner.invoke(cli, ["cluster", self.make_matrix(tmp_path),
                                     "--k", "2"])
        assert result.exit_code == 0
        assert result.output == "w\t0\nx\t0\ny\t1\nz\t1\n"

    def test_kmedoids_pairs(self, runner, tmp_path):
        result = runner.invoke(cli, ["cluster", self.make_matrix(tmp_path),
                                     "--algo", "kmedoids", "--k", "2",
                                     "--seed", "3"])
        assert result.exit_code == 0
        assert result.output == "w\t0\nx\t0\ny\t1\nz\t1\n"

    def test_too_many_clusters_exit_2(self, runner, tmp_path):
        result = runner.invoke(cli, ["cluster", self.make_matrix(tmp_path),
                                     "--k", "9"])
        assert result.exit_code == 2


class TestOracle:
    def test_worked_example_and_random_checks(self, runner):
        result = runner.invoke(cli, ["oracle", "--cases", "10"])
        assert result.exit_code == 0
        assert "geometric 1.060660172" in result.output
        assert "general   1.060660172" in result.output
        assert "oracle ok (10 random instances)" in result.output

    def test_seed_changes_instances_not_outcome(self, runner):
        for seed in (1, 2):
            result = runner.invoke(cli, ["oracle", "--cases", "5",
                                         "--seed", str(seed)])
            assert result.exit_code == 0


def test_help_lists_subcommands(runner):
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for name in ("dist", "matrix", "mine", "seq2db", "cluster", "oracle"):
        assert name in result.output
