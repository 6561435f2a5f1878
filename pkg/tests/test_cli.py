import numpy as np
import pytest

from centrasim.cli import main
from centrasim.tables import parse_centrality

from conftest import FIG1_TEXT

TABLE1 = {
    "degree": [.1667, .1667, .2500, .1667, .0833, .1667],
    "closeness": [.1708, .1708, .2196, .1708, .1281, .1398],
    "pagerank": [.0727, .1122, .1986, .2963, .1131, .2072],
}


@pytest.fixture
def fig1_file(tmp_path):
    path = tmp_path / "fig1.txt"
    path.write_text(FIG1_TEXT)
    return path


def _read(tmp_path, name):
    cv, labels, header = parse_centrality((tmp_path / name).read_text())
    return labels, cv.values, header


class TestCentrality:
    def test_table_values(self, fig1_file, tmp_path):
        rc = main(["centrality", str(fig1_file), "--output-dir", str(tmp_path)])
        assert rc == 0
        for kind, expect in TABLE1.items():
            labels, values, _ = _read(tmp_path, f"{kind}.csv")
            assert labels == ["1", "2", "3", "4", "5", "6"]
            assert np.abs(values - expect).max() < 5e-4

    def test_betweenness_method_tag(self, fig1_file, tmp_path):
        main(["centrality", str(fig1_file), "--output-dir", str(tmp_path)])
        _, _, header = _read(tmp_path, "betweenness.csv")
        assert header["method"] == "oracle"  # the fixture is not a tree

    def test_tree_uses_distributed_method(self, tmp_path):
        tree = tmp_path / "tree.txt"
        tree.write_text("a b\nb c\nc d\n")
        out = tmp_path / "out"
        rc = main(["centrality", str(tree), "--output-dir", str(out)])
        assert rc == 0
        labels, values, header = _read(out, "betweenness.csv")
        assert header["method"] == "distributed"
        assert np.allclose(values, [0, 0.5, 0.5, 0])


class TestPagerank:
    def test_unknown_n_run(self, fig1_file, tmp_path):
        rc = main(["pagerank", str(fig1_file), "--mode", "unknown-n",
                   "--omega", "0", "--iterations", "100000",
                   "--output-dir", str(tmp_path)])
        assert rc == 0
        _, values, header = _read(tmp_path, "vector.csv")
        assert np.abs(values - TABLE1["pagerank"]).max() < 2e-3
        assert header["mode"] == "unknown-n"
        trace = (tmp_path / "trace.csv").read_text().splitlines()
        assert trace[0] == "k,error,residual,alpha_inv,active_node"
        assert len(trace) == 1 + 1000  # stride 100 over 1e5 steps

    def test_dist_mode_matches_engine(self, fig1_file, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["pagerank", str(fig1_file), "--mode", "unknown-n", "--omega", "0",
              "--iterations", "20000", "--seed", "5", "--output-dir", str(out_a)])
        main(["pagerank", str(fig1_file), "--mode", "dist", "--omega", "0",
              "--iterations", "20000", "--seed", "5", "--output-dir", str(out_b)])
        assert (out_a / "trace.csv").read_text() == (out_b / "trace.csv").read_text()
        sizes = (out_b / "size_estimates.csv").read_text().splitlines()
        assert sizes[0] == "# kind=size_estimate"
        est = [float(line.split(",")[1]) for line in sizes[1:]]
        assert np.abs(np.array(est) - 6).max() < 1.0

    def test_deterministic_outputs(self, fig1_file, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            main(["pagerank", str(fig1_file), "--iterations", "5000",
                  "--seed", "3", "--output-dir", str(out)])
        for name in ("vector.csv", "trace.csv", "oracle.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_round_trip_equals_memory(self, fig1_file, tmp_path):
        main(["pagerank", str(fig1_file), "--iterations", "5000",
              "--seed", "3", "--output-dir", str(tmp_path)])
        text = (tmp_path / "vector.csv").read_text()
        cv, labels, _ = parse_centrality(text)
        from centrasim.tables import serialize_centrality
        again = serialize_centrality(cv, labels,
                                     extras={"mode": "unknown-n", "seed": 3})
        assert again == text

    def test_disconnected_omega_zero_exit_2(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("a b\nb a\nc d\nd c\n")
        rc = main(["pagerank", str(bad), "--omega", "0",
                   "--iterations", "100", "--output-dir", str(tmp_path)])
        assert rc == 2

    def test_malformed_input_exit_1(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("a b c d\n")
        rc = main(["pagerank", str(bad), "--output-dir", str(tmp_path)])
        assert rc == 1

    def test_usage_error_exit_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["pagerank"])  # missing input
        assert exc.value.code == 1


class TestConfigPrecedence:
    def test_flag_beats_config_beats_default(self, fig1_file, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("iterations = 1000\nseed = 9\ntrace-stride = 50\n")
        out = tmp_path / "out"
        main(["pagerank", str(fig1_file), "--config", str(cfg),
              "--iterations", "2000", "--output-dir", str(out)])
        header = _read(out, "vector.csv")[2]
        assert header["seed"] == "9"                     # from config
        trace = (out / "trace.csv").read_text().splitlines()
        assert len(trace) == 1 + 2000 // 50              # flag beat config

    def test_bad_config_line_exit_1(self, fig1_file, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("iterations 1000\n")
        rc = main(["pagerank", str(fig1_file), "--config", str(cfg),
                   "--output-dir", str(tmp_path)])
        assert rc == 1


class TestTemporal:
    def test_constant_sequence_matches_static(self, fig1_file, tmp_path):
        temporal = tmp_path / "seq.txt"
        temporal.write_text("".join(f"0 {line}\n" for line
                                    in FIG1_TEXT.splitlines()
                                    if line and not line.startswith("#")))
        out_t, out_s = tmp_path / "t", tmp_path / "s"
        rc = main(["pagerank-temporal", str(temporal), "--omega", "0",
                   "--iterations", "50000", "--output-dir", str(out_t)])
        assert rc == 0
        main(["pagerank", str(fig1_file), "--mode", "unknown-n", "--omega", "0",
              "--iterations", "50000", "--output-dir", str(out_s)])
        _, xt, _ = _read(out_t, "vector.csv")
        _, xs, _ = _read(out_s, "vector.csv")
        assert np.abs(xt - xs).max() < 1e-6

    def test_wbar_column_sums(self, tmp_path):
        temporal = tmp_path / "seq.txt"
        temporal.write_text("0 a b\n0 b a\n0 b c\n0 c b\n"
                            "1 a c\n1 c a\n1 b c\n1 c b\n")
        rc = main(["pagerank-temporal", str(temporal), "--iterations", "2000",
                   "--snapshot-stride", "1000", "--output-dir", str(tmp_path)])
        assert rc == 0
        lines = (tmp_path / "wbar_colsums.csv").read_text().splitlines()
        sums = [float(line.split(",")[1]) for line in lines[1:]]
        assert np.abs(np.array(sums) - 1).max() < 1e-12

    def test_joint_window_violation_exit_2(self, tmp_path):
        temporal = tmp_path / "seq.txt"
        temporal.write_text("0 a b\n0 b a\n0 c d\n0 d c\n"
                            "1 b c\n1 c b\n1 d a\n1 a d\n")
        rc = main(["pagerank-temporal", str(temporal), "--omega", "0",
                   "--joint-window", "1", "--iterations", "100",
                   "--output-dir", str(tmp_path)])
        assert rc == 2
        rc = main(["pagerank-temporal", str(temporal), "--omega", "0",
                   "--joint-window", "2", "--iterations", "100",
                   "--output-dir", str(tmp_path)])
        assert rc == 0


class TestOracle:
    def test_fixture_tables(self, fig1_file, tmp_path):
        rc = main(["oracle", str(fig1_file), "--output-dir", str(tmp_path)])
        assert rc == 0
        _, pr, header = _read(tmp_path, "pagerank.csv")
        assert np.abs(pr - TABLE1["pagerank"]).max() < 5e-4
        assert float(header["crosscheck"]) < 1e-8
        _, clo, _ = _read(tmp_path, "closeness.csv")
        assert np.abs(clo - TABLE1["closeness"]).max() < 5e-4

    def test_two_cycle_uniform(self, tmp_path):
        f = tmp_path / "two.txt"
        f.write_text("a b\nb a\n")
        rc = main(["oracle", str(f), "--output-dir", str(tmp_path)])
        assert rc == 0
        _, pr, _ = _read(tmp_path, "pagerank.csv")
        assert np.allclose(pr, [0.5, 0.5], atol=1e-12)

    def test_consistency_guard_exit_3(self, fig1_file, tmp_path):
        rc = main(["oracle", str(fig1_file), "--output-dir", str(tmp_path),
                   "--config", str(_tight_tol(tmp_path))])
        assert rc == 3


def _tight_tol(tmp_path):
    cfg = tmp_path / "tight.cfg"
    cfg.write_text("oracle-tol = 1e-18\n")
    return cfg
