import math

import numpy as np
import pytest

from agifl.cli import main
from agifl.config import ConfigError, load_config

SMALL_CONFIG = """\
[scenario]
repeats = 1
max_rounds = 2
master_seed = 3

[fl]
num_users = 6
fraction = 0.5
local_epochs = 1

[data]
source = blobs
classes = 3
samples_per_class = 20
test_samples_per_class = 8
input_dim = 4
spread = 0.1
partition = iid
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(SMALL_CONFIG)
    return path


class TestConfig:
    def test_defaults_mirror_case_study(self, tmp_path):
        path = tmp_path / "empty.ini"
        path.write_text("")
        sc = load_config(path).scenario
        assert sc.fl.num_users == 100
        assert sc.fl.fraction == 0.02
        assert sc.fl.hyper.learning_rate == 0.01
        assert sc.fl.hyper.local_epochs == 5
        assert sc.fl.hyper.batch_size == 10
        assert sc.channel.total_bandwidth == 1e6
        assert sc.channel.ref_gain == pytest.approx(1e-5)
        assert sc.channel.noise == pytest.approx(1e-12)
        assert sc.channel.user_tx_power == 0.1
        assert sc.channel.uav_tx_power == 0.01
        assert sc.uav.propulsion_power == 100.0
        assert sc.uav.altitude == 100.0
        assert sc.repeats == 20
        assert math.isinf(sc.energy_budget)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "typo.ini"
        path.write_text("[channel]\nbandwith_hz = 1e6\n")
        with pytest.raises(ConfigError, match="bandwith_hz"):
            load_config(path)

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "typo.ini"
        path.write_text("[chanel]\nbandwidth_hz = 1e6\n")
        with pytest.raises(ConfigError, match="chanel"):
            load_config(path)

    def test_db_suffixed_values_convert(self, tmp_path):
        path = tmp_path / "units.ini"
        path.write_text("[channel]\nalpha0_db = -40\nnoise_dbm = -80\n")
        sc = load_config(path).scenario
        assert sc.channel.ref_gain == pytest.approx(1e-4)
        assert sc.channel.noise == pytest.approx(1e-11)

    def test_overrides_win_over_file(self, config_path):
        cfg = load_config(config_path, {("fl", "fraction"): "1.0"})
        assert cfg.scenario.fl.fraction == 1.0

    def test_bad_override_value(self, config_path):
        with pytest.raises(ConfigError, match="fl.fraction"):
            load_config(config_path, {("fl", "fraction"): "lots"})


class TestRunCommand:
    def test_smoke_run(self, config_path, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", str(config_path), "--out", str(out)]) == 0
        rep = (out / "min_sum_dist_rep00.csv").read_text().splitlines()
        assert rep[0] == ("round,duration_s,uav_energy_j,cum_uav_energy_j,"
                          "test_loss,test_acc,selected")
        assert len(rep) == 3  # header + 2 rounds
        assert (out / "min_sum_dist_mean.csv").exists()
        assert "run: scheme=min_sum_dist" in capsys.readouterr().out

    def test_unknown_config_key_exits_1(self, tmp_path, capsys):
        path = tmp_path / "bad.ini"
        path.write_text("[channel]\nbandwith = 1e6\n")
        assert main(["run", str(path)]) == 1
        assert "bandwith" in capsys.readouterr().err

    def test_missing_mnist_exits_2(self, tmp_path, capsys):
        path = tmp_path / "idx.ini"
        path.write_text(f"[data]\nsource = idx\nmnist_dir = {tmp_path}/nope\n"
                        "[scenario]\ntrain = false\nrepeats = 1\nmax_rounds = 1\n")
        # the loader warns and falls back to blobs, so this succeeds; a
        # corrupt idx file is the hard I/O failure
        imgs = tmp_path / "bad-images"
        imgs.write_bytes(b"\x00\x00\x08\x02" + b"\x00" * 16)
        lbls = tmp_path / "bad-labels"
        lbls.write_bytes(b"\x00\x00\x08\x01" + b"\x00" * 4)
        not_mnist = tmp_path / "mnist"
        not_mnist.mkdir()
        for name in ("train-images-idx3-ubyte", "t10k-images-idx3-ubyte"):
            (not_mnist / name).write_bytes(imgs.read_bytes())
        for name in ("train-labels-idx1-ubyte", "t10k-labels-idx1-ubyte"):
            (not_mnist / name).write_bytes(lbls.read_bytes())
        path.write_text(f"[data]\nsource = idx\nmnist_dir = {not_mnist}\n"
                        "[scenario]\nrepeats = 1\nmax_rounds = 1\n")
        assert main(["run", str(path), "--out", str(tmp_path / "o")]) == 2
        assert "dataset" in capsys.readouterr().err

    def test_seed_flag_reproduces_bytes(self, config_path, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["run", str(config_path), "--seed", "7", "--out", str(out_a)]) == 0
        assert main(["run", str(config_path), "--seed", "7", "--out", str(out_b)]) == 0
        for name in ("min_sum_dist_rep00.csv", "min_sum_dist_mean.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_inline_override_flag(self, config_path, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", str(config_path), "--out", str(out),
                     "--scenario.max_rounds=1"]) == 0
        rep = (out / "min_sum_dist_rep00.csv").read_text().splitlines()
        assert len(rep) == 2

    def test_unknown_flag_exits_1(self, config_path, capsys):
        assert main(["run", str(config_path), "--frobnicate"]) == 1


class TestComparePlacement:
    def test_energy_and_accuracy_panels(self, tmp_path, capsys):
        path = tmp_path / "cmp.ini"
        path.write_text("""\
[scenario]
repeats = 2
max_rounds = 5
master_seed = 3

[fl]
num_users = 6
fraction = 0.5
local_epochs = 1

[data]
source = blobs
classes = 3
samples_per_class = 20
test_samples_per_class = 8
input_dim = 4
spread = 0.1
partition = iid

[compare]
budget_grid_j = 2,4,8,16
budget_repeats = 2
""")
        out = tmp_path / "out"
        assert main(["compare-placement", str(path), "--out", str(out)]) == 0
        energy = (out / "compare_energy.csv").read_text().splitlines()
        assert energy[0] == "round,min_sum_dist_cum_energy_j,random_cum_energy_j"
        rows = np.array([[float(v) for v in line.split(",")]
                         for line in energy[1:]])
        assert np.all(rows[:, 1] < rows[:, 2])  # optimized below random
        acc = (out / "compare_accuracy.csv").read_text().splitlines()
        assert acc[0] == "budget_j,min_sum_dist_best_acc,random_best_acc"
        assert len(acc) == 5
        assert (out / "compare_energy.svg").exists()
        assert (out / "compare_accuracy.svg").exists()

    def test_fixed_placement_degeneracy(self, tmp_path):
        path = tmp_path / "fixed.ini"
        path.write_text("""\
[scenario]
repeats = 1
max_rounds = 3
placement = fixed
fixed_x_m = 400
fixed_y_m = 400
train = false

[fl]
num_users = 5
fraction = 0.4

[data]
source = shape
num_samples = 500
input_dim = 16
classes = 4

[compare]
budget_grid_j =
""")
        out = tmp_path / "out"
        assert main(["compare-placement", str(path), "--out", str(out)]) == 0
        lines = (out / "compare_energy.csv").read_text().splitlines()
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        assert np.array_equal(rows[:, 1], rows[:, 2])


class TestOracle:
    def test_rate_defaults_match_uplink(self, capsys):
        assert main(["oracle", "rate"]) == 0
        value = float(capsys.readouterr().out.strip())
        assert value == pytest.approx(5e5 * math.log2(101), rel=1e-9)

    def test_rate_with_args(self, capsys):
        assert main(["oracle", "rate", "bandwidth_hz=1e6", "tx_power_w=0.01"]) == 0
        value = float(capsys.readouterr().out.strip())
        assert value == pytest.approx(1e6 * math.log2(11), rel=1e-9)

    def test_placement_single_user(self, capsys):
        assert main(["oracle", "placement", "users=12,34"]) == 0
        x, y, _ = capsys.readouterr().out.split()
        assert float(x) == pytest.approx(12.0, abs=0.02)
        assert float(y) == pytest.approx(34.0, abs=0.02)

    def test_aggregate_hand_rule(self, capsys):
        assert main(["oracle", "aggregate", "[0]x1", "[4]x3"]) == 0
        assert capsys.readouterr().out.strip() == "[3]"

    def test_bad_args_exit_1(self, capsys):
        assert main(["oracle", "rate", "nonsense=1"]) == 1
        assert main(["oracle", "placement"]) == 1
        assert main(["oracle"]) == 1
        assert main(["oracle", "launch"]) == 1


class TestDeterministicSvg:
    def test_svg_bytes_stable(self, tmp_path):
        from agifl.reports import svg_line_chart
        series = [("a", [0, 1, 2], [0.0, 1.5, 1.0]), ("b", [0, 1, 2], [2.0, 0.5, 0.25])]
        svg_line_chart(tmp_path / "one.svg", series, "t", "x", "y")
        svg_line_chart(tmp_path / "two.svg", series, "t", "x", "y")
        assert (tmp_path / "one.svg").read_bytes() == (tmp_path / "two.svg").read_bytes()
