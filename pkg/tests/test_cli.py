import json
import os

import numpy as np
import pytest

from divcast.cli import main
from divcast.errors import ConfigError
from divcast.pipeline import RunConfig, discover_datasets, load_config
from divcast.sample import make_series


def _write_dataset(outdir, n=4, seed=5):
    os.makedirs(outdir, exist_ok=True)
    series, actuals = [], {}
    for i in range(n):
        ts, future = make_series(f"Y{i + 1}", "yearly", seed, 18, 30)
        series.append(ts)
        actuals[ts.id] = future
    max_len = max(len(s) for s in series)
    with open(os.path.join(outdir, "yearly_train.csv"), "w") as fh:
        fh.write("id," + ",".join(f"v{i + 1}" for i in range(max_len)) + "\n")
        for ts in series:
            cells = [repr(float(v)) for v in ts.values]
            cells += [""] * (max_len - len(cells))
            fh.write(ts.id + "," + ",".join(cells) + "\n")
    with open(os.path.join(outdir, "yearly_test.csv"), "w") as fh:
        fh.write("id," + ",".join(f"v{i + 1}" for i in range(6)) + "\n")
        for ts in series:
            fh.write(ts.id + "," + ",".join(repr(float(v)) for v in actuals[ts.id])
                     + "\n")
    return outdir


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    return _write_dataset(str(tmp_path_factory.mktemp("data")))


class TestConfig:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("seed: 1\nbogus_key: 2\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg))

    def test_unknown_gbm_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("gbm:\n  n_estimators: 100\n")
        with pytest.raises(ConfigError):
            load_config(str(cfg))

    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("seed: 1\nlevel: 0.9\n")
        out = load_config(str(cfg), {"seed": 7})
        assert out.seed == 7
        assert out.level == 0.9

    def test_bad_level(self):
        with pytest.raises(ConfigError):
            RunConfig(level=1.5)

    def test_bad_frequency(self):
        with pytest.raises(ConfigError):
            RunConfig(frequency="decadal")

    def test_cli_bad_config_exit_code(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("bogus: 1\n")
        assert main(["train", "--config", str(cfg)]) == 2

    def test_missing_data_exit_code(self, tmp_path):
        assert main(["train", "--out", str(tmp_path)]) == 2


class TestDiscovery:
    def test_directory_layout(self, dataset):
        cfg = RunConfig(data=dataset, frequency="yearly")
        ds = discover_datasets(cfg, need_test=True)
        assert len(ds) == 1
        assert ds[0].frequency == "yearly"
        assert len(ds[0].series) == 4

    def test_single_file_requires_frequency(self, dataset):
        cfg = RunConfig(data=os.path.join(dataset, "yearly_train.csv"))
        with pytest.raises(ConfigError):
            discover_datasets(cfg, need_test=False)

    def test_missing_test_file(self, tmp_path):
        path = tmp_path / "only_train"
        path.mkdir()
        (path / "yearly_train.csv").write_text("id,v1,v2,v3\nY1,1,2,3\n")
        cfg = RunConfig(data=str(path), frequency="yearly")
        with pytest.raises(ConfigError):
            discover_datasets(cfg, need_test=True)


@pytest.mark.slow
class TestWorkflow:
    def test_all_emits_every_artifact(self, dataset, tmp_path):
        out = str(tmp_path / "out")
        status = main(["all", "--data", dataset, "--frequency", "yearly",
                       "--rounds", "5", "--threads", "1", "--seed", "3",
                       "--out", out])
        assert status == 0
        for name in (
            "pool_forecasts_yearly.csv", "features_yearly.csv",
            "model_yearly.json", "training_metrics_yearly.csv",
            "forecasts_yearly.csv", "weights_yearly.csv",
            "sa_forecasts_yearly.csv", "summary.csv", "mcb_yearly.csv",
            "mcb_yearly.svg", "exclusions.csv", "run_manifest.json",
        ):
            assert os.path.exists(os.path.join(out, name)), name
        manifest = json.load(open(os.path.join(out, "run_manifest.json")))
        assert manifest["config"]["seed"] == 3
        assert "model_yearly.json" in manifest["model_hashes"]

    def test_zero_rounds_reproduces_sa_benchmark(self, dataset, tmp_path):
        out = str(tmp_path / "out0")
        assert main(["train", "--data", dataset, "--frequency", "yearly",
                     "--rounds", "0", "--threads", "1", "--out", out]) == 0
        assert main(["forecast", "--data", dataset, "--frequency", "yearly",
                     "--threads", "1", "--out", out]) == 0
        combined = open(os.path.join(out, "forecasts_yearly.csv")).read()
        sa = open(os.path.join(out, "sa_forecasts_yearly.csv")).read()
        assert combined == sa

    def test_rerun_byte_identical(self, dataset, tmp_path):
        args = ["all", "--data", dataset, "--frequency", "yearly",
                "--rounds", "3", "--seed", "11"]
        out1 = str(tmp_path / "r1")
        out2 = str(tmp_path / "r2")
        assert main(args + ["--threads", "1", "--out", out1]) == 0
        assert main(args + ["--threads", "4", "--out", out2]) == 0
        names = sorted(os.listdir(out1))
        assert names == sorted(os.listdir(out2))
        for name in names:
            b1 = open(os.path.join(out1, name), "rb").read()
            b2 = open(os.path.join(out2, name), "rb").read()
            assert b1 == b2, name
