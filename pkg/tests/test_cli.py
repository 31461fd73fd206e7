import io
import json

import pytest

from ucp_ensemble.cli import run
from ucp_ensemble.dataset import ds2_profile, generate_synthetic, save_dataset, save_profile
from ucp_ensemble.ensemble import EnsembleConfig, TrainedEnsemble, predict_effort, train_ensemble
from ucp_ensemble.dataset import load_dataset


@pytest.fixture
def data_csv(tmp_path):
    ds = generate_synthetic(ds2_profile(10), seed=21)
    path = tmp_path / "ds.csv"
    save_dataset(ds, str(path))
    return str(path)


def invoke(argv):
    out = io.StringIO()
    code = run(argv, stdout=out)
    return code, out.getvalue()


class TestUsage:
    def test_no_command(self):
        code, _ = invoke([])
        assert code == 1

    def test_unknown_flag(self, data_csv):
        code, _ = invoke(["describe", "--data", data_csv, "--bogus"])
        assert code == 1

    def test_unknown_command(self):
        code, _ = invoke(["frobnicate"])
        assert code == 1


class TestGenerate:
    def test_generate_roundtrip(self, tmp_path):
        profile_path = tmp_path / "p.txt"
        save_profile(ds2_profile(12), str(profile_path))
        out_path = tmp_path / "out.csv"
        code, _ = invoke(["generate", "--profile", str(profile_path),
                          "--seed", "5", "--out", str(out_path)])
        assert code == 0
        assert len(load_dataset(str(out_path))) == 12

    def test_missing_profile(self, tmp_path):
        code, _ = invoke(["generate", "--profile", str(tmp_path / "nope.txt"),
                          "--out", str(tmp_path / "o.csv")])
        assert code == 2


class TestDescribe:
    def test_describe_output(self, data_csv):
        code, out = invoke(["describe", "--data", data_csv])
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4  # header + ucp/effort/productivity
        assert lines[1].startswith("ucp")
        assert lines[3].startswith("productivity")

    def test_bad_data(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("e1,e2\n1,2\n")
        code, _ = invoke(["describe", "--data", str(bad)])
        assert code == 2


class TestTrainPredict:
    def test_train_then_predict_matches_in_process(self, tmp_path, data_csv):
        model_path = tmp_path / "model.json"
        code, _ = invoke(["train", "--data", data_csv, "--seed", "7",
                          "--replicates", "3", "--out", str(model_path)])
        assert code == 0

        env = "3,3,3,3,3,3,3,3"
        code, out = invoke(["predict", "--model", str(model_path),
                            "--env", env, "--ucp", "100", "--format", "json"])
        assert code == 0
        doc = json.loads(out)

        ds = load_dataset(data_csv)
        ens = train_ensemble(ds, EnsembleConfig(replicates=3, seed=7))
        prod, effort = predict_effort(ens, [3.0] * 8, 100.0)
        assert doc["productivity"] == prod  # bit-for-bit round trip
        assert doc["effort"] == effort

    def test_predict_weights_normalized(self, tmp_path, data_csv):
        model_path = tmp_path / "model.json"
        invoke(["train", "--data", data_csv, "--seed", "7",
                "--replicates", "3", "--out", str(model_path)])
        code, out = invoke(["predict", "--model", str(model_path),
                            "--env", "1,2,3,4,5,0,1,2", "--ucp", "1",
                            "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert sum(doc["normalized_weights"].values()) == pytest.approx(1.0, abs=1e-9)
        assert doc["effort"] == pytest.approx(doc["productivity"])

    def test_negative_ucp(self, tmp_path, data_csv):
        model_path = tmp_path / "model.json"
        invoke(["train", "--data", data_csv, "--seed", "7",
                "--replicates", "3", "--out", str(model_path)])
        code, _ = invoke(["predict", "--model", str(model_path),
                          "--env", "3,3,3,3,3,3,3,3", "--ucp", "-5"])
        assert code == 2

    def test_corrupt_model_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _ = invoke(["predict", "--model", str(bad),
                          "--env", "3,3,3,3,3,3,3,3", "--ucp", "10"])
        assert code == 2

    def test_version_mismatch(self, tmp_path):
        bad = tmp_path / "old.json"
        bad.write_text(json.dumps({"format": "ucp-ensemble", "version": 99}))
        code, _ = invoke(["predict", "--model", str(bad),
                          "--env", "3,3,3,3,3,3,3,3", "--ucp", "10"])
        assert code == 2


class TestEvaluate:
    def test_evaluate_csv_table(self, data_csv):
        code, out = invoke(["evaluate", "--data", data_csv, "--seed", "11",
                            "--replicates", "2", "--format", "csv"])
        assert code == 0
        first_table = out.split("\n\n")[0].strip().splitlines()
        assert first_table[0] == "estimator,mae,mbre,mibre,ci_low,ci_high"
        assert len(first_table) == 1 + 10  # ensemble + 7 base + 2 baselines

    def test_byte_identical_reruns(self, data_csv):
        args = ["evaluate", "--data", data_csv, "--seed", "11",
                "--replicates", "2", "--format", "csv"]
        _, out1 = invoke(args)
        _, out2 = invoke(args)
        assert out1 == out2
