import io
import json

import numpy as np
import pytest

from isolab import UsageError, write_operator
from isolab.harness import (CSV_HEADER, RunConfig, emit_report, main,
                            parse_config, read_sweep_csv, run_sweep,
                            run_theorem1, run_verify, SweepRow)


class TestParseConfig:
    def test_theorem1_basic(self):
        cfg = parse_config(["theorem1", "--dim-f", "8", "--dim-h", "16"])
        assert cfg.command == "theorem1"
        assert cfg.n_list == [8]
        assert cfg.dim_h == 16
        assert cfg.seed == 0 and cfg.samples == 100

    def test_sweep_list_and_family(self):
        cfg = parse_config(["sweep", "--n", "2,4,8", "--family", "diag:1.5,2"])
        assert cfg.n_list == [2, 4, 8]
        assert cfg.family == "diag:1.5,2"
        assert cfg.dim_h == 8  # defaults to max(n)

    def test_dim_f_exceeds_dim_h(self):
        with pytest.raises(UsageError, match="--dim-f"):
            parse_config(["theorem2", "--dim-f", "9", "--dim-h", "4"])

    def test_unknown_flag(self):
        with pytest.raises(UsageError):
            parse_config(["theorem1", "--dim-f", "2", "--frobnicate", "1"])

    def test_missing_required(self):
        with pytest.raises(UsageError, match="--n"):
            parse_config(["sweep"])
        with pytest.raises(UsageError, match="--dim-f"):
            parse_config(["theorem1"])
        with pytest.raises(UsageError, match="--input"):
            parse_config(["verify"])

    def test_config_file_merge_and_override(self, tmp_path):
        cfgfile = tmp_path / "run.json"
        cfgfile.write_text(json.dumps({"dim_f": 4, "dim_h": 8, "seed": 7}))
        cfg = parse_config(["theorem1", "--config", str(cfgfile),
                            "--seed", "9"])
        assert cfg.dim_h == 8 and cfg.n_list == [4]
        assert cfg.seed == 9  # CLI wins over file

    def test_config_file_unknown_key(self, tmp_path):
        cfgfile = tmp_path / "run.json"
        cfgfile.write_text(json.dumps({"dim_f": 4, "color": "red"}))
        with pytest.raises(UsageError, match="color"):
            parse_config(["theorem1", "--config", str(cfgfile)])


class TestSweep:
    def test_scalar_two_bounds(self):
        cfg = parse_config(["sweep", "--n", "2,4,8", "--family", "scalar:2"])
        rows = run_sweep(cfg)
        np.testing.assert_allclose([r.bound_theoretical for r in rows],
                                   [1.5, 0.75, 0.375])
        for row in rows:
            assert row.error is None
            assert row.bound_measured <= row.bound_theoretical * (1 + 1e-9)
            assert row.ok

    def test_identity_family_zero_bound(self):
        cfg = parse_config(["sweep", "--n", "2,4", "--family", "scalar:1"])
        for row in run_sweep(cfg):
            assert row.bound_measured <= 1e-12

    def test_rows_increasing_in_n(self):
        cfg = parse_config(["sweep", "--n", "8,2,4", "--family", "scalar:2"])
        assert [r.n for r in run_sweep(cfg)] == [2, 4, 8]

    def test_failed_row_marked_not_aborting(self):
        # a tight capacity starves the larger row but the sweep completes
        cfg = parse_config(["theorem1", "--dim-f", "2", "--dim-h", "8",
                            "--capacity", "50", "--samples", "5"])
        cfg.n_list = [2, 8]
        rows = run_sweep(cfg)
        assert len(rows) == 2
        assert rows[0].error is None
        assert rows[1].error is not None and np.isnan(rows[1].bound_measured)
        assert not rows[1].ok

    def test_theorem1_row(self):
        cfg = parse_config(["theorem1", "--dim-f", "4"])
        row = run_theorem1(cfg, 4)
        assert row.bound_measured == pytest.approx(0.25, abs=1e-10)

    def test_determinism_of_numeric_payload(self):
        cfg = parse_config(["sweep", "--n", "2,4", "--family", "svd-random",
                            "--seed", "3"])
        a, b = run_sweep(cfg), run_sweep(cfg)
        for ra, rb in zip(a, b):
            for key in CSV_HEADER[:-1]:  # wall_ms is timing, not payload
                assert getattr(ra, key) == getattr(rb, key)


class TestEmitReport:
    def test_empty_rows_header_only(self):
        assert emit_report([], "csv", None) == ",".join(CSV_HEADER) + "\n"

    def test_round_trip(self):
        cfg = parse_config(["sweep", "--n", "2,4", "--family", "diag:1.5,2"])
        rows = run_sweep(cfg)
        text = emit_report(rows, "csv", None)
        parsed = read_sweep_csv(text)
        for orig, back in zip(rows, parsed):
            for key in CSV_HEADER:
                assert getattr(orig, key) == getattr(back, key)

    def test_report_format_mirrors_fields(self):
        row = SweepRow(n=4, epsilon=0.25, norm_T=2.0, bound_theoretical=0.75,
                       bound_measured=0.25, defect_max=0.0,
                       expansivity_min=1.0, orthogonality_max=0.0,
                       wall_ms=1.0)
        text = emit_report([row], "report", None)
        for key in CSV_HEADER[1:]:
            assert key in text

    def test_writes_file(self, tmp_path):
        path = tmp_path / "out.csv"
        emit_report([], "csv", str(path))
        assert path.read_text() == ",".join(CSV_HEADER) + "\n"


class TestVerify:
    def run_verify_on(self, tmp_path, matrix):
        path = tmp_path / "op.json"
        write_operator(path, matrix)
        cfg = RunConfig(command="verify", input_path=str(path), samples=50)
        out = io.StringIO()
        code = run_verify(cfg, stream=out)
        return code, out.getvalue()

    def test_expansive_operator_passes(self, tmp_path):
        code, text = self.run_verify_on(tmp_path, 2 * np.eye(3))
        assert code == 0
        assert "expansive: yes" in text
        # 2*id is expansive but no m-isometry for m <= 3
        assert text.count("isometry: no") == 3

    def test_identity_is_everything(self, tmp_path):
        code, text = self.run_verify_on(tmp_path, np.eye(3))
        assert code == 0
        assert text.count("isometry: yes") == 3

    def test_contraction_fails(self, tmp_path):
        code, text = self.run_verify_on(tmp_path, 0.5 * np.eye(3))
        assert code == 1
        assert "expansive: no" in text

    def test_three_isometry_detected(self, tmp_path):
        # id + nilpotent shift: a 3-isometry, but not expansive
        code, text = self.run_verify_on(
            tmp_path, np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert code == 1
        assert "expansive: no" in text
        lines = text.splitlines()
        assert "(1-isometry: no)" in lines[0]
        assert "(2-isometry: no)" in lines[1]
        assert "(3-isometry: yes)" in lines[2]


class TestMain:
    def test_sweep_exit_zero(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        code = main(["sweep", "--n", "2,4", "--family", "scalar:2",
                     "--out", str(out)])
        assert code == 0
        rows = read_sweep_csv(out.read_text())
        assert [r.n for r in rows] == [2, 4]

    def test_usage_error_exit_two(self, capsys):
        assert main(["theorem2", "--dim-f", "9", "--dim-h", "4"]) == 2
        assert "--dim-f" in capsys.readouterr().err

    def test_verify_via_main(self, tmp_path):
        path = tmp_path / "op.json"
        write_operator(path, 3 * np.eye(2))
        assert main(["verify", "--input", str(path)]) == 0
