"""Tests for output module."""

from __future__ import annotations

import json

import numpy as np
import pytest

from eebc import output


class TestFormatValue:
    def test_int(self):
        assert output.format_value(7) == "7"
        assert output.format_value(np.int64(3)) == "3"

    def test_float_has_seventeen_digits(self):
        assert output.format_value(0.1) == "0.10000000000000001"
        assert output.format_value(np.float64(1.0)) == "1"

    def test_float_round_trips(self):
        for x in (1.0 / 3.0, 2.5e-14, 123456.789, 5e6):
            assert float(output.format_value(x)) == x

    def test_bool(self):
        assert output.format_value(True) == "true"


class TestBuildCsv:
    def test_header_only(self):
        assert output.build_csv(output.DISTANCE_SWEEP_COLUMNS, []) == "d_km,m,mean_ee,std_ee\n"

    def test_rows(self):
        text = output.build_csv(output.CONVERGE_COLUMNS, [(1, 0.5), (2, 0.75)])
        assert text == "iteration,ee_bits_per_joule\n1,0.5\n2,0.75\n"

    def test_same_rows_same_bytes(self):
        rows = [(4, 2, 1.0 / 3.0, 0.1), (5, 2, 2.0 / 3.0, 0.2)]
        assert output.build_csv(output.ANTENNA_SWEEP_COLUMNS, rows) == output.build_csv(
            output.ANTENNA_SWEEP_COLUMNS, list(rows)
        )

    def test_rejects_ragged_row(self):
        with pytest.raises(ValueError, match="fields"):
            output.build_csv(output.CURVE_COLUMNS, [(1.0, 2.0)])


class TestSaveCsv:
    def test_creates_parents(self, tmp_path):
        path = output.save_csv(tmp_path / "a" / "b.csv", output.CURVE_COLUMNS, [(0.0, 0.0, 0.0)])
        assert path.read_text(encoding="utf-8").startswith("p_w,capacity_bits_per_s,ee_bits_per_joule\n")

    def test_read_back(self, tmp_path):
        rows = [(0.2, 4, 1.25e6, 3.0e4)]
        path = output.save_csv(tmp_path / "d.csv", output.DISTANCE_SWEEP_COLUMNS, rows)
        parsed = output.read_csv(path)
        assert parsed == [{"d_km": "0.20000000000000001", "m": "4", "mean_ee": "1250000", "std_ee": "30000"}]


class TestMatrices:
    def test_encode(self):
        assert output.encode_matrix(np.array([[1 + 2j]])) == [[[1.0, 2.0]]]

    def test_decode(self, rng):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        np.testing.assert_array_equal(output.decode_matrix(output.encode_matrix(a)), a)

    def test_decode_rejects_bad_shape(self):
        with pytest.raises(ValueError, match="pairs"):
            output.decode_matrix([[1.0, 2.0]])


def _document(**extra):
    return output.build_result_document(
        scenario={"m": 1},
        ee=2.5,
        transmit_power=1.5,
        per_user_power=[1.0, 0.5],
        iterations=3,
        converged=True,
        covariances=[np.eye(1), 0.5 * np.eye(1)],
        sum_rate=10.0,
        **extra,
    )


class TestResultDocument:
    def test_fields(self):
        doc = _document()
        assert doc["format_version"] == output.RESULT_FORMAT_VERSION
        assert doc["ee_bits_per_joule"] == 2.5
        assert doc["transmit_power_w"] == 1.5
        assert doc["per_user_power_w"] == [1.0, 0.5]
        assert doc["iterations"] == 3
        assert doc["converged"] is True
        assert doc["uplink_covariances"][1] == [[[0.5, 0.0]]]
        assert "bc_covariances" not in doc

    def test_bc_fields_are_optional(self):
        doc = _document(bc_covariances=[np.eye(2), np.zeros((2, 2))], dpc_sum_rate=10.0)
        assert len(doc["bc_covariances"]) == 2
        assert doc["dpc_sum_rate_bits_per_s"] == 10.0

    def test_save_and_load(self, tmp_path):
        path = output.save_result_document(_document(), tmp_path / "r.json")
        assert output.load_result_document(path) == json.loads(json.dumps(_document()))

    def test_load_rejects_other_version(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text('{"format_version": 99}', encoding="utf-8")
        with pytest.raises(ValueError, match="format_version"):
            output.load_result_document(path)

    def test_load_reports_syntax_position(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text("{\n  oops\n}", encoding="utf-8")
        with pytest.raises(ValueError, match="r.json: line 2"):
            output.load_result_document(path)
