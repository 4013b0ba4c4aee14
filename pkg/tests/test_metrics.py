import numpy as np
import pytest

from spadeclip.metrics import DeclipReport, FrameStats, sdr, sdr_masked


def test_sdr_known_values():
    assert sdr(np.array([1.0, 0.0]), np.array([0.9, 0.0])) == pytest.approx(20.0)
    x = np.array([0.3, -0.4, 0.5])
    assert np.isinf(sdr(x, x))
    assert sdr(x, np.zeros(3)) == pytest.approx(0.0)


def test_sdr_errors():
    with pytest.raises(ValueError):
        sdr(np.zeros(3), np.zeros(4))
    with pytest.raises(ValueError):
        sdr(np.zeros(3), np.ones(3))


def test_sdr_no_hidden_alignment():
    val = sdr(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert val == pytest.approx(20 * np.log10(1 / np.sqrt(2)), abs=1e-6)
    assert val != pytest.approx(20.0, abs=1.0)


def test_sdr_masked():
    ref = np.array([1.0, 2.0, 3.0])
    est = np.array([0.9, 2.0, 2.5])
    assert sdr_masked(ref, est, np.array([True, True, True])) == pytest.approx(
        sdr(ref, est)
    )
    assert np.isinf(sdr_masked(ref, est, np.array([False, True, False])))
    assert sdr_masked(
        np.array([1.0, 9.0]), np.array([0.5, 9.0]), np.array([0])
    ) == pytest.approx(20 * np.log10(2), abs=1e-4)


def test_sdr_masked_empty_indices():
    with pytest.raises(ValueError):
        sdr_masked(np.ones(3), np.ones(3), np.zeros(3, dtype=bool))


def test_report_table_and_mean_iterations():
    report = DeclipReport(
        sdr_clipped_input=5.0,
        sdr_restored=np.inf,
        sdr_on_clipped_samples=12.25,
        per_frame=[FrameStats(10, 0.01, 5, True), FrameStats(20, 0.02, 7, True)],
        runtime=0.5,
    )
    assert report.mean_iterations == 15.0
    table = report.as_table()
    assert "inf" in table
    assert "12.25" in table
