"""Tests for Prometheus instrumentation."""

import logging

import pytest

from src.observability.metrics import (
    REGISTRY,
    track_bound_check,
    track_reconstruction,
    track_retained_modes,
    track_stage,
    write_metrics_file,
)


def _sample(name, **labels):
    return REGISTRY.get_sample_value(name, labels) or 0.0


class TestTrackStage:
    """Test the stage decorator."""

    def test_records_duration(self):
        """Every call adds one observation."""
        before = _sample("regfm_stage_duration_seconds_count", stage="unit_ok")

        @track_stage("unit_ok")
        def work(x):
            return 2 * x

        assert work(3) == 6
        assert _sample("regfm_stage_duration_seconds_count", stage="unit_ok") == before + 1

    def test_counts_errors(self):
        """Exceptions are counted and re-raised."""
        before = _sample("regfm_stage_errors_total", stage="unit_fail")

        @track_stage("unit_fail")
        def fail():
            raise ValueError("boom")

        with pytest.raises(ValueError, match="boom"):
            fail()
        assert _sample("regfm_stage_errors_total", stage="unit_fail") == before + 1

    def test_logs_stage_extras(self, caplog):
        """Each call emits a DEBUG record carrying stage and duration_ms."""
        stage_logger = logging.getLogger("src.observability.metrics")
        caplog.set_level(logging.DEBUG, logger=stage_logger.name)
        stage_logger.addHandler(caplog.handler)
        try:
            track_stage("unit_log")(lambda: None)()
        finally:
            stage_logger.removeHandler(caplog.handler)
        records = [r for r in caplog.records if getattr(r, "stage", None) == "unit_log"]
        assert records
        assert records[-1].duration_ms >= 0.0
        assert "unit_log" in records[-1].getMessage()


class TestCounters:
    """Test counters and gauges."""

    def test_bound_checks(self):
        """Outcomes are counted per bound."""
        before = _sample("regfm_bound_checks_total", bound="unit", result="skipped")
        track_bound_check("unit", "skipped")
        assert _sample("regfm_bound_checks_total", bound="unit", result="skipped") == before + 1

    def test_reconstructions(self):
        """Reconstructions are counted per filter."""
        before = _sample("regfm_reconstructions_total", filter="unit")
        track_reconstruction("unit")
        assert _sample("regfm_reconstructions_total", filter="unit") == before + 1

    def test_retained_modes(self):
        """The gauge holds the last value."""
        track_retained_modes(7)
        assert _sample("regfm_retained_modes") == 7


class TestWriteMetricsFile:
    """Test textfile export."""

    def test_writes_prometheus_text(self, tmp_path):
        """The file contains the registered metric families."""
        track_retained_modes(3)
        path = tmp_path / "metrics.prom"
        write_metrics_file(path)
        text = path.read_text()
        assert "regfm_retained_modes 3.0" in text
        assert "# TYPE regfm_stage_duration_seconds histogram" in text
