"""
Tests for rate series parsing, writing and synthesis.
"""
import io
from datetime import date

import numpy as np
import pytest

from src.core.errors import DomainError, IoError, OrderError, ParseError
from src.services.data_io import (
    SYNTHETIC_DEFAULTS,
    generate_synthetic,
    load_rate_series,
    read_rate_series,
    save_rate_series,
    write_series_csv,
)
from tests.conftest import series_from


class _FailingSink(io.BytesIO):
    def write(self, data):
        raise OSError("disk full")


class TestLoadRateSeries:

    def test_two_point_series(self, two_point_csv):
        series = load_rate_series(io.BytesIO(two_point_csv))
        assert len(series) == 2
        assert series.dates == (date(2005, 1, 3), date(2005, 1, 4))
        np.testing.assert_array_equal(series.rates, [3.9, 3.8])

    def test_dates_out_of_order(self):
        data = b"date,rate\n2005-01-04,3.9\n2005-01-03,3.8\n"
        with pytest.raises(OrderError):
            load_rate_series(io.BytesIO(data))

    def test_repeated_date(self):
        data = b"date,rate\n2005-01-03,3.9\n2005-01-03,3.8\n"
        with pytest.raises(OrderError):
            load_rate_series(io.BytesIO(data))

    def test_negative_rate(self):
        data = b"date,rate\n2005-01-03,-1.0\n2005-01-04,3.8\n"
        with pytest.raises(DomainError):
            load_rate_series(io.BytesIO(data))

    @pytest.mark.parametrize("rate", [b"0", b"nan", b"inf"])
    def test_non_positive_or_non_finite_rate(self, rate):
        data = b"date,rate\n2005-01-03,3.9\n2005-01-04," + rate + b"\n"
        with pytest.raises(DomainError):
            load_rate_series(io.BytesIO(data))

    def test_wrong_header(self):
        with pytest.raises(ParseError):
            load_rate_series(io.BytesIO(b"day,value\n2005-01-03,3.9\n2005-01-04,3.8\n"))

    @pytest.mark.parametrize("row", [b"2005-01-04,abc", b"04/01/2005,3.8", b"2005-01-04"])
    def test_malformed_row(self, row):
        data = b"date,rate\n2005-01-03,3.9\n" + row + b"\n"
        with pytest.raises(ParseError):
            load_rate_series(io.BytesIO(data))

    def test_trailing_delimiter_on_rows_only(self):
        data = b"date,rate\n2005-01-03,3.9,\n2005-01-04,3.8,\n"
        series = load_rate_series(io.BytesIO(data))
        assert series.dates == (date(2005, 1, 3), date(2005, 1, 4))
        np.testing.assert_array_equal(series.rates, [3.9, 3.8])

    def test_single_row(self):
        with pytest.raises(DomainError):
            load_rate_series(io.BytesIO(b"date,rate\n2005-01-03,3.9\n"))

    def test_label_kept(self, two_point_csv):
        assert load_rate_series(io.BytesIO(two_point_csv), "EUR/RON").label == "EUR/RON"


class TestWriteSeries:

    def test_round_trip_two_points(self, two_point_csv):
        series = load_rate_series(io.BytesIO(two_point_csv))
        sink = io.BytesIO()
        write_series_csv(series, sink)
        assert load_rate_series(io.BytesIO(sink.getvalue())) == series

    def test_seventeen_digits_reload_exactly(self):
        series = series_from([4.123456789012345, 4.2])
        sink = io.BytesIO()
        write_series_csv(series, sink)
        reloaded = load_rate_series(io.BytesIO(sink.getvalue()))
        assert reloaded.rates[0] == 4.123456789012345

    def test_random_values_reload_bit_equal(self, rng):
        rates = np.exp(rng.normal(size=500))
        series = series_from(rates)
        sink = io.BytesIO()
        write_series_csv(series, sink)
        reloaded = load_rate_series(io.BytesIO(sink.getvalue()))
        np.testing.assert_array_equal(reloaded.rates, series.rates)

    def test_failing_sink(self):
        with pytest.raises(IoError):
            write_series_csv(series_from([4.0, 4.1]), _FailingSink())

    def test_lf_line_endings(self):
        sink = io.BytesIO()
        write_series_csv(series_from([4.0, 4.1]), sink)
        assert b"\r" not in sink.getvalue()
        assert sink.getvalue().startswith(b"date,rate\n")

    def test_path_helpers(self, tmp_path):
        path = tmp_path / "nested" / "eur_ron.csv"
        series = series_from([4.0, 4.1, 4.05])
        save_rate_series(series, path)
        reloaded = read_rate_series(path)
        assert reloaded.label == "eur_ron"
        np.testing.assert_array_equal(reloaded.rates, series.rates)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            read_rate_series(tmp_path / "absent.csv")


class TestGenerateSynthetic:

    def test_constant_gbm(self):
        series = generate_synthetic("gbm-walk", 5, seed=1,
                                    params={"start": 4.0, "mu": 0.0, "sigma": 0.0})
        np.testing.assert_array_equal(series.rates, [4.0] * 5)

    @pytest.mark.parametrize("kind", sorted(SYNTHETIC_DEFAULTS))
    def test_deterministic(self, kind):
        a = generate_synthetic(kind, 300, seed=42)
        b = generate_synthetic(kind, 300, seed=42)
        assert a == b

    @pytest.mark.parametrize("kind", sorted(SYNTHETIC_DEFAULTS))
    def test_seed_changes_series(self, kind):
        a = generate_synthetic(kind, 300, seed=1)
        b = generate_synthetic(kind, 300, seed=2)
        assert not np.array_equal(a.rates, b.rates)

    def test_gbm_positive_over_seeds(self):
        for seed in range(20):
            assert np.all(generate_synthetic("gbm-walk", 10000, seed=seed).rates > 0)

    def test_business_day_dates(self):
        series = generate_synthetic("noisy-sine", 10, seed=0)
        assert series.dates[0] == date(2005, 1, 3)
        assert all(d.weekday() < 5 for d in series.dates)

    def test_nonlinear_ar_returns_stay_small(self):
        series = generate_synthetic("nonlinear-ar", 2100, seed=0)
        returns = np.diff(np.log(series.rates))
        assert np.max(np.abs(returns)) < 0.05
        assert np.std(returns) > 0

    def test_negative_seed_accepted(self):
        assert len(generate_synthetic("gbm-walk", 20, seed=-7)) == 20

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            generate_synthetic("random-walk", 10, seed=0)

    def test_unknown_parameter(self):
        with pytest.raises(DomainError):
            generate_synthetic("gbm-walk", 10, seed=0, params={"drift": 0.1})

    def test_amplitude_must_stay_below_level(self):
        with pytest.raises(DomainError):
            generate_synthetic("noisy-sine", 10, seed=0, params={"amplitude": 5.0})

    def test_too_short(self):
        with pytest.raises(DomainError):
            generate_synthetic("gbm-walk", 1, seed=0)
