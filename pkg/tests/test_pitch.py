"""F0 estimation, pause segmentation, and polynomial contour models."""

import numpy as np
import pytest

from prosotime import (
    DegenerateInputError,
    F0Track,
    IPU,
    ParameterError,
    ParseError,
    Waveform,
    estimate_f0_autocorr,
    fit_contour,
    parse_f0_csv,
    realize_pitch,
    segment_ipus,
    synthesize_contour,
    transduce_tones,
)
from prosotime.pitch import contour_model_to_dict, f0_track_to_csv


def _sine(freq, dur_s, rate=16000, amp=0.8):
    t = np.arange(int(dur_s * rate)) / rate
    return Waveform(amp * np.sin(2 * np.pi * freq * t), rate)


def _silence(dur_s, rate=16000):
    return Waveform(np.zeros(int(dur_s * rate)), rate)


def _concat(*waves):
    rate = waves[0].rate
    return Waveform(np.concatenate([w.samples for w in waves]), rate)


class TestF0Estimation:
    def test_steady_sine_recovered(self, sine_200):
        track = estimate_f0_autocorr(sine_200)
        voiced = [f for f in track.f0_hz if f is not None]
        assert len(voiced) == len(track.f0_hz)  # fully voiced
        assert abs(float(np.median(voiced)) - 200.0) <= 2.0

    def test_silence_fully_unvoiced(self):
        track = estimate_f0_autocorr(_silence(1.0))
        assert track.voiced_count == 0

    def test_low_frequency_sine(self):
        track = estimate_f0_autocorr(_sine(80.0, 1.0))
        voiced = [f for f in track.f0_hz if f is not None]
        assert voiced
        assert abs(float(np.median(voiced)) - 80.0) <= 2.0

    def test_chirp_tracks_rising_pitch(self):
        rate = 16000
        dur = 2.0
        t = np.arange(int(dur * rate)) / rate
        # linear sweep 100 -> 200 Hz: instantaneous phase integral
        phase = 2 * np.pi * (100 * t + 25 * t**2)
        track = estimate_f0_autocorr(Waveform(0.8 * np.sin(phase), rate))
        times, values = track.voiced_frames()
        assert len(values) > 150
        assert np.all(values > 90) and np.all(values < 210)
        # pitch rises: allow tiny local jitter but demand global rise
        assert values[-10:].mean() - values[:10].mean() > 80

    def test_sine_with_silent_tail(self):
        track = estimate_f0_autocorr(_concat(_sine(150.0, 0.5), _silence(0.5)))
        times, values = track.voiced_frames()
        assert np.all(times < 0.6)
        head = [f for t, f in zip(track.times_s, track.f0_hz) if t < 0.4]
        assert all(f is not None for f in head)

    def test_band_limits_respected(self):
        track = estimate_f0_autocorr(_sine(200.0, 0.5), fmin=60.0, fmax=500.0)
        _, values = track.voiced_frames()
        assert np.all(values >= 60.0) and np.all(values <= 500.0)

    def test_bad_band_rejected(self, sine_200):
        with pytest.raises(ParameterError):
            estimate_f0_autocorr(sine_200, fmin=500.0, fmax=60.0)

    def test_too_short_for_one_frame_gives_empty_track(self):
        track = estimate_f0_autocorr(Waveform(np.zeros(64), 16000))
        assert len(track.times_s) == 0
        assert track.voiced_count == 0


class TestTrackContainer:
    def test_uniform_hop_enforced(self):
        with pytest.raises(ParameterError):
            F0Track((0.0, 0.01, 0.05), (100.0, 100.0, 100.0), 0.01)

    def test_nonpositive_f0_rejected(self):
        with pytest.raises(ParameterError):
            F0Track((0.0, 0.01), (100.0, -5.0), 0.01)

    def test_voiced_frames_filters_nones(self):
        track = F0Track((0.0, 0.01, 0.02), (100.0, None, 120.0), 0.01)
        times, values = track.voiced_frames()
        assert list(times) == [0.0, 0.02]
        assert list(values) == [100.0, 120.0]
        assert track.voiced_count == 2


class TestSegmentation:
    def test_two_ipus_split_by_long_pause(self):
        w = _concat(_sine(150, 0.5), _silence(0.3), _sine(150, 0.4))
        ipus = segment_ipus(w)
        assert len(ipus) == 2
        assert ipus[0].start_s == pytest.approx(0.0, abs=0.02)
        assert ipus[0].end_s == pytest.approx(0.5, abs=0.02)
        assert ipus[1].start_s == pytest.approx(0.8, abs=0.02)

    def test_short_pause_bridged(self):
        w = _concat(_sine(150, 0.5), _silence(0.1), _sine(150, 0.4))
        ipus = segment_ipus(w)
        assert len(ipus) == 1
        assert ipus[0].end_s == pytest.approx(1.0, abs=0.02)

    def test_continuous_speech_single_ipu(self):
        ipus = segment_ipus(_sine(150, 1.0))
        assert len(ipus) == 1

    def test_pure_silence_no_ipus(self):
        assert segment_ipus(_silence(1.0)) == []

    def test_tiny_blips_dropped(self):
        w = _concat(_silence(0.5), _sine(150, 0.05), _silence(0.5))
        assert segment_ipus(w) == []

    def test_ipu_validation(self):
        with pytest.raises(ParameterError):
            IPU(1.0, 0.5)


class TestContourFit:
    def test_parabola_recovered(self):
        times = tuple(0.01 * i for i in range(75))
        f0 = tuple(120.0 + 30.0 * t - 40.0 * t * t for t in times)
        track = F0Track(times, f0, 0.01)
        model = fit_contour(track, 2)
        assert model.fit.coeffs == pytest.approx((120.0, 30.0, -40.0), abs=1e-6)
        assert model.voiced_frame_count == 75

    def test_terrace_contour_slopes_down(self):
        track = synthesize_contour(realize_pitch(transduce_tones("H L H L H")))
        model = fit_contour(track, 1)
        assert model.fit.coeffs[1] < 0  # declination

    def test_rise_fall_has_negative_curvature(self):
        track = synthesize_contour(realize_pitch(("lc", "^h", "l")))
        model = fit_contour(track, 2)
        assert model.fit.coeffs[2] < 0

    def test_rmse_monotone_in_degree(self):
        track = synthesize_contour(realize_pitch(transduce_tones("H L H L H")))
        rmses = [fit_contour(track, d).fit.rmse for d in range(6)]
        for lo, hi in zip(rmses[1:], rmses[:-1]):
            assert lo <= hi + 1e-12

    def test_domain_restricts_frames(self):
        times = tuple(0.01 * i for i in range(100))
        f0 = tuple(100.0 + (50.0 if i >= 50 else 0.0) for i in range(100))
        track = F0Track(times, f0, 0.01)
        model = fit_contour(track, 0, domain=IPU(0.0, 0.495))
        assert model.fit.coeffs[0] == pytest.approx(100.0)
        assert model.voiced_frame_count == 50

    def test_unvoiced_frames_ignored(self):
        track = F0Track((0.0, 0.01, 0.02, 0.03), (100.0, None, None, 100.0), 0.01)
        model = fit_contour(track, 0)
        assert model.fit.coeffs[0] == pytest.approx(100.0)
        assert model.voiced_frame_count == 2

    def test_too_few_voiced_frames(self):
        track = F0Track((0.0, 0.01), (100.0, None), 0.01)
        with pytest.raises(DegenerateInputError):
            fit_contour(track, 1)


class TestCsvRoundTrip:
    def test_round_trip_with_unvoiced_holes(self):
        track = F0Track((0.0, 0.01, 0.02, 0.03), (100.0, None, 120.5, None), 0.01)
        text = f0_track_to_csv(track)
        back = parse_f0_csv(text)
        assert back.times_s == track.times_s
        assert back.f0_hz == track.f0_hz
        assert back.hop_s == pytest.approx(0.01)

    def test_header_shape(self):
        track = F0Track((0.0, 0.01), (100.0, None), 0.01)
        lines = f0_track_to_csv(track).strip().split("\n")
        assert lines[0] == "time_s,f0_hz"
        assert lines[1] == "0.0,100.0"
        assert lines[2] == "0.01,"

    def test_bad_row_reported(self):
        with pytest.raises(ParseError) as exc:
            parse_f0_csv("time_s,f0_hz\n0.0,abc\n")
        assert "row" in str(exc.value)

    def test_model_dict_shape(self):
        track = synthesize_contour(realize_pitch(transduce_tones("H L")))
        model = fit_contour(track, 1)
        d = contour_model_to_dict(model)
        assert d["degree"] == 1
        assert len(d["coeffs"]) == 2
        assert d["voiced_frame_count"] == model.voiced_frame_count
