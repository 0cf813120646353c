"""F0 tracks, inter-pausal-unit segmentation and polynomial contour models.

The estimator is a plain normalized-autocorrelation tracker: it serves
contour-shape analyses, not tracker-grade accuracy.  Octave errors are kept
out only by the [fmin, fmax] search band.  Contours are modeled by least
squares polynomials over voiced frames, optionally restricted to one
inter-pausal unit (IPU).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .aems import PolyFit, fit_polynomial
from .audio import Waveform
from .errors import DegenerateInputError, ParameterError, ParseError

__all__ = [
    "F0Track",
    "IPU",
    "PolyContourModel",
    "estimate_f0_autocorr",
    "segment_ipus",
    "fit_contour",
    "f0_track_to_csv",
    "parse_f0_csv",
    "contour_model_to_dict",
]


@dataclass(frozen=True)
class F0Track:
    """Uniformly hopped F0 frames; None marks an unvoiced frame."""

    times_s: tuple[float, ...]
    f0_hz: tuple[float | None, ...]
    hop_s: float

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times_s)
        f0 = tuple(None if v is None else float(v) for v in self.f0_hz)
        object.__setattr__(self, "times_s", times)
        object.__setattr__(self, "f0_hz", f0)
        if len(times) != len(f0):
            raise ParameterError(
                f"{len(times)} times vs {len(f0)} f0 values"
            )
        if self.hop_s <= 0:
            raise ParameterError(f"hop_s must be > 0, got {self.hop_s}")
        for a, b in zip(times, times[1:]):
            if not math.isclose(b - a, self.hop_s, rel_tol=1e-6, abs_tol=1e-9):
                raise ParameterError(
                    f"frame times must advance uniformly by hop_s={self.hop_s}, "
                    f"got step {b - a} at t={a}"
                )
        for v in f0:
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ParameterError(f"voiced f0 must be finite and > 0, got {v}")

    def __len__(self) -> int:
        return len(self.times_s)

    @property
    def voiced_count(self) -> int:
        return sum(v is not None for v in self.f0_hz)

    def voiced_frames(self) -> tuple[np.ndarray, np.ndarray]:
        """(times, f0) arrays of the voiced frames only."""
        pairs = [(t, v) for t, v in zip(self.times_s, self.f0_hz) if v is not None]
        if not pairs:
            return np.empty(0), np.empty(0)
        ts, vs = zip(*pairs)
        return np.asarray(ts, dtype=float), np.asarray(vs, dtype=float)


@dataclass(frozen=True)
class IPU:
    """One inter-pausal unit: a stretch of speech between pauses."""

    start_s: float
    end_s: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start_s) and math.isfinite(self.end_s)):
            raise ParameterError("IPU bounds must be finite")
        if not self.end_s > self.start_s:
            raise ParameterError(
                f"IPU must have end_s > start_s, got [{self.start_s}, {self.end_s}]"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class PolyContourModel:
    """A polynomial fit over the voiced frames of a track (or one IPU of it)."""

    fit: PolyFit
    domain: IPU | None
    voiced_frame_count: int

    def __post_init__(self) -> None:
        if self.voiced_frame_count < self.fit.degree + 1:
            raise ParameterError(
                f"{self.voiced_frame_count} voiced frames cannot constrain "
                f"a degree-{self.fit.degree} fit"
            )


# ---------------------------------------------------------------------------
# estimation
# ---------------------------------------------------------------------------


def _frame_starts(n: int, frame_len: int, hop_len: int) -> range:
    if n < frame_len:
        return range(0)
    return range(0, n - frame_len + 1, hop_len)


def estimate_f0_autocorr(
    wave: Waveform,
    fmin: float = 60.0,
    fmax: float = 500.0,
    frame_ms: float = 40.0,
    hop_ms: float = 10.0,
    voicing_ratio: float = 0.3,
) -> F0Track:
    """Frame-wise F0 by normalized autocorrelation over the [fmin, fmax] band.

    A frame is voiced when its peak normalized autocorrelation reaches
    voicing_ratio and its RMS is at least 1% of the whole track's RMS; the
    best lag is refined by parabolic interpolation and the result clamped
    into [fmin, fmax].
    """
    if not 0 < fmin < fmax:
        raise ParameterError(f"need 0 < fmin < fmax, got {fmin}, {fmax}")
    if wave.rate < 4 * fmax:
        raise ParameterError(
            f"sample rate {wave.rate} too low for fmax={fmax} (need >= {4 * fmax})"
        )
    rate = wave.rate
    frame_len = max(2, round(frame_ms * rate / 1000.0))
    hop_len = max(1, round(hop_ms * rate / 1000.0))
    lag_min = max(1, math.ceil(rate / fmax))
    lag_max = min(frame_len - 2, math.floor(rate / fmin))
    if lag_max <= lag_min:
        raise ParameterError(
            f"frame of {frame_len} samples cannot hold lags up to {lag_max}"
        )

    x = wave.samples
    track_rms = float(np.sqrt(np.mean(x**2))) if len(x) else 0.0
    hop_s = hop_len / rate

    times: list[float] = []
    f0: list[float | None] = []
    for start in _frame_starts(len(x), frame_len, hop_len):
        frame = x[start : start + frame_len]
        times.append((start + frame_len / 2) / rate)

        rms = float(np.sqrt(np.mean(frame**2)))
        if track_rms == 0.0 or rms < 0.01 * track_rms:
            f0.append(None)
            continue

        # autocorrelation numerator via FFT, energy-normalized per lag
        n = len(frame)
        spec = np.fft.rfft(frame, 2 * n)
        ac = np.fft.irfft(spec * np.conj(spec))[: lag_max + 2].real
        csq = np.cumsum(frame**2)
        lags = np.arange(lag_min, lag_max + 1)
        e_head = csq[n - lags - 1]
        e_tail = csq[-1] - csq[lags - 1]
        denom = np.sqrt(e_head * e_tail)
        with np.errstate(invalid="ignore", divide="ignore"):
            ncc = np.where(denom > 0, ac[lag_min : lag_max + 1] / denom, 0.0)

        best = int(np.argmax(ncc))
        peak_val = float(ncc[best])
        if peak_val < voicing_ratio:
            f0.append(None)
            continue

        # octave guard: a lag of 2T correlates nearly as well as the true
        # period T, so among near-tied local maxima the shortest lag wins
        interior = (
            (ncc[1:-1] > ncc[:-2]) & (ncc[1:-1] >= ncc[2:]) & (ncc[1:-1] >= 0.95 * peak_val)
        )
        near_ties = np.nonzero(interior)[0] + 1
        if len(near_ties):
            best = int(near_ties[0])

        lag = float(lags[best])
        if 0 < best < len(ncc) - 1:
            y0, y1, y2 = ncc[best - 1], ncc[best], ncc[best + 1]
            denom2 = y0 - 2 * y1 + y2
            if denom2 < 0:  # proper maximum
                lag += 0.5 * (y0 - y2) / denom2
        hz = rate / lag
        f0.append(min(max(hz, fmin), fmax))

    return F0Track(times_s=tuple(times), f0_hz=tuple(f0), hop_s=hop_s)


# ---------------------------------------------------------------------------
# segmentation
# ---------------------------------------------------------------------------


def segment_ipus(
    wave: Waveform,
    silence_db: float = -40.0,
    min_pause_ms: float = 200.0,
    min_ipu_ms: float = 100.0,
) -> list[IPU]:
    """Split a waveform into inter-pausal units on frame energy.

    10 ms frames below silence_db (relative to the loudest frame) count as
    silent; silent gaps shorter than min_pause_ms do not split, and units
    shorter than min_ipu_ms are dropped.
    """
    frame_len = max(1, round(0.010 * wave.rate))
    x = wave.samples
    n_frames = len(x) // frame_len
    if n_frames == 0:
        return []
    frames = x[: n_frames * frame_len].reshape(n_frames, frame_len)
    rms = np.sqrt(np.mean(frames**2, axis=1))
    peak = float(np.max(rms))
    if peak <= 0:
        return []
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(rms / peak)
    speech = db >= silence_db

    # bridge interior silent gaps shorter than the pause threshold
    min_pause_frames = max(1, round(min_pause_ms / 10.0))
    bridged = speech.copy()
    i = 0
    while i < n_frames:
        if not speech[i]:
            j = i
            while j < n_frames and not speech[j]:
                j += 1
            interior = i > 0 and j < n_frames
            if interior and (j - i) < min_pause_frames:
                bridged[i:j] = True
            i = j
        else:
            i += 1

    frame_s = frame_len / wave.rate
    ipus: list[IPU] = []
    i = 0
    while i < n_frames:
        if bridged[i]:
            j = i
            while j < n_frames and bridged[j]:
                j += 1
            start_s = i * frame_s
            end_s = j * frame_s
            if (end_s - start_s) * 1000.0 >= min_ipu_ms:
                ipus.append(IPU(start_s=start_s, end_s=end_s))
            i = j
        else:
            i += 1
    return ipus


# ---------------------------------------------------------------------------
# contour fitting
# ---------------------------------------------------------------------------


def fit_contour(track: F0Track, degree: int, domain: IPU | None = None) -> PolyContourModel:
    """Least-squares polynomial over the voiced frames of a track.

    Unvoiced frames never enter the fit.  With a domain, only frames inside
    [start_s, end_s] are used and the time axis is measured from the domain
    start; otherwise from the first frame.
    """
    ts, vs = track.voiced_frames()
    if domain is not None:
        keep = (ts >= domain.start_s) & (ts <= domain.end_s)
        ts, vs = ts[keep], vs[keep]
        origin = domain.start_s
    else:
        origin = track.times_s[0] if len(track) else 0.0
    if len(ts) < degree + 1:
        raise DegenerateInputError(
            f"{len(ts)} voiced frames cannot constrain a degree-{degree} fit"
        )
    fit = fit_polynomial(ts - origin, vs, degree)
    return PolyContourModel(fit=fit, domain=domain, voiced_frame_count=int(len(ts)))


# ---------------------------------------------------------------------------
# interchange
# ---------------------------------------------------------------------------


def f0_track_to_csv(track: F0Track) -> str:
    """CSV rendering `time_s,f0_hz`, empty f0 for unvoiced frames."""
    lines = ["time_s,f0_hz"]
    for t, v in zip(track.times_s, track.f0_hz):
        lines.append(f"{t!r}," + ("" if v is None else repr(v)))
    return "\n".join(lines) + "\n"


def parse_f0_csv(text: str) -> F0Track:
    """Parse the `time_s,f0_hz` CSV form (as produced by f0_track_to_csv).

    Accepts externally produced tracks as long as the frame times advance
    uniformly.  Raises ParseError with a row number on malformed rows.
    """
    lines = [ln for ln in text.splitlines()]
    if not lines or [p.strip() for p in lines[0].split(",")] != ["time_s", "f0_hz"]:
        raise ParseError("expected header time_s,f0_hz", row=1)
    times: list[float] = []
    f0: list[float | None] = []
    for row_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, got {len(parts)}", row=row_no)
        try:
            times.append(float(parts[0]))
        except ValueError:
            raise ParseError(f"non-numeric time {parts[0]!r}", row=row_no) from None
        raw = parts[1].strip()
        if not raw:
            f0.append(None)
        else:
            try:
                f0.append(float(raw))
            except ValueError:
                raise ParseError(f"non-numeric f0 {raw!r}", row=row_no) from None
    if len(times) >= 2:
        hop = times[1] - times[0]
    else:
        hop = 0.01
    try:
        return F0Track(times_s=tuple(times), f0_hz=tuple(f0), hop_s=hop)
    except ParameterError as exc:
        raise ParseError(str(exc)) from None


def contour_model_to_dict(model: PolyContourModel) -> dict:
    """JSON-ready model form: degree, coefficients, domain, rmse, frame count."""
    return {
        "degree": model.fit.degree,
        "coeffs": list(model.fit.coeffs),
        "domain": (
            None
            if model.domain is None
            else {"start_s": model.domain.start_s, "end_s": model.domain.end_s}
        ),
        "rmse": model.fit.rmse,
        "voiced_frame_count": model.voiced_frame_count,
    }
