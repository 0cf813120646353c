"""Amplitude envelope demodulation and its low-frequency spectrum.

The pipeline: full-wave rectification, peak-picking envelope extraction,
moving-average smoothing, then an unwindowed DFT magnitude spectrum kept
below a cutoff. Zone detection reads rhythm bands off the spectrum after
polynomial shape-smoothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.polynomial import Polynomial

from .audio import Waveform
from .errors import DegenerateInputError, ParameterError, SingularityError

__all__ = [
    "Envelope",
    "Spectrum",
    "FrequencyZone",
    "PolyFit",
    "rectify_full_wave",
    "extract_envelope_peaks",
    "smooth_envelope",
    "dft_magnitude",
    "aems",
    "fit_polynomial",
    "detect_zones",
    "zscore",
    "spectrum_to_csv",
    "spectrum_to_dict",
]


@dataclass(frozen=True)
class Envelope:
    """Non-negative amplitude envelope on a uniform time grid."""

    values: np.ndarray
    rate: float

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DegenerateInputError("envelope needs a non-empty 1-D array")
        if self.rate <= 0:
            raise ParameterError("envelope rate must be positive")
        if np.min(arr) < -1e-12:
            raise ParameterError("envelope values must be non-negative")
        arr = np.maximum(arr, 0.0)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Spectrum:
    """Magnitude spectrum truncated at cutoff_hz; bin k sits at k*resolution_hz."""

    resolution_hz: float
    magnitudes: np.ndarray
    cutoff_hz: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.magnitudes, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DegenerateInputError("spectrum needs a non-empty magnitude array")
        if np.min(arr) < 0:
            raise ParameterError("spectrum magnitudes must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "magnitudes", arr)

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(len(self.magnitudes)) * self.resolution_hz

    def __len__(self):
        return len(self.magnitudes)


@dataclass(frozen=True)
class FrequencyZone:
    """One fuzzy rhythm band of the spectrum."""

    center_hz: float
    lo_hz: float
    hi_hz: float
    prominence: float


@dataclass(frozen=True)
class PolyFit:
    """Least-squares polynomial with coefficients in ascending powers of x."""

    degree: int
    coeffs: tuple
    domain: tuple
    rmse: float
    scaled_coeffs: tuple = field(repr=False, compare=False, default=())

    def evaluate(self, xs) -> np.ndarray:
        """Evaluate via the internally scaled basis for stability."""
        xs = np.asarray(xs, dtype=np.float64)
        lo, hi = self.domain
        if hi > lo:
            p = Polynomial(np.asarray(self.scaled_coeffs), domain=[lo, hi])
            return p(xs)
        return np.full_like(xs, self.coeffs[0], dtype=np.float64)


def rectify_full_wave(wave: Waveform) -> Waveform:
    """Replace every sample by its absolute value."""
    return Waveform(np.abs(wave.samples), wave.rate)


def extract_envelope_peaks(rectified: Waveform, window_ms=20.0, env_rate=100) -> Envelope:
    """Demodulate by peak-picking.

    Local maxima are collected over half-overlapping windows of window_ms
    and linearly interpolated onto a uniform env_rate grid; leading and
    trailing gaps take the nearest peak value.
    """
    if window_ms <= 0 or env_rate <= 0:
        raise ParameterError("window_ms and env_rate must be positive")
    x = rectified.samples
    win = max(2, int(round(window_ms * rectified.rate / 1000.0)))
    if len(x) < win:
        raise DegenerateInputError(
            f"signal of {len(x)} samples is shorter than one {window_ms} ms window"
        )
    hop = max(1, win // 2)
    frames = sliding_window_view(x, win)[::hop]
    starts = np.arange(frames.shape[0]) * hop
    peak_idx = starts + np.argmax(frames, axis=1)
    # one window may elect the same sample twice
    peak_idx = np.unique(peak_idx)
    peak_t = peak_idx / rectified.rate
    peak_v = x[peak_idx]

    n_env = max(1, int(round(len(x) * env_rate / rectified.rate)))
    grid = np.arange(n_env) / env_rate
    values = np.interp(grid, peak_t, peak_v)  # np.interp holds edge values
    return Envelope(values, float(env_rate))


def smooth_envelope(env: Envelope, window_ms=50.0) -> Envelope:
    """Centered moving average.

    The box width is rounded to an odd sample count and edges are handled by
    half-sample mirroring, which keeps the kernel doubly stochastic: the mean
    of the envelope is preserved to rounding error.
    """
    win = int(round(window_ms * env.rate / 1000.0))
    if win < 1:
        raise ParameterError("smoothing window shorter than one envelope sample")
    win = min(win, len(env))
    if win % 2 == 0:
        win -= 1
    if win <= 1:
        return env
    half = win // 2
    padded = np.pad(env.values, half, mode="symmetric")
    kernel = np.full(win, 1.0 / win)
    return Envelope(np.convolve(padded, kernel, mode="valid"), env.rate)


def dft_magnitude(env: Envelope, cutoff_hz, zero_mean=True) -> Spectrum:
    """Unwindowed DFT magnitudes of the envelope up to cutoff_hz.

    No taper, no zero padding: resolution is rate/N and bin k holds
    |X_k| of the (optionally mean-subtracted) envelope.
    """
    n = len(env)
    if n < 2:
        raise DegenerateInputError("need at least 2 envelope samples for a DFT")
    if cutoff_hz <= 0:
        raise ParameterError("cutoff_hz must be positive")
    if cutoff_hz > env.rate / 2 + 1e-9:
        raise ParameterError(
            f"cutoff {cutoff_hz} Hz exceeds the envelope Nyquist {env.rate / 2} Hz"
        )
    x = env.values - env.values.mean() if zero_mean else env.values
    spec = np.abs(np.fft.rfft(x))
    resolution = env.rate / n
    k_max = int(np.floor(cutoff_hz / resolution + 1e-9))
    k_max = min(k_max, len(spec) - 1)
    return Spectrum(
        resolution_hz=resolution,
        magnitudes=spec[: k_max + 1],
        cutoff_hz=float(cutoff_hz),
        params={"zero_mean": bool(zero_mean), "n_samples": n, "env_rate": env.rate},
    )


def aems(wave: Waveform, cutoff_hz=5.0, window_ms=20.0, env_rate=100,
         smooth_ms=50.0, zero_mean=True) -> Spectrum:
    """Full pipeline: rectify, peak-pick, smooth, DFT-magnitude below cutoff."""
    rect = rectify_full_wave(wave)
    env = extract_envelope_peaks(rect, window_ms=window_ms, env_rate=env_rate)
    env = smooth_envelope(env, window_ms=smooth_ms)
    spec = dft_magnitude(env, cutoff_hz, zero_mean=zero_mean)
    params = dict(spec.params)
    params.update(
        {
            "window_ms": float(window_ms),
            "env_rate": float(env_rate),
            "smooth_ms": float(smooth_ms),
            "cutoff_hz": float(cutoff_hz),
            "source_rate": wave.rate,
        }
    )
    return Spectrum(spec.resolution_hz, spec.magnitudes, spec.cutoff_hz, params)


def fit_polynomial(xs, ys, degree) -> PolyFit:
    """Least-squares polynomial fit.

    xs are internally shifted/scaled to [-1, 1] before solving the
    Vandermonde system; the reported coefficients are converted back to
    ascending powers of the original x.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if degree < 0:
        raise ParameterError("degree must be non-negative")
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ParameterError("xs and ys must be 1-D arrays of equal length")
    if len(xs) < degree + 1:
        raise ParameterError(
            f"{len(xs)} points cannot determine a degree-{degree} polynomial"
        )
    if len(np.unique(xs)) != len(xs):
        raise ParameterError("xs must be distinct")

    lo, hi = float(np.min(xs)), float(np.max(xs))
    if hi > lo:
        u = (2.0 * xs - (lo + hi)) / (hi - lo)
    else:
        u = np.zeros_like(xs)  # single point, degree 0 only
    basis = np.vander(u, degree + 1, increasing=True)
    sol, _res, rank, _sv = np.linalg.lstsq(basis, ys, rcond=None)
    if rank < degree + 1:
        raise SingularityError(
            f"rank-deficient system (rank {rank} < {degree + 1}) for degree {degree}"
        )
    fitted = basis @ sol
    rmse = float(np.sqrt(np.mean((fitted - ys) ** 2)))
    if hi > lo:
        coeffs = Polynomial(sol, domain=[lo, hi]).convert().coef
        coeffs = np.pad(coeffs, (0, degree + 1 - len(coeffs)))
    else:
        coeffs = sol
    return PolyFit(
        degree=int(degree),
        coeffs=tuple(float(c) for c in coeffs),
        domain=(lo, hi),
        rmse=rmse,
        scaled_coeffs=tuple(float(c) for c in sol),
    )


def _local_extrema(y):
    """Indices of strict local maxima and minima of a 1-D array."""
    maxima, minima = [], []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            maxima.append(i)
        elif y[i] < y[i - 1] and y[i] <= y[i + 1]:
            minima.append(i)
    return maxima, minima


def detect_zones(spec: Spectrum, min_prominence=0.1, min_separation_hz=0.0,
                 smooth_degree=9):
    """Frequency zones: peaks of the polynomial-smoothed spectrum.

    The spectrum shape is taken from a degree-9 polynomial fit; strict local
    maxima of that shape whose prominence reaches min_prominence times the
    shape maximum become zones. Zone bounds sit at the flanking local minima
    (or spectrum edges) and the zone center is the raw-magnitude argmax
    inside the bounds. Zones come back ordered by descending prominence.
    """
    if len(spec) == 0:
        raise DegenerateInputError("empty spectrum")
    freqs = spec.freqs
    mags = spec.magnitudes
    if len(spec) < 3:
        return []
    degree = min(smooth_degree, len(spec) - 1)
    shape = fit_polynomial(freqs, mags, degree).evaluate(freqs)

    maxima, minima = _local_extrema(shape)
    if not maxima:
        return []
    top = float(np.max(mags))
    if top <= 0:
        return []

    zones = []
    for m in maxima:
        left_candidates = [i for i in minima if i < m]
        right_candidates = [i for i in minima if i > m]
        lo_i = max(left_candidates) if left_candidates else 0
        hi_i = min(right_candidates) if right_candidates else len(shape) - 1
        prominence = float(shape[m] - max(shape[lo_i], shape[hi_i]))
        if prominence <= 0 or prominence < min_prominence * top:
            continue
        center_i = lo_i + int(np.argmax(mags[lo_i : hi_i + 1]))
        zones.append(
            FrequencyZone(
                center_hz=float(freqs[center_i]),
                lo_hz=float(freqs[lo_i]),
                hi_hz=float(freqs[hi_i]),
                prominence=prominence,
            )
        )

    zones.sort(key=lambda z: -z.prominence)
    if min_separation_hz > 0:
        kept = []
        for z in zones:
            if all(abs(z.center_hz - k.center_hz) >= min_separation_hz for k in kept):
                kept.append(z)
        zones = kept
    return zones


def zscore(values) -> np.ndarray:
    """Standardize to mean 0, sample (n-1 denominator) standard deviation 1."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < 2:
        raise DegenerateInputError("z-scoring needs at least 2 values")
    sd = float(np.std(arr, ddof=1))
    if sd == 0.0:
        raise DegenerateInputError("z-scoring needs nonzero variance")
    return (arr - arr.mean()) / sd


def spectrum_to_csv(spec: Spectrum) -> str:
    lines = ["freq_hz,magnitude"]
    for f, m in zip(spec.freqs, spec.magnitudes):
        lines.append(f"{f!r},{m!r}")
    return "\n".join(lines) + "\n"


def spectrum_to_dict(spec: Spectrum) -> dict:
    return {
        "resolution_hz": spec.resolution_hz,
        "cutoff_hz": spec.cutoff_hz,
        "magnitudes": [float(m) for m in spec.magnitudes],
        "params": dict(spec.params),
    }
