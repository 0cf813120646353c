"""Waveform container, RIFF/WAVE reading and test-signal synthesis.

All downstream analysis consumes the Waveform type defined here. The WAV
reader is deliberately small: it honours the `fmt ` and `data` chunks of a
little-endian RIFF file, ignores everything else, and rejects compressed
formats outright.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, FormatError, ParameterError, ParseError

__all__ = [
    "Waveform",
    "read_wav",
    "write_wav_pcm16",
    "synthesize_am",
    "resample_linear",
]


@dataclass(frozen=True)
class Waveform:
    """Mono sampled signal with amplitudes in [-1, 1]."""

    samples: np.ndarray
    rate: int

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DegenerateInputError("waveform needs a non-empty 1-D sample array")
        if int(self.rate) <= 0:
            raise ParameterError(f"sample rate must be positive, got {self.rate}")
        if np.max(np.abs(arr)) > 1.0 + 1e-12:
            raise ParameterError("waveform samples must lie within [-1, 1]")
        arr = np.clip(arr, -1.0, 1.0)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "rate", int(self.rate))

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.rate

    def __len__(self):
        return len(self.samples)


# WAVE format tags we accept: 1 = integer PCM, 3 = IEEE float.
_WAVE_PCM = 1
_WAVE_IEEE_FLOAT = 3


def read_wav(path) -> Waveform:
    """Read a RIFF/WAVE file into a mono Waveform.

    Accepts PCM 8/16-bit and IEEE float-32 data with 1 or 2 channels.
    Stereo is downmixed by the per-sample arithmetic mean; integer samples
    are scaled by 1/2^(bits-1).
    """
    with open(path, "rb") as fh:
        data = fh.read()

    if len(data) < 12:
        raise ParseError("file too short for a RIFF header", offset=len(data))
    if data[0:4] != b"RIFF":
        raise FormatError("missing RIFF magic in header chunk")
    if data[8:12] != b"WAVE":
        raise FormatError("RIFF form type is not WAVE")

    fmt = None
    payload = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body_start = pos + 8
        if body_start + size > len(data):
            raise ParseError(
                f"chunk {cid!r} claims {size} bytes beyond end of file",
                offset=pos,
            )
        if cid == b"fmt ":
            if size < 16:
                raise ParseError("fmt chunk shorter than 16 bytes", offset=pos)
            fmt = struct.unpack_from("<HHIIHH", data, body_start)
        elif cid == b"data":
            payload = data[body_start : body_start + size]
        pos = body_start + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise FormatError("no `fmt ` chunk found")
    if payload is None:
        raise FormatError("no `data` chunk found")

    audio_format, channels, rate, _byte_rate, _block_align, bits = fmt
    if channels not in (1, 2):
        raise FormatError(f"`fmt ` chunk: unsupported channel count {channels}")
    if audio_format == _WAVE_PCM and bits == 16:
        raw = np.frombuffer(payload[: len(payload) // 2 * 2], dtype="<i2")
        samples = raw.astype(np.float64) / 32768.0
    elif audio_format == _WAVE_PCM and bits == 8:
        raw = np.frombuffer(payload, dtype=np.uint8)
        samples = (raw.astype(np.float64) - 128.0) / 128.0
    elif audio_format == _WAVE_IEEE_FLOAT and bits == 32:
        raw = np.frombuffer(payload[: len(payload) // 4 * 4], dtype="<f4")
        samples = np.clip(raw.astype(np.float64), -1.0, 1.0)
    else:
        raise FormatError(
            f"`fmt ` chunk: unsupported codec (format tag {audio_format}, "
            f"{bits}-bit); only PCM 8/16-bit and IEEE float-32 are read"
        )

    if channels == 2:
        samples = samples[: len(samples) // 2 * 2].reshape(-1, 2).mean(axis=1)
    if len(samples) == 0:
        raise ParseError("data chunk contains no samples", offset=len(data))
    return Waveform(samples, rate)


def write_wav_pcm16(path, wave: Waveform) -> None:
    """Write 16-bit PCM mono. Exists for fixtures and demos only."""
    ints = np.clip(np.rint(wave.samples * 32768.0), -32768, 32767).astype("<i2")
    payload = ints.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        _WAVE_PCM,
        1,
        wave.rate,
        wave.rate * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def synthesize_am(carrier_hz, mod_hz, depth, dur_s, rate) -> Waveform:
    """Amplitude-modulated sinusoid, normalized so peak |x| <= 1.

    x(t) = [(1 + depth*cos(2*pi*mod_hz*t)) / (1 + depth)] * sin(2*pi*carrier_hz*t)
    """
    rate = int(rate)
    if rate <= 0:
        raise ParameterError("rate must be positive")
    if not carrier_hz < rate / 2:
        raise ParameterError(
            f"carrier {carrier_hz} Hz violates Nyquist for rate {rate}"
        )
    if not mod_hz < carrier_hz:
        raise ParameterError("modulation frequency must be below the carrier")
    if not 0.0 <= depth <= 1.0:
        raise ParameterError("depth must lie in [0, 1]")
    n = int(round(dur_s * rate))
    if n <= 0:
        raise ParameterError("duration too short for one sample")
    t = np.arange(n) / rate
    modulator = (1.0 + depth * np.cos(2.0 * np.pi * mod_hz * t)) / (1.0 + depth)
    return Waveform(modulator * np.sin(2.0 * np.pi * carrier_hz * t), rate)


def resample_linear(wave: Waveform, new_rate) -> Waveform:
    """Resample by linear interpolation; duration kept within one period."""
    new_rate = int(new_rate)
    if new_rate <= 0:
        raise ParameterError("new_rate must be positive")
    if new_rate == wave.rate:
        return wave
    n_new = max(1, int(round(len(wave) * new_rate / wave.rate)))
    t_old = np.arange(len(wave)) / wave.rate
    t_new = np.arange(n_new) / new_rate
    return Waveform(np.interp(t_new, t_old, wave.samples), new_rate)
