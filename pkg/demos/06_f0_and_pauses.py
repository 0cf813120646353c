"""F0 estimation, pause-based segmentation, and polynomial contour models.

We synthesize a two-phrase utterance stand-in -- a rising tone, a long pause,
a falling tone -- then recover the pitch track by autocorrelation, split the
signal into inter-pausal units, and fit a low-order polynomial per unit.

Run from the repository root:  python3 demos/06_f0_and_pauses.py
"""

from pathlib import Path

import numpy as np

from prosotime import (
    Waveform,
    estimate_f0_autocorr,
    fit_contour,
    segment_ipus,
)
from prosotime.svgplot import svg_f0_track

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

RATE = 16000


def sweep(f_start, f_end, dur_s, amp=0.8):
    t = np.arange(int(dur_s * RATE)) / RATE
    # linear frequency sweep; phase is the integral of the instantaneous rate
    phase = 2 * np.pi * (f_start * t + (f_end - f_start) / (2 * dur_s) * t**2)
    return amp * np.sin(phase)


signal = np.concatenate([
    sweep(110.0, 180.0, 0.8),        # rising phrase
    np.zeros(int(0.35 * RATE)),      # pause well above the bridge threshold
    sweep(200.0, 120.0, 0.9),        # falling phrase
])
wave = Waveform(signal, RATE)

track = estimate_f0_autocorr(wave)
times, f0 = track.voiced_frames()
print(f"frames: {len(track.times_s)}, voiced: {track.voiced_count}, "
      f"median F0: {np.median(f0):.1f} Hz")

ipus = segment_ipus(wave)
print(f"\ninter-pausal units: {len(ipus)}")
for k, ipu in enumerate(ipus):
    print(f"  unit {k}: [{ipu.start_s:.2f}, {ipu.end_s:.2f}] s")

models = []
for k, ipu in enumerate(ipus):
    model = fit_contour(track, degree=1, domain=ipu)
    models.append(model)
    slope = model.fit.coeffs[1]
    direction = "rising" if slope > 0 else "falling"
    print(f"  unit {k}: slope {slope:+7.1f} Hz/s ({direction}), "
          f"{model.voiced_frame_count} voiced frames, rmse {model.fit.rmse:.1f}")

(OUT / "two_phrases.f0.svg").write_text(svg_f0_track(track, models=tuple(models)))
print(f"\nSVG written to {OUT}/")
