"""Tone terracing: downstep staircases, register clamps, and declination.

A three-tape machine maps lexical H/L tone strings to phonetic tone labels
(initial, upsweep, downdrift, downstep, upstep); a register model turns the
labels into pitch targets in Hz. Alternating H L H L ... produces the classic
terraced staircase: each post-low H lands below the previous one.

Run from the repository root:  python3 demos/05_tone_terracing.py
"""

from pathlib import Path

from prosotime import (
    TerracingParams,
    fit_contour,
    realize_pitch,
    synthesize_contour,
    transduce_tones,
)
from prosotime.svgplot import svg_f0_track

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

lexical = "H L H L H L H"
phonetic = transduce_tones(lexical)
targets = realize_pitch(phonetic)

print("lexical :", lexical)
print("phonetic:", " ".join(phonetic))
print("targets :", " ".join(f"{hz:6.1f}" for _, hz in targets.items))

highs = targets.targets_hz[0::2]
print("\nH-target staircase:", " > ".join(f"{h:.1f}" for h in highs))

# Long runs hit the register clamps: lows bottom out at the floor.
long_run = realize_pitch(transduce_tones("H L " * 12))
lows = long_run.targets_hz[1::2]
print(f"24-tone run: lowest L target {min(lows):.1f} Hz (floor 60), "
      f"highest H {max(long_run.targets_hz):.1f} Hz")

# A declination estimate: degree-1 contour fit over the synthesized track.
track = synthesize_contour(targets, tone_dur_ms=150.0)
model = fit_contour(track, degree=1)
print(f"\nframes: {len(track.times_s)}, declination slope "
      f"{model.fit.coeffs[1]:.2f} Hz/s (negative = downtrend)")

(OUT / "terracing.f0.svg").write_text(svg_f0_track(track, models=(model,)))

# Custom registers: a steeper downstep ratio drops the terrace faster.
steep = TerracingParams(k_dst=0.55)
steep_targets = realize_pitch(transduce_tones("H L H L H"), steep)
print("\nsteeper downstep (k_dst=0.55):",
      " ".join(f"{hz:.1f}" for _, hz in steep_targets.items))
print(f"\nSVG written to {OUT}/")
