"""Acceptance gate: ten end-to-end behavioral criteria, one pass/fail line each.

Run under pytest (`pytest tests/test_acceptance.py -v`) or standalone
(`python3 tests/test_acceptance.py`), which prints one line per criterion and
exits nonzero if any fails.
"""

import itertools
import json
import math
import re
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from prosotime import (
    Envelope,
    Waveform,
    aems,
    build_pierrehumbert,
    detect_zones,
    dft_magnitude,
    enumerate_strings,
    estimate_f0_autocorr,
    fit_polynomial,
    induce_time_tree,
    npvi,
    pfd,
    pim,
    quadrant_analysis,
    realize_pitch,
    recognize,
    rpvi,
    to_sexpr,
    transduce_tones,
    variance,
)
from prosotime.cli import run as cli_run
from prosotime.fsm import PIERREHUMBERT_ALPHABET

RESULTS = []


def _run(number, title, fn):
    try:
        detail = fn()
    except BaseException as exc:
        RESULTS.append((number, False, title))
        print(f"criterion {number:02d} FAIL  {title} :: {exc}")
        raise
    RESULTS.append((number, True, title))
    print(f"criterion {number:02d} PASS  {title}" + (f" :: {detail}" if detail else ""))


# -- 1 ----------------------------------------------------------------------

def criterion_01_calibration():
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        code = cli_run(["calibrate", "--out-dir", tmp])
        assert code == 0, f"calibrate exited {code}"
        report = json.loads((Path(tmp) / "calibrate.json").read_text())
    elapsed = time.perf_counter() - t0
    assert abs(report["peak_hz"] - 5.0) <= 0.5, report["peak_hz"]
    assert report["harmonic_hz"] == 10.0
    assert report["harmonic_magnitude"] < report["peak_magnitude"]
    assert report["pass"] is True
    assert elapsed < 1.0, f"took {elapsed:.2f} s"
    return f"peak {report['peak_hz']} Hz, harmonic smaller, {elapsed:.2f} s"


def test_criterion_01_calibration_peak_and_runtime():
    _run(1, "calibration: 5 Hz peak +/-0.5, smaller 10 Hz harmonic, <1 s", criterion_01_calibration)


# -- 2 ----------------------------------------------------------------------

def criterion_02_npvi_identity():
    values = [npvi([2, 4, 2, 4, 2, 4]), npvi([2, 4, 8, 16, 32, 64]), npvi([4, 2, 1, 2, 4, 8])]
    for v in values:
        assert abs(v - 66.67) <= 0.01, v
    assert max(values) - min(values) < 1e-9
    return f"all three = {values[0]:.4f}"


def test_criterion_02_npvi_identity_across_patterns():
    _run(2, "nPVI identity: three patterns all 66.67 +/-0.01", criterion_02_npvi_identity)


# -- 3 ----------------------------------------------------------------------

def criterion_03_reference_trees():
    from prosotime import TreeParams

    iambic = induce_time_tree(
        [("miss", 3.0), ("jones", 2.0), ("came", 3.0), ("home", 1.0)],
        TreeParams(relation="iambic", polarity="lower"),
    )
    trochaic = induce_time_tree(
        [("light", 1.0), ("house", 3.0), ("keep", 2.0), ("er", 3.0)],
        TreeParams(relation="trochaic", polarity="lower"),
    )
    assert to_sexpr(iambic) == "(r (w (w miss) (s jones)) (s (w came) (s home)))"
    assert to_sexpr(trochaic) == "(r (s (s light) (w house)) (w (s keep) (w er)))"
    return "both s-expressions byte-exact"


def test_criterion_03_reference_time_trees_byte_exact():
    _run(3, "time-tree reproduction: both worked examples byte-exact", criterion_03_reference_trees)


# -- 4 ----------------------------------------------------------------------

def criterion_04_dft_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 1025))
        rate = float(rng.choice([50.0, 100.0, 200.0]))
        values = rng.uniform(0.0, 1.0, n)
        cutoff = float(rng.uniform(rate / n, rate / 2))
        spec = dft_magnitude(Envelope(values, rate), cutoff)
        x = values - values.mean()
        m = np.arange(n)
        expect = np.array(
            [abs(np.sum(x * np.exp(-2j * np.pi * k * m / n))) for k in range(len(spec.magnitudes))]
        )
        scale = max(float(np.max(expect)), 1e-30)
        err = float(np.max(np.abs(spec.magnitudes - expect))) / scale
        worst = max(worst, err)
        assert err <= 1e-9, err
    return f"100 envelopes, worst relative error {worst:.2e}"


def test_criterion_04_dft_matches_naive_oracle():
    _run(4, "DFT oracle: 100 random envelopes within 1e-9 relative", criterion_04_dft_oracle)


# -- 5 ----------------------------------------------------------------------

_TUNE_RE = re.compile(
    r"^(%H|%L)"
    r"((ACC)+(H-|L-))+"
    r"(H%|L%)$".replace("ACC", "(H\\*|L\\*|L\\+H\\*|L\\*\\+H|H\\+L\\*|H\\*\\+L)")
)


def _oracle(tokens):
    return _TUNE_RE.match("".join(tokens)) is not None


def criterion_05_intonation_oracle():
    fsm = build_pierrehumbert()
    checked = 0
    for n in range(1, 5):
        for tokens in itertools.product(PIERREHUMBERT_ALPHABET, repeat=n):
            assert recognize(fsm, tokens) == _oracle(tokens), tokens
            checked += 1
    rng = np.random.default_rng(99)
    alphabet = list(PIERREHUMBERT_ALPHABET)
    accepted_6 = [s.split() for s in enumerate_strings(fsm, 6)]
    agreements_on_accept = 0
    for trial in range(80_000):
        if trial % 4 == 3:  # salt in strings near/inside the language
            tokens = list(accepted_6[int(rng.integers(len(accepted_6)))])
            if rng.random() < 0.5:
                tokens[int(rng.integers(len(tokens)))] = str(rng.choice(alphabet))
            tokens = tuple(tokens)
        else:
            tokens = tuple(rng.choice(alphabet, int(rng.choice([5, 6]))))
        got = recognize(fsm, tokens)
        assert got == _oracle(tokens), tokens
        agreements_on_accept += got
        checked += 1
    assert checked >= 100_000, checked
    assert agreements_on_accept > 0
    return f"{checked} strings, {agreements_on_accept} accepted, zero disagreements"


def test_criterion_05_intonation_grammar_matches_oracle():
    _run(5, "intonation grammar vs pattern oracle on >=1e5 strings", criterion_05_intonation_oracle)


# -- 6 ----------------------------------------------------------------------

def criterion_06_terracing_invariants():
    for n in range(2, 11):
        seq = realize_pitch(transduce_tones("H L " * n))
        targets = seq.targets_hz
        highs = targets[0::2]
        assert len(highs) == n
        for a, b in zip(highs, highs[1:]):
            assert a > b, f"(HL)^{n} highs must strictly fall: {highs}"
        for t in targets:
            assert 60.0 <= t <= 400.0

        rising = realize_pitch(transduce_tones("H " * n)).targets_hz
        for a, b in zip(rising, rising[1:]):
            assert b > a or a == b == 400.0, f"H^{n} must rise until ceiling: {rising}"
        for t in rising:
            assert 60.0 <= t <= 400.0
    floor_run = realize_pitch(("lc",) + ("l",) * 200).targets_hz
    assert min(floor_run) == 60.0 and max(floor_run) <= 400.0
    ceil_run = realize_pitch(("hc",) + ("h",) * 200).targets_hz
    assert max(ceil_run) == 400.0 and min(ceil_run) >= 60.0
    return "downstep terraces, upsweep rises, floor/ceiling clamps hold"


def test_criterion_06_terracing_monotonicity_and_clamps():
    _run(6, "terracing: (HL)^n highs fall, H^n rises, clamps respected", criterion_06_terracing_invariants)


# -- 7 ----------------------------------------------------------------------

def criterion_07_dual_zone():
    rate = 8000
    t = np.arange(int(5.0 * rate)) / rate
    m = (1.0 + 0.5 * np.cos(2 * np.pi * 0.8 * t) + 0.5 * np.cos(2 * np.pi * 5.0 * t)) / 2.0
    wave = Waveform(m * np.sin(2 * np.pi * 200.0 * t), rate)
    zones = detect_zones(aems(wave, cutoff_hz=8.0))
    centers = sorted(z.center_hz for z in zones)
    assert len(centers) == 2, centers
    assert abs(centers[0] - 0.8) <= 0.5, centers
    assert abs(centers[1] - 5.0) <= 0.5, centers
    return f"centers {centers[0]} and {centers[1]} Hz"


def test_criterion_07_dual_zone_recovery():
    _run(7, "dual-zone recovery: 0.8 Hz and 5 Hz centers within +/-0.5", criterion_07_dual_zone)


# -- 8 ----------------------------------------------------------------------

def criterion_08_metric_suite():
    const = [0.4] * 6
    for fn in (variance, pim, pfd, rpvi, npvi):
        assert fn(const) == 0.0, fn.__name__

    rng = np.random.default_rng(7)
    for _ in range(200):
        xs = rng.uniform(0.05, 2.0, int(rng.integers(2, 25)))
        k = float(rng.uniform(0.1, 9.0))
        c = float(rng.uniform(0.0, 5.0))
        assert math.isclose(variance(xs + c), variance(xs), rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(variance(k * xs), k * k * variance(xs), rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(pim(k * xs), pim(xs), rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(pfd(k * xs), pfd(xs), rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(npvi(k * xs), npvi(xs), rel_tol=1e-9, abs_tol=1e-12)
        assert math.isclose(rpvi(k * xs), k * rpvi(xs), rel_tol=1e-9, abs_tol=1e-12)
        rev = xs[::-1]
        for fn in (variance, pim, pfd, rpvi, npvi):
            assert math.isclose(fn(rev), fn(xs), rel_tol=1e-12, abs_tol=1e-12)

    partitions = 0
    for _ in range(1000):
        n = int(rng.integers(3, 40))
        xs = rng.uniform(0.01, 3.0, n)
        stats = quadrant_analysis(xs)
        assert stats.ll + stats.ss + stats.ls + stats.sl + stats.origin == n - 1
        partitions += 1
    return f"zeros, invariances, {partitions} quadrant partitions"


def test_criterion_08_metric_zeros_invariances_partition():
    _run(8, "metric suite: zeros, invariances, quadrant partition x1000", criterion_08_metric_suite)


# -- 9 ----------------------------------------------------------------------

def criterion_09_polynomial_recovery():
    rng = np.random.default_rng(55)
    xs = np.linspace(0.0, 3.0, 64)
    for degree in range(10):
        coeffs = rng.uniform(-2.0, 2.0, degree + 1)
        ys = np.polynomial.polynomial.polyval(xs, coeffs)
        fit = fit_polynomial(xs, ys, degree)
        assert np.max(np.abs(fit.coeffs - coeffs)) <= 1e-6, degree

    noisy = np.sin(2.5 * xs) + 0.05 * rng.standard_normal(len(xs))
    rmses = [fit_polynomial(xs, noisy, d).rmse for d in range(10)]
    for lo, hi in zip(rmses[1:], rmses[:-1]):
        assert lo <= hi + 1e-12, rmses
    return "degrees 0-9 exact within 1e-6, rmse non-increasing"


def test_criterion_09_polynomial_recovery_and_rmse():
    _run(9, "polynomial recovery: degrees 0-9 within 1e-6, rmse monotone", criterion_09_polynomial_recovery)


# -- 10 ---------------------------------------------------------------------

def criterion_10_f0_sanity():
    rate = 16000
    t = np.arange(rate) / rate
    tone = Waveform(0.8 * np.sin(2 * np.pi * 200.0 * t), rate)
    track = estimate_f0_autocorr(tone)
    _, voiced = track.voiced_frames()
    assert len(voiced) > 0
    median = float(np.median(voiced))
    assert abs(median - 200.0) <= 2.0, median

    silence = estimate_f0_autocorr(Waveform(np.zeros(rate), rate))
    assert silence.voiced_count == 0
    return f"median {median:.3f} Hz, silence fully unvoiced"


def test_criterion_10_f0_median_and_silence():
    _run(10, "F0 sanity: 200 Hz within +/-2, silence unvoiced", criterion_10_f0_sanity)


# ---------------------------------------------------------------------------

def main():
    checks = [
        (1, "calibration: 5 Hz peak +/-0.5, smaller 10 Hz harmonic, <1 s", criterion_01_calibration),
        (2, "nPVI identity: three patterns all 66.67 +/-0.01", criterion_02_npvi_identity),
        (3, "time-tree reproduction: both worked examples byte-exact", criterion_03_reference_trees),
        (4, "DFT oracle: 100 random envelopes within 1e-9 relative", criterion_04_dft_oracle),
        (5, "intonation grammar vs pattern oracle on >=1e5 strings", criterion_05_intonation_oracle),
        (6, "terracing: (HL)^n highs fall, H^n rises, clamps respected", criterion_06_terracing_invariants),
        (7, "dual-zone recovery: 0.8 Hz and 5 Hz centers within +/-0.5", criterion_07_dual_zone),
        (8, "metric suite: zeros, invariances, quadrant partition x1000", criterion_08_metric_suite),
        (9, "polynomial recovery: degrees 0-9 within 1e-6, rmse monotone", criterion_09_polynomial_recovery),
        (10, "F0 sanity: 200 Hz within +/-2, silence unvoiced", criterion_10_f0_sanity),
    ]
    failures = 0
    for number, title, fn in checks:
        try:
            _run(number, title, fn)
        except BaseException:
            failures += 1
    print(f"\n{len(checks) - failures}/{len(checks)} criteria passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
