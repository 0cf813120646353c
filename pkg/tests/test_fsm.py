"""Multi-tape machines: intonation grammar recognition and tone terracing."""

import itertools
import re

import numpy as np
import pytest

from prosotime import (
    AlphabetError,
    ParameterError,
    PitchTargetSequence,
    TerracingParams,
    ToneSequence,
    build_pierrehumbert,
    build_terracing,
    enumerate_strings,
    realize_pitch,
    recognize,
    synthesize_contour,
    transduce_tones,
)
from prosotime.fsm import PIERREHUMBERT_ALPHABET, PITCH_ACCENTS, fsm_to_dict

BOUNDARY_INITIAL = ("%H", "%L")
PHRASE_ACCENTS = ("H-", "L-")
BOUNDARY_FINAL = ("H%", "L%")

ORACLE_RE = re.compile(
    r"^(%H|%L)"                                   # initial boundary tone
    r"((ACC)+(H-|L-))+"                           # one or more intermediate groups
    r"(H%|L%)$".replace("ACC", "(H\\*|L\\*|L\\+H\\*|L\\*\\+H|H\\+L\\*|H\\*\\+L)")
)


def oracle_accepts(tokens):
    """Regex-on-token-string reference for the intonation grammar."""
    for tok in tokens:
        if tok not in PIERREHUMBERT_ALPHABET:
            raise ValueError(tok)
    return ORACLE_RE.match("".join(tokens)) is not None


class TestIntonationGrammar:
    def test_minimal_tune_accepted(self):
        fsm = build_pierrehumbert()
        assert recognize(fsm, "%H H* H- H%")
        assert recognize(fsm, ["%L", "L*+H", "L-", "L%"])

    def test_iterated_accents_and_groups(self):
        fsm = build_pierrehumbert()
        assert recognize(fsm, "%H H* H* H* H- H%")
        assert recognize(fsm, "%H H* H- L* L- H%")

    def test_rejects_malformed(self):
        fsm = build_pierrehumbert()
        assert not recognize(fsm, "%H H%")                 # no accent, no phrase tone
        assert not recognize(fsm, "H* H- H%")              # missing initial boundary
        assert not recognize(fsm, "%H H* H%")              # missing phrase accent
        assert not recognize(fsm, "%H H* H- H% H%")        # trailing garbage
        assert not recognize(fsm, [])                      # empty

    def test_unknown_symbol_raises(self):
        fsm = build_pierrehumbert()
        with pytest.raises(AlphabetError):
            recognize(fsm, "%H X* H- H%")

    def test_enumeration_counts(self):
        fsm = build_pierrehumbert()
        assert enumerate_strings(fsm, 3) == []
        strings = enumerate_strings(fsm, 4)
        # shortest tunes: initial boundary x accent x phrase accent x final boundary
        expect = sorted(
            " ".join(t)
            for t in itertools.product(BOUNDARY_INITIAL, PITCH_ACCENTS,
                                       PHRASE_ACCENTS, BOUNDARY_FINAL)
        )
        assert len(strings) == 2 * len(PITCH_ACCENTS) * 2 * 2  # 48
        assert strings == expect

    def test_enumerated_strings_all_recognized(self):
        fsm = build_pierrehumbert()
        for s in enumerate_strings(fsm, 5):
            assert recognize(fsm, s)

    def test_agrees_with_pattern_oracle_exhaustive_short(self):
        fsm = build_pierrehumbert()
        checked = 0
        for n in range(1, 5):
            for tokens in itertools.product(PIERREHUMBERT_ALPHABET, repeat=n):
                assert recognize(fsm, tokens) == oracle_accepts(tokens), tokens
                checked += 1
        assert checked == 12 + 12**2 + 12**3 + 12**4

    def test_agrees_with_pattern_oracle_random_long(self):
        fsm = build_pierrehumbert()
        rng = np.random.default_rng(1234)
        alphabet = list(PIERREHUMBERT_ALPHABET)
        # uniform random length-5/6 strings rarely hit the language, so mix in
        # mutated accepted strings to exercise the accepting region too
        accepted_pool = [s.split() for s in enumerate_strings(build_pierrehumbert(), 6)]
        hits = 0
        for trial in range(100_000):
            if trial % 2 == 0:
                n = int(rng.choice([5, 6]))
                tokens = tuple(rng.choice(alphabet, n))
            else:
                base = list(accepted_pool[int(rng.integers(len(accepted_pool)))])
                if rng.random() < 0.5:  # random single-symbol mutation
                    base[int(rng.integers(len(base)))] = str(rng.choice(alphabet))
                tokens = tuple(base)
            got = recognize(fsm, tokens)
            assert got == oracle_accepts(tokens), tokens
            hits += got
        assert hits > 0  # the accepting region was actually sampled


class TestMachineShape:
    def test_pierrehumbert_dict(self):
        d = fsm_to_dict(build_pierrehumbert())
        assert d["tapes"] == 1
        assert d["start"] in d["states"]
        assert set(d["finals"]) <= set(d["states"])

    def test_terracing_dict_has_three_tapes(self):
        d = fsm_to_dict(build_terracing())
        assert d["tapes"] == 3
        labels = {tuple(t["labels"]) for t in d["transitions"]}
        assert ("H", "hc", "init_high") in labels
        assert ("L", "!l", "downstep") in labels


class TestToneTransduction:
    def test_alternating_tones(self):
        assert transduce_tones("H L H L H") == ("hc", "!l", "^h", "!l", "^h")

    def test_level_run(self):
        assert transduce_tones("H H H") == ("hc", "h", "h")
        assert transduce_tones("L L L") == ("lc", "l", "l")

    def test_empty_input(self):
        assert transduce_tones("") == ()

    def test_tone_sequence_wrapper(self):
        seq = ToneSequence.parse("H L")
        assert transduce_tones(seq) == ("hc", "!l")

    def test_bad_tone_rejected(self):
        with pytest.raises(AlphabetError):
            transduce_tones("H M L")


class TestPitchRealization:
    def test_level_high_run_upsweeps(self):
        targets = realize_pitch(("hc", "h", "h")).targets_hz
        assert targets[0] == pytest.approx(170.0)
        assert targets[1] == pytest.approx(173.4)
        assert targets[2] == pytest.approx(176.868)

    def test_alternation_values(self):
        labels = transduce_tones("H L H L H")
        targets = realize_pitch(labels).targets_hz
        assert targets == pytest.approx((170.0, 119.0, 153.0, 107.1, 137.7))

    def test_downstep_terraces_highs(self):
        for n in range(2, 11):
            labels = transduce_tones("H L " * n)
            targets = realize_pitch(labels).targets_hz
            highs = targets[0::2]
            for a, b in zip(highs, highs[1:]):
                assert a > b, f"H targets must strictly fall, n={n}"

    def test_lows_fall_until_floor(self):
        labels = transduce_tones("H L " * 10)
        lows = realize_pitch(labels).targets_hz[1::2]
        for a, b in zip(lows, lows[1:]):
            assert a > b or a == b == 60.0

    def test_high_run_strictly_rises_until_ceiling(self):
        for n in range(2, 11):
            labels = transduce_tones("H " * n)
            targets = realize_pitch(labels).targets_hz
            for a, b in zip(targets, targets[1:]):
                assert b > a or a == b == 400.0

    def test_clamps_respected(self):
        long_low = realize_pitch(("lc",) + ("l",) * 200)
        assert min(long_low.targets_hz) == 60.0
        long_high = realize_pitch(("hc",) + ("h",) * 200)
        assert max(long_high.targets_hz) == 400.0
        for t in long_low.targets_hz + long_high.targets_hz:
            assert 60.0 <= t <= 400.0

    def test_upstep_after_low_register(self):
        targets = realize_pitch(("lc", "^h")).targets_hz
        assert targets[0] == pytest.approx(110.0)
        assert targets[1] == pytest.approx(153.0)  # 0.9 * initial high register

    def test_initials_only_at_start(self):
        with pytest.raises(ParameterError):
            realize_pitch(("hc", "lc"))

    def test_custom_params(self):
        p = TerracingParams(p_h0=200.0, k_dst=0.5)
        targets = realize_pitch(transduce_tones("H L"), p).targets_hz
        assert targets == pytest.approx((200.0, 100.0))

    def test_param_validation(self):
        with pytest.raises(ParameterError):
            TerracingParams(k_dd=1.1)  # downdrift must lower the register
        with pytest.raises(ParameterError):
            TerracingParams(floor_hz=500.0, ceiling_hz=400.0)
        with pytest.raises(ParameterError):
            TerracingParams(p_h0=100.0, p_l0=150.0)  # high start must exceed low


class TestContourSynthesis:
    def test_frame_layout(self):
        targets = realize_pitch(transduce_tones("H L H"))
        track = synthesize_contour(targets, tone_dur_ms=150.0)
        assert track.hop_s == pytest.approx(0.01)
        assert len(track.times_s) == 45  # 3 tones x 15 frames
        assert track.voiced_count == 45

    def test_values_step_through_targets(self):
        targets = realize_pitch(transduce_tones("H L"))
        track = synthesize_contour(targets, tone_dur_ms=20.0)
        assert track.f0_hz[0] == pytest.approx(170.0)
        assert track.f0_hz[-1] == pytest.approx(119.0)

    def test_empty_targets_rejected(self):
        from prosotime import DegenerateInputError

        with pytest.raises(DegenerateInputError):
            synthesize_contour(PitchTargetSequence(()))
