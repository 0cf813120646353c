"""Batch command line: analysis subcommands emitting JSON, CSV and SVG.

Every subcommand is deterministic — identical invocations produce
byte-identical artifacts — and writes only beneath the output directory
(--out-dir, else $PROSOTIME_OUT_DIR, else ./prosotime_out).  Exit codes:
0 success, 1 analysis error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from .aems import aems as run_aems
from .aems import detect_zones, fit_polynomial, spectrum_to_csv, spectrum_to_dict, zscore
from .annot import AnnotationDoc, durations, parse_csv_annotation, parse_textgrid
from .audio import read_wav, synthesize_am
from .errors import AnalysisError, DegenerateInputError
from .fsm import (
    TerracingParams,
    build_pierrehumbert,
    enumerate_strings,
    realize_pitch,
    recognize,
    synthesize_contour,
    transduce_tones,
)
from .pitch import (
    IPU,
    contour_model_to_dict,
    estimate_f0_autocorr,
    f0_track_to_csv,
    fit_contour,
    parse_f0_csv,
    segment_ipus,
)
from .rhythm import metrics_report, quadrant_analysis, quadrant_to_csv
from .svgplot import svg_f0_track, svg_heatmap, svg_quadrants, svg_spectrum, svg_timetree
from .timetree import TreeParams, induce_spectral_hierarchy, induce_time_tree, to_sexpr, tree_to_dict

OUT_DIR_ENV = "PROSOTIME_OUT_DIR"
FORMATS = ("json", "csv", "svg")


class _UsageError(Exception):
    """Command-line misuse that argparse cannot express; exits with code 2."""


def _dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _stem(path: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", Path(path).stem) or "input"


class _Sink:
    """Writes artifacts under one directory, refusing anything outside it."""

    def __init__(self, out_dir: Path, formats: set[str]):
        self.out_dir = out_dir
        self.formats = formats
        self.written: list[str] = []

    def put(self, fmt: str, name: str, text: str) -> None:
        if fmt not in self.formats:
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        target = (self.out_dir / name).resolve()
        if self.out_dir.resolve() not in target.parents:
            raise AnalysisError(f"refusing to write outside output directory: {name}")
        target.write_text(text, encoding="utf-8")
        self.written.append(str(target))


def _zone_dicts(zones) -> list[dict]:
    return [
        {"center_hz": z.center_hz, "lo_hz": z.lo_hz, "hi_hz": z.hi_hz, "prominence": z.prominence}
        for z in zones
    ]


def _spectrum_artifacts(sink: _Sink, stem: str, spec, zones) -> dict:
    """Shared spectrum emission: CSV, line plot and heatmap; returns poly info."""
    degree = min(9, max(1, len(spec) - 1))
    fit = fit_polynomial(spec.freqs, spec.magnitudes, degree)
    sink.put("csv", f"{stem}.spectrum.csv", spectrum_to_csv(spec))
    sink.put("svg", f"{stem}.spectrum.svg", svg_spectrum(spec, fit, zones))
    if len(spec) >= 2:
        sink.put("svg", f"{stem}.heatmap.svg", svg_heatmap(spec))
    return {"poly_degree": degree, "poly_coeffs": list(fit.coeffs), "poly_rmse": fit.rmse}


def _load_annotation(path: str) -> AnnotationDoc:
    data = Path(path).read_bytes()
    head = data.lstrip(b"\xef\xbb\xbf\xff\xfe\x00")[:64]
    if path.lower().endswith((".textgrid", ".grid")) or head.startswith(b"File type"):
        return parse_textgrid(data, source=path)
    return parse_csv_annotation(data, source=path)


def _pick_tier(doc: AnnotationDoc, name: str | None):
    if name is None:
        if not doc.tiers:
            raise DegenerateInputError(f"{doc.source}: no interval tiers")
        return doc.tiers[0]
    try:
        return doc.tier(name)
    except KeyError:
        raise AnalysisError(
            f"{doc.source}: no tier named {name!r} (have {list(doc.tier_names)})"
        ) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_calibrate(args, sink: _Sink) -> dict:
    params = {"carrier_hz": 200.0, "mod_hz": 5.0, "depth": 1.0, "dur_s": 2.0, "rate": 16000}
    wave = synthesize_am(**params)
    spec = run_aems(wave, cutoff_hz=20.0)
    zones = detect_zones(spec)
    mags = spec.magnitudes
    peak_bin = int(np.argmax(mags))
    harmonic_bin = int(round(10.0 / spec.resolution_hz))
    peak_hz = float(spec.freqs[peak_bin])
    ok = abs(peak_hz - 5.0) <= spec.resolution_hz and mags[harmonic_bin] < mags[peak_bin]
    report = {
        "subcommand": "calibrate",
        "params": {**params, "cutoff_hz": 20.0},
        "resolution_hz": spec.resolution_hz,
        "peak_hz": peak_hz,
        "peak_magnitude": float(mags[peak_bin]),
        "harmonic_hz": float(spec.freqs[harmonic_bin]),
        "harmonic_magnitude": float(mags[harmonic_bin]),
        "zones": _zone_dicts(zones),
        "pass": bool(ok),
    }
    report.update(_spectrum_artifacts(sink, "calibrate", spec, zones))
    sink.put("json", "calibrate.json", _dumps(report))
    print(f"peak_hz={peak_hz} harmonic_hz={report['harmonic_hz']} pass={str(ok).lower()}")
    return report


def _cmd_aems(args, sink: _Sink) -> dict:
    wave = read_wav(args.wav)
    spec = run_aems(
        wave,
        cutoff_hz=args.cutoff_hz,
        window_ms=args.window_ms,
        env_rate=args.env_rate,
        smooth_ms=args.smooth_ms,
    )
    zones = detect_zones(
        spec, min_prominence=args.min_prominence, min_separation_hz=args.min_separation_hz
    )
    stem = _stem(args.wav)
    report = {
        "subcommand": "aems",
        "input": args.wav,
        "params": dict(spec.params),
        "resolution_hz": spec.resolution_hz,
        "cutoff_hz": spec.cutoff_hz,
        "n_bins": len(spec),
        "zones": _zone_dicts(zones),
        "dominant_hz": zones[0].center_hz if zones else None,
    }
    report.update(_spectrum_artifacts(sink, stem, spec, zones))
    sink.put("json", f"{stem}.aems.json", _dumps(report))
    dom = report["dominant_hz"]
    print(f"bins={len(spec)} resolution_hz={spec.resolution_hz} dominant_hz={dom}")
    return report


def _cmd_metrics(args, sink: _Sink) -> dict:
    doc = _load_annotation(args.annot)
    tier = _pick_tier(doc, args.tier)
    exclude = set(args.exclude) if args.exclude is not None else None
    seq = durations(tier) if exclude is None else durations(tier, exclude)
    if len(seq) < 2:
        raise DegenerateInputError(
            f"tier {tier.name!r} leaves {len(seq)} usable durations; need >= 2"
        )
    flat = metrics_report(seq)
    stem = _stem(args.annot)
    try:
        quads = quadrant_analysis(seq)
        quad_report = {"counts": quads.counts, "index": quads.index}
        sink.put("csv", f"{stem}.quadrants.csv", quadrant_to_csv(quads))
        sink.put("svg", f"{stem}.quadrants.svg", svg_quadrants(quads))
    except DegenerateInputError:
        quad_report = None
    report = {
        "subcommand": "metrics",
        "input": args.annot,
        "tier": tier.name,
        "n": flat["n"],
        "metrics": {k: flat[k] for k in ("variance", "pim", "pfd", "rpvi", "npvi")},
        "params": flat["params"],
        "quadrants": quad_report,
    }
    sink.put("json", f"{stem}.metrics.json", _dumps(report))
    line = " ".join(f"{k}={report['metrics'][k]:.4f}" for k in sorted(report["metrics"]))
    print(f"tier={tier.name} n={flat['n']} {line}")
    return report


def _tree_params(args) -> TreeParams:
    return TreeParams(relation=args.relation, polarity=args.polarity, arity=args.arity)


def _cmd_timetree(args, sink: _Sink) -> dict:
    doc = _load_annotation(args.annot)
    tier = _pick_tier(doc, args.tier)
    exclude = set(args.exclude) if args.exclude is not None else None
    seq = durations(tier) if exclude is None else durations(tier, exclude)
    if len(seq) == 0:
        raise DegenerateInputError(f"tier {tier.name!r} has no usable durations")
    params = _tree_params(args)
    tree = induce_time_tree(seq, params)
    sexpr = to_sexpr(tree)
    stem = _stem(args.annot)
    report = {
        "subcommand": "timetree",
        "input": args.annot,
        "tier": tier.name,
        "params": {"relation": params.relation, "polarity": params.polarity, "arity": params.arity},
        "n": len(seq),
        "sexpr": sexpr,
        "tree": tree_to_dict(tree),
    }
    sink.put("json", f"{stem}.timetree.json", _dumps(report))
    sink.put("svg", f"{stem}.timetree.svg", svg_timetree(tree))
    print(sexpr)
    return report


def _cmd_spectree(args, sink: _Sink) -> dict:
    wave = read_wav(args.wav)
    spec = run_aems(wave, cutoff_hz=args.cutoff_hz)
    params = _tree_params(args)
    tree = induce_spectral_hierarchy(spec, params)
    sexpr = to_sexpr(tree)
    stem = _stem(args.wav)
    report = {
        "subcommand": "spectree",
        "input": args.wav,
        "aems_params": dict(spec.params),
        "params": {"relation": params.relation, "polarity": "higher", "arity": params.arity},
        "n_bins": len(spec),
        "sexpr": sexpr,
        "tree": tree_to_dict(tree),
    }
    sink.put("json", f"{stem}.spectree.json", _dumps(report))
    sink.put("svg", f"{stem}.spectree.svg", svg_timetree(tree))
    print(sexpr)
    return report


def _cmd_tone_gen(args, sink: _Sink) -> dict:
    params = TerracingParams(
        p_h0=args.p_h0,
        p_l0=args.p_l0,
        k_usw=args.k_usw,
        k_dd=args.k_dd,
        k_dst=args.k_dst,
        k_ter=args.k_ter,
        floor_hz=args.floor_hz,
        ceiling_hz=args.ceiling_hz,
    )
    lexical = args.tones.split()
    phonetic = transduce_tones(args.tones)
    targets = realize_pitch(phonetic, params)
    report = {
        "subcommand": "tone-gen",
        "lexical": lexical,
        "phonetic": list(phonetic),
        "targets": [{"label": lab, "hz": hz} for lab, hz in targets.items],
        "params": {
            "p_h0": params.p_h0,
            "p_l0": params.p_l0,
            "k_usw": params.k_usw,
            "k_dd": params.k_dd,
            "k_dst": params.k_dst,
            "k_ter": params.k_ter,
            "floor_hz": params.floor_hz,
            "ceiling_hz": params.ceiling_hz,
        },
        "tone_dur_ms": args.tone_dur_ms,
    }
    if len(targets):
        track = synthesize_contour(targets, tone_dur_ms=args.tone_dur_ms)
        report["n_frames"] = len(track)
        sink.put("csv", "tones.f0.csv", f0_track_to_csv(track))
        sink.put("svg", "tones.f0.svg", svg_f0_track(track))
    else:
        report["n_frames"] = 0
    sink.put("json", "tones.json", _dumps(report))
    print(" ".join(phonetic) if phonetic else "(empty)")
    print(" ".join(f"{hz:.1f}" for _, hz in targets.items))
    return report


def _cmd_intonation(args, sink: _Sink) -> dict:
    fsm = build_pierrehumbert()
    if args.mode == "check":
        if args.string is None:
            raise AnalysisError("intonation check needs a symbol string")
        accepted = recognize(fsm, args.string)
        report = {
            "subcommand": "intonation",
            "mode": "check",
            "input": args.string,
            "accepted": bool(accepted),
        }
        print(f"accepted={str(bool(accepted)).lower()}")
    else:
        strings = enumerate_strings(fsm, args.max_len)
        report = {
            "subcommand": "intonation",
            "mode": "enum",
            "max_len": args.max_len,
            "count": len(strings),
            "strings": strings,
        }
        print(f"count={len(strings)}")
    sink.put("json", "intonation.json", _dumps(report))
    return report


def _cmd_f0(args, sink: _Sink) -> dict:
    wave = read_wav(args.wav)
    track = estimate_f0_autocorr(
        wave,
        fmin=args.fmin,
        fmax=args.fmax,
        frame_ms=args.frame_ms,
        hop_ms=args.hop_ms,
        voicing_ratio=args.voicing_ratio,
    )
    ipus = segment_ipus(wave)
    _, voiced = track.voiced_frames()
    stem = _stem(args.wav)
    report = {
        "subcommand": "f0",
        "input": args.wav,
        "params": {
            "fmin": args.fmin,
            "fmax": args.fmax,
            "frame_ms": args.frame_ms,
            "hop_ms": args.hop_ms,
            "voicing_ratio": args.voicing_ratio,
        },
        "n_frames": len(track),
        "voiced_frames": track.voiced_count,
        "hop_s": track.hop_s,
        "median_f0_hz": float(np.median(voiced)) if len(voiced) else None,
        "ipus": [{"start_s": u.start_s, "end_s": u.end_s} for u in ipus],
    }
    sink.put("json", f"{stem}.f0.json", _dumps(report))
    sink.put("csv", f"{stem}.f0.csv", f0_track_to_csv(track))
    sink.put("svg", f"{stem}.f0.svg", svg_f0_track(track))
    print(
        f"frames={len(track)} voiced={track.voiced_count} "
        f"median_f0_hz={report['median_f0_hz']} ipus={len(ipus)}"
    )
    return report


def _cmd_contour_fit(args, sink: _Sink) -> dict:
    track = parse_f0_csv(Path(args.f0csv).read_text(encoding="utf-8"))
    domain = None
    if args.start_s is not None or args.end_s is not None:
        if args.start_s is None or args.end_s is None:
            raise _UsageError("--start-s and --end-s must be given together")
        domain = IPU(start_s=args.start_s, end_s=args.end_s)
    model = fit_contour(track, args.degree, domain)
    stem = _stem(args.f0csv)
    report = {
        "subcommand": "contour-fit",
        "input": args.f0csv,
        "model": contour_model_to_dict(model),
    }
    sink.put("json", f"{stem}.contour.json", _dumps(report))
    sink.put("svg", f"{stem}.contour.svg", svg_f0_track(track, [model]))
    coeffs = " ".join(f"{c:.4g}" for c in model.fit.coeffs)
    print(f"degree={model.fit.degree} rmse={model.fit.rmse:.4g} coeffs=[{coeffs}]")
    return report


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="reserved; all analyses are deterministic")
    common.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    common.add_argument("--out-dir", default=None, help=f"output directory (default ${OUT_DIR_ENV} or ./prosotime_out)")
    common.add_argument("--formats", default="json,csv,svg", help="comma list from json,csv,svg")

    tree_flags = argparse.ArgumentParser(add_help=False)
    tree_flags.add_argument("--relation", choices=("iambic", "trochaic"), default="iambic")
    tree_flags.add_argument("--polarity", choices=("higher", "lower"), default="higher")
    tree_flags.add_argument("--arity", choices=("binary", "nary"), default="binary")

    annot_flags = argparse.ArgumentParser(add_help=False)
    annot_flags.add_argument("--tier", default=None, help="tier name (default: first tier)")
    annot_flags.add_argument(
        "--exclude", action="append", default=None, metavar="LABEL",
        help="pause label to skip (repeatable; default: '', sil, #, <p>)",
    )

    parser = argparse.ArgumentParser(
        prog="prosotime",
        description="Time-domain prosody analysis: envelope spectra, rhythm metrics, time trees, tone grammars.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("calibrate", parents=[common], help="synthesize the reference AM signal and verify the pipeline")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("aems", parents=[common], help="amplitude envelope modulation spectrum of a wav file")
    p.add_argument("wav")
    p.add_argument("--cutoff-hz", type=float, default=5.0, help="spectrum cutoff; 5, 20 and 1 are the usual presets")
    p.add_argument("--window-ms", type=float, default=20.0)
    p.add_argument("--env-rate", type=int, default=100)
    p.add_argument("--smooth-ms", type=float, default=50.0)
    p.add_argument("--min-prominence", type=float, default=0.1)
    p.add_argument("--min-separation-hz", type=float, default=0.0)
    p.set_defaults(func=_cmd_aems)

    p = sub.add_parser("metrics", parents=[common, annot_flags], help="duration dispersion metrics over an annotation tier")
    p.add_argument("annot")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("timetree", parents=[common, annot_flags, tree_flags], help="induce a metrical time tree from annotated durations")
    p.add_argument("annot")
    p.set_defaults(func=_cmd_timetree)

    p = sub.add_parser("spectree", parents=[common, tree_flags], help="hierarchical segmentation of a wav's modulation spectrum")
    p.add_argument("wav")
    p.add_argument("--cutoff-hz", type=float, default=5.0)
    p.set_defaults(func=_cmd_spectree)

    p = sub.add_parser("tone-gen", parents=[common], help="terracing transduction and pitch realization of an H/L tone string")
    p.add_argument("tones", help="whitespace-separated lexical tones, e.g. 'H L H L H'")
    p.add_argument("--p-h0", type=float, default=170.0)
    p.add_argument("--p-l0", type=float, default=110.0)
    p.add_argument("--k-usw", type=float, default=1.02)
    p.add_argument("--k-dd", type=float, default=0.98)
    p.add_argument("--k-dst", type=float, default=0.70)
    p.add_argument("--k-ter", type=float, default=0.90)
    p.add_argument("--floor-hz", type=float, default=60.0)
    p.add_argument("--ceiling-hz", type=float, default=400.0)
    p.add_argument("--tone-dur-ms", type=float, default=150.0)
    p.set_defaults(func=_cmd_tone_gen)

    p = sub.add_parser("intonation", parents=[common], help="check or enumerate intonation tone strings")
    p.add_argument("mode", choices=("check", "enum"))
    p.add_argument("string", nargs="?", default=None, help="symbol string for check mode")
    p.add_argument("--max-len", type=int, default=4, help="enumeration length bound")
    p.set_defaults(func=_cmd_intonation)

    p = sub.add_parser("f0", parents=[common], help="autocorrelation F0 track of a wav file")
    p.add_argument("wav")
    p.add_argument("--fmin", type=float, default=60.0)
    p.add_argument("--fmax", type=float, default=500.0)
    p.add_argument("--frame-ms", type=float, default=40.0)
    p.add_argument("--hop-ms", type=float, default=10.0)
    p.add_argument("--voicing-ratio", type=float, default=0.3)
    p.set_defaults(func=_cmd_f0)

    p = sub.add_parser("contour-fit", parents=[common], help="polynomial contour model over an F0 CSV track")
    p.add_argument("f0csv")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--start-s", type=float, default=None, help="domain start (with --end-s)")
    p.add_argument("--end-s", type=float, default=None, help="domain end (with --start-s)")
    p.set_defaults(func=_cmd_contour_fit)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)

    out_dir = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or "prosotime_out")
    formats = {f.strip() for f in args.formats.split(",") if f.strip()}
    unknown = formats - set(FORMATS)
    if unknown:
        print(f"error: unknown formats {sorted(unknown)}", file=sys.stderr)
        return 2
    sink = _Sink(out_dir, formats)

    try:
        report = args.func(args, sink)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.json:
        print(_dumps(report), end="")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
