"""Interval annotations: TextGrid / CSV parsing and duration extraction.

Supports Praat TextGrid files in both long and short text form (UTF-8 or
UTF-16 with a byte-order mark) and a flat CSV interchange format with header
``tier,label,start_s,end_s``.  Point tiers carry no durations and are skipped
with a warning.  All parse errors carry a line (TextGrid) or row (CSV)
position.
"""

from __future__ import annotations

import csv
import io
import math
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterator

from .errors import ParameterError, ParseError

__all__ = [
    "Interval",
    "Tier",
    "AnnotationDoc",
    "DurationSequence",
    "AnnotationWarning",
    "DEFAULT_EXCLUDE_LABELS",
    "parse_textgrid",
    "parse_csv_annotation",
    "annotation_to_csv",
    "durations",
]

#: Labels conventionally used for pauses / non-speech; excluded from
#: duration sequences unless the caller overrides the set.
DEFAULT_EXCLUDE_LABELS = frozenset({"", "sil", "#", "<p>"})

#: Overlap slack between consecutive intervals, in seconds.  Absorbs the
#: floating-point jitter found in real annotation files.
OVERLAP_TOLERANCE_S = 1e-3


class AnnotationWarning(UserWarning):
    """Non-fatal annotation issues (e.g. point tiers being skipped)."""


@dataclass(frozen=True)
class Interval:
    """A labeled span of time."""

    label: str
    start_s: float
    end_s: float

    def __post_init__(self) -> None:
        for name, t in (("start_s", self.start_s), ("end_s", self.end_s)):
            if not math.isfinite(t) or t < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {t!r}")
        if not self.end_s > self.start_s:
            raise ParameterError(
                f"interval must have end_s > start_s, got [{self.start_s}, {self.end_s}]"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class Tier:
    """A named, ordered, non-overlapping sequence of intervals."""

    name: str
    intervals: tuple[Interval, ...]

    def __post_init__(self) -> None:
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for prev, cur in zip(ivs, ivs[1:]):
            if cur.start_s < prev.start_s:
                raise ParameterError(
                    f"tier {self.name!r}: intervals not sorted by start time"
                )
            if prev.end_s > cur.start_s + OVERLAP_TOLERANCE_S:
                raise ParameterError(
                    f"tier {self.name!r}: intervals [{prev.start_s}, {prev.end_s}] "
                    f"and [{cur.start_s}, {cur.end_s}] overlap"
                )

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)


@dataclass(frozen=True)
class AnnotationDoc:
    """A set of tiers parsed from one annotation document."""

    tiers: tuple[Tier, ...]
    source: str = "<unknown>"

    def __post_init__(self) -> None:
        object.__setattr__(self, "tiers", tuple(self.tiers))
        seen: set[str] = set()
        for tier in self.tiers:
            if tier.name in seen:
                raise ParameterError(f"duplicate tier name {tier.name!r}")
            seen.add(tier.name)

    def tier(self, name: str) -> Tier:
        """Look a tier up by name."""
        for t in self.tiers:
            if t.name == name:
                return t
        raise KeyError(name)

    @property
    def tier_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tiers)


@dataclass(frozen=True)
class DurationSequence:
    """Ordered (label, duration) pairs extracted from a tier."""

    items: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        items = tuple((str(lab), float(dur)) for lab, dur in self.items)
        object.__setattr__(self, "items", items)
        for lab, dur in items:
            if not (math.isfinite(dur) and dur > 0):
                raise ParameterError(f"duration for {lab!r} must be > 0, got {dur}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.items)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(dur for _, dur in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self.items)


# ---------------------------------------------------------------------------
# text decoding
# ---------------------------------------------------------------------------


def _decode_document(data: str | bytes) -> str:
    """Decode a document to text, honoring UTF-8/UTF-16 byte-order marks."""
    if isinstance(data, str):
        return data.lstrip("﻿")
    if data.startswith(b"\xef\xbb\xbf"):
        return data.decode("utf-8-sig")
    if data.startswith(b"\xff\xfe") or data.startswith(b"\xfe\xff"):
        return data.decode("utf-16")
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"document is not valid UTF-8: {exc}") from None


# ---------------------------------------------------------------------------
# TextGrid parsing
# ---------------------------------------------------------------------------

# Structural lines of the long form, e.g. "item []:", "item [2]:",
# "intervals [1]:", "points [3]:" -- they carry no value.
_STRUCT_RE = re.compile(r"^[A-Za-z_][A-Za-z_ ]*\[\d*\]:$")


def _unquote(raw: str, line_no: int) -> str:
    """Parse a double-quoted TextGrid string, with "" as the escape for a quote."""
    if not raw.startswith('"'):
        raise ParseError(f"expected a quoted string, got {raw!r}", line=line_no)
    out: list[str] = []
    i = 1
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch == '"':
            if i + 1 < n and raw[i + 1] == '"':
                out.append('"')
                i += 2
                continue
            # closing quote: only whitespace may follow
            if raw[i + 1 :].strip():
                raise ParseError(
                    f"unexpected text after closing quote: {raw!r}", line=line_no
                )
            return "".join(out)
        out.append(ch)
        i += 1
    raise ParseError(f"unterminated quoted string: {raw!r}", line=line_no)


class _ValueStream:
    """Sequence of semantic values shared by the long and short TextGrid forms.

    Long form lines look like ``xmin = 0.5`` or ``text = "ba"``; short form
    lines carry the bare payload.  Both reduce to the same value sequence, so
    a single reader serves both formats.
    """

    def __init__(self, text: str):
        self._items: list[tuple[str, int]] = []
        for idx, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith('"'):
                self._items.append((line, idx))
            elif "=" in line:
                self._items.append((line.split("=", 1)[1].strip(), idx))
            elif _STRUCT_RE.match(line):
                continue
            else:
                self._items.append((line, idx))
        self._pos = 0

    @property
    def exhausted(self) -> bool:
        return self._pos >= len(self._items)

    @property
    def last_line(self) -> int:
        return self._items[-1][1] if self._items else 1

    def next_raw(self, what: str) -> tuple[str, int]:
        if self.exhausted:
            raise ParseError(
                f"unexpected end of document while reading {what}", line=self.last_line
            )
        item = self._items[self._pos]
        self._pos += 1
        return item

    def next_number(self, what: str) -> tuple[float, int]:
        raw, line_no = self.next_raw(what)
        try:
            return float(raw), line_no
        except ValueError:
            raise ParseError(f"expected a number for {what}, got {raw!r}", line=line_no) from None

    def next_count(self, what: str) -> tuple[int, int]:
        value, line_no = self.next_number(what)
        if value < 0 or value != int(value):
            raise ParseError(f"expected a count for {what}, got {value!r}", line=line_no)
        return int(value), line_no

    def next_string(self, what: str) -> tuple[str, int]:
        raw, line_no = self.next_raw(what)
        return _unquote(raw, line_no), line_no


def parse_textgrid(text: str | bytes, source: str = "<textgrid>") -> AnnotationDoc:
    """Parse a TextGrid document (long or short text form) into an AnnotationDoc.

    All interval tiers are kept; point tiers have no durations and are
    skipped with an AnnotationWarning.  Raises ParseError (with a line
    number) on malformed input.
    """
    doc_text = _decode_document(text)
    lines = doc_text.splitlines()

    header = [(ln.strip(), i) for i, ln in enumerate(lines, start=1) if ln.strip()]
    if len(header) < 2 or "ooTextFile" not in header[0][0]:
        raise ParseError(
            'not a TextGrid: first line must contain File type = "ooTextFile"', line=1
        )
    if "TextGrid" not in header[1][0]:
        raise ParseError(
            'not a TextGrid: second line must contain Object class = "TextGrid"',
            line=header[1][1],
        )

    # Blank-prefix padding keeps the stream's line numbers equal to the
    # document's own 1-based numbering past the two header lines.
    body_start = header[1][1]
    stream = _ValueStream("\n" * body_start + "\n".join(lines[body_start:]))

    stream.next_number("global xmin")
    stream.next_number("global xmax")
    flag, _ = stream.next_raw("tier existence flag")
    if "<exists>" not in flag:
        return AnnotationDoc(tiers=(), source=source)
    n_tiers, _ = stream.next_count("tier count")

    tiers: list[Tier] = []
    seen_names: dict[str, int] = {}
    for _ in range(n_tiers):
        tier_class, class_line = stream.next_string("tier class")
        name, name_line = stream.next_string("tier name")
        stream.next_number("tier xmin")
        stream.next_number("tier xmax")

        if tier_class == "IntervalTier":
            n_iv, _ = stream.next_count(f"interval count of tier {name!r}")
            intervals: list[Interval] = []
            for k in range(n_iv):
                x0, _ = stream.next_number(f"interval {k + 1} xmin")
                x1, x1_line = stream.next_number(f"interval {k + 1} xmax")
                label, _ = stream.next_string(f"interval {k + 1} text")
                try:
                    intervals.append(Interval(label=label, start_s=x0, end_s=x1))
                except ParameterError as exc:
                    raise ParseError(str(exc), line=x1_line) from None
            intervals.sort(key=lambda iv: iv.start_s)
            try:
                tier = Tier(name=name, intervals=tuple(intervals))
            except ParameterError as exc:
                raise ParseError(str(exc), line=name_line) from None
        elif tier_class in ("TextTier", "PointTier"):
            n_pt, _ = stream.next_count(f"point count of tier {name!r}")
            for k in range(n_pt):
                stream.next_number(f"point {k + 1} time")
                stream.next_string(f"point {k + 1} mark")
            warnings.warn(
                f"skipped point tier {name!r} ({n_pt} points): durations need intervals",
                AnnotationWarning,
                stacklevel=2,
            )
            continue
        else:
            raise ParseError(f"unknown tier class {tier_class!r}", line=class_line)

        if name in seen_names:
            raise ParseError(f"duplicate tier name {name!r}", line=name_line)
        seen_names[name] = name_line
        tiers.append(tier)

    return AnnotationDoc(tiers=tuple(tiers), source=source)


# ---------------------------------------------------------------------------
# CSV annotation format
# ---------------------------------------------------------------------------

_CSV_HEADER = ("tier", "label", "start_s", "end_s")


def parse_csv_annotation(text: str | bytes, source: str = "<csv>") -> AnnotationDoc:
    """Parse the flat CSV annotation format (header tier,label,start_s,end_s).

    Rows are grouped by tier (first-appearance order), sorted by start time
    and validated against overlap.  Raises ParseError with a 1-based row
    number (the header is row 1) on malformed rows.
    """
    doc_text = _decode_document(text)
    reader = csv.reader(io.StringIO(doc_text))

    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty document: missing CSV header", row=1) from None
    if tuple(h.strip() for h in header) != _CSV_HEADER:
        raise ParseError(
            f"bad CSV header {header!r}, expected {','.join(_CSV_HEADER)}", row=1
        )

    # tier name -> list of (Interval, source row)
    grouped: dict[str, list[tuple[Interval, int]]] = {}
    for row_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", row=row_no)
        tier_name, label, start_raw, end_raw = row
        try:
            start_s = float(start_raw)
            end_s = float(end_raw)
        except ValueError:
            raise ParseError(
                f"non-numeric time ({start_raw!r}, {end_raw!r})", row=row_no
            ) from None
        try:
            interval = Interval(label=label, start_s=start_s, end_s=end_s)
        except ParameterError as exc:
            raise ParseError(str(exc), row=row_no) from None
        grouped.setdefault(tier_name, []).append((interval, row_no))

    tiers: list[Tier] = []
    for tier_name, pairs in grouped.items():
        pairs.sort(key=lambda p: p[0].start_s)
        for (prev, prev_row), (cur, cur_row) in zip(pairs, pairs[1:]):
            if prev.end_s > cur.start_s + OVERLAP_TOLERANCE_S:
                raise ParseError(
                    f"tier {tier_name!r}: rows {prev_row} and {cur_row} overlap "
                    f"([{prev.start_s}, {prev.end_s}] vs [{cur.start_s}, {cur.end_s}])",
                    row=cur_row,
                )
        tiers.append(Tier(name=tier_name, intervals=tuple(iv for iv, _ in pairs)))

    return AnnotationDoc(tiers=tuple(tiers), source=source)


def annotation_to_csv(doc: AnnotationDoc) -> str:
    """Serialize an AnnotationDoc to the flat CSV format (lossless round-trip)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for tier in doc.tiers:
        for iv in tier.intervals:
            writer.writerow([tier.name, iv.label, repr(iv.start_s), repr(iv.end_s)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# duration extraction
# ---------------------------------------------------------------------------


def durations(
    tier: Tier, exclude_labels: frozenset[str] | set[str] = DEFAULT_EXCLUDE_LABELS
) -> DurationSequence:
    """Extract (label, duration) pairs from a tier, skipping excluded labels.

    Order is preserved; the default exclusion set covers common pause
    conventions and is fully overridable.
    """
    items = tuple(
        (iv.label, iv.duration_s)
        for iv in tier.intervals
        if iv.label not in exclude_labels
    )
    return DurationSequence(items=items)
