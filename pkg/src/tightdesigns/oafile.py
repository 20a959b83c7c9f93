"""Flat text format for orthogonal arrays.

Line 1 holds ``N n q``; then come ``N`` rows of ``n`` space-separated
symbols in ``0..q-1``.  Lines starting with ``#`` are comments.  Line
numbers in errors count physical lines, comments included.
"""

from __future__ import annotations

from pathlib import Path

from .hamming import PointSet

__all__ = ["OAFormatError", "parse_oa_text", "parse_oa_file", "format_oa", "write_oa_file"]


class OAFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_oa_text(text: str) -> PointSet:
    header = None
    words: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 3:
                raise OAFormatError("header must be 'N n q'", lineno)
            try:
                N, n, q = (int(f) for f in fields)
            except ValueError:
                raise OAFormatError(f"malformed header {line!r}", lineno) from None
            if N < 1 or n < 1 or q < 2:
                raise OAFormatError(f"invalid header values N={N} n={n} q={q}", lineno)
            header = (N, n, q)
            continue
        N, n, q = header
        if len(fields) != n:
            raise OAFormatError(f"row has {len(fields)} symbols, expected {n}", lineno)
        try:
            word = tuple(int(f) for f in fields)
        except ValueError:
            raise OAFormatError(f"non-integer symbol in {line!r}", lineno) from None
        bad = [s for s in word if not 0 <= s < q]
        if bad:
            raise OAFormatError(f"symbol {bad[0]} out of range 0..{q - 1}", lineno)
        if word in seen:
            raise OAFormatError(f"duplicate word (first seen at line {seen[word]})", lineno)
        seen[word] = lineno
        words.append(word)
        if len(words) > N:
            raise OAFormatError(f"more than N={N} rows", lineno)
    if header is None:
        raise OAFormatError("missing header")
    if len(words) != header[0]:
        raise OAFormatError(f"header declares {header[0]} rows, found {len(words)}")
    return PointSet.of(header[1], header[2], words)


def parse_oa_file(path) -> PointSet:
    with open(path, "rb") as fh:
        return parse_oa_text(fh.read().decode("latin-1"))


def format_oa(C: PointSet, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{len(C)} {C.n} {C.q}")
    lines.extend(" ".join(map(str, w)) for w in C.words)
    return "\n".join(lines) + "\n"


def write_oa_file(C: PointSet, path, comment: str | None = None) -> None:
    Path(path).write_bytes(format_oa(C, comment).encode("latin-1"))
