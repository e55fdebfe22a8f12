"""Packed binary measurement matrices and test outcomes.

Bits are packed into Python integers: column ``j`` is an integer whose bit
``r`` is ``M[r, j]``, and row ``r`` is an integer whose bit ``c`` is
``M[r, c]``.  Both orders are kept so that OR-ing columns and scanning rows
are equally cheap.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidCharacter,
    MalformedHeader,
    RaggedRow,
    RowCountMismatch,
    SelfInSet,
)

GTM_MAGIC = "GTM1"


def _pack_axis(bits: np.ndarray, axis: int) -> list[int]:
    packed = np.packbits(bits, axis=axis, bitorder="little")
    if axis == 0:
        return [int.from_bytes(packed[:, j].tobytes(), "little") for j in range(packed.shape[1])]
    return [int.from_bytes(packed[i].tobytes(), "little") for i in range(packed.shape[0])]


def _unpack(words: Sequence[int], length: int) -> np.ndarray:
    nbytes = (length + 7) // 8
    raw = b"".join(w.to_bytes(nbytes, "little") for w in words)
    arr = np.frombuffer(raw, dtype=np.uint8).reshape(len(words), nbytes)
    return np.unpackbits(arr, axis=1, count=length, bitorder="little").astype(bool)


@dataclass(frozen=True)
class Outcome:
    """A length-``t`` vector of test results packed into ``bits``."""

    bits: int
    t: int

    def __post_init__(self):
        if self.t < 0 or self.bits < 0 or self.bits >> self.t:
            raise ValueError("outcome bits do not fit in length t")

    @classmethod
    def zeros(cls, t: int) -> "Outcome":
        return cls(0, t)

    @classmethod
    def from_support(cls, t: int, rows: Iterable[int]) -> "Outcome":
        bits = 0
        for r in rows:
            if not 0 <= r < t:
                raise IndexOutOfRange(f"row {r} outside [0, {t})")
            bits |= 1 << r
        return cls(bits, t)

    @classmethod
    def from_string(cls, text: str) -> "Outcome":
        text = text.strip("\n")
        if any(ch not in "01" for ch in text):
            raise InvalidCharacter("outcome must contain only '0' and '1'")
        return cls(int(text[::-1], 2) if text else 0, len(text))

    def to_string(self) -> str:
        return "".join("1" if self.bits >> r & 1 else "0" for r in range(self.t))

    def __str__(self):
        return self.to_string()

    def __getitem__(self, r: int) -> int:
        if not 0 <= r < self.t:
            raise IndexOutOfRange(f"row {r} outside [0, {self.t})")
        return self.bits >> r & 1

    def __len__(self):
        return self.t

    def support(self) -> list[int]:
        return [r for r in range(self.t) if self.bits >> r & 1]

    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "Outcome") -> "Outcome":
        if other.t != self.t:
            raise ValueError("outcome lengths differ")
        return Outcome(self.bits ^ other.bits, self.t)

    def flip(self, positions: Iterable[int]) -> "Outcome":
        return self ^ Outcome.from_support(self.t, positions)


class CodeMatrix:
    """Immutable t x n binary matrix with packed row and column storage."""

    __slots__ = ("t", "n", "_cols", "_rows")

    def __init__(self, t: int, n: int, cols: Sequence[int], rows: Sequence[int] | None = None):
        if t < 1 or n < 1:
            raise ValueError("matrix needs t >= 1 and n >= 1")
        if len(cols) != n:
            raise ValueError(f"expected {n} columns, got {len(cols)}")
        if any(c < 0 or c >> t for c in cols):
            raise ValueError("column has bits beyond row t")
        self.t = t
        self.n = n
        self._cols = tuple(cols)
        if rows is None:
            rows = _pack_axis(_unpack(self._cols, t).T, axis=1)
        self._rows = tuple(rows)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_dense(cls, a) -> "CodeMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("dense matrix must be 2-D")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("dense matrix entries must be 0 or 1")
        a = a.astype(bool)
        t, n = a.shape
        return cls(t, n, _pack_axis(a, axis=0), _pack_axis(a, axis=1))

    @classmethod
    def from_supports(cls, t: int, supports: Sequence[Iterable[int]]) -> "CodeMatrix":
        cols = [Outcome.from_support(t, s).bits for s in supports]
        return cls(t, len(cols), cols)

    @classmethod
    def identity(cls, n: int) -> "CodeMatrix":
        return cls(n, n, [1 << j for j in range(n)], [1 << i for i in range(n)])

    # -- basic access --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.t, self.n)

    def _check_col(self, j: int):
        if not 0 <= j < self.n:
            raise IndexOutOfRange(f"column {j} outside [0, {self.n})")

    def column(self, j: int) -> int:
        self._check_col(j)
        return self._cols[j]

    def row(self, r: int) -> int:
        if not 0 <= r < self.t:
            raise IndexOutOfRange(f"row {r} outside [0, {self.t})")
        return self._rows[r]

    @property
    def columns(self) -> tuple[int, ...]:
        return self._cols

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    def get(self, r: int, c: int) -> int:
        self._check_col(c)
        if not 0 <= r < self.t:
            raise IndexOutOfRange(f"row {r} outside [0, {self.t})")
        return self._cols[c] >> r & 1

    def to_dense(self) -> np.ndarray:
        return _unpack(self._cols, self.t).T.astype(np.uint8)

    def col_weights(self) -> list[int]:
        return [c.bit_count() for c in self._cols]

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def popcount(self) -> int:
        return sum(self.col_weights())

    def col_support(self, j: int) -> set[int]:
        col = self.column(j)
        return {r for r in range(self.t) if col >> r & 1}

    def or_columns(self, cols: Iterable[int]) -> Outcome:
        acc = 0
        for j in cols:
            acc |= self.column(j)
        return Outcome(acc, self.t)

    def residual_support(self, i: int, cols: Iterable[int]) -> int:
        """|supp(M_i) minus the union of supp(M_j), j in cols|."""
        cols = list(cols)
        if i in cols:
            raise SelfInSet(f"column {i} is in the covering set")
        return (self.column(i) & ~self.or_columns(cols).bits).bit_count()

    def submatrix(self, cols: Sequence[int]) -> "CodeMatrix":
        return CodeMatrix(self.t, len(cols), [self.column(j) for j in cols])

    def with_bit(self, r: int, c: int, value: int) -> "CodeMatrix":
        """Copy of the matrix with entry (r, c) set to ``value``."""
        self.get(r, c)
        cols = list(self._cols)
        cols[c] = cols[c] | (1 << r) if value else cols[c] & ~(1 << r)
        return CodeMatrix(self.t, self.n, cols)

    def __eq__(self, other):
        if not isinstance(other, CodeMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.t, self.n, self._cols))

    def __repr__(self):
        return f"CodeMatrix(t={self.t}, n={self.n}, ones={self.popcount()})"

    def row_strings(self) -> list[str]:
        return ["".join("1" if row >> c & 1 else "0" for c in range(self.n)) for row in self._rows]


# -- GTM1 text format ---------------------------------------------------------


def write_matrix(m: CodeMatrix, destination, meta: dict | None = None) -> None:
    """Write ``m`` in GTM1 format to a path or text stream."""
    lines = [f"{GTM_MAGIC} {m.t} {m.n}"]
    for key, value in (meta or {}).items():
        lines.append(f"#{key}={value}")
    lines.extend(m.row_strings())
    text = "\n".join(lines) + "\n"
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", newline="\n") as fh:
            fh.write(text)
    else:
        destination.write(text)


def dumps_matrix(m: CodeMatrix, meta: dict | None = None) -> str:
    buf = io.StringIO()
    write_matrix(m, buf, meta)
    return buf.getvalue()


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return fh.read()
    return source.read()


def parse_matrix(text: str) -> tuple[CodeMatrix, dict[str, str]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedHeader("empty input")
    header = lines[0].split(" ")
    if len(header) != 3 or header[0] != GTM_MAGIC or not all(h.isdigit() for h in header[1:]):
        raise MalformedHeader(f"expected 'GTM1 <t> <n>', got {lines[0]!r}")
    t, n = int(header[1]), int(header[2])
    if t < 1 or n < 1:
        raise MalformedHeader("t and n must be positive")
    meta: dict[str, str] = {}
    rows: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        if len(line) != n:
            raise RaggedRow(f"line {lineno}: expected {n} characters, got {len(line)}")
        bad = set(line) - {"0", "1"}
        if bad:
            raise InvalidCharacter(f"line {lineno}: unexpected character(s) {sorted(bad)!r}")
        rows.append(line)
    if len(rows) != t:
        raise RowCountMismatch(f"header declares {t} rows, found {len(rows)}")
    row_bits = [int(r[::-1], 2) for r in rows]
    dense = _unpack(row_bits, n)
    return CodeMatrix(t, n, _pack_axis(dense, axis=0), row_bits), meta


def read_matrix_meta(source) -> tuple[CodeMatrix, dict[str, str]]:
    return parse_matrix(_read_text(source))


def read_matrix(source) -> CodeMatrix:
    """Read a GTM1 matrix from a path or text stream."""
    return read_matrix_meta(source)[0]


def write_outcome(y: Outcome, destination) -> None:
    text = y.to_string() + "\n"
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", newline="\n") as fh:
            fh.write(text)
    else:
        destination.write(text)


def read_outcome(source) -> Outcome:
    text = _read_text(source)
    lines = [ln for ln in text.split("\n") if ln]
    if len(lines) != 1:
        raise MalformedHeader("outcome file must contain exactly one line")
    return Outcome.from_string(lines[0])
