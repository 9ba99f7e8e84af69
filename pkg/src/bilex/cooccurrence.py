"""Sparse windowed co-occurrence matrices and the log-likelihood transform.

A matrix has one row per candidate word and one column per seed word
(unordered mode) or per (seed word, signed offset) pair (ordered mode).
Counting never crosses sentence boundaries and counts every position
pair once; a word at offset 0 from itself is never counted.

Column keys take four shapes, all hash- and sort-compatible within one
matrix:

    "word"                      unordered
    ("word", offset)            ordered, offset in -k..-1, +1..+k
    (origin, "word")            unordered, partitioned by origin dictionary
    (origin, ("word", offset))  ordered, partitioned

All row reductions (sums, normalization) accumulate in ascending column
order so that results are reproducible bit-for-bit regardless of how a
matrix was assembled.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from hashlib import sha1
from typing import Mapping

from .corpus import Corpus, Vocabulary
from .errors import ConfigError, DataError, ParseError

log = logging.getLogger(__name__)

RAW = "raw"
LLR = "llr"
UNORDERED = "unordered"
ORDERED = "ordered"


def column_word(key) -> str:
    """The corpus word a column key refers to, whatever the key shape."""
    if isinstance(key, str):
        return key
    first, second = key
    if isinstance(second, int):
        return first  # ("word", offset)
    if isinstance(second, str):
        return second  # (origin, "word")
    return second[0]  # (origin, ("word", offset))


def space_digest(col_keys, mode: str, window: int, partitioned: bool) -> str:
    """Stable identifier of a column space (set semantics, order-free)."""
    h = sha1()
    h.update(f"{mode}|{window}|{int(partitioned)}|".encode())
    for key in sorted(col_keys):
        h.update(repr(key).encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]


@dataclass
class CoocMatrix:
    """Sparse association matrix between candidate rows and seed columns."""

    row_words: list
    col_keys: list
    cells: dict = field(repr=False)  # row word -> {col key: value != 0}
    mode: str = UNORDERED
    window: int = 5
    measure: str = RAW
    normalized: bool = False
    partitioned: bool = False
    space_id: str = ""

    def __post_init__(self):
        if not self.space_id:
            self.space_id = space_digest(self.col_keys, self.mode,
                                         self.window, self.partitioned)

    def row(self, word: str) -> dict:
        return self.cells.get(word, {})

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.cells.values())


def _dedup(words) -> list:
    seen = set()
    out = []
    for w in words:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def _scan(corpus: Corpus, row_index, seed_set, k: int, make_key):
    cells: dict = {}
    for sent in corpus.sentences():
        n = len(sent)
        for i, word in enumerate(sent):
            if word not in row_index:
                continue
            row = cells.get(word)
            lo = i - k if i >= k else 0
            hi = i + k + 1
            if hi > n:
                hi = n
            for j in range(lo, hi):
                if j == i:
                    continue
                other = sent[j]
                if other not in seed_set:
                    continue
                if row is None:
                    row = cells.setdefault(word, {})
                key = make_key(other, j - i)
                row[key] = row.get(key, 0) + 1
    return cells


def build_unordered(corpus: Corpus, rows: Vocabulary, seed_words,
                    k: int) -> CoocMatrix:
    """Count row/seed co-occurrences within ``k`` tokens, ignoring order.

    cell(i, j) is the number of position pairs inside one sentence where
    row word i and seed word j stand 1..k tokens apart.
    """
    seeds = _check_build_args(rows, seed_words, k)
    cells = _scan(corpus, rows.index, set(seeds), k, lambda w, d: w)
    return CoocMatrix(list(rows.words), seeds, cells,
                      mode=UNORDERED, window=k, measure=RAW)


def build_ordered(corpus: Corpus, rows: Vocabulary, seed_words,
                  k: int) -> CoocMatrix:
    """Count co-occurrences separately per signed offset.

    cell(i, (j, p)) counts seed word j exactly p positions from row
    word i (p < 0 before, p > 0 after). Summing a row over offsets
    reproduces the unordered matrix. Columns are laid out offset-major:
    the full block of seeds at -k, then -k+1, ..., then +k, giving
    2k * n columns (4n when k = 2).
    """
    seeds = _check_build_args(rows, seed_words, k)
    offsets = [p for p in range(-k, k + 1) if p != 0]
    col_keys = [(w, p) for p in offsets for w in seeds]
    cells = _scan(corpus, rows.index, set(seeds), k, lambda w, d: (w, d))
    return CoocMatrix(list(rows.words), col_keys, cells,
                      mode=ORDERED, window=k, measure=RAW)


def _check_build_args(rows: Vocabulary, seed_words, k: int) -> list:
    if k < 1:
        raise ConfigError(f"window size must be >= 1, got {k}")
    seeds = _dedup(seed_words)
    if not seeds:
        raise ConfigError("empty seed word list")
    if not len(rows):
        raise ConfigError("empty row vocabulary")
    return seeds


def loglikelihood_cell(k11: float, k12: float, k21: float, k22: float) -> float:
    """Log-likelihood association score of one 2x2 contingency table.

    Computes sum of K_ij * ln(K_ij * N / (C_i * R_j)) over the four
    cells, with row/column marginals C and R and N the table total;
    terms with K_ij = 0 contribute nothing (the 0*ln 0 convention). The
    value is a halved G-squared statistic and is nonnegative; rounding
    residue below zero is clamped. An all-zero table scores 0.
    """
    c1 = k11 + k12
    c2 = k21 + k22
    r1 = k11 + k21
    r2 = k12 + k22
    n = c1 + c2
    total = 0.0
    if k11 > 0:
        total += k11 * math.log(k11 * n / (c1 * r1))
    if k12 > 0:
        total += k12 * math.log(k12 * n / (c1 * r2))
    if k21 > 0:
        total += k21 * math.log(k21 * n / (c2 * r1))
    if k22 > 0:
        total += k22 * math.log(k22 * n / (c2 * r2))
    return total if total > 0.0 else 0.0


def apply_loglikelihood(m: CoocMatrix, corpus_frequencies: Mapping,
                        token_count: int) -> CoocMatrix:
    """Replace raw counts with log-likelihood association scores.

    Each cell with count c between row word A and a column for word B
    becomes loglikelihood_cell(c, freq(A)-c, freq(B)-c, N-freq(A)-freq(B))
    with N the corpus token count. Window counts can exceed a word's
    corpus frequency, so negative intermediate table cells are clipped
    to zero (reported once per matrix). Scores that come out <= 0 are
    dropped to keep the matrix sparse.
    """
    if m.measure != RAW:
        raise ConfigError(f"matrix measure is already {m.measure!r}")
    clipped = 0
    cells: dict = {}
    for word, row in m.cells.items():
        freq_a = corpus_frequencies.get(word, 0)
        new_row = {}
        for key, count in row.items():
            freq_b = corpus_frequencies.get(column_word(key), 0)
            k12 = freq_a - count
            k21 = freq_b - count
            k22 = token_count - freq_a - freq_b
            if k12 < 0:
                k12 = 0
                clipped += 1
            if k21 < 0:
                k21 = 0
                clipped += 1
            if k22 < 0:
                k22 = 0
                clipped += 1
            value = loglikelihood_cell(count, k12, k21, k22)
            if value > 0.0:
                new_row[key] = value
        if new_row:
            cells[word] = new_row
    if clipped:
        log.warning("log-likelihood transform clipped %d negative "
                    "contingency values to 0", clipped)
    return CoocMatrix(list(m.row_words), list(m.col_keys), cells,
                      mode=m.mode, window=m.window, measure=LLR,
                      normalized=False, partitioned=m.partitioned,
                      space_id=m.space_id)


def normalize_rows(m: CoocMatrix) -> CoocMatrix:
    """Scale every nonzero row to unit L1 mass.

    Rows already summing to 1 within 1e-12 are left untouched, which
    makes normalization an exact fixed point. Zero rows stay zero.
    """
    if not m.cells:
        raise DataError("cannot normalize a matrix with no nonzero row")
    cells: dict = {}
    for word, row in m.cells.items():
        total = 0.0
        for key in sorted(row):
            total += row[key]
        if abs(total - 1.0) <= 1e-12:
            cells[word] = dict(row)
        else:
            cells[word] = {key: value / total for key, value in row.items()}
    return CoocMatrix(list(m.row_words), list(m.col_keys), cells,
                      mode=m.mode, window=m.window, measure=m.measure,
                      normalized=True, partitioned=m.partitioned,
                      space_id=m.space_id)


def prune_zero_rows(m: CoocMatrix) -> CoocMatrix:
    """Drop rows with no stored cell, keeping the remaining order."""
    kept = [w for w in m.row_words if m.cells.get(w)]
    if not kept:
        raise DataError("no candidate words: every row is zero")
    cells = {w: dict(m.cells[w]) for w in kept}
    return CoocMatrix(kept, list(m.col_keys), cells,
                      mode=m.mode, window=m.window, measure=m.measure,
                      normalized=m.normalized, partitioned=m.partitioned,
                      space_id=m.space_id)


_OFFSET_RE = re.compile(r"^[+-]\d+$")


def format_col_key(key) -> str:
    """Serialize a column key: ``word``, ``word@+2`` or ``...#origin``."""
    if isinstance(key, str):
        return key
    first, second = key
    if isinstance(second, int):
        return f"{first}@{second:+d}"
    return f"{format_col_key(second)}#{first}"


def parse_col_key(text: str, partitioned: bool):
    origin = None
    if partitioned:
        base, sep, origin = text.rpartition("#")
        if not sep:
            raise ValueError(f"missing origin in column key {text!r}")
        text = base
    word, sep, offset = text.rpartition("@")
    if sep and _OFFSET_RE.match(offset):
        key = (word, int(offset))
    else:
        key = text
    return (origin, key) if partitioned else key


def save_matrix(m: CoocMatrix, path) -> None:
    """Persist the nonzero structure as TSV.

    One header line carries the matrix configuration; each data line is
    ``row<TAB>column<TAB>value``. Empty rows and empty columns are not
    representable in this format.
    """
    index = {key: i for i, key in enumerate(m.col_keys)}
    with open(path, "w", encoding="utf-8") as fh:
        header = (f"#mode={m.mode} k={m.window} measure={m.measure} "
                  f"normalized={int(m.normalized)}")
        if m.partitioned:
            header += " partitioned=1"
        fh.write(header + "\n")
        for word in m.row_words:
            row = m.cells.get(word)
            if not row:
                continue
            for key in sorted(row, key=index.__getitem__):
                fh.write(f"{word}\t{format_col_key(key)}\t{row[key]!r}\n")


def load_matrix(path) -> CoocMatrix:
    """Read a matrix written by save_matrix.

    Row and column order are reconstructed from first appearance, so a
    save/load round trip preserves values and configuration but not the
    original placement of all-zero rows or columns.
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ParseError(path, 1, "missing matrix header line")
        fields = dict(item.split("=", 1) for item in header[1:].split())
        try:
            mode = fields["mode"]
            window = int(fields["k"])
            measure = fields["measure"]
            normalized = fields["normalized"] == "1"
        except (KeyError, ValueError):
            raise ParseError(path, 1, f"bad matrix header: {header!r}")
        partitioned = fields.get("partitioned") == "1"
        row_words = []
        col_keys = []
        seen_cols = set()
        cells: dict = {}
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ParseError(path, lineno, "expected row<TAB>col<TAB>value")
            word, key_text, value_text = parts
            try:
                key = parse_col_key(key_text, partitioned)
                value = float(value_text)
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc))
            if word not in cells:
                cells[word] = {}
                row_words.append(word)
            if key not in seen_cols:
                seen_cols.add(key)
                col_keys.append(key)
            cells[word][key] = value
    if not row_words:
        raise DataError(f"empty matrix file: {path}")
    return CoocMatrix(row_words, col_keys, cells, mode=mode, window=window,
                      measure=measure, normalized=normalized,
                      partitioned=partitioned)
