"""Vector transfer, candidate ranking and lexicon extraction.

For every surviving source row the pipeline maps its context vector
into the target column space through the seed dictionary, scores it
against every target row, and keeps the best candidates in a
deterministic order (score first, then lexicographic on ties).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

from .cooccurrence import CoocMatrix, space_digest
from .dictionaries import CombinedDictionary, SeedDictionary, WeightSet
from .errors import ConfigError, ParseError
from .similarity import (ASCENDING_METRICS, ContextVector, PartitionedVector,
                         _DISPATCH, _newdicemin_wcol)

Dictionary = Union[SeedDictionary, CombinedDictionary]


@dataclass
class RankedCandidates:
    """Descending-score translation candidates for one source word."""

    source_word: str
    candidates: list  # list[(target_word, score)]


@dataclass
class RankedLexicon:
    """Ranked candidates for every source row plus the run configuration."""

    entries: list  # list[RankedCandidates]
    config_fingerprint: str = ""

    def __len__(self) -> int:
        return len(self.entries)

    def as_dict(self) -> dict:
        return {e.source_word: e.candidates for e in self.entries}


def _is_independent(dictionary: Dictionary) -> bool:
    return (isinstance(dictionary, CombinedDictionary)
            and dictionary.mode == "independent")


def _map_key(key, mapping):
    # Keys are "word" or ("word", offset); the offset survives transfer.
    if isinstance(key, str):
        return mapping[key]
    return (mapping[key[0]], key[1])


def _make_mapper(dictionary: Dictionary):
    """Build a function mapping source-keyed cells to target-keyed cells.

    Collisions (two source columns landing on one target column) are
    summed in ascending source-column order, keeping transferred values
    independent of how the input cells were assembled. The translation
    tables are resolved once, up front.
    """
    if _is_independent(dictionary):
        by_origin = dictionary.mappings_by_origin()

        def map_cells(values: dict) -> dict:
            out: dict = {}
            for key in sorted(values):
                origin, base = key
                try:
                    new_key = (origin, _map_key(base, by_origin[origin]))
                except KeyError:
                    raise ConfigError(f"vector column {key!r} is not covered "
                                      "by the dictionary")
                out[new_key] = out.get(new_key, 0.0) + values[key]
            return out
    else:
        mapping = (dictionary.source_mapping()
                   if isinstance(dictionary, CombinedDictionary)
                   else dictionary.mapping())

        def map_cells(values: dict) -> dict:
            out: dict = {}
            for key in sorted(values):
                try:
                    new_key = _map_key(key, mapping)
                except KeyError:
                    raise ConfigError(f"vector column {key!r} is not covered "
                                      "by the dictionary")
                out[new_key] = out.get(new_key, 0.0) + values[key]
            return out

    return map_cells


def expand_to_entries(m: CoocMatrix, dictionary: CombinedDictionary,
                      side: str) -> CoocMatrix:
    """Rewrite a word-keyed matrix into dictionary-entry columns.

    Independent-mode combination gives a word one column per member
    dictionary containing it, so a raw matrix built over plain words is
    expanded by duplicating each cell into (origin, column) keys. Must
    run on raw, unnormalized matrices: row sums deliberately double-count
    words shared between members, which later normalization has to see.
    """
    if dictionary.mode != "independent":
        raise ConfigError("column expansion needs an independent-mode "
                          "combined dictionary")
    if side not in ("source", "target"):
        raise ConfigError(f"side must be 'source' or 'target', got {side!r}")
    if m.partitioned:
        raise ConfigError("matrix is already partitioned")
    if m.measure != "raw" or m.normalized:
        raise ConfigError("expand before applying association measures "
                          "or normalization")
    pos = 0 if side == "source" else 1
    # word -> member dictionaries containing it on this side, member order;
    # deduplicated because one member may pair several sources with one target.
    origins: dict = {}
    for entry in dictionary.entries:
        bucket = origins.setdefault(entry[pos], [])
        if entry[2] not in bucket:
            bucket.append(entry[2])
    col_keys = []
    for key in m.col_keys:
        word = key if isinstance(key, str) else key[0]
        for origin in origins.get(word, ()):
            col_keys.append((origin, key))
    cells: dict = {}
    for word, row in m.cells.items():
        new_row = {}
        for key, value in row.items():
            base = key if isinstance(key, str) else key[0]
            for origin in origins.get(base, ()):
                new_row[(origin, key)] = value
        if new_row:
            cells[word] = new_row
    return CoocMatrix(list(m.row_words), col_keys, cells,
                      mode=m.mode, window=m.window, measure=m.measure,
                      normalized=m.normalized, partitioned=True)


def transfer_vector(v: ContextVector, dictionary: Dictionary) -> ContextVector:
    """Carry a source context vector into the target column space.

    Each column key is rewritten source word -> target word (offsets and
    origin tags preserved); when two source words translate to the same
    target the transferred values are summed. Independent-mode
    dictionaries expect and return partitioned vectors.
    """
    cells = _make_mapper(dictionary)(v.values)
    space = f"transferred:{v.space_id}"
    if _is_independent(dictionary):
        return PartitionedVector(cells, space)
    return ContextVector(cells, space)


class _TargetIndex:
    """Target rows pre-indexed for ranking many queries.

    Column keys get integer ids in ascending key order, so id-keyed
    merges perform exactly the additions of key-ordered merges, only
    with cheaper comparisons. An inverted index (column -> row
    positions) can skip rows sharing no column with the query: for
    every similarity metric a disjoint pair scores an exact 0.0.
    cityblock is a distance over the union and is always fully merged,
    and the index is only consulted when the posting mass says skipping
    will actually save work.
    """

    def __init__(self, matrix: CoocMatrix, metric: str,
                 weights: Optional[WeightSet]):
        self.metric = metric
        cols = sorted(set(matrix.col_keys))
        self.col_id = {key: i for i, key in enumerate(cols)}
        self.row_words = list(matrix.row_words)
        self.rows = []
        postings = [[] for _ in cols]
        for pos, word in enumerate(self.row_words):
            row = matrix.row(word)
            items = [(self.col_id[key], row[key]) for key in sorted(row)]
            self.rows.append(items)
            for cid, _ in items:
                postings[cid].append(pos)
        self.postings = postings
        self.total_items = sum(len(items) for items in self.rows)
        if weights is None:
            metric_fn = _DISPATCH[metric]
            self.score = metric_fn
        else:
            for key in cols:
                if not isinstance(key, tuple) or isinstance(key[1], int):
                    raise ConfigError("weighted ranking needs partitioned "
                                      "(origin, column) keys")
            try:
                wcol = [weights.weights[key[0]] for key in cols]
            except KeyError as exc:
                raise ConfigError(f"no weight for dictionary {exc.args[0]!r}")
            self.score = lambda xs, ys: _newdicemin_wcol(xs, ys, wcol)

    def to_items(self, cells: dict) -> list:
        """Map key-addressed cells to ascending (column id, value) pairs."""
        return [(self.col_id[key], cells[key]) for key in sorted(cells)]

    def rank(self, tv_items: list) -> list:
        score = self.score
        rows = self.rows
        n = len(rows)
        skip_safe = self.metric not in ASCENDING_METRICS
        posting_mass = 0
        if skip_safe:
            for cid, _ in tv_items:
                posting_mass += len(self.postings[cid])
        if skip_safe and 2 * posting_mass < self.total_items:
            scores = [0.0] * n
            touched = set()
            for cid, _ in tv_items:
                touched.update(self.postings[cid])
            for pos in touched:
                scores[pos] = score(tv_items, rows[pos])
        else:
            scores = [score(tv_items, rows[pos]) for pos in range(n)]
        scored = list(zip(self.row_words, scores))
        if self.metric in ASCENDING_METRICS:
            scored.sort(key=lambda ws: (ws[1], ws[0]))
        else:
            scored.sort(key=lambda ws: (-ws[1], ws[0]))
        return scored


def _check_metric_weights(metric: str, weights: Optional[WeightSet]) -> None:
    if metric == "newdicemin":
        if weights is None:
            raise ConfigError("metric 'newdicemin' needs a weight set")
    elif metric not in _DISPATCH:
        raise ConfigError(f"unknown metric {metric!r}")
    elif weights is not None:
        raise ConfigError(
            f"weights are only used with metric 'newdicemin', not {metric!r}")


def rank_candidates(tv: ContextVector, target_matrix: CoocMatrix, metric: str,
                    weights: Optional[WeightSet] = None, top_k: int = 10,
                    source_word: str = "") -> RankedCandidates:
    """Rank every target row against a transferred vector.

    Scores descend (ascend for cityblock) with lexicographic tie-breaks;
    at most ``top_k`` candidates are kept. The vector must live in the
    target matrix's column space.
    """
    if top_k < 1:
        raise ConfigError(f"top_k must be >= 1, got {top_k}")
    metric = metric.lower()
    _check_metric_weights(metric, weights)
    index = _TargetIndex(target_matrix, metric, weights)
    for key in tv.values:
        if key not in index.col_id:
            raise ConfigError(
                f"space mismatch: column {key!r} unknown to the target matrix")
    scored = index.rank(index.to_items(tv.values))
    return RankedCandidates(source_word, scored[:top_k])


def config_fingerprint(matrix: CoocMatrix, dictionary: Dictionary, metric: str,
                       weights: Optional[WeightSet], top_k: int) -> str:
    if isinstance(dictionary, CombinedDictionary):
        dict_part = f"{dictionary.mode}({','.join(dictionary.member_ids)})"
    else:
        dict_part = dictionary.dict_id
    weight_part = "-"
    if weights is not None:
        weight_part = ",".join(f"{k}:{weights.weights[k]:.6g}"
                               for k in sorted(weights.weights))
    return (f"metric={metric} mode={matrix.mode} k={matrix.window} "
            f"measure={matrix.measure} normalized={int(matrix.normalized)} "
            f"dict={dict_part} weights={weight_part} top_k={top_k}")


def extract_lexicon(source_matrix: CoocMatrix, target_matrix: CoocMatrix,
                    dictionary: Dictionary, metric: str = "dicemin",
                    weights: Optional[WeightSet] = None, top_k: int = 10,
                    threads: int = 1) -> RankedLexicon:
    """Transfer and rank every source row; the core extraction step.

    Both matrices must share window mode, size, measure and
    normalization, and the source matrix should already have its zero
    rows pruned. Rows are independent work items, so ``threads`` only
    changes wall time, never the output.
    """
    metric = metric.lower()
    _check_metric_weights(metric, weights)
    if top_k < 1:
        raise ConfigError(f"top_k must be >= 1, got {top_k}")
    for attr in ("mode", "window", "measure", "normalized", "partitioned"):
        a, b = getattr(source_matrix, attr), getattr(target_matrix, attr)
        if a != b:
            raise ConfigError(f"matrix mismatch: source {attr}={a!r}, "
                              f"target {attr}={b!r}")
    if not dictionary.entries:
        raise ConfigError("empty seed dictionary")
    independent = _is_independent(dictionary)
    if weights is not None:
        if not independent:
            raise ConfigError("weighted ranking needs an independent-mode "
                              "combined dictionary")
        missing = [m for m in dictionary.member_ids
                   if m not in weights.weights]
        if missing:
            raise ConfigError(f"no weight for dictionaries {missing}")
    if independent != source_matrix.partitioned:
        raise ConfigError("matrix partitioning does not match the dictionary "
                          "combination mode")

    map_cells = _make_mapper(dictionary)
    image = map_cells({key: 1 for key in source_matrix.col_keys})
    expected = space_digest(image, target_matrix.mode, target_matrix.window,
                            target_matrix.partitioned)
    if expected != target_matrix.space_id:
        raise ConfigError("space mismatch: the dictionary's target columns "
                          "do not form the target matrix column space")

    index = _TargetIndex(target_matrix, metric, weights)

    def rank_row(word: str) -> RankedCandidates:
        scored = index.rank(index.to_items(map_cells(source_matrix.row(word))))
        return RankedCandidates(word, scored[:top_k])

    words = source_matrix.row_words
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(rank_row, words))
    else:
        entries = [rank_row(w) for w in words]
    fingerprint = config_fingerprint(source_matrix, dictionary, metric,
                                     weights, top_k)
    return RankedLexicon(entries, fingerprint)


def write_lexicon(lexicon: RankedLexicon, path) -> None:
    """Write ``source<TAB>rank<TAB>target<TAB>score`` rows under a header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#{lexicon.config_fingerprint}\n")
        for entry in lexicon.entries:
            for rank, (target, score) in enumerate(entry.candidates, start=1):
                fh.write(f"{entry.source_word}\t{rank}\t{target}\t{score:.12g}\n")


def read_lexicon(path) -> RankedLexicon:
    """Read a lexicon file written by write_lexicon."""
    fingerprint = ""
    entries: list = []
    by_word: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip():
                continue
            if stripped.startswith("#"):
                if lineno == 1:
                    fingerprint = stripped[1:]
                continue
            parts = stripped.split("\t")
            if len(parts) != 4:
                raise ParseError(path, lineno,
                                 "expected source<TAB>rank<TAB>target<TAB>score")
            word, _, target, score_text = parts
            try:
                score = float(score_text)
            except ValueError:
                raise ParseError(path, lineno, f"bad score {score_text!r}")
            if word not in by_word:
                by_word[word] = RankedCandidates(word, [])
                entries.append(by_word[word])
            by_word[word].candidates.append((target, score))
    return RankedLexicon(entries, fingerprint)
