"""Seed dictionaries: loading, pivot-based construction and combination.

Three kinds of seed dictionary feed the extractor: an existing bilingual
dictionary, one built by matching source->pivot and pivot->target
descriptions, and one taken from a word-alignment translation table.
Every seed dictionary keeps a single translation per source word.

Combined dictionaries come in two flavours. The "simple" combination
resolves conflicts by priority: a source word takes its translation from
the first member dictionary that contains it. The "independent"
combination keeps every entry of every member, treating the same source
word in two dictionaries as two distinct entries tagged by origin.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .corpus import _keep
from .errors import ConfigError, DataError, ParseError


@dataclass
class SeedDictionary:
    """Single-translation bilingual entries tagged with an identifier."""

    dict_id: str
    entries: list  # list[(source_word, target_word)]
    accuracy: Optional[float] = None

    def __post_init__(self):
        seen = set()
        for src, _ in self.entries:
            if src in seen:
                raise ConfigError(
                    f"{self.dict_id}: duplicate source word {src!r} violates "
                    "the single-translation rule")
            seen.add(src)

    @property
    def size(self) -> int:
        return len(self.entries)

    def mapping(self) -> dict:
        """source word -> target word."""
        return dict(self.entries)


@dataclass
class CombinedDictionary:
    """Entries merged from several seed dictionaries, tagged by origin."""

    entries: list  # list[(source_word, target_word, origin_dict_id)]
    member_ids: list
    mode: str  # "simple" | "independent"

    @property
    def size(self) -> int:
        return len(self.entries)

    def mappings_by_origin(self) -> dict:
        """origin id -> {source word -> target word}."""
        out = {m: {} for m in self.member_ids}
        for src, tgt, origin in self.entries:
            out[origin][src] = tgt
        return out

    def source_mapping(self) -> dict:
        """source word -> target word (simple mode only)."""
        if self.mode != "simple":
            raise ConfigError("source_mapping is only defined for mode=simple")
        return {src: tgt for src, tgt, _ in self.entries}


@dataclass
class WeightSet:
    """Per-origin-dictionary weights applied by the weighted similarity."""

    weights: dict  # origin dict id -> w > 0

    def __post_init__(self):
        for dict_id, w in self.weights.items():
            if not w > 0:
                raise ConfigError(f"weight for {dict_id} must be > 0, got {w}")

    def __getitem__(self, dict_id: str) -> float:
        return self.weights[dict_id]

    def scaled(self, factor: float) -> "WeightSet":
        return WeightSet({k: v * factor for k, v in self.weights.items()})


@dataclass
class PivotDictionarySide:
    """One side of a pivot construction: headword -> pivot description.

    Descriptions are cleaned: stop words and tokens without alphabetic
    characters are gone. Headwords whose description cleans to nothing
    are dropped entirely.
    """

    entries: dict = field(default_factory=dict)  # headword -> [pivot tokens]

    def __len__(self) -> int:
        return len(self.entries)


def load_dictionary(path, dict_id: str) -> SeedDictionary:
    """Load a dictionary TSV: ``source<TAB>target1[<TAB>target2...]``.

    Only the first translation of each headword is kept; repeated
    headword lines after the first are ignored. Lines with fewer than
    two columns raise ParseError with the line number.
    """
    entries = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.startswith("#"):
                continue
            parts = [p.strip() for p in stripped.split("\t")]
            if len(parts) < 2 or not parts[0] or not parts[1]:
                raise ParseError(path, lineno,
                                 "expected source<TAB>target[<TAB>target...]")
            src = parts[0]
            if src in seen:
                continue
            seen.add(src)
            entries.append((src, parts[1]))
    if not entries:
        raise DataError(f"empty dictionary: {path}")
    return SeedDictionary(dict_id, entries)


def save_dictionary(dictionary: SeedDictionary, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in dictionary.entries:
            fh.write(f"{src}\t{tgt}\n")


def load_pivot_side(path, stopwords=frozenset(), invert: bool = False
                    ) -> PivotDictionarySide:
    """Load one pivot-construction side from a TSV file.

    Plain orientation (``invert=False``) expects
    ``headword<TAB>pivot description words`` lines, e.g. a source->pivot
    dictionary whose translations act as the description.

    ``invert=True`` handles a pivot->target dictionary: each line is
    ``pivot word<TAB>target words`` and is flipped into
    target headword -> pivot words, accumulating across lines. The
    cleaning filter always applies to the pivot-language side only.
    """
    entries: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) < 2:
                raise ParseError(path, lineno,
                                 "expected headword<TAB>description")
            head = parts[0].strip()
            desc = " ".join(parts[1:]).split()
            if not head or not desc:
                raise ParseError(path, lineno,
                                 "expected headword<TAB>description")
            if invert:
                if not _keep(head, stopwords):
                    continue
                for target in desc:
                    bucket = entries.setdefault(target, [])
                    if head not in bucket:
                        bucket.append(head)
            else:
                cleaned = [t for t in desc if _keep(t, stopwords)]
                if not cleaned:
                    continue
                bucket = entries.setdefault(head, [])
                for token in cleaned:
                    if token not in bucket:
                        bucket.append(token)
    if not entries:
        raise DataError(f"empty pivot dictionary side: {path}")
    return PivotDictionarySide(entries)


def _presence_counts(side: PivotDictionarySide) -> Counter:
    # Number of descriptions containing each pivot word (presence, not
    # multiplicity).
    counts: Counter = Counter()
    for desc in side.entries.values():
        counts.update(set(desc))
    return counts


def pivot_idf(src_side: PivotDictionarySide, tgt_side: PivotDictionarySide,
              word: str) -> float:
    """Inverse document frequency of a pivot word across both sides.

    Returns ln((|src| + |tgt|) / (n_src + n_tgt)) where the denominator
    counts descriptions containing the word. A word appearing in no
    description on either side has no defined weight.
    """
    n_src = sum(1 for desc in src_side.entries.values() if word in desc)
    n_tgt = sum(1 for desc in tgt_side.entries.values() if word in desc)
    if n_src + n_tgt == 0:
        raise ConfigError(f"pivot word {word!r} occurs in no description")
    return math.log((len(src_side) + len(tgt_side)) / (n_src + n_tgt))


def pivot_score(pr_desc, it_desc, idf: Mapping) -> float:
    """Idf-weighted overlap between two pivot descriptions, in [0, 1].

    Descriptions are treated as sets (a word counts once however often
    it repeats). The score is twice the idf mass of the intersection
    over the summed idf mass of both descriptions; all-ubiquitous
    descriptions (zero total idf) score 0.
    """
    pr = set(pr_desc)
    it = set(it_desc)
    num = 2.0 * sum(idf[w] for w in sorted(pr & it))
    den = sum(idf[w] for w in sorted(pr)) + sum(idf[w] for w in sorted(it))
    if den == 0:
        return 0.0
    return num / den


def build_pivot_dictionary(src_pivot: PivotDictionarySide,
                           pivot_tgt: PivotDictionarySide,
                           top_n: int,
                           dict_id: str = "DicPi") -> SeedDictionary:
    """Match descriptions across the pivot language into a seed dictionary.

    Candidate pairs share at least one pivot word (found through an
    inverted index rather than an all-pairs scan). Each source headword
    keeps its best-scoring target, ties going to the lexicographically
    smallest target; the retained pairs are then cut to the ``top_n``
    highest scores, ties at the cutoff resolved by source order.
    """
    if top_n < 1:
        raise ConfigError(f"top_n must be >= 1, got {top_n}")
    if not src_pivot.entries or not pivot_tgt.entries:
        raise DataError("both pivot sides must be non-empty")

    src_presence = _presence_counts(src_pivot)
    tgt_presence = _presence_counts(pivot_tgt)
    total = len(src_pivot) + len(pivot_tgt)
    idf = {}
    for word in set(src_presence) | set(tgt_presence):
        idf[word] = math.log(total / (src_presence[word] + tgt_presence[word]))

    # Inverted index: pivot word -> target headwords described by it.
    index: dict = {}
    for head, desc in pivot_tgt.entries.items():
        for word in set(desc):
            index.setdefault(word, []).append(head)

    retained = []
    for src in sorted(src_pivot.entries):
        desc = src_pivot.entries[src]
        candidates = set()
        for word in set(desc):
            candidates.update(index.get(word, ()))
        if not candidates:
            continue
        best_tgt = None
        best_score = -1.0
        # Ascending candidate order makes the first maximum the
        # lexicographically smallest target, which is the tie rule.
        for tgt in sorted(candidates):
            score = pivot_score(desc, pivot_tgt.entries[tgt], idf)
            if score > best_score:
                best_tgt, best_score = tgt, score
        retained.append((src, best_tgt, best_score))
    if not retained:
        raise DataError("no candidates: no description pair shares a pivot word")

    retained.sort(key=lambda item: (-item[2], item[0]))
    entries = [(src, tgt) for src, tgt, _ in retained[:top_n]]
    return SeedDictionary(dict_id, entries)


def ingest_translation_table(path, top_n: int,
                             dict_id: str = "DicPa") -> SeedDictionary:
    """Reduce a word-alignment translation table to a seed dictionary.

    The table holds ``source<TAB>target<TAB>probability`` lines. For
    each source word the highest-probability target wins (first
    occurrence on ties); the surviving entries are then cut to the
    ``top_n`` most probable, ties broken by source word.
    """
    if top_n < 1:
        raise ConfigError(f"top_n must be >= 1, got {top_n}")
    best: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 3:
                raise ParseError(path, lineno,
                                 "expected source<TAB>target<TAB>probability")
            src, tgt = parts[0].strip(), parts[1].strip()
            if not src or not tgt:
                raise ParseError(path, lineno, "empty source or target field")
            try:
                prob = float(parts[2])
            except ValueError:
                raise ParseError(path, lineno,
                                 f"probability is not a number: {parts[2]!r}")
            if not 0.0 <= prob <= 1.0:
                raise ParseError(path, lineno,
                                 f"probability out of [0,1]: {parts[2]}")
            if src not in best or prob > best[src][1]:
                best[src] = (tgt, prob)
    if not best:
        raise DataError(f"empty translation table: {path}")
    ranked = sorted(best.items(), key=lambda kv: (-kv[1][1], kv[0]))
    entries = [(src, tgt) for src, (tgt, _) in ranked[:top_n]]
    return SeedDictionary(dict_id, entries)


def _check_members(dicts) -> list:
    if len(dicts) < 2:
        raise ConfigError("combination needs at least two dictionaries")
    ids = [d.dict_id for d in dicts]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"duplicate dictionary ids among {ids}")
    return ids


def combine_simple(dicts: Iterable[SeedDictionary]) -> CombinedDictionary:
    """Priority union: the first dictionary containing a source word wins."""
    dicts = list(dicts)
    ids = _check_members(dicts)
    entries = []
    seen = set()
    for d in dicts:
        for src, tgt in d.entries:
            if src not in seen:
                seen.add(src)
                entries.append((src, tgt, d.dict_id))
    return CombinedDictionary(entries, ids, "simple")


def combine_independent(dicts: Iterable[SeedDictionary]) -> CombinedDictionary:
    """Keep every entry of every dictionary, tagged with its origin."""
    dicts = list(dicts)
    ids = _check_members(dicts)
    entries = [(src, tgt, d.dict_id) for d in dicts for src, tgt in d.entries]
    return CombinedDictionary(entries, ids, "independent")


def weights_by_accuracy(accuracies: Mapping) -> WeightSet:
    """Use each dictionary's accuracy directly as its weight."""
    if not accuracies:
        raise ConfigError("no accuracies given")
    for dict_id, acc in accuracies.items():
        if not 0.0 < acc <= 1.0:
            raise ConfigError(f"accuracy for {dict_id} must be in (0,1], got {acc}")
    return WeightSet(dict(accuracies))


def weights_by_accuracy_and_size(accuracies: Mapping, sizes: Mapping) -> WeightSet:
    """Weight by accuracy scaled against size: bigger dictionaries count less.

    w_j = accuracy_j * max(sizes) / size_j.
    """
    if not accuracies:
        raise ConfigError("no accuracies given")
    if set(accuracies) != set(sizes):
        raise ConfigError("accuracy and size ids differ: "
                          f"{sorted(accuracies)} vs {sorted(sizes)}")
    for dict_id, acc in accuracies.items():
        if not 0.0 < acc <= 1.0:
            raise ConfigError(f"accuracy for {dict_id} must be in (0,1], got {acc}")
        if sizes[dict_id] < 1:
            raise ConfigError(f"size for {dict_id} must be >= 1, got {sizes[dict_id]}")
    max_size = max(sizes.values())
    return WeightSet({d: accuracies[d] * max_size / sizes[d] for d in accuracies})


def unit_weights(member_ids: Iterable[str]) -> WeightSet:
    return WeightSet({m: 1.0 for m in member_ids})


def save_combined(combined: CombinedDictionary, path) -> None:
    """Write ``source<TAB>target<TAB>origin`` rows with a mode header."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#mode={combined.mode} members={','.join(combined.member_ids)}\n")
        for src, tgt, origin in combined.entries:
            fh.write(f"{src}\t{tgt}\t{origin}\n")
