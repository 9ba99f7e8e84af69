"""Top-k evaluation of an extracted lexicon against a gold set.

A gold set lists, per test source word, every target word accepted as a
correct translation (exact string match on lemmas). Top-k is the share
of test words whose candidate list contains an accepted target within
its first k entries; test words missing from the lexicon count as
misses but stay in the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, ParseError
from .extraction import RankedLexicon


@dataclass
class GoldSet:
    """source word -> set of acceptable target words."""

    entries: dict

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class EvalReport:
    top_k_scores: dict  # k -> fraction in [0, 1]
    per_word: dict      # source word -> best rank of an accepted target, or None
    n_test_words: int

    def to_tsv(self) -> str:
        lines = ["k\tscore"]
        for k in sorted(self.top_k_scores):
            lines.append(f"{k}\t{self.top_k_scores[k]:.4f}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = [f"test words: {self.n_test_words}"]
        for k in sorted(self.top_k_scores):
            lines.append(f"Top-{k} {self.top_k_scores[k]:.4f}")
        return "\n".join(lines)


def load_gold(path) -> GoldSet:
    """Read a gold TSV: ``source<TAB>target1[<TAB>target2...]``.

    Blank lines and ``#`` comments are skipped; a repeated source word
    or a line without any target is an error.
    """
    entries: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.startswith("#"):
                continue
            parts = [p.strip() for p in stripped.split("\t")]
            source = parts[0]
            targets = {p for p in parts[1:] if p}
            if not source or not targets:
                raise ParseError(path, lineno,
                                 "expected source<TAB>target[<TAB>target...]")
            if source in entries:
                raise ParseError(path, lineno,
                                 f"duplicate gold source word {source!r}")
            entries[source] = targets
    if not entries:
        raise ConfigError(f"empty gold set: {path}")
    return GoldSet(entries)


def evaluate(lexicon: RankedLexicon, gold: GoldSet, ks) -> EvalReport:
    """Compute Top-k scores of a ranked lexicon for each requested k."""
    ks = list(ks)
    if not ks or any(k < 1 for k in ks):
        raise ConfigError(f"ks must be non-empty positive integers, got {ks}")
    if not gold.entries:
        raise ConfigError("empty gold set")
    candidates = lexicon.as_dict()
    per_word: dict = {}
    for source, accepted in gold.entries.items():
        best = None
        for rank, (target, _) in enumerate(candidates.get(source, ()), start=1):
            if target in accepted:
                best = rank
                break
        per_word[source] = best
    n = len(gold.entries)
    scores = {}
    for k in ks:
        hits = sum(1 for best in per_word.values()
                   if best is not None and best <= k)
        scores[k] = hits / n
    return EvalReport(scores, per_word, n)
