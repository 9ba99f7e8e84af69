"""An sklearn-style estimator wrapping the whole extraction pipeline.

LexiconExtractor.fit builds the source and target co-occurrence spaces,
predict ranks translation candidates, and score measures Top-k accuracy
against a gold set. Parameters follow scikit-learn conventions
(get_params/set_params/clone all work), so the extractor slots into the
surrounding ecosystem's tooling.
"""

from __future__ import annotations

from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cooccurrence import (apply_loglikelihood, build_ordered,
                           build_unordered, normalize_rows, prune_zero_rows,
                           CoocMatrix, LLR, RAW)
from .corpus import Corpus, build_vocabulary
from .dictionaries import (CombinedDictionary, SeedDictionary, WeightSet)
from .errors import ConfigError
from .evaluation import GoldSet, evaluate
from .extraction import (RankedCandidates, RankedLexicon, expand_to_entries,
                         extract_lexicon, _is_independent)
from .similarity import METRICS


def as_corpus(data, language_tag: str = "") -> Corpus:
    """Accept a Corpus or any iterable of token sequences."""
    if isinstance(data, Corpus):
        return data
    try:
        return Corpus.from_sentences(data, language_tag)
    except (TypeError, ValueError):
        raise ConfigError(
            f"expected a Corpus or an iterable of token sequences for "
            f"{language_tag or 'corpus'} input, got {type(data).__name__}")


def as_weight_set(weights) -> Optional[WeightSet]:
    if weights is None or isinstance(weights, WeightSet):
        return weights
    if isinstance(weights, dict):
        return WeightSet(dict(weights))
    raise ConfigError(f"weights must be a WeightSet or a dict, "
                      f"got {type(weights).__name__}")


def _ordered_unique(values) -> list:
    seen = set()
    out = []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


class LexiconExtractor(BaseEstimator):
    """Extract a ranked bilingual lexicon from two comparable corpora.

    Parameters
    ----------
    dictionary : SeedDictionary or CombinedDictionary
        The seed translations defining the context-vector columns. An
        independent-mode combined dictionary switches the column space
        to per-entry (origin, word) columns.
    window : int, default=5
        Number of token positions inspected on each side of a word,
        never crossing sentence boundaries.
    ordered : bool, default=False
        Keep co-occurrence counts separate per signed window offset.
    measure : {"llr", "raw"}, default="llr"
        Cell statistic: log-likelihood association scores or plain
        co-occurrence counts.
    normalize : bool, default=True
        Scale every matrix row to unit L1 mass after the measure step.
    metric : str, default="dicemin"
        Similarity used for ranking; one of cityblock, cosine, dicemin,
        diceprod, jaccardmin, jaccardprod, lin, or newdicemin (the
        weighted variant, requiring ``weights`` and an independent-mode
        dictionary).
    weights : dict or WeightSet, optional
        Per-origin-dictionary weights for newdicemin.
    top_k : int, default=10
        Candidates kept per source word.
    min_frequency : int, default=1
        Minimum corpus frequency for source candidate rows.
    min_target_frequency : int, default=1
        Minimum corpus frequency for target candidate rows.
    threads : int, default=1
        Worker threads for ranking; output is identical for any value.

    Attributes
    ----------
    source_matrix_ : CoocMatrix
        Pruned, transformed source context space.
    target_matrix_ : CoocMatrix
        Transformed target context space (zero rows kept: they remain
        legitimate, zero-scoring candidates).
    """

    def __init__(self, dictionary=None, window=5, ordered=False,
                 measure=LLR, normalize=True, metric="dicemin",
                 weights=None, top_k=10, min_frequency=1,
                 min_target_frequency=1, threads=1):
        self.dictionary = dictionary
        self.window = window
        self.ordered = ordered
        self.measure = measure
        self.normalize = normalize
        self.metric = metric
        self.weights = weights
        self.top_k = top_k
        self.min_frequency = min_frequency
        self.min_target_frequency = min_target_frequency
        self.threads = threads

    def _validate(self):
        if self.dictionary is None:
            raise ConfigError("a seed dictionary is required")
        if not isinstance(self.dictionary, (SeedDictionary, CombinedDictionary)):
            raise ConfigError("dictionary must be a SeedDictionary or "
                              "CombinedDictionary")
        if self.measure not in (RAW, LLR):
            raise ConfigError(f"measure must be 'raw' or 'llr', "
                              f"got {self.measure!r}")
        metric = str(self.metric).lower()
        if metric not in METRICS and metric != "newdicemin":
            raise ConfigError(f"unknown metric {self.metric!r}")
        weights = as_weight_set(self.weights)
        if metric == "newdicemin":
            if weights is None:
                raise ConfigError("metric 'newdicemin' needs weights")
            if not _is_independent(self.dictionary):
                raise ConfigError("metric 'newdicemin' needs an "
                                  "independent-mode combined dictionary")
        elif weights is not None:
            raise ConfigError("weights are only used with metric 'newdicemin'")
        return metric, weights

    def fit(self, source, target):
        """Build both context spaces from the two comparable corpora.

        ``source`` and ``target`` may be Corpus objects or iterables of
        token sequences (one document, pre-filtered).
        """
        metric, weights = self._validate()
        src = as_corpus(source, "source")
        tgt = as_corpus(target, "target")
        dictionary = self.dictionary
        src_seeds = _ordered_unique(e[0] for e in dictionary.entries)
        tgt_seeds = _ordered_unique(e[1] for e in dictionary.entries)
        build = build_ordered if self.ordered else build_unordered
        src_rows = build_vocabulary(src, self.min_frequency)
        tgt_rows = build_vocabulary(tgt, self.min_target_frequency)
        m_src = build(src, src_rows, src_seeds, self.window)
        m_tgt = build(tgt, tgt_rows, tgt_seeds, self.window)
        if _is_independent(dictionary):
            m_src = expand_to_entries(m_src, dictionary, "source")
            m_tgt = expand_to_entries(m_tgt, dictionary, "target")
        if self.measure == LLR:
            m_src = apply_loglikelihood(m_src, src.frequencies, src.token_count)
            m_tgt = apply_loglikelihood(m_tgt, tgt.frequencies, tgt.token_count)
        if self.normalize:
            m_src = normalize_rows(m_src)
            m_tgt = normalize_rows(m_tgt)
        self.source_matrix_ = prune_zero_rows(m_src)
        self.target_matrix_ = m_tgt
        self.metric_ = metric
        self.weights_ = weights
        return self

    def predict(self, words=None, top_k=None) -> RankedLexicon:
        """Rank translation candidates for every (or the given) source word.

        Words absent from the fitted source rows come back with an empty
        candidate list.
        """
        check_is_fitted(self, "source_matrix_")
        matrix = self.source_matrix_
        if words is not None:
            words = list(words)
            known = _ordered_unique(w for w in words if w in matrix.cells)
            matrix = CoocMatrix(
                known, list(matrix.col_keys),
                {w: matrix.cells[w] for w in known},
                mode=matrix.mode, window=matrix.window,
                measure=matrix.measure, normalized=matrix.normalized,
                partitioned=matrix.partitioned, space_id=matrix.space_id)
        lexicon = extract_lexicon(
            matrix, self.target_matrix_, self.dictionary,
            metric=self.metric_, weights=self.weights_,
            top_k=top_k if top_k is not None else self.top_k,
            threads=self.threads)
        if words is not None:
            found = lexicon.as_dict()
            lexicon.entries = [
                RankedCandidates(w, found.get(w, [])) for w in words]
        return lexicon

    def score(self, gold, k: int = 1) -> float:
        """Top-k accuracy of the extracted lexicon against a gold set."""
        check_is_fitted(self, "source_matrix_")
        if not isinstance(gold, GoldSet):
            gold = GoldSet({src: set(targets) for src, targets in gold.items()})
        report = evaluate(self.predict(), gold, [k])
        return report.top_k_scores[k]
