"""bilex: bilingual lexicon extraction from comparable corpora.

The pipeline builds windowed co-occurrence context vectors over two
monolingual corpora, replaces counts by log-likelihood association
scores, transfers source vectors into the target space through a seed
dictionary (or a combination of several), and ranks target candidates
by distributional similarity. Top-k evaluation against a gold set and a
CLI round the toolkit out.
"""

from .corpus import Corpus, Vocabulary, build_vocabulary, load_corpus, load_stopwords
from .dictionaries import (CombinedDictionary, PivotDictionarySide,
                           SeedDictionary, WeightSet, build_pivot_dictionary,
                           combine_independent, combine_simple,
                           ingest_translation_table, load_dictionary,
                           load_pivot_side, pivot_idf, pivot_score,
                           unit_weights, weights_by_accuracy,
                           weights_by_accuracy_and_size)
from .cooccurrence import (CoocMatrix, apply_loglikelihood, build_ordered,
                           build_unordered, load_matrix, loglikelihood_cell,
                           normalize_rows, prune_zero_rows, save_matrix)
from .errors import BilexError, ConfigError, DataError, ParseError
from .estimator import LexiconExtractor
from .evaluation import EvalReport, GoldSet, evaluate, load_gold
from .extraction import (RankedCandidates, RankedLexicon, expand_to_entries,
                         extract_lexicon, rank_candidates, read_lexicon,
                         transfer_vector, write_lexicon)
from .similarity import (ContextVector, PartitionedVector, METRICS,
                         newdice_min, similarity)

__version__ = "0.1.0"

__all__ = [
    "BilexError", "CombinedDictionary", "ConfigError", "ContextVector",
    "CoocMatrix", "Corpus", "DataError", "EvalReport", "GoldSet",
    "LexiconExtractor", "METRICS", "ParseError", "PartitionedVector",
    "PivotDictionarySide", "RankedCandidates", "RankedLexicon",
    "SeedDictionary", "Vocabulary", "WeightSet", "apply_loglikelihood",
    "build_ordered", "build_pivot_dictionary", "build_unordered",
    "build_vocabulary", "combine_independent", "combine_simple", "evaluate",
    "expand_to_entries", "extract_lexicon", "ingest_translation_table",
    "load_corpus", "load_dictionary", "load_gold", "load_matrix",
    "load_pivot_side", "load_stopwords", "loglikelihood_cell", "newdice_min",
    "normalize_rows", "pivot_idf", "pivot_score", "prune_zero_rows",
    "rank_candidates", "read_lexicon", "save_matrix", "similarity",
    "transfer_vector", "unit_weights", "weights_by_accuracy",
    "weights_by_accuracy_and_size", "write_lexicon",
]
