"""Paraphrase corpus curation: metrics, filtering, sweeps, augmentation.

The package operates on text plus externally produced embeddings; no
model inference happens here. See the README for the file formats and
the CLI surface.
"""

from .corpus import (Corpus, SentencePair, SplitRatios, dedup_corpus,
                     read_corpus, split_corpus, split_sizes, write_corpus)
from .embeddings import (BertIBleuConfig, BertScoreResult, EmbeddingStore,
                         TokenEmbeddingMatrix, bert_ibleu, bert_score, cosine,
                         load_store, mock_embed, mock_store, save_store,
                         sentence_similarity)
from .errors import (CorpusFormatError, DataError, EmbeddingFormatError,
                     MissingEmbeddingError, ParafilterError)
from .ngram import (BleuConfig, PincConfig, corpus_bleu, has_ngram_repeat,
                    ngram_set, pinc, rouge_l_f1, sentence_bleu)
from .pipeline import (BackTranslation, CandidateGroup,
                       CandidateSelectionConfig, FilterConfig, FilterOutcome,
                       PipelineStats, filter_corpus, run_filters,
                       select_candidates)
from .sweep import (ScoreHistogram, SweepCurve, histogram, sweep_report,
                    yield_curve)
from .textnorm import (TokenSeq, detokenize, has_terminal_punctuation,
                       normalize, tokenize)

__version__ = "0.1.0"
