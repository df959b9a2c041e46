"""Emotional profiles and semantic frames of news corpora."""

from .corpus import Article, ArticleSet, CorpusError, filter_articles, ingest_articles, stem
from .frames import (
    SIGNIFICANCE, EmotionProfile, EmptyFrameError, SemanticFrame, build_null_model,
    emotion_counts, extract_frame, profile_concept, profile_frame, temporal_profiles, zscores,
)
from .graphstats import FrameDiff, Partition, frame_diff, louvain, modularity
from .lexicon import EMOTIONS, EmotionLexicon, SynonymMap, load_emotion_lexicon, load_synonyms
from .netbuild import BuildConfig, ParsedDocument, Tfmn, build_tfmn, merge_tfmn, parse_conllu
from .stats import log_bin_heatmap, moving_average, pearson, platform_share_summary, prevalence_series

__version__ = "0.1.0"

__all__ = [
    "Article",
    "ArticleSet",
    "CorpusError",
    "filter_articles",
    "ingest_articles",
    "stem",
    "SIGNIFICANCE",
    "EmotionProfile",
    "EmptyFrameError",
    "SemanticFrame",
    "build_null_model",
    "emotion_counts",
    "extract_frame",
    "profile_concept",
    "profile_frame",
    "temporal_profiles",
    "zscores",
    "FrameDiff",
    "Partition",
    "frame_diff",
    "louvain",
    "modularity",
    "EMOTIONS",
    "EmotionLexicon",
    "SynonymMap",
    "load_emotion_lexicon",
    "load_synonyms",
    "BuildConfig",
    "ParsedDocument",
    "Tfmn",
    "build_tfmn",
    "merge_tfmn",
    "parse_conllu",
    "log_bin_heatmap",
    "moving_average",
    "pearson",
    "platform_share_summary",
    "prevalence_series",
]
