"""Grid-index clustering, constant-time identification, and batch
deduplication for minutiae fingerprint signatures."""

from .cluster import (ClusterTable, DuplicateRecordIdError, build_table,
                      char_sum_hash, load_table, save_table)
from .dedup import (DuplicateReport, OracleCapExceededError, comparison_count,
                    deduplicate, exhaustive_dedup, save_report)
from .grid import GridParams, IndexKey, block_of, bounding_box, compute_index
from .identify import IdentificationResult, identify
from .matcher import (MatchParams, MatchResult, Triplet, build_triplets,
                      is_match, match_score)
from .signature import (DirectoryStore, Minutia, ParseError, SerializedStore,
                        Signature, load_corpus_dir, load_manifest,
                        parse_signature, serialize_signature, write_corpus_dir)
from .stats import (CorpusStats, RegressionFit, WorkloadEstimate, corpus_stats,
                    estimate_workload, fit_regression, predict_avg)
from .synth import GenSpec, SplitMix64, generate, iter_records

__version__ = "0.1.0"

__all__ = [
    "ClusterTable", "CorpusStats", "DirectoryStore", "DuplicateRecordIdError",
    "DuplicateReport", "GenSpec", "GridParams", "IdentificationResult", "IndexKey",
    "MatchParams", "MatchResult", "Minutia", "OracleCapExceededError", "ParseError",
    "RegressionFit", "SerializedStore", "Signature", "SplitMix64", "Triplet",
    "WorkloadEstimate", "block_of", "bounding_box", "build_table", "build_triplets",
    "char_sum_hash", "comparison_count", "compute_index", "corpus_stats", "deduplicate",
    "estimate_workload", "exhaustive_dedup", "fit_regression", "generate", "identify",
    "is_match", "iter_records", "load_corpus_dir", "load_manifest", "load_table",
    "match_score", "parse_signature", "predict_avg", "save_report", "save_table",
    "serialize_signature", "write_corpus_dir",
]
