"""framerank: frame-embedding aggregation, cosine ranking, and retrieval metrics."""

from .aggregation import (
    AggregationConfig,
    VideoRepresentation,
    aggregate,
    aggregate_kmeans,
    aggregate_mean,
    aggregate_single_frame,
)
from .analysis import length_rank_table, spearman_correlation, worst_pairs
from .core import (
    FrameMatrix,
    SimilarityMatrix,
    cosine_similarity,
    l2_normalize,
    similarity_matrix,
)
from .dataset_io import (
    CorpusManifest,
    EmbeddingArchive,
    VideoEntry,
    group_frames_by_video,
    load_manifest,
    read_embedding_archive,
    read_id_list,
    select_split,
    write_embedding_archive,
)
from .metrics import (
    MetricReport,
    evaluate,
    mean_rank,
    median_rank,
    recall_at_k,
    std_rank,
)
from .pipeline import aggregate_archive, evaluate_run
from .ranking import (
    GroundTruth,
    RankVector,
    collapse_min_rank_by_video,
    min_rank_multi_gallery,
    rank_of_target,
    rank_queries,
)

__version__ = "0.1.0"
