"""lexcheck: scores privacy policies against data-protection law requirements.

Pipeline: segment the policy, label each segment with data-practice
categories, map categories to the law's requirement categories, embed the
mapped policy/law segment pairs, and turn their similarity into calibrated
per-requirement compliance percentages.
"""

from .corpus import (
    BinaryDataset,
    CategoryLabel,
    CorpusError,
    LabeledSegment,
    RawLabelRecord,
    Segment,
    consolidate,
    drop_do_not_track_only,
    load_opp115,
    split,
    to_binary_datasets,
)
from .preprocess import (
    SparseVector,
    TfidfVectorizer,
    TokenStream,
    fit_vectorizer,
    load_stopwords,
    normalize,
    segment_text,
    stem,
    tokenize,
    vectorize,
)
from .classify import (
    LinearModel,
    LogisticRegressionSGD,
    MultiLabelClassifier,
    PegasosSVM,
    PRFMetrics,
    PredictionTable,
    classify_segment,
    evaluate,
    load_model,
    load_predictions,
    predict,
    save_model,
    train_logreg,
    train_svm,
)
from .lawmodel import (
    ConfigError,
    GibbsLda,
    KSelectionReport,
    Law,
    LawParseError,
    LawSegment,
    RequirementCategory,
    RequirementSegment,
    coherence_umass,
    lda_fit,
    load_requirements,
    parse_gdpr,
    perplexity,
    select_k,
    top_words_tsv,
)
from .mapping import MappingTable, load_mapping, requirements_for
from .similarity import (
    EmbeddingTable,
    Measure,
    PrecomputedProvider,
    SentenceVector,
    SimilarityScore,
    StaticTableProvider,
    STSResult,
    cosine,
    embed_mean,
    euclidean,
    get_provider,
    load_embeddings,
    load_precomputed,
    pearson,
    sts_eval,
)
from .compliance import (
    Calibration,
    CalibrationExample,
    ComplianceReport,
    Direction,
    Evidence,
    build_report,
    calibrate,
    load_calibration,
    load_calibration_examples,
    normalize_score,
    save_calibration,
    score_requirement,
)

__version__ = "0.1.0"
