//! Batch log parsing with entropy-sampled cluster centers.
//!
//! Lines are reduced to their content, masked and tokenized, then grouped by
//! token count. Each group picks a few high-entropy, first-token-diverse
//! representatives, every line joins its nearest representative, and each
//! resulting cluster yields a template whose variable positions are found by
//! LCS divergence plus positional entropy. Templates of different lengths
//! that describe the same event can then be merged by a judge: a language
//! model behind an HTTP chat endpoint, or a deterministic offline rule.
//!
//! Every real-valued quantity is generic over [`Scalar`] (`f32` or `f64`);
//! the aliases at the bottom of this file fix it to `f64`.

pub mod clustering;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod merging;
pub mod pipeline;
pub mod preprocessing;
pub mod sampling;
pub mod scalar;
pub mod template;

pub use clustering::{assign_clusters, token_distance, Cluster};
pub use config::{load_config, parse_config, CotMode, DatasetConfig};
pub use error::{Error, Result};
pub use evaluation::{
    fga, grouping_accuracy, parsing_accuracy, template_level_counts, timing_run, EvaluationReport, GroundTruth,
    TemplateCounts,
};
pub use merging::{
    apply_merges, build_prompt, find_candidate_pairs, offline_merge_oracle, parse_decision, CandidatePair,
    CompletionBackend, HttpChatBackend, HttpChatSettings, LlmJudge, MergeDecision, MergeJudge, OfflineJudge,
    RetryPolicy,
};
pub use pipeline::{bench_sizes, read_log_lines, write_bench_rows, BenchRow, LogParser, ParseResult, ParseSettings};
pub use preprocessing::{
    mask_variables, strip_quotes, tokenize, HeaderPattern, LogRecord, MaskRule, MaskRuleSpec, Preprocessor, WILDCARD,
};
pub use sampling::{
    build_buckets, jaccard_similarity, merge_centers, sample_centers, shannon_entropy, Bucket, SampleSet,
    SamplingConfig, SamplingStrategy,
};
pub use scalar::Scalar;
pub use template::{
    consolidate, decide_variation_point, divergent_positions, generate_templates, longest_common_subsequence, EventId,
    LowEntropyPolicy, PositionProfile, Template,
};

/// Dataset configuration with `f64` thresholds.
pub type Config = DatasetConfig<f64>;
/// Parser with `f64` thresholds.
pub type Parser = LogParser<f64>;
pub type Report = EvaluationReport<f64>;
pub type Pair = CandidatePair<f64>;
pub type Profile = PositionProfile<f64>;
