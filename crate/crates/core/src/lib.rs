//! Latent class and constrained multidimensional 2PL models for binary
//! questionnaire data, with discriminant-power item screening and
//! likelihood-ratio clustering of item groups into dimensions.
//!
//! Independent work (random starts, candidate merges, E-step chunks) runs on
//! rayon when the `parallel` feature is enabled and `FitConfig::parallel` is
//! set. Results are identical either way.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod data;
pub mod dimensionality;
pub mod error;
pub mod exec;
pub mod lc;
pub mod math;
pub mod mixture;
pub mod patterns;
pub mod pipeline;
pub mod report;
pub mod selection;
pub mod simulate;
pub mod twopl;

pub use config::FitConfig;
pub use data::{
    load_dataset, load_partition, read_dataset, read_partition, DimensionPartition, ItemMeta,
    ResponseMatrix, Schema,
};
pub use dimensionality::{
    chi2_sf, cluster_dimensions, emit_dendrogram, lr_test, ClusterOutcome, DendrogramFormat,
    DendrogramPath, LrTestResult, MergeStep,
};
pub use error::{Error, ErrorKind, Result};
pub use lc::{bic, em_fit_lc, lc_loglik, lc_n_params, select_k, BicRow, KSelection, LcFit, LcParams};
pub use mixture::SufficientStats;
pub use pipeline::{run_pipeline, PipelineOptions, PipelineSummary};
pub use selection::{
    apply_threshold, discriminant_2pl, discriminant_from_raw, discriminant_lc, threshold_sweep,
    DiscriminantReport, ReportSource, Retention,
};
pub use simulate::{pattern_table, simulate, GeneratorSpec, Simulated, TrueParams};
pub use twopl::{
    ability_correlations, em_fit_2pl, implied_lambda, twopl_loglik, twopl_n_params, twopl_prob,
    AbilityCorrelations, TwoPlFit, TwoPlParams,
};
