//! Trust quantification for AI training datasets with Subjective Logic.
//!
//! Datasets are assessed as binomial opinions: class-balance evidence is
//! gathered from label distributions (tolerance-zone or entropy based),
//! quantified into opinions, and combined with fusion, discounting and
//! logical operators over trust propositions.

pub mod bias;
pub mod dataset;
pub mod error;
pub mod federated;
pub mod fixtures;
pub mod fusion;
pub mod opinion;
pub mod plot;
pub mod proposition;
pub mod quantify;

pub use bias::{
    assess_bias_method1, assess_bias_method2, dataset_uncertainty, entropy, entropy_threshold,
    sample_complexity, sweep_eta, tolerance_evidence, BiasConfig, EntropyVerdict, Method1Report,
    Method2Mode, Method2Report, ToleranceEvidence,
};
pub use dataset::{
    merge, split_stratified, ClassDistribution, CountsFormat, Manifest, ProbabilityVector,
    SplitMode,
};
pub use error::{Result, TrustError};
pub use federated::{run_sweep, SimConfig, SweepPoint};
pub use fusion::{fuse_averaging, fuse_constraint, fuse_cumulative, fuse_weighted, FusionOperator};
pub use opinion::{Evidence, Opinion};
pub use proposition::{
    evaluate_proposition, parse_proposition, resolve_sources, PropositionExpr, SourceBinding,
    TrustSource,
};
pub use quantify::{quantify_baseline, quantify_constant_u, quantify_weighted, QuantConfig};
