//! Exact-arithmetic q-series engine and verification suite.
//!
//! This crate provides the foundational building blocks for exact q-series
//! verification and numeric modular transformation checks:
//! - [`series`]: truncated Puiseux series over exact rationals — [`FracExponent`],
//!   [`PuiseuxSeries`], Pochhammer products, [`series_equal`]
//! - [`nahm`]: generalized Nahm sums — [`NahmSpec`], built-in families, exact
//!   and numeric evaluation, descending multi-sums

pub mod bailey;
pub mod error;
pub mod modularity;
pub mod nahm;
pub mod products;
pub mod series;
pub mod suite;
pub mod transforms;

pub use bailey::{
    replay_descending, verify_lemma_sum, verify_limit_identity, BaileyPair, PairTag, ReplayTarget,
};
pub use error::{Error, Result};
pub use modularity::{
    analyze_proof_quotient, build_proof_quotients, crosscheck_quotient_vs_nahm, robins_analyze,
    EtaQuotientSpec, ProofQuotient, QuotientFamily, RobinsReport,
};
pub use nahm::{
    build_capparelli, build_family, build_sum_c, eval_descending, eval_nahm, eval_nahm_numeric,
    eval_nahm_numeric_tau, eval_wang_gen, DescendingFamily, DescendingSumSpec, NahmFamily,
    NahmSpec, PochhammerInverses,
};
pub use products::{
    build_rhs, euler_sum, gen_eta, jacobi_triple_product, jacobi_triple_sum, p2, theta_g,
    theta_g_sum, theta_h, theta_h_sum, EtaFactor, GenEtaSpec, RhsEquation,
};
pub use series::{rat, rat_int, series_equal, FracExponent, PuiseuxSeries, Rat, SeriesCompare};
pub use suite::{identity_catalogue, lhs_series, verify_identity};
pub use transforms::{
    build_s, build_s_tilde, check_dual_transform, check_group_composites, check_translations,
    component_vs_nahm_residual, eval_component, eval_eta_weber, eval_full_vector,
    eval_half_vector, eval_theta_numeric, half_period_vs_nahm_residual, involution_defect,
    theta_inversion_residual, theta_quarter_residual, ComponentKind, ThetaKind, TransformFamily,
    TransformReport, WeberFunction, DEFAULT_TERMS,
};
