//! The von Mises-Fisher distribution on the unit sphere in `R^d`.
//!
//! A draw `V ~ VMF_d(mu, kappa)` is obtained from a draw `X` of the
//! marginal `mu' V`, whose density on `(-1, 1)` is proportional to
//! `(1 - x^2)^((d - 3) / 2) exp(kappa x)`, and an independent uniform
//! direction orthogonal to `mu`.

mod marginal;
mod mle;
mod orthant;
mod posterior;
mod factorization_check;
mod simple;
mod sphere;
mod uw;

pub use marginal::{
    log_marginal_normalizer, marginal_log_mass, marginal_proposal, marginal_target, Factorization, MarginalCdf,
};
pub use mle::{vmf_mle, MleResult};
pub use orthant::{orthant_study, OrthantResult};
pub use posterior::{
    angles_to_unit_vector, posterior_kappa_log_weight, posterior_kappa_target, posterior_sample, posterior_params,
    PosteriorSample,
    VmfPosteriorParams,
};
pub use factorization_check::linear_factorization_gap;
pub use simple::{simple_proposal, simple_rejection_rate, simple_sample};
pub use sphere::{householder_apply, uniform_direction, vmf_sample_vector, VmfMethod, VmfParams, VmfSampler};
pub use uw::{uw_constants, uw_draw, uw_sample, UwConstants};

/// Default support truncation for samplers.
pub const DEFAULT_EPS_TRUNC: f64 = 1e-4;
