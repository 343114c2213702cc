//! Rejection sampling for weighted densities `f0(x) = w(x) g(x)` using
//! piecewise envelopes built over vertical weighted strips.
//!
//! A target is a base distribution `g` with a tractable CDF and quantile,
//! multiplied by a non-negative weight `w`. The support is partitioned into
//! regions and `w` is bounded on each one by a constant or log-linear
//! majorizer. The resulting finite mixture is sampled exactly and used as a
//! rejection proposal; its rejection probability is bounded in closed form,
//! which also drives knot selection.
//!
//! The [`vmf`] module applies the machinery to the von Mises-Fisher
//! distribution: exact sampling, orthant probabilities and a Bayesian
//! posterior for the concentration.

// Negated comparisons deliberately route NaN to the rejecting branch, and
// series coefficients are kept at their published precision.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod distributions;
pub mod envelope;
pub mod error;
pub mod knots;
pub mod numerics;
pub mod proposal;
pub mod rejection;
pub mod target;
pub mod vmf;

pub use distributions::{DtExp, TruncNormal};
pub use envelope::{BoundShape, EnvelopePiece, LogLinearBound, LowerMode, Scheme};
pub use error::{Error, Result};
pub use knots::{KnotRule, RefinementTrace, StopReason};
pub use proposal::{Proposal, Strip};
pub use rejection::{rejection_sample, RejectionSampler, SampleStats};
pub use target::{BaseDistribution, Curvature, Region, SupportInterval, WeightedTarget};
