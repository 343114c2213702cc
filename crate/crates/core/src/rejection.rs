//! Rejection sampling from a weighted target using a strip proposal.

use rand::Rng;
use web_time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::proposal::Proposal;
use crate::target::{BaseDistribution, WeightedTarget};

/// Largest tolerated excess of `log f0` over `log h0`.
pub const DOMINATION_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub accepted: u64,
    pub proposed: u64,
    pub rejection_fraction: f64,
    pub wall_time: Duration,
}

pub struct RejectionSampler<'a, B> {
    target: &'a WeightedTarget<B>,
    proposal: &'a Proposal<B>,
    budget: u64,
}

impl<'a, B: BaseDistribution> RejectionSampler<'a, B> {
    /// Checks that the proposal dominates the target at 100 of its own
    /// quantiles before returning.
    pub fn new(target: &'a WeightedTarget<B>, proposal: &'a Proposal<B>) -> Result<Self> {
        for i in 0..100 {
            let x = proposal.quantile((i as f64 + 0.5) / 100.0);
            check_point(target, proposal, x)?;
        }
        Ok(RejectionSampler {
            target,
            proposal,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Sampler over a pair that has already passed the spot check.
    pub(crate) fn prechecked(target: &'a WeightedTarget<B>, proposal: &'a Proposal<B>) -> Self {
        RejectionSampler {
            target,
            proposal,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Cap on the number of proposals made by [`sample`](Self::sample).
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// One proposal followed by the accept/reject step.
    pub fn try_draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Option<f64>> {
        let x = self.proposal.sample(rng);
        let log_ratio = check_point(self.target, self.proposal, x)?;
        let u: f64 = rng.random();
        Ok(if u.ln() < log_ratio { Some(x) } else { None })
    }

    /// `n` accepted draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<(Vec<f64>, SampleStats)> {
        let start = Instant::now();
        let mut out = Vec::with_capacity(n);
        let mut proposed = 0u64;
        while out.len() < n {
            if proposed >= self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "{} of {n} draws accepted after {proposed} proposals",
                    out.len()
                )));
            }
            proposed += 1;
            if let Some(x) = self.try_draw(rng)? {
                out.push(x);
            }
        }
        let accepted = out.len() as u64;
        Ok((
            out,
            SampleStats {
                accepted,
                proposed,
                rejection_fraction: if proposed == 0 { 0.0 } else { 1.0 - accepted as f64 / proposed as f64 },
                wall_time: start.elapsed(),
            },
        ))
    }
}

fn check_point<B: BaseDistribution>(target: &WeightedTarget<B>, proposal: &Proposal<B>, x: f64) -> Result<f64> {
    let lf = target.log_f0_unchecked(x);
    let lh = proposal.log_h0(x);
    let r = if lf == f64::NEG_INFINITY { f64::NEG_INFINITY } else { lf - lh };
    if r > DOMINATION_TOL || r.is_nan() {
        return Err(Error::EnvelopeViolation { x, log_ratio: r });
    }
    Ok(r)
}

/// `n` exact draws from the normalized target.
pub fn rejection_sample<B: BaseDistribution, R: Rng + ?Sized>(
    target: &WeightedTarget<B>,
    proposal: &Proposal<B>,
    n: usize,
    rng: &mut R,
) -> Result<(Vec<f64>, SampleStats)> {
    RejectionSampler::new(target, proposal)?.sample(n, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DtExp;
    use crate::envelope::{LowerMode, Scheme};
    use crate::target::SupportInterval;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_density() {
        // f(x) = 2x on (0, 1]; mean 2/3.
        let t = WeightedTarget::new(|x: f64| x.ln(), DtExp::uniform(0.0, 1.0).unwrap(), SupportInterval::new(0.0, 1.0).unwrap()).unwrap();
        let p = Proposal::build(&t, &[0.0, 0.25, 0.5, 0.75, 1.0], Scheme::Constant, LowerMode::Analytic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (xs, st) = rejection_sample(&t, &p, 20_000, &mut rng).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 2.0 / 3.0).abs() < 0.01);
        // Exact rejection rate of this envelope is 1 - 0.5 / 0.625 = 0.2.
        assert!((st.rejection_fraction - 0.2).abs() < 0.01, "{st:?}");
        assert_eq!(st.accepted, 20_000);
    }

    #[test]
    fn violated_envelope_is_reported() {
        let t = WeightedTarget::new(|x: f64| x.ln(), DtExp::uniform(0.0, 1.0).unwrap(), SupportInterval::new(0.0, 1.0).unwrap()).unwrap();
        // Envelope built for a weight that is half as large.
        let low = WeightedTarget::new(|x: f64| (0.5 * x).ln(), DtExp::uniform(0.0, 1.0).unwrap(), SupportInterval::new(0.0, 1.0).unwrap()).unwrap();
        let p = Proposal::build(&low, &[0.0, 0.5, 1.0], Scheme::Constant, LowerMode::Analytic).unwrap();
        assert!(matches!(RejectionSampler::new(&t, &p), Err(Error::EnvelopeViolation { .. })));
    }
}
