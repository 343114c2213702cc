use rand::Rng;

use super::marginal::{marginal_log_mass, marginal_target, Factorization};
use crate::envelope::{LowerMode, Scheme};
use crate::error::Result;
use crate::knots::refine_probabilistic_observed;

/// Approximation of the probability that a VMF draw with mean `e_1` lies
/// in the nonnegative orthant, for one proposal size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthantResult {
    pub regions: usize,
    /// Probability under the proposal.
    pub approx: f64,
    /// Probability under the truncated target, by quadrature.
    pub exact: f64,
    /// Probability under the untruncated target, by quadrature.
    pub exact_untruncated: f64,
    pub delta: f64,
    /// `2^-(d-1)` times the exact rejection probability of the proposal.
    pub bound: f64,
}

/// Follows one probabilistic refinement path of the linear VWS proposal
/// from one to `max_regions` regions, with the support truncated by `eps`.
pub fn orthant_study<R: Rng + ?Sized>(d: usize, kappa: f64, max_regions: usize, eps: f64, rng: &mut R) -> Result<Vec<OrthantResult>> {
    let target = marginal_target(d, kappa, Factorization::Vws, eps)?;
    let s = target.support();
    let scale = 0.5f64.powi(d as i32 - 1);
    let upper_full = (marginal_log_mass(d, kappa, 0.0, 1.0)? - marginal_log_mass(d, kappa, -1.0, 1.0)?).exp();
    let upper_trunc = (marginal_log_mass(d, kappa, 0.0, s.hi)? - marginal_log_mass(d, kappa, s.lo, s.hi)?).exp();
    let mut out = Vec::with_capacity(max_regions);
    refine_probabilistic_observed(
        &target,
        &[s.lo, s.hi],
        Scheme::Linear,
        LowerMode::Trivial,
        0.0,
        max_regions.saturating_sub(1),
        rng,
        |p| {
            let approx = scale * (1.0 - p.cdf(0.0));
            let exact = scale * upper_trunc;
            out.push(OrthantResult {
                regions: p.num_regions(),
                approx,
                exact,
                exact_untruncated: scale * upper_full,
                delta: (approx - exact).abs(),
                bound: scale * p.rejection_bound(),
            });
            Ok(())
        },
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn near_uniform_quarter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = orthant_study(2, 1e-6, 3, 1e-6, &mut rng).unwrap();
        assert!((r[0].exact - 0.25).abs() < 1e-6);
        assert!(r.iter().all(|s| s.delta <= s.bound + 1e-12));
    }
}
