use rand::Rng;

use super::marginal::check_params;
use crate::distributions::{log_norm_interval, TruncNormal};
use crate::error::{Error, Result};
use crate::numerics::{log1m_exp, log_bessel_i_scaled};
use crate::rejection::{SampleStats, DEFAULT_BUDGET};
use crate::target::BaseDistribution;
use web_time::Instant;

fn check_dim(d: usize, kappa: f64) -> Result<()> {
    check_params(d, kappa)?;
    if d <= 3 {
        return Err(Error::domain(format!("the Gaussian envelope needs d > 3, got {d}")));
    }
    Ok(())
}

/// Truncated normal proposal for the marginal, valid for `d > 3`.
pub fn simple_proposal(d: usize, kappa: f64) -> Result<TruncNormal> {
    check_dim(d, kappa)?;
    let a = d as f64 - 3.0;
    TruncNormal::new(kappa / a, 1.0 / a, -1.0, 1.0)
}

/// Exact rejection probability of the truncated normal proposal.
pub fn simple_rejection_rate(d: usize, kappa: f64) -> Result<f64> {
    check_dim(d, kappa)?;
    let df = d as f64;
    let a = df - 3.0;
    let nu = 0.5 * df - 1.0;
    let log_two_sinh = kappa + log1m_exp(-2.0 * kappa);
    let log_psi = nu * std::f64::consts::LN_2 + 0.5 * std::f64::consts::PI.ln() + log_bessel_i_scaled(nu, kappa)? + kappa
        + libm::lgamma(0.5 * (df - 1.0))
        - (0.5 * df - 2.0) * kappa.ln()
        - log_two_sinh;
    let m = kappa / a;
    let s = 1.0 / a.sqrt();
    let log_psi_star = kappa.ln() - log_two_sinh + 0.5 * (2.0 * std::f64::consts::PI / a).ln() + kappa * kappa / (2.0 * a)
        + log_norm_interval((-1.0 - m) / s, (1.0 - m) / s);
    Ok(-(log_psi - log_psi_star).exp_m1())
}

/// `n` marginal draws by rejection from the truncated normal proposal.
pub fn simple_sample<R: Rng + ?Sized>(d: usize, kappa: f64, n: usize, rng: &mut R) -> Result<(Vec<f64>, SampleStats)> {
    let prop = simple_proposal(d, kappa)?;
    let half = 0.5 * (d as f64 - 3.0);
    let start = Instant::now();
    let mut out = Vec::with_capacity(n);
    let mut proposed = 0u64;
    while out.len() < n {
        if proposed >= DEFAULT_BUDGET {
            return Err(Error::BudgetExceeded(format!("{} of {n} draws after {proposed} proposals", out.len())));
        }
        proposed += 1;
        let x = prop.quantile(rng.random());
        let u: f64 = rng.random();
        if u.ln() <= half * (((1.0 - x) * (1.0 + x)).ln() + x * x) {
            out.push(x);
        }
    }
    Ok((
        out,
        SampleStats {
            accepted: n as u64,
            proposed,
            rejection_fraction: 1.0 - n as f64 / proposed as f64,
            wall_time: start.elapsed(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    #[test]
    fn table_spot_values() {
        for &(d, k, pct) in &[(4usize, 0.1, 8.23), (50, 50.0, 99.86), (10, 10.0, 73.71), (4, 50.0, 71.57)] {
            let r = 100.0 * simple_rejection_rate(d, k).unwrap();
            assert!((r - pct).abs() <= 0.005 + 1e-9, "d={d} kappa={k}: {r}");
        }
    }

    #[test]
    fn rejects_low_dimension() {
        assert!(simple_rejection_rate(3, 1.0).is_err());
        assert!(simple_proposal(2, 1.0).is_err());
    }

    #[test]
    fn psi_matches_quadrature() {
        // psi = E_g[w] with g the truncated exponential on (-1, 1).
        for d in [4usize, 5, 10] {
            for kappa in [0.5, 2.0] {
                let half = 0.5 * (d as f64 - 3.0);
                let z = 2.0 * f64::sinh(kappa);
                let q = integrate(|x: f64| (1.0 - x * x).powf(half) * kappa * (kappa * x).exp() / z, -1.0, 1.0, 1e-13)
                    .unwrap()
                    .value;
                let nu = 0.5 * d as f64 - 1.0;
                let psi = (nu * 2f64.ln() + 0.5 * std::f64::consts::PI.ln() + log_bessel_i_scaled(nu, kappa).unwrap() + kappa
                    + libm::lgamma(0.5 * (d as f64 - 1.0))
                    - (0.5 * d as f64 - 2.0) * kappa.ln())
                .exp()
                    / z;
                assert!(((psi - q) / q).abs() < 1e-8, "d={d} kappa={kappa}: {psi} vs {q}");
            }
        }
    }
}
