use rand::Rng;
use rand_distr::{Distribution, Gamma};
use web_time::Instant;

use super::marginal::check_params;
use crate::error::{Error, Result};
use crate::rejection::{SampleStats, DEFAULT_BUDGET};

/// Constants of the Ulrich-Wood sampler for the marginal `mu' V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UwConstants {
    pub b_star: f64,
    pub x_star: f64,
    pub log_const: f64,
}

pub fn uw_constants(d: usize, kappa: f64) -> Result<UwConstants> {
    check_params(d, kappa)?;
    let m = d as f64 - 1.0;
    // (-2k + sqrt(4k^2 + m^2)) / m, rationalized.
    let b_star = m / (2.0 * kappa + (4.0 * kappa * kappa + m * m).sqrt());
    let x_star = (1.0 - b_star) / (1.0 + b_star);
    let log_const = kappa * x_star + m * ((1.0 - x_star) * (1.0 + x_star)).ln();
    Ok(UwConstants { b_star, x_star, log_const })
}

/// One accepted marginal draw and the number of proposals it took.
pub fn uw_draw<R: Rng + ?Sized>(d: usize, kappa: f64, k: &UwConstants, gamma: &Gamma<f64>, rng: &mut R) -> (f64, u64) {
    let m = d as f64 - 1.0;
    let b = k.b_star;
    let mut tries = 0;
    loop {
        tries += 1;
        let g1 = gamma.sample(rng);
        let g2 = gamma.sample(rng);
        let z = g1 / (g1 + g2);
        let x = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u: f64 = rng.random();
        if u.ln() < kappa * x + m * (1.0 - k.x_star * x).ln() - k.log_const {
            return (x, tries);
        }
    }
}

/// `n` marginal draws with the Ulrich-Wood sampler.
pub fn uw_sample<R: Rng + ?Sized>(d: usize, kappa: f64, n: usize, rng: &mut R) -> Result<(Vec<f64>, SampleStats)> {
    let k = uw_constants(d, kappa)?;
    let gamma = Gamma::new(0.5 * (d as f64 - 1.0), 1.0).map_err(|e| Error::domain(e.to_string()))?;
    let start = Instant::now();
    let mut out = Vec::with_capacity(n);
    let mut proposed = 0;
    while out.len() < n {
        let (x, t) = uw_draw(d, kappa, &k, &gamma, rng);
        proposed += t;
        if proposed > DEFAULT_BUDGET {
            return Err(Error::BudgetExceeded(format!("{} of {n} draws after {proposed} proposals", out.len())));
        }
        out.push(x);
    }
    Ok((
        out,
        SampleStats {
            accepted: n as u64,
            proposed,
            rejection_fraction: if proposed == 0 { 0.0 } else { 1.0 - n as f64 / proposed as f64 },
            wall_time: start.elapsed(),
        },
    ))
}
