use rand::Rng;

use super::sphere::{VmfMethod, VmfParams, VmfSampler};
use crate::distributions::DtExp;
use crate::envelope::{LowerMode, Scheme};
use crate::error::{Error, Result};
use crate::knots::{refine_greedy, RefinementTrace};
use crate::numerics::log_bessel_i_scaled;
use crate::rejection::{rejection_sample, SampleStats};
use crate::target::WeightedTarget;

/// Conjugate-prior posterior for `(mu, kappa)` given unit-vector data.
#[derive(Debug, Clone, PartialEq)]
pub struct VmfPosteriorParams {
    pub d: usize,
    pub c0: f64,
    pub r0: f64,
    pub m0: Vec<f64>,
    pub n: usize,
    pub r_n: f64,
    pub m_n: Vec<f64>,
    /// Rate of the exponential base distribution for `kappa`.
    pub tau: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Posterior parameters from data and prior `(c0, r0, m0)`. `m0` may be
/// omitted when `r0 = 0`.
pub fn posterior_params(data: &[Vec<f64>], c0: f64, r0: f64, m0: Option<&[f64]>, tau: f64) -> Result<VmfPosteriorParams> {
    let first = data.first().ok_or_else(|| Error::domain("no observations"))?;
    let d = first.len();
    if d < 2 {
        return Err(Error::domain("observations must have dimension at least 2"));
    }
    if !(c0 >= 0.0) || !(r0 >= 0.0) || !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("invalid prior: c0 = {c0}, r0 = {r0}, tau = {tau}")));
    }
    let m0 = match m0 {
        Some(m) => {
            if m.len() != d || (norm(m) - 1.0).abs() > 1e-8 {
                return Err(Error::domain("prior direction must be a unit vector of the data's dimension"));
            }
            m.to_vec()
        }
        None if r0 == 0.0 => {
            let mut e = vec![0.0; d];
            e[0] = 1.0;
            e
        }
        None => return Err(Error::domain("a prior direction is needed when r0 > 0")),
    };
    let mut s: Vec<f64> = m0.iter().map(|m| r0 * m).collect();
    for (i, v) in data.iter().enumerate() {
        if v.len() != d {
            return Err(Error::domain(format!("observation {i} has dimension {}, expected {d}", v.len())));
        }
        if (norm(v) - 1.0).abs() > 1e-8 {
            return Err(Error::domain(format!("observation {i} is not a unit vector")));
        }
        for (a, b) in s.iter_mut().zip(v) {
            *a += b;
        }
    }
    let r_n = norm(&s);
    if r_n < 1e-12 {
        return Err(Error::Degenerate("the resultant vector is zero".into()));
    }
    Ok(VmfPosteriorParams {
        d,
        c0,
        r0,
        m0,
        n: data.len(),
        r_n,
        m_n: s.iter().map(|x| x / r_n).collect(),
        tau,
    })
}

/// `log w(kappa)` of the marginal posterior of `kappa` relative to the
/// exponential base with rate `tau`, computed with scaled Bessel functions.
pub fn posterior_kappa_log_weight(pp: &VmfPosteriorParams, kappa: f64) -> f64 {
    let nu = 0.5 * pp.d as f64 - 1.0;
    let power = pp.c0 + pp.n as f64 - 1.0;
    let lead = -pp.tau.ln();
    if kappa == 0.0 {
        // kappa^nu / I_nu(kappa) -> 2^nu Gamma(nu + 1), I_nu(kappa R) / I_nu(kappa) -> R^nu.
        return lead + power * (nu * std::f64::consts::LN_2 + libm::lgamma(nu + 1.0)) + nu * pp.r_n.ln();
    }
    if !(kappa > 0.0) {
        return f64::NAN;
    }
    let (li, lir) = match (log_bessel_i_scaled(nu, kappa), log_bessel_i_scaled(nu, kappa * pp.r_n)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return f64::NAN,
    };
    let ratio = if power == 0.0 { 0.0 } else { power * (nu * kappa.ln() - kappa - li) };
    lead - kappa * (1.0 - pp.r_n - pp.tau) + ratio + lir - li
}

/// The marginal posterior of `kappa` as a weighted exponential target on
/// `(0, inf)`.
pub fn posterior_kappa_target(pp: &VmfPosteriorParams) -> Result<WeightedTarget<DtExp>> {
    let base = DtExp::new(0.0, f64::INFINITY, -pp.tau)?;
    let s = pp.clone();
    Ok(WeightedTarget::on_base_support(move |k| posterior_kappa_log_weight(&s, k), base))
}

#[derive(Debug, Clone)]
pub struct PosteriorSample {
    pub kappa: Vec<f64>,
    pub mu: Vec<Vec<f64>>,
    pub stats: SampleStats,
    pub trace: RefinementTrace,
}

/// Joint posterior draws: `kappa` by rejection from a constant-scheme
/// strip proposal with `n_regions` regions, then `mu` given `kappa`.
pub fn posterior_sample<R: Rng + ?Sized>(
    pp: &VmfPosteriorParams,
    n_regions: usize,
    n_draws: usize,
    rng: &mut R,
) -> Result<PosteriorSample> {
    let target = posterior_kappa_target(pp)?;
    let (prop, trace) = refine_greedy(
        &target,
        &[0.0, f64::INFINITY],
        Scheme::Constant,
        LowerMode::Analytic,
        0.0,
        n_regions.saturating_sub(1),
    )?;
    let (kappa, stats) = rejection_sample(&target, &prop, n_draws, rng)?;
    let mut mu = Vec::with_capacity(kappa.len());
    for &k in &kappa {
        let p = VmfParams::new(k * pp.r_n, pp.m_n.clone())?;
        mu.push(VmfSampler::new(p, VmfMethod::Uw)?.sample(rng)?);
    }
    Ok(PosteriorSample { kappa, mu, stats, trace })
}

/// Unit vector from a declination `theta1` and inclination `theta2` in
/// degrees.
pub fn angles_to_unit_vector(theta1: f64, theta2: f64) -> [f64; 3] {
    let t1 = (360.0 - theta1).to_radians();
    let t2 = (90.0 + theta2).to_radians();
    [t2.sin() * t1.cos(), t2.sin() * t1.sin(), t2.cos()]
}
