use rand::Rng;
use rand_distr::{Gamma, StandardNormal};

use super::marginal::{check_params, marginal_proposal, Factorization};
use super::uw::{uw_constants, uw_draw, UwConstants};
use super::DEFAULT_EPS_TRUNC;
use crate::distributions::DtExp;
use crate::envelope::Scheme;
use crate::error::{Error, Result};
use crate::proposal::Proposal;
use crate::rejection::RejectionSampler;
use crate::target::WeightedTarget;

/// Marginal sampler used for vector draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VmfMethod {
    Uw,
    VwsLinear,
    VwsConstant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VmfParams {
    pub d: usize,
    pub kappa: f64,
    pub mu: Vec<f64>,
}

impl VmfParams {
    /// `mu` must have unit norm to within 1e-8; it is renormalized.
    pub fn new(kappa: f64, mu: Vec<f64>) -> Result<Self> {
        let d = mu.len();
        check_params(d, kappa)?;
        let norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::domain(format!("mean direction must have unit norm, got {norm}")));
        }
        Ok(VmfParams {
            d,
            kappa,
            mu: mu.into_iter().map(|v| v / norm).collect(),
        })
    }
}

/// Applies the Householder reflection that maps `e_1` to `mu`.
pub fn householder_apply(mu: &[f64], v: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = mu.iter().map(|m| -m).collect();
    u[0] += 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    if uu < 1e-30 {
        return v.to_vec();
    }
    let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let f = 2.0 * uv / uu;
    v.iter().zip(&u).map(|(vi, ui)| vi - f * ui).collect()
}

/// Uniform draw on the unit sphere in `R^k` via normalized Gaussians.
pub fn uniform_direction<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let z: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let n = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.0 {
            return z.into_iter().map(|x| x / n).collect();
        }
    }
}

#[allow(clippy::large_enum_variant)]
enum Marginal {
    Uw(UwConstants, Gamma<f64>),
    Strips(WeightedTarget<DtExp>, Proposal<DtExp>),
}

/// Vector sampler that builds its marginal sampler once.
pub struct VmfSampler {
    params: VmfParams,
    marginal: Marginal,
}

/// Number of regions used by the strip-based marginal samplers.
pub const SAMPLER_REGIONS: usize = 50;

impl VmfSampler {
    pub fn new(params: VmfParams, method: VmfMethod) -> Result<Self> {
        Self::with_truncation(params, method, DEFAULT_EPS_TRUNC)
    }

    pub fn with_truncation(params: VmfParams, method: VmfMethod, eps: f64) -> Result<Self> {
        let (d, kappa) = (params.d, params.kappa);
        let marginal = match method {
            VmfMethod::Uw => Marginal::Uw(
                uw_constants(d, kappa)?,
                Gamma::new(0.5 * (d as f64 - 1.0), 1.0).map_err(|e| Error::domain(e.to_string()))?,
            ),
            VmfMethod::VwsLinear | VmfMethod::VwsConstant => {
                let scheme = if method == VmfMethod::VwsLinear { Scheme::Linear } else { Scheme::Constant };
                let (t, p) = marginal_proposal(d, kappa, Factorization::Vws, scheme, eps, SAMPLER_REGIONS)?;
                RejectionSampler::new(&t, &p)?;
                Marginal::Strips(t, p)
            }
        };
        Ok(VmfSampler { params, marginal })
    }

    pub fn params(&self) -> &VmfParams {
        &self.params
    }

    /// One marginal draw of `mu' V`.
    pub fn sample_marginal<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match &self.marginal {
            Marginal::Uw(k, g) => Ok(uw_draw(self.params.d, self.params.kappa, k, g, rng).0),
            Marginal::Strips(t, p) => {
                let s = RejectionSampler::prechecked(t, p);
                loop {
                    if let Some(x) = s.try_draw(rng)? {
                        return Ok(x);
                    }
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let x = self.sample_marginal(rng)?;
        Ok(self.assemble(x, rng))
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
        let xs: Vec<f64> = match &self.marginal {
            Marginal::Uw(k, g) => (0..n).map(|_| uw_draw(self.params.d, self.params.kappa, k, g, rng).0).collect(),
            Marginal::Strips(t, p) => RejectionSampler::prechecked(t, p).sample(n, rng)?.0,
        };
        Ok(xs.into_iter().map(|x| self.assemble(x, rng)).collect())
    }

    fn assemble<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> Vec<f64> {
        let d = self.params.d;
        let u = uniform_direction(d - 1, rng);
        let r = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut v0 = Vec::with_capacity(d);
        v0.push(x);
        v0.extend(u.iter().map(|ui| r * ui));
        householder_apply(&self.params.mu, &v0)
    }
}

/// `n` draws from `VMF_d(mu, kappa)`.
pub fn vmf_sample_vector<R: Rng + ?Sized>(params: &VmfParams, n: usize, rng: &mut R, method: VmfMethod) -> Result<Vec<Vec<f64>>> {
    VmfSampler::new(params.clone(), method)?.sample_n(n, rng)
}
