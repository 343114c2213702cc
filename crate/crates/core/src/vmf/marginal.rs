use crate::distributions::DtExp;
use crate::envelope::{LowerMode, Scheme};
use crate::error::{Error, Result};
use crate::knots::refine_greedy;
use crate::numerics::{integrate, log_bessel_i_scaled};
use crate::proposal::Proposal;
use crate::target::{Curvature, Region, SupportInterval, WeightedTarget};

/// How the marginal density is split into weight and base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factorization {
    /// Weight `(1 - x^2)^((d-3)/2)` on a truncated exponential base.
    Vws,
    /// Weight `(1 - x^2)^((d-3)/2) exp(kappa x)` on a uniform base.
    Vs,
}

pub(crate) fn check_params(d: usize, kappa: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {d}")));
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain(format!("concentration must be positive and finite, got {kappa}")));
    }
    Ok(())
}

fn log_one_minus_sq(x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).ln()
}

// Stationary point of (a/2) log(1 - x^2) + s x in (-1, 1); a != 0.
fn stationary_point(a: f64, s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    2.0 * s / (a + a.signum() * (a * a + 4.0 * s * s).sqrt())
}

/// Unnormalized marginal target on `(-1 + eps, 1 - eps]`.
pub fn marginal_target(d: usize, kappa: f64, fact: Factorization, eps: f64) -> Result<WeightedTarget<DtExp>> {
    check_params(d, kappa)?;
    if !(0.0..0.1).contains(&eps) {
        return Err(Error::domain(format!("truncation must lie in [0, 0.1), got {eps}")));
    }
    let lo = -1.0 + eps;
    let hi = 1.0 - eps;
    let half = 0.5 * (d as f64 - 3.0);
    let shift = match fact {
        Factorization::Vws => 0.0,
        Factorization::Vs => kappa,
    };
    let base = match fact {
        Factorization::Vws => DtExp::new(lo, hi, kappa)?,
        Factorization::Vs => DtExp::uniform(lo, hi)?,
    };
    let lw = move |x: f64| {
        let core = if half == 0.0 { 0.0 } else { half * log_one_minus_sq(x) };
        core + shift * x
    };
    let curvature = if d < 3 {
        Curvature::LogConvex
    } else if d > 3 {
        Curvature::LogConcave
    } else {
        Curvature::LogLinear
    };
    let a = 2.0 * half;
    let m = if a == 0.0 { f64::NAN } else { stationary_point(a, shift) };
    let bounds = move |r: &Region| {
        let (l0, l1) = (lw(r.lo), lw(r.hi));
        let mut sup = l0.max(l1);
        let mut inf = l0.min(l1);
        if r.lo <= m && m <= r.hi {
            if a > 0.0 {
                sup = sup.max(lw(m));
            } else {
                inf = inf.min(lw(m));
            }
        }
        (sup, inf)
    };
    Ok(WeightedTarget::new(lw, base, SupportInterval::new(lo, hi)?)?
        .with_derivative(move |x| -a * x / ((1.0 - x) * (1.0 + x)) + shift)
        .with_curvature(move |_| curvature)
        .with_constant_bounds(bounds))
}

/// Marginal proposal refined greedily from the single-region envelope to
/// `n_regions` regions.
pub fn marginal_proposal(
    d: usize,
    kappa: f64,
    fact: Factorization,
    scheme: Scheme,
    eps: f64,
    n_regions: usize,
) -> Result<(WeightedTarget<DtExp>, Proposal<DtExp>)> {
    let target = marginal_target(d, kappa, fact, eps)?;
    let s = target.support();
    let (prop, _) = refine_greedy(&target, &[s.lo, s.hi], scheme, LowerMode::Analytic, 0.0, n_regions.saturating_sub(1))?;
    Ok((target, prop))
}

/// `log` of the integral of `(1 - x^2)^((d-3)/2) exp(kappa x)` over
/// `(-1, 1)` in closed form.
pub fn log_marginal_normalizer(d: usize, kappa: f64) -> Result<f64> {
    check_params(d, kappa)?;
    let nu = 0.5 * d as f64 - 1.0;
    Ok(0.5 * std::f64::consts::PI.ln() + libm::lgamma(0.5 * (d as f64 - 1.0)) + nu * (2.0 / kappa).ln()
        + log_bessel_i_scaled(nu, kappa)?
        + kappa)
}

/// `log` of the integral of `(1 - x^2)^((d-3)/2) exp(kappa x)` over
/// `[lo, hi]` within `[-1, 1]`, by quadrature in the angle `x = cos t`,
/// where the integrand is smooth.
pub fn marginal_log_mass(d: usize, kappa: f64, lo: f64, hi: f64) -> Result<f64> {
    check_params(d, kappa)?;
    if !(-1.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::domain(format!("need -1 <= lo < hi <= 1, got [{lo}, {hi}]")));
    }
    let p = d as f64 - 2.0;
    let t0 = hi.acos();
    let t1 = lo.acos();
    // Scaled by exp(-kappa) to stay in range.
    let f = |t: f64| {
        let s = t.sin();
        let core = if p == 0.0 { 1.0 } else { s.powf(p) };
        core * (kappa * (t.cos() - 1.0)).exp()
    };
    let r = integrate(f, t0, t1, 1e-13)?;
    Ok(r.value.ln() + kappa)
}

/// CDF of the marginal density restricted to `[lo, hi]`, evaluated by
/// accumulating quadrature between sorted points.
#[derive(Debug, Clone, Copy)]
pub struct MarginalCdf {
    d: usize,
    kappa: f64,
    lo: f64,
    hi: f64,
    log_total: f64,
}

impl MarginalCdf {
    pub fn new(d: usize, kappa: f64, lo: f64, hi: f64) -> Result<Self> {
        let log_total = marginal_log_mass(d, kappa, lo, hi)?;
        Ok(MarginalCdf { d, kappa, lo, hi, log_total })
    }

    /// Untruncated marginal on `(-1, 1)`.
    pub fn full(d: usize, kappa: f64) -> Result<Self> {
        Self::new(d, kappa, -1.0, 1.0)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= self.lo {
            return Ok(0.0);
        }
        if x >= self.hi {
            return Ok(1.0);
        }
        Ok((marginal_log_mass(self.d, self.kappa, self.lo, x)? - self.log_total).exp())
    }

    /// CDF at each point of an ascending slice.
    pub fn cdf_sorted(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(xs.len());
        let mut acc = 0.0f64;
        let mut prev = self.lo;
        for &x in xs {
            if x < prev {
                return Err(Error::domain("points must be sorted ascending"));
            }
            let x = x.clamp(self.lo, self.hi);
            if x > prev {
                acc += (marginal_log_mass(self.d, self.kappa, prev, x)? - self.log_total).exp();
                prev = x;
            }
            out.push(acc.min(1.0));
        }
        Ok(out)
    }
}
