//! The finite-mixture proposal built from envelope pieces.

use rand::Rng;

use crate::envelope::{build_piece, EnvelopePiece, Scheme};
pub use crate::envelope::LowerMode;
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_semi_infinite, log_sum_exp};
use crate::target::{BaseDistribution, Region, WeightedTarget};

const QUAD_TOL: f64 = 1e-10;

/// One region of a proposal: its envelope piece, the log masses of the
/// majorizer and minorizer, and the normalized mixture component.
#[derive(Debug, Clone)]
pub struct Strip<B> {
    pub piece: EnvelopePiece,
    pub log_upper_mass: f64,
    pub log_lower_mass: f64,
    /// False if the integral behind a trivial lower mass did not meet its
    /// tolerance.
    pub quadrature_converged: bool,
    component: B,
}

fn integrate_region(f: impl Fn(f64) -> f64, region: &Region) -> Result<(f64, bool)> {
    match (region.lo.is_finite(), region.hi.is_finite()) {
        (true, true) => {
            let r = integrate(&f, region.lo, region.hi, QUAD_TOL)?;
            Ok((r.value, r.converged))
        }
        (true, false) => {
            let r = integrate_semi_infinite(&f, region.lo, QUAD_TOL)?;
            Ok((r.value, r.converged))
        }
        (false, true) => {
            let r = integrate_semi_infinite(|x| f(-x), -region.hi, QUAD_TOL)?;
            Ok((r.value, r.converged))
        }
        (false, false) => {
            let a = integrate_semi_infinite(&f, 0.0, QUAD_TOL)?;
            let b = integrate_semi_infinite(|x| f(-x), 0.0, QUAD_TOL)?;
            Ok((a.value + b.value, a.converged && b.converged))
        }
    }
}

impl<B: BaseDistribution> Strip<B> {
    pub fn build(
        target: &WeightedTarget<B>,
        region: &Region,
        scheme: Scheme,
        lower: LowerMode,
        expansion: Option<f64>,
    ) -> Result<Self> {
        let piece = build_piece(target, region, scheme, lower == LowerMode::Analytic, expansion)?;
        let base = target.base();
        let (log_upper_mass, component) = piece.upper.log_mass(base, region)?;
        if log_upper_mass.is_nan() || log_upper_mass == f64::INFINITY {
            return Err(Error::numeric(format!(
                "majorizer mass on ({}, {}] is {log_upper_mass}",
                region.lo, region.hi
            )));
        }
        let (log_lower_mass, quadrature_converged) = match lower {
            LowerMode::Analytic => (piece.lower.log_mass(base, region)?.0, true),
            LowerMode::Trivial if log_upper_mass == f64::NEG_INFINITY => (f64::NEG_INFINITY, true),
            LowerMode::Trivial => {
                // Integrate f0 scaled by the upper mass so the integrand is O(1).
                let (v, ok) = integrate_region(|x| (target.log_f0_unchecked(x) - log_upper_mass).exp(), region)?;
                (v.ln() + log_upper_mass, ok)
            }
        };
        let log_lower_mass = if log_lower_mass.is_nan() {
            f64::NEG_INFINITY
        } else {
            log_lower_mass.min(log_upper_mass)
        };
        Ok(Strip {
            piece,
            log_upper_mass,
            log_lower_mass,
            quadrature_converged,
            component,
        })
    }

    pub fn region(&self) -> &Region {
        &self.piece.region
    }

    pub fn component(&self) -> &B {
        &self.component
    }
}

/// Mixture `h(x) = sum_j pi_j g_j(x)` with `pi_j` proportional to the
/// majorizer masses.
#[derive(Debug, Clone)]
pub struct Proposal<B> {
    base: B,
    strips: Vec<Strip<B>>,
    knots: Vec<f64>,
    scheme: Scheme,
    lower: LowerMode,
    log_upper_total: f64,
    log_lower_total: f64,
    probs: Vec<f64>,
    cum: Vec<f64>,
    rho: Vec<f64>,
}

impl<B: BaseDistribution> Proposal<B> {
    /// Build on `knots`, which must increase strictly from the lower to the
    /// upper end of the target support.
    pub fn build(target: &WeightedTarget<B>, knots: &[f64], scheme: Scheme, lower: LowerMode) -> Result<Self> {
        check_knots(target, knots)?;
        let strips = knots
            .windows(2)
            .map(|w| Strip::build(target, &Region { lo: w[0], hi: w[1] }, scheme, lower, None))
            .collect::<Result<Vec<_>>>()?;
        Self::from_strips(target.base().clone(), strips, scheme, lower)
    }

    /// Assemble from adjacent strips that already cover the support.
    pub fn from_strips(base: B, strips: Vec<Strip<B>>, scheme: Scheme, lower: LowerMode) -> Result<Self> {
        if strips.is_empty() {
            return Err(Error::domain("a proposal needs at least one region"));
        }
        let mut knots = Vec::with_capacity(strips.len() + 1);
        knots.push(strips[0].region().lo);
        for s in &strips {
            if s.region().lo != *knots.last().unwrap() {
                return Err(Error::domain("strips are not adjacent"));
            }
            knots.push(s.region().hi);
        }
        let ups: Vec<f64> = strips.iter().map(|s| s.log_upper_mass).collect();
        let lows: Vec<f64> = strips.iter().map(|s| s.log_lower_mass).collect();
        let log_upper_total = log_sum_exp(&ups)?;
        let log_lower_total = log_sum_exp(&lows)?;
        if !log_upper_total.is_finite() {
            return Err(Error::numeric(format!("total envelope mass is {}", log_upper_total.exp())));
        }
        let probs: Vec<f64> = ups.iter().map(|&u| (u - log_upper_total).exp()).collect();
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cum.push(acc);
        }
        let total = acc;
        for c in &mut cum {
            *c /= total;
        }
        *cum.last_mut().unwrap() = 1.0;
        let rho = ups
            .iter()
            .zip(&lows)
            .map(|(&u, &l)| ((u - log_upper_total).exp() - (l - log_upper_total).exp()).max(0.0))
            .collect();
        Ok(Proposal {
            base,
            strips,
            knots,
            scheme,
            lower,
            log_upper_total,
            log_lower_total,
            probs,
            cum,
            rho,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn strips(&self) -> &[Strip<B>] {
        &self.strips
    }

    pub fn into_strips(self) -> Vec<Strip<B>> {
        self.strips
    }

    pub fn num_regions(&self) -> usize {
        self.strips.len()
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn lower_mode(&self) -> LowerMode {
        self.lower
    }

    /// `log` of the total majorizer mass.
    pub fn log_upper_total(&self) -> f64 {
        self.log_upper_total
    }

    /// `log` of the total minorizer mass; `log` of the target's normalizing
    /// constant when the lower masses are exact.
    pub fn log_lower_total(&self) -> f64 {
        self.log_lower_total
    }

    /// Mixture weights.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Per-region contribution to the rejection bound.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Upper bound on the rejection probability; exact when the lower
    /// masses are exact.
    pub fn rejection_bound(&self) -> f64 {
        self.rho.iter().sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn log_rejection_bound(&self) -> f64 {
        self.rejection_bound().ln()
    }

    /// Bound on the total variation distance between the proposal and the
    /// normalized target, and whether it is the exact rejection probability.
    pub fn tv_bound(&self) -> (f64, bool) {
        (self.rejection_bound(), self.is_exact())
    }

    pub fn is_exact(&self) -> bool {
        self.lower == LowerMode::Trivial && self.strips.iter().all(|s| s.quadrature_converged)
    }

    /// Index of the region `(a_{j-1}, a_j]` holding `x`; the lower end of
    /// the support belongs to the first region.
    pub fn region_index(&self, x: f64) -> Option<usize> {
        let n = self.strips.len();
        if x.is_nan() || x < self.knots[0] || x > self.knots[n] {
            return None;
        }
        let j = self.knots[1..].partition_point(|&k| k < x);
        Some(j.min(n - 1))
    }

    /// `log` of the unnormalized envelope `w_bar(x) g(x)`.
    pub fn log_h0(&self, x: f64) -> f64 {
        match self.region_index(x) {
            Some(j) => self.strips[j].piece.upper.eval(x) + self.base.log_density(x),
            None => f64::NEG_INFINITY,
        }
    }

    /// `log` of the normalized proposal density.
    pub fn log_density(&self, x: f64) -> f64 {
        self.log_h0(x) - self.log_upper_total
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let n = self.strips.len();
        if x <= self.knots[0] {
            return 0.0;
        }
        if x >= self.knots[n] {
            return 1.0;
        }
        let j = self.region_index(x).unwrap();
        let below = if j == 0 { 0.0 } else { self.cum[j - 1] };
        (below + self.probs[j] * self.strips[j].component.cdf(x)).min(1.0)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        if p.is_nan() {
            return f64::NAN;
        }
        let p = p.clamp(0.0, 1.0);
        let n = self.strips.len();
        let mut j = self.cum.partition_point(|&c| c <= p).min(n - 1);
        while self.probs[j] == 0.0 && j > 0 {
            j -= 1;
        }
        let below = if j == 0 { 0.0 } else { self.cum[j - 1] };
        let width = self.cum[j] - below;
        let r = if width > 0.0 { ((p - below) / width).clamp(0.0, 1.0) } else { 0.5 };
        self.strips[j].component.quantile(r)
    }

    /// One draw from the proposal.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

fn check_knots<B: BaseDistribution>(target: &WeightedTarget<B>, knots: &[f64]) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::domain("need at least two knots"));
    }
    let s = target.support();
    if knots[0] != s.lo || knots[knots.len() - 1] != s.hi {
        return Err(Error::domain(format!(
            "knots must start at {} and end at {}, got {} and {}",
            s.lo,
            s.hi,
            knots[0],
            knots[knots.len() - 1]
        )));
    }
    for w in knots.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::domain(format!("knots must increase strictly: {} then {}", w[0], w[1])));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DtExp;
    use crate::target::{Curvature, SupportInterval};

    fn linear_weight() -> WeightedTarget<DtExp> {
        // w(x) = x on a uniform base over (0, 1].
        WeightedTarget::new(|x: f64| x.ln(), DtExp::uniform(0.0, 1.0).unwrap(), SupportInterval::new(0.0, 1.0).unwrap())
            .unwrap()
            .with_curvature(|_| Curvature::LogConcave)
    }

    #[test]
    fn single_constant_region() {
        let t = linear_weight();
        let p = Proposal::build(&t, &[0.0, 1.0], Scheme::Constant, LowerMode::Analytic).unwrap();
        assert!(p.log_upper_total().abs() < 1e-12);
        assert_eq!(p.log_lower_total(), f64::NEG_INFINITY);
        assert!((p.rejection_bound() - 1.0).abs() < 1e-12);
        let p = Proposal::build(&t, &[0.0, 1.0], Scheme::Constant, LowerMode::Trivial).unwrap();
        assert!((p.rejection_bound() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn four_constant_regions() {
        // w_bar = (1/4, 1/2, 3/4, 1), w_under = (0, 1/4, 1/2, 3/4): bound 1 - 6/10.
        let t = linear_weight();
        let p = Proposal::build(&t, &[0.0, 0.25, 0.5, 0.75, 1.0], Scheme::Constant, LowerMode::Analytic).unwrap();
        assert!((p.rejection_bound() - 0.4).abs() < 1e-12);
        let want = [0.1, 0.2, 0.3, 0.4];
        for (a, b) in p.probabilities().iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let rho_sum: f64 = p.rho().iter().sum();
        assert!((rho_sum - p.rejection_bound()).abs() < 1e-14);
    }

    #[test]
    fn cdf_quantile_inverse() {
        let t = linear_weight();
        let p = Proposal::build(&t, &[0.0, 0.1, 0.35, 0.6, 1.0], Scheme::Linear, LowerMode::Trivial).unwrap();
        for i in 1..100 {
            let phi = i as f64 / 100.0;
            assert!((p.cdf(p.quantile(phi)) - phi).abs() < 1e-10);
        }
        assert_eq!(p.cdf(0.0), 0.0);
        assert_eq!(p.cdf(1.0), 1.0);
    }

    #[test]
    fn knots_validated() {
        let t = linear_weight();
        assert!(Proposal::build(&t, &[0.0, 0.5], Scheme::Constant, LowerMode::Analytic).is_err());
        assert!(Proposal::build(&t, &[0.0, 0.6, 0.5, 1.0], Scheme::Constant, LowerMode::Analytic).is_err());
        assert!(Proposal::build(&t, &[-0.1, 1.0], Scheme::Constant, LowerMode::Analytic).is_err());
    }

    #[test]
    fn region_lookup() {
        let t = linear_weight();
        let p = Proposal::build(&t, &[0.0, 0.5, 1.0], Scheme::Constant, LowerMode::Analytic).unwrap();
        assert_eq!(p.region_index(0.0), Some(0));
        assert_eq!(p.region_index(0.5), Some(0));
        assert_eq!(p.region_index(0.5000001), Some(1));
        assert_eq!(p.region_index(1.0), Some(1));
        assert_eq!(p.region_index(1.5), None);
    }
}
