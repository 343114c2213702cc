//! Knot selection: fixed grids and adaptive refinement driven by the
//! per-region contributions to the rejection bound.

use rand::Rng;

use crate::envelope::{build_piece, LowerMode, Scheme};
use crate::error::{Error, Result};
use crate::numerics::minimize_on_interval;
use crate::proposal::{Proposal, Strip};
use crate::target::{BaseDistribution, Region, SupportInterval, WeightedTarget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnotRule {
    EqualSpacing,
    EqualProbability,
    /// Bisect a region drawn with probability proportional to its
    /// contribution to the bound.
    Probabilistic,
    /// Bisect the region with the largest contribution.
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The bound fell below the requested tolerance.
    Tolerance,
    /// The allowed number of insertions was used up.
    Budget,
}

/// Knots and rejection bound after each refinement step, starting with
/// the initial knots.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTrace {
    pub knots: Vec<Vec<f64>>,
    pub bounds: Vec<f64>,
    pub stop: StopReason,
}

impl RefinementTrace {
    pub fn log_bounds(&self) -> Vec<f64> {
        self.bounds.iter().map(|b| b.ln()).collect()
    }

    /// Bound when the proposal had `n` regions, if that step was reached.
    pub fn bound_at(&self, n: usize) -> Option<f64> {
        self.knots.iter().position(|k| k.len() == n + 1).map(|i| self.bounds[i])
    }
}

/// `n + 1` equally spaced knots over a bounded support.
pub fn equal_spaced(support: SupportInterval, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("need at least one region"));
    }
    if !support.is_bounded() {
        return Err(Error::domain("equal spacing needs a bounded support"));
    }
    let w = support.hi - support.lo;
    let mut k: Vec<f64> = (0..=n).map(|i| support.lo + w * i as f64 / n as f64).collect();
    k[n] = support.hi;
    Ok(k)
}

#[allow(clippy::too_many_arguments)]
fn refine<B, F, O>(
    target: &WeightedTarget<B>,
    initial: &[f64],
    scheme: Scheme,
    lower: LowerMode,
    eps: f64,
    max_new: usize,
    mut select: F,
    mut observe: O,
) -> Result<(Proposal<B>, RefinementTrace)>
where
    B: BaseDistribution,
    F: FnMut(&[f64]) -> usize,
    O: FnMut(&Proposal<B>) -> Result<()>,
{
    let mut prop = Proposal::build(target, initial, scheme, lower)?;
    let mut knots = Vec::new();
    let mut bounds = Vec::new();
    let mut inserted = 0;
    loop {
        observe(&prop)?;
        knots.push(prop.knots().to_vec());
        let bound = prop.rejection_bound();
        bounds.push(bound);
        if bound < eps {
            return Ok((prop, RefinementTrace { knots, bounds, stop: StopReason::Tolerance }));
        }
        if inserted == max_new {
            return Ok((prop, RefinementTrace { knots, bounds, stop: StopReason::Budget }));
        }
        let l = select(prop.rho());
        let region = *prop.strips()[l].region();
        let mid = region.split_point();
        if !(mid > region.lo && mid < region.hi) {
            return Err(Error::Degenerate(format!(
                "region ({}, {}] is too narrow to split",
                region.lo, region.hi
            )));
        }
        let left = Strip::build(target, &Region { lo: region.lo, hi: mid }, scheme, lower, None)?;
        let right = Strip::build(target, &Region { lo: mid, hi: region.hi }, scheme, lower, None)?;
        let mut strips = prop.into_strips();
        strips.splice(l..=l, [left, right]);
        prop = Proposal::from_strips(target.base().clone(), strips, scheme, lower)?;
        inserted += 1;
    }
}

/// Refinement that bisects a region drawn with probability proportional
/// to its `rho`, stopping once the bound is below `eps` or after `max_new`
/// insertions.
pub fn refine_probabilistic<B: BaseDistribution, R: Rng + ?Sized>(
    target: &WeightedTarget<B>,
    initial: &[f64],
    scheme: Scheme,
    lower: LowerMode,
    eps: f64,
    max_new: usize,
    rng: &mut R,
) -> Result<(Proposal<B>, RefinementTrace)> {
    refine_probabilistic_observed(target, initial, scheme, lower, eps, max_new, rng, |_| Ok(()))
}

/// As [`refine_probabilistic`], calling `observe` on the proposal at every
/// step, the initial one included.
#[allow(clippy::too_many_arguments)]
pub fn refine_probabilistic_observed<B, R, O>(
    target: &WeightedTarget<B>,
    initial: &[f64],
    scheme: Scheme,
    lower: LowerMode,
    eps: f64,
    max_new: usize,
    rng: &mut R,
    observe: O,
) -> Result<(Proposal<B>, RefinementTrace)>
where
    B: BaseDistribution,
    R: Rng + ?Sized,
    O: FnMut(&Proposal<B>) -> Result<()>,
{
    let select = |rho: &[f64]| {
        let total: f64 = rho.iter().sum();
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &r) in rho.iter().enumerate() {
            if r > 0.0 {
                last = i;
                acc += r;
                if u < acc {
                    return i;
                }
            }
        }
        last
    };
    refine(target, initial, scheme, lower, eps, max_new, select, observe)
}

/// Refinement that always bisects the region with the largest `rho`,
/// breaking ties toward the lowest index.
pub fn refine_greedy<B: BaseDistribution>(
    target: &WeightedTarget<B>,
    initial: &[f64],
    scheme: Scheme,
    lower: LowerMode,
    eps: f64,
    max_new: usize,
) -> Result<(Proposal<B>, RefinementTrace)> {
    refine(target, initial, scheme, lower, eps, max_new, |rho| {
        let mut best = 0;
        for (i, &r) in rho.iter().enumerate() {
            if r > rho[best] {
                best = i;
            }
        }
        best
    }, |_| Ok(()))
}

/// Knots chosen one at a time so that each region's majorizer mass is
/// `1/n` of the target's normalizing constant. Returns `n + 1` knots, or
/// fewer if the remaining support cannot hold another such region.
pub fn equal_probability<B: BaseDistribution>(target: &WeightedTarget<B>, scheme: Scheme, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("need at least one region"));
    }
    let s = target.support();
    let whole = Strip::build(target, &s.as_region(), scheme, LowerMode::Trivial, None)?;
    let goal = whole.log_lower_mass - (n as f64).ln();
    let mut knots = vec![s.lo];
    let mut prev = s.lo;
    for _ in 1..n {
        let objective = |x: f64| {
            if !(x > prev) {
                return f64::INFINITY;
            }
            let region = Region { lo: prev, hi: x };
            match build_piece(target, &region, scheme, false, None).and_then(|p| p.upper.log_mass(target.base(), &region)) {
                Ok((lm, _)) if lm.is_finite() => (lm - goal).powi(2),
                Ok((lm, _)) if lm == f64::NEG_INFINITY => goal.abs().max(1.0) * 1e300,
                _ => f64::INFINITY,
            }
        };
        let tol = if s.hi.is_finite() { 1e-10 * (s.hi - prev) } else { 1e-10 };
        let m = minimize_on_interval(objective, prev, s.hi, tol)?;
        if m.diverged || !(m.x > prev) || m.x >= s.hi {
            break;
        }
        knots.push(m.x);
        prev = m.x;
    }
    knots.push(s.hi);
    Ok(knots)
}
