//! Browser bindings for the VMF marginal demo: envelope curves, the
//! refinement trace, and a histogram of accepted draws.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use wasm_bindgen::prelude::*;

use vws::knots::{refine_greedy, refine_probabilistic};
use vws::vmf::{marginal_target, Factorization, MarginalCdf, DEFAULT_EPS_TRUNC};
use vws::{BaseDistribution, DtExp, LowerMode, Proposal, RejectionSampler, Scheme, WeightedTarget};

fn scheme(linear: bool) -> Scheme {
    if linear {
        Scheme::Linear
    } else {
        Scheme::Constant
    }
}

fn greedy_proposal(d: usize, kappa: f64, regions: usize, linear: bool) -> vws::Result<(WeightedTarget<DtExp>, Proposal<DtExp>)> {
    let target = marginal_target(d, kappa, Factorization::Vws, DEFAULT_EPS_TRUNC)?;
    let s = target.support();
    let sch = scheme(linear);
    let (prop, _) = refine_greedy(&target, &[s.lo, s.hi], sch, LowerMode::Trivial, 0.0, regions.max(1) - 1)?;
    Ok((target, prop))
}

/// Unnormalized target with its majorizer and minorizer on a grid.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Curves {
    x: Vec<f64>,
    target: Vec<f64>,
    upper: Vec<f64>,
    lower: Vec<f64>,
    knots: Vec<f64>,
    bound: f64,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn target(&self) -> Vec<f64> {
        self.target.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn upper(&self) -> Vec<f64> {
        self.upper.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn lower(&self) -> Vec<f64> {
        self.lower.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn knots(&self) -> Vec<f64> {
        self.knots.clone()
    }
    /// Exact rejection probability of the proposal.
    #[wasm_bindgen(getter)]
    pub fn bound(&self) -> f64 {
        self.bound
    }
}

pub fn envelope_curves_inner(d: usize, kappa: f64, regions: usize, linear: bool, points: usize) -> vws::Result<Curves> {
    let (target, prop) = greedy_proposal(d, kappa, regions, linear)?;
    let s = target.support();
    let points = points.max(2);
    let mut c = Curves {
        x: Vec::with_capacity(points),
        target: Vec::with_capacity(points),
        upper: Vec::with_capacity(points),
        lower: Vec::with_capacity(points),
        knots: prop.knots().to_vec(),
        bound: prop.rejection_bound(),
    };
    for i in 0..points {
        let x = s.lo + (s.hi - s.lo) * i as f64 / (points - 1) as f64;
        let piece = &prop.strips()[prop.region_index(x).unwrap_or(0)].piece;
        let lg = target.base().log_density(x);
        c.x.push(x);
        c.target.push((target.log_weight(x) + lg).exp());
        c.upper.push((piece.upper.eval(x) + lg).exp());
        c.lower.push((piece.lower.eval(x) + lg).exp());
    }
    Ok(c)
}

/// `log` rejection bound after each refinement step, from one region to
/// `regions`.
pub fn refinement_trace_inner(d: usize, kappa: f64, regions: usize, linear: bool, greedy: bool, seed: u64) -> vws::Result<Vec<f64>> {
    let target = marginal_target(d, kappa, Factorization::Vws, DEFAULT_EPS_TRUNC)?;
    let s = target.support();
    let sch = scheme(linear);
    let lower = if linear { LowerMode::Trivial } else { LowerMode::Analytic };
    let extra = regions.max(1) - 1;
    let (_, trace) = if greedy {
        refine_greedy(&target, &[s.lo, s.hi], sch, lower, 0.0, extra)?
    } else {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        refine_probabilistic(&target, &[s.lo, s.hi], sch, lower, 0.0, extra, &mut rng)?
    };
    Ok(trace.log_bounds())
}

/// Histogram of accepted draws next to the exact bin probabilities.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Histogram {
    edges: Vec<f64>,
    observed: Vec<f64>,
    expected: Vec<f64>,
    rejection_fraction: f64,
}

#[wasm_bindgen]
impl Histogram {
    #[wasm_bindgen(getter)]
    pub fn edges(&self) -> Vec<f64> {
        self.edges.clone()
    }
    /// Fraction of draws in each bin.
    #[wasm_bindgen(getter)]
    pub fn observed(&self) -> Vec<f64> {
        self.observed.clone()
    }
    /// Target probability of each bin.
    #[wasm_bindgen(getter)]
    pub fn expected(&self) -> Vec<f64> {
        self.expected.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn rejection_fraction(&self) -> f64 {
        self.rejection_fraction
    }
}

#[allow(clippy::too_many_arguments)]
pub fn sample_histogram_inner(
    d: usize,
    kappa: f64,
    regions: usize,
    linear: bool,
    n: usize,
    bins: usize,
    seed: u64,
) -> vws::Result<Histogram> {
    let (target, prop) = greedy_proposal(d, kappa, regions, linear)?;
    let s = target.support();
    let bins = bins.max(1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (draws, stats) = RejectionSampler::new(&target, &prop)?.sample(n, &mut rng)?;
    let edges: Vec<f64> = (0..=bins).map(|i| s.lo + (s.hi - s.lo) * i as f64 / bins as f64).collect();
    let mut counts = vec![0usize; bins];
    for x in &draws {
        let b = (((x - s.lo) / (s.hi - s.lo)) * bins as f64) as usize;
        counts[b.min(bins - 1)] += 1;
    }
    let cdf = MarginalCdf::new(d, kappa, s.lo, s.hi)?.cdf_sorted(&edges)?;
    Ok(Histogram {
        expected: cdf.windows(2).map(|w| w[1] - w[0]).collect(),
        observed: counts.iter().map(|&c| c as f64 / n.max(1) as f64).collect(),
        edges,
        rejection_fraction: stats.rejection_fraction,
    })
}

fn js_err(e: vws::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn envelope_curves(d: usize, kappa: f64, regions: usize, linear: bool, points: usize) -> Result<Curves, JsError> {
    envelope_curves_inner(d, kappa, regions, linear, points).map_err(js_err)
}

#[wasm_bindgen]
pub fn refinement_trace(d: usize, kappa: f64, regions: usize, linear: bool, greedy: bool, seed: u32) -> Result<Vec<f64>, JsError> {
    refinement_trace_inner(d, kappa, regions, linear, greedy, seed.into()).map_err(js_err)
}

#[wasm_bindgen]
pub fn sample_histogram(
    d: usize,
    kappa: f64,
    regions: usize,
    linear: bool,
    n: usize,
    bins: usize,
    seed: u32,
) -> Result<Histogram, JsError> {
    sample_histogram_inner(d, kappa, regions, linear, n, bins, seed.into()).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_sandwich_target() {
        for linear in [false, true] {
            let c = envelope_curves_inner(4, 5.0, 8, linear, 200).unwrap();
            assert_eq!(c.knots.len(), 9);
            assert!(c.bound > 0.0 && c.bound < 1.0);
            for i in 0..c.x.len() {
                let t = c.target[i];
                assert!(c.upper[i] >= t * (1.0 - 1e-9) && c.lower[i] <= t * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn trace_decreases_under_greedy_constant() {
        let t = refinement_trace_inner(5, 10.0, 30, false, true, 0).unwrap();
        assert_eq!(t.len(), 30);
        assert!(t.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert_eq!(refinement_trace_inner(5, 10.0, 30, true, false, 7).unwrap(), refinement_trace_inner(5, 10.0, 30, true, false, 7).unwrap());
    }

    #[test]
    fn histogram_matches_expected_mass() {
        let h = sample_histogram_inner(2, 1.0, 10, true, 20_000, 20, 3).unwrap();
        assert_eq!(h.edges.len(), 21);
        assert!((h.observed.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((h.expected.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for (o, e) in h.observed.iter().zip(&h.expected) {
            assert!((o - e).abs() < 5.0 * (e * (1.0 - e) / 20_000.0).sqrt() + 1e-4);
        }
        assert!(sample_histogram_inner(1, 1.0, 10, true, 10, 5, 0).is_err());
    }
}
