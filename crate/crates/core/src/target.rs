//! Support intervals, regions and the weighted target `f0 = w g`.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Closed-on-the-right interval `(lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SupportInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::domain(format!("support needs lo < hi, got ({lo}, {hi}]")));
        }
        Ok(SupportInterval { lo, hi })
    }

    /// Membership in the closure `[lo, hi]`.
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn as_region(&self) -> Region {
        Region { lo: self.lo, hi: self.hi }
    }
}

/// One cell `(lo, hi]` of a partition of the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
}

impl Region {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::domain(format!("region needs lo < hi, got ({lo}, {hi}]")));
        }
        Ok(Region { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Point used to bisect the region. Unbounded regions step one unit
    /// plus the magnitude of the finite end away from it, and the whole
    /// line splits at zero.
    pub fn split_point(&self) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => 0.5 * (self.lo + self.hi),
            (true, false) => self.lo + self.lo.abs() + 1.0,
            (false, true) => self.hi - self.hi.abs() - 1.0,
            (false, false) => 0.0,
        }
    }
}

/// Shape of `log w` on a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    LogConcave,
    LogConvex,
    LogLinear,
}

/// A continuous base distribution with tractable CDF and quantile whose
/// exponential tilts are again tractable.
pub trait BaseDistribution: Clone + Send + Sync {
    fn support(&self) -> SupportInterval;

    /// Log density; `-inf` outside the support.
    fn log_density(&self, x: f64) -> f64;

    /// CDF, clamped to 0 and 1 outside the support.
    fn cdf(&self, x: f64) -> f64;

    /// Inverse CDF on `[0, 1]`, clamped to the support.
    fn quantile(&self, p: f64) -> f64;

    /// The distribution proportional to `exp(s x) g(x)` restricted to
    /// `region`, together with `log` of the integral of `exp(s x) g(x)` over
    /// `region`.
    fn tilt(&self, region: &Region, s: f64) -> Result<(Self, f64)>;

    /// `log P(X in region)`.
    fn log_prob(&self, region: &Region) -> Result<f64> {
        Ok(self.tilt(region, 0.0)?.1)
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type CurvatureFn = Arc<dyn Fn(&Region) -> Curvature + Send + Sync>;
/// Returns `(log sup w, log inf w)` over a region.
pub type ConstantBoundsFn = Arc<dyn Fn(&Region) -> (f64, f64) + Send + Sync>;

/// Unnormalized density `f0(x) = w(x) g(x)` on `support`.
#[derive(Clone)]
pub struct WeightedTarget<B> {
    log_weight: ScalarFn,
    dlog_weight: Option<ScalarFn>,
    curvature: Option<CurvatureFn>,
    constant_bounds: Option<ConstantBoundsFn>,
    base: B,
    support: SupportInterval,
}

impl<B: BaseDistribution> WeightedTarget<B> {
    /// `support` must lie inside the support of `base`.
    pub fn new(
        log_weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
        base: B,
        support: SupportInterval,
    ) -> Result<Self> {
        let bs = base.support();
        if support.lo < bs.lo || support.hi > bs.hi {
            return Err(Error::domain(format!(
                "support ({}, {}] is not inside the base support ({}, {}]",
                support.lo, support.hi, bs.lo, bs.hi
            )));
        }
        Ok(WeightedTarget {
            log_weight: Arc::new(log_weight),
            dlog_weight: None,
            curvature: None,
            constant_bounds: None,
            base,
            support,
        })
    }

    /// Target on the whole support of `base`.
    pub fn on_base_support(log_weight: impl Fn(f64) -> f64 + Send + Sync + 'static, base: B) -> Self {
        let support = base.support();
        WeightedTarget {
            log_weight: Arc::new(log_weight),
            dlog_weight: None,
            curvature: None,
            constant_bounds: None,
            base,
            support,
        }
    }

    /// Supply the derivative of `log w`; otherwise central differences are used.
    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.dlog_weight = Some(Arc::new(d));
        self
    }

    /// Supply the curvature of `log w` per region. Needed by the linear scheme.
    pub fn with_curvature(mut self, c: impl Fn(&Region) -> Curvature + Send + Sync + 'static) -> Self {
        self.curvature = Some(Arc::new(c));
        self
    }

    /// Supply exact `(log sup w, log inf w)` per region, bypassing numerical
    /// optimization in the constant scheme.
    pub fn with_constant_bounds(mut self, b: impl Fn(&Region) -> (f64, f64) + Send + Sync + 'static) -> Self {
        self.constant_bounds = Some(Arc::new(b));
        self
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn support(&self) -> SupportInterval {
        self.support
    }

    pub fn log_weight(&self, x: f64) -> f64 {
        (self.log_weight)(x)
    }

    /// Derivative of `log w`, analytic when supplied.
    pub fn dlog_weight(&self, x: f64) -> f64 {
        if let Some(d) = &self.dlog_weight {
            return d(x);
        }
        let h = 1e-6 * x.abs().max(1.0);
        let lo = (x - h).max(self.support.lo);
        let hi = (x + h).min(self.support.hi);
        if hi <= lo {
            return f64::NAN;
        }
        ((self.log_weight)(hi) - (self.log_weight)(lo)) / (hi - lo)
    }

    pub fn curvature(&self, region: &Region) -> Option<Curvature> {
        self.curvature.as_ref().map(|c| c(region))
    }

    pub fn closed_form_bounds(&self, region: &Region) -> Option<(f64, f64)> {
        self.constant_bounds.as_ref().map(|b| b(region))
    }

    /// `log w(x) + log g(x)`; a domain error outside the support.
    pub fn log_f0(&self, x: f64) -> Result<f64> {
        if !self.support.contains(x) {
            return Err(Error::domain(format!(
                "x = {x} outside support ({}, {}]",
                self.support.lo, self.support.hi
            )));
        }
        Ok(self.log_weight(x) + self.base.log_density(x))
    }

    pub(crate) fn log_f0_unchecked(&self, x: f64) -> f64 {
        self.log_weight(x) + self.base.log_density(x)
    }
}
