//! Per-region majorizers and minorizers of the weight function.

use crate::error::{Error, Result};
use crate::numerics::{brent_minimize, minimize_on_interval};
use crate::target::{BaseDistribution, Curvature, Region, WeightedTarget};

/// How the weight is bounded on each region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `sup w` and `inf w` over the region.
    Constant,
    /// Tangent and chord lines of `log w`; needs known curvature.
    Linear,
}

/// How the lower masses that enter the rejection bound are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerMode {
    /// From the minorizer on each region.
    Analytic,
    /// From numerical integration of `w g` on each region, which makes the
    /// bound the exact rejection probability.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundShape {
    Constant,
    LogLinear,
}

/// `log bound(x) = intercept + slope * x`. An intercept of `-inf` is the
/// zero function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinearBound {
    pub intercept: f64,
    pub slope: f64,
}

impl LogLinearBound {
    pub fn constant(log_value: f64) -> Self {
        LogLinearBound {
            intercept: log_value,
            slope: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self::constant(f64::NEG_INFINITY)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.slope == 0.0 || self.intercept == f64::NEG_INFINITY {
            self.intercept
        } else {
            self.intercept + self.slope * x
        }
    }

    /// `log` of the integral of `exp(bound) g` over `region`, with the
    /// matching mixture component.
    pub fn log_mass<B: BaseDistribution>(&self, base: &B, region: &Region) -> Result<(f64, B)> {
        let (comp, lm) = base.tilt(region, if self.intercept == f64::NEG_INFINITY { 0.0 } else { self.slope })?;
        Ok((self.intercept + lm, comp))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePiece {
    pub region: Region,
    pub shape: BoundShape,
    pub upper: LogLinearBound,
    pub lower: LogLinearBound,
    /// Tangent point of whichever bound is a tangent, if any.
    pub expansion_point: Option<f64>,
}

fn tol_for(region: &Region) -> f64 {
    if region.is_bounded() {
        1e-10 * region.width().min(1.0)
    } else {
        1e-10
    }
}

/// `(log sup w, log inf w)` over `region`.
///
/// Uses the target's closed form when one is registered and numerical
/// optimization otherwise. Returns `-inf` for the infimum when `log w` is
/// unbounded below, and a divergence error when `log w` is unbounded above.
pub fn constant_bounds<B: BaseDistribution>(target: &WeightedTarget<B>, region: &Region) -> Result<(f64, f64)> {
    if let Some(b) = target.closed_form_bounds(region) {
        return Ok(b);
    }
    let tol = tol_for(region);
    let sup = minimize_on_interval(|x| -target.log_weight(x), region.lo, region.hi, tol)?;
    if sup.diverged {
        return Err(Error::Divergence {
            what: format!("sup of log w on ({}, {}]", region.lo, region.hi),
            best_x: sup.x,
            best_f: -sup.value,
        });
    }
    let inf = minimize_on_interval(|x| target.log_weight(x), region.lo, region.hi, tol)?;
    let log_inf = if inf.diverged { f64::NEG_INFINITY } else { inf.value };
    Ok((-sup.value, log_inf.min(-sup.value)))
}

/// Tangent line of `log w` at `c`.
pub fn tangent_bound<B: BaseDistribution>(target: &WeightedTarget<B>, c: f64) -> LogLinearBound {
    let slope = target.dlog_weight(c);
    LogLinearBound {
        intercept: target.log_weight(c) - c * slope,
        slope,
    }
}

/// Line through `log w` at both ends of a bounded region.
pub fn chord_bound<B: BaseDistribution>(target: &WeightedTarget<B>, region: &Region) -> Result<LogLinearBound> {
    if !region.is_bounded() {
        return Err(Error::domain("chord needs a bounded region"));
    }
    let l0 = target.log_weight(region.lo);
    let l1 = target.log_weight(region.hi);
    if !l0.is_finite() || !l1.is_finite() {
        return Err(Error::numeric(format!(
            "log w is not finite at the ends of ({}, {}]: {l0}, {l1}",
            region.lo, region.hi
        )));
    }
    let slope = (l1 - l0) / (region.hi - region.lo);
    Ok(LogLinearBound {
        intercept: l0 - region.lo * slope,
        slope,
    })
}

/// Tangent point minimizing (for a majorizer of log-concave `w`) or
/// maximizing (for a minorizer of log-convex `w`) the mass of the tangent
/// bound on `region`. Returns the point and the bound's log mass.
pub fn choose_expansion_point<B: BaseDistribution>(
    target: &WeightedTarget<B>,
    region: &Region,
    maximize: bool,
) -> Result<(f64, f64)> {
    if !region.is_bounded() {
        return Err(Error::domain("tangent bounds need a bounded region"));
    }
    let sign = if maximize { -1.0 } else { 1.0 };
    let base = target.base();
    let objective = |c: f64| {
        let t = tangent_bound(target, c);
        if !t.slope.is_finite() || !t.intercept.is_finite() {
            return f64::INFINITY;
        }
        match t.log_mass(base, region) {
            Ok((lm, _)) if lm.is_finite() => sign * lm,
            _ => f64::INFINITY,
        }
    };
    let m = brent_minimize(objective, region.lo, region.hi, 1e-9 * region.width())?;
    if !m.value.is_finite() {
        return Err(Error::numeric(format!(
            "no usable tangent point on ({}, {}]",
            region.lo, region.hi
        )));
    }
    Ok((m.x, sign * m.value))
}

/// Envelope piece for `region`.
///
/// With `optimize_lower = false` a tangent minorizer is taken at the region
/// midpoint instead of its optimal point, which is enough when the lower
/// mass will come from integration. `expansion` overrides the tangent point
/// of a tangent majorizer.
pub fn build_piece<B: BaseDistribution>(
    target: &WeightedTarget<B>,
    region: &Region,
    scheme: Scheme,
    optimize_lower: bool,
    expansion: Option<f64>,
) -> Result<EnvelopePiece> {
    match scheme {
        Scheme::Constant => {
            let (hi, lo) = constant_bounds(target, region)?;
            if hi == f64::INFINITY || hi.is_nan() {
                return Err(Error::numeric(format!(
                    "w is unbounded on ({}, {}]; truncate the support",
                    region.lo, region.hi
                )));
            }
            Ok(EnvelopePiece {
                region: *region,
                shape: BoundShape::Constant,
                upper: LogLinearBound::constant(hi),
                lower: LogLinearBound::constant(lo),
                expansion_point: None,
            })
        }
        Scheme::Linear => {
            let curv = target
                .curvature(region)
                .ok_or_else(|| Error::domain("the linear scheme needs a curvature classifier"))?;
            if !region.is_bounded() {
                return Err(Error::domain("the linear scheme needs bounded regions"));
            }
            let (upper, lower, c) = match curv {
                Curvature::LogConcave => {
                    let c = match expansion {
                        Some(c) => c,
                        None => choose_expansion_point(target, region, false)?.0,
                    };
                    let lower = chord_bound(target, region).unwrap_or_else(|_| LogLinearBound::zero());
                    (tangent_bound(target, c), lower, Some(c))
                }
                Curvature::LogConvex => {
                    let upper = chord_bound(target, region)?;
                    let c = if optimize_lower {
                        choose_expansion_point(target, region, true)?.0
                    } else {
                        region.split_point()
                    };
                    (upper, tangent_bound(target, c), Some(c))
                }
                Curvature::LogLinear => {
                    let chord = chord_bound(target, region)?;
                    (chord, chord, None)
                }
            };
            Ok(EnvelopePiece {
                region: *region,
                shape: BoundShape::LogLinear,
                upper,
                lower,
                expansion_point: c,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DtExp;
    use crate::target::SupportInterval;

    fn concave_target() -> WeightedTarget<DtExp> {
        // w(x) = exp(-x^2 / 2) on a uniform base over (-2, 3].
        WeightedTarget::new(|x: f64| -0.5 * x * x, DtExp::uniform(-2.0, 3.0).unwrap(), SupportInterval::new(-2.0, 3.0).unwrap())
            .unwrap()
            .with_derivative(|x| -x)
            .with_curvature(|_| Curvature::LogConcave)
    }

    #[test]
    fn numeric_constant_bounds() {
        let t = concave_target();
        let (hi, lo) = constant_bounds(&t, &Region::new(-1.0, 2.0).unwrap()).unwrap();
        assert!(hi.abs() < 1e-14);
        assert!((lo + 2.0).abs() < 1e-12);
        let (hi, lo) = constant_bounds(&t, &Region::new(0.5, 2.0).unwrap()).unwrap();
        assert!((hi + 0.125).abs() < 1e-12);
        assert!((lo + 2.0).abs() < 1e-12);
    }

    #[test]
    fn tangent_touches_and_dominates() {
        let t = concave_target();
        let r = Region::new(-1.0, 2.0).unwrap();
        let p = build_piece(&t, &r, Scheme::Linear, true, None).unwrap();
        let c = p.expansion_point.unwrap();
        assert!((p.upper.eval(c) - t.log_weight(c)).abs() < 1e-12);
        for i in 0..=100 {
            let x = -1.0 + 3.0 * i as f64 / 100.0;
            assert!(p.upper.eval(x) >= t.log_weight(x) - 1e-12);
            assert!(p.lower.eval(x) <= t.log_weight(x) + 1e-12);
        }
        // For a uniform base the optimal tangent of a symmetric concave
        // function on a symmetric interval is the center.
        let p = build_piece(&t, &Region::new(-1.5, 1.5).unwrap(), Scheme::Linear, true, None).unwrap();
        assert!(p.expansion_point.unwrap().abs() < 1e-6);
    }

    #[test]
    fn convex_roles_switch() {
        let t = WeightedTarget::new(|x: f64| 0.5 * x * x, DtExp::uniform(-2.0, 3.0).unwrap(), SupportInterval::new(-2.0, 3.0).unwrap())
            .unwrap()
            .with_curvature(|_| Curvature::LogConvex);
        let r = Region::new(0.0, 1.0).unwrap();
        let p = build_piece(&t, &r, Scheme::Linear, true, None).unwrap();
        assert!((p.upper.slope - 0.5).abs() < 1e-12);
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            assert!(p.upper.eval(x) >= t.log_weight(x) - 1e-12);
            assert!(p.lower.eval(x) <= t.log_weight(x) + 1e-9);
        }
    }

    #[test]
    fn unbounded_sup_is_divergence() {
        let base = DtExp::new(0.0, f64::INFINITY, -1.0).unwrap();
        let t = WeightedTarget::on_base_support(|x: f64| x, base);
        let r = Region::new(0.0, f64::INFINITY).unwrap();
        assert!(matches!(constant_bounds(&t, &r), Err(Error::Divergence { .. })));
        let t = WeightedTarget::on_base_support(|x: f64| -x, base);
        let (hi, lo) = constant_bounds(&t, &r).unwrap();
        assert_eq!(hi, 0.0);
        assert_eq!(lo, f64::NEG_INFINITY);
    }

    #[test]
    fn linear_needs_curvature() {
        let t = WeightedTarget::on_base_support(|x: f64| -x * x, DtExp::uniform(0.0, 1.0).unwrap());
        assert!(build_piece(&t, &Region::new(0.0, 1.0).unwrap(), Scheme::Linear, true, None).is_err());
    }
}
