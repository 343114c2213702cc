//! Base distributions: the doubly truncated exponential and the truncated
//! normal.

use crate::error::{Error, Result};
use crate::numerics::{log_add_exp, log_norm_cdf, log_sub_exp, norm_quantile_log};
use crate::target::{BaseDistribution, Region, SupportInterval};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this value of `|rate| * width` the exponential is treated as flat.
const FLAT: f64 = 1e-10;

/// `log` of the integral of `exp(rate x)` over `(lo, hi]`.
///
/// `hi` may be infinite only when `rate < 0`.
pub fn log_exp_integral(rate: f64, lo: f64, hi: f64) -> Result<f64> {
    if !lo.is_finite() || hi.is_nan() || !(lo < hi) || !rate.is_finite() {
        return Err(Error::domain(format!(
            "exponential integral over ({lo}, {hi}] with rate {rate}"
        )));
    }
    if hi == f64::INFINITY {
        if rate >= 0.0 {
            return Err(Error::domain(format!(
                "exponential integral diverges on ({lo}, inf) with rate {rate}"
            )));
        }
        return Ok(rate * lo - (-rate).ln());
    }
    let len = hi - lo;
    if rate.abs() * len < FLAT {
        return Ok(len.ln() + rate * 0.5 * (lo + hi));
    }
    Ok(if rate > 0.0 {
        rate * hi + (-(-rate * len).exp_m1()).ln() - rate.ln()
    } else {
        rate * lo + (-(rate * len).exp_m1()).ln() - (-rate).ln()
    })
}

/// Density proportional to `exp(rate x)` on `[a, b]`.
///
/// `rate = 0` is the uniform distribution; `b` may be `+inf` when `rate < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtExp {
    a: f64,
    b: f64,
    rate: f64,
    log_norm: f64,
}

impl DtExp {
    pub fn new(a: f64, b: f64, rate: f64) -> Result<Self> {
        let log_norm = log_exp_integral(rate, a, b)?;
        Ok(DtExp { a, b, rate, log_norm })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0)
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.b
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    fn is_flat(&self) -> bool {
        self.b.is_finite() && self.rate.abs() * (self.b - self.a) < FLAT
    }

    /// CDF with a domain error outside `[a, b]`.
    pub fn checked_cdf(&self, x: f64) -> Result<f64> {
        if x < self.a || x > self.b || x.is_nan() {
            return Err(Error::domain(format!("x = {x} outside [{}, {}]", self.a, self.b)));
        }
        Ok(self.cdf(x))
    }

    /// Moment generating function of the distribution restricted to `region`.
    pub fn mgf(&self, region: &Region, s: f64) -> Result<f64> {
        Ok(self.log_mgf(region, s)?.exp())
    }

    pub fn log_mgf(&self, region: &Region, s: f64) -> Result<f64> {
        self.check_region(region)?;
        Ok(log_exp_integral(self.rate + s, region.lo, region.hi)?
            - log_exp_integral(self.rate, region.lo, region.hi)?)
    }

    fn check_region(&self, region: &Region) -> Result<()> {
        if region.lo < self.a || region.hi > self.b || !(region.lo < region.hi) {
            return Err(Error::domain(format!(
                "region ({}, {}] is not inside [{}, {}]",
                region.lo, region.hi, self.a, self.b
            )));
        }
        Ok(())
    }
}

impl BaseDistribution for DtExp {
    fn support(&self) -> SupportInterval {
        SupportInterval { lo: self.a, hi: self.b }
    }

    fn log_density(&self, x: f64) -> f64 {
        if x < self.a || x > self.b || x.is_nan() {
            return f64::NEG_INFINITY;
        }
        self.rate * x - self.log_norm
    }

    fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.a {
            return 0.0;
        }
        if x >= self.b {
            return 1.0;
        }
        let r = self.rate;
        if self.is_flat() {
            return (x - self.a) / (self.b - self.a);
        }
        let v = if r > 0.0 {
            (r * (x - self.b)).exp() * (-r * (x - self.a)).exp_m1() / (-r * (self.b - self.a)).exp_m1()
        } else if self.b.is_finite() {
            (r * (x - self.a)).exp_m1() / (r * (self.b - self.a)).exp_m1()
        } else {
            -(r * (x - self.a)).exp_m1()
        };
        v.clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> f64 {
        if p.is_nan() {
            return f64::NAN;
        }
        let p = p.clamp(0.0, 1.0);
        let r = self.rate;
        let x = if self.is_flat() {
            self.a + p * (self.b - self.a)
        } else if r > 0.0 {
            // Each branch avoids cancellation in its own tail.
            let t = -r * (self.b - self.a);
            let q = -t.exp_m1();
            if p > 0.5 {
                self.b + ((p - 1.0) * q).ln_1p() / r
            } else {
                self.b + (t.exp() + p * q).ln() / r
            }
        } else if self.b.is_finite() {
            let t = r * (self.b - self.a);
            let q = -t.exp_m1();
            if p < 0.5 {
                self.a + (-p * q).ln_1p() / r
            } else {
                self.a + (t.exp() + (1.0 - p) * q).ln() / r
            }
        } else {
            self.a + (-p).ln_1p() / r
        };
        x.clamp(self.a, self.b)
    }

    fn tilt(&self, region: &Region, s: f64) -> Result<(Self, f64)> {
        self.check_region(region)?;
        let comp = DtExp::new(region.lo, region.hi, self.rate + s)?;
        Ok((comp, comp.log_norm - self.log_norm))
    }
}

/// `log P(a < Z <= b)` for a standard normal `Z`, accurate in both tails.
pub fn log_norm_interval(a: f64, b: f64) -> f64 {
    if !(a < b) {
        return f64::NEG_INFINITY;
    }
    if a > 0.0 {
        log_sub_exp(log_norm_cdf(-a), log_norm_cdf(-b))
    } else {
        log_sub_exp(log_norm_cdf(b), log_norm_cdf(a))
    }
}

/// Normal distribution truncated to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncNormal {
    mean: f64,
    sd: f64,
    lo: f64,
    hi: f64,
    log_z: f64,
}

impl TruncNormal {
    pub fn new(mean: f64, variance: f64, lo: f64, hi: f64) -> Result<Self> {
        if !mean.is_finite() || !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::domain(format!(
                "truncated normal needs finite mean and positive variance, got {mean}, {variance}"
            )));
        }
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::domain(format!("truncation interval [{lo}, {hi}] is empty")));
        }
        let sd = variance.sqrt();
        let log_z = log_norm_interval((lo - mean) / sd, (hi - mean) / sd);
        if log_z == f64::NEG_INFINITY || log_z.is_nan() {
            return Err(Error::numeric("truncation interval has zero normal mass"));
        }
        Ok(TruncNormal { mean, sd, lo, hi, log_z })
    }

    pub fn mean_param(&self) -> f64 {
        self.mean
    }

    pub fn sd_param(&self) -> f64 {
        self.sd
    }

    /// `log P(lo < N(mean, variance) <= hi)` before truncation.
    pub fn log_normalizer(&self) -> f64 {
        self.log_z
    }

    fn std(&self, x: f64) -> f64 {
        (x - self.mean) / self.sd
    }
}

// Quantile of a standard normal truncated to [a, b].
fn std_trunc_quantile(a: f64, b: f64, p: f64) -> f64 {
    if a > 0.0 {
        return -std_trunc_quantile(-b, -a, 1.0 - p);
    }
    let l1p = (1.0 - p).ln();
    let lp = p.ln();
    let lower = log_add_exp(l1p + log_norm_cdf(a), lp + log_norm_cdf(b));
    let z = if lower > -std::f64::consts::LN_2 {
        let upper = log_add_exp(l1p + log_norm_cdf(-a), lp + log_norm_cdf(-b));
        -norm_quantile_log(upper)
    } else {
        norm_quantile_log(lower)
    };
    z.clamp(a, b)
}

impl BaseDistribution for TruncNormal {
    fn support(&self) -> SupportInterval {
        SupportInterval { lo: self.lo, hi: self.hi }
    }

    fn log_density(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi || x.is_nan() {
            return f64::NEG_INFINITY;
        }
        let z = self.std(x);
        -0.5 * z * z - LN_SQRT_2PI - self.sd.ln() - self.log_z
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        (log_norm_interval(self.std(self.lo), self.std(x)) - self.log_z).exp().clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> f64 {
        if p.is_nan() {
            return f64::NAN;
        }
        let p = p.clamp(0.0, 1.0);
        let z = std_trunc_quantile(self.std(self.lo), self.std(self.hi), p);
        (self.mean + self.sd * z).clamp(self.lo, self.hi)
    }

    fn tilt(&self, region: &Region, s: f64) -> Result<(Self, f64)> {
        if region.lo < self.lo || region.hi > self.hi {
            return Err(Error::domain(format!(
                "region ({}, {}] is not inside [{}, {}]",
                region.lo, region.hi, self.lo, self.hi
            )));
        }
        let var = self.sd * self.sd;
        let comp = TruncNormal::new(self.mean + s * var, var, region.lo, region.hi)?;
        let log_mass = s * self.mean + 0.5 * s * s * var + comp.log_z - self.log_z;
        Ok((comp, log_mass))
    }
}
