use crate::error::{Error, Result};

/// `log(sum(exp(values)))` with max-shifting.
///
/// An empty slice, or one holding only `-inf`, gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> Result<f64> {
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        if v.is_nan() {
            return Err(Error::numeric("NaN passed to log_sum_exp"));
        }
        if v > max {
            max = v;
        }
    }
    if max.is_infinite() {
        return Ok(max);
    }
    let s: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    Ok(max + s.ln())
}

/// `log(exp(a) + exp(b))`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `log(exp(a) - exp(b))` for `a >= b`. Returns `-inf` when `a == b` and
/// NaN when `a < b`.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a < b {
        return f64::NAN;
    }
    if a == b {
        return f64::NEG_INFINITY;
    }
    a + log1m_exp(b - a)
}

/// `log(1 - exp(x))` for `x <= 0`, accurate near both ends.
pub fn log1m_exp(x: f64) -> f64 {
    if x > 0.0 {
        f64::NAN
    } else if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_large_values() {
        let v = log_sum_exp(&[1000.0, 1000.0]).unwrap();
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn lse_edge_cases() {
        assert_eq!(log_sum_exp(&[]).unwrap(), f64::NEG_INFINITY);
        assert_eq!(
            log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.5]).unwrap(), 0.5);
        assert!(log_sum_exp(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn add_and_sub() {
        let a = 3.0f64.ln();
        let b = 1.0f64.ln();
        assert!((log_add_exp(a, b) - 4.0f64.ln()).abs() < 1e-15);
        assert!((log_sub_exp(a, b) - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(log_sub_exp(a, a), f64::NEG_INFINITY);
        assert!((log1m_exp(-1e-20) - (1e-20f64).ln()).abs() < 1e-12);
        assert!((log1m_exp(-50.0) + (-50.0f64).exp()).abs() < 1e-30);
    }
}
