use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal CDF.
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Log of the standard normal CDF, accurate far into the lower tail.
pub fn log_norm_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z == f64::INFINITY {
        return 0.0;
    }
    if z == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if z < -20.0 {
        // Asymptotic series for the Mills ratio.
        let z2 = z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..8 {
            term *= -((2 * k - 1) as f64) / z2;
            sum += term;
        }
        -0.5 * z2 - LN_SQRT_2PI - (-z).ln() + sum.ln()
    } else if z > 5.0 {
        (-0.5 * libm::erfc(z * FRAC_1_SQRT_2)).ln_1p()
    } else {
        norm_cdf(z).ln()
    }
}

fn log_norm_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Standard normal quantile.
pub fn norm_quantile(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    if p <= 0.5 {
        lower_tail_quantile(p.ln())
    } else {
        -lower_tail_quantile((1.0 - p).ln())
    }
}

/// Standard normal quantile of `exp(log_p)`.
pub fn norm_quantile_log(log_p: f64) -> f64 {
    if log_p.is_nan() || log_p > 0.0 {
        return f64::NAN;
    }
    if log_p == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if log_p == 0.0 {
        return f64::INFINITY;
    }
    if log_p <= -LN_2 {
        lower_tail_quantile(log_p)
    } else {
        -lower_tail_quantile((-log_p.exp_m1()).ln())
    }
}

// Rational starting point followed by Newton steps on log Phi(z) = log_p.
fn lower_tail_quantile(log_p: f64) -> f64 {
    let t = (-2.0 * log_p).sqrt();
    let mut z = -(t - (2.515517 + 0.802853 * t + 0.010328 * t * t)
        / (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t));
    for _ in 0..60 {
        let lc = log_norm_cdf(z);
        let slope = (log_norm_pdf(z) - lc).exp();
        let step = (lc - log_p) / slope;
        z -= step;
        if step.abs() <= 1e-15 * (1.0 + z.abs()) {
            break;
        }
    }
    z
}
