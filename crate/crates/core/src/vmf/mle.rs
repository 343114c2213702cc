use crate::error::{Error, Result};
use crate::numerics::{bessel_i_ratio, log_bessel_i_scaled};

#[derive(Debug, Clone, PartialEq)]
pub struct MleResult {
    pub kappa_hat: f64,
    pub mu_hat: Vec<f64>,
    /// 95% Wald interval for `kappa`, built on the log scale.
    pub ci: (f64, f64),
    pub converged: bool,
    pub iterations: usize,
    /// The estimate sits at `kappa = 0`, where `mu` is not identified.
    pub at_boundary: bool,
}

const Z975: f64 = 1.959_963_984_540_054;
const GTOL: f64 = 1e-12;
// Accepted gradient when a flat objective stalls the line search.
const STALL_GTOL: f64 = 1e-8;

struct Objective {
    nu: f64,
    d: f64,
    mean: Vec<f64>,
}

impl Objective {
    // Negative mean log-likelihood (up to a constant) and its gradient.
    fn eval(&self, z: &[f64]) -> (f64, Vec<f64>) {
        let k = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        let dot: f64 = z.iter().zip(&self.mean).map(|(a, b)| a * b).sum();
        if k < 1e-8 {
            let c = self.nu * std::f64::consts::LN_2 + libm::lgamma(self.nu + 1.0);
            let f = -c + k * k / (2.0 * self.d) - dot;
            let g = z.iter().zip(&self.mean).map(|(zi, m)| zi / self.d - m).collect();
            return (f, g);
        }
        let li = log_bessel_i_scaled(self.nu, k).unwrap_or(f64::NAN);
        let f = -(self.nu * k.ln() - li - k) - dot;
        let a = bessel_i_ratio(self.nu, k).unwrap_or(f64::NAN);
        let g = z.iter().zip(&self.mean).map(|(zi, m)| a * zi / k - m).collect();
        (f, g)
    }
}

/// Maximum likelihood estimate of `(mu, kappa)` by BFGS over the natural
/// parameter `zeta = kappa mu`.
pub fn vmf_mle(data: &[Vec<f64>]) -> Result<MleResult> {
    let first = data.first().ok_or_else(|| Error::domain("no observations"))?;
    let dim = first.len();
    if dim < 2 {
        return Err(Error::domain("observations must have dimension at least 2"));
    }
    let n = data.len() as f64;
    let mut mean = vec![0.0; dim];
    for v in data {
        if v.len() != dim {
            return Err(Error::domain("observations differ in dimension"));
        }
        for (a, b) in mean.iter_mut().zip(v) {
            *a += b / n;
        }
    }
    let d = dim as f64;
    let obj = Objective {
        nu: 0.5 * d - 1.0,
        d,
        mean: mean.clone(),
    };
    let rbar = mean.iter().map(|x| x * x).sum::<f64>().sqrt();

    let k0 = if rbar < 1e-12 {
        0.0
    } else if rbar >= 1.0 - 1e-12 {
        1e6
    } else {
        rbar * (d - rbar * rbar) / (1.0 - rbar * rbar)
    };
    let mut z: Vec<f64> = if rbar < 1e-12 { vec![0.0; dim] } else { mean.iter().map(|m| m / rbar * k0).collect() };
    let (mut f, mut g) = obj.eval(&z);
    let mut h = vec![vec![0.0; dim]; dim];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..500 {
        iterations = it;
        let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if gmax < GTOL {
            converged = true;
            break;
        }
        let k = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if k > 1e10 {
            break;
        }
        let p: Vec<f64> = h.iter().map(|row| -row.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>()).collect();
        let slope: f64 = p.iter().zip(&g).map(|(a, b)| a * b).sum();
        let (p, slope) = if slope >= 0.0 {
            // Not a descent direction; restart from steepest descent.
            for (i, row) in h.iter_mut().enumerate() {
                row.iter_mut().for_each(|x| *x = 0.0);
                row[i] = 1.0;
            }
            let p: Vec<f64> = g.iter().map(|x| -x).collect();
            let s = -g.iter().map(|x| x * x).sum::<f64>();
            (p, s)
        } else {
            (p, slope)
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..80 {
            let zt: Vec<f64> = z.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            let (ft, gt) = obj.eval(&zt);
            if ft.is_finite() && ft <= f + 1e-4 * t * slope {
                accepted = Some((zt, ft, gt));
                break;
            }
            t *= 0.5;
        }
        let Some((zn, fn_, gn)) = accepted else {
            // No decrease is possible at working precision.
            let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            converged = gmax < STALL_GTOL;
            break;
        };
        let s: Vec<f64> = zn.iter().zip(&z).map(|(a, b)| a - b).collect();
        let zmax = z.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if s.iter().all(|x| x.abs() <= 1e-15 * zmax) {
            // Stalled at working precision.
            converged = gn.iter().fold(0.0f64, |m, x| m.max(x.abs())) < STALL_GTOL;
            z = zn;
            break;
        }
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-300 {
            let hy: Vec<f64> = h.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..dim {
                for j in 0..dim {
                    h[i][j] += (sy + yhy) * s[i] * s[j] / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
        z = zn;
        f = fn_;
        g = gn;
    }
    let kappa_hat = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    let at_boundary = kappa_hat < 1e-6;
    let mu_hat = if at_boundary {
        let mut e = vec![0.0; dim];
        e[0] = 1.0;
        e
    } else {
        z.iter().map(|x| x / kappa_hat).collect()
    };
    let ci = if at_boundary || !converged {
        (f64::NAN, f64::NAN)
    } else {
        let a = bessel_i_ratio(obj.nu, kappa_hat)?;
        let a_prime = 1.0 - a * a - (d - 1.0) * a / kappa_hat;
        let se_log = 1.0 / (kappa_hat * (n * a_prime).sqrt());
        (kappa_hat * (-Z975 * se_log).exp(), kappa_hat * (Z975 * se_log).exp())
    };
    Ok(MleResult {
        kappa_hat,
        mu_hat,
        ci,
        converged,
        iterations,
        at_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_pair_gives_zero() {
        let r = vmf_mle(&[vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0]]).unwrap();
        assert!(r.kappa_hat < 1e-6);
        assert!(r.at_boundary);
    }

    #[test]
    fn flat_optimum_converges() {
        let angles = [(10.0, 40.0), (34.0, 52.0), (350.0, 27.0), (22.0, 65.0), (1.0, 19.0), (349.0, 51.0), (43.0, 34.0)];
        let data: Vec<Vec<f64>> =
            angles.iter().map(|&(a, b)| crate::vmf::angles_to_unit_vector(a, b).to_vec()).collect();
        let r = vmf_mle(&data).unwrap();
        assert!(r.converged);
        assert!(r.ci.0 < r.kappa_hat && r.kappa_hat < r.ci.1);
    }

    #[test]
    fn identical_data_does_not_converge() {
        let r = vmf_mle(&vec![vec![0.0, 1.0, 0.0]; 4]).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn d3_stationarity() {
        // For d = 3 the score equation is coth(k) - 1/k = rbar.
        let s = 0.8f64.sqrt();
        let data = vec![vec![1.0, 0.0, 0.0], vec![s, 0.2f64.sqrt(), 0.0], vec![s, 0.0, 0.2f64.sqrt()]];
        let r = vmf_mle(&data).unwrap();
        assert!(r.converged);
        let mut m = [0.0; 3];
        for v in &data {
            for i in 0..3 {
                m[i] += v[i] / 3.0;
            }
        }
        let rbar = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
        let k = r.kappa_hat;
        assert!((1.0 / k.tanh() - 1.0 / k - rbar).abs() < 1e-10);
        for (mh, mi) in r.mu_hat.iter().zip(&m) {
            assert!((mh - mi / rbar).abs() < 1e-6);
        }
        assert!(r.ci.0 < k && k < r.ci.1);
    }
}
