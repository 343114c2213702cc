use super::marginal::{marginal_target, Factorization};
use crate::envelope::{LowerMode, Scheme};
use crate::error::{Error, Result};
use crate::proposal::{Proposal, Strip};
use crate::target::Region;

/// Largest disagreement between linear strip proposals for the marginal
/// built under the two factorizations on the same knots and tangent
/// points: the maximum over a 1000-point grid of the difference in
/// `log f0 - log h0`, or the difference in acceptance probability if larger.
///
/// The knots must span `(-1 + eps, 1 - eps]` for some `eps`.
pub fn linear_factorization_gap(d: usize, kappa: f64, knots: &[f64]) -> Result<f64> {
    if d == 3 {
        return Err(Error::domain("both proposals are exact when d = 3"));
    }
    let n = knots.len();
    if n < 2 {
        return Err(Error::domain("need at least two knots"));
    }
    let eps = 1.0 + knots[0];
    if ((1.0 - knots[n - 1]) - eps).abs() > 1e-15 {
        return Err(Error::domain("knots must span a symmetric truncation of (-1, 1)"));
    }
    let tv = marginal_target(d, kappa, Factorization::Vws, eps)?;
    let ts = marginal_target(d, kappa, Factorization::Vs, eps)?;
    let mut sv = Vec::with_capacity(n - 1);
    let mut ss = Vec::with_capacity(n - 1);
    for w in knots.windows(2) {
        let r = Region::new(w[0], w[1])?;
        let a = Strip::build(&tv, &r, Scheme::Linear, LowerMode::Trivial, None)?;
        let c = a.piece.expansion_point;
        let tangent_upper = d > 3;
        let b = Strip::build(&ts, &r, Scheme::Linear, LowerMode::Trivial, if tangent_upper { c } else { None })?;
        sv.push(a);
        ss.push(b);
    }
    let pv = Proposal::from_strips(*tv.base(), sv, Scheme::Linear, LowerMode::Trivial)?;
    let ps = Proposal::from_strips(*ts.base(), ss, Scheme::Linear, LowerMode::Trivial)?;
    let (lo, hi) = (knots[0], knots[n - 1]);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let x = lo + (hi - lo) * (i as f64 + 0.5) / 1000.0;
        let a = tv.log_f0(x)? - pv.log_h0(x);
        let b = ts.log_f0(x)? - ps.log_h0(x);
        worst = worst.max((a - b).abs());
    }
    let acc_v = (pv.log_lower_total() - pv.log_upper_total()).exp();
    let acc_s = (ps.log_lower_total() - ps.log_upper_total()).exp();
    Ok(worst.max((acc_v - acc_s).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::equal_spaced;
    use crate::target::SupportInterval;

    #[test]
    fn factorizations_agree() {
        let k = equal_spaced(SupportInterval::new(-1.0 + 1e-4, 1.0 - 1e-4).unwrap(), 16).unwrap();
        for &(d, kappa) in &[(4usize, 1.0), (2, 10.0)] {
            let disc = linear_factorization_gap(d, kappa, &k).unwrap();
            assert!(disc < 1e-10, "d={d} kappa={kappa}: {disc}");
        }
        assert!(linear_factorization_gap(3, 1.0, &k).is_err());
    }
}
