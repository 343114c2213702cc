use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use vws::numerics::bessel_i_ratio;
use vws::vmf::{
    marginal_target, posterior_params, vmf_mle, vmf_sample_vector, Factorization, MarginalCdf, VmfMethod, VmfParams,
    VmfSampler, DEFAULT_EPS_TRUNC,
};
use vws::{LowerMode, Proposal, Scheme};

const GRID: [(usize, f64); 9] =
    [(2, 0.1), (2, 1.0), (2, 10.0), (4, 0.1), (4, 1.0), (4, 10.0), (5, 0.1), (5, 1.0), (5, 10.0)];

fn ks(mut xs: Vec<f64>, cdf: &MarginalCdf) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    cdf.cdf_sorted(&xs)
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max)
}

#[test]
fn marginal_draws_pass_ks_on_grid() {
    const N: usize = 5000;
    let crit = 1.95 / (N as f64).sqrt();
    let (lo, hi) = (-1.0 + DEFAULT_EPS_TRUNC, 1.0 - DEFAULT_EPS_TRUNC);
    for (i, (d, kappa)) in GRID.into_iter().enumerate() {
        let mut mu = vec![0.0; d];
        mu[0] = 1.0;
        let params = VmfParams::new(kappa, mu).unwrap();
        for (j, method) in [VmfMethod::VwsLinear, VmfMethod::VwsConstant, VmfMethod::Uw].into_iter().enumerate() {
            let mut rng = ChaCha20Rng::seed_from_u64(10 * i as u64 + j as u64);
            let sampler = VmfSampler::new(params.clone(), method).unwrap();
            let xs: Vec<f64> = (0..N).map(|_| sampler.sample_marginal(&mut rng).unwrap()).collect();
            let cdf = if method == VmfMethod::Uw { MarginalCdf::full(d, kappa) } else { MarginalCdf::new(d, kappa, lo, hi) };
            let stat = ks(xs, &cdf.unwrap());
            assert!(stat < crit, "{method:?} d={d} kappa={kappa}: KS {stat} >= {crit}");
        }
    }
}

#[test]
fn mean_resultant_matches_bessel_ratio() {
    const N: usize = 20_000;
    let (d, kappa) = (3usize, 2.5);
    let mu = vec![0.6, 0.0, 0.8];
    let params = VmfParams::new(kappa, mu.clone()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(77);
    let draws = vmf_sample_vector(&params, N, &mut rng, VmfMethod::VwsLinear).unwrap();
    let proj: Vec<f64> = draws.iter().map(|v| v.iter().zip(&mu).map(|(a, b)| a * b).sum()).collect();
    let mean = proj.iter().sum::<f64>() / N as f64;
    let var = proj.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
    let want = bessel_i_ratio(0.5 * d as f64 - 1.0, kappa).unwrap();
    assert!((mean - want).abs() <= 3.0 * (var / N as f64).sqrt(), "mean {mean} vs {want}");
    for v in &draws {
        let n: f64 = v.iter().map(|x| x * x).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mle_recovers_generating_parameters() {
    let params = VmfParams::new(40.0, vec![0.0, 1.0, 0.0]).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let data = vmf_sample_vector(&params, 2000, &mut rng, VmfMethod::Uw).unwrap();
    let fit = vmf_mle(&data).unwrap();
    assert!(fit.converged);
    assert!(fit.ci.0 < 40.0 && 40.0 < fit.ci.1, "ci {:?}", fit.ci);
    assert!(fit.mu_hat[1] > 0.99);
}

#[test]
fn posterior_params_accumulates_resultant() {
    let data = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
    let pp = posterior_params(&data, 1.0, 0.0, None, 0.5).unwrap();
    assert_eq!(pp.n, 2);
    assert!((pp.r_n - 2f64.sqrt()).abs() < 1e-12);
    assert!((pp.m_n[0] - pp.m_n[1]).abs() < 1e-12);
}

#[test]
fn linear_beats_constant_at_equal_regions() {
    for (d, kappa) in GRID {
        let target = marginal_target(d, kappa, Factorization::Vws, DEFAULT_EPS_TRUNC).unwrap();
        let knots = vws::knots::equal_spaced(target.support(), 10).unwrap();
        let c = Proposal::build(&target, &knots, Scheme::Constant, LowerMode::Trivial).unwrap().rejection_bound();
        let l = Proposal::build(&target, &knots, Scheme::Linear, LowerMode::Trivial).unwrap().rejection_bound();
        assert!(l <= c + 1e-12, "d={d} kappa={kappa}: linear {l} constant {c}");
    }
}
