use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use vws::envelope::{build_piece, chord_bound, tangent_bound};
use vws::knots::{equal_spaced, refine_probabilistic};
use vws::numerics::integrate;
use vws::vmf::{marginal_target, Factorization};
use vws::{
    BaseDistribution, DtExp, LowerMode, Proposal, Region, RejectionSampler, Scheme, TruncNormal, WeightedTarget,
};

fn dims() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(3), Just(4), Just(5), Just(10)]
}

fn tol(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

fn sorted_knots(lo: f64, hi: f64, cuts: &[f64]) -> Vec<f64> {
    let mut k: Vec<f64> = cuts.iter().map(|u| lo + u * (hi - lo)).collect();
    k.push(lo);
    k.push(hi);
    k.sort_by(f64::total_cmp);
    k.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    k
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelope_dominates_weight(
        d in dims(),
        kappa in 0.05f64..30.0,
        vs in any::<bool>(),
        linear in any::<bool>(),
        cuts in prop::collection::vec(0.01f64..0.99, 1..6),
        probe in prop::collection::vec(0.0f64..1.0, 20),
    ) {
        let fact = if vs { Factorization::Vs } else { Factorization::Vws };
        let scheme = if linear { Scheme::Linear } else { Scheme::Constant };
        let target = marginal_target(d, kappa, fact, 1e-4).unwrap();
        let s = target.support();
        let knots = sorted_knots(s.lo, s.hi, &cuts);
        let prop = Proposal::build(&target, &knots, scheme, LowerMode::Analytic).unwrap();
        for strip in prop.strips() {
            let r = strip.region();
            for u in &probe {
                let x = r.lo + u * (r.hi - r.lo);
                let lw = target.log_weight(x);
                prop_assert!(strip.piece.upper.eval(x) >= lw - tol(lw));
                prop_assert!(strip.piece.lower.eval(x) <= lw + tol(lw));
            }
        }
        prop_assert!(prop.log_lower_total() <= prop.log_upper_total() + 1e-12);
    }

    #[test]
    fn tangent_and_chord_touch(d in dims(), kappa in 0.05f64..30.0, a in -0.99f64..0.9, w in 0.01f64..0.5, t in 0.0f64..1.0) {
        let target = marginal_target(d, kappa, Factorization::Vws, 1e-4).unwrap();
        let b = (a + w).min(0.999);
        let region = Region::new(a, b).unwrap();
        let c = a + t * (b - a);
        let tan = tangent_bound(&target, c);
        prop_assert!((tan.eval(c) - target.log_weight(c)).abs() <= tol(target.log_weight(c)));
        let chord = chord_bound(&target, &region).unwrap();
        for x in [a, b] {
            prop_assert!((chord.eval(x) - target.log_weight(x)).abs() <= 1e-8 * target.log_weight(x).abs().max(1.0));
        }
        let piece = build_piece(&target, &region, Scheme::Linear, true, None).unwrap();
        if let Some(e) = piece.expansion_point {
            let lw = target.log_weight(e);
            let touch = (piece.upper.eval(e) - lw).abs().min((piece.lower.eval(e) - lw).abs());
            prop_assert!(touch <= tol(lw));
        }
    }

    #[test]
    fn dtexp_round_trip(a in -5.0f64..5.0, w in 0.01f64..10.0, rate in -50.0f64..50.0, p in 1e-6f64..(1.0 - 1e-6)) {
        let g = DtExp::new(a, a + w, rate).unwrap();
        let x = g.quantile(p);
        prop_assert!(x >= a && x <= a + w);
        prop_assert!((g.cdf(x) - p).abs() <= 1e-8);
    }

    #[test]
    fn truncnormal_round_trip(m in -3.0f64..3.0, v in 0.1f64..4.0, lo in -4.0f64..2.0, w in 0.1f64..6.0, p in 1e-6f64..(1.0 - 1e-6)) {
        let g = TruncNormal::new(m, v, lo, lo + w).unwrap();
        let x = g.quantile(p);
        prop_assert!((g.cdf(x) - p).abs() <= 1e-8);
    }

    #[test]
    fn proposal_round_trip(d in dims(), kappa in 0.05f64..30.0, linear in any::<bool>(), p in 1e-6f64..(1.0 - 1e-6)) {
        let scheme = if linear { Scheme::Linear } else { Scheme::Constant };
        let target = marginal_target(d, kappa, Factorization::Vws, 1e-4).unwrap();
        let knots = equal_spaced(target.support(), 6).unwrap();
        let prop = Proposal::build(&target, &knots, scheme, LowerMode::Trivial).unwrap();
        let x = prop.quantile(p);
        prop_assert!((prop.cdf(x) - p).abs() <= 1e-8);
    }

    #[test]
    fn dtexp_mgf_matches_quadrature(a in -3.0f64..3.0, w in 0.05f64..4.0, rate in -10.0f64..10.0, s in -10.0f64..10.0) {
        let g = DtExp::new(a - 1.0, a + w + 1.0, rate).unwrap();
        let region = Region::new(a, a + w).unwrap();
        let num = integrate(|x| (s * x + g.log_density(x)).exp(), a, a + w, 1e-13).unwrap().value;
        let den = integrate(|x| g.log_density(x).exp(), a, a + w, 1e-13).unwrap().value;
        let m = g.mgf(&region, s).unwrap();
        prop_assert!((m - num / den).abs() <= 1e-8 * m.abs());
    }

    #[test]
    fn truncnormal_tilt_matches_quadrature(m in -2.0f64..2.0, v in 0.2f64..3.0, a in -2.0f64..1.0, w in 0.1f64..3.0, s in -3.0f64..3.0) {
        let g = TruncNormal::new(m, v, a - 1.0, a + w + 1.0).unwrap();
        let region = Region::new(a, a + w).unwrap();
        let (_, log_mass) = g.tilt(&region, s).unwrap();
        let direct = integrate(|x| (s * x + g.log_density(x)).exp(), a, a + w, 1e-13).unwrap().value;
        prop_assert!((log_mass - direct.ln()).abs() <= 1e-8);
    }

    #[test]
    fn constant_bound_shrinks_under_bifurcation(
        d in dims(),
        kappa in 0.05f64..30.0,
        vs in any::<bool>(),
        cuts in prop::collection::vec(0.01f64..0.99, 1..5),
        new_cut in 0.01f64..0.99,
    ) {
        let fact = if vs { Factorization::Vs } else { Factorization::Vws };
        let target = marginal_target(d, kappa, fact, 1e-4).unwrap();
        let s = target.support();
        let knots = sorted_knots(s.lo, s.hi, &cuts);
        let before = Proposal::build(&target, &knots, Scheme::Constant, LowerMode::Analytic).unwrap().rejection_bound();
        let mut more = knots.clone();
        more.push(s.lo + new_cut * (s.hi - s.lo));
        more.sort_by(f64::total_cmp);
        more.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let after = Proposal::build(&target, &more, Scheme::Constant, LowerMode::Analytic).unwrap().rejection_bound();
        prop_assert!(after <= before + 1e-10);
    }

    #[test]
    fn seeded_runs_repeat(seed in any::<u64>(), d in dims(), kappa in 0.1f64..20.0) {
        let target = marginal_target(d, kappa, Factorization::Vws, 1e-4).unwrap();
        let s = target.support();
        let run = || {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let (prop, trace) =
                refine_probabilistic(&target, &[s.lo, s.hi], Scheme::Linear, LowerMode::Trivial, 0.0, 8, &mut rng).unwrap();
            let draws = RejectionSampler::new(&target, &prop).unwrap().sample(50, &mut rng).unwrap().0;
            (trace.knots.last().cloned(), draws)
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn unbounded_envelope_dominates() {
    let base = TruncNormal::new(0.0, 1.0, 0.0, f64::INFINITY).unwrap();
    let target = WeightedTarget::on_base_support(|x: f64| (1.0 + x).ln() - 0.1 * x * x, base);
    let knots = [0.0, 1.0, 3.0, f64::INFINITY];
    assert!(Proposal::build(&target, &knots, Scheme::Linear, LowerMode::Analytic).is_err());
    let prop = Proposal::build(&target, &knots, Scheme::Constant, LowerMode::Analytic).unwrap();
    for i in 0..400 {
        let x = i as f64 * 0.05;
        let strip = &prop.strips()[prop.region_index(x).unwrap()];
        let lw = target.log_weight(x);
        assert!(strip.piece.upper.eval(x) >= lw - tol(lw));
        assert!(strip.piece.lower.eval(x) <= lw + tol(lw));
    }
}
