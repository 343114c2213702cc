use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use vws::vmf::{angles_to_unit_vector, posterior_sample, posterior_params, vmf_mle};

use crate::data::parse_angles;
use crate::output::{num, write_csv};
use crate::plot::{Figure, Panel, Series};
use crate::{BayesArgs, Flagged};

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (pos - i as f64) * (sorted[j] - sorted[i])
}

pub fn run(args: &BayesArgs) -> Result<Flagged> {
    if args.regions == 0 || args.n == 0 {
        bail!("--regions and --n must be at least 1");
    }
    let text = std::fs::read_to_string(&args.data).with_context(|| format!("reading {}", args.data.display()))?;
    let angles = parse_angles(&text).with_context(|| format!("parsing {}", args.data.display()))?;
    let data: Vec<Vec<f64>> = angles.iter().map(|&(a, b)| angles_to_unit_vector(a, b).to_vec()).collect();
    let pp = posterior_params(&data, 0.0, 0.0, None, args.tau)?;
    // The weight behaves like exp(kappa (tau - n + R_n)) for large kappa.
    if args.tau >= pp.n as f64 - pp.r_n {
        bail!(
            "--tau {} must be below n - R_n = {}; the weight is unbounded otherwise",
            args.tau,
            pp.n as f64 - pp.r_n
        );
    }
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let post = posterior_sample(&pp, args.regions, args.n, &mut rng)?;
    let mle = vmf_mle(&data)?;

    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let bounds: Vec<Vec<String>> = post
        .trace
        .knots
        .iter()
        .zip(&post.trace.bounds)
        .map(|(k, b)| vec![(k.len() - 1).to_string(), num(*b), num(b.ln())])
        .collect();
    let bounds_path = args.out.join("bounds.csv");
    write_csv(Some(&bounds_path), &["N", "bound", "log_bound"], &bounds)?;
    let draws: Vec<Vec<String>> = post
        .kappa
        .iter()
        .zip(&post.mu)
        .map(|(k, m)| std::iter::once(num(*k)).chain(m.iter().map(|x| num(*x))).collect())
        .collect();
    write_csv(Some(&args.out.join("draws.csv")), &["kappa", "mu1", "mu2", "mu3"], &draws)?;
    if args.plot {
        let fig = Figure {
            x_label: "N".into(),
            y_label: "log bound".into(),
            panels: vec![Panel {
                title: "concentration posterior".into(),
                series: vec![Series {
                    label: "bound".into(),
                    points: post.trace.knots.iter().zip(&post.trace.bounds).map(|(k, b)| ((k.len() - 1) as f64, b.ln())).collect(),
                    reference: false,
                }],
            }],
        };
        std::fs::write(args.out.join("bounds.svg"), fig.to_svg()).context("writing bounds.svg")?;
    }

    let mut sorted = post.kappa.clone();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    let bound = post.trace.bounds.last().copied().unwrap_or(f64::NAN);
    println!("n_obs={}", data.len());
    println!("resultant_length={}", pp.r_n);
    println!("regions={}", post.trace.knots.last().map_or(0, |k| k.len() - 1));
    println!("bound={bound}");
    println!("draws={}", post.kappa.len());
    println!("rejection_fraction={}", post.stats.rejection_fraction);
    println!("kappa_mean={mean}");
    println!("kappa_q025={}", quantile(&sorted, 0.025));
    println!("kappa_q975={}", quantile(&sorted, 0.975));
    println!("mle_kappa={}", mle.kappa_hat);
    println!("mle_ci_lo={}", mle.ci.0);
    println!("mle_ci_hi={}", mle.ci.1);
    println!("mle_mu={}", mle.mu_hat.iter().map(|x| num(*x)).collect::<Vec<_>>().join(","));
    println!("mle_converged={}", mle.converged);
    if !mle.converged {
        eprintln!("note: the maximum likelihood fit did not converge");
    }
    Ok(Flagged(!mle.converged))
}
