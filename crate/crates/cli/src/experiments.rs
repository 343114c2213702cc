use std::collections::BTreeMap;

use anyhow::{bail, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use vws::knots::{equal_probability, equal_spaced, refine_greedy, refine_probabilistic, RefinementTrace};
use vws::vmf::{marginal_target, orthant_study, simple_rejection_rate, uw_sample, Factorization};
use vws::{LowerMode, Proposal, Scheme};

use crate::output::{finish, num};
use crate::plot::{Figure, Panel, Series};
use crate::{CurvesArgs, Flagged, KnotStudyArgs, OrthantArgs, RuleArg, SchemeArg, StudyArgs, Table1Args};

const UW_DRAWS: usize = 50_000;

/// Independent stream for one unit of work, stable under parallel execution.
pub fn stream_rng(seed: u64, cell: usize, task: usize, replicate: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(((cell as u64) << 40) | ((task as u64) << 32) | replicate as u64);
    rng
}

fn check_kappas(kappas: &[f64]) -> Result<()> {
    if let Some(k) = kappas.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
        bail!("concentration must be positive and finite, got {k}");
    }
    Ok(())
}

pub fn table1(args: &Table1Args) -> Result<Flagged> {
    check_kappas(&args.kappa)?;
    let mut flagged = false;
    let mut rows = Vec::new();
    for &d in &args.d {
        if d <= 3 {
            eprintln!("note: skipping d = {d}; the simple proposal needs d > 3");
            flagged = true;
            continue;
        }
        for &k in &args.kappa {
            rows.push(vec![d.to_string(), num(k), num(100.0 * simple_rejection_rate(d, k)?)]);
        }
    }
    finish(&args.output, "table1", &["d", "kappa", "rejection_pct"], &rows, None)?;
    Ok(Flagged(flagged))
}

fn study_cells(s: &StudyArgs) -> Result<Vec<(usize, f64)>> {
    check_kappas(&s.kappa)?;
    if s.regions == 0 {
        bail!("--regions must be at least 1");
    }
    if s.replicates == 0 {
        bail!("--replicates must be at least 1");
    }
    let mut cells = Vec::new();
    for &d in &s.d {
        if d == 3 {
            eprintln!("note: skipping d = 3; the VWS weight is constant and every proposal is exact");
            continue;
        }
        if d < 2 {
            bail!("dimension must be at least 2, got {d}");
        }
        for &k in &s.kappa {
            cells.push((d, k));
        }
    }
    Ok(cells)
}

fn lower_for(scheme: Scheme) -> LowerMode {
    match scheme {
        Scheme::Constant => LowerMode::Analytic,
        Scheme::Linear => LowerMode::Trivial,
    }
}

fn probabilistic_trace(
    d: usize,
    kappa: f64,
    fact: Factorization,
    scheme: Scheme,
    s: &StudyArgs,
    rng: &mut ChaCha20Rng,
) -> vws::Result<RefinementTrace> {
    let t = marginal_target(d, kappa, fact, s.eps_trunc)?;
    let sup = t.support();
    Ok(refine_probabilistic(&t, &[sup.lo, sup.hi], scheme, lower_for(scheme), 0.0, s.regions - 1, rng)?.1)
}

fn greedy_trace(d: usize, kappa: f64, scheme: Scheme, s: &StudyArgs) -> vws::Result<RefinementTrace> {
    let t = marginal_target(d, kappa, Factorization::Vws, s.eps_trunc)?;
    let sup = t.support();
    Ok(refine_greedy(&t, &[sup.lo, sup.hi], scheme, lower_for(scheme), 0.0, s.regions - 1)?.1)
}

fn trace_points(trace: &RefinementTrace) -> Vec<(usize, f64)> {
    trace.knots.iter().zip(&trace.bounds).map(|(k, b)| (k.len() - 1, b.ln())).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `(d, kappa, label, N, value)`.
type StudyRow = (usize, f64, String, usize, f64);
/// Bounds by `N` and the notes for sizes that were skipped.
type GridResult = (Vec<(usize, f64)>, Vec<String>);
type SeriesMedians = BTreeMap<String, BTreeMap<usize, Vec<f64>>>;

/// One panel per `(d, kappa)`, one series per label with the median over
/// replicates at each `N`; labels listed in `reference` become horizontal lines.
fn median_figure(rows: &[StudyRow], reference: &[&str]) -> Figure {
    let mut panels: BTreeMap<(usize, u64), SeriesMedians> = BTreeMap::new();
    let mut order: Vec<(usize, u64, f64)> = Vec::new();
    for (d, k, label, n, y) in rows {
        let key = (*d, k.to_bits());
        if !panels.contains_key(&key) {
            order.push((*d, k.to_bits(), *k));
        }
        panels.entry(key).or_default().entry(label.clone()).or_default().entry(*n).or_default().push(*y);
    }
    let panels = order
        .into_iter()
        .map(|(d, bits, k)| Panel {
            title: format!("d = {d}, kappa = {k}"),
            series: panels[&(d, bits)]
                .iter()
                .map(|(label, by_n)| Series {
                    label: label.clone(),
                    points: by_n.iter().map(|(n, ys)| (*n as f64, median(ys.clone()))).collect(),
                    reference: reference.contains(&label.as_str()),
                })
                .collect(),
        })
        .collect();
    Figure { x_label: "N".into(), y_label: "log rejection".into(), panels }
}

const SAMPLERS: [&str; 4] = ["uw", "vs_const", "vws_const", "vws_linear"];

pub fn curves(args: &CurvesArgs) -> Result<Flagged> {
    let s = &args.study;
    let cells = study_cells(s)?;
    let tasks: Vec<(usize, usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..SAMPLERS.len()).flat_map(move |t| (0..s.replicates).map(move |r| (c, t, r))))
        .collect();
    let results: Vec<vws::Result<Vec<(usize, f64)>>> = tasks
        .par_iter()
        .map(|&(c, t, r)| {
            let (d, kappa) = cells[c];
            let mut rng = stream_rng(s.seed, c, t, r);
            match SAMPLERS[t] {
                "uw" => {
                    let (_, stats) = uw_sample(d, kappa, UW_DRAWS, &mut rng)?;
                    Ok(vec![(0, stats.rejection_fraction.ln())])
                }
                "vs_const" => Ok(trace_points(&probabilistic_trace(d, kappa, Factorization::Vs, Scheme::Constant, s, &mut rng)?)),
                "vws_const" => Ok(trace_points(&probabilistic_trace(d, kappa, Factorization::Vws, Scheme::Constant, s, &mut rng)?)),
                _ => Ok(trace_points(&probabilistic_trace(d, kappa, Factorization::Vws, Scheme::Linear, s, &mut rng)?)),
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut plot_rows = Vec::new();
    for (&(c, t, r), res) in tasks.iter().zip(results) {
        let (d, kappa) = cells[c];
        for (n, y) in res? {
            rows.push(vec![d.to_string(), num(kappa), SAMPLERS[t].to_string(), n.to_string(), r.to_string(), num(y)]);
            plot_rows.push((d, kappa, SAMPLERS[t].to_string(), n, y));
        }
    }
    let fig = s.output.plot.then(|| median_figure(&plot_rows, &["uw"]));
    finish(&s.output, "curves", &["d", "kappa", "sampler", "N", "replicate", "log_rejection"], &rows, fig)?;
    Ok(Flagged(false))
}

fn rule_name(r: RuleArg) -> &'static str {
    match r {
        RuleArg::EqualSpaced => "equal_spaced",
        RuleArg::EqualProbability => "equal_probability",
        RuleArg::Probabilistic => "probabilistic",
        RuleArg::Greedy => "greedy",
    }
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::Constant => "constant",
        Scheme::Linear => "linear",
    }
}

/// Bounds of fixed knot grids for `N = 1..=regions`, with notes for sizes
/// the rule could not produce.
fn fixed_grid(d: usize, kappa: f64, scheme: Scheme, rule: RuleArg, s: &StudyArgs) -> vws::Result<GridResult> {
    let t = marginal_target(d, kappa, Factorization::Vws, s.eps_trunc)?;
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for n in 1..=s.regions {
        let knots = match rule {
            RuleArg::EqualSpaced => equal_spaced(t.support(), n)?,
            _ => match equal_probability(&t, scheme, n) {
                Ok(k) if k.len() == n + 1 => k,
                Ok(k) => {
                    notes.push(format!("equal_probability produced {} of {n} regions", k.len() - 1));
                    continue;
                }
                Err(e) => {
                    notes.push(format!("equal_probability failed at N = {n}: {e}"));
                    continue;
                }
            },
        };
        out.push((n, Proposal::build(&t, &knots, scheme, lower_for(scheme))?.rejection_bound().ln()));
    }
    Ok((out, notes))
}

pub fn knot_study(args: &KnotStudyArgs) -> Result<Flagged> {
    let s = &args.study;
    let cells = study_cells(s)?;
    let schemes: Vec<Scheme> = match args.scheme {
        SchemeArg::Constant => vec![Scheme::Constant],
        SchemeArg::Linear => vec![Scheme::Linear],
        SchemeArg::Both => vec![Scheme::Constant, Scheme::Linear],
    };
    let rules = args.knot_rule.clone().unwrap_or_else(|| {
        vec![RuleArg::EqualSpaced, RuleArg::EqualProbability, RuleArg::Probabilistic, RuleArg::Greedy]
    });
    let mut tasks = Vec::new();
    for c in 0..cells.len() {
        for (si, &scheme) in schemes.iter().enumerate() {
            for (ri, &rule) in rules.iter().enumerate() {
                let reps = if rule == RuleArg::Probabilistic { s.replicates } else { 1 };
                for r in 0..reps {
                    tasks.push((c, si * rules.len() + ri, scheme, rule, r));
                }
            }
        }
    }
    let results: Vec<vws::Result<GridResult>> = tasks
        .par_iter()
        .map(|&(c, task, scheme, rule, r)| {
            let (d, kappa) = cells[c];
            match rule {
                RuleArg::Probabilistic => {
                    let mut rng = stream_rng(s.seed, c, task, r);
                    Ok((trace_points(&probabilistic_trace(d, kappa, Factorization::Vws, scheme, s, &mut rng)?), vec![]))
                }
                RuleArg::Greedy => Ok((trace_points(&greedy_trace(d, kappa, scheme, s)?), vec![])),
                _ => fixed_grid(d, kappa, scheme, rule, s),
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut plot_rows = Vec::new();
    let mut flagged = false;
    for (&(c, _, scheme, rule, r), res) in tasks.iter().zip(results) {
        let (d, kappa) = cells[c];
        let (points, notes) = res?;
        for n in notes {
            eprintln!("note: d = {d}, kappa = {kappa}, {}: {n}", scheme_name(scheme));
            flagged = true;
        }
        for (n, y) in points {
            rows.push(vec![
                d.to_string(),
                num(kappa),
                scheme_name(scheme).to_string(),
                rule_name(rule).to_string(),
                n.to_string(),
                r.to_string(),
                num(y),
            ]);
            plot_rows.push((d, kappa, format!("{} {}", scheme_name(scheme), rule_name(rule)), n, y));
        }
    }
    let fig = s.output.plot.then(|| median_figure(&plot_rows, &[]));
    finish(
        &s.output,
        "knot-study",
        &["d", "kappa", "scheme", "knot_rule", "N", "replicate", "log_rejection"],
        &rows,
        fig,
    )?;
    Ok(Flagged(flagged))
}

pub fn orthant(args: &OrthantArgs) -> Result<Flagged> {
    check_kappas(&args.kappa)?;
    if args.regions == 0 {
        bail!("--regions must be at least 1");
    }
    let cells: Vec<(usize, f64)> = args.d.iter().flat_map(|&d| args.kappa.iter().map(move |&k| (d, k))).collect();
    let results: Vec<vws::Result<Vec<vws::vmf::OrthantResult>>> = cells
        .par_iter()
        .enumerate()
        .map(|(c, &(d, k))| orthant_study(d, k, args.regions, args.eps_trunc, &mut stream_rng(args.seed, c, 0, 0)))
        .collect();
    let mut rows = Vec::new();
    let mut plot_rows = Vec::new();
    let mut flagged = false;
    for (&(d, k), res) in cells.iter().zip(results) {
        for r in res? {
            if r.delta > r.bound {
                eprintln!("note: d = {d}, kappa = {k}, N = {}: error {} exceeds bound {}", r.regions, r.delta, r.bound);
                flagged = true;
            }
            rows.push(vec![
                d.to_string(),
                num(k),
                r.regions.to_string(),
                num(r.delta.ln()),
                num(r.bound.ln()),
                num(r.approx),
                num(r.exact),
            ]);
            plot_rows.push((d, k, "log delta".to_string(), r.regions, r.delta.ln()));
            plot_rows.push((d, k, "log bound".to_string(), r.regions, r.bound.ln()));
        }
    }
    let fig = args.output.plot.then(|| {
        let mut f = median_figure(&plot_rows, &[]);
        f.y_label = "log error".into();
        f
    });
    finish(&args.output, "orthant", &["d", "kappa", "N", "log_delta", "log_bound", "approx", "exact"], &rows, fig)?;
    Ok(Flagged(flagged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_distinct_and_repeatable() {
        let a: u64 = stream_rng(1, 0, 0, 0).random();
        let b: u64 = stream_rng(1, 0, 0, 1).random();
        let c: u64 = stream_rng(1, 0, 0, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
