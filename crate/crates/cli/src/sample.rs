use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use vws::vmf::{VmfMethod, VmfParams, VmfSampler};

use crate::{Flagged, MethodArg, SampleArgs};

pub fn run(args: &SampleArgs) -> Result<Flagged> {
    let mu = args.mu.clone().unwrap_or_else(|| {
        let mut e = vec![0.0; args.d];
        if let Some(first) = e.first_mut() {
            *first = 1.0;
        }
        e
    });
    if mu.len() != args.d {
        anyhow::bail!("--mu has {} entries but --d is {}", mu.len(), args.d);
    }
    let method = match args.method {
        MethodArg::Uw => VmfMethod::Uw,
        MethodArg::VwsLinear => VmfMethod::VwsLinear,
        MethodArg::VwsConstant => VmfMethod::VwsConstant,
    };
    let sampler = VmfSampler::with_truncation(VmfParams::new(args.kappa, mu)?, method, args.eps_trunc)?;
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let draws = sampler.sample_n(args.n, &mut rng)?;
    let mut w: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for v in draws {
        let line: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush().context("writing samples")?;
    Ok(Flagged(false))
}
