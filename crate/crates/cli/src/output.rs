use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::plot::Figure;
use crate::OutputArgs;

/// Formats a float with the shortest representation that round-trips.
pub fn num(x: f64) -> String {
    format!("{x}")
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().context("writing CSV")?;
    Ok(())
}

/// SVG path for a command: the output path with an `.svg` extension, or
/// `<command>.svg` when writing to stdout.
pub fn plot_path(out: Option<&Path>, command: &str) -> PathBuf {
    match out {
        Some(p) => p.with_extension("svg"),
        None => PathBuf::from(format!("{command}.svg")),
    }
}

pub fn finish(args: &OutputArgs, command: &str, header: &[&str], rows: &[Vec<String>], fig: Option<Figure>) -> Result<()> {
    write_csv(args.out.as_deref(), header, rows)?;
    if args.plot {
        match fig {
            Some(f) => {
                let p = plot_path(args.out.as_deref(), command);
                std::fs::write(&p, f.to_svg()).with_context(|| format!("writing {}", p.display()))?;
                eprintln!("note: plot written to {}", p.display());
            }
            None => eprintln!("note: {command} has no plot"),
        }
    }
    Ok(())
}
