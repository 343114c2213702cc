//! Declination/inclination data files.

use anyhow::{bail, Context, Result};

/// Parses two numeric columns per line, separated by whitespace or commas.
/// Text after `#` is ignored, as are blank lines.
pub fn parse_angles(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        if fields.len() != 2 {
            bail!("line {}: expected 2 columns, found {}", i + 1, fields.len());
        }
        let parse = |t: &str| -> Result<f64> {
            let v: f64 = t.parse().with_context(|| format!("line {}: cannot parse {t:?} as a number", i + 1))?;
            if !v.is_finite() {
                bail!("line {}: non-finite value {t:?}", i + 1);
            }
            Ok(v)
        };
        out.push((parse(fields[0])?, parse(fields[1])?));
    }
    if out.is_empty() {
        bail!("no observations found");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_separators() {
        let v = parse_angles("# header\n122.5 55.5\n\n130,  49 # trailing\n").unwrap();
        assert_eq!(v, vec![(122.5, 55.5), (130.0, 49.0)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_angles("1 2\n3 x\n").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_angles("1 2\n\n3 4 5\n").unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
        assert!(parse_angles("# only comments\n").is_err());
    }
}
