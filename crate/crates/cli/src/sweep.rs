use anyhow::{anyhow, bail, Context, Result};

use crate::Common;

/// Parse `NAME=START:STOP:COUNT[:log]` into the sampled values.
pub fn parse(spec: &str) -> Result<(String, Vec<f64>)> {
    let (name, range) = spec.split_once('=').ok_or_else(|| anyhow!("sweep '{spec}' needs NAME=START:STOP:COUNT"))?;
    let parts: Vec<&str> = range.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        bail!("sweep '{spec}' needs NAME=START:STOP:COUNT[:log]");
    }
    let start: f64 = parts[0].parse().with_context(|| format!("sweep start in '{spec}'"))?;
    let stop: f64 = parts[1].parse().with_context(|| format!("sweep stop in '{spec}'"))?;
    let count: usize = parts[2].parse().with_context(|| format!("sweep count in '{spec}'"))?;
    let log = match parts.get(3) {
        None => false,
        Some(&"log") => true,
        Some(other) => bail!("unknown sweep spacing '{other}'"),
    };
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        bail!("sweep '{spec}' is empty or not finite");
    }
    if log && !(start > 0.0 && stop > 0.0) {
        bail!("log sweep '{spec}' needs positive bounds");
    }
    let vals = (0..count)
        .map(|i| {
            let f = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            if log {
                (start.ln() + f * (stop.ln() - start.ln())).exp()
            } else {
                start + f * (stop - start)
            }
        })
        .collect();
    Ok((name.to_string(), vals))
}

pub fn apply(common: &Common) -> Result<Common> {
    let mut out = common.clone();
    for spec in &common.sweep {
        let (name, vals) = parse(spec)?;
        let slot = match name.as_str() {
            "n" => &mut out.n,
            "p0a" => &mut out.p0a,
            "a" => &mut out.a,
            "pz" => &mut out.pz,
            "ppar" => &mut out.ppar,
            _ => bail!("cannot sweep '{name}'; use n, p0a, a, pz or ppar"),
        };
        *slot = vals;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_log() {
        assert_eq!(parse("n=1:3:3").unwrap().1, vec![1.0, 2.0, 3.0]);
        let (_, v) = parse("p0a=100:400:3:log").unwrap();
        assert!((v[1] - 200.0).abs() < 1e-12);
        assert!(parse("n=1:3").is_err());
        assert!(parse("n=1:3:0").is_err());
    }
}
