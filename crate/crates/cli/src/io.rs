//! Argument parsing helpers and file I/O.

use anyhow::{bail, Context, Result};
use num::complex::Complex64;
use std::path::Path;

/// Parse a comma-separated list of 1-based simple-root indices; an empty
/// string is the empty set.
pub fn parse_s(s: &str, rank: usize) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let i: usize = part.trim().parse().with_context(|| format!("bad simple-root index {part:?}"))?;
        if i == 0 || i > rank {
            bail!("simple-root index {i} out of range 1..={rank}");
        }
        out.push(i - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parse one complex number: "0.3", "0.3+0.1i", "0.3-0.1i", "0.2i".
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        bail!("empty complex literal");
    }
    if let Some(stripped) = t.strip_suffix('i') {
        // find the split between real and imaginary parts
        let bytes = stripped.as_bytes();
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && bytes[k - 1] as char != 'e' && bytes[k - 1] as char != 'E' {
                let re: f64 = stripped[..k].parse().with_context(|| format!("bad real part in {s:?}"))?;
                let im_str = &stripped[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().with_context(|| format!("bad imaginary part in {s:?}"))?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = if stripped.is_empty() {
            1.0
        } else {
            stripped.parse().with_context(|| format!("bad imaginary literal {s:?}"))?
        };
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = t.parse().with_context(|| format!("bad number {s:?}"))?;
    Ok(Complex64::new(re, 0.0))
}

/// Parse a comma-separated complex vector of the given length.
pub fn parse_complex_vec(s: &str, expected: usize) -> Result<Vec<Complex64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != expected {
        bail!("expected {expected} components, got {}", parts.len());
    }
    parts.iter().map(|p| parse_complex(p)).collect()
}

pub fn write_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).context("serializing output")?;
    match out {
        Some(path) => {
            std::fs::write(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn read_json_value(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
