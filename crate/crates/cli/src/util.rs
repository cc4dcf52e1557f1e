//! Small input parsers shared by the subcommands.

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;
use painleve_forge::rational::{rat_from_str, BigRational};

/// Parses a complex literal: `3`, `-1.5`, `2i`, `1+2i`, `-0.5-0.25i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        bail!("empty complex literal");
    }
    // split at the last +/- that is not an exponent sign and not leading
    let bytes = s.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(i) if s.ends_with('i') => (&s[..i], &s[i..]),
        _ if s.ends_with('i') => ("", s.as_str()),
        _ => (s.as_str(), ""),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part
            .parse::<f64>()
            .map_err(|_| anyhow!("bad real part '{re_part}'"))?
    };
    let im = if im_part.is_empty() {
        0.0
    } else {
        let trimmed = &im_part[..im_part.len() - 1];
        match trimmed {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => t
                .parse::<f64>()
                .map_err(|_| anyhow!("bad imaginary part '{im_part}'"))?,
        }
    };
    Ok(Complex64::new(re, im))
}

/// Parses a comma-separated list of complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_complex).collect()
}

/// Parses one `index=rational` free-constant override.
pub fn parse_constant(s: &str) -> Result<(usize, BigRational)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| anyhow!("expected 'index=rational', got '{s}'"))?;
    let idx: usize = k.trim().parse().map_err(|_| anyhow!("bad index '{k}'"))?;
    let val = rat_from_str(v).ok_or_else(|| anyhow!("bad rational '{v}'"))?;
    Ok((idx, val))
}

/// Splits a `name=expr;name=expr` pair, returning the two (name, expr) halves.
pub fn parse_pair(s: &str) -> Result<((String, String), (String, String))> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 2 {
        bail!("expected two ';'-separated assignments, got '{s}'");
    }
    let mut out = Vec::new();
    for p in parts {
        let (name, expr) = p
            .split_once('=')
            .ok_or_else(|| anyhow!("expected 'name=expr' in '{p}'"))?;
        out.push((name.trim().to_string(), expr.trim().to_string()));
    }
    Ok((out[0].clone(), out[1].clone()))
}

/// Distance from the origin to the straight segment `[a, b]`.
pub fn segment_origin_distance(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    // projection parameter of 0 onto the segment
    let t = (-(a.re * d.re + a.im * d.im) / len2).clamp(0.0, 1.0);
    (a + d * Complex64::new(t, 0.0)).norm()
}
