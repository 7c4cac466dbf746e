//! Parsers for the textual arguments clap leaves as strings.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::spectral::BETA_GRID;

/// `"3"`, `"-1/2"` or `"-0.5"` as twice its value.
pub fn twice_half_integer(s: &str) -> Result<i64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().or_else(|_| invalid(format!("bad magnetisation {s:?}")))?;
        return match den.trim() {
            "1" => Ok(2 * num),
            "2" => Ok(num),
            _ => invalid(format!("magnetisation {s:?} is not a multiple of 1/2")),
        };
    }
    let x: f64 = s.parse().or_else(|_| invalid(format!("bad magnetisation {s:?}")))?;
    let t = 2.0 * x;
    if !t.is_finite() || t.fract() != 0.0 {
        return invalid(format!("magnetisation {s:?} is not a multiple of 1/2"));
    }
    Ok(t as i64)
}

fn number(s: &str) -> Result<f64> {
    s.trim().parse().or_else(|_| invalid(format!("not a number: {s:?}")))
}

/// `"lo:hi:step"`, `"a,b,c"` or `"default"`.
pub fn beta_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s == "default" {
        return Ok(BETA_GRID.to_vec());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return invalid(format!("expected lo:hi:step, got {s:?}"));
        };
        let (lo, hi, step) = (number(lo)?, number(hi)?, number(step)?);
        if !(step > 0.0 && lo <= hi && lo.is_finite() && hi.is_finite()) {
            return invalid(format!("bad grid {s:?}"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| lo + i as f64 * step).collect());
    }
    s.split(',').map(number).collect()
}

/// `"lo:hi"`.
pub fn window(s: &str) -> Result<(f64, f64)> {
    match s.split_once(':') {
        Some((a, b)) => Ok((number(a)?, number(b)?)),
        None => invalid(format!("expected lo:hi, got {s:?}")),
    }
}

/// `"i"`, `"-i"`, `"exp(θi)"`, `"re,im"` or a real number.
pub fn q_value(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    match t.as_str() {
        "i" => return Ok(Complex64::new(0.0, 1.0)),
        "-i" => return Ok(Complex64::new(0.0, -1.0)),
        _ => {}
    }
    if let Some(inner) = t.strip_prefix("exp(").and_then(|r| r.strip_suffix("i)")) {
        return Ok(Complex64::from_polar(1.0, number(inner)?));
    }
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(number(re)?, number(im)?));
    }
    let q = Complex64::new(number(&t)?, 0.0);
    if q.re == 0.0 {
        return invalid("q must be nonzero");
    }
    Ok(q)
}
