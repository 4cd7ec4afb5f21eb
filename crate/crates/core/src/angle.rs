//! Angle literals: `pi`, `-pi/2`, `3pi/4`, `0.5*pi`, `π`, or plain radians.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || Error::validation(format!("cannot parse angle '{text}'"));
    let value = match s.split_once("pi") {
        None => s.parse::<f64>().map_err(|_| bad())?,
        Some((coef, rest)) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = rest.trim();
            let denom = match rest.strip_prefix('/') {
                None if rest.is_empty() => 1.0,
                None => return Err(bad()),
                Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
            };
            if denom == 0.0 {
                return Err(bad());
            }
            coef * PI / denom
        }
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}
