//! Parsing of coordinates, points, lattice triples, and digit words.
//!
//! Exact coordinates are fractions `a/b`, integers, or plain decimals
//! (`0.25` becomes the exact rational 1/4 — no binary rounding). The
//! named irrational seeds `pi-3`, `e-3`, and `sqrt2-1` are evaluated
//! later at the run's precision.

use crate::errors::{CliError, CliResult};
use heiscf::bigcomplex::{CoordSpec, SeedSpec};
use heiscf::heis::HPoint;
use heiscf::lattice::LatticePoint;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Parses one exact rational coordinate: `a/b`, an integer, or a decimal.
pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    let s = s.trim();
    let bad = |what: &str| {
        CliError::Parse(format!("cannot parse coordinate {s:?}: {what}"))
    };
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| bad(&format!("numerator: {e}")))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| bad(&format!("denominator: {e}")))?;
        if d.is_zero() {
            return Err(bad("denominator is zero"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int_part).map_err(|e| bad(&format!("integer part: {e}")))?
        };
        if frac_part.is_empty() {
            return Ok(BigRational::from_integer(int_digits));
        }
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad("fractional part must be digits"));
        }
        let frac = BigInt::from_str(frac_part).map_err(|e| bad(&format!("fraction: {e}")))?;
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        let mag = int_digits.abs() * &den + frac;
        let signed = if neg { -mag } else { mag };
        return Ok(BigRational::new(signed, den));
    }
    let n = BigInt::from_str(s).map_err(|e| bad(&e.to_string()))?;
    Ok(BigRational::from_integer(n))
}

/// Parses one coordinate: a named constant or an exact rational.
pub fn parse_coord(s: &str) -> CliResult<CoordSpec> {
    match s.trim() {
        "pi-3" => Ok(CoordSpec::PiMinus3),
        "e-3" => Ok(CoordSpec::EMinus3),
        "sqrt2-1" => Ok(CoordSpec::Sqrt2Minus1),
        other => Ok(CoordSpec::Exact(parse_rational(other)?)),
    }
}

/// Parses a point `x,y,t` whose coordinates may be named constants.
pub fn parse_seed(s: &str) -> CliResult<SeedSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!(
            "point {s:?} must have exactly three comma-separated coordinates"
        )));
    }
    Ok(SeedSpec {
        x: parse_coord(parts[0])?,
        y: parse_coord(parts[1])?,
        t: parse_coord(parts[2])?,
    })
}

/// Parses a point that must be exactly rational (no named constants).
pub fn parse_exact_point(s: &str) -> CliResult<HPoint<BigRational>> {
    let spec = parse_seed(s)?;
    match (&spec.x, &spec.y, &spec.t) {
        (CoordSpec::Exact(x), CoordSpec::Exact(y), CoordSpec::Exact(t)) => {
            Ok(HPoint::new(x.clone(), y.clone(), t.clone()))
        }
        _ => Err(CliError::Parse(format!(
            "point {s:?} must be exactly rational here (named constants not allowed)"
        ))),
    }
}

/// Parses an integer lattice triple `x,y,t`.
pub fn parse_lattice(s: &str) -> CliResult<LatticePoint> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!(
            "lattice point {s:?} must have exactly three comma-separated integers"
        )));
    }
    let int = |p: &str| {
        BigInt::from_str(p.trim())
            .map_err(|e| CliError::Parse(format!("cannot parse integer {p:?}: {e}")))
    };
    Ok(LatticePoint::new(int(parts[0])?, int(parts[1])?, int(parts[2])?))
}

/// Parses a digit word `x,y,t;x,y,t;…` of nonzero lattice points.
pub fn parse_word(s: &str) -> CliResult<Vec<LatticePoint>> {
    let mut word = Vec::new();
    for (i, part) in s.split(';').enumerate() {
        let g = parse_lattice(part)?;
        if g.is_identity() {
            return Err(CliError::Parse(format!(
                "digit at index {i} of the word is zero; cylinder digits must be nonzero"
            )));
        }
        word.push(g);
    }
    if word.is_empty() {
        return Err(CliError::Parse("digit word is empty".into()));
    }
    Ok(word)
}

/// Exact display form of a rational: `p/q`, or just `p` for integers.
pub fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Describes a coordinate for manifests, preserving named constants.
pub fn coord_str(c: &CoordSpec) -> String {
    match c {
        CoordSpec::PiMinus3 => "pi-3".into(),
        CoordSpec::EMinus3 => "e-3".into(),
        CoordSpec::Sqrt2Minus1 => "sqrt2-1".into(),
        CoordSpec::Exact(r) => rational_str(r),
    }
}

pub fn seed_str(s: &SeedSpec) -> String {
    format!("{},{},{}", coord_str(&s.x), coord_str(&s.y), coord_str(&s.t))
}
