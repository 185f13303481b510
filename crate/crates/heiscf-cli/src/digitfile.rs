//! The `digits.json` schema (format version 1): integer part, digit
//! triples, termination, per-iterate denominator norms, and exact error
//! certificates. Parsing validates the digit stream — a zero digit after
//! position 0 is rejected with its index.

use crate::errors::{io_ctx, CliError, CliResult};
use crate::manifest::RunManifest;
use heiscf::cf::DigitSeq;
use heiscf::lattice::LatticePoint;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    /// Convergent index.
    pub n: usize,
    /// Exact fourth-power distance from the target to the n-digit
    /// convergent, as a rational string.
    pub dist4: String,
    /// The same distance through the product formula
    /// ∏|vᵢ|² / gint_norm(qₙ) — must equal `dist4` exactly.
    pub product_over_norm: String,
    /// The geometric bound (1/2)ⁿ⁺¹.
    pub bound4: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigitsFile {
    pub format_version: u32,
    pub library_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    /// Integer part γ₀ (may be zero).
    pub gamma0: [i128; 3],
    /// Fractional digits γ₁, γ₂, … (each nonzero).
    pub digits: Vec<[i128; 3]>,
    /// True iff the expansion terminated (the point is rational and fully
    /// expanded).
    pub finite: bool,
    /// Why the digit list ends: "finite", "digit-limit", or
    /// "certified-prefix" (irrational seed, digits certified by the
    /// precision-doubling rule).
    pub termination: String,
    /// gint_norm of the per-iterate denominators q⁽⁰⁾, q⁽¹⁾, … along the
    /// integer expansion chain (exact expansions only; strictly
    /// decreasing by at least halving).
    pub denominator_norms: Vec<String>,
    /// Exact error certificates per convergent (exact expansions only).
    pub certificates: Vec<CertificateJson>,
}

pub fn lattice_to_triple(g: &LatticePoint) -> CliResult<[i128; 3]> {
    let c = |v: &BigInt| {
        v.to_i128().ok_or_else(|| {
            CliError::Parse(format!(
                "digit coordinate {v} exceeds the JSON integer range"
            ))
        })
    };
    Ok([c(&g.x)?, c(&g.y)?, c(&g.t)?])
}

fn triple_to_lattice(t: &[i128; 3]) -> LatticePoint {
    LatticePoint::new(BigInt::from(t[0]), BigInt::from(t[1]), BigInt::from(t[2]))
}

impl DigitsFile {
    pub fn from_seq(seq: &DigitSeq, termination: &str) -> CliResult<Self> {
        let digits = seq
            .digits
            .iter()
            .map(lattice_to_triple)
            .collect::<CliResult<Vec<_>>>()?;
        Ok(DigitsFile {
            format_version: crate::manifest::FORMAT_VERSION,
            library_version: heiscf::VERSION.to_string(),
            manifest: None,
            gamma0: lattice_to_triple(&seq.gamma0)?,
            digits,
            finite: seq.finite,
            termination: termination.to_string(),
            denominator_norms: Vec::new(),
            certificates: Vec::new(),
        })
    }

    /// Validates the stream and converts to the engine representation.
    /// Digit positions count γ₀ as position 0.
    pub fn to_seq(&self) -> CliResult<DigitSeq> {
        if self.format_version != crate::manifest::FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported digits format version {}",
                self.format_version
            )));
        }
        let mut digits = Vec::with_capacity(self.digits.len());
        for (i, t) in self.digits.iter().enumerate() {
            let g = triple_to_lattice(t);
            if g.is_identity() {
                return Err(CliError::Parse(format!(
                    "digit at position {} is zero (only the integer part may be zero)",
                    i + 1
                )));
            }
            digits.push(g);
        }
        Ok(DigitSeq {
            gamma0: triple_to_lattice(&self.gamma0),
            digits,
            finite: self.finite,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let body = io_ctx(std::fs::read_to_string(path), path)?;
        let file: DigitsFile = serde_json::from_str(&body)?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let body = serde_json::to_string_pretty(self).expect("digit file serializes");
        io_ctx(std::fs::write(path, body + "\n"), path)
    }
}
