//! Arbitrary-precision seed coordinates.
//!
//! Irrational seeds such as (π−3, e−3, 0) enter the exact pipeline as
//! *dyadic rationals*: the constant is evaluated to a requested number of
//! bits by an arbitrary-precision float library and converted losslessly
//! to a `BigRational` whose denominator is a power of two. Expanding the
//! same seed at p and 2p bits and comparing digit prefixes yields the
//! certified prefix of the true irrational point's expansion (the
//! doubling rule).

use astro_float::{BigFloat, Consts, RoundingMode, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::heis::HPoint;

/// Converts a finite arbitrary-precision float to the exact rational it
/// represents. Returns `None` for NaN or infinities.
pub fn bigfloat_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _prec, sign, exp, _inexact) = x.as_raw_parts()?;
    let word_bits = std::mem::size_of::<Word>() * 8;
    let mut mantissa = BigInt::zero();
    for w in words.iter().rev() {
        mantissa = (mantissa << word_bits) + BigInt::from(*w);
    }
    if mantissa.is_zero() {
        return Some(BigRational::zero());
    }
    if sign.is_negative() {
        mantissa = -mantissa;
    }
    // value = mantissa · 2^(exp − total_mantissa_bits)
    let shift = exp as i64 - (words.len() * word_bits) as i64;
    let value = if shift >= 0 {
        BigRational::from_integer(mantissa << shift)
    } else {
        BigRational::new(mantissa, BigInt::one() << (-shift))
    };
    Some(value)
}

/// Cache of transcendental-constant computations.
pub struct Constants {
    cc: Consts,
}

impl Constants {
    /// Initializes the constant cache.
    pub fn new() -> Result<Self> {
        Consts::new()
            .map(|cc| Self { cc })
            .map_err(|e| Error::Precondition(format!("constant cache initialization failed: {e:?}")))
    }

    /// π−3 as a dyadic rational with the requested precision.
    pub fn pi_minus_3(&mut self, bits: usize) -> BigRational {
        let pi = self.cc.pi(bits, RoundingMode::ToEven);
        bigfloat_to_rational(&pi).expect("π is finite") - BigRational::from_integer(BigInt::from(3))
    }

    /// e−3 as a dyadic rational with the requested precision.
    pub fn e_minus_3(&mut self, bits: usize) -> BigRational {
        let e = self.cc.e(bits, RoundingMode::ToEven);
        bigfloat_to_rational(&e).expect("e is finite") - BigRational::from_integer(BigInt::from(3))
    }

    /// √2−1 as a dyadic rational with the requested precision.
    pub fn sqrt2_minus_1(&mut self, bits: usize) -> BigRational {
        let two = BigFloat::from_i8(2, bits + 8);
        let s = two.sqrt(bits, RoundingMode::ToEven);
        bigfloat_to_rational(&s).expect("√2 is finite") - BigRational::one()
    }
}

/// One coordinate of a seed: an exact rational or a named irrational
/// fractional part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordSpec {
    Exact(BigRational),
    PiMinus3,
    EMinus3,
    Sqrt2Minus1,
}

impl CoordSpec {
    /// True iff the coordinate needs no precision policy.
    pub fn is_exact(&self) -> bool {
        matches!(self, CoordSpec::Exact(_))
    }

    /// Evaluates to a rational, dyadic at `bits` precision for the named
    /// constants.
    pub fn eval(&self, constants: &mut Constants, bits: usize) -> BigRational {
        match self {
            CoordSpec::Exact(r) => r.clone(),
            CoordSpec::PiMinus3 => constants.pi_minus_3(bits),
            CoordSpec::EMinus3 => constants.e_minus_3(bits),
            CoordSpec::Sqrt2Minus1 => constants.sqrt2_minus_1(bits),
        }
    }
}

/// A seed point specification with independently specified coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSpec {
    pub x: CoordSpec,
    pub y: CoordSpec,
    pub t: CoordSpec,
}

impl SeedSpec {
    /// An all-rational seed.
    pub fn exact(h: &HPoint<BigRational>) -> Self {
        Self {
            x: CoordSpec::Exact(h.x.clone()),
            y: CoordSpec::Exact(h.y.clone()),
            t: CoordSpec::Exact(h.t.clone()),
        }
    }

    /// True iff every coordinate is exact.
    pub fn is_exact(&self) -> bool {
        self.x.is_exact() && self.y.is_exact() && self.t.is_exact()
    }

    /// Evaluates the point at the given precision.
    pub fn eval(&self, constants: &mut Constants, bits: usize) -> HPoint<BigRational> {
        HPoint::new(
            self.x.eval(constants, bits),
            self.y.eval(constants, bits),
            self.t.eval(constants, bits),
        )
    }
}
