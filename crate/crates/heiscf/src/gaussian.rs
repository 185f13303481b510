//! Exact Gaussian-integer and Gaussian-rational arithmetic.
//!
//! [`GaussianInt`] is a Gaussian integer a+bi with big-integer parts; it is
//! the coefficient ring for all digit matrices and convergent numerators.
//! [`GaussianRational`] is an element of ℚ(i) kept in a canonical form with a
//! single positive, gcd-reduced integer denominator, so exact equality is
//! structural equality.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A Gaussian integer a+bi with arbitrary-precision parts.
pub type GaussianInt = Complex<BigInt>;

/// Builds a Gaussian integer from machine integers.
pub fn gint(re: i64, im: i64) -> GaussianInt {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

/// The norm N(a+bi) = a² + b², i.e. the squared modulus.
///
/// All modulus inequalities in this crate are stated and tested on this
/// squared quantity (with exponents doubled) so that comparisons stay inside
/// the integers.
pub fn gint_norm(g: &GaussianInt) -> BigInt {
    &g.re * &g.re + &g.im * &g.im
}

/// Complex conjugate of a Gaussian integer.
pub fn gint_conj(g: &GaussianInt) -> GaussianInt {
    Complex::new(g.re.clone(), -g.im.clone())
}

/// An element of ℚ(i) in canonical form: numerator a+bi over a single
/// integer denominator d with d > 0 and gcd(a, b, d) = 1.
///
/// The canonical form makes equality structural: two values are equal as
/// field elements iff their fields are componentwise equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: GaussianInt,
    den: BigInt,
}

impl GaussianRational {
    /// Builds a value num/den, canonicalizing. Errors on a zero denominator.
    pub fn new(num: GaussianInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num, den }.reduced())
    }

    /// The zero element.
    pub fn zero() -> Self {
        Self { num: gint(0, 0), den: BigInt::one() }
    }

    /// The unit element.
    pub fn one() -> Self {
        Self { num: gint(1, 0), den: BigInt::one() }
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Self { num: gint(0, 1), den: BigInt::one() }
    }

    /// Embeds a Gaussian integer.
    pub fn from_gint(g: GaussianInt) -> Self {
        Self { num: g, den: BigInt::one() }
    }

    /// Embeds a machine-integer pair re+im·i.
    pub fn from_i64(re: i64, im: i64) -> Self {
        Self::from_gint(gint(re, im))
    }

    /// Builds a value from exact real and imaginary rationals.
    pub fn from_rationals(re: &BigRational, im: &BigRational) -> Self {
        let den = re.denom().lcm(im.denom());
        let a = re.numer() * (&den / re.denom());
        let b = im.numer() * (&den / im.denom());
        Self { num: Complex::new(a, b), den }.reduced()
    }

    /// The canonical numerator a+bi.
    pub fn numerator(&self) -> &GaussianInt {
        &self.num
    }

    /// The canonical positive denominator.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Real part as an exact rational.
    pub fn re(&self) -> BigRational {
        BigRational::new(self.num.re.clone(), self.den.clone())
    }

    /// Imaginary part as an exact rational.
    pub fn im(&self) -> BigRational {
        BigRational::new(self.num.im.clone(), self.den.clone())
    }

    /// Restores the canonical form (positive denominator, gcd-reduced).
    ///
    /// Idempotent: `x.reduced() == x.reduced().reduced()`.
    pub fn reduced(self) -> Self {
        let Self { mut num, mut den } = self;
        if num.re.is_zero() && num.im.is_zero() {
            return Self { num, den: BigInt::one() };
        }
        if den.is_negative() {
            den = -den;
            num = -num;
        }
        let g = num.re.gcd(&num.im).gcd(&den);
        if !g.is_one() {
            num.re /= &g;
            num.im /= &g;
            den /= &g;
        }
        Self { num, den }
    }

    /// True iff the value is 0.
    pub fn is_zero(&self) -> bool {
        self.num.re.is_zero() && self.num.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        Self { num: gint_conj(&self.num), den: self.den.clone() }
    }

    /// Squared modulus |x|² as an exact non-negative rational.
    pub fn modulus_sq(&self) -> BigRational {
        BigRational::new(gint_norm(&self.num), &self.den * &self.den)
    }

    /// Sum.
    pub fn add(&self, rhs: &Self) -> Self {
        let num = &self.num * &rhs.den + &rhs.num * &self.den;
        Self { num, den: &self.den * &rhs.den }.reduced()
    }

    /// Difference.
    pub fn sub(&self, rhs: &Self) -> Self {
        let num = &self.num * &rhs.den - &rhs.num * &self.den;
        Self { num, den: &self.den * &rhs.den }.reduced()
    }

    /// Product.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self { num: &self.num * &rhs.num, den: &self.den * &rhs.den }.reduced()
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        Self { num: -self.num.clone(), den: self.den.clone() }
    }

    /// Quotient; errors on a zero divisor instead of producing a value.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x / (a+bi)/d = x · d·(a−bi) / (a²+b²)
        let num = &self.num * gint_conj(&rhs.num) * &rhs.den;
        let den = &self.den * gint_norm(&rhs.num);
        Ok(Self { num, den }.reduced())
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// The value as a pair of exact `BigRational`s via `num_complex`.
    pub fn to_complex_rational(&self) -> Complex<BigRational> {
        Complex::new(self.re(), self.im())
    }

    /// Approximate value as a complex f64 (for reporting only).
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re()), rational_to_f64(&self.im()))
    }
}

impl std::fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}{:+}i)/{}", self.num.re, self.num.im, self.den)
    }
}

/// Converts an exact rational to the nearest f64.
///
/// `BigRational::to_f64` saturates for huge numerators/denominators; this
/// helper rescales by powers of two first so the result stays finite and
/// correctly rounded to within an ulp whenever the true value is in range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if r.is_zero() {
        return 0.0;
    }
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    // Scale numerator and denominator so both fit comfortably in f64.
    let shift_n = (nbits - 100).max(0);
    let shift_d = (dbits - 100).max(0);
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::MAX);
    let scale = ((shift_n - shift_d) as f64).exp2();
    n / d * scale
}

/// f64 value of num/den without constructing a reduced rational — one
/// scaled division, robust at any magnitude. The denominator must be
/// nonzero.
pub fn bigint_ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    rational_to_f64(&BigRational::new_raw(num.clone(), den.clone()))
}

/// Base-2 logarithm of a positive big integer, accurate to f64 precision.
pub fn log2_bigint(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    assert!(n.is_positive(), "log2 of a non-positive integer");
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}
