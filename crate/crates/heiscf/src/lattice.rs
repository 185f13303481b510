//! The integer lattice and its two fundamental domains.
//!
//! Lattice points are Heisenberg points with integer coordinates; they form
//! a subgroup. Two fundamental domains for the left action of the lattice
//! are supported:
//!
//! * the **unit cube** K_C = \[−1/2, 1/2)³ in twisted coordinates, with a
//!   closed-form nearest map (round x, round y, then round the
//!   twist-corrected t), and
//! * the **Dirichlet domain** K_D of points closer (in the gauge metric)
//!   to the origin than to any other lattice point, computed by exact
//!   minimization of dist⁴ over a 27-candidate window.
//!
//! Both domains have radius exactly 2^{−1/4} (so rad⁴ = 1/2): every
//! remainder satisfies gauge4 ≤ 1/2.
//!
//! Boundary ties in the Dirichlet minimization are broken deterministically
//! by keeping the lexicographically largest remainder (x, y, t). This makes
//! the half-boundary point (1/2, 1/2, 1/2) reduce to the identity — i.e.
//! that point belongs to K_D — and is translation-equivariant, since the
//! set of candidate remainders of a point is itself translation-invariant.
//!
//! The nearest maps are generic over the scalar. On exact rationals every
//! comparison is exact; on floats a near-tie or near-boundary decision
//! within a fixed margin sets an `ambiguous` flag so downstream consumers
//! can distrust the digit.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::gaussian::GaussianInt;
use crate::heis::{HPoint, Scalar};

/// A point of the integer lattice, in geometric coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub x: BigInt,
    pub y: BigInt,
    pub t: BigInt,
}

impl LatticePoint {
    /// Builds the lattice point (x, y, t).
    pub fn new(x: BigInt, y: BigInt, t: BigInt) -> Self {
        Self { x, y, t }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(x: i64, y: i64, t: i64) -> Self {
        Self::new(BigInt::from(x), BigInt::from(y), BigInt::from(t))
    }

    /// The identity (0, 0, 0).
    pub fn identity() -> Self {
        Self::from_i64(0, 0, 0)
    }

    /// True iff this is the identity.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.t.is_zero()
    }

    /// Group product (the lattice is closed under the group law: the twist
    /// term 2(xy′ − yx′) is an integer).
    pub fn mul(&self, rhs: &Self) -> Self {
        let twist = BigInt::from(2) * (&self.x * &rhs.y - &self.y * &rhs.x);
        Self::new(&self.x + &rhs.x, &self.y + &rhs.y, &self.t + &rhs.t + twist)
    }

    /// Group inverse (−x, −y, −t).
    pub fn inv(&self) -> Self {
        Self::new(-self.x.clone(), -self.y.clone(), -self.t.clone())
    }

    /// Fourth power of the gauge, an exact integer for lattice points.
    pub fn gauge4(&self) -> BigInt {
        let r2 = &self.x * &self.x + &self.y * &self.y;
        &r2 * &r2 + &self.t * &self.t
    }

    /// Converts to a Heisenberg point over any digit scalar.
    pub fn to_hpoint<S: DigitScalar>(&self) -> HPoint<S> {
        HPoint::new(
            S::from_bigint(&self.x),
            S::from_bigint(&self.y),
            S::from_bigint(&self.t),
        )
    }

    /// The Siegel lift (α, β) = (z(1+i), |z|² + ti), both Gaussian
    /// integers; gint_norm(α) = 2(x²+y²) is always even.
    pub fn siegel_lift(&self) -> (GaussianInt, GaussianInt) {
        let alpha = Complex::new(&self.x - &self.y, &self.x + &self.y);
        let beta = Complex::new(&self.x * &self.x + &self.y * &self.y, self.t.clone());
        (alpha, beta)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.t)
    }
}

/// Scalars on which digit extraction works: ordered field arithmetic plus
/// rounding against the integer lattice.
pub trait DigitScalar: Scalar {
    /// Half-up rounding: maps \[n − 1/2, n + 1/2) → n.
    fn round_half_up(&self) -> BigInt;
    /// Embeds an integer.
    fn from_bigint(n: &BigInt) -> Self;
    /// Comparison margin under which boundary decisions are flagged
    /// ambiguous; `None` means arithmetic is exact and no flagging occurs.
    fn ambiguity_margin() -> Option<Self>;
}

impl DigitScalar for BigRational {
    fn round_half_up(&self) -> BigInt {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (self + half).floor().to_integer()
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn ambiguity_margin() -> Option<Self> {
        None
    }
}

impl DigitScalar for f64 {
    fn round_half_up(&self) -> BigInt {
        // floor(x + 1/2) is an exactly representable float, so the
        // conversion to a big integer is lossless even for huge values.
        BigInt::from_f64((self + 0.5).floor()).expect("finite float digit")
    }

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }

    fn ambiguity_margin() -> Option<Self> {
        // Half the mantissa: boundary calls closer than this are noise.
        Some((-26.5f64).exp2())
    }
}

/// Which fundamental domain the class map reduces into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// The half-open unit cube in twisted coordinates.
    Cube,
    /// The Dirichlet domain of the origin for the gauge metric.
    Dirichlet,
}

impl DomainKind {
    /// Fourth power of the domain radius: 1/2 for both domains.
    pub fn rad4(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }
}

/// Result of reducing a point against the lattice: the nearest digit g,
/// the remainder g⁻¹·h inside the domain, and a float-path flag telling
/// whether the digit decision was within the ambiguity margin.
#[derive(Debug, Clone, PartialEq)]
pub struct Nearest<S> {
    pub digit: LatticePoint,
    pub remainder: HPoint<S>,
    pub ambiguous: bool,
}

fn two<S: Scalar>() -> S {
    S::one() + S::one()
}

fn half<S: DigitScalar>() -> S {
    S::one() / two::<S>()
}

/// The nearest lattice point for the cube domain: x and y round
/// independently, then t rounds after the twist correction
/// t′ = t − 2(x_g·y − y_g·x). The remainder lands in \[−1/2, 1/2)³.
pub fn nearest_cube<S: DigitScalar>(h: &HPoint<S>) -> Nearest<S> {
    let xg = h.x.round_half_up();
    let yg = h.y.round_half_up();
    let t_twisted = h.t.clone()
        - two::<S>() * (S::from_bigint(&xg) * h.y.clone() - S::from_bigint(&yg) * h.x.clone());
    let tg = t_twisted.round_half_up();
    let remainder = HPoint::new(
        h.x.clone() - S::from_bigint(&xg),
        h.y.clone() - S::from_bigint(&yg),
        t_twisted.clone() - S::from_bigint(&tg),
    );
    let ambiguous = match S::ambiguity_margin() {
        None => false,
        Some(m) => {
            let near = |r: &S| half::<S>() - r.abs() < m;
            near(&remainder.x) || near(&remainder.y) || near(&remainder.t)
        }
    };
    Nearest {
        digit: LatticePoint::new(xg, yg, tg),
        remainder,
        ambiguous,
    }
}

fn lex_gt<S: Scalar>(a: &HPoint<S>, b: &HPoint<S>) -> bool {
    if a.x != b.x {
        return a.x > b.x;
    }
    if a.y != b.y {
        return a.y > b.y;
    }
    a.t > b.t
}

/// The nearest lattice point for the Dirichlet domain: minimizes
/// dist⁴(g, h) over the 27 candidates with x_g, y_g within 1 of the
/// rounded coordinates and t_g within 1 of the rounded twist-corrected t.
///
/// The window is sufficient because the optimal remainder has gauge at
/// most 2^{−1/4} < 1, which confines each coordinate offset to less than
/// 3/2 of the corresponding rounding, hence to an integer offset of at
/// most 1. Ties are broken by the lexicographically largest remainder.
pub fn nearest_dirichlet<S: DigitScalar>(h: &HPoint<S>) -> Nearest<S> {
    nearest_dirichlet_windowed(h, 1)
}

/// Dirichlet minimization over a configurable window half-width (used by
/// tests to confirm the default window never loses the optimum).
pub fn nearest_dirichlet_windowed<S: DigitScalar>(h: &HPoint<S>, w: i64) -> Nearest<S> {
    let xc = h.x.round_half_up();
    let yc = h.y.round_half_up();
    let mut best: Option<(LatticePoint, HPoint<S>, S)> = None;
    let mut runner_up: Option<S> = None;
    for dx in -w..=w {
        for dy in -w..=w {
            let xg = &xc + BigInt::from(dx);
            let yg = &yc + BigInt::from(dy);
            let t_twisted = h.t.clone()
                - two::<S>()
                    * (S::from_bigint(&xg) * h.y.clone() - S::from_bigint(&yg) * h.x.clone());
            let tc = t_twisted.round_half_up();
            for dt in -w..=w {
                let tg = &tc + BigInt::from(dt);
                let remainder = HPoint::new(
                    h.x.clone() - S::from_bigint(&xg),
                    h.y.clone() - S::from_bigint(&yg),
                    t_twisted.clone() - S::from_bigint(&tg),
                );
                let d4 = remainder.gauge4();
                let candidate = LatticePoint::new(xg.clone(), yg.clone(), tg);
                match &mut best {
                    None => best = Some((candidate, remainder, d4)),
                    Some((bg, br, bd)) => {
                        if d4 < *bd {
                            runner_up = Some(bd.clone());
                            *bg = candidate;
                            *br = remainder;
                            *bd = d4;
                        } else {
                            if d4 == *bd && lex_gt(&remainder, br) {
                                *bg = candidate;
                                *br = remainder;
                            }
                            match &mut runner_up {
                                None => runner_up = Some(d4),
                                Some(r) => {
                                    if d4 < *r {
                                        *r = d4;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let (digit, remainder, best_d4) = best.expect("window is nonempty");
    let ambiguous = match (S::ambiguity_margin(), runner_up) {
        (Some(m), Some(r)) => r - best_d4 < m,
        _ => false,
    };
    Nearest {
        digit,
        remainder,
        ambiguous,
    }
}

/// Reduces h against the lattice in the requested domain.
pub fn nearest<S: DigitScalar>(kind: DomainKind, h: &HPoint<S>) -> Nearest<S> {
    match kind {
        DomainKind::Cube => nearest_cube(h),
        DomainKind::Dirichlet => nearest_dirichlet(h),
    }
}

/// True iff h lies in the fundamental domain, i.e. reduces to the
/// identity digit.
pub fn in_domain<S: DigitScalar>(kind: DomainKind, h: &HPoint<S>) -> bool {
    nearest(kind, h).digit.is_identity()
}
