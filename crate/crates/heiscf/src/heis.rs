//! The geometric model of the Heisenberg group: ℝ³ (equivalently ℂ×ℝ) with
//! the twisted product
//!
//! ```text
//! (x, y, t) * (x', y', t') = (x + x', y + y', t + t' + 2(xy' − yx'))
//! ```
//!
//! together with the gauge quasi-norm ‖(z,t)‖ = (|z|⁴ + t²)^{1/4}, metric
//! dilations, rotations, and the Korányi inversion
//! ι(z,t) = (−z/(|z|²+it), −t/(|z|⁴+t²)).
//!
//! Everything is generic over the scalar: `BigRational` for the exact
//! pipeline, `f64` for the statistical one. On the exact path the *fourth
//! power* of the gauge is stored and compared, never the gauge itself, so
//! rational inputs give exact values (fourth roots would leave ℚ).

use num_traits::{Num, Signed};

use crate::error::{Error, Result};

/// Scalar requirements for Heisenberg coordinates: an ordered field-like
/// ring of exact rationals or floats.
pub trait Scalar: Clone + Num + Signed + PartialOrd {}
impl<T: Clone + Num + Signed + PartialOrd> Scalar for T {}

/// A point (x, y, t) of the Heisenberg group; z = x + iy is the complex part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPoint<S> {
    pub x: S,
    pub y: S,
    pub t: S,
}

impl<S: Scalar> HPoint<S> {
    /// Builds the point (x, y, t).
    pub fn new(x: S, y: S, t: S) -> Self {
        Self { x, y, t }
    }

    /// The group identity (0, 0, 0).
    pub fn identity() -> Self {
        Self::new(S::zero(), S::zero(), S::zero())
    }

    /// True iff this is the identity.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.t.is_zero()
    }

    /// Group product with the twist term 2(xy' − yx').
    pub fn mul(&self, rhs: &Self) -> Self {
        let two = S::one() + S::one();
        let twist = two * (self.x.clone() * rhs.y.clone() - self.y.clone() * rhs.x.clone());
        Self::new(
            self.x.clone() + rhs.x.clone(),
            self.y.clone() + rhs.y.clone(),
            self.t.clone() + rhs.t.clone() + twist,
        )
    }

    /// Group inverse (−x, −y, −t).
    pub fn inv(&self) -> Self {
        Self::new(-self.x.clone(), -self.y.clone(), -self.t.clone())
    }

    /// Left quotient a⁻¹·b, the displacement from `self` to `rhs`.
    pub fn left_div(&self, rhs: &Self) -> Self {
        self.inv().mul(rhs)
    }

    /// Fourth power of the gauge: ‖h‖⁴ = (x² + y²)² + t².
    pub fn gauge4(&self) -> S {
        let r2 = self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone();
        r2.clone() * r2 + self.t.clone() * self.t.clone()
    }

    /// Fourth power of the left-invariant gauge distance d(a,b) = ‖a⁻¹·b‖.
    pub fn dist4(&self, rhs: &Self) -> S {
        self.left_div(rhs).gauge4()
    }

    /// Korányi inversion ι(z,t) = (−z/(|z|²+it), −t/(|z|⁴+t²)).
    ///
    /// Undefined at the identity. Componentwise over the real scalar:
    /// with A = x²+y² and D = A²+t² = ‖h‖⁴,
    /// ι(x,y,t) = (−(xA + yt)/D, (xt − yA)/D, −t/D).
    pub fn koranyi_inv(&self) -> Result<Self> {
        if self.is_identity() {
            return Err(Error::InversionAtIdentity);
        }
        let a = self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone();
        let d = self.gauge4();
        let nx = -(self.x.clone() * a.clone() + self.y.clone() * self.t.clone()) / d.clone();
        let ny = (self.x.clone() * self.t.clone() - self.y.clone() * a) / d.clone();
        let nt = -self.t.clone() / d;
        Ok(Self::new(nx, ny, nt))
    }

    /// Metric dilation δ_r(z, t) = (rz, r²t); requires r > 0.
    pub fn dilate(&self, r: &S) -> Result<Self> {
        if *r <= S::zero() {
            return Err(Error::Precondition("dilation ratio must be positive".into()));
        }
        Ok(Self::new(
            r.clone() * self.x.clone(),
            r.clone() * self.y.clone(),
            r.clone() * r.clone() * self.t.clone(),
        ))
    }

    /// Rotation (z, t) ↦ (cz, t) by a unit complex number c = c_re + i·c_im.
    ///
    /// The unit-modulus precondition c_re² + c_im² = 1 is the caller's
    /// responsibility (it is checked exactly in tests with Pythagorean
    /// units); provided for completeness, the digit pipeline never calls it.
    pub fn rotate(&self, c_re: &S, c_im: &S) -> Self {
        Self::new(
            c_re.clone() * self.x.clone() - c_im.clone() * self.y.clone(),
            c_re.clone() * self.y.clone() + c_im.clone() * self.x.clone(),
            self.t.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(x: (i64, i64), y: (i64, i64), t: (i64, i64)) -> HPoint<BigRational> {
        HPoint::new(q(x.0, x.1), q(y.0, y.1), q(t.0, t.1))
    }

    #[test]
    fn group_law_examples() {
        // (1,0,0)*(0,1,0) = (1,1,2): the twist contributes 2(1·1 − 0·0).
        let a = p((1, 1), (0, 1), (0, 1));
        let b = p((0, 1), (1, 1), (0, 1));
        assert_eq!(a.mul(&b), p((1, 1), (1, 1), (2, 1)));
        // identity is neutral
        let h = p((3, 7), (-2, 5), (9, 4));
        assert_eq!(HPoint::identity().mul(&h), h);
        assert_eq!(h.mul(&HPoint::identity()), h);
        // inverse cancels
        assert_eq!(h.mul(&h.inv()), HPoint::identity());
        assert_eq!(h.inv().mul(&h), HPoint::identity());
    }

    #[test]
    fn inverse_examples() {
        let h = p((1, 1), (2, 1), (3, 1));
        assert_eq!(h.inv(), p((-1, 1), (-2, 1), (-3, 1)));
        assert_eq!(h.inv().inv(), h);
        assert_eq!(HPoint::<BigRational>::identity().inv(), HPoint::identity());
    }

    #[test]
    fn associativity_spot_checks() {
        let a = p((1, 2), (-1, 3), (2, 5));
        let b = p((-3, 4), (1, 7), (1, 2));
        let c = p((5, 6), (2, 9), (-4, 3));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn gauge4_examples() {
        // ‖(1/2 + i/2, 1/2)‖⁴ = ((1/4+1/4))² + 1/4 = 1/2.
        assert_eq!(p((1, 2), (1, 2), (1, 2)).gauge4(), q(1, 2));
        assert_eq!(HPoint::<BigRational>::identity().gauge4(), q(0, 1));
        assert_eq!(p((3, 1), (0, 1), (0, 1)).gauge4(), q(81, 1));
    }

    #[test]
    fn koranyi_inversion_examples() {
        // ι(1,0,0) = (−1,0,0)
        let h = p((1, 1), (0, 1), (0, 1));
        assert_eq!(h.koranyi_inv().unwrap(), p((-1, 1), (0, 1), (0, 1)));
        // ι is an involution
        let k = p((3, 5), (-1, 2), (7, 4));
        assert_eq!(k.koranyi_inv().unwrap().koranyi_inv().unwrap(), k);
        // ‖ιh‖⁴ = ‖h‖⁻⁴
        let g4 = k.gauge4();
        assert_eq!(k.koranyi_inv().unwrap().gauge4() * g4, q(1, 1));
        // undefined at 0
        assert_eq!(
            HPoint::<BigRational>::identity().koranyi_inv(),
            Err(Error::InversionAtIdentity)
        );
    }

    #[test]
    fn inversion_metric_identity() {
        // d(ιh, ιk)⁴ · ‖h‖⁴ · ‖k‖⁴ = d(h,k)⁴, exactly.
        let h = p((3, 5), (-1, 2), (7, 4));
        let k = p((-2, 3), (5, 7), (-1, 6));
        let lhs = h
            .koranyi_inv()
            .unwrap()
            .dist4(&k.koranyi_inv().unwrap())
            * h.gauge4()
            * k.gauge4();
        assert_eq!(lhs, h.dist4(&k));
    }

    #[test]
    fn left_invariance() {
        let g = p((1, 3), (2, 7), (-5, 2));
        let h = p((3, 5), (-1, 2), (7, 4));
        let k = p((-2, 3), (5, 7), (-1, 6));
        assert_eq!(g.mul(&h).dist4(&g.mul(&k)), h.dist4(&k));
    }

    #[test]
    fn dilation_examples() {
        let h = p((1, 1), (0, 1), (1, 1));
        assert_eq!(h.dilate(&q(2, 1)).unwrap(), p((2, 1), (0, 1), (4, 1)));
        assert_eq!(h.dilate(&q(1, 1)).unwrap(), h);
        assert!(h.dilate(&q(-1, 1)).is_err());
        assert!(h.dilate(&q(0, 1)).is_err());
        // dist scaling: d(δ_r h, δ_r k)⁴ = r⁴ d(h,k)⁴ with r = 3
        let k = p((-2, 3), (5, 7), (-1, 6));
        let r = q(3, 1);
        let scaled = h.dilate(&r).unwrap().dist4(&k.dilate(&r).unwrap());
        assert_eq!(scaled, q(81, 1) * h.dist4(&k));
    }

    #[test]
    fn rotation_is_isometric() {
        // c = 3/5 + 4/5 i is exactly unit: (3/5)² + (4/5)² = 1.
        let (cr, ci) = (q(3, 5), q(4, 5));
        assert_eq!(cr.clone() * cr.clone() + ci.clone() * ci.clone(), q(1, 1));
        let h = p((3, 5), (-1, 2), (7, 4));
        let k = p((-2, 3), (5, 7), (-1, 6));
        let rh = h.rotate(&cr, &ci);
        let rk = k.rotate(&cr, &ci);
        assert_eq!(rh.dist4(&rk), h.dist4(&k));
        assert_eq!(rh.gauge4(), h.gauge4());
    }

    #[test]
    fn float_instantiation_works() {
        let h: HPoint<f64> = HPoint::new(0.3, -0.2, 0.1);
        let k = h.koranyi_inv().unwrap().koranyi_inv().unwrap();
        assert!((h.x - k.x).abs() < 1e-14);
        assert!((h.y - k.y).abs() < 1e-14);
        assert!((h.t - k.t).abs() < 1e-14);
    }
}
