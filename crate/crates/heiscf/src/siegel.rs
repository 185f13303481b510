//! The Siegel model and the 3×3 unitary representation.
//!
//! The Heisenberg group embeds into the boundary of complex hyperbolic
//! space. In *planar Siegel coordinates* a point (z, t) = (x+iy, t) becomes
//!
//! ```text
//! u = z(1+i),    v = |z|² + it
//! ```
//!
//! which satisfies the null constraint |u|² = 2·Re(v), and in
//! *homogeneous coordinates* it is the null vector (1 : u : v) for the
//! Hermitian form
//!
//! ```text
//! ⟨w, w⟩ = |w₁|² − 2·Re(conj(w₀)·w₂),     𝕁 = [[0,0,−1],[0,1,0],[−1,0,0]].
//! ```
//!
//! Group translations act linearly: (z,t) ↦ the lower-triangular matrix
//! with rows (1,0,0), (α,1,0), (β,ᾱ,1) where α = z(1+i), β = |z|²+ti, and
//! the Korányi inversion acts as the matrix 𝕁 itself. All arithmetic here
//! is exact over Gaussian rationals; the geometric float path in
//! [`crate::heis`] never needs matrices.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::heis::HPoint;

/// The Hermitian form |w₁|² − 2·Re(conj(w₀)·w₂) on complex 3-vectors.
///
/// Vectors of norm 0 ("null vectors") are the homogeneous images of
/// Heisenberg points; the value is always real and is returned as such.
pub fn j_norm(c0: &GaussianRational, c1: &GaussianRational, c2: &GaussianRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    c1.modulus_sq() - two * c0.conj().mul(c2).re()
}

/// A point of the null cone in planar Siegel coordinates (u, v) with
/// |u|² = 2·Re(v). The constraint is enforced at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelPoint {
    u: GaussianRational,
    v: GaussianRational,
}

impl SiegelPoint {
    /// Builds (u, v), verifying the null constraint |u|² − 2·Re(v) = 0
    /// exactly.
    pub fn from_uv(u: GaussianRational, v: GaussianRational) -> Result<Self> {
        let two = BigRational::from_integer(BigInt::from(2));
        if u.modulus_sq() != two * v.re() {
            return Err(Error::NullConstraint);
        }
        Ok(Self { u, v })
    }

    /// The origin (0, 0).
    pub fn zero() -> Self {
        Self {
            u: GaussianRational::zero(),
            v: GaussianRational::zero(),
        }
    }

    /// The u coordinate.
    pub fn u(&self) -> &GaussianRational {
        &self.u
    }

    /// The v coordinate.
    pub fn v(&self) -> &GaussianRational {
        &self.v
    }

    /// Fourth power of the gauge in Siegel coordinates: ‖(u,v)‖⁴ = |v|².
    pub fn gauge4(&self) -> BigRational {
        self.v.modulus_sq()
    }

    /// Converts a geometric point: u = z(1+i) = (x−y) + i(x+y),
    /// v = |z|² + it.
    pub fn from_hpoint(h: &HPoint<BigRational>) -> Self {
        let u = GaussianRational::from_rationals(&(h.x.clone() - h.y.clone()), &(h.x.clone() + h.y.clone()));
        let v = GaussianRational::from_rationals(
            &(h.x.clone() * h.x.clone() + h.y.clone() * h.y.clone()),
            &h.t,
        );
        Self { u, v }
    }

    /// Converts back to geometric coordinates: z = u/(1+i), t = Im(v),
    /// i.e. x = (Re u + Im u)/2, y = (Im u − Re u)/2.
    pub fn to_hpoint(&self) -> HPoint<BigRational> {
        let two = BigRational::from_integer(BigInt::from(2));
        let x = (self.u.re() + self.u.im()) / two.clone();
        let y = (self.u.im() - self.u.re()) / two;
        HPoint::new(x, y, self.v.im())
    }

    /// Group product in Siegel coordinates:
    /// (u₁,v₁)·(u₂,v₂) = (u₁+u₂, v₁+v₂+conj(u₁)u₂).
    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            u: self.u.add(&rhs.u),
            v: self.v.add(&rhs.v).add(&self.u.conj().mul(&rhs.u)),
        }
    }

    /// Left quotient s₁⁻¹·s₂ = (u₂−u₁, conj(v₁) − conj(u₁)u₂ + v₂).
    pub fn left_divide(&self, rhs: &Self) -> Self {
        Self {
            u: rhs.u.sub(&self.u),
            v: self.v.conj().sub(&self.u.conj().mul(&rhs.u)).add(&rhs.v),
        }
    }
}

/// A vector (c₀ : c₁ : c₂) of homogeneous coordinates; equality is up to a
/// nonzero complex rescaling.
#[derive(Debug, Clone)]
pub struct ProjVec {
    c: [GaussianRational; 3],
}

impl ProjVec {
    /// Builds (c₀ : c₁ : c₂); at least one coordinate must be nonzero.
    pub fn new(c0: GaussianRational, c1: GaussianRational, c2: GaussianRational) -> Result<Self> {
        if c0.is_zero() && c1.is_zero() && c2.is_zero() {
            return Err(Error::Precondition(
                "homogeneous coordinates must not all vanish".into(),
            ));
        }
        Ok(Self { c: [c0, c1, c2] })
    }

    /// The distinguished point at infinity (0 : 0 : 1).
    pub fn infinity() -> Self {
        Self {
            c: [
                GaussianRational::zero(),
                GaussianRational::zero(),
                GaussianRational::one(),
            ],
        }
    }

    /// The coordinates.
    pub fn coords(&self) -> &[GaussianRational; 3] {
        &self.c
    }

    /// True iff this is the point at infinity (0 : 0 : 1) up to scaling.
    pub fn is_infinity(&self) -> bool {
        self.c[0].is_zero() && self.c[1].is_zero()
    }

    /// Lifts a Siegel point to homogeneous coordinates (1 : u : v).
    pub fn from_siegel(s: &SiegelPoint) -> Self {
        Self {
            c: [GaussianRational::one(), s.u().clone(), s.v().clone()],
        }
    }

    /// Normalizes to planar coordinates (u, v) = (c₁/c₀, c₂/c₀).
    ///
    /// Fails with [`Error::PointAtInfinity`] when c₀ = 0 and with
    /// [`Error::NullConstraint`] when the vector is not null.
    pub fn to_siegel(&self) -> Result<SiegelPoint> {
        if self.c[0].is_zero() {
            return Err(Error::PointAtInfinity);
        }
        let u = self.c[1].div(&self.c[0])?;
        let v = self.c[2].div(&self.c[0])?;
        SiegelPoint::from_uv(u, v)
    }

    /// Projective equality: proportionality of coordinate vectors, tested
    /// exactly through the vanishing of all 2×2 minors.
    pub fn proj_eq(&self, rhs: &Self) -> bool {
        for i in 0..3 {
            for j in (i + 1)..3 {
                let minor = self.c[i].mul(&rhs.c[j]).sub(&self.c[j].mul(&rhs.c[i]));
                if !minor.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The Hermitian norm of the coordinate vector (scale-covariant, so
    /// "null" is projectively well defined).
    pub fn j_norm(&self) -> BigRational {
        j_norm(&self.c[0], &self.c[1], &self.c[2])
    }
}

/// A 3×3 complex matrix acting on homogeneous coordinates; rows × columns,
/// `m[i][j]` is row i, column j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UMatrix {
    pub m: [[GaussianRational; 3]; 3],
}

impl UMatrix {
    /// Builds a matrix from rows.
    pub fn from_rows(rows: [[GaussianRational; 3]; 3]) -> Self {
        Self { m: rows }
    }

    /// The identity matrix.
    pub fn identity() -> Self {
        let o = GaussianRational::one;
        let z = GaussianRational::zero;
        Self::from_rows([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
    }

    /// The matrix 𝕁 = [[0,0,−1],[0,1,0],[−1,0,0]] of the Hermitian form.
    pub fn j_form() -> Self {
        let o = GaussianRational::one;
        let z = GaussianRational::zero;
        let n = || GaussianRational::one().neg();
        Self::from_rows([[z(), z(), n()], [z(), o(), z()], [n(), z(), z()]])
    }

    /// The matrix of the Korányi inversion, which coincides with 𝕁: it
    /// sends (c₀ : c₁ : c₂) to (−c₂ : c₁ : −c₀), i.e. (u,v) ↦ (−u/v, 1/v).
    pub fn inversion() -> Self {
        Self::j_form()
    }

    /// The translation matrix of a geometric point: rows (1,0,0),
    /// (α,1,0), (β,ᾱ,1) with α = z(1+i) and β = |z|² + ti.
    pub fn embed(h: &HPoint<BigRational>) -> Self {
        let s = SiegelPoint::from_hpoint(h);
        let alpha = s.u().clone();
        let beta = s.v().clone();
        let o = GaussianRational::one;
        let z = GaussianRational::zero;
        Self::from_rows([
            [o(), z(), z()],
            [alpha.clone(), o(), z()],
            [beta, alpha.conj(), o()],
        ])
    }

    /// The digit matrix A_γ = 𝕁·embed(γ): rows (−β,−ᾱ,−1), (α,1,0),
    /// (−1,0,0). Products of these drive the continued-fraction recursion.
    pub fn digit_matrix(gamma: &HPoint<BigRational>) -> Self {
        Self::inversion().mul(&Self::embed(gamma))
    }

    /// Matrix product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::identity();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = GaussianRational::zero();
                for k in 0..3 {
                    acc = acc.add(&self.m[i][k].mul(&rhs.m[k][j]));
                }
                out.m[i][j] = acc;
            }
        }
        out
    }

    /// Matrix–vector product on homogeneous coordinates.
    pub fn apply(&self, vec: &ProjVec) -> Result<ProjVec> {
        let c = vec.coords();
        let mut out = [
            GaussianRational::zero(),
            GaussianRational::zero(),
            GaussianRational::zero(),
        ];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = GaussianRational::zero();
            for k in 0..3 {
                acc = acc.add(&self.m[i][k].mul(&c[k]));
            }
            *slot = acc;
        }
        ProjVec::new(out[0].clone(), out[1].clone(), out[2].clone())
    }

    /// Conjugate transpose M†.
    pub fn dagger(&self) -> Self {
        let mut out = self.clone();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[j][i].conj();
            }
        }
        out
    }

    /// Determinant, by cofactor expansion along the first row.
    pub fn det(&self) -> GaussianRational {
        let m = &self.m;
        let c0 = m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1]));
        let c1 = m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]));
        let c2 = m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]));
        m[0][0].mul(&c0).sub(&m[0][1].mul(&c1)).add(&m[0][2].mul(&c2))
    }

    /// Exact test of M†𝕁M = 𝕁.
    pub fn is_unitary(&self) -> bool {
        let j = Self::j_form();
        self.dagger().mul(&j).mul(self) == j
    }

    /// Inverse of a 𝕁-unitary matrix, computed as 𝕁M†𝕁 (no general
    /// inversion needed: M†𝕁M = 𝕁 rearranges to M⁻¹ = 𝕁M†𝕁).
    pub fn u_inverse(&self) -> Result<Self> {
        if !self.is_unitary() {
            return Err(Error::NotUnitary);
        }
        let j = Self::j_form();
        Ok(j.mul(&self.dagger()).mul(&j))
    }

    /// Action on planar Siegel coordinates: with rows aᵢⱼ,
    ///
    /// ```text
    /// (u, v) ↦ ( (a₁₀+a₁₁u+a₁₂v)/(a₀₀+a₀₁u+a₀₂v),
    ///            (a₂₀+a₂₁u+a₂₂v)/(a₀₀+a₀₁u+a₀₂v) )
    /// ```
    ///
    /// (zero-based indices). A vanishing first coordinate signals the
    /// point at infinity rather than producing a value.
    pub fn proj_act(&self, s: &SiegelPoint) -> Result<SiegelPoint> {
        self.apply(&ProjVec::from_siegel(s))?.to_siegel()
    }

    /// Exact test of the middle-column structure shared by all
    /// 𝕁-unitary matrices with determinant d ∈ {±1}:
    ///
    /// ```text
    /// a₀₁ = d·conj(a₁₂a₀₀ − a₁₀a₀₂)
    /// a₁₁ = d·conj(a₂₂a₀₀ − a₂₀a₀₂)
    /// a₂₁ = d·conj(a₂₂a₁₀ − a₂₀a₁₂)
    /// ```
    ///
    /// (zero-based indices; the middle column is the d-weighted conjugate
    /// cross product of the outer columns).
    pub fn has_column_structure(&self) -> bool {
        let d = self.det();
        if !(d == GaussianRational::one() || d == GaussianRational::one().neg()) {
            return false;
        }
        let m = &self.m;
        let checks = [
            (0usize, m[1][2].mul(&m[0][0]).sub(&m[1][0].mul(&m[0][2]))),
            (1usize, m[2][2].mul(&m[0][0]).sub(&m[2][0].mul(&m[0][2]))),
            (2usize, m[2][2].mul(&m[1][0]).sub(&m[2][0].mul(&m[1][2]))),
        ];
        checks
            .iter()
            .all(|(i, cross)| m[*i][1] == d.mul(&cross.conj()))
    }
}
