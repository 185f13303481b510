//! The continued-fraction engine.
//!
//! A point h expands as γ₀ ι γ₁ ι γ₂ ⋯ where γ₀ = \[h\] is the nearest
//! lattice point, h₀ = γ₀⁻¹h, and then γ_{i+1} = \[ι hᵢ\],
//! h_{i+1} = γ_{i+1}⁻¹ ι hᵢ. Rational points terminate; the digits drive a
//! 3×3 matrix recursion whose first column (qₙ, rₙ, pₙ) encodes the
//! convergent value (rₙ/qₙ, pₙ/qₙ) in Siegel coordinates.
//!
//! The recursion is seeded from Q₀ = identity and right-multiplies by the
//! digit matrices A_γ = 𝕁·U(γ), so Qₙ = A_{γ₁}⋯A_{γₙ} with
//!
//! ```text
//! Qₙ = [ qₙ  q̃ₙ  −q_{n−1} ]
//!      [ rₙ  r̃ₙ  −r_{n−1} ]
//!      [ pₙ  p̃ₙ  −p_{n−1} ],      det Qₙ = (−1)ⁿ.
//! ```
//!
//! The direct matrix product is the ground truth; the component recursion
//! is a verified optimization over Gaussian integers. Identities relating
//! the tilde column to the outer columns carry a (−1)ⁿ determinant factor
//! throughout; each one is fixed by hand-checked low-index oracles and
//! enforced in tests.
//!
//! All error quantities are handled in fourth powers (distances) and
//! second powers (Gaussian-integer moduli) so the exact path stays in ℚ.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::{bigint_ratio_f64, gint_conj, gint_norm, GaussianInt, GaussianRational};
use crate::heis::HPoint;
use crate::lattice::{self, DomainKind, LatticePoint};
use crate::siegel::{SiegelPoint, UMatrix};

fn gmul(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    a.clone() * b.clone()
}

fn gadd(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    a.clone() + b.clone()
}

fn gsub(a: &GaussianInt, b: &GaussianInt) -> GaussianInt {
    a.clone() - b.clone()
}

fn gneg(a: &GaussianInt) -> GaussianInt {
    -a.clone()
}

fn gzero() -> GaussianInt {
    Complex::new(BigInt::zero(), BigInt::zero())
}

fn gone() -> GaussianInt {
    Complex::new(BigInt::one(), BigInt::zero())
}

/// Exact ratio of two Gaussian integers as a Gaussian rational.
fn gauss_ratio(num: &GaussianInt, den: &GaussianInt) -> Result<GaussianRational> {
    if den.re.is_zero() && den.im.is_zero() {
        return Err(Error::DivisionByZero);
    }
    GaussianRational::new(gmul(num, &gint_conj(den)), gint_norm(den))
}

/// A digit sequence: the integer part γ₀ (identity when
/// absent) followed by the fractional digits, each a nonzero lattice
/// point, plus a flag recording whether the expansion terminated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSeq {
    pub gamma0: LatticePoint,
    pub digits: Vec<LatticePoint>,
    pub finite: bool,
}

impl DigitSeq {
    /// Number of fractional digits.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    /// True iff there are no fractional digits.
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// An exact expansion: digits plus the full Gauss-map trace. `iterates[i]`
/// is hᵢ (so `iterates` has one more entry than `digits` when the
/// expansion was cut off, and exactly `digits.len()+1` entries always:
/// h₀ through the last computed iterate).
#[derive(Debug, Clone)]
pub struct ExactExpansion {
    pub seq: DigitSeq,
    pub iterates: Vec<HPoint<BigRational>>,
}

impl ExactExpansion {
    /// Siegel coordinates of iterate i.
    pub fn siegel(&self, i: usize) -> SiegelPoint {
        SiegelPoint::from_hpoint(&self.iterates[i])
    }

    /// The v-coordinates v₀ … v_k of the first k+1 iterates.
    pub fn vs(&self, k: usize) -> Vec<GaussianRational> {
        (0..=k).map(|i| self.siegel(i).v().clone()).collect()
    }
}

/// A float expansion: digits, trace, and the index of the first digit
/// whose extraction hit the boundary-ambiguity margin (if any).
#[derive(Debug, Clone)]
pub struct FloatExpansion {
    pub seq: DigitSeq,
    pub iterates: Vec<HPoint<f64>>,
    pub first_ambiguous: Option<usize>,
}

/// Expands a rational point into continued-fraction digits, recording the
/// Gauss-map iterates. Stops when an iterate hits the identity (finite
/// expansion) or after `max_digits`.
pub fn expand(h: &HPoint<BigRational>, kind: DomainKind, max_digits: usize) -> Result<ExactExpansion> {
    let first = lattice::nearest(kind, h);
    let gamma0 = first.digit;
    let mut cur = first.remainder;
    let mut digits = Vec::new();
    let mut iterates = vec![cur.clone()];
    let mut finite = cur.is_identity();
    while !finite && digits.len() < max_digits {
        let inverted = cur.koranyi_inv()?;
        let step = lattice::nearest(kind, &inverted);
        if step.digit.is_identity() {
            return Err(Error::ZeroDigit(digits.len()));
        }
        digits.push(step.digit);
        cur = step.remainder;
        iterates.push(cur.clone());
        finite = cur.is_identity();
    }
    Ok(ExactExpansion {
        seq: DigitSeq {
            gamma0,
            digits,
            finite,
        },
        iterates,
    })
}

/// Float-path expansion. Never fails: a zero digit or non-finite
/// coordinate stops the expansion and is reported through
/// `first_ambiguous`.
pub fn expand_f64(h: &HPoint<f64>, kind: DomainKind, max_digits: usize) -> FloatExpansion {
    let first = lattice::nearest(kind, h);
    let gamma0 = first.digit;
    let mut ambiguous_at = if first.ambiguous { Some(0) } else { None };
    let mut cur = first.remainder;
    let mut digits = Vec::new();
    let mut iterates = vec![cur.clone()];
    let mut finite = cur.is_identity();
    while !finite && digits.len() < max_digits {
        if !(cur.x.is_finite() && cur.y.is_finite() && cur.t.is_finite()) {
            ambiguous_at.get_or_insert(digits.len());
            break;
        }
        let inverted = match cur.koranyi_inv() {
            Ok(p) => p,
            Err(_) => break,
        };
        let step = lattice::nearest(kind, &inverted);
        if step.digit.is_identity() {
            ambiguous_at.get_or_insert(digits.len());
            break;
        }
        if step.ambiguous {
            ambiguous_at.get_or_insert(digits.len() + 1);
        }
        digits.push(step.digit);
        cur = step.remainder;
        iterates.push(cur.clone());
        finite = cur.is_identity();
    }
    FloatExpansion {
        seq: DigitSeq {
            gamma0,
            digits,
            finite,
        },
        iterates,
        first_ambiguous: ambiguous_at,
    }
}

/// Evaluates a finite digit sequence exactly:
/// γ₀ ι γ₁ ι ⋯ ι γₙ, folded from the right.
pub fn reconstruct(d: &DigitSeq) -> Result<HPoint<BigRational>> {
    let gamma0: HPoint<BigRational> = d.gamma0.to_hpoint();
    let mut acc: Option<HPoint<BigRational>> = None;
    for (i, g) in d.digits.iter().enumerate().rev() {
        let gh: HPoint<BigRational> = g.to_hpoint();
        let w = match acc {
            None => gh,
            Some(inner) => {
                if inner.is_identity() {
                    return Err(Error::InversionAtIdentityDuringReconstruct(i + 1));
                }
                gh.mul(&inner.koranyi_inv()?)
            }
        };
        acc = Some(w);
    }
    match acc {
        None => Ok(gamma0),
        Some(inner) => {
            if inner.is_identity() {
                return Err(Error::InversionAtIdentityDuringReconstruct(0));
            }
            Ok(gamma0.mul(&inner.koranyi_inv()?))
        }
    }
}

/// The digit matrix A_γ = 𝕁·U(γ), with rows (−β, −ᾱ, −1), (α, 1, 0),
/// (−1, 0, 0) for the Siegel lift (α, β) of γ.
pub fn a_gamma(g: &LatticePoint) -> UMatrix {
    UMatrix::digit_matrix(&g.to_hpoint())
}

/// The exact inverse of A_γ: rows (0, 0, −1), (0, 1, α), (−1, −ᾱ, −β̄).
pub fn a_gamma_inv(g: &LatticePoint) -> UMatrix {
    let (alpha, beta) = g.siegel_lift();
    let al = GaussianRational::from_gint(alpha);
    let be = GaussianRational::from_gint(beta);
    let z = GaussianRational::zero;
    let o = GaussianRational::one;
    let n = || GaussianRational::one().neg();
    UMatrix::from_rows([
        [z(), z(), n()],
        [z(), o(), al.clone()],
        [n(), al.conj().neg(), be.conj().neg()],
    ])
}

/// The convergent-matrix state after n digits: the columns of
/// Qₙ = A_{γ₁}⋯A_{γₙ} as Gaussian-integer triples. Column 1 is
/// (qₙ, rₙ, pₙ), column 2 the tilde triple, column 3 the negated previous
/// triple (q_{n−1}, r_{n−1}, p_{n−1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentState {
    pub n: usize,
    pub q: GaussianInt,
    pub r: GaussianInt,
    pub p: GaussianInt,
    pub q_tilde: GaussianInt,
    pub r_tilde: GaussianInt,
    pub p_tilde: GaussianInt,
    pub q_prev: GaussianInt,
    pub r_prev: GaussianInt,
    pub p_prev: GaussianInt,
}

impl ConvergentState {
    /// The n = 0 state, Q₀ = identity: (q₀,r₀,p₀) = (1,0,0), tilde
    /// column (0,1,0), previous triple (0,0,−1).
    pub fn initial() -> Self {
        Self {
            n: 0,
            q: gone(),
            r: gzero(),
            p: gzero(),
            q_tilde: gzero(),
            r_tilde: gone(),
            p_tilde: gzero(),
            q_prev: gzero(),
            r_prev: gzero(),
            p_prev: gneg(&gone()),
        }
    }

    /// Right-multiplies by A_γ: column 1 becomes −β·c₁ + α·c₂ + prev,
    /// column 2 becomes −ᾱ·c₁ + c₂, and the previous triple becomes c₁.
    pub fn step(&self, digit: &LatticePoint) -> Self {
        let (alpha, beta) = digit.siegel_lift();
        let nb = gneg(&beta);
        let nac = gneg(&gint_conj(&alpha));
        let new = |c: &GaussianInt, t: &GaussianInt, prev: &GaussianInt| {
            gadd(&gadd(&gmul(&nb, c), &gmul(&alpha, t)), prev)
        };
        let new_tilde = |c: &GaussianInt, t: &GaussianInt| gadd(&gmul(&nac, c), t);
        Self {
            n: self.n + 1,
            q: new(&self.q, &self.q_tilde, &self.q_prev),
            r: new(&self.r, &self.r_tilde, &self.r_prev),
            p: new(&self.p, &self.p_tilde, &self.p_prev),
            q_tilde: new_tilde(&self.q, &self.q_tilde),
            r_tilde: new_tilde(&self.r, &self.r_tilde),
            p_tilde: new_tilde(&self.p, &self.p_tilde),
            q_prev: self.q.clone(),
            r_prev: self.r.clone(),
            p_prev: self.p.clone(),
        }
    }

    /// det Qₙ = (−1)ⁿ.
    pub fn det_sign(&self) -> i32 {
        if self.n % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Assembles the full matrix Qₙ.
    pub fn matrix(&self) -> UMatrix {
        let g = |v: &GaussianInt| GaussianRational::from_gint(v.clone());
        let gn = |v: &GaussianInt| GaussianRational::from_gint(gneg(v));
        UMatrix::from_rows([
            [g(&self.q), g(&self.q_tilde), gn(&self.q_prev)],
            [g(&self.r), g(&self.r_tilde), gn(&self.r_prev)],
            [g(&self.p), g(&self.p_tilde), gn(&self.p_prev)],
        ])
    }

    /// The convergent value (rₙ/qₙ, pₙ/qₙ) in Siegel coordinates; fails
    /// if qₙ = 0 (which cannot happen along a genuine expansion).
    pub fn value(&self) -> Result<SiegelPoint> {
        if self.q.re.is_zero() && self.q.im.is_zero() {
            return Err(Error::Invariant(format!(
                "vanishing convergent denominator q at n = {}",
                self.n
            )));
        }
        SiegelPoint::from_uv(gauss_ratio(&self.r, &self.q)?, gauss_ratio(&self.p, &self.q)?)
    }

    /// The tilde convergent (r̃ₙ/q̃ₙ, p̃ₙ/q̃ₙ) as a raw coordinate pair
    /// (it does not satisfy the null constraint, so it is not a
    /// `SiegelPoint`; it converges to the null cone as n grows).
    pub fn tilde_value(&self) -> Result<(GaussianRational, GaussianRational)> {
        if self.q_tilde.re.is_zero() && self.q_tilde.im.is_zero() {
            return Err(Error::Invariant(format!(
                "vanishing tilde denominator at n = {}",
                self.n
            )));
        }
        Ok((
            gauss_ratio(&self.r_tilde, &self.q_tilde)?,
            gauss_ratio(&self.p_tilde, &self.q_tilde)?,
        ))
    }
}

/// Iterator over convergent states: yields the n = 0 state first, then
/// one state per consumed digit.
pub struct ConvergentIter<I> {
    next_state: Option<ConvergentState>,
    digits: I,
}

impl<I: Iterator<Item = LatticePoint>> Iterator for ConvergentIter<I> {
    type Item = ConvergentState;

    fn next(&mut self) -> Option<ConvergentState> {
        let cur = self.next_state.take()?;
        self.next_state = self.digits.next().map(|d| cur.step(&d));
        Some(cur)
    }
}

/// Streams Q₀, Q₁, …, Qₙ over the given digits.
pub fn convergents<I: IntoIterator<Item = LatticePoint>>(digits: I) -> ConvergentIter<I::IntoIter> {
    ConvergentIter {
        next_state: Some(ConvergentState::initial()),
        digits: digits.into_iter(),
    }
}

/// All convergent states for a digit slice (index n has consumed n digits).
pub fn convergent_states(digits: &[LatticePoint]) -> Vec<ConvergentState> {
    convergents(digits.iter().cloned()).collect()
}

/// The full approximant γ₀·(value of Qₙ) in geometric coordinates.
pub fn convergent_value(gamma0: &LatticePoint, state: &ConvergentState) -> Result<HPoint<BigRational>> {
    let s = state.value()?;
    Ok(gamma0.to_hpoint::<BigRational>().mul(&s.to_hpoint()))
}

/// A Gaussian-integer lift (q : r : p) of a rational Siegel point
/// (r/q, p/q); q ≠ 0 and the lifted vector is null.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSiegel {
    pub q: GaussianInt,
    pub r: GaussianInt,
    pub p: GaussianInt,
}

impl RationalSiegel {
    /// Builds a lift, checking q ≠ 0 and the null condition
    /// |r|² = 2·Re(conj(q)·p) exactly.
    pub fn new(q: GaussianInt, r: GaussianInt, p: GaussianInt) -> Result<Self> {
        if q.re.is_zero() && q.im.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let cross = gmul(&gint_conj(&q), &p);
        if gint_norm(&r) != BigInt::from(2) * cross.re {
            return Err(Error::NullConstraint);
        }
        Ok(Self { q, r, p })
    }

    /// Lifts a rational point: clears denominators of its Siegel
    /// coordinates by their least common multiple.
    pub fn from_hpoint(h: &HPoint<BigRational>) -> Self {
        let s = SiegelPoint::from_hpoint(h);
        let (nu, du) = (s.u().numerator().clone(), s.u().denominator().clone());
        let (nv, dv) = (s.v().numerator().clone(), s.v().denominator().clone());
        let l = du.lcm(&dv);
        let q = Complex::new(l.clone(), BigInt::zero());
        let r = nu * (&l / du);
        let p = nv * (&l / dv);
        Self { q, r, p }
    }

    /// The Siegel point (r/q, p/q).
    pub fn value(&self) -> Result<SiegelPoint> {
        SiegelPoint::from_uv(gauss_ratio(&self.r, &self.q)?, gauss_ratio(&self.p, &self.q)?)
    }

    /// The geometric point.
    pub fn to_hpoint(&self) -> Result<HPoint<BigRational>> {
        Ok(self.value()?.to_hpoint())
    }
}

/// An expansion computed entirely in Gaussian integers, with the trace of
/// denominator norms gint_norm(q⁽ⁱ⁾) for i = 0, …, n.
#[derive(Debug, Clone)]
pub struct ExactIntegerExpansion {
    pub seq: DigitSeq,
    pub denominator_norms: Vec<BigInt>,
}

/// Expands a rational Siegel point by the integer-vector algorithm: each
/// step applies A_γ⁻¹ to (q, r, p), keeping everything in ℤ\[i\]. The
/// leading entry of the new vector is the negated trailing entry of the
/// old one (q⁽ⁱ⁺¹⁾ = −p⁽ⁱ⁾), and its norm at least halves each step, so
/// termination within log₂ gint_norm(q) digits is guaranteed.
/// Digit of the point (r/q, p/q) in the integer chain. Coordinates are
/// computed with exact big-integer numerators and a single scaled f64
/// division each (absolute error ≲ 1e-15, far below the float ambiguity
/// margin), so the float digit is trusted unless the extraction is
/// flagged ambiguous or a coordinate is too large for the margin test to
/// be reliable — then the exact rational path decides.
fn chain_digit(
    q: &GaussianInt,
    r: &GaussianInt,
    p: &GaussianInt,
    kind: DomainKind,
) -> Result<LatticePoint> {
    // boundary distances are measured against unit spacing; beyond this
    // magnitude the f64 fractional part is coarser than the margin
    const SAFE_MAGNITUDE: f64 = 1048576.0; // 2^20
    let qc = gint_conj(q);
    let u_num = gmul(r, &qc);
    let v_num = gmul(p, &qc);
    let den = gint_norm(q);
    let two_den = BigInt::from(2) * &den;
    let x = bigint_ratio_f64(&(&u_num.re + &u_num.im), &two_den);
    let y = bigint_ratio_f64(&(&u_num.im - &u_num.re), &two_den);
    let t = bigint_ratio_f64(&v_num.im, &den);
    if x.abs() <= SAFE_MAGNITUDE && y.abs() <= SAFE_MAGNITUDE && t.abs() <= SAFE_MAGNITUDE {
        let near = lattice::nearest(kind, &HPoint::new(x, y, t));
        if !near.ambiguous {
            return Ok(near.digit);
        }
    }
    let value = RationalSiegel::new(q.clone(), r.clone(), p.clone())?;
    Ok(lattice::nearest(kind, &value.to_hpoint()?).digit)
}

pub fn expand_exact(
    s: &RationalSiegel,
    kind: DomainKind,
    max_digits: usize,
) -> Result<ExactIntegerExpansion> {
    let h = s.to_hpoint()?;
    let first = lattice::nearest(kind, &h);
    let gamma0 = first.digit;

    // Reduce by γ₀ via the lower-triangular U(γ₀⁻¹): q is untouched.
    let (a0, b0) = gamma0.inv().siegel_lift();
    let mut q = s.q.clone();
    let mut r = gadd(&gmul(&a0, &s.q), &s.r);
    let mut p = gadd(&gadd(&gmul(&b0, &s.q), &gmul(&gint_conj(&a0), &s.r)), &s.p);

    let mut digits = Vec::new();
    let mut norms = vec![gint_norm(&q)];
    let mut finite = true;
    // Safety cap from the guaranteed halving of gint_norm(q).
    let max_steps = norms[0].bits() as usize + 2;
    loop {
        if r.re.is_zero() && r.im.is_zero() && p.re.is_zero() && p.im.is_zero() {
            break; // iterate is the group identity: finite expansion done
        }
        if digits.len() >= max_digits {
            finite = false;
            break;
        }
        if digits.len() > max_steps {
            return Err(Error::Invariant(
                "integer expansion exceeded its termination bound".into(),
            ));
        }
        // Apply the inversion: (q, r, p) ↦ (−p, r, −q), then find the digit
        // of the corresponding point and apply U(γ⁻¹).
        let (iq, ir, ip) = (gneg(&p), r.clone(), gneg(&q));
        let digit = chain_digit(&iq, &ir, &ip, kind)?;
        if digit.is_identity() {
            return Err(Error::ZeroDigit(digits.len()));
        }
        let (a, b) = digit.inv().siegel_lift();
        let new_q = iq.clone();
        let new_r = gadd(&gmul(&a, &iq), &ir);
        let new_p = gadd(&gadd(&gmul(&b, &iq), &gmul(&gint_conj(&a), &ir)), &ip);
        // Structural identity of the chain: the new denominator is the
        // negated trailing entry of the previous vector.
        debug_assert_eq!(new_q, gneg(&p));
        q = new_q;
        r = new_r;
        p = new_p;
        digits.push(digit);
        norms.push(gint_norm(&q));
    }
    Ok(ExactIntegerExpansion {
        seq: DigitSeq {
            gamma0,
            digits,
            finite,
        },
        denominator_norms: norms,
    })
}

/// An exact error certificate for the n-digit convergent of an expansion:
/// the distance to the target is computed both directly and through the
/// product formula dist⁴·gint_norm(qₙ) = ∏ᵢ₌₀ⁿ |vᵢ|², and bounded by the
/// geometric tail (1/2)^{n+1}.
#[derive(Debug, Clone)]
pub struct ErrorCertificate {
    pub n: usize,
    pub dist4: BigRational,
    pub product_over_norm: BigRational,
    pub bound4: BigRational,
}

/// Computes the certificate for the convergent after n digits of an exact
/// expansion (n ≤ number of digits).
pub fn approx_error(exp: &ExactExpansion, n: usize) -> Result<ErrorCertificate> {
    if n > exp.seq.len() {
        return Err(Error::Precondition(format!(
            "requested convergent {n} of an expansion with {} digits",
            exp.seq.len()
        )));
    }
    let state = convergents(exp.seq.digits[..n].iter().cloned())
        .last()
        .expect("stream is nonempty");
    let value = state.value()?.to_hpoint();
    let h0 = &exp.iterates[0];
    let dist4 = value.dist4(h0);
    let norm_q = BigRational::from_integer(gint_norm(&state.q));
    let mut product = BigRational::one();
    for i in 0..=n {
        product *= exp.siegel(i).v().modulus_sq();
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut bound4 = BigRational::one();
    for _ in 0..=n {
        bound4 *= half.clone();
    }
    bound4 /= norm_q.clone();
    Ok(ErrorCertificate {
        n,
        dist4,
        product_over_norm: product / norm_q,
        bound4,
    })
}

/// Residual of the product identity
/// conj(pₙ) − conj(rₙ)·u + conj(qₙ)·v − (−1)ⁿ·∏ᵢ₌₀ⁿ vᵢ,
/// where (u, v) are the Siegel coordinates of h₀ and vᵢ those of the
/// iterates. Zero exactly on rational expansions.
pub fn cool_residual(state: &ConvergentState, exp: &ExactExpansion) -> GaussianRational {
    let s0 = exp.siegel(0);
    let g = |v: &GaussianInt| GaussianRational::from_gint(gint_conj(v));
    let lhs = g(&state.p)
        .sub(&g(&state.r).mul(s0.u()))
        .add(&g(&state.q).mul(s0.v()));
    let mut prod = GaussianRational::one();
    for i in 0..=state.n {
        prod = prod.mul(exp.siegel(i).v());
    }
    if state.n % 2 == 1 {
        prod = prod.neg();
    }
    lhs.sub(&prod)
}

/// Checks the exact vector identity
/// Qₙ·(1, uₙ, vₙ)ᵀ = (−1)ⁿ/(v₀⋯v_{n−1}) · (1, u₀, v₀)ᵀ.
pub fn fracqn_holds(state: &ConvergentState, exp: &ExactExpansion) -> Result<bool> {
    let n = state.n;
    let sn = exp.siegel(n);
    let s0 = exp.siegel(0);
    let m = state.matrix();
    let one = GaussianRational::one();
    let input = [one.clone(), sn.u().clone(), sn.v().clone()];
    let mut out = [
        GaussianRational::zero(),
        GaussianRational::zero(),
        GaussianRational::zero(),
    ];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc = GaussianRational::zero();
        for k in 0..3 {
            acc = acc.add(&m.m[i][k].mul(&input[k]));
        }
        *slot = acc;
    }
    let mut denom = GaussianRational::one();
    for i in 0..n {
        denom = denom.mul(exp.siegel(i).v());
    }
    let mut scale = denom.inv()?;
    if n % 2 == 1 {
        scale = scale.neg();
    }
    let expect = [
        scale.clone(),
        scale.mul(s0.u()),
        scale.mul(s0.v()),
    ];
    Ok(out == expect)
}

/// Residual of the classical denominator formula at index n:
///
/// ```text
/// v − conj(rₙ/qₙ)·u + conj(pₙ/qₙ) + 1/(conj(qₙ)·(q_{n+1} + q̃_{n+1}·u_{n+1} − qₙ·v_{n+1}))
/// ```
///
/// with (u, v) the Siegel coordinates of h₀ and (u_{n+1}, v_{n+1}) those
/// of iterate n+1. Zero exactly on rational expansions (the right-hand
/// side carries a global minus sign, fixed against the n = 0 oracle).
pub fn classical_residual(
    state: &ConvergentState,
    next: &ConvergentState,
    exp: &ExactExpansion,
) -> Result<GaussianRational> {
    let s0 = exp.siegel(0);
    let snext = exp.siegel(next.n);
    let qn = GaussianRational::from_gint(state.q.clone());
    let lhs = s0
        .v()
        .sub(&gauss_ratio(&state.r, &state.q)?.conj().mul(s0.u()))
        .add(&gauss_ratio(&state.p, &state.q)?.conj());
    let paren = GaussianRational::from_gint(next.q.clone())
        .add(&GaussianRational::from_gint(next.q_tilde.clone()).mul(snext.u()))
        .sub(&qn.mul(snext.v()));
    let rhs = qn.conj().mul(&paren).inv()?;
    Ok(lhs.add(&rhs))
}

/// Checks that the unitary inverse of Qₙ has the closed form
///
/// ```text
/// Qₙ⁻¹ = [ −conj(p_{n−1})   conj(r_{n−1})   −conj(q_{n−1}) ]
///        [ −conj(p̃ₙ)        conj(r̃ₙ)        −conj(q̃ₙ)      ]
///        [  conj(pₙ)        −conj(rₙ)         conj(qₙ)      ]
/// ```
pub fn qn2_structure_holds(state: &ConvergentState) -> Result<bool> {
    let inv = state.matrix().u_inverse()?;
    let c = |v: &GaussianInt| GaussianRational::from_gint(gint_conj(v));
    let cn = |v: &GaussianInt| GaussianRational::from_gint(gneg(&gint_conj(v)));
    let expect = UMatrix::from_rows([
        [cn(&state.p_prev), c(&state.r_prev), cn(&state.q_prev)],
        [cn(&state.p_tilde), c(&state.r_tilde), cn(&state.q_tilde)],
        [c(&state.p), cn(&state.r), c(&state.q)],
    ]);
    Ok(inv == expect)
}

/// Checks the determinant-corrected expressions of the tilde column as
/// conjugated 2×2 minors of the outer columns:
///
/// ```text
/// q̃ₙ = (−1)ⁿ·conj(rₙq_{n−1} − qₙr_{n−1})
/// r̃ₙ = (−1)ⁿ·conj(pₙq_{n−1} − qₙp_{n−1})
/// p̃ₙ = (−1)ⁿ·conj(pₙr_{n−1} − rₙp_{n−1})
/// ```
pub fn tilde_entry_identities_hold(state: &ConvergentState) -> bool {
    let signed = |v: GaussianInt| if state.n % 2 == 1 { gneg(&v) } else { v };
    let minor = |a: &GaussianInt, b: &GaussianInt, c: &GaussianInt, d: &GaussianInt| {
        signed(gint_conj(&gsub(&gmul(a, b), &gmul(c, d))))
    };
    state.q_tilde == minor(&state.r, &state.q_prev, &state.q, &state.r_prev)
        && state.r_tilde == minor(&state.p, &state.q_prev, &state.q, &state.p_prev)
        && state.p_tilde == minor(&state.p, &state.r_prev, &state.r, &state.p_prev)
}

/// Checks the determinant-corrected difference identities between the
/// tilde convergent and the plain convergent:
///
/// ```text
/// r̃ₙqₙ − q̃ₙrₙ = (−1)ⁿ·conj(qₙ)
/// p̃ₙqₙ − q̃ₙpₙ = (−1)ⁿ·conj(rₙ)
/// p̃ₙrₙ − r̃ₙpₙ = (−1)ⁿ·conj(pₙ)
/// ```
pub fn tildefrac_identities_hold(state: &ConvergentState) -> bool {
    let signed = |v: GaussianInt| if state.n % 2 == 1 { gneg(&v) } else { v };
    gsub(&gmul(&state.r_tilde, &state.q), &gmul(&state.q_tilde, &state.r))
        == signed(gint_conj(&state.q))
        && gsub(&gmul(&state.p_tilde, &state.q), &gmul(&state.q_tilde, &state.p))
            == signed(gint_conj(&state.r))
        && gsub(&gmul(&state.p_tilde, &state.r), &gmul(&state.r_tilde, &state.p))
            == signed(gint_conj(&state.p))
}

/// The exact norm identity gint_norm(q̃ₙ) = −2·Re(qₙ·conj(q_{n−1})).
pub fn tilde_norm_identity_holds(state: &ConvergentState) -> bool {
    let cross = gmul(&state.q, &gint_conj(&state.q_prev));
    gint_norm(&state.q_tilde) == BigInt::from(-2) * cross.re
}

/// The squared-form norm bounds on the tilde denominator:
/// lower 4·gint_norm(qₙ) ≤ gint_norm(q̃ₙ)², upper
/// gint_norm(q̃ₙ)² ≤ 4·gint_norm(qₙ)·gint_norm(q_{n−1}).
/// Returned as (lower_holds, upper_holds). The upper bound is a
/// Cauchy–Schwarz consequence of the norm identity and always holds; the
/// lower bound fails for some genuine digits (e.g. a single digit
/// (1, 1, 1) gives 16 < 20) and is reported honestly.
pub fn tilde_bounds_hold(state: &ConvergentState) -> (bool, bool) {
    let tilde2 = {
        let t = gint_norm(&state.q_tilde);
        &t * &t
    };
    let four = BigInt::from(4);
    let lower = &four * gint_norm(&state.q) <= tilde2;
    let upper = tilde2 <= four * gint_norm(&state.q) * gint_norm(&state.q_prev);
    (lower, upper)
}

/// Result of a certified evaluation of an infinite digit stream with all
/// gauges ≥ 3: the n-digit approximant and an exact upper bound for
/// dist⁴ to the limit.
#[derive(Debug, Clone)]
pub struct PringsheimResult {
    pub steps: usize,
    pub approximant: SiegelPoint,
    pub bound4: BigRational,
}

/// The exact rational lower bound 21591/10000 < 3 − 2^{−1/4} used to make
/// the contraction bound computable in ℚ.
fn contraction_base() -> BigRational {
    BigRational::new(BigInt::from(21591), BigInt::from(10000))
}

/// The certified tail bound for n consumed digits:
/// dist⁴(limit, approximantₙ) ≤ 8·(3−2^{−1/4})^{−8n} < 8·(21591/10000)^{−8n}
/// (diameter ≤ 2·rad and ratio (3−2^{−1/4})^{−2} per digit, both raised to
/// the 4th power).
pub fn pringsheim_bound4(n: usize) -> BigRational {
    let base = contraction_base();
    let mut acc = BigRational::from_integer(BigInt::from(8));
    for _ in 0..(8 * n) {
        acc /= base.clone();
    }
    acc
}

/// Evaluates 𝕂{γ₁ γ₂ …} for a digit stream with every gauge ≥ 3
/// (strictly > 3 when `strict`), until the certified dist⁴ bound drops
/// below `tol4`. Fails on a digit violating the gauge precondition or if
/// the stream ends before certification.
pub fn pringsheim_eval(
    digits: impl Iterator<Item = LatticePoint>,
    tol4: &BigRational,
    strict: bool,
) -> Result<PringsheimResult> {
    let threshold = BigInt::from(81);
    let mut state = ConvergentState::initial();
    for digit in digits {
        let g4 = digit.gauge4();
        let ok = if strict {
            g4 > threshold
        } else {
            g4 >= threshold
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "digit {digit} has gauge⁴ = {g4}, below the Pringsheim threshold"
            )));
        }
        state = state.step(&digit);
        if pringsheim_bound4(state.n) < *tol4 {
            return Ok(PringsheimResult {
                steps: state.n,
                approximant: state.value()?,
                bound4: pringsheim_bound4(state.n),
            });
        }
    }
    Err(Error::Certification(
        "digit stream ended before the requested tolerance was certified".into(),
    ))
}

/// Length of the common digit prefix of two expansions (counting γ₀ as
/// index 0; returns 0 when the integer parts differ, and 1 + the number
/// of matching fractional digits otherwise).
pub fn certified_prefix(a: &DigitSeq, b: &DigitSeq) -> usize {
    if a.gamma0 != b.gamma0 {
        return 0;
    }
    let mut count = 1;
    for (x, y) in a.digits.iter().zip(b.digits.iter()) {
        if x != y {
            break;
        }
        count += 1;
    }
    count
}
