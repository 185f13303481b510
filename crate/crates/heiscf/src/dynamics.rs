//! Gauss-map dynamics: orbits with certified prefixes, invariant-measure
//! histograms, digit statistics, cylinder-set probes, and Monte-Carlo
//! volume/Jacobian estimators for the inversion.
//!
//! Orbit policy: a seed with irrational coordinates is evaluated as a
//! dyadic rational at p and at 2p bits and both are expanded exactly;
//! the common digit prefix is *certified* (doubling rule). Past the
//! certified prefix the orbit may continue at machine precision — such
//! digits carry no certificate and are flagged as a statistical tail,
//! which is the honest regime for measure-theoretic sampling.

use std::collections::HashMap;

use num_rational::BigRational;
use rand::Rng;

use crate::bigcomplex::{Constants, SeedSpec};
use crate::cf::{self, certified_prefix, convergents};
use crate::error::{Error, Result};
use crate::gaussian::{gint_norm, log2_bigint, rational_to_f64};
use crate::heis::HPoint;
use crate::lattice::{self, DigitScalar, DomainKind, LatticePoint};

/// Half-width of the axis-aligned box that encloses the Dirichlet domain
/// for binning purposes (the domain radius is 2^(−1/4) ≈ 0.841, and its
/// height satisfies |t| ≤ 2^(−1/2) ≈ 0.707, so 0.85 covers both).
pub const DIRICHLET_BOX_HALF_WIDTH: f64 = 0.85;

/// Smallest precision at which irrational seeds are evaluated. The
/// arbitrary-precision backend rounds precision up to whole 64-bit
/// words, so below this the p-bit and 2p-bit evaluations could coincide
/// and the doubling rule would certify nothing.
pub const MIN_SEED_BITS: usize = 64;

/// Converts an exact point to machine precision.
pub fn to_f64_point(h: &HPoint<BigRational>) -> HPoint<f64> {
    HPoint::new(
        rational_to_f64(&h.x),
        rational_to_f64(&h.y),
        rational_to_f64(&h.t),
    )
}

/// True when the machine-precision continuation point still reads as a
/// fundamental-domain point (its nearest lattice digit is the identity).
fn tail_start_in_domain(h: &HPoint<f64>, kind: DomainKind) -> bool {
    lattice::nearest(kind, h).digit.is_identity()
}

/// One step of the Gauss map T(h) = γ⁻¹·ιh with γ = [ιh], returning
/// (digit, next iterate, ambiguity flag). The caller is responsible for
/// `h` lying in the chosen fundamental domain; the identity has no image
/// (the orbit terminates there) and produces an error.
pub fn gauss_step<S: DigitScalar>(
    h: &HPoint<S>,
    kind: DomainKind,
) -> Result<(LatticePoint, HPoint<S>, bool)> {
    let inverted = h.koranyi_inv()?;
    let near = lattice::nearest(kind, &inverted);
    Ok((near.digit, near.remainder, near.ambiguous))
}

/// The exact, certified head of an orbit.
struct OrbitCore {
    gamma0: LatticePoint,
    gamma0_certified: bool,
    digits: Vec<LatticePoint>,
    iterates: Vec<HPoint<BigRational>>,
    terminated: bool,
    exact: bool,
}

fn orbit_core(
    spec: &SeedSpec,
    bits: usize,
    kind: DomainKind,
    max_digits: usize,
    constants: &mut Constants,
) -> Result<OrbitCore> {
    if spec.is_exact() {
        let h = spec.eval(constants, bits);
        let e = cf::expand(&h, kind, max_digits)?;
        return Ok(OrbitCore {
            gamma0: e.seq.gamma0,
            gamma0_certified: true,
            terminated: e.seq.finite,
            digits: e.seq.digits,
            iterates: e.iterates,
            exact: true,
        });
    }
    let bits = bits.max(MIN_SEED_BITS);
    // A p-bit seed certifies roughly 0.27 digits per bit (the seed
    // perturbation is amplified by the denominator growth rate), so
    // expanding the dyadic stand-ins past p digits can never certify
    // more and would only waste time.
    let cap = max_digits.min(bits);
    let e1 = cf::expand(&spec.eval(constants, bits), kind, cap)?;
    let e2 = cf::expand(&spec.eval(constants, 2 * bits), kind, cap)?;
    let cp = certified_prefix(&e1.seq, &e2.seq);
    let gamma0_certified = cp > 0;
    let certified_digits = cp.saturating_sub(1);
    let mut digits = e1.seq.digits;
    digits.truncate(certified_digits);
    let mut iterates = e1.iterates;
    iterates.truncate(certified_digits + 1);
    Ok(OrbitCore {
        gamma0: e1.seq.gamma0,
        gamma0_certified,
        digits,
        iterates,
        // a truncated dyadic stand-in never certifies termination of the
        // underlying irrational seed
        terminated: false,
        exact: false,
    })
}

/// A recorded Gauss-map orbit: integer part, digit stream, iterates at
/// machine precision, and the certification bookkeeping.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub kind: DomainKind,
    /// Seed evaluation precision in bits (relevant for irrational seeds).
    pub bits: usize,
    pub gamma0: LatticePoint,
    /// `digits[i]` is the digit extracted from `iterates[i]`.
    pub digits: Vec<LatticePoint>,
    /// h₀, h₁, …; one more entry than `digits` unless the run was cut off.
    pub iterates: Vec<HPoint<f64>>,
    /// gauge4 of each iterate.
    pub gauge4s: Vec<f64>,
    /// Number of leading digits certified by the doubling rule (for exact
    /// rational seeds, all digits are certified).
    pub certified_digits: usize,
    pub gamma0_certified: bool,
    /// 0-based index of the first digit whose extraction was numerically
    /// ambiguous, if any (always inside the statistical tail).
    pub first_ambiguous: Option<usize>,
    /// The orbit reached the identity (finite expansion).
    pub terminated: bool,
    /// Digits past the certified prefix were produced at machine
    /// precision.
    pub statistical_tail: bool,
}

/// Runs a Gauss-map orbit for up to `steps` digits under the default
/// policy: exact certified prefix first, machine-precision continuation
/// afterwards. An exact rational seed expands exactly all the way (no
/// tail); the identity seed yields an empty, terminated orbit.
pub fn orbit(
    spec: &SeedSpec,
    bits: usize,
    kind: DomainKind,
    steps: usize,
    constants: &mut Constants,
) -> Result<OrbitRecord> {
    let bits = if spec.is_exact() {
        bits
    } else {
        bits.max(MIN_SEED_BITS)
    };
    let core = orbit_core(spec, bits, kind, steps, constants)?;
    let certified_digits = core.digits.len();
    let mut digits = core.digits;
    let mut iterates: Vec<HPoint<f64>> = core.iterates.iter().map(to_f64_point).collect();
    let terminated = core.terminated;
    let mut first_ambiguous = None;
    let mut statistical_tail = false;
    if !core.exact && !terminated && digits.len() < steps {
        let start = iterates.last().expect("orbit head is nonempty").clone();
        if start.is_identity() || !tail_start_in_domain(&start, kind) {
            // the continuation point degenerated numerically; stop
            // rather than record garbage
            first_ambiguous = Some(digits.len());
        } else {
            let tail = cf::expand_f64(&start, kind, steps - digits.len());
            statistical_tail = !tail.seq.digits.is_empty();
            if let Some(a) = tail.first_ambiguous {
                first_ambiguous = Some(digits.len() + a.saturating_sub(1));
            }
            if tail.seq.finite {
                // a machine-precision iterate landing exactly on the
                // identity is a numerical artifact, never a certified
                // termination of an irrational orbit
                first_ambiguous.get_or_insert(digits.len() + tail.seq.digits.len());
            }
            digits.extend(tail.seq.digits);
            iterates.extend(tail.iterates.into_iter().skip(1));
        }
    }
    let gauge4s = iterates.iter().map(|h| h.gauge4()).collect();
    Ok(OrbitRecord {
        kind,
        bits,
        gamma0: core.gamma0,
        digits,
        iterates,
        gauge4s,
        certified_digits,
        gamma0_certified: core.gamma0_certified,
        first_ambiguous,
        terminated,
        statistical_tail,
    })
}

/// A count histogram over a fundamental-domain box.
///
/// The binning box is the domain itself for the cube (coordinates in
/// [−1/2, 1/2)) and the enclosing box [−0.85, 0.85]³ for the Dirichlet
/// domain, whose corner bins simply never receive counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram3D {
    pub kind: DomainKind,
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    /// Row-major counts, index = (ix · ny + iy) · nt + it.
    pub counts: Vec<u64>,
    /// Samples recorded into bins.
    pub total: u64,
    /// Samples that fell outside the binning box (numerical boundary
    /// cases only).
    pub rejected: u64,
}

impl Histogram3D {
    /// Creates an empty histogram; every grid dimension must be ≥ 2.
    pub fn new(kind: DomainKind, nx: usize, ny: usize, nt: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || nt < 2 {
            return Err(Error::Precondition(format!(
                "histogram grid must be at least 2 in each dimension, got {nx}x{ny}x{nt}"
            )));
        }
        Ok(Self {
            kind,
            nx,
            ny,
            nt,
            counts: vec![0; nx * ny * nt],
            total: 0,
            rejected: 0,
        })
    }

    /// Binning box for a domain kind, as (lo, hi) per coordinate.
    pub fn bounds(kind: DomainKind) -> [(f64, f64); 3] {
        match kind {
            DomainKind::Cube => [(-0.5, 0.5); 3],
            DomainKind::Dirichlet => {
                [(-DIRICHLET_BOX_HALF_WIDTH, DIRICHLET_BOX_HALF_WIDTH); 3]
            }
        }
    }

    /// Flat bin index of a point, or `None` outside the box.
    pub fn bin_index(&self, h: &HPoint<f64>) -> Option<usize> {
        let b = Self::bounds(self.kind);
        let axis = |v: f64, (lo, hi): (f64, f64), n: usize| -> Option<usize> {
            let u = (v - lo) / (hi - lo);
            if u >= 0.0 && u < 1.0 {
                Some(((u * n as f64) as usize).min(n - 1))
            } else {
                None
            }
        };
        let ix = axis(h.x, b[0], self.nx)?;
        let iy = axis(h.y, b[1], self.ny)?;
        let it = axis(h.t, b[2], self.nt)?;
        Some((ix * self.ny + iy) * self.nt + it)
    }

    /// Records one sample.
    pub fn record(&mut self, h: &HPoint<f64>) {
        match self.bin_index(h) {
            Some(i) => {
                self.counts[i] += 1;
                self.total += 1;
            }
            None => self.rejected += 1,
        }
    }

    /// Adds another histogram of identical shape bin by bin.
    pub fn merge(&mut self, other: &Histogram3D) -> Result<()> {
        if self.kind != other.kind
            || self.nx != other.nx
            || self.ny != other.ny
            || self.nt != other.nt
        {
            return Err(Error::Precondition(
                "histogram merge requires identical domain kind and grid".into(),
            ));
        }
        for (c, o) in self.counts.iter_mut().zip(other.counts.iter()) {
            *c += o;
        }
        self.total += other.total;
        self.rejected += other.rejected;
        Ok(())
    }

    /// Number of bins with at least one count.
    pub fn nonzero_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Total-variation distance between the two normalized histograms.
    pub fn total_variation(&self, other: &Histogram3D) -> Result<f64> {
        if self.kind != other.kind
            || self.nx != other.nx
            || self.ny != other.ny
            || self.nt != other.nt
        {
            return Err(Error::Precondition(
                "total variation requires identical domain kind and grid".into(),
            ));
        }
        if self.total == 0 || other.total == 0 {
            return Err(Error::Precondition(
                "total variation of an empty histogram".into(),
            ));
        }
        let (ta, tb) = (self.total as f64, other.total as f64);
        let sum: f64 = self
            .counts
            .iter()
            .zip(other.counts.iter())
            .map(|(&a, &b)| (a as f64 / ta - b as f64 / tb).abs())
            .sum();
        Ok(sum / 2.0)
    }
}

/// Bookkeeping from a histogram accumulation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    pub certified_digits: usize,
    pub gamma0_certified: bool,
    pub recorded: u64,
    pub terminated: bool,
    pub statistical_tail: bool,
}

/// Accumulates the Birkhoff (empirical) measure of an orbit into a
/// histogram: iterates h₀ … h_{steps−1} are binned without being stored,
/// so million-step runs stay in constant memory. Deterministic: the same
/// inputs produce identical counts.
pub fn birkhoff_histogram(
    spec: &SeedSpec,
    bits: usize,
    kind: DomainKind,
    steps: usize,
    grid: (usize, usize, usize),
    constants: &mut Constants,
) -> Result<(Histogram3D, OrbitSummary)> {
    let mut hist = Histogram3D::new(kind, grid.0, grid.1, grid.2)?;
    let core = orbit_core(spec, bits, kind, steps, constants)?;
    let mut recorded = 0u64;
    for h in core.iterates.iter() {
        if recorded as usize >= steps {
            break;
        }
        hist.record(&to_f64_point(h));
        recorded += 1;
    }
    let terminated = core.terminated;
    let mut statistical_tail = false;
    if !core.exact && !terminated {
        let mut cur = to_f64_point(core.iterates.last().expect("orbit head is nonempty"));
        while (recorded as usize) < steps {
            if !(cur.x.is_finite() && cur.y.is_finite() && cur.t.is_finite()) {
                break;
            }
            if cur.is_identity() {
                // a float-exact identity is a numerical artifact, not a
                // certified termination; stop accumulating
                break;
            }
            let (digit, next, _ambiguous) = match gauss_step(&cur, kind) {
                Ok(s) => s,
                Err(_) => break,
            };
            if digit.is_identity() {
                break;
            }
            statistical_tail = true;
            hist.record(&next);
            recorded += 1;
            cur = next;
        }
    }
    Ok((
        hist,
        OrbitSummary {
            certified_digits: core.digits.len(),
            gamma0_certified: core.gamma0_certified,
            recorded,
            terminated,
            statistical_tail,
        },
    ))
}

/// Certified digit stream of a seed, computed on the integer-vector
/// chain (no per-operation rational reduction), which is the efficient
/// route at high precision when iterates are not needed. Returns the
/// integer part, the certified digits, and whether the integer part is
/// itself certified (exact seeds are certified in full).
pub fn certified_digits(
    spec: &SeedSpec,
    bits: usize,
    kind: DomainKind,
    max_digits: usize,
    constants: &mut Constants,
) -> Result<(LatticePoint, Vec<LatticePoint>, bool)> {
    if spec.is_exact() {
        let s = cf::RationalSiegel::from_hpoint(&spec.eval(constants, bits));
        let e = cf::expand_exact(&s, kind, max_digits)?;
        return Ok((e.seq.gamma0, e.seq.digits, true));
    }
    let bits = bits.max(MIN_SEED_BITS);
    let cap = max_digits.min(bits);
    let e1 = cf::expand_exact(
        &cf::RationalSiegel::from_hpoint(&spec.eval(constants, bits)),
        kind,
        cap,
    )?;
    let e2 = cf::expand_exact(
        &cf::RationalSiegel::from_hpoint(&spec.eval(constants, 2 * bits)),
        kind,
        cap,
    )?;
    let cp = certified_prefix(&e1.seq, &e2.seq);
    let gamma0_certified = cp > 0;
    let mut digits = e1.seq.digits;
    digits.truncate(cp.saturating_sub(1));
    Ok((e1.seq.gamma0, digits, gamma0_certified))
}

/// Digit-frequency table and denominator growth of an orbit.
#[derive(Debug, Clone)]
pub struct DigitStats {
    pub total: u64,
    /// Digit counts sorted by frequency (descending), ties broken
    /// lexicographically.
    pub counts: Vec<(LatticePoint, u64)>,
    /// `levy[k]` = ln(gint_norm(q_{k+1}))/(k+1): the normalized log-norm
    /// of the convergent denominator after k+1 digits. The analog of the
    /// classical Lévy constant is its limit; it is reported, never
    /// asserted.
    pub levy: Vec<f64>,
}

impl DigitStats {
    /// Relative frequency of each digit, in the order of `counts`.
    pub fn frequencies(&self) -> Vec<(LatticePoint, f64)> {
        self.counts
            .iter()
            .map(|(d, c)| (d.clone(), *c as f64 / self.total as f64))
            .collect()
    }
}

/// Computes digit frequencies and the denominator-growth sequence.
pub fn digit_stats(digits: &[LatticePoint]) -> DigitStats {
    let mut map: HashMap<LatticePoint, u64> = HashMap::new();
    for d in digits {
        *map.entry(d.clone()).or_insert(0) += 1;
    }
    let mut counts: Vec<(LatticePoint, u64)> = map.into_iter().collect();
    counts.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then_with(|| a.0.x.cmp(&b.0.x))
            .then_with(|| a.0.y.cmp(&b.0.y))
            .then_with(|| a.0.t.cmp(&b.0.t))
    });
    let levy = convergents(digits.iter().cloned())
        .filter(|state| state.n > 0)
        .map(|state| {
            let norm = gint_norm(&state.q);
            log2_bigint(&norm) * std::f64::consts::LN_2 / state.n as f64
        })
        .collect();
    DigitStats {
        total: digits.len() as u64,
        counts,
        levy,
    }
}

/// (max − min)/|mean| over a slice; 0 for slices shorter than 2.
pub fn relative_fluctuation(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    if mean == 0.0 {
        return f64::INFINITY;
    }
    (max - min) / mean.abs()
}

/// Applies the inverse branch named by a digit word:
/// h ↦ ι(γ₁ · ι(γ₂ · … ι(γₙ · h) … )).
///
/// At the identity this evaluates the finite continued fraction of the
/// word; on a fundamental-domain point it lands inside the cylinder set
/// of the word (up to boundary conventions). Fails if an intermediate
/// point hits the identity (inversion undefined).
pub fn cylinder_map<S: DigitScalar>(
    word: &[LatticePoint],
    h: &HPoint<S>,
) -> Result<HPoint<S>> {
    let mut acc = h.clone();
    for gamma in word.iter().rev() {
        acc = gamma.to_hpoint::<S>().mul(&acc).koranyi_inv()?;
    }
    Ok(acc)
}

/// Empirical probe of the cylinder set of a digit word.
#[derive(Debug, Clone)]
pub struct CylinderProbe {
    pub word_len: usize,
    /// Box samples attempted.
    pub requested_samples: usize,
    /// Samples that landed in the fundamental domain.
    pub domain_samples: usize,
    /// Domain samples whose branch image landed back in the domain
    /// (empirical members of the cylinder).
    pub kept: usize,
    /// Largest pairwise dist⁴ among (up to 512) branch images; 0 with
    /// fewer than two images.
    pub diameter4: f64,
    /// Grid cells (over the domain box) containing at least one domain
    /// sample.
    pub feasible_cells: usize,
    /// Feasible cells containing a sample whose branch image stayed in
    /// the domain.
    pub covered_cells: usize,
    pub total_cells: usize,
    /// All feasible cells covered — an empirical indication (never a
    /// proof) that the restricted Gauss map sends the cylinder onto the
    /// whole domain.
    pub empirically_full: bool,
}

/// Samples the domain, pushes each point through the inverse branch of
/// the word, and reports image diameter and empirical fullness.
pub fn cylinder_probe<R: Rng + ?Sized>(
    word: &[LatticePoint],
    kind: DomainKind,
    samples: usize,
    grid: usize,
    rng: &mut R,
) -> Result<CylinderProbe> {
    if word.is_empty() {
        return Err(Error::Precondition("empty cylinder word".into()));
    }
    if grid == 0 || samples == 0 {
        return Err(Error::Precondition(
            "cylinder probe needs a positive grid and sample count".into(),
        ));
    }
    let bounds = Histogram3D::bounds(kind);
    let cell_of = |h: &HPoint<f64>| -> Option<usize> {
        let axis = |v: f64, (lo, hi): (f64, f64)| -> Option<usize> {
            let u = (v - lo) / (hi - lo);
            if u >= 0.0 && u < 1.0 {
                Some(((u * grid as f64) as usize).min(grid - 1))
            } else {
                None
            }
        };
        let ix = axis(h.x, bounds[0])?;
        let iy = axis(h.y, bounds[1])?;
        let it = axis(h.t, bounds[2])?;
        Some((ix * grid + iy) * grid + it)
    };
    let total_cells = grid * grid * grid;
    let mut feasible = vec![false; total_cells];
    let mut covered = vec![false; total_cells];
    let mut domain_samples = 0usize;
    let mut kept = 0usize;
    let mut images: Vec<HPoint<f64>> = Vec::new();
    for _ in 0..samples {
        let h = HPoint::new(
            rng.gen_range(bounds[0].0..bounds[0].1),
            rng.gen_range(bounds[1].0..bounds[1].1),
            rng.gen_range(bounds[2].0..bounds[2].1),
        );
        if !lattice::in_domain(kind, &h) {
            continue;
        }
        domain_samples += 1;
        let cell = cell_of(&h);
        if let Some(c) = cell {
            feasible[c] = true;
        }
        let image = match cylinder_map(word, &h) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if !(image.x.is_finite() && image.y.is_finite() && image.t.is_finite()) {
            continue;
        }
        if !lattice::in_domain(kind, &image) {
            continue;
        }
        kept += 1;
        if let Some(c) = cell {
            covered[c] = true;
        }
        if images.len() < 512 {
            images.push(image);
        }
    }
    let mut diameter4 = 0.0f64;
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            diameter4 = diameter4.max(images[i].dist4(&images[j]));
        }
    }
    let feasible_cells = feasible.iter().filter(|&&b| b).count();
    let covered_cells = covered.iter().filter(|&&b| b).count();
    Ok(CylinderProbe {
        word_len: word.len(),
        requested_samples: samples,
        domain_samples,
        kept,
        diameter4,
        feasible_cells,
        covered_cells,
        total_cells,
        empirically_full: kept > 0 && covered_cells == feasible_cells,
    })
}

/// Draws a point uniformly (w.r.t. Haar = Lebesgue measure) from the
/// gauge ball of radius `r` at the identity, by rejection from the
/// enclosing box [−r, r]² × [−r², r²].
pub fn sample_ball<R: Rng + ?Sized>(rng: &mut R, r: f64) -> HPoint<f64> {
    let r2 = r * r;
    let r4 = r2 * r2;
    loop {
        let h = HPoint::new(
            rng.gen_range(-r..r),
            rng.gen_range(-r..r),
            rng.gen_range(-r2..r2),
        );
        if h.gauge4() <= r4 {
            return h;
        }
    }
}

/// Monte-Carlo counts for the gauge-ball scaling law.
#[derive(Debug, Clone, Copy)]
pub struct BallScaling {
    pub samples: usize,
    /// Box samples with gauge⁴ ≤ r⁴.
    pub count_r: usize,
    /// Box samples with gauge⁴ ≤ 1.
    pub count_unit: usize,
}

impl BallScaling {
    /// Estimated vol(B(0,r))/vol(B(0,1)); the exact value is r⁴.
    pub fn ratio(&self) -> f64 {
        self.count_r as f64 / self.count_unit as f64
    }

    /// Estimated fraction of the box [−1,1]²×[−1,1] inside the unit
    /// ball; the exact value is (π²/2)/8.
    pub fn unit_fraction(&self) -> f64 {
        self.count_unit as f64 / self.samples as f64
    }
}

/// Samples the box [−1,1]² × [−1,1] and counts hits of B(0,r) and
/// B(0,1); the count ratio estimates the r⁴ volume-scaling law.
pub fn ball_scaling<R: Rng + ?Sized>(r: f64, samples: usize, rng: &mut R) -> Result<BallScaling> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Precondition(format!(
            "ball scaling requires 0 < r ≤ 1, got {r}"
        )));
    }
    let r4 = r.powi(4);
    let mut count_r = 0usize;
    let mut count_unit = 0usize;
    for _ in 0..samples {
        let h = HPoint::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let g = h.gauge4();
        if g <= 1.0 {
            count_unit += 1;
            if g <= r4 {
                count_r += 1;
            }
        }
    }
    Ok(BallScaling {
        samples,
        count_r,
        count_unit,
    })
}

/// Monte-Carlo estimate of the volume distortion of the inversion at a
/// point.
#[derive(Debug, Clone, Copy)]
pub struct JacobianEstimate {
    pub estimate: f64,
    /// The exact Jacobian gauge4(h)⁻².
    pub expected: f64,
    pub hits: usize,
    pub samples: usize,
}

impl JacobianEstimate {
    pub fn relative_error(&self) -> f64 {
        (self.estimate - self.expected).abs() / self.expected
    }
}

/// Estimates the Jacobian of the inversion at `h` by mapping a small
/// gauge ball: with ε = ‖h‖/100, the image ι(B(h,ε)) is contained in
/// B(ιh, R) for R = ε/(‖h‖(‖h‖−ε)) by the distortion identity, so its
/// volume — and hence the Jacobian — follows from the hit fraction of
/// uniform samples of B(ιh, R) pulled back through ι.
pub fn jacobian_estimate<R: Rng + ?Sized>(
    h: &HPoint<f64>,
    samples: usize,
    rng: &mut R,
) -> Result<JacobianEstimate> {
    if samples == 0 {
        return Err(Error::Precondition("jacobian estimate needs samples".into()));
    }
    let gauge4 = h.gauge4();
    if !(gauge4 > 0.0) {
        return Err(Error::Precondition(
            "jacobian estimate undefined at the identity".into(),
        ));
    }
    let norm = gauge4.powf(0.25);
    let eps = norm / 100.0;
    let radius = eps / (norm * (norm - eps));
    let inv = h.koranyi_inv()?;
    let eps4 = eps.powi(4);
    let mut hits = 0usize;
    for _ in 0..samples {
        let w = sample_ball(rng, radius);
        let k = inv.mul(&w);
        let back = match k.koranyi_inv() {
            Ok(p) => p,
            Err(_) => continue,
        };
        if h.dist4(&back) <= eps4 {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64 * (radius / eps).powi(4);
    Ok(JacobianEstimate {
        estimate,
        expected: 1.0 / (gauge4 * gauge4),
        hits,
        samples,
    })
}
