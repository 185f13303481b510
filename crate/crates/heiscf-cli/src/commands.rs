//! Implementations of the eight subcommands.

use crate::args::*;
use crate::digitfile::{lattice_to_triple, CertificateJson, DigitsFile};
use crate::errors::{io_ctx, CliError, CliResult};
use crate::manifest::RunManifest;
use crate::points::{
    parse_exact_point, parse_lattice, parse_rational, parse_seed, parse_word, rational_str,
    seed_str,
};
use heiscf::bigcomplex::Constants;
use heiscf::cf::{self, RationalSiegel};
use heiscf::dynamics::{self, Histogram3D};
use heiscf::gaussian::{rational_to_f64, GaussianRational};
use heiscf::lattice::{self, DomainKind, LatticePoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

fn write_text(path: &Path, body: &str) -> CliResult<()> {
    io_ctx(std::fs::write(path, body), path)
}

fn make_certificates(exp: &cf::ExactExpansion) -> CliResult<Vec<CertificateJson>> {
    let mut out = Vec::with_capacity(exp.seq.len() + 1);
    for n in 0..=exp.seq.len() {
        let cert = cf::approx_error(exp, n)?;
        out.push(CertificateJson {
            n,
            dist4: rational_str(&cert.dist4),
            product_over_norm: rational_str(&cert.product_over_norm),
            bound4: rational_str(&cert.bound4),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------

pub fn cmd_expand(args: &ExpandArgs) -> CliResult<()> {
    let spec = parse_seed(&args.point)?;
    let kind = args.domain.kind();
    let mut constants = Constants::new()?;
    let manifest = RunManifest::new("expand")
        .param("point", seed_str(&spec))
        .param("domain", args.domain)
        .param("max_digits", args.max_digits)
        .param("bits", args.bits)
        .output(&args.out);

    let mut file = if spec.is_exact() {
        let h = spec.eval(&mut constants, args.bits);
        let exp = cf::expand(&h, kind, args.max_digits)?;
        let chain = cf::expand_exact(&RationalSiegel::from_hpoint(&h), kind, args.max_digits)?;
        if chain.seq != exp.seq {
            return Err(CliError::Invariant(
                "integer-chain and geometric expansions disagree".into(),
            ));
        }
        let mut f = DigitsFile::from_seq(
            &exp.seq,
            if exp.seq.finite { "finite" } else { "digit-limit" },
        )?;
        f.denominator_norms = chain.denominator_norms.iter().map(|n| n.to_string()).collect();
        f.certificates = make_certificates(&exp)?;
        f
    } else {
        let (gamma0, digits, gamma0_certified) =
            dynamics::certified_digits(&spec, args.bits, kind, args.max_digits, &mut constants)?;
        if !gamma0_certified {
            return Err(CliError::Certification(format!(
                "the integer part could not be certified at {} bits; raise --bits",
                args.bits
            )));
        }
        let seq = cf::DigitSeq {
            gamma0,
            digits,
            finite: false,
        };
        DigitsFile::from_seq(&seq, "certified-prefix")?
    };
    file.manifest = Some(manifest.clone());
    file.write(&args.out)?;
    manifest.write(&args.manifest_out)?;
    println!(
        "γ₀ = ({}, {}, {}), {} fractional digits, termination: {}",
        file.gamma0[0],
        file.gamma0[1],
        file.gamma0[2],
        file.digits.len(),
        file.termination
    );
    println!(
        "wrote {} and {}",
        args.out.display(),
        args.manifest_out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// reconstruct
// ---------------------------------------------------------------------------

pub fn cmd_reconstruct(args: &ReconstructArgs) -> CliResult<()> {
    let file = DigitsFile::read(&args.digits)?;
    let seq = file.to_seq()?;
    let h = cf::reconstruct(&seq)?;
    println!("x = {}", rational_str(&h.x));
    println!("y = {}", rational_str(&h.y));
    println!("t = {}", rational_str(&h.t));
    if seq.finite {
        println!("exact");
    } else {
        println!("approximant (the digit file does not record a finite expansion)");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Report {
    rows: Vec<(String, bool, String)>,
}

impl Report {
    fn new() -> Self {
        Report { rows: Vec::new() }
    }

    fn add(&mut self, name: &str, ok: bool, detail: String) {
        self.rows.push((name.to_string(), ok, detail));
    }

    /// Prints the table; returns the first failing row, if any.
    fn print(&self) -> Option<&(String, bool, String)> {
        let width = self.rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        for (name, ok, detail) in &self.rows {
            let tag = if *ok { "PASS" } else { "FAIL" };
            println!("{tag}  {name:<width$}  {detail}");
        }
        self.rows.iter().find(|r| !r.1)
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let file = DigitsFile::read(&args.digits)?;
    let seq = file.to_seq()?;
    // the run's domain: explicit flag, else the file's manifest, else cube
    let kind = match (&args.domain, &file.manifest) {
        (Some(d), _) => d.kind(),
        (None, Some(m)) => match m.parameters.get("domain").map(String::as_str) {
            Some("dirichlet") => DomainKind::Dirichlet,
            _ => DomainKind::Cube,
        },
        (None, None) => DomainKind::Cube,
    };

    let mut report = Report::new();

    // matrix invariants of the digit word
    let states = cf::convergent_states(&seq.digits);
    let mut unitary_ok = true;
    let mut det_ok = true;
    let mut q_ok = true;
    for st in &states {
        if !st.matrix().is_unitary() {
            unitary_ok = false;
        }
        let want = GaussianRational::from_i64(st.det_sign() as i64, 0);
        if !st.matrix().det().sub(&want).is_zero() {
            det_ok = false;
        }
        if st.q.re.is_zero() && st.q.im.is_zero() {
            q_ok = false;
        }
    }
    let n_states = states.len();
    report.add(
        "convergent matrices are J-unitary",
        unitary_ok,
        format!("{n_states} states"),
    );
    report.add(
        "determinant equals (-1)^n",
        det_ok,
        format!("{n_states} states"),
    );
    report.add(
        "convergent denominators nonzero",
        q_ok,
        format!("{n_states} states"),
    );

    if let Some(pstr) = &args.point {
        let h = parse_exact_point(pstr)?;
        let exp = cf::expand(&h, kind, seq.digits.len() + 1)?;
        if seq.finite {
            let back = cf::reconstruct(&seq)?;
            report.add(
                "round-trip: reconstruct(digits) = point",
                back == h,
                if back == h {
                    "exact".into()
                } else {
                    format!(
                        "reconstructed ({}, {}, {})",
                        rational_str(&back.x),
                        rational_str(&back.y),
                        rational_str(&back.t)
                    )
                },
            );
        }
        let mut agree = exp.seq.gamma0 == seq.gamma0;
        let mut first_diff = if agree { None } else { Some(0usize) };
        for (i, d) in seq.digits.iter().enumerate() {
            if exp.seq.digits.get(i) != Some(d) {
                agree = false;
                first_diff = Some(i + 1);
                break;
            }
        }
        report.add(
            "digits match the point's expansion",
            agree,
            match first_diff {
                None => format!("{} digits", seq.digits.len()),
                Some(i) => format!("first difference at position {i}"),
            },
        );
        if agree {
            let mut product_ok = true;
            let mut bound_ok = true;
            let mut residual_ok = true;
            let mut recorded_ok = true;
            for (n, st) in states.iter().enumerate() {
                let cert = cf::approx_error(&exp, n)?;
                if cert.dist4 != cert.product_over_norm {
                    product_ok = false;
                }
                if cert.dist4 > cert.bound4 {
                    bound_ok = false;
                }
                if !cf::cool_residual(st, &exp).is_zero() {
                    residual_ok = false;
                }
                if let Some(rec) = file.certificates.get(n) {
                    if rec.n != n
                        || rec.dist4 != rational_str(&cert.dist4)
                        || rec.product_over_norm != rational_str(&cert.product_over_norm)
                        || rec.bound4 != rational_str(&cert.bound4)
                    {
                        recorded_ok = false;
                    }
                }
            }
            report.add(
                "error formula dist4 = product/norm",
                product_ok,
                format!("{n_states} certificates"),
            );
            report.add(
                "geometric bound dist4 <= (1/2)^(n+1)",
                bound_ok,
                format!("{n_states} certificates"),
            );
            report.add(
                "product-identity residuals vanish",
                residual_ok,
                format!("{n_states} states"),
            );
            if !file.certificates.is_empty() {
                report.add(
                    "recorded certificates match recomputation",
                    recorded_ok,
                    format!("{} recorded", file.certificates.len()),
                );
            }
        }
    }

    let failed = report.print();

    // a stream whose digits all have gauge^4 >= 81 carries a certified
    // geometric tail bound; report it per digit
    if !seq.digits.is_empty() && seq.digits.iter().all(|g| g.gauge4() >= BigInt::from(81)) {
        println!("contracting stream (every digit gauge ≥ 3): certified tail bounds");
        let shown = seq.digits.len().min(20);
        for n in 1..=shown {
            let b = cf::pringsheim_bound4(n);
            println!(
                "  n = {n:>3}: dist⁴(limit, approximant) ≤ {:.6e}  ({})",
                rational_to_f64(&b),
                rational_str(&b)
            );
        }
        if shown < seq.digits.len() {
            println!("  … ({} digits total)", seq.digits.len());
        }
    }

    match failed {
        None => Ok(()),
        Some((name, _, detail)) => Err(CliError::Certification(format!(
            "verification failed: {name} ({detail})"
        ))),
    }
}

// ---------------------------------------------------------------------------
// pringsheim
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PringsheimJson {
    format_version: u32,
    library_version: String,
    manifest: RunManifest,
    steps: usize,
    gamma0: [i128; 3],
    x: String,
    y: String,
    t: String,
    x_approx: f64,
    y_approx: f64,
    t_approx: f64,
    bound4: String,
    bound4_approx: f64,
}

pub fn cmd_pringsheim(args: &PringsheimArgs) -> CliResult<()> {
    let (gamma0, digits) = match (&args.digits, &args.constant) {
        (Some(path), None) => {
            let file = DigitsFile::read(path)?;
            let seq = file.to_seq()?;
            (seq.gamma0, seq.digits)
        }
        (None, Some(c)) => {
            let g = parse_lattice(c)?;
            (LatticePoint::identity(), vec![g; args.steps])
        }
        _ => {
            return Err(CliError::Parse(
                "provide exactly one of --digits <file> or --constant <x,y,t>".into(),
            ))
        }
    };
    let tol4 = parse_rational(&args.tol4)?;
    if !tol4.is_positive() {
        return Err(CliError::Parse("--tol4 must be a positive rational".into()));
    }
    let manifest = RunManifest::new("pringsheim")
        .param(
            "stream",
            match &args.digits {
                Some(p) => p.display().to_string(),
                None => format!("constant {}", args.constant.clone().unwrap_or_default()),
            },
        )
        .param("steps_available", digits.len())
        .param("tol4", rational_str(&tol4))
        .param("strict", args.strict);

    let result = cf::pringsheim_eval(digits.iter().cloned(), &tol4, args.strict)?;
    let frac = result.approximant.to_hpoint();
    let value = gamma0.to_hpoint::<BigRational>().mul(&frac);
    println!(
        "certified after {} digits: dist⁴(limit, approximant) ≤ {:.6e}",
        result.steps,
        rational_to_f64(&result.bound4)
    );
    println!(
        "approximant: x = {} ≈ {}",
        rational_str(&value.x),
        rational_to_f64(&value.x)
    );
    println!(
        "             y = {} ≈ {}",
        rational_str(&value.y),
        rational_to_f64(&value.y)
    );
    println!(
        "             t = {} ≈ {}",
        rational_str(&value.t),
        rational_to_f64(&value.t)
    );
    if let Some(out) = &args.out {
        let json = PringsheimJson {
            format_version: crate::manifest::FORMAT_VERSION,
            library_version: heiscf::VERSION.to_string(),
            manifest: manifest.clone().output(out),
            steps: result.steps,
            gamma0: lattice_to_triple(&gamma0)?,
            x: rational_str(&value.x),
            y: rational_str(&value.y),
            t: rational_str(&value.t),
            x_approx: rational_to_f64(&value.x),
            y_approx: rational_to_f64(&value.y),
            t_approx: rational_to_f64(&value.t),
            bound4: rational_str(&result.bound4),
            bound4_approx: rational_to_f64(&result.bound4),
        };
        write_text(
            out,
            &(serde_json::to_string_pretty(&json).expect("serializes") + "\n"),
        )?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// orbit
// ---------------------------------------------------------------------------

pub fn cmd_orbit(args: &OrbitArgs) -> CliResult<()> {
    if args.steps == 0 {
        return Err(CliError::Parse("--steps must be at least 1".into()));
    }
    let spec = parse_seed(&args.seed)?;
    let kind = args.domain.kind();
    let mut constants = Constants::new()?;
    let manifest = RunManifest::new("orbit")
        .param("seed", seed_str(&spec))
        .param("domain", args.domain)
        .param("steps", args.steps)
        .param("bits", args.bits)
        .output(&args.out);
    let rec = dynamics::orbit(&spec, args.bits, kind, args.steps, &mut constants)?;

    let mut csv = String::new();
    let _ = writeln!(csv, "# manifest: {}", manifest.to_line());
    let _ = writeln!(csv, "n,x,y,t,digit_x,digit_y,digit_t,gauge4");
    for (n, h) in rec.iterates.iter().enumerate() {
        let digit = if n == 0 {
            ",,".to_string()
        } else {
            let g = &rec.digits[n - 1];
            format!("{},{},{}", g.x, g.y, g.t)
        };
        let _ = writeln!(csv, "{n},{},{},{},{digit},{}", h.x, h.y, h.t, rec.gauge4s[n]);
    }
    write_text(&args.out, &csv)?;
    manifest.write(&args.manifest_out)?;

    println!(
        "γ₀ = {}, {} digits ({} certified), {} iterates recorded",
        rec.gamma0,
        rec.digits.len(),
        rec.certified_digits,
        rec.iterates.len()
    );
    if rec.terminated {
        println!("orbit terminated (finite expansion)");
    }
    if rec.statistical_tail {
        println!(
            "statistical tail beyond the certified prefix (machine precision); \
             first ambiguous digit: {}",
            rec.first_ambiguous
                .map(|i| i.to_string())
                .unwrap_or_else(|| "none".into())
        );
    }
    println!(
        "wrote {} and {}",
        args.out.display(),
        args.manifest_out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

fn parse_grid(s: &str) -> CliResult<(usize, usize, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!(
            "grid {s:?} must be three comma-separated sizes"
        )));
    }
    let dim = |p: &str| -> CliResult<usize> {
        let v: usize = p
            .trim()
            .parse()
            .map_err(|e| CliError::Parse(format!("grid size {p:?}: {e}")))?;
        if v == 0 {
            return Err(CliError::Parse("grid sizes must be at least 1".into()));
        }
        Ok(v)
    };
    Ok((dim(parts[0])?, dim(parts[1])?, dim(parts[2])?))
}

/// Sums internal-resolution counts down to the requested grid. The
/// internal grid doubles any axis of size 1, so the factor per axis is 1
/// or 2 and the coarsening is exact.
fn coarsen(h: &Histogram3D, grid: (usize, usize, usize)) -> Vec<u64> {
    let (gx, gy, gt) = grid;
    let (fx, fy, ft) = (h.nx / gx, h.ny / gy, h.nt / gt);
    let mut out = vec![0u64; gx * gy * gt];
    for ix in 0..h.nx {
        for iy in 0..h.ny {
            for it in 0..h.nt {
                let dst = ((ix / fx) * gy + iy / fy) * gt + it / ft;
                out[dst] += h.counts[(ix * h.ny + iy) * h.nt + it];
            }
        }
    }
    out
}

fn total_variation(a: &[u64], ta: u64, b: &[u64], tb: u64) -> f64 {
    if ta == 0 || tb == 0 {
        return 1.0;
    }
    0.5 * a
        .iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x as f64 / ta as f64 - y as f64 / tb as f64).abs())
        .sum::<f64>()
}

#[derive(Serialize)]
struct MeasureSummary {
    format_version: u32,
    library_version: String,
    manifest: RunManifest,
    domain: String,
    grid: [usize; 3],
    steps: usize,
    total: u64,
    recorded: u64,
    rejected: u64,
    certified_prefix: usize,
    gamma0_certified: bool,
    statistical_tail: bool,
    terminated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_variation: Option<f64>,
}

pub fn cmd_measure(args: &MeasureArgs) -> CliResult<()> {
    if args.steps == 0 {
        return Err(CliError::Parse("--steps must be at least 1".into()));
    }
    let spec = parse_seed(&args.seed)?;
    let kind = args.domain.kind();
    let grid = parse_grid(&args.grid)?;
    let internal = (grid.0.max(2), grid.1.max(2), grid.2.max(2));
    let mut constants = Constants::new()?;
    let mut manifest = RunManifest::new("measure")
        .param("seed", seed_str(&spec))
        .param("domain", args.domain)
        .param("steps", args.steps)
        .param("bits", args.bits)
        .param("grid", format!("{},{},{}", grid.0, grid.1, grid.2))
        .param("stability", args.stability)
        .output(&args.out)
        .output(&args.summary);
    if args.stability {
        manifest = manifest.param("seed2", &args.seed2);
    }

    let (hist, summary) =
        dynamics::birkhoff_histogram(&spec, args.bits, kind, args.steps, internal, &mut constants)?;
    let counts = coarsen(&hist, grid);

    let mut tv = None;
    if args.stability {
        let spec2 = parse_seed(&args.seed2)?;
        let (hist2, _) = dynamics::birkhoff_histogram(
            &spec2,
            args.bits,
            kind,
            args.steps,
            internal,
            &mut constants,
        )?;
        let counts2 = coarsen(&hist2, grid);
        tv = Some(total_variation(&counts, hist.total, &counts2, hist2.total));
    }

    let mut csv = String::new();
    let _ = writeln!(csv, "# manifest: {}", manifest.to_line());
    let _ = writeln!(csv, "ix,iy,it,count");
    for ix in 0..grid.0 {
        for iy in 0..grid.1 {
            for it in 0..grid.2 {
                let _ = writeln!(csv, "{ix},{iy},{it},{}", counts[(ix * grid.1 + iy) * grid.2 + it]);
            }
        }
    }
    write_text(&args.out, &csv)?;

    let summary_json = MeasureSummary {
        format_version: crate::manifest::FORMAT_VERSION,
        library_version: heiscf::VERSION.to_string(),
        manifest: manifest.clone(),
        domain: args.domain.to_string(),
        grid: [grid.0, grid.1, grid.2],
        steps: args.steps,
        total: hist.total,
        recorded: summary.recorded,
        rejected: hist.rejected,
        certified_prefix: summary.certified_digits,
        gamma0_certified: summary.gamma0_certified,
        statistical_tail: summary.statistical_tail,
        terminated: summary.terminated,
        seed2: args.stability.then(|| args.seed2.clone()),
        total_variation: tv,
    };
    write_text(
        &args.summary,
        &(serde_json::to_string_pretty(&summary_json).expect("serializes") + "\n"),
    )?;
    manifest.write(&args.manifest_out)?;

    println!(
        "{} iterates binned over {}×{}×{} ({} rejected), certified prefix {} digits",
        hist.total, grid.0, grid.1, grid.2, hist.rejected, summary.certified_digits
    );
    if let Some(tv) = tv {
        println!("total-variation distance against second seed: {tv:.4}");
    }
    println!(
        "wrote {}, {} and {}",
        args.out.display(),
        args.summary.display(),
        args.manifest_out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FrequencyJson {
    digit: [i128; 3],
    count: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct StatsJson {
    format_version: u32,
    library_version: String,
    manifest: RunManifest,
    gamma0: [i128; 3],
    digits_total: u64,
    certified: bool,
    frequencies: Vec<FrequencyJson>,
    /// ln(gint_norm(qₙ))/n per digit — the denominator growth rate
    /// (reported, never asserted against a closed-form value).
    growth_rate: Vec<f64>,
    growth_rate_last: Option<f64>,
    growth_fluctuation_last_half: Option<f64>,
}

pub fn cmd_stats(args: &StatsArgs) -> CliResult<()> {
    let spec = parse_seed(&args.seed)?;
    let kind = args.domain.kind();
    let mut constants = Constants::new()?;
    let manifest = RunManifest::new("stats")
        .param("seed", seed_str(&spec))
        .param("domain", args.domain)
        .param("bits", args.bits)
        .param("max_digits", args.max_digits);
    let (gamma0, digits, gamma0_certified) =
        dynamics::certified_digits(&spec, args.bits, kind, args.max_digits, &mut constants)?;
    if !gamma0_certified {
        return Err(CliError::Certification(format!(
            "the integer part could not be certified at {} bits; raise --bits",
            args.bits
        )));
    }
    let stats = dynamics::digit_stats(&digits);
    let freqs = stats.frequencies();

    println!(
        "γ₀ = {}, {} certified digits, {} distinct",
        gamma0,
        stats.total,
        stats.counts.len()
    );
    println!("top digits:");
    for ((digit, count), (_, freq)) in stats.counts.iter().zip(freqs.iter()).take(args.top) {
        let label = digit.to_string();
        println!("  {label:<16} count {count:>8}  frequency {freq:.5}");
    }
    let last = stats.levy.last().copied();
    let fluct = if stats.levy.len() >= 2 {
        Some(dynamics::relative_fluctuation(
            &stats.levy[stats.levy.len() / 2..],
        ))
    } else {
        None
    };
    if let Some(l) = last {
        println!(
            "denominator growth rate ln‖qₙ‖²/n = {l:.5}{}",
            match fluct {
                Some(f) => format!(" (relative fluctuation over the last half: {f:.4})"),
                None => String::new(),
            }
        );
    }

    if let Some(out) = &args.out {
        let json = StatsJson {
            format_version: crate::manifest::FORMAT_VERSION,
            library_version: heiscf::VERSION.to_string(),
            manifest: manifest.clone().output(out),
            gamma0: lattice_to_triple(&gamma0)?,
            digits_total: stats.total,
            certified: true,
            frequencies: freqs
                .iter()
                .zip(stats.counts.iter())
                .map(|((digit, frequency), (_, count))| {
                    Ok(FrequencyJson {
                        digit: lattice_to_triple(digit)?,
                        count: *count,
                        frequency: *frequency,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?,
            growth_rate: stats.levy.clone(),
            growth_rate_last: last,
            growth_fluctuation_last_half: fluct,
        };
        write_text(
            out,
            &(serde_json::to_string_pretty(&json).expect("serializes") + "\n"),
        )?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// cylinder
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CylinderJson {
    format_version: u32,
    library_version: String,
    manifest: RunManifest,
    word: Vec<[i128; 3]>,
    samples_requested: usize,
    samples_in_domain: usize,
    samples_kept: usize,
    diameter4: f64,
    diameter: f64,
    feasible_cells: usize,
    covered_cells: usize,
    total_cells: usize,
    /// Empirical indication only, never a proof.
    empirically_full: bool,
}

pub fn cmd_cylinder(args: &CylinderArgs) -> CliResult<()> {
    let word = parse_word(&args.word)?;
    let kind = args.domain.kind();
    if args.samples == 0 {
        return Err(CliError::Parse("--samples must be at least 1".into()));
    }
    if args.grid == 0 {
        return Err(CliError::Parse("--grid must be at least 1".into()));
    }
    let manifest = RunManifest::new("cylinder")
        .param("word", &args.word)
        .param("domain", args.domain)
        .param("samples", args.samples)
        .param("grid", args.grid)
        .param("rng_seed", args.rng_seed);

    if let Some(p) = &args.apply {
        let h = parse_exact_point(p)?;
        if !lattice::in_domain(kind, &h) {
            return Err(CliError::Parse(format!(
                "point {p:?} does not lie in the chosen fundamental domain"
            )));
        }
        let img = dynamics::cylinder_map(&word, &h)?;
        println!(
            "branch image of ({}): x = {}, y = {}, t = {}",
            p,
            rational_str(&img.x),
            rational_str(&img.y),
            rational_str(&img.t)
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.rng_seed);
    let probe = dynamics::cylinder_probe(&word, kind, args.samples, args.grid, &mut rng)?;
    println!(
        "word length {}: {} samples, {} in domain, {} kept in the cylinder",
        probe.word_len, probe.requested_samples, probe.domain_samples, probe.kept
    );
    println!(
        "image diameter estimate: {:.6e} (dist⁴ {:.6e})",
        probe.diameter4.powf(0.25),
        probe.diameter4
    );
    println!(
        "forward-image coverage: {}/{} feasible cells ({} total) — empirically full: {}",
        probe.covered_cells, probe.feasible_cells, probe.total_cells, probe.empirically_full
    );

    if let Some(out) = &args.out {
        let json = CylinderJson {
            format_version: crate::manifest::FORMAT_VERSION,
            library_version: heiscf::VERSION.to_string(),
            manifest: manifest.clone().output(out),
            word: word
                .iter()
                .map(lattice_to_triple)
                .collect::<CliResult<Vec<_>>>()?,
            samples_requested: probe.requested_samples,
            samples_in_domain: probe.domain_samples,
            samples_kept: probe.kept,
            diameter4: probe.diameter4,
            diameter: probe.diameter4.powf(0.25),
            feasible_cells: probe.feasible_cells,
            covered_cells: probe.covered_cells,
            total_cells: probe.total_cells,
            empirically_full: probe.empirically_full,
        };
        write_text(
            out,
            &(serde_json::to_string_pretty(&json).expect("serializes") + "\n"),
        )?;
        println!("wrote {}", out.display());
    }
    Ok(())
}
