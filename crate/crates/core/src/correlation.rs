//! Periodic correlation functions and maximum-magnitude sweeps.
//!
//! `R_{A,B}(τ) = Σ_k Σ_t a_k(t)·conj(b_k(t + τ))`, indices mod `N`; the
//! shift applies to the conjugated (second) argument. The naive engine
//! evaluates this sum directly and is the reference; the FFT engine sums
//! per-row cross spectra and inverts once per pair.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::model::{root_table, ComplementaryMatrix, PhaseSequence, QcssFamily, SequenceFamily};
use crate::{Error, Result};

/// Magnitudes within this distance of the maximum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;
/// Histogram keys are magnitudes in units of 1e-6.
pub const HISTOGRAM_SCALE: f64 = 1e6;

/// Naive-path work (`M²·K·N²` term evaluations) above which `Auto` picks FFT.
const AUTO_NAIVE_WORK_LIMIT: f64 = 4e9;
/// Lengths above which `Auto` picks FFT regardless of work.
const AUTO_FFT_LENGTH: usize = 64;

/// Anything laid out as `M` members of `K` rows of length `N` over a common
/// root-of-unity order.
pub trait Correlatable: Sync {
    fn order(&self) -> u32;
    fn flock(&self) -> usize;
    fn length(&self) -> usize;
    fn member_count(&self) -> usize;
    fn member_row(&self, member: usize, k: usize) -> &[u32];
}

impl Correlatable for SequenceFamily {
    fn order(&self) -> u32 {
        SequenceFamily::order(self)
    }
    fn flock(&self) -> usize {
        1
    }
    fn length(&self) -> usize {
        self.period()
    }
    fn member_count(&self) -> usize {
        self.len()
    }
    fn member_row(&self, member: usize, _k: usize) -> &[u32] {
        self.members()[member].exponents()
    }
}

impl Correlatable for QcssFamily {
    fn order(&self) -> u32 {
        QcssFamily::order(self)
    }
    fn flock(&self) -> usize {
        QcssFamily::flock(self)
    }
    fn length(&self) -> usize {
        QcssFamily::length(self)
    }
    fn member_count(&self) -> usize {
        self.len()
    }
    fn member_row(&self, member: usize, k: usize) -> &[u32] {
        self.members()[member].row(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Naive,
    Fft,
    /// FFT for long rows or heavy sweeps, naive otherwise.
    Auto,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Self::Naive),
            "fft" => Ok(Self::Fft),
            "auto" => Ok(Self::Auto),
            other => Err(Error::InvalidArgument(format!("unknown engine {other:?}"))),
        }
    }

    pub fn resolve<F: Correlatable + ?Sized>(self, fam: &F) -> Engine {
        match self {
            Engine::Auto => {
                let (m, k, n) = (
                    fam.member_count() as f64,
                    fam.flock() as f64,
                    fam.length() as f64,
                );
                if fam.length() > AUTO_FFT_LENGTH || m * m * k * n * n > AUTO_NAIVE_WORK_LIMIT {
                    Engine::Fft
                } else {
                    Engine::Naive
                }
            }
            e => e,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Engine::Naive => "naive",
            Engine::Fft => "fft",
            Engine::Auto => "auto",
        }
    }
}

fn check_same_shape(a: &ComplementaryMatrix, b: &ComplementaryMatrix) -> Result<()> {
    if (a.order(), a.flock(), a.length()) != (b.order(), b.flock(), b.length()) {
        return Err(Error::ShapeMismatch(format!(
            "(L={}, K={}, N={}) vs (L={}, K={}, N={})",
            a.order(),
            a.flock(),
            a.length(),
            b.order(),
            b.flock(),
            b.length()
        )));
    }
    Ok(())
}

fn check_shift(tau: usize, len: usize) -> Result<()> {
    if tau < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: tau, len })
    }
}

/// Adds `Σ_t a(t)·conj(b(t + τ))` for every τ into `out`.
fn accumulate_row_naive(a: &[u32], b: &[u32], order: u32, roots: &[Complex64], out: &mut [Complex64]) {
    let n = a.len();
    let conj_b: Vec<u32> = b.iter().map(|&e| (order - e) % order).collect();
    for (tau, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        let (head, tail) = (&a[..n - tau], &a[n - tau..]);
        for (&x, &y) in head.iter().zip(&conj_b[tau..]) {
            let mut e = x + y;
            if e >= order {
                e -= order;
            }
            acc += roots[e as usize];
        }
        for (&x, &y) in tail.iter().zip(&conj_b[..tau]) {
            let mut e = x + y;
            if e >= order {
                e -= order;
            }
            acc += roots[e as usize];
        }
        *slot += acc;
    }
}

fn accumulate_row_at(a: &[u32], b: &[u32], order: u32, roots: &[Complex64], tau: usize) -> Complex64 {
    let n = a.len();
    (0..n)
        .map(|t| {
            let e = (a[t] + order - b[(t + tau) % n]) % order;
            roots[e as usize]
        })
        .sum()
}

/// `R_{A,B}(τ)` for two complementary matrices of equal shape.
pub fn pcf(a: &ComplementaryMatrix, b: &ComplementaryMatrix, tau: usize) -> Result<Complex64> {
    check_same_shape(a, b)?;
    check_shift(tau, a.length())?;
    let roots = root_table(a.order());
    Ok(a
        .rows()
        .zip(b.rows())
        .map(|(x, y)| accumulate_row_at(x, y, a.order(), &roots, tau))
        .sum())
}

/// Single-row periodic correlation `R_{a,b}(τ)`.
pub fn pcf_sequence(a: &PhaseSequence, b: &PhaseSequence, tau: usize) -> Result<Complex64> {
    if (a.order(), a.period()) != (b.order(), b.period()) {
        return Err(Error::ShapeMismatch(format!(
            "(L={}, n={}) vs (L={}, n={})",
            a.order(),
            a.period(),
            b.order(),
            b.period()
        )));
    }
    check_shift(tau, a.period())?;
    let roots = root_table(a.order());
    Ok(accumulate_row_at(a.exponents(), b.exponents(), a.order(), &roots, tau))
}

/// `R_{A,B}(τ)` for all τ by direct summation.
pub fn pcf_spectrum_naive(a: &ComplementaryMatrix, b: &ComplementaryMatrix) -> Result<Vec<Complex64>> {
    check_same_shape(a, b)?;
    let roots = root_table(a.order());
    let mut out = vec![Complex64::new(0.0, 0.0); a.length()];
    for (x, y) in a.rows().zip(b.rows()) {
        accumulate_row_naive(x, y, a.order(), &roots, &mut out);
    }
    Ok(out)
}

/// `R_{A,B}(τ)` for all τ via length-`N` transforms of each row.
pub fn pcf_spectrum_fft(a: &ComplementaryMatrix, b: &ComplementaryMatrix) -> Result<Vec<Complex64>> {
    check_same_shape(a, b)?;
    let plan = FftPlan::new(a.length());
    let roots = root_table(a.order());
    let fa: Vec<Vec<Complex64>> = a.rows().map(|r| plan.forward(r, &roots)).collect();
    let fb: Vec<Vec<Complex64>> = b.rows().map(|r| plan.forward(r, &roots)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); a.length()];
    plan.cross_spectrum(fa.iter().map(Vec::as_slice), fb.iter().map(Vec::as_slice), &mut out);
    Ok(out)
}

struct FftPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPlan {
    fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    fn forward(&self, row: &[u32], roots: &[Complex64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = row.iter().map(|&e| roots[e as usize]).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// `out[τ] = conj(IDFT(Σ_k conj(A_k)·B_k))[τ] / N`.
    fn cross_spectrum<'a>(
        &self,
        fa: impl Iterator<Item = &'a [Complex64]>,
        fb: impl Iterator<Item = &'a [Complex64]>,
        out: &mut [Complex64],
    ) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (x, y) in fa.zip(fb) {
            for ((o, u), v) in out.iter_mut().zip(x).zip(y) {
                *o += u.conj() * v;
            }
        }
        self.inverse.process(out);
        let scale = 1.0 / self.len as f64;
        for z in out.iter_mut() {
            *z = z.conj() * scale;
        }
    }
}

/// Result of a full `(i, j, τ)` sweep, the in-phase autocorrelations excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub members: usize,
    pub flock: usize,
    pub length: usize,
    pub engine: Engine,
    /// Maximum correlation magnitude over the scanned triples.
    pub measured_max: f64,
    /// Triples `(i, j, τ)` within [`TIE_TOLERANCE`] of the maximum, sorted.
    pub argmax: Vec<(usize, usize, usize)>,
    /// Count per magnitude, keyed in units of 1e-6.
    pub histogram: BTreeMap<u64, u64>,
    /// In-phase autocorrelation `K·N`.
    pub peak: f64,
    /// Number of scanned triples, `M²·N − M`.
    pub pair_count: u64,
}

impl CorrelationReport {
    /// Distinct magnitudes seen, ascending, rounded to 6 decimals.
    pub fn support(&self) -> Vec<f64> {
        self.histogram
            .keys()
            .map(|&k| k as f64 / HISTOGRAM_SCALE)
            .collect()
    }

    /// Whether every observed magnitude lies within `tol` of some allowed value.
    pub fn support_within(&self, allowed: &[f64], tol: f64) -> bool {
        self.support()
            .iter()
            .all(|v| allowed.iter().any(|a| (v - a).abs() <= tol))
    }

    pub fn count_of(&self, magnitude: f64) -> u64 {
        let key = histogram_key(magnitude);
        self.histogram.get(&key).copied().unwrap_or(0)
    }
}

pub fn histogram_key(magnitude: f64) -> u64 {
    (magnitude * HISTOGRAM_SCALE).round() as u64
}

#[derive(Default)]
struct Partial {
    max: f64,
    ties: Vec<(f64, (usize, usize, usize))>,
    histogram: BTreeMap<u64, u64>,
    count: u64,
}

impl Partial {
    fn observe(&mut self, mag: f64, at: (usize, usize, usize)) {
        self.count += 1;
        *self.histogram.entry(histogram_key(mag)).or_insert(0) += 1;
        if mag > self.max {
            self.max = mag;
            let floor = mag - TIE_TOLERANCE;
            self.ties.retain(|(m, _)| *m >= floor);
            self.ties.push((mag, at));
        } else if mag >= self.max - TIE_TOLERANCE {
            self.ties.push((mag, at));
        }
    }
}

/// Sweeps all `(i, j, τ)` with `τ ≠ 0` when `i = j` and reports the maximum
/// magnitude, its locations and the magnitude histogram.
///
/// Rows `i` are processed in parallel; partial results are merged in row
/// order so the report does not depend on scheduling.
pub fn measure_theta_max<F: Correlatable + ?Sized>(fam: &F, engine: Engine) -> Result<CorrelationReport> {
    let (m, k, n, order) = (fam.member_count(), fam.flock(), fam.length(), fam.order());
    if m == 0 {
        return Err(Error::EmptyFamily);
    }
    let engine = engine.resolve(fam);
    let roots = root_table(order);

    let spectra: Option<(FftPlan, Vec<Vec<Complex64>>)> = (engine == Engine::Fft).then(|| {
        let plan = FftPlan::new(n);
        let rows = (0..m)
            .flat_map(|i| (0..k).map(move |r| (i, r)))
            .map(|(i, r)| plan.forward(fam.member_row(i, r), &roots))
            .collect();
        (plan, rows)
    });

    let partials: Vec<Partial> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut part = Partial::default();
            let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..m {
                match &spectra {
                    Some((plan, rows)) => plan.cross_spectrum(
                        rows[i * k..(i + 1) * k].iter().map(Vec::as_slice),
                        rows[j * k..(j + 1) * k].iter().map(Vec::as_slice),
                        &mut spectrum,
                    ),
                    None => {
                        spectrum.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                        for r in 0..k {
                            accumulate_row_naive(
                                fam.member_row(i, r),
                                fam.member_row(j, r),
                                order,
                                &roots,
                                &mut spectrum,
                            );
                        }
                    }
                }
                let start = usize::from(i == j);
                for (tau, z) in spectrum.iter().enumerate().skip(start) {
                    part.observe(z.norm(), (i, j, tau));
                }
            }
            part
        })
        .collect();

    let measured_max = partials.iter().map(|p| p.max).fold(0.0, f64::max);
    let floor = measured_max - TIE_TOLERANCE;
    let mut report = CorrelationReport {
        members: m,
        flock: k,
        length: n,
        engine,
        measured_max,
        argmax: Vec::new(),
        histogram: BTreeMap::new(),
        peak: (k * n) as f64,
        pair_count: 0,
    };
    for part in partials {
        report.pair_count += part.count;
        report
            .argmax
            .extend(part.ties.into_iter().filter(|(mag, _)| *mag >= floor).map(|(_, at)| at));
        for (key, count) in part.histogram {
            *report.histogram.entry(key).or_insert(0) += count;
        }
    }
    Ok(report)
}
