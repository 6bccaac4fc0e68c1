//! Bound ratios, asymptotic trend tables and declaration audits.

use crate::correlation::{measure_theta_max, Correlatable, CorrelationReport, Engine};
use crate::field::FieldContext;
use crate::generators::{
    prop1_family, smallest_prime_factor, thm41_family, thm42_family, Permutation,
};
use crate::interleave::interleave_family;
use crate::model::{qcss_lower_bound, Metadata, QcssFamily, SequenceFamily};
use crate::{Error, Result};

/// Slack allowed above a declared maximum.
pub const DECLARED_TOLERANCE: f64 = 1e-6;
/// Slack allowed below the lower bound.
pub const BOUND_TOLERANCE: f64 = 1e-9;
/// Distance from an expected case value still counted as a match.
pub const SUPPORT_TOLERANCE: f64 = 1e-6;

/// `measured / bound(M, K, N)`.
pub fn optimality_ratio(report: &CorrelationReport, m: usize, k: usize, n: usize) -> Result<f64> {
    let bound = qcss_lower_bound(m, k, n)?;
    if bound <= 0.0 {
        return Err(Error::InvalidBound(format!(
            "bound is zero for M = {m}, K = {k}; ratio undefined"
        )));
    }
    Ok(report.measured_max / bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendKind {
    /// Character family over GF(q), interleaved; size parameter `q`.
    Prop1Interleaved,
    /// Full root-of-unity family; size parameter `N`.
    Thm41,
    /// Row-deleted root-of-unity family; size parameter `N`.
    Thm42,
}

impl TrendKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "prop1" | "prop1-interleaved" => Ok(Self::Prop1Interleaved),
            "thm41" => Ok(Self::Thm41),
            "thm42" => Ok(Self::Thm42),
            other => Err(Error::InvalidArgument(format!("unknown trend kind {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Prop1Interleaved => "prop1",
            Self::Thm41 => "thm41",
            Self::Thm42 => "thm42",
        }
    }
}

/// One sweep point: the size parameter and, for the interleaved kind, an
/// optional flock size (default: smallest prime factor of `q − 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrendPoint {
    pub size: usize,
    pub flock: Option<usize>,
}

impl TrendPoint {
    pub fn new(size: usize) -> Self {
        Self { size, flock: None }
    }

    pub fn with_flock(size: usize, flock: usize) -> Self {
        Self {
            size,
            flock: Some(flock),
        }
    }

    /// `"16"` or `"64:7"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid sweep point {s:?}"));
        match s.split_once(':') {
            Some((a, b)) => Ok(Self::with_flock(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            )),
            None => Ok(Self::new(s.trim().parse().map_err(|_| bad())?)),
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(Self::parse)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub size: usize,
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub measured: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendDirection {
    Decreasing,
    Increasing,
    Mixed,
    /// Fewer than two rows.
    Undetermined,
}

impl TrendDirection {
    pub fn name(self) -> &'static str {
        match self {
            Self::Decreasing => "decreasing",
            Self::Increasing => "increasing",
            Self::Mixed => "mixed",
            Self::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendTable {
    pub kind: TrendKind,
    pub rows: Vec<TrendRow>,
    /// Skipped points and selection rules in effect.
    pub notices: Vec<String>,
}

impl TrendTable {
    pub fn direction(&self) -> TrendDirection {
        if self.rows.len() < 2 {
            return TrendDirection::Undetermined;
        }
        let pairs = || self.rows.windows(2).map(|w| (w[0].ratio, w[1].ratio));
        if pairs().all(|(a, b)| b < a) {
            TrendDirection::Decreasing
        } else if pairs().all(|(a, b)| b > a) {
            TrendDirection::Increasing
        } else {
            TrendDirection::Mixed
        }
    }
}

/// `q = p^e` with `p` prime, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    let p = smallest_prime_factor(q as u64).ok()? as usize;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

fn trend_family(kind: TrendKind, point: TrendPoint, notices: &mut Vec<String>) -> Result<QcssFamily> {
    match kind {
        TrendKind::Prop1Interleaved => {
            let q = point.size;
            let (p, e) = prime_power(q)
                .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
            let flock = match point.flock {
                Some(k) => k,
                None => {
                    let k = smallest_prime_factor(q as u64 - 1)? as usize;
                    notices.push(format!(
                        "q={q}: K={k} chosen as the smallest nontrivial divisor of q-1"
                    ));
                    k
                }
            };
            let ctx = FieldContext::new(p, e)?;
            interleave_family(&prop1_family(&ctx)?, flock)
        }
        TrendKind::Thm41 => thm41_family(point.size, &Permutation::identity(point.size)),
        TrendKind::Thm42 => thm42_family(point.size, &Permutation::identity(point.size)),
    }
}

/// Measures each sweep point and tabulates measured maximum, lower bound and
/// their ratio, ordered by size. Invalid points are skipped with a notice.
pub fn ratio_trend(kind: TrendKind, points: &[TrendPoint], engine: Engine) -> TrendTable {
    let mut points = points.to_vec();
    points.sort_by_key(|p| (p.size, p.flock));
    let mut notices = Vec::new();
    let mut rows = Vec::new();
    for point in points {
        let fam = match trend_family(kind, point, &mut notices) {
            Ok(f) => f,
            Err(e) => {
                notices.push(format!("skipped size {}: {e}", point.size));
                continue;
            }
        };
        let (m, k, n) = fam.shape();
        let row = measure_theta_max(&fam, engine).and_then(|report| {
            let bound = qcss_lower_bound(m, k, n)?;
            let ratio = optimality_ratio(&report, m, k, n)?;
            Ok(TrendRow {
                size: point.size,
                m,
                k,
                n,
                measured: report.measured_max,
                bound,
                ratio,
            })
        });
        match row {
            Ok(r) => rows.push(r),
            Err(e) => notices.push(format!("skipped size {}: {e}", point.size)),
        }
    }
    TrendTable {
        kind,
        rows,
        notices,
    }
}

/// Parameters as a family declares them, for the table-row constraint check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParameters {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub theta: f64,
    pub alphabet: u64,
}

/// Parameter rows for asymptotically optimal QCSSs: rows 10–16 come from
/// interleaving known sequence sets of period `K·N`, rows 17–18 are the
/// direct root-of-unity families. `e` is the extension degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table1Row {
    R10 { p: u64, e: u32 },
    R11 { e: u32 },
    R12 { p: u64, e: u32 },
    R13 { e: u32 },
    R14 { e: u32 },
    R15 { p: u64 },
    R16 { p: u64, e: u32, r: u64 },
    R17,
    R18,
}

impl Table1Row {
    pub fn number(self) -> u8 {
        match self {
            Self::R10 { .. } => 10,
            Self::R11 { .. } => 11,
            Self::R12 { .. } => 12,
            Self::R13 { .. } => 13,
            Self::R14 { .. } => 14,
            Self::R15 { .. } => 15,
            Self::R16 { .. } => 16,
            Self::R17 => 17,
            Self::R18 => 18,
        }
    }

    /// Constraint violations; empty when the parameters fit the row.
    pub fn violations(self, fp: &FamilyParameters) -> Vec<String> {
        let mut out = Vec::new();
        let mut need = |ok: bool, what: String| {
            if !ok {
                out.push(what);
            }
        };
        let FamilyParameters {
            m,
            k,
            n,
            theta,
            alphabet,
        } = *fp;
        let (m, k, n) = (m as u64, k as u64, n as u64);
        let pow = |b: u64, e: u32| b.pow(e);
        let sqrt_pow = |b: u64, e: u32| (b as f64).powf(e as f64 / 2.0);
        let theta_le = |limit: f64| theta <= limit + DECLARED_TOLERANCE;
        let mut interleaved = |m_expect: u64, kn: u64, limit: f64, a: u64| {
            need(m == m_expect, format!("M = {m}, expected {m_expect}"));
            need(k * n == kn, format!("K·N = {}, expected {kn}", k * n));
            need(k > 1 && n > 1, "K and N must exceed 1".into());
            need(m > k, format!("M = {m} must exceed K = {k}"));
            need(theta_le(limit), format!("θ = {theta} exceeds {limit}"));
            need(alphabet == a, format!("alphabet {alphabet}, expected {a}"));
        };
        match self {
            Self::R10 { p, e } => {
                interleaved(pow(p, e), pow(p, e) - 1, sqrt_pow(p, e) + 1.0, p);
                need(p % 2 == 1, "p must be odd".into());
            }
            Self::R11 { e } => {
                interleaved(pow(2, e / 2) + 1, pow(2, e) - 1, sqrt_pow(2, e) + 1.0, 2);
                need(e % 2 == 0, "n must be even".into());
            }
            Self::R12 { p, e } => {
                interleaved(pow(p, e / 2), pow(p, e) - 1, sqrt_pow(p, e) + 1.0, p);
                need(p % 2 == 1 && e % 2 == 0, "p must be odd and n even".into());
            }
            Self::R13 { e } => {
                interleaved(pow(2, e) + 1, pow(2, e) - 1, sqrt_pow(2, e) + 1.0, 4)
            }
            Self::R14 { e } => interleaved(
                pow(2, e),
                pow(2, e + 1) - 2,
                sqrt_pow(2, e + 1) + 2.0,
                4,
            ),
            Self::R15 { p } => {
                interleaved(p, p * p - p, p as f64, p);
                need(p % 2 == 1, "p must be odd".into());
            }
            Self::R16 { p, e, r } => {
                let q1 = pow(p, e) - 1;
                interleaved(r, q1, sqrt_pow(p, e), p * r);
                need(q1 % r == 0, format!("r = {r} must divide {q1}"));
            }
            Self::R17 | Self::R18 => {
                let odd = n > 1 && n % 2 == 1;
                need(odd, format!("N = {n} must be odd and greater than 1"));
                if odd {
                    let mu = smallest_prime_factor(n).expect("n > 1");
                    need(m == (mu - 1) * n, format!("M = {m}, expected {}", (mu - 1) * n));
                }
                let k_expect = if self == Self::R17 { n } else { n - 1 };
                need(k == k_expect, format!("K = {k}, expected {k_expect}"));
                need(
                    (theta - n as f64).abs() <= DECLARED_TOLERANCE,
                    format!("θ = {theta}, expected {n}"),
                );
                need(alphabet == n, format!("alphabet {alphabet}, expected {n}"));
            }
        }
        out
    }
}

fn meta_u64(md: &Metadata, key: &str) -> Option<u64> {
    md.get(key)?.parse().ok()
}

/// The table row a family's `kind` metadata says it belongs to, if any.
pub fn table1_row_for(md: &Metadata) -> Option<Table1Row> {
    match md.kind()? {
        "prop1-interleaved" => {
            let p = meta_u64(md, "p")?;
            let e = meta_u64(md, "n")? as u32;
            Some(Table1Row::R16 {
                p,
                e,
                r: p.pow(e) - 1,
            })
        }
        "thm41" => Some(Table1Row::R17),
        "thm42" | "thm41-del" => Some(Table1Row::R18),
        _ => None,
    }
}

/// Correlation magnitudes the construction's case analysis allows for a
/// known family kind (in-phase autocorrelations excluded).
pub fn expected_support(md: &Metadata, length: usize) -> Option<Vec<f64>> {
    match md.kind()? {
        "prop1" | "prop1-interleaved" => {
            let q = meta_u64(md, "q")? as f64;
            Some(vec![0.0, 1.0, q.sqrt()])
        }
        "thm41" | "thm42" | "thm41-del" => Some(vec![0.0, length as f64]),
        _ => None,
    }
}

/// Outcome of auditing a family's declared maximum against measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub report: CorrelationReport,
    pub declared: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    /// `measured ≤ declared + 1e-6`; false when nothing is declared.
    pub within_declared: bool,
    /// `measured ≥ bound − 1e-9`; `None` when the bound is undefined.
    pub above_bound: Option<bool>,
    pub expected_support: Option<Vec<f64>>,
    /// Histogram support matches the case values; `None` for unknown kinds.
    pub case_structure: Option<bool>,
    /// Table row checked and its violations.
    pub table_row: Option<(u8, Vec<String>)>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.within_declared
            && self.above_bound != Some(false)
            && self.case_structure != Some(false)
            && self.table_row.as_ref().map_or(true, |(_, v)| v.is_empty())
    }
}

fn audit<F: Correlatable>(
    fam: &F,
    declared: Option<f64>,
    metadata: &Metadata,
    engine: Engine,
) -> Result<Verdict> {
    let report = measure_theta_max(fam, engine)?;
    let (m, k, n) = (report.members, report.flock, report.length);
    let bound = qcss_lower_bound(m, k, n).ok();
    let ratio = bound.filter(|&b| b > 0.0).map(|b| report.measured_max / b);
    let within_declared = declared.is_some_and(|d| report.measured_max <= d + DECLARED_TOLERANCE);
    let above_bound = bound.map(|b| report.measured_max >= b - BOUND_TOLERANCE);
    let expected = expected_support(metadata, n);
    let case_structure = expected
        .as_ref()
        .map(|allowed| report.support_within(allowed, SUPPORT_TOLERANCE));
    let table_row = table1_row_for(metadata).map(|row| {
        let fp = FamilyParameters {
            m,
            k,
            n,
            theta: declared.unwrap_or(f64::INFINITY),
            alphabet: fam.order() as u64,
        };
        (row.number(), row.violations(&fp))
    });
    Ok(Verdict {
        report,
        declared,
        bound,
        ratio,
        within_declared,
        above_bound,
        expected_support: expected,
        case_structure,
        table_row,
    })
}

pub fn verify_qcss_family(fam: &QcssFamily, engine: Engine) -> Result<Verdict> {
    audit(fam, fam.declared_vartheta_max, &fam.metadata, engine)
}

pub fn verify_sequence_family(fam: &SequenceFamily, engine: Engine) -> Result<Verdict> {
    audit(fam, fam.declared_theta_max, &fam.metadata, engine)
}
