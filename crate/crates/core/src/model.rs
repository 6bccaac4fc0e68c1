//! Phase-exponent data model and the correlation lower bounds.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::{Error, Result};

/// `exp(2πi·e/L)` for an exponent reduced modulo `order`.
pub fn unit_root(order: u32, exponent: u64) -> Complex64 {
    let e = exponent % order as u64;
    Complex64::from_polar(1.0, TAU * e as f64 / order as f64)
}

/// Table of all `order`-th roots of unity, indexed by exponent.
pub fn root_table(order: u32) -> Vec<Complex64> {
    (0..order as u64).map(|e| unit_root(order, e)).collect()
}

/// A unimodular sequence stored as exponents modulo a root-of-unity order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseSequence {
    order: u32,
    exponents: Vec<u32>,
}

impl PhaseSequence {
    pub fn new(order: u32, exponents: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if exponents.is_empty() {
            return Err(Error::EmptySequence);
        }
        check_exponents(order, &exponents)?;
        Ok(Self { order, exponents })
    }

    /// Builds a sequence from arbitrary integers, reducing each modulo `order`.
    pub fn from_integers(order: u32, values: &[i64]) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let exponents = values
            .iter()
            .map(|v| v.rem_euclid(order as i64) as u32)
            .collect();
        Self::new(order, exponents)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn period(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn entry_value(&self, t: usize) -> Result<Complex64> {
        let e = self.exponents.get(t).ok_or(Error::IndexOutOfRange {
            index: t,
            len: self.exponents.len(),
        })?;
        Ok(unit_root(self.order, *e as u64))
    }
}

/// One element of a QCSS: a `K×N` grid of phase exponents (a "flock" of
/// `K` row sequences of length `N`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplementaryMatrix {
    order: u32,
    flock: usize,
    length: usize,
    exponents: Vec<u32>,
}

impl ComplementaryMatrix {
    /// `exponents` is row-major, `flock` rows of `length` entries.
    pub fn new(order: u32, flock: usize, length: usize, exponents: Vec<u32>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if flock == 0 || length == 0 || exponents.len() != flock * length {
            return Err(Error::GridShape {
                rows: flock,
                cols: length,
                got: exponents.len(),
            });
        }
        check_exponents(order, &exponents)?;
        Ok(Self {
            order,
            flock,
            length,
            exponents,
        })
    }

    pub fn from_rows(order: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let length = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != length) {
            return Err(Error::ShapeMismatch("rows of unequal length".into()));
        }
        Self::new(order, rows.len(), length, rows.concat())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn flock(&self) -> usize {
        self.flock
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn row(&self, k: usize) -> &[u32] {
        &self.exponents[k * self.length..(k + 1) * self.length]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.chunks_exact(self.length)
    }

    pub fn get(&self, k: usize, t: usize) -> u32 {
        self.exponents[k * self.length + t]
    }

    /// Copy of the matrix with row `k` (0-based) removed.
    pub fn without_row(&self, k: usize) -> Result<Self> {
        if k >= self.flock {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.flock,
            });
        }
        if self.flock == 1 {
            return Err(Error::InvalidArgument(
                "cannot delete the only row of a matrix".into(),
            ));
        }
        let exponents = self
            .rows()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .flat_map(|(_, r)| r.iter().copied())
            .collect();
        Self::new(self.order, self.flock - 1, self.length, exponents)
    }
}

fn check_exponents(order: u32, exponents: &[u32]) -> Result<()> {
    match exponents.iter().find(|&&e| e >= order) {
        Some(&e) => Err(Error::ExponentOutOfRange { exponent: e, order }),
        None => Ok(()),
    }
}

/// Ordered free-form key/value annotations carried by a family.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metadata(Vec<(String, String)>);

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Replaces an existing entry in place, otherwise appends.
    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string();
        match self.0.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.0.push((key, value)),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.set(key, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn kind(&self) -> Option<&str> {
        self.get("kind")
    }
}

/// A periodic sequence set with parameters `(n, M, θ_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFamily {
    members: Vec<PhaseSequence>,
    pub declared_theta_max: Option<f64>,
    pub metadata: Metadata,
}

impl SequenceFamily {
    pub fn new(
        members: Vec<PhaseSequence>,
        declared_theta_max: Option<f64>,
        metadata: Metadata,
    ) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        let (order, period) = (first.order(), first.period());
        if let Some((i, _)) = members
            .iter()
            .enumerate()
            .find(|(_, s)| s.order() != order || s.period() != period)
        {
            return Err(Error::InconsistentMembers(format!(
                "member {i} differs from member 0 in order or period"
            )));
        }
        check_declared(declared_theta_max)?;
        Ok(Self {
            members,
            declared_theta_max,
            metadata,
        })
    }

    pub fn members(&self) -> &[PhaseSequence] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.members[0].order()
    }

    pub fn period(&self) -> usize {
        self.members[0].period()
    }
}

/// A set of complementary matrices with parameters `(M, K, N, ϑ_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QcssFamily {
    members: Vec<ComplementaryMatrix>,
    pub declared_vartheta_max: Option<f64>,
    pub metadata: Metadata,
}

impl QcssFamily {
    pub fn new(
        members: Vec<ComplementaryMatrix>,
        declared_vartheta_max: Option<f64>,
        metadata: Metadata,
    ) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        let shape = (first.order(), first.flock(), first.length());
        if let Some((i, _)) = members
            .iter()
            .enumerate()
            .find(|(_, m)| (m.order(), m.flock(), m.length()) != shape)
        {
            return Err(Error::InconsistentMembers(format!(
                "member {i} differs from member 0 in order, flock size or length"
            )));
        }
        check_declared(declared_vartheta_max)?;
        Ok(Self {
            members,
            declared_vartheta_max,
            metadata,
        })
    }

    pub fn members(&self) -> &[ComplementaryMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.members[0].order()
    }

    pub fn flock(&self) -> usize {
        self.members[0].flock()
    }

    pub fn length(&self) -> usize {
        self.members[0].length()
    }

    /// `(M, K, N)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.len(), self.flock(), self.length())
    }

    /// Why the set fails the `M > K > 1` requirement of a QCSS, if it does.
    pub fn qcss_shape_issue(&self) -> Option<String> {
        let (m, k, _) = self.shape();
        if k <= 1 {
            Some(format!("flock size K = {k} must exceed 1"))
        } else if m <= k {
            Some(format!("family size M = {m} does not exceed flock size K = {k}"))
        } else {
            None
        }
    }

    pub fn is_qcss(&self) -> bool {
        self.qcss_shape_issue().is_none()
    }
}

fn check_declared(value: Option<f64>) -> Result<()> {
    match value {
        Some(v) if !(v.is_finite() && v >= 0.0) => Err(Error::InvalidArgument(format!(
            "declared maximum correlation {v} must be a nonnegative real"
        ))),
        _ => Ok(()),
    }
}

/// Lower bound `K·N·sqrt((M/K − 1)/(M·N − 1))` on the maximum periodic
/// correlation magnitude of an `(M, K, N)` complementary set.
pub fn qcss_lower_bound(m: usize, k: usize, n: usize) -> Result<f64> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidBound("K and N must be positive".into()));
    }
    if m < k {
        return Err(Error::InvalidBound(format!("M = {m} is smaller than K = {k}")));
    }
    if m * n <= 1 {
        return Err(Error::InvalidBound("M·N must exceed 1".into()));
    }
    let (m, k, n) = (m as f64, k as f64, n as f64);
    Ok(k * n * ((m / k - 1.0) / (m * n - 1.0)).sqrt())
}

/// Welch bound `n·sqrt((M − 1)/(n·M − 1))` for `M` sequences of period `n`.
pub fn welch_bound(n: usize, m: usize) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidBound("n and M must be positive".into()));
    }
    if n * m <= 1 {
        return Err(Error::InvalidBound("n·M must exceed 1".into()));
    }
    let (n, m) = (n as f64, m as f64);
    Ok(n * ((m - 1.0) / (n * m - 1.0)).sqrt())
}
