//! Family constructions: the character-based sequence family and the two
//! direct root-of-unity QCSS families.

use crate::field::FieldContext;
use crate::model::{ComplementaryMatrix, Metadata, PhaseSequence, QcssFamily, SequenceFamily};
use crate::{Error, Result};

/// A bijection on `[0, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
    label: String,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Self {
            mapping: (0..size).collect(),
            label: "identity".into(),
        }
    }

    /// `x ↦ N − 1 − x`.
    pub fn reversal(size: usize) -> Self {
        Self {
            mapping: (0..size).rev().collect(),
            label: "reversal".into(),
        }
    }

    /// `x ↦ −x mod N`; fixes 0.
    pub fn negation(size: usize) -> Self {
        Self {
            mapping: (0..size).map(|x| (size - x) % size).collect(),
            label: "negation".into(),
        }
    }

    pub fn from_table(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} is out of range or repeated in a table of size {n}"
                )));
            }
        }
        Ok(Self {
            mapping,
            label: "table".into(),
        })
    }

    /// Named permutation (`identity`, `reversal`, `negation`).
    pub fn named(name: &str, size: usize) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity(size)),
            "reversal" => Ok(Self::reversal(size)),
            "negation" => Ok(Self::negation(size)),
            other => Err(Error::InvalidPermutation(format!("unknown name {other:?}"))),
        }
    }

    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Short description written into family metadata.
    pub fn label(&self) -> String {
        if self.label == "table" {
            let body: Vec<String> = self.mapping.iter().map(usize::to_string).collect();
            format!("table {}", body.join(","))
        } else {
            self.label.clone()
        }
    }
}

pub fn smallest_prime_factor(n: u64) -> Result<u64> {
    if n <= 1 {
        return Err(Error::InvalidArgument(format!(
            "smallest prime factor needs n > 1, got {n}"
        )));
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return Ok(d);
        }
        d += 1;
    }
    Ok(n)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// All `y ∈ [0, m)` with `a·y ≡ b (mod m)`, ascending. There are exactly
/// `gcd(a, m)` of them when the gcd divides `b`, none otherwise.
pub fn solve_linear_congruence(a: i64, b: i64, m: i64) -> Vec<i64> {
    if m <= 1 {
        return Vec::new();
    }
    let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
    let (g, x, _) = ext_gcd(a, m);
    if b % g != 0 {
        return Vec::new();
    }
    let step = m / g;
    let y0 = ((x as i128 * (b / g) as i128).rem_euclid(step as i128)) as i64;
    (0..g).map(|k| y0 + k * step).collect()
}

/// The character-based family `s_j(t) = χ_1(α^t)·φ_j(α^t)`, `j, t ∈ [0, q−2]`,
/// using the field's own primitive element.
pub fn prop1_family(ctx: &FieldContext) -> Result<SequenceFamily> {
    prop1_family_with_primitive(ctx, 1)
}

/// Same family built on the primitive element `β = α^k` (`gcd(k, q−1) = 1`):
/// `s_j(t) = χ_1(β^t)·ξ_{q−1}^{j·t}`.
///
/// Exponents are over `L = p·(q−1)`: `Tr(β^t)·(q−1) + (j·t mod (q−1))·p`.
pub fn prop1_family_with_primitive(ctx: &FieldContext, k: u32) -> Result<SequenceFamily> {
    let (p, q) = (ctx.p() as u64, ctx.q() as u64);
    if q < 4 {
        return Err(Error::InvalidField(format!("family needs q >= 4, got {q}")));
    }
    let order = q - 1;
    if num_gcd(k as u64 % order, order) != 1 {
        return Err(Error::InvalidArgument(format!(
            "α^{k} is not primitive in GF({q})"
        )));
    }
    let alphabet = p * order;
    let traces: Vec<u64> = (0..order)
        .map(|t| ctx.trace(ctx.alpha_pow(k as u64 * t)) as u64)
        .collect();
    let members = (0..order)
        .map(|j| {
            let exponents = traces
                .iter()
                .enumerate()
                .map(|(t, &tr)| ((tr * order + (j * t as u64 % order) * p) % alphabet) as u32)
                .collect();
            PhaseSequence::new(alphabet as u32, exponents)
        })
        .collect::<Result<Vec<_>>>()?;
    let modulus: Vec<String> = ctx.modulus().iter().map(u32::to_string).collect();
    let mut metadata = Metadata::new()
        .with("kind", "prop1")
        .with("p", p)
        .with("n", ctx.n())
        .with("q", q)
        .with("modulus", modulus.join(","));
    if k != 1 {
        metadata.set("primitive-log", k);
    }
    SequenceFamily::new(members, Some((q as f64).sqrt()), metadata)
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_odd_length(len: usize) -> Result<u64> {
    if len <= 1 || len % 2 == 0 {
        return Err(Error::InvalidLength(len));
    }
    smallest_prime_factor(len as u64)
}

fn check_rho(len: usize, rho: &Permutation) -> Result<()> {
    if rho.size() != len {
        return Err(Error::InvalidPermutation(format!(
            "permutation has size {}, expected {len}",
            rho.size()
        )));
    }
    Ok(())
}

/// Full `N×N` matrices `C^{a,b}` with entry `(i, j)` equal to
/// `(a·ρ(i) + b)·j mod N`, for `a ∈ [1, μ_min)` and `b ∈ [0, N)`, listed
/// with `b` outermost: member `b·(μ_min − 1) + (a − 1)`.
fn root_of_unity_matrices(len: usize, rho: &Permutation) -> Result<Vec<ComplementaryMatrix>> {
    let mu = check_odd_length(len)? as usize;
    check_rho(len, rho)?;
    let n = len as u64;
    let mut members = Vec::with_capacity((mu - 1) * len);
    for b in 0..n {
        for a in 1..mu as u64 {
            let mut grid = Vec::with_capacity(len * len);
            for i in 0..len {
                let freq = (a * rho.apply(i) as u64 + b) % n;
                grid.extend((0..n).map(|j| (freq * j % n) as u32));
            }
            members.push(ComplementaryMatrix::new(len as u32, len, len, grid)?);
        }
    }
    Ok(members)
}

/// `((μ_min − 1)·N, N, N, N)` family of full `N×N` matrices.
pub fn thm41_family(len: usize, rho: &Permutation) -> Result<QcssFamily> {
    let members = root_of_unity_matrices(len, rho)?;
    let metadata = Metadata::new()
        .with("kind", "thm41")
        .with("rho", rho.label());
    QcssFamily::new(members, Some(len as f64), metadata)
}

/// `((μ_min − 1)·N, N − 1, N, N)` family: the full matrices without the row
/// `i` where `ρ(i) = 0`. `ρ` must fix 0.
pub fn thm42_family(len: usize, rho: &Permutation) -> Result<QcssFamily> {
    check_odd_length(len)?;
    check_rho(len, rho)?;
    if rho.apply(0) != 0 {
        return Err(Error::InvalidPermutation(format!(
            "permutation must fix 0, maps it to {}",
            rho.apply(0)
        )));
    }
    let members = delete_row(root_of_unity_matrices(len, rho)?, 0)?;
    let metadata = Metadata::new()
        .with("kind", "thm42")
        .with("rho", rho.label());
    QcssFamily::new(members, Some(len as f64), metadata)
}

/// Full family with the 1-based row `deleted_row` removed from every member.
pub fn thm41_row_deleted(len: usize, rho: &Permutation, deleted_row: usize) -> Result<QcssFamily> {
    check_odd_length(len)?;
    if deleted_row == 0 || deleted_row > len {
        return Err(Error::IndexOutOfRange {
            index: deleted_row,
            len,
        });
    }
    let members = delete_row(root_of_unity_matrices(len, rho)?, deleted_row - 1)?;
    let metadata = Metadata::new()
        .with("kind", "thm41-del")
        .with("rho", rho.label())
        .with("deleted-row", deleted_row);
    QcssFamily::new(members, Some(len as f64), metadata)
}

fn delete_row(members: Vec<ComplementaryMatrix>, row: usize) -> Result<Vec<ComplementaryMatrix>> {
    members.iter().map(|m| m.without_row(row)).collect()
}

/// Exact `|R|` between members `(a1, b1)` and `(a2, b2)` of the (optionally
/// row-deleted) root-of-unity family at shift `tau`, from the closed form
///
/// `R = ξ^{−b2·τ} Σ_i ξ^{−a2·ρ(i)·τ} Σ_j ξ^{((a1−a2)·ρ(i) + b1 − b2)·j}`.
///
/// The inner sum is `N` exactly for the rows solving
/// `(a1 − a2)·ρ(i) ≡ b2 − b1 (mod N)` and zero otherwise, so `R` reduces to
/// `N·ξ^{−b2·τ}·Σ ξ^{−a2·ρ(i)·τ}` over those rows.
pub fn root_family_magnitude(
    len: usize,
    rho: &Permutation,
    deleted_row: Option<usize>,
    (a1, b1): (u64, u64),
    (a2, b2): (u64, u64),
    tau: u64,
) -> f64 {
    let n = len as i64;
    let residues = solve_linear_congruence(a1 as i64 - a2 as i64, b2 as i64 - b1 as i64, n);
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..len {
        if Some(i) == deleted_row {
            continue;
        }
        let r = rho.apply(i) as i64;
        if residues.binary_search(&r).is_ok() {
            let e = (-(a2 as i64) * r * tau as i64).rem_euclid(n) as f64;
            let angle = std::f64::consts::TAU * e / n as f64;
            re += angle.cos();
            im += angle.sin();
        }
    }
    len as f64 * re.hypot(im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spf_examples() {
        assert_eq!(smallest_prime_factor(9).unwrap(), 3);
        assert_eq!(smallest_prime_factor(15).unwrap(), 3);
        assert_eq!(smallest_prime_factor(35).unwrap(), 5);
        assert_eq!(smallest_prime_factor(49).unwrap(), 7);
        assert_eq!(smallest_prime_factor(13).unwrap(), 13);
        assert!(smallest_prime_factor(1).is_err());
    }

    fn congruence_by_enumeration(a: i64, b: i64, m: i64) -> Vec<i64> {
        (0..m).filter(|y| (a * y - b).rem_euclid(m) == 0).collect()
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(solve_linear_congruence(1, 5, 9), vec![5]);
        assert_eq!(solve_linear_congruence(3, 6, 9), vec![2, 5, 8]);
        assert!(solve_linear_congruence(3, 4, 9).is_empty());
        assert_eq!(solve_linear_congruence(-2, 3, 9), congruence_by_enumeration(-2, 3, 9));
    }

    #[test]
    fn congruence_matches_enumeration() {
        for m in 2..40 {
            for a in -45..45 {
                for b in -10..50 {
                    assert_eq!(
                        solve_linear_congruence(a, b, m),
                        congruence_by_enumeration(a, b, m),
                        "a={a} b={b} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn permutations() {
        assert!(Permutation::from_table(vec![0, 2, 1]).is_ok());
        assert!(Permutation::from_table(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_table(vec![0, 3, 1]).is_err());
        assert_eq!(Permutation::negation(5).mapping(), &[0, 4, 3, 2, 1]);
        assert_eq!(Permutation::reversal(3).mapping(), &[2, 1, 0]);
        assert_eq!(
            Permutation::from_table(vec![0, 2, 1]).unwrap().label(),
            "table 0,2,1"
        );
        assert!(Permutation::named("shuffle", 3).is_err());
    }

    #[test]
    fn prop1_q16_shape() {
        let ctx = FieldContext::new(2, 4).unwrap();
        let fam = prop1_family(&ctx).unwrap();
        assert_eq!(fam.len(), 15);
        assert_eq!(fam.period(), 15);
        assert_eq!(fam.order(), 30);
        assert_eq!(fam.declared_theta_max, Some(4.0));
        // φ_0 row is pure ±1
        assert!(fam.members()[0].exponents().iter().all(|&e| e == 0 || e == 15));
        assert_eq!(fam.metadata.kind(), Some("prop1"));
    }

    #[test]
    fn prop1_rejects_small_or_nonprimitive() {
        let ctx = FieldContext::new(3, 1).unwrap();
        assert!(prop1_family(&ctx).is_err());
        let ctx = FieldContext::new(2, 4).unwrap();
        assert!(prop1_family_with_primitive(&ctx, 3).is_err());
        assert!(prop1_family_with_primitive(&ctx, 7).is_ok());
    }

    #[test]
    fn prop1_entry_formula() {
        let ctx = FieldContext::new(3, 2).unwrap();
        let fam = prop1_family(&ctx).unwrap();
        assert_eq!(fam.order(), 24);
        for (j, s) in fam.members().iter().enumerate() {
            for (t, &e) in s.exponents().iter().enumerate() {
                let x = ctx.alpha_pow(t as u64);
                let add = ctx.additive_char(1, x).unwrap();
                let mul = ctx.multiplicative_char(j as u32, x).unwrap();
                assert_eq!(e, (add * 8 + mul * 3) % 24);
            }
        }
    }

    #[test]
    fn thm41_n9_layout() {
        let fam = thm41_family(9, &Permutation::identity(9)).unwrap();
        assert_eq!(fam.shape(), (18, 9, 9));
        assert_eq!(fam.order(), 9);
        let c0 = &fam.members()[0];
        assert!(c0.row(0).iter().all(|&e| e == 0));
        for i in 0..9 {
            for j in 0..9 {
                assert_eq!(c0.get(i, j) as usize, i * j % 9);
            }
        }
        // member 1 is (a = 2, b = 0), member 2 is (a = 1, b = 1)
        assert_eq!(fam.members()[1].row(1), &[0, 2, 4, 6, 8, 1, 3, 5, 7]);
        assert_eq!(fam.members()[2].row(0), &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(fam.members()[2].row(8), &[0; 9]);
    }

    #[test]
    fn thm41_members_distinct() {
        for n in [9, 15, 21, 25] {
            let fam = thm41_family(n, &Permutation::identity(n)).unwrap();
            let mu = smallest_prime_factor(n as u64).unwrap() as usize;
            assert_eq!(fam.len(), (mu - 1) * n);
            let mut grids: Vec<_> = fam.members().iter().map(|m| m.exponents().to_vec()).collect();
            grids.sort();
            grids.dedup();
            assert_eq!(grids.len(), fam.len());
        }
    }

    #[test]
    fn length_validation() {
        let id = Permutation::identity(8);
        assert_eq!(thm41_family(8, &id).unwrap_err(), Error::InvalidLength(8));
        assert_eq!(
            thm41_family(1, &Permutation::identity(1)).unwrap_err(),
            Error::InvalidLength(1)
        );
        assert!(thm41_family(9, &Permutation::identity(7)).is_err());
        assert!(thm42_family(9, &Permutation::reversal(9)).is_err());
        assert!(thm42_family(9, &Permutation::negation(9)).is_ok());
        assert!(thm41_row_deleted(9, &Permutation::identity(9), 0).is_err());
        assert!(thm41_row_deleted(9, &Permutation::identity(9), 10).is_err());
    }

    #[test]
    fn row_deletion_reproduces_thm42() {
        for rho in [Permutation::identity(15), Permutation::negation(15)] {
            let a = thm42_family(15, &rho).unwrap();
            let b = thm41_row_deleted(15, &rho, 1).unwrap();
            assert_eq!(a.members(), b.members());
            assert_eq!(a.shape(), (30, 14, 15));
        }
    }
}
