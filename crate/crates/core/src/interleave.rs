//! Column interleaving of a period `K·N` sequence into a `K×N` matrix:
//! entry `(k, t)` is `s(k + K·t)`.

use crate::model::{ComplementaryMatrix, PhaseSequence, QcssFamily, SequenceFamily};
use crate::{Error, Result};

pub fn interleave(seq: &PhaseSequence, flock: usize) -> Result<ComplementaryMatrix> {
    let period = seq.period();
    let invalid = |reason| Error::InvalidFlock {
        flock,
        period,
        reason,
    };
    if flock <= 1 {
        return Err(invalid("flock size must exceed 1"));
    }
    if period % flock != 0 {
        return Err(invalid("flock size must divide the period"));
    }
    let length = period / flock;
    if length <= 1 {
        return Err(invalid("resulting length must exceed 1"));
    }
    let s = seq.exponents();
    let grid = (0..flock)
        .flat_map(|k| (0..length).map(move |t| s[k + flock * t]))
        .collect();
    ComplementaryMatrix::new(seq.order(), flock, length, grid)
}

/// Inverse of [`interleave`]: `s(k + K·t) = mat[k][t]`.
pub fn flatten(mat: &ComplementaryMatrix) -> PhaseSequence {
    let (flock, length) = (mat.flock(), mat.length());
    let mut out = vec![0; flock * length];
    for (k, row) in mat.rows().enumerate() {
        for (t, &e) in row.iter().enumerate() {
            out[k + flock * t] = e;
        }
    }
    PhaseSequence::new(mat.order(), out).expect("matrix exponents already validated")
}

/// Interleaves every member. The declared tolerance carries over from the
/// sequence set (interleaving cannot raise the maximum correlation). A
/// result with `M ≤ K` is still returned; see [`QcssFamily::qcss_shape_issue`].
pub fn interleave_family(fam: &SequenceFamily, flock: usize) -> Result<QcssFamily> {
    let members = fam
        .members()
        .iter()
        .map(|s| interleave(s, flock))
        .collect::<Result<Vec<_>>>()?;
    let mut metadata = fam.metadata.clone();
    let kind = match fam.metadata.kind() {
        Some(k) => format!("{k}-interleaved"),
        None => "interleaved".to_string(),
    };
    metadata.set("kind", kind);
    QcssFamily::new(members, fam.declared_theta_max, metadata)
}
