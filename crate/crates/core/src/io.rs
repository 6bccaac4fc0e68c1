//! `QSEQ1` / `QMAT1` text formats.
//!
//! ```text
//! QMAT1                 QSEQ1
//! order 9               order 30
//! flock 9               period 15
//! length 9              members 15
//! members 18            declared 4
//! declared 9            meta kind prop1
//! meta kind thm41
//!                       0 15 15 ...
//! 0 0 0 0 0 0 0 0 0
//! 0 1 2 3 4 5 6 7 8     0 21 27 ...
//! ...
//! ```
//!
//! A header of `key value` lines, a blank line, then one record per member
//! separated by blank lines. Matrix records hold `flock` rows of `length`
//! exponents; sequence records hold one row of `period` exponents.
//! `declared` and `meta` lines are optional.

use crate::model::{ComplementaryMatrix, Metadata, PhaseSequence, QcssFamily, SequenceFamily};
use crate::{Error, Result};

pub const SEQUENCE_TAG: &str = "QSEQ1";
pub const MATRIX_TAG: &str = "QMAT1";

/// Worked-example corpus shipped with the crate: `(file name, contents)`.
pub const GOLDEN: [(&str, &str); 3] = [
    ("prop1_q16_k3.qmat", include_str!("../golden/prop1_q16_k3.qmat")),
    ("thm41_n9.qmat", include_str!("../golden/thm41_n9.qmat")),
    ("thm42_n9.qmat", include_str!("../golden/thm42_n9.qmat")),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Sequences(SequenceFamily),
    Matrices(QcssFamily),
}

impl Document {
    pub fn serialize(&self) -> String {
        match self {
            Document::Sequences(f) => serialize_sequences(f),
            Document::Matrices(f) => serialize_matrices(f),
        }
    }
}

fn header_tail(out: &mut String, declared: Option<f64>, metadata: &Metadata) {
    if let Some(d) = declared {
        out.push_str(&format!("declared {d}\n"));
    }
    for (k, v) in metadata.iter() {
        out.push_str(&format!("meta {k} {v}\n"));
    }
}

fn push_row(out: &mut String, row: &[u32]) {
    let mut first = true;
    for e in row {
        if !first {
            out.push(' ');
        }
        out.push_str(&e.to_string());
        first = false;
    }
    out.push('\n');
}

pub fn serialize_sequences(fam: &SequenceFamily) -> String {
    let mut out = format!(
        "{SEQUENCE_TAG}\norder {}\nperiod {}\nmembers {}\n",
        fam.order(),
        fam.period(),
        fam.len()
    );
    header_tail(&mut out, fam.declared_theta_max, &fam.metadata);
    for s in fam.members() {
        out.push('\n');
        push_row(&mut out, s.exponents());
    }
    out
}

pub fn serialize_matrices(fam: &QcssFamily) -> String {
    let mut out = format!(
        "{MATRIX_TAG}\norder {}\nflock {}\nlength {}\nmembers {}\n",
        fam.order(),
        fam.flock(),
        fam.length(),
        fam.len()
    );
    header_tail(&mut out, fam.declared_vartheta_max, &fam.metadata);
    for m in fam.members() {
        out.push('\n');
        for row in m.rows() {
            push_row(&mut out, row);
        }
    }
    out
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Header {
    order: Option<u32>,
    period: Option<usize>,
    flock: Option<usize>,
    length: Option<usize>,
    members: Option<usize>,
    declared: Option<f64>,
    metadata: Metadata,
}

fn parse_number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| perr(line, format!("invalid value {value:?} for {key}")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<()> {
    if slot.replace(value).is_some() {
        return Err(perr(line, format!("duplicate header field {key}")));
    }
    Ok(())
}

pub fn parse(text: &str) -> Result<Document> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .collect();
    let (_, tag) = *lines.first().ok_or_else(|| perr(1, "empty document"))?;
    let matrices = match tag {
        MATRIX_TAG => true,
        SEQUENCE_TAG => false,
        other => return Err(perr(1, format!("unknown format tag {other:?}"))),
    };

    let mut header = Header::default();
    let mut pos = 1;
    while pos < lines.len() && !lines[pos].1.trim().is_empty() {
        let (no, line) = lines[pos];
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| perr(no, format!("malformed header line {line:?}")))?;
        match (key, matrices) {
            ("order", _) => set_once(&mut header.order, parse_number(no, key, value)?, no, key)?,
            ("members", _) => {
                set_once(&mut header.members, parse_number(no, key, value)?, no, key)?
            }
            ("period", false) => {
                set_once(&mut header.period, parse_number(no, key, value)?, no, key)?
            }
            ("flock", true) => set_once(&mut header.flock, parse_number(no, key, value)?, no, key)?,
            ("length", true) => {
                set_once(&mut header.length, parse_number(no, key, value)?, no, key)?
            }
            ("declared", _) => {
                let d: f64 = parse_number(no, key, value)?;
                if !(d.is_finite() && d >= 0.0) {
                    return Err(perr(no, "declared value must be a nonnegative real"));
                }
                set_once(&mut header.declared, d, no, key)?
            }
            ("meta", _) => {
                let (k, v) = value.split_once(' ').unwrap_or((value, ""));
                if k.is_empty() {
                    return Err(perr(no, "empty metadata key"));
                }
                header.metadata.set(k, v);
            }
            _ => return Err(perr(no, format!("unexpected header field {key:?}"))),
        }
        pos += 1;
    }
    let header_end = lines.get(pos).map_or(lines.len() + 1, |l| l.0);
    let missing = |what: &str| perr(header_end, format!("header is missing {what}"));
    let order = header.order.ok_or_else(|| missing("order"))?;
    if order == 0 {
        return Err(perr(header_end, "order must be positive"));
    }
    let members = header.members.ok_or_else(|| missing("members"))?;
    let (rows_per, cols) = if matrices {
        (
            header.flock.ok_or_else(|| missing("flock"))?,
            header.length.ok_or_else(|| missing("length"))?,
        )
    } else {
        (1, header.period.ok_or_else(|| missing("period"))?)
    };
    if members == 0 || rows_per == 0 || cols == 0 {
        return Err(perr(header_end, "members and dimensions must be positive"));
    }

    // Records: runs of nonblank lines.
    let mut records: Vec<Vec<(usize, &str)>> = Vec::new();
    let mut current = Vec::new();
    for &(no, line) in &lines[pos..] {
        if line.trim().is_empty() {
            if !current.is_empty() {
                records.push(std::mem::take(&mut current));
            }
        } else {
            current.push((no, line));
        }
    }
    if !current.is_empty() {
        records.push(current);
    }
    if records.len() != members {
        let line = records.last().and_then(|r| r.last()).map_or(header_end, |l| l.0);
        return Err(perr(
            line,
            format!("header declares {members} members, body has {}", records.len()),
        ));
    }

    let mut grids = Vec::with_capacity(members);
    for record in &records {
        if record.len() != rows_per {
            return Err(perr(
                record[0].0,
                format!("record has {} rows, expected {rows_per}", record.len()),
            ));
        }
        let mut grid = Vec::with_capacity(rows_per * cols);
        for &(no, line) in record {
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|tok| {
                    let e: u32 = tok
                        .parse()
                        .map_err(|_| perr(no, format!("invalid exponent {tok:?}")))?;
                    if e >= order {
                        return Err(perr(no, format!("exponent {e} out of range for order {order}")));
                    }
                    Ok(e)
                })
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(perr(no, format!("row has {} entries, expected {cols}", row.len())));
            }
            grid.extend(row);
        }
        grids.push(grid);
    }

    if matrices {
        let members = grids
            .into_iter()
            .map(|g| ComplementaryMatrix::new(order, rows_per, cols, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Document::Matrices(QcssFamily::new(
            members,
            header.declared,
            header.metadata,
        )?))
    } else {
        let members = grids
            .into_iter()
            .map(|g| PhaseSequence::new(order, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Document::Sequences(SequenceFamily::new(
            members,
            header.declared,
            header.metadata,
        )?))
    }
}

pub fn golden(name: &str) -> Option<&'static str> {
    GOLDEN.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
