//! Plain-text model container.
//!
//! ```text
//! pareto-rank-model v1
//! {"algorithm":"ppr","scalar":"f64","d":2,"n_users":1,"n_items":1,"seed":7,"config":{...}}
//! U
//! 0.25 0.5
//! V
//! 0.125 1
//! ```
//!
//! Values use the shortest representation that parses back to the same
//! bits. Scorers without factors (d = 0) store the header only.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::FactorModel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAGIC: &str = "pareto-rank-model v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelHeader {
    pub algorithm: String,
    pub scalar: String,
    pub d: usize,
    pub n_users: usize,
    pub n_items: usize,
    pub seed: u64,
    /// Resolved run configuration that produced the model.
    pub config: serde_json::Value,
}

fn write_block<T: Scalar, W: Write + ?Sized>(out: &mut W, rows: &[T], d: usize) -> Result<()> {
    for row in rows.chunks(d) {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Write a header and, when present, the factor rows.
pub fn write_artifact<T: Scalar, W: Write + ?Sized>(
    out: &mut W,
    header: &ModelHeader,
    model: Option<&FactorModel<T>>,
) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "{}", serde_json::to_string(header)?)?;
    if let Some(model) = model {
        if header.d != model.d() || header.n_users != model.n_users() || header.n_items != model.n_items() {
            return Err(Error::Artifact("header does not describe the model being written".into()));
        }
        writeln!(out, "U")?;
        write_block(out, model.users(), model.d())?;
        writeln!(out, "V")?;
        write_block(out, model.items(), model.d())?;
    }
    Ok(())
}

fn read_block<T: Scalar>(
    lines: &mut impl Iterator<Item = std::io::Result<String>>,
    tag: &str,
    rows: usize,
    d: usize,
) -> Result<Vec<T>> {
    let next = |lines: &mut dyn Iterator<Item = std::io::Result<String>>| -> Result<String> {
        lines.next().ok_or_else(|| Error::Artifact("unexpected end of file".into()))?.map_err(Error::from)
    };
    if next(lines)?.trim_end() != tag {
        return Err(Error::Artifact(format!("expected section {tag}")));
    }
    let mut values = Vec::with_capacity(rows * d);
    for r in 0..rows {
        let line = next(lines)?;
        let before = values.len();
        for field in line.split_whitespace() {
            let x: T = field.parse().map_err(|_| Error::Artifact(format!("{tag} row {r}: bad number {field:?}")))?;
            values.push(x);
        }
        if values.len() - before != d {
            return Err(Error::Artifact(format!("{tag} row {r}: expected {d} values")));
        }
    }
    Ok(values)
}

/// Read an artifact written by [`write_artifact`]. The factor model is
/// `None` for header-only artifacts.
pub fn read_artifact<T: Scalar, R: BufRead>(input: R) -> Result<(ModelHeader, Option<FactorModel<T>>)> {
    let mut lines = input.lines();
    let magic = lines.next().transpose()?.unwrap_or_default();
    if magic.trim_end() != MAGIC {
        return Err(Error::Artifact(format!("unrecognised magic line {magic:?}")));
    }
    let header_line = lines.next().transpose()?.ok_or_else(|| Error::Artifact("missing header".into()))?;
    let header: ModelHeader = serde_json::from_str(&header_line)?;
    if header.d == 0 {
        return Ok((header, None));
    }
    if header.scalar != T::NAME {
        return Err(Error::Artifact(format!("artifact holds {} factors, requested {}", header.scalar, T::NAME)));
    }
    let users = read_block(&mut lines, "U", header.n_users, header.d)?;
    let items = read_block(&mut lines, "V", header.n_items, header.d)?;
    let model = FactorModel::from_rows(header.d, users, items)?;
    Ok((header, Some(model)))
}
