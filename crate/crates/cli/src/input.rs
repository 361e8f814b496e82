//! Loading JSON inputs and built-in names, with errors that point at the
//! offending file and line.

use std::path::Path;

use reflexa_core::bialgebra::{function_bialgebra, group_bialgebra, FinBialgebra, GroupTable};
use reflexa_core::findual::RecursiveFunctional;
use reflexa_core::matrix::Vector;
use reflexa_core::tower::{completed_tensor, AlgebraTower};
use reflexa_core::{Field, Scalar, Tower};
use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: field mismatch: input is over {found}, --field asks for {expected}")]
    FieldMismatch { path: String, expected: Field, found: Field },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] reflexa_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn load<T: DeserializeOwned>(path: &str) -> CliResult<T> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Read {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| {
        let message = strip_position(&e.to_string());
        if e.line() == 0 {
            CliError::Read {
                path: path.to_string(),
                message,
            }
        } else {
            CliError::Parse {
                path: path.to_string(),
                line: e.line(),
                column: e.column(),
                message,
            }
        }
    })
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

fn convert(path: &str, found: Field, expected: Field, xs: &[Scalar]) -> CliResult<Vector> {
    if found != expected && found != Field::Rational {
        return Err(CliError::FieldMismatch {
            path: path.to_string(),
            expected,
            found,
        });
    }
    xs.iter()
        .map(|x| {
            x.clone().into_field(expected).map_err(|_| CliError::FieldMismatch {
                path: path.to_string(),
                expected,
                found,
            })
        })
        .collect()
}

/// Rational data is moved into `field`; data over another prime field is rejected.
pub fn check_field(path: &str, found: Field, expected: Field) -> CliResult<()> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::FieldMismatch {
            path: path.to_string(),
            expected,
            found,
        })
    }
}

/// `K[G]` or `K^G` for a built-in group, a bare group name (meaning
/// `K[G]`), a group table file, or a bialgebra file.
pub fn bialgebra(arg: &str, field: Field) -> CliResult<FinBialgebra> {
    if let Some(name) = arg.strip_prefix("K[").and_then(|s| s.strip_suffix(']')) {
        let g = GroupTable::by_name(name).ok_or_else(|| CliError::Usage(format!("unknown group {name:?}")))?;
        return Ok(group_bialgebra(field, &g)?);
    }
    if let Some(name) = arg.strip_prefix("K^") {
        let g = GroupTable::by_name(name).ok_or_else(|| CliError::Usage(format!("unknown group {name:?}")))?;
        return Ok(function_bialgebra(field, &g)?);
    }
    if let Some(g) = GroupTable::by_name(arg) {
        return Ok(group_bialgebra(field, &g)?);
    }
    let value: serde_json::Value = load(arg)?;
    if value.get("table").is_some() {
        let g: GroupTable = load(arg)?;
        return Ok(group_bialgebra(field, &g)?);
    }
    let b: FinBialgebra = load(arg)?;
    if b.field() == field {
        return Ok(b);
    }
    if b.field() != Field::Rational {
        return Err(CliError::FieldMismatch {
            path: arg.to_string(),
            expected: field,
            found: b.field(),
        });
    }
    b.into_field(field).map_err(|_| CliError::FieldMismatch {
        path: arg.to_string(),
        expected: field,
        found: b.field(),
    })
}

/// `power-series:N`, `constant:R` (depth from `--depth`), `product:N`, or a file.
pub fn tower(arg: &str, field: Field, depth: usize) -> CliResult<Tower> {
    let bad = || CliError::Usage(format!("bad tower name {arg:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if let Some(n) = arg.strip_prefix("power-series:") {
        return Ok(Tower::power_series(field, num(n)?));
    }
    if arg == "power-series" {
        return Ok(Tower::power_series(field, depth));
    }
    if let Some(r) = arg.strip_prefix("constant:") {
        return Ok(Tower::constant(field, num(r)?, depth));
    }
    if let Some(n) = arg.strip_prefix("product:") {
        let p = AlgebraTower::power_series(field, num(n)?);
        return Ok(completed_tensor(&p, &p)?.tower);
    }
    let t: Tower = load(arg)?;
    check_field(arg, t.field(), field)?;
    Ok(t)
}

pub fn functional(arg: &str, field: Field) -> CliResult<RecursiveFunctional> {
    let r: RecursiveFunctional = load(arg)?;
    let a = convert(arg, r.field(), field, r.annihilator())?;
    let v = convert(arg, r.field(), field, r.values())?;
    Ok(RecursiveFunctional::new(field, r.model(), a, v)?)
}

pub fn scalars(arg: &str, field: Field) -> CliResult<Vector> {
    let xs: Vec<Scalar> = load(arg)?;
    let found = xs.iter().map(Scalar::field).find(|f| *f != Field::Rational).unwrap_or(Field::Rational);
    convert(arg, found, field, &xs)
}

pub fn vectors(arg: &str, field: Field) -> CliResult<Vec<Vector>> {
    let rows: Vec<Vec<Scalar>> = load(arg)?;
    rows.iter()
        .map(|xs| {
            let found = xs.iter().map(Scalar::field).find(|f| *f != Field::Rational).unwrap_or(Field::Rational);
            convert(arg, found, field, xs)
        })
        .collect()
}
