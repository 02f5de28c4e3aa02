//! Parsing of exact inputs: rationals, vectors, atom lists, and point files.
//!
//! The convention everywhere is that rationals arrive as `p/q` or integer
//! strings. Plain JSON integers are exact and always accepted; any other
//! number is a float and is only admitted when the user passes
//! `--dyadic-bits`, which makes the rounding step explicit.

use originlab::error::Error;
use originlab::rational::{dyadic_from_f64, parse_rational};
use originlab::Scalar as _;
use originlab::{Matrix, Q, QMatrix, QVector};
use std::fs;
use std::path::Path;

/// Parses a scalar argument: exact `p/q` first, decimal only with the gate.
pub fn scalar(text: &str, dyadic_bits: Option<u32>) -> Result<Q, Error> {
    match parse_rational(text) {
        Ok(q) => Ok(q),
        Err(exact_err) => {
            let Some(bits) = dyadic_bits else {
                return Err(exact_err);
            };
            let x: f64 = text.trim().parse().map_err(|_| Error::InvalidRational {
                input: text.to_string(),
                reason: "neither a rational nor a decimal number".into(),
            })?;
            dyadic_from_f64(x, bits)
        }
    }
}

/// Parses a comma-separated vector of scalars, e.g. `1,0,-3/2`.
pub fn vector(text: &str, dyadic_bits: Option<u32>) -> Result<QVector, Error> {
    text.split(',').map(|t| scalar(t, dyadic_bits)).collect()
}

/// Parses `value:weight` atom pairs separated by commas,
/// e.g. `2:1/3,-1:2/3`.
pub fn atom_pairs(text: &str, dyadic_bits: Option<u32>) -> Result<Vec<(Q, Q)>, Error> {
    text.split(',')
        .map(|pair| {
            let (v, w) = pair.split_once(':').ok_or_else(|| {
                Error::ConfigError(format!("atom `{pair}` is not of the form value:weight"))
            })?;
            Ok((scalar(v, dyadic_bits)?, scalar(w, dyadic_bits)?))
        })
        .collect()
}

/// Parses a comma-separated list of dimensions, e.g. `4,6,8,10`.
pub fn dimension_list(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::ConfigError(format!("`{t}` is not a dimension")))
        })
        .collect()
}

fn entry_from_json(value: &serde_json::Value, dyadic_bits: Option<u32>) -> Result<Q, Error> {
    match value {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                return Ok(Q::from_i64(i));
            }
            let Some(bits) = dyadic_bits else {
                return Err(Error::ConfigError(format!(
                    "entry {num} is not an exact integer; pass --dyadic-bits to \
                     round floats explicitly"
                )));
            };
            let x = num.as_f64().ok_or_else(|| Error::InvalidRational {
                input: num.to_string(),
                reason: "not representable as f64".into(),
            })?;
            dyadic_from_f64(x, bits)
        }
        other => Err(Error::ConfigError(format!(
            "matrix entries must be rational strings or numbers, got {other}"
        ))),
    }
}

/// Reads a JSON file holding an array of equal-length rows of rationals.
pub fn matrix_file(path: &Path, dyadic_bits: Option<u32>) -> Result<QMatrix, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::ConfigError(format!("{} is not JSON: {e}", path.display())))?;
    let rows_json = value
        .as_array()
        .ok_or_else(|| Error::ConfigError("points file must be a JSON array of rows".into()))?;
    let mut rows = Vec::with_capacity(rows_json.len());
    for row in rows_json {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::ConfigError("each row must be a JSON array".into()))?;
        rows.push(
            entries
                .iter()
                .map(|e| entry_from_json(e, dyadic_bits))
                .collect::<Result<Vec<Q>, Error>>()?,
        );
    }
    Matrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn scalars_parse_exactly_and_gate_floats() {
        assert_eq!(scalar("-3/2", None).unwrap(), q(-3, 2));
        assert_eq!(scalar("7", None).unwrap(), q(7, 1));
        assert!(scalar("0.5", None).is_err());
        assert_eq!(scalar("0.5", Some(8)).unwrap(), q(1, 2));
    }

    #[test]
    fn vectors_and_atoms_split_on_commas() {
        assert_eq!(vector("1,0,-3/2", None).unwrap(), vec![q(1, 1), q(0, 1), q(-3, 2)]);
        assert_eq!(
            atom_pairs("2:1/3,-1:2/3", None).unwrap(),
            vec![(q(2, 1), q(1, 3)), (q(-1, 1), q(2, 3))]
        );
        assert!(atom_pairs("2@1/3", None).is_err());
        assert_eq!(dimension_list("4, 6,8").unwrap(), vec![4, 6, 8]);
        assert!(dimension_list("4,x").is_err());
    }

    #[test]
    fn matrix_files_accept_strings_and_integers_only_by_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.json");
        fs::write(&path, r#"[["1","-1/2"],[0,2]]"#).unwrap();
        let m = matrix_file(&path, None).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(*m.get(0, 1), q(-1, 2));
        assert_eq!(*m.get(1, 1), q(2, 1));

        fs::write(&path, r#"[[0.25]]"#).unwrap();
        assert!(matrix_file(&path, None).is_err());
        assert_eq!(*matrix_file(&path, Some(4)).unwrap().get(0, 0), q(1, 4));

        fs::write(&path, r#"[[1],[1,2]]"#).unwrap();
        assert!(matrix_file(&path, None).is_err());
    }
}
