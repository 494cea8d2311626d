//! Sample-set and partition CSV.
//!
//! Sample sets use a header `x,y` and one sample per line; partitions use a
//! single `x` column. Values are `p/q` fractions or decimals.

use std::fmt::Write as _;

use thiserror::Error;

use crate::interp::{InterpError, SampleSet};
use crate::scalar::{Field, Scalar, ScalarError};
use crate::vandermonde::{LinalgError, NodeVector};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: {source}")]
    Value { line: u64, source: ScalarError },
    #[error("expected header {expected:?}, found {found:?}")]
    Header { expected: String, found: String },
    #[error("no samples")]
    Empty,
    #[error(transparent)]
    Nodes(#[from] LinalgError),
    #[error(transparent)]
    Samples(#[from] InterpError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Parses a value into backend `T` by way of [`Scalar::parse`].
pub trait ParseScalar: Field {
    fn parse_scalar(text: &str) -> Result<Self, ScalarError>;
}

impl ParseScalar for crate::scalar::Rational {
    fn parse_scalar(text: &str) -> Result<Self, ScalarError> {
        match Scalar::parse(text, Self::BACKEND)? {
            Scalar::Exact(r) => Ok(r),
            Scalar::Float(_) => unreachable!("exact parse yields exact values"),
        }
    }
}

impl ParseScalar for f64 {
    fn parse_scalar(text: &str) -> Result<Self, ScalarError> {
        Ok(Scalar::parse(text, Self::BACKEND)?.to_f64())
    }
}

fn reader(input: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(input.as_bytes())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<(), CsvError> {
    let headers = rdr.headers()?.clone();
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(CsvError::Header { expected: expected.join(","), found: found.join(",") });
    }
    Ok(())
}

pub fn read_samples<T: ParseScalar>(input: &str) -> Result<SampleSet<T>, CsvError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &["x", "y"])?;
    let mut pairs = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(CsvError::Malformed { line, message: format!("expected 2 fields, found {}", record.len()) });
        }
        let parse = |s: &str| T::parse_scalar(s).map_err(|source| CsvError::Value { line, source });
        pairs.push((parse(&record[0])?, parse(&record[1])?));
    }
    if pairs.is_empty() {
        return Err(CsvError::Empty);
    }
    Ok(SampleSet::from_pairs(pairs)?)
}

pub fn write_samples<T: Field>(samples: &SampleSet<T>) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in samples.iter() {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

pub fn read_partition<T: ParseScalar>(input: &str) -> Result<NodeVector<T>, CsvError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &["x"])?;
    let mut nodes = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 1 {
            return Err(CsvError::Malformed { line, message: format!("expected 1 field, found {}", record.len()) });
        }
        nodes.push(T::parse_scalar(&record[0]).map_err(|source| CsvError::Value { line, source })?);
    }
    if nodes.is_empty() {
        return Err(CsvError::Empty);
    }
    Ok(NodeVector::new(nodes)?)
}

pub fn write_partition<T: Field>(nodes: &NodeVector<T>) -> String {
    let mut out = String::from("x\n");
    for x in nodes {
        let _ = writeln!(out, "{x}");
    }
    out
}

/// Comma-separated inline list such as `-1,0,1` or `1/2, 3/4`.
pub fn parse_node_list<T: ParseScalar>(list: &str) -> Result<NodeVector<T>, CsvError> {
    let nodes = list
        .split(',')
        .map(|s| T::parse_scalar(s).map_err(|source| CsvError::Value { line: 1, source }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NodeVector::new(nodes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn reads_sample_csv() {
        let s: SampleSet<Rational> = read_samples("x,y\n-1,3\n-1/3,163/81\n1/3, 163/81\n1,3\n").unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.values()[1], q(163, 81));
        let f: SampleSet<f64> = read_samples("x,y\n0.5,0.25\n1,1\n").unwrap();
        assert_eq!(f.nodes().as_slice(), &[0.5, 1.0]);
    }

    #[test]
    fn malformed_lines_are_reported() {
        match read_samples::<Rational>("x,y\n0,1\n1,abc\n") {
            Err(CsvError::Value { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match read_samples::<Rational>("x,y\n0,1\n1,2,3\n") {
            Err(CsvError::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_samples::<Rational>("a,b\n0,1\n"), Err(CsvError::Header { .. })));
        assert!(matches!(read_samples::<Rational>("x,y\n"), Err(CsvError::Empty)));
        assert!(matches!(read_samples::<Rational>("x,y\n1,0\n0,0\n"), Err(CsvError::Samples(_))));
    }

    #[test]
    fn partition_round_trip() {
        let nodes = parse_node_list::<Rational>("-1, -1/2, 0, 0.5, 1").unwrap();
        let text = write_partition(&nodes);
        assert_eq!(text, "x\n-1\n-1/2\n0\n1/2\n1\n");
        assert_eq!(read_partition::<Rational>(&text).unwrap(), nodes);
        let s = SampleSet::new(nodes.clone(), nodes.as_slice().to_vec()).unwrap();
        assert_eq!(read_samples::<Rational>(&write_samples(&s)).unwrap(), s);
        assert!(parse_node_list::<Rational>("0,1,1").is_err());
    }
}
