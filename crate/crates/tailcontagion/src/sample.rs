//! Bivariate sample container and CSV persistence.
//!
//! Samples are stored column-wise. CSV files carry a `z1,z2` header, one
//! pair per row, and may start with `#` comment lines (the CLI writes
//! provenance there). Values are written with 17 significant digits so a
//! write/read round trip reproduces every `f64` bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// A sample of n pairs (z1, z2), stored as two equal-length columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSample {
    z1: Vec<f64>,
    z2: Vec<f64>,
}

impl BivariateSample {
    /// Build a sample from two columns of equal length with finite entries.
    pub fn from_columns(z1: Vec<f64>, z2: Vec<f64>) -> Result<Self> {
        if z1.len() != z2.len() {
            return Err(Error::InvalidParameter {
                name: "columns".into(),
                value: format!("{} vs {}", z1.len(), z2.len()),
                constraint: "z1 and z2 must have equal length".into(),
            });
        }
        for (i, (&a, &b)) in z1.iter().zip(&z2).enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "pair".into(),
                    value: format!("({a}, {b}) at row {i}"),
                    constraint: "sample values must be finite".into(),
                });
            }
        }
        Ok(Self { z1, z2 })
    }

    /// Build a sample from pairs.
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let (z1, z2) = pairs.into_iter().unzip();
        Self::from_columns(z1, z2)
    }

    pub fn len(&self) -> usize {
        self.z1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z1.is_empty()
    }

    pub fn z1(&self) -> &[f64] {
        &self.z1
    }

    pub fn z2(&self) -> &[f64] {
        &self.z2
    }

    /// Iterate over (z1, z2) pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.z1.iter().copied().zip(self.z2.iter().copied())
    }

    /// The same sample with both coordinates multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            z1: self.z1.iter().map(|v| c * v).collect(),
            z2: self.z2.iter().map(|v| c * v).collect(),
        }
    }

    /// Write as CSV: comment lines first, then the `z1,z2` header and rows.
    pub fn write_csv<W: Write>(&self, w: &mut W, comments: &[String]) -> Result<()> {
        for line in comments {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "z1,z2")?;
        for (a, b) in self.pairs() {
            writeln!(w, "{a:.16e},{b:.16e}")?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path, comments: &[String]) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_csv(&mut w, comments)?;
        w.flush()?;
        Ok(())
    }

    /// Read CSV written by [`write_csv`](Self::write_csv). Comment lines
    /// (`#`) and blank lines are skipped anywhere; a leading `z1,z2` header
    /// is optional.
    pub fn read_csv<R: BufRead>(r: R, source_name: &str) -> Result<Self> {
        let mut z1 = Vec::new();
        let mut z2 = Vec::new();
        let mut seen_data = false;
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !seen_data && line.eq_ignore_ascii_case("z1,z2") {
                seen_data = true;
                continue;
            }
            seen_data = true;
            let mut fields = line.split(',');
            let parse = |field: Option<&str>| -> std::result::Result<f64, String> {
                let field = field.ok_or("expected two comma-separated values")?;
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad number {:?}: {e}", field.trim()))
            };
            let a = parse(fields.next());
            let b = parse(fields.next());
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    z1.push(a);
                    z2.push(b);
                }
                (Err(message), _) | (_, Err(message)) => {
                    return Err(Error::Parse {
                        source_name: source_name.into(),
                        line: idx + 1,
                        message,
                    });
                }
            }
        }
        if z1.is_empty() {
            return Err(Error::EmptyInput {
                context: format!("no sample rows in {source_name}"),
            });
        }
        Self::from_columns(z1, z2)
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        let r = BufReader::new(File::open(path)?);
        Self::read_csv(r, &path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let sample = BivariateSample::from_pairs([
            (1.0, 2.0),
            (std::f64::consts::PI, 1.0 / 3.0),
            (1.2345678901234567e8, 9.876543210987654e-7),
            (1.0 + f64::EPSILON, 1e300),
        ])
        .unwrap();
        let mut buf = Vec::new();
        sample.write_csv(&mut buf, &["seed = 7".into()]).unwrap();
        let back = BivariateSample::read_csv(buf.as_slice(), "buffer").unwrap();
        assert_eq!(sample, back);
    }

    #[test]
    fn comments_and_header_are_skipped() {
        let text = "# provenance line\n# another\nz1,z2\n1.5,2.5\n\n# mid comment\n3.0,4.0\n";
        let sample = BivariateSample::read_csv(text.as_bytes(), "inline").unwrap();
        assert_eq!(sample.len(), 2);
        assert_eq!(sample.z1(), &[1.5, 3.0]);
        assert_eq!(sample.z2(), &[2.5, 4.0]);
    }

    #[test]
    fn headerless_files_parse_too() {
        let sample = BivariateSample::read_csv("1.0,2.0\n3.0,4.0\n".as_bytes(), "inline").unwrap();
        assert_eq!(sample.len(), 2);
    }

    #[test]
    fn bad_rows_report_their_line_number() {
        let text = "z1,z2\n1.0,2.0\n1.0,oops\n";
        let err = BivariateSample::read_csv(text.as_bytes(), "inline").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn missing_second_field_is_an_error() {
        let err = BivariateSample::read_csv("1.0\n".as_bytes(), "inline").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_input_is_rejected() {
        let err = BivariateSample::read_csv("# only comments\n".as_bytes(), "inline").unwrap_err();
        assert!(matches!(err, Error::EmptyInput { .. }));
    }

    #[test]
    fn mismatched_columns_are_rejected() {
        let err = BivariateSample::from_columns(vec![1.0], vec![1.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let err = BivariateSample::from_pairs([(1.0, f64::NAN)]).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }));
        let err = BivariateSample::from_pairs([(f64::INFINITY, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { .. }));
    }

    #[test]
    fn scaling_multiplies_both_coordinates() {
        let sample = BivariateSample::from_pairs([(1.0, 2.0), (3.0, 4.0)]).unwrap();
        let scaled = sample.scaled(2.5);
        assert_eq!(scaled.z1(), &[2.5, 7.5]);
        assert_eq!(scaled.z2(), &[5.0, 10.0]);
    }
}
