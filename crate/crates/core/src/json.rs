//! JSON conventions: dense matrices as row-major nested arrays, complex
//! entries as `[re, im]` pairs, and floats written with 17 significant
//! digits so that identical runs produce byte-identical files.

use std::io::{self, Write};
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{c, CMat, RMat};

/// `serde(with = ...)` adapter for complex matrices.
pub mod complex_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        from_rows(&rows).map_err(D::Error::custom)
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMat, String> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err("ragged complex matrix".into());
        }
        Ok(CMat::from_fn(n, m, |i, j| c(rows[i][j][0], rows[i][j][1])))
    }
}

/// `serde(with = ...)` adapter for lists of complex matrices.
pub mod complex_matrix_list {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::complex_matrix")] CMat);

    pub fn serialize<S: Serializer>(ms: &[CMat], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Wrap> = ms.iter().cloned().map(Wrap).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMat>, D::Error> {
        let wrapped: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(wrapped.into_iter().map(|w| w.0).collect())
    }
}

/// `serde(with = ...)` adapter for real matrices.
pub mod real_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &RMat, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RMat, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(d)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(D::Error::custom("ragged real matrix"));
        }
        Ok(RMat::from_fn(n, m, |i, j| rows[i][j]))
    }
}

/// Formats every float as `{:.16e}` (17 significant digits).
#[derive(Debug, Clone, Copy, Default)]
pub struct FixedPrecision;

impl serde_json::ser::Formatter for FixedPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{}", format_f64(value as f64))
    }
}

/// 17-significant-digit rendering used by JSON and CSV outputs.
pub fn format_f64(value: f64) -> String {
    if value == 0.0 {
        // normalize −0
        return format!("{:.16e}", 0.0);
    }
    format!("{value:.16e}")
}

pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedPrecision);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_file<T: Serialize>(path: impl AsRef<Path>, value: &T) -> crate::Result<()> {
    std::fs::write(path, to_string(value)?)?;
    Ok(())
}

pub fn read_file<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> crate::Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "complex_matrix")]
        m: CMat,
        x: f64,
    }

    #[test]
    fn fixed_precision_round_trips() {
        let h = Holder {
            m: CMat::from_fn(2, 2, |i, j| c(i as f64 + 0.1, -(j as f64) / 3.0)),
            x: std::f64::consts::PI,
        };
        let text = to_string(&h).unwrap();
        assert!(text.contains("3.1415926535897931e0"));
        let back: Holder = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(format_f64(-0.0), format_f64(0.0));
    }
}
