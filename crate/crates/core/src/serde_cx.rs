//! JSON encoding of complex data: every complex number is a two-element
//! array `[re, im]`, every matrix a list of rows.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::CMat;

pub fn to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMat, String> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
        return Err(format!("row {i} has {} entries, expected {c}", row.len()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub mod mat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub mod mat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[CMat], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMat>, D::Error> {
        let all = Vec::<Vec<Vec<[f64; 2]>>>::deserialize(d)?;
        all.iter()
            .map(|rows| from_rows(rows).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Wrapper for serializing a bare matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonMat(#[serde(with = "mat")] pub CMat);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    #[test]
    fn round_trip() {
        let m = CMat::from_fn(2, 3, |i, j| cx(i as f64, -(j as f64)));
        let s = serde_json::to_string(&JsonMat(m.clone())).unwrap();
        assert!(s.starts_with("[[[0.0,-0.0]"));
        let back: JsonMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, m);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = serde_json::from_str::<JsonMat>("[[[1,0],[2,0]],[[3,0]]]").unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }
}
