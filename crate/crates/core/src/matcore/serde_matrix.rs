//! Serde adapter: a matrix as row-major nested arrays of `[re, im]` pairs.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{c, ComplexMatrix};

pub fn to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Rebuilds a rows x cols matrix; every row must have `cols` entries.
pub fn from_rows(rows: usize, cols: usize, data: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, String> {
    if data.len() != rows {
        return Err(format!("expected {rows} rows, found {}", data.len()));
    }
    if let Some((i, row)) = data.iter().enumerate().find(|(_, row)| row.len() != cols) {
        return Err(format!("row {i} has {} entries, expected {cols}", row.len()));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| c(data[i][j][0], data[i][j][1])))
}

pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
    to_rows(m).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
    let data = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
    let rows = data.len();
    let cols = data.first().map_or(0, Vec::len);
    from_rows(rows, cols, &data).map_err(D::Error::custom)
}
