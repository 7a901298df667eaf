use crate::error::{Error, Result};

use super::SIMPLEX_TOLERANCE;

/// Row-major `m x d` matrix of per-arm mean vectors, entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanMatrix {
    arms: usize,
    dimension: usize,
    data: Vec<f64>,
}

impl MeanMatrix {
    pub fn zeros(arms: usize, dimension: usize) -> Self {
        Self {
            arms,
            dimension,
            data: vec![0.0; arms * dimension],
        }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dimension = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * dimension);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dimension {
                return Err(Error::DimensionMismatch {
                    context: "mean matrix row",
                    expected: dimension,
                    actual: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                check_probability(v, || format!("({i}, {j})"))?;
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            arms: rows.len(),
            dimension,
            data,
        })
    }

    /// Builds from a flat row-major buffer.
    pub fn from_flat(arms: usize, dimension: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != arms * dimension {
            return Err(Error::DimensionMismatch {
                context: "mean matrix buffer",
                expected: arms * dimension,
                actual: data.len(),
            });
        }
        for (k, &v) in data.iter().enumerate() {
            check_probability(v, || format!("({}, {})", k / dimension.max(1), k % dimension.max(1)))?;
        }
        Ok(Self {
            arms,
            dimension,
            data,
        })
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn row(&self, arm: usize) -> &[f64] {
        &self.data[arm * self.dimension..(arm + 1) * self.dimension]
    }

    /// Mutable row access. Callers are responsible for keeping entries in
    /// `[0, 1]`.
    pub fn row_mut(&mut self, arm: usize) -> &mut [f64] {
        &mut self.data[arm * self.dimension..(arm + 1) * self.dimension]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dimension.max(1)).take(self.arms)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Checks every row sums to one within [`SIMPLEX_TOLERANCE`].
    pub fn check_simplex_rows(&self) -> Result<()> {
        for (i, row) in self.rows().enumerate() {
            check_simplex(row, || format!("{i}"))?;
        }
        Ok(())
    }
}

pub(crate) fn check_probability(value: f64, context: impl FnOnce() -> String) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::NotAProbability {
            context: context(),
            value,
        })
    }
}

pub(crate) fn check_simplex(row: &[f64], context: impl FnOnce() -> String) -> Result<()> {
    let sum: f64 = row.iter().sum();
    if row.iter().all(|&p| p >= 0.0) && (sum - 1.0).abs() <= SIMPLEX_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NotSimplex {
            context: context(),
            sum,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(MeanMatrix::from_rows(&[[0.5, 1.5]]).is_err());
        assert!(MeanMatrix::from_rows(&[[0.5, -0.1]]).is_err());
        assert!(MeanMatrix::from_rows(&[[0.5, f64::NAN]]).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: Vec<Vec<f64>> = vec![vec![0.5, 0.5], vec![1.0]];
        assert!(matches!(
            MeanMatrix::from_rows(&rows),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn simplex_check() {
        let m = MeanMatrix::from_rows(&[[0.3, 0.7], [0.5, 0.5]]).unwrap();
        m.check_simplex_rows().unwrap();
        let bad = MeanMatrix::from_rows(&[[0.3, 0.6]]).unwrap();
        assert!(bad.check_simplex_rows().is_err());
    }
}
