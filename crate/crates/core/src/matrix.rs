//! Dense matrices with ring entries.

use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::grading::GradeVec;
use crate::ring::{Deriv, GradedPoly, RingResult, RewriteSystem};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}x{1} against {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("entry ({0}, {1}) is not a constant")]
    NotConstant(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GradedPoly>,
}

impl GradedMatrix {
    pub fn zeros(rows: usize, cols: usize) -> GradedMatrix {
        GradedMatrix { rows, cols, entries: vec![GradedPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> GradedMatrix {
        let mut m = GradedMatrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, GradedPoly::one());
        }
        m
    }

    /// Row-major scalar data.
    pub fn from_scalars(rows: usize, cols: usize, data: &[Scalar]) -> GradedMatrix {
        assert_eq!(data.len(), rows * cols, "data length");
        GradedMatrix { rows, cols, entries: data.iter().cloned().map(GradedPoly::constant).collect() }
    }

    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> GradedMatrix {
        let d: Vec<Scalar> = data.iter().map(|&n| Scalar::from_int(n)).collect();
        GradedMatrix::from_scalars(rows, cols, &d)
    }

    pub fn diag(d: &[Scalar]) -> GradedMatrix {
        let mut m = GradedMatrix::zeros(d.len(), d.len());
        for (k, c) in d.iter().enumerate() {
            m.set(k, k, GradedPoly::constant(c.clone()));
        }
        m
    }

    /// Assembles a block matrix; every block row must share heights and
    /// every block column widths. `None` is a zero block of fitting size.
    pub fn blocks(grid: &[Vec<Option<&GradedMatrix>>], heights: &[usize], widths: &[usize]) -> GradedMatrix {
        let mut m = GradedMatrix::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    assert_eq!((b.rows, b.cols), (heights[bi], widths[bj]), "block size");
                    for i in 0..b.rows {
                        for j in 0..b.cols {
                            m.set(r0 + i, c0 + j, b.get(i, j).clone());
                        }
                    }
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: GradedPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn add_at(&mut self, i: usize, j: usize, p: &GradedPoly) {
        self.entries[i * self.cols + j].add_assign(p);
    }

    fn same_shape(&self, o: &GradedMatrix) -> Result<(), MatrixError> {
        if (self.rows, self.cols) == (o.rows, o.cols) {
            Ok(())
        } else {
            Err(MatrixError::Shape(self.rows, self.cols, o.rows, o.cols))
        }
    }

    pub fn add(&self, o: &GradedMatrix) -> Result<GradedMatrix, MatrixError> {
        self.same_shape(o)?;
        Ok(GradedMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, o: &GradedMatrix) -> Result<GradedMatrix, MatrixError> {
        self.same_shape(o)?;
        Ok(GradedMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn scale(&self, c: &Scalar) -> GradedMatrix {
        self.map_entries(|p| p.scale(c))
    }

    pub fn map_entries<F: FnMut(&GradedPoly) -> GradedPoly>(&self, f: F) -> GradedMatrix {
        GradedMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<F: FnMut(&GradedPoly) -> RingResult<GradedPoly>>(&self, f: F) -> RingResult<GradedMatrix> {
        Ok(GradedMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect::<RingResult<_>>()? })
    }

    /// Entrywise derivative.
    pub fn apply(&self, d: Deriv) -> RingResult<GradedMatrix> {
        self.try_map(|p| p.apply(d))
    }

    pub fn reduce(&self, rs: &RewriteSystem) -> RingResult<GradedMatrix> {
        self.try_map(|p| rs.reduce(p))
    }

    pub fn mul(&self, o: &GradedMatrix) -> Result<GradedMatrix, MatrixError> {
        if self.cols != o.rows {
            return Err(MatrixError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        let mut m = GradedMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_empty() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_empty() {
                        m.add_at(i, j, &a.mul(b));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Plain Kronecker product; all grading lives in the entries.
    pub fn kron(&self, o: &GradedMatrix) -> GradedMatrix {
        let mut m = GradedMatrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_empty() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, a.mul(o.get(k, l)));
                    }
                }
            }
        }
        m
    }

    /// AB - sign(a, b) BA.
    pub fn graded_bracket(&self, a: GradeVec, o: &GradedMatrix, b: GradeVec) -> Result<GradedMatrix, MatrixError> {
        let ab = self.mul(o)?;
        let ba = o.mul(self)?;
        ab.sub(&ba.scale(&Scalar::from_int(a.sign(b) as i64)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GradedPoly::is_zero)
    }

    /// exp by the power series; `None` unless the series terminates.
    pub fn exp_nilpotent(&self) -> Option<GradedMatrix> {
        let n = self.rows;
        let mut out = GradedMatrix::identity(n);
        let mut term = GradedMatrix::identity(n);
        for k in 1..=n + 1 {
            term = term.mul(self).ok()?.scale(&Scalar::rational(1, k as i64));
            if term.is_zero() {
                return Some(out);
            }
            out = out.add(&term).ok()?;
        }
        None
    }

    /// Positions and values of nonzero entries.
    pub fn nonzero(&self) -> Vec<(usize, usize, &GradedPoly)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.get(i, j)))
            .filter(|(_, _, p)| !p.is_zero())
            .collect()
    }

    pub fn scalar_at(&self, i: usize, j: usize) -> Result<Scalar, MatrixError> {
        let p = self.get(i, j);
        if p.terms().all(|(m, _)| m.is_empty()) {
            Ok(p.body_constant())
        } else {
            Err(MatrixError::NotConstant(i, j))
        }
    }

    /// Row-major scalars for constant matrices.
    pub fn to_scalars(&self) -> Result<Vec<Scalar>, MatrixError> {
        (0..self.rows).flat_map(|i| (0..self.cols).map(move |j| (i, j))).map(|(i, j)| self.scalar_at(i, j)).collect()
    }

    /// JSON array of rows of coefficient strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| Value::String(entry_string(self.get(i, j)))).collect()))
                .collect(),
        )
    }
}

fn entry_string(p: &GradedPoly) -> String {
    if p.is_empty() {
        "0".into()
    } else if p.terms().all(|(m, _)| m.is_empty()) {
        p.body_constant().to_string()
    } else {
        p.to_string()
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| entry_string(self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a list of scalar vectors by Gaussian elimination.
pub fn scalar_rank(vectors: &[Vec<Scalar>]) -> usize {
    let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        let pivot: Vec<Scalar> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                rows[r] = rows[r].iter().zip(&pivot).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_mixed_product() {
        let a = GradedMatrix::from_ints(2, 2, &[1, 2, 0, 1]);
        let b = GradedMatrix::from_ints(2, 2, &[0, 1, 1, 0]);
        let c = GradedMatrix::from_ints(2, 2, &[3, 0, 1, 1]);
        let d = GradedMatrix::from_ints(2, 2, &[1, -1, 2, 0]);
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shape_errors() {
        let a = GradedMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(MatrixError::Shape(..))));
    }

    #[test]
    fn rank_of_dependent_vectors() {
        let v = |xs: &[i64]| xs.iter().map(|&n| Scalar::from_int(n)).collect::<Vec<_>>();
        assert_eq!(scalar_rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(scalar_rank(&[v(&[1, 2]), v(&[0, 1])]), 2);
    }
}
