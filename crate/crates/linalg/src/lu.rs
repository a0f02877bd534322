//! LU factorization with partial pivoting.

use num_complex::Complex64;

use crate::{ComplexMatrix, LinalgError, Result};

pub struct Lu {
    factors: ComplexMatrix,
    pivots: Vec<usize>,
}

impl Lu {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare(m.shape()));
        }
        let n = m.rows();
        let mut a = m.clone();
        let mut pivots: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= f64::EPSILON * scale * 1e-3 {
                return Err(LinalgError::Singular);
            }
            if p != k {
                pivots.swap(p, k);
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        Ok(Self { factors: a, pivots })
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.factors.rows();
        let a = &self.factors;
        let mut x: Vec<Complex64> = self.pivots.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s / a[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.factors.rows();
        if b.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                left: self.factors.shape(),
                right: b.shape(),
            });
        }
        let mut out = ComplexMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.col(j));
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

/// Solves `a x = b` for a square, nonsingular `a`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::new(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = ComplexMatrix::from_rows(&[
            [Complex64::new(2.0, 1.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, 3.0)],
        ]);
        let x = ComplexMatrix::column(&[Complex64::new(1.0, -1.0), Complex64::new(2.0, 0.5)]);
        let b = &a * &x;
        let got = solve(&a, &b).unwrap();
        assert!(got.max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(Lu::new(&a), Err(LinalgError::Singular)));
    }
}
