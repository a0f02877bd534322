//! Singular values by one-sided Jacobi rotations.

use num_complex::Complex64;

use crate::ComplexMatrix;

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let a = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let (rows, cols) = a.shape();
    let mut columns: Vec<Vec<Complex64>> = (0..cols).map(|j| a.col(j)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = columns[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = columns[q].iter().map(|z| z.norm_sqr()).sum();
                let g: Complex64 = (0..rows)
                    .map(|i| columns[p][i].conj() * columns[q][i])
                    .sum();
                let gn = g.norm();
                if gn == 0.0 || gn <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g.conj() / gn;
                let zeta = (beta - alpha) / (2.0 * gn);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let ap = columns[p][i];
                    let aq = columns[q][i] * phase;
                    columns[p][i] = ap * c - aq * s;
                    columns[q][i] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `tol` times the largest one.
pub fn numeric_rank(m: &ComplexMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&top) = sv.first() else {
        return 0;
    };
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        assert_eq!(numeric_rank(&ComplexMatrix::identity(4), 1e-10), 4);
        assert_eq!(numeric_rank(&ComplexMatrix::zeros(4, 4), 1e-10), 0);
    }

    #[test]
    fn known_singular_values() {
        // [[3, 0], [4, 5]] has singular values 3√5 and √5.
        let m = ComplexMatrix::from_real_rows(&[[3.0, 0.0], [4.0, 5.0]]);
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0 * 5f64.sqrt()).abs() < 1e-13);
        assert!((sv[1] - 5f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = [Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.5)];
        let v = [Complex64::new(0.5, 0.0), Complex64::new(-1.0, 1.0)];
        let m = ComplexMatrix::from_fn(3, 2, |i, j| u[i] * v[j].conj());
        assert_eq!(numeric_rank(&m, 1e-10), 1);
        assert_eq!(numeric_rank(&m.adjoint(), 1e-10), 1);
    }

    #[test]
    fn jordan_block_shift_has_rank_deficiency_one() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
        assert_eq!(numeric_rank(&m, 1e-10), 2);
        assert_eq!(numeric_rank(&(&m * &m), 1e-10), 1);
    }
}
