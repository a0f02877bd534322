//! Dense complex eigensolver.
//!
//! The matrix is balanced by powers of two, reduced to upper Hessenberg form
//! with Householder reflections and then driven to upper triangular (Schur)
//! form by single-shift QR sweeps with Wilkinson shifts. Eigenvectors, when
//! requested, come from back-substitution on the triangular factor.

use num_complex::Complex64;

use crate::{ComplexMatrix, LinalgError, Result};

/// Largest dimension accepted by [`eigen`].
pub const MAX_EIGEN_DIM: usize = 64;

/// Relative residual bound for an eigenpair to be flagged as converged.
pub const EIGENPAIR_RESIDUAL_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm eigenvectors stored as columns, in the order of `eigenvalues`.
    pub eigenvectors: Option<ComplexMatrix>,
    /// `true` when the eigenpair residual `‖M v − λ v‖` is below
    /// `EIGENPAIR_RESIDUAL_TOL · max(1, ‖M‖_F)`. Always `true` without vectors.
    pub converged: Vec<bool>,
}

/// Eigenvalues, and optionally eigenvectors, of a square complex matrix.
pub fn eigen(m: &ComplexMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.shape()));
    }
    let n = m.rows();
    if n > MAX_EIGEN_DIM {
        return Err(LinalgError::TooLarge {
            dim: n,
            max: MAX_EIGEN_DIM,
        });
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            eigenvectors: want_vectors.then(|| ComplexMatrix::zeros(0, 0)),
            converged: vec![],
        });
    }

    let mut h = m.clone();
    let scaling = balance(&mut h);
    let mut z = want_vectors.then(|| ComplexMatrix::identity(n));
    hessenberg(&mut h, z.as_mut());
    schur_qr(&mut h, z.as_mut())?;

    let eigenvalues = h.diagonal();
    let Some(z) = z else {
        return Ok(EigenDecomposition {
            converged: vec![true; n],
            eigenvalues,
            eigenvectors: None,
        });
    };

    let vectors = schur_eigenvectors(&h, &z, &scaling);
    let bound = EIGENPAIR_RESIDUAL_TOL * m.frobenius_norm().max(1.0);
    let converged = (0..n)
        .map(|k| {
            let v = vectors.col(k);
            let mv = m.mul_vec(&v).expect("square");
            let r: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - eigenvalues[k] * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            r.is_finite() && r <= bound
        })
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: Some(vectors),
        converged,
    })
}

/// Shorthand for the eigenvalues only.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    Ok(eigen(m, false)?.eigenvalues)
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity `D⁻¹ A D` with power-of-two entries that roughly
/// equalizes row and column norms. Returns the diagonal of `D`.
fn balance(a: &mut ComplexMatrix) -> Vec<f64> {
    const RADIX: f64 = 2.0;
    let n = a.rows();
    let mut scale = vec![1.0; n];
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                scale[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    scale
}

/// In-place Householder reduction to upper Hessenberg form. When `q` is given
/// it is right-multiplied by the accumulated unitary transform.
fn hessenberg(h: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut v: Vec<Complex64> = (0..len).map(|i| h[(k + 1 + i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * norm_x;
        v[0] -= alpha;
        let norm_v = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= norm_v;
        }

        for j in k..n {
            let s: Complex64 = (0..len).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..len {
                h[(k + 1 + i, j)] -= 2.0 * v[i] * s;
            }
        }
        for i in 0..n {
            let s: Complex64 = (0..len).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..len {
                h[(i, k + 1 + j)] -= 2.0 * s * v[j].conj();
            }
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let s: Complex64 = (0..len).map(|j| q[(i, k + 1 + j)] * v[j]).sum();
                for j in 0..len {
                    q[(i, k + 1 + j)] -= 2.0 * s * v[j].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Unitary rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    let na = a.norm();
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let norm = na.hypot(nb);
    let phase = a / na;
    (na / norm, phase * b.conj() / norm)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Reduces a Hessenberg matrix to upper triangular form in place.
fn schur_qr(h: &mut ComplexMatrix, mut z: Option<&mut ComplexMatrix>) -> Result<()> {
    let n = h.rows();
    let full = z.is_some();
    let max_iter = 100 * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n - 1;

    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut tst = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if tst == 0.0 {
                tst = norm;
            }
            if sub <= eps * tst || sub <= f64::MIN_POSITIVE * 1e3 {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(LinalgError::NonConvergence { iterations: total });
        }

        let mu = if since_deflation % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75, 0.5) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        let col_end = if full { n - 1 } else { hi };
        let row_start = if full { 0 } else { l };
        let mut x = h[(l, l)] - mu;
        let mut y = h[(l + 1, l)];
        for k in l..hi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let col_start = if k > l { k - 1 } else { l };
            for j in col_start..=col_end {
                let u = h[(k, j)];
                let v = h[(k + 1, j)];
                h[(k, j)] = c * u + s * v;
                h[(k + 1, j)] = -s.conj() * u + c * v;
            }
            if k > l {
                h[(k + 1, k - 1)] = ZERO;
            }
            let row_end = (k + 2).min(hi);
            for i in row_start..=row_end {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = c * u + s.conj() * v;
                h[(i, k + 1)] = -s * u + c * v;
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    let u = z[(i, k)];
                    let v = z[(i, k + 1)];
                    z[(i, k)] = c * u + s.conj() * v;
                    z[(i, k + 1)] = -s * u + c * v;
                }
            }
        }
    }
    Ok(())
}

fn schur_eigenvectors(t: &ComplexMatrix, z: &ComplexMatrix, scaling: &[f64]) -> ComplexMatrix {
    let n = t.rows();
    let smin = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE * 1e10);
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![ZERO; k + 1];
        y[k] = ONE;
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[i] = -s / d;
            // Rescale on growth to stay clear of overflow.
            let big = y.iter().map(|w| w.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for w in y.iter_mut() {
                    *w /= big;
                }
            }
        }
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| (0..=k).map(|j| z[(i, j)] * y[j]).sum::<Complex64>() * scaling[i])
            .collect();
        let norm = v.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for w in v.iter_mut() {
                *w /= norm;
            }
        }
        for (i, w) in v.into_iter().enumerate() {
            out[(i, k)] = w;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
        let got = sorted(eigenvalues(&m).unwrap());
        let want = sorted(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-14, "{g} vs {w}");
        }
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let got = sorted(eigenvalues(&m).unwrap());
        assert!((got[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((got[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenvectors_satisfy_residual_bound() {
        let m = ComplexMatrix::from_fn(6, 6, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
        });
        let dec = eigen(&m, true).unwrap();
        assert!(dec.converged.iter().all(|&ok| ok));
        let v = dec.eigenvectors.unwrap();
        for k in 0..6 {
            let col = v.col(k);
            let mv = m.mul_vec(&col).unwrap();
            let r: f64 = mv
                .iter()
                .zip(&col)
                .map(|(a, b)| (a - dec.eigenvalues[k] * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn jordan_block_vectors_flagged_or_parallel() {
        // A 2x2 Jordan block has a single eigenvector direction.
        let m = ComplexMatrix::from_real_rows(&[[2.0, 1.0], [0.0, 2.0]]);
        let dec = eigen(&m, true).unwrap();
        for &lam in &dec.eigenvalues {
            assert!((lam - c(2.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            eigen(&ComplexMatrix::zeros(2, 3), false),
            Err(LinalgError::NotSquare(_))
        ));
        assert!(matches!(
            eigen(&ComplexMatrix::zeros(65, 65), false),
            Err(LinalgError::TooLarge { .. })
        ));
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(eigen(&m, false), Err(LinalgError::NonFinite)));
    }

    #[test]
    fn empty_and_scalar() {
        assert!(eigenvalues(&ComplexMatrix::zeros(0, 0)).unwrap().is_empty());
        let one = ComplexMatrix::diag(&[c(4.0, -1.0)]);
        assert_eq!(eigenvalues(&one).unwrap(), vec![c(4.0, -1.0)]);
    }
}
