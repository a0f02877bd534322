//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! of degree 3 to 13, following Higham's 2005 parameter choices.

use num_complex::Complex64;

use crate::{lu, ComplexMatrix, LinalgError, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(m)` for a square complex matrix.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.shape()));
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let norm = m.norm_1();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }

    for &(deg, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match deg {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let (u, v) = pade_low(m, coeffs);
            return pade_solve(&u, &v);
        }
    }

    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let a = m.scale_real(0.5f64.powi(s));
    let (u, v) = pade13(&a);
    let mut x = pade_solve(&u, &v)?;
    for _ in 0..s {
        x = &x * &x;
    }
    Ok(x)
}

fn axpy_identity(mut acc: ComplexMatrix, c: f64) -> ComplexMatrix {
    for i in 0..acc.rows() {
        acc[(i, i)] += Complex64::new(c, 0.0);
    }
    acc
}

fn lin_comb(terms: &[(f64, &ComplexMatrix)], n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for (c, mat) in terms {
        for (o, x) in out.as_mut_slice().iter_mut().zip(mat.as_slice()) {
            *o += x * *c;
        }
    }
    out
}

fn pade_low(a: &ComplexMatrix, b: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let a2 = a * a;
    let mut powers = vec![a2.clone()];
    while powers.len() < (b.len() - 2) / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    // U = A (b1 I + b3 A² + ...), V = b0 I + b2 A² + ...
    let odd: Vec<(f64, &ComplexMatrix)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (b[2 * k + 3], p))
        .collect();
    let even: Vec<(f64, &ComplexMatrix)> = powers
        .iter()
        .enumerate()
        .map(|(k, p)| (b[2 * k + 2], p))
        .collect();
    let u = a * &axpy_identity(lin_comb(&odd, n), b[1]);
    let v = axpy_identity(lin_comb(&even, n), b[0]);
    (u, v)
}

fn pade13(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = lin_comb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let outer_u = lin_comb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2)], n);
    let u = a * &axpy_identity(&(&a6 * &inner_u) + &outer_u, b[1]);
    let inner_v = lin_comb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let outer_v = lin_comb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2)], n);
    let v = axpy_identity(&(&a6 * &inner_v) + &outer_v, b[0]);
    (u, v)
}

fn pade_solve(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    lu::solve(&(v - u), &(v + u))
}
