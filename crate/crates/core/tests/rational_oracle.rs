//! Exact rational checks of the degree-8 exceptional-point polynomial against
//! the discriminant of the ξ quartic.

use lepm_core::lepm::{lep_poly_coeffs, lep_poly_in_y};
use lepm_core::spectra::minus_quartic_coeffs;
use lepm_core::ModelParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Quartic coefficients `[1, c_b, c_c, c_d, c_e]` in exact arithmetic.
fn quartic(x: &BigRational, y: &BigRational, z: &BigRational) -> [BigRational; 5] {
    let n = |v: i64| q(v, 1);
    let s = n(1) + x;
    let cb = n(2) * z + n(32) * &s + n(64) * y;
    let cc = n(32) * z * (n(2) * &s + n(5) * y)
        + z * z
        + n(256) * (n(2) * x + &s * &s + n(2) * &s * y + n(6) * y * y);
    let cd = n(32)
        * (n(8) * z * (&s * &s + n(6) * x + n(14) * y * y)
            + z * z * (&s + n(5) * y)
            + n(256) * (x * &s + (&s * &s - n(6) * x) * y - &s * y * y + n(2) * pow(y, 3)));
    let w = x - &s * y + y * y;
    let ce = n(64) * pow(z, 3) * y
        + n(65536) * &w * &w
        + n(256) * z * z * (n(4) * x - n(2) * &s * y + n(9) * y * y)
        + n(4096) * z * (n(2) * x * &s + (&s * &s - n(6) * x) * y - n(4) * &s * y * y + n(6) * pow(y, 3));
    [n(1), cb, cc, cd, ce]
}

/// Discriminant of `a t⁴ + b t³ + c t² + d t + e`.
fn discriminant(k: &[BigRational; 5]) -> BigRational {
    let [a, b, c, d, e] = k;
    let n = |v: i64| q(v, 1);
    n(256) * pow(a, 3) * pow(e, 3) - n(192) * a * a * b * d * e * e
        - n(128) * a * a * c * c * e * e
        + n(144) * a * a * c * d * d * e
        - n(27) * a * a * pow(d, 4)
        + n(144) * a * b * b * c * e * e
        - n(6) * a * b * b * d * d * e
        - n(80) * a * b * c * c * d * e
        + n(18) * a * b * c * pow(d, 3)
        + n(16) * a * pow(c, 4) * e
        - n(4) * a * pow(c, 3) * d * d
        - n(27) * pow(b, 4) * e * e
        + n(18) * pow(b, 3) * c * d * e
        - n(4) * pow(b, 3) * pow(d, 3)
        - n(4) * b * b * pow(c, 3) * e
        + b * b * c * c * d * d
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

#[test]
fn frozen_coefficients_at_quarter_point() {
    let want = [
        q(18_662_400, 1),
        q(-5_152_896, 1),
        q(-87_183, 1),
        q(2_292_459, 16),
        q(-14_768_879, 256),
        q(355_941, 256),
        q(49_261, 1024),
        q(-1_905, 1024),
        q(1, 64),
    ];
    let got = lep_poly_coeffs(0.25, 0.25).coeffs;
    for (i, (g, w)) in got.iter().zip(&want).enumerate() {
        let w = to_f64(w);
        assert!((g - w).abs() <= 1e-12 * w.abs(), "a{i}: {g} vs {w}");
    }
}

#[test]
fn coefficients_are_scaled_discriminant() {
    let scale = q(1, 1 << 24);
    for (xn, xd, yn, yd) in [(1, 4, 1, 4), (9, 25, 4, 25), (36, 25, 1, 9), (1, 100, 2, 1), (3, 1, 1, 50)] {
        let (x, y) = (q(xn, xd), q(yn, yd));
        let poly = lep_poly_coeffs(to_f64(&x), to_f64(&y));
        // Nine sample points determine the degree-8 polynomial in Z.
        for zn in [0, 1, 3, 7, 16, 40, 64, 100, 250] {
            let z = q(zn, 1);
            let exact = discriminant(&quartic(&x, &y, &z)) * &scale;
            let zf = to_f64(&z);
            let err = (poly.eval(zf) - to_f64(&exact)).abs();
            assert!(
                err <= 1e-12 * poly.scale_at(zf),
                "X={x} Y={y} Z={z}: {} vs {}",
                poly.eval(zf),
                to_f64(&exact)
            );
        }
    }
}

#[test]
fn quartic_coefficients_are_exact_on_dyadic_inputs() {
    let (x, y, z) = (q(1, 4), q(1, 16), q(9, 1));
    let p = ModelParams::new(0.5, 0.25, 3.0).unwrap();
    let got = minus_quartic_coeffs(&p);
    for (g, w) in got.iter().zip(quartic(&x, &y, &z).iter()) {
        assert_eq!(*g, to_f64(w));
    }
}

#[test]
fn discriminant_vanishes_on_repeated_root() {
    // (t − 1)² (t + 2)(t − 3)
    let k = [q(1, 1), q(-3, 1), q(-3, 1), q(11, 1), q(-6, 1)];
    assert!(discriminant(&k).is_zero());
}

/// Coefficients of the degree-6 polynomial in `Y` obtained by Lagrange
/// interpolation of the exact discriminant at fixed `X` and `Z`.
fn exact_poly_in_y(x: &BigRational, z: &BigRational) -> Vec<BigRational> {
    let nodes: Vec<BigRational> = (0..7).map(|k| q(k, 1)).collect();
    let scale = q(1, 1 << 24);
    let values: Vec<BigRational> = nodes
        .iter()
        .map(|y| discriminant(&quartic(x, y, z)) * &scale)
        .collect();
    let mut coeffs = vec![BigRational::zero(); 7];
    for (j, yj) in nodes.iter().enumerate() {
        // basis = Π_{m≠j} (Y − y_m) / (y_j − y_m), expanded in powers of Y
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (m, ym) in nodes.iter().enumerate() {
            if m == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * ym;
            }
            basis = next;
            denom *= yj - ym;
        }
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &values[j] / &denom;
        }
    }
    coeffs
}

#[test]
fn polynomial_in_y_survives_cancellation_near_isotropy() {
    // Close to γ = 1 the individual table entries exceed the coefficients
    // they sum to by many orders of magnitude.
    for g in [0.6f64, 0.97, 0.999, 0.99999, 1.0001, 1.3] {
        let xf = g * g;
        for zf in [64.0, 64.0 * xf] {
            let x = BigRational::from_float(xf).unwrap();
            let z = BigRational::from_float(zf).unwrap();
            let want = exact_poly_in_y(&x, &z);
            let got = lep_poly_in_y(xf, zf);
            let scale = want.iter().map(|w| to_f64(w).abs()).fold(0.0, f64::max);
            for (k, (g_k, w)) in got.coeffs().iter().zip(&want).enumerate() {
                let w = to_f64(w);
                assert!(
                    (g_k - w).abs() <= 1e-15 * w.abs() + 1e-300 * scale,
                    "gamma={g} Z={zf} Y^{k}: {g_k:e} vs {w:e}"
                );
            }
        }
    }
}
