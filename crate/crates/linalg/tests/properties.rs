use lepm_linalg::{
    eigen, eigenvalues, expm, kron, numeric_rank, real_roots, solve, Complex64, ComplexMatrix,
    PolynomialReal,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| unit_disk(rng))
}

fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::from_vec(rows, cols, data).unwrap()
    })
}

/// Greedy nearest matching; returns the worst distance.
fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[test]
fn eigenvalue_sum_equals_trace_for_random_8x8() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let m = random_matrix(&mut rng, 8, 8);
        let sum: Complex64 = eigenvalues(&m).unwrap().into_iter().sum();
        assert!((sum - m.trace()).norm() <= 1e-9);
    }
}

#[test]
fn triangular_eigenvalues_are_the_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = ComplexMatrix::from_fn(8, 8, |i, j| {
            if j >= i {
                unit_disk(&mut rng) * 3.0
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let got = eigenvalues(&m).unwrap();
        assert!(multiset_distance(&got, &m.diagonal()) < 1e-12);
    }
}

#[test]
fn similarity_transform_recovers_spectrum_16x16() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let lambdas: Vec<Complex64> = (0..16)
            .map(|k| Complex64::new(-(k as f64) * 0.7 - 0.1, (k as f64 * 1.3).sin() * 4.0))
            .collect();
        // Unitary similarity keeps the problem well-conditioned.
        let q = unitary(&mut rng, 16);
        let t = ComplexMatrix::from_fn(16, 16, |i, j| {
            if i == j {
                lambdas[i]
            } else if j > i {
                unit_disk(&mut rng) * 0.5
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let m = &(&q * &t) * &q.adjoint();
        let dec = eigen(&m, true).unwrap();
        let scale = lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(multiset_distance(&dec.eigenvalues, &lambdas) <= 1e-10 * scale);
        assert!(dec.converged.iter().all(|&c| c));
    }
}

fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    // Gram–Schmidt on a random matrix.
    let a = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..n {
        let mut v = a.col(j);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

#[test]
fn expm_agrees_with_eigendecomposition_of_normal_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let q = unitary(&mut rng, 6);
        let d: Vec<Complex64> = (0..6)
            .map(|_| Complex64::new(rng.gen_range(-20.0..5.0), rng.gen_range(-30.0..30.0)))
            .collect();
        let m = &(&q * &ComplexMatrix::diag(&d)) * &q.adjoint();
        let exp_d: Vec<Complex64> = d.iter().map(|z| z.exp()).collect();
        let want = &(&q * &ComplexMatrix::diag(&exp_d)) * &q.adjoint();
        let got = expm(&m).unwrap();
        assert!(got.max_abs_diff(&want) <= 1e-10 * want.max_abs().max(1.0));
    }
}

#[test]
fn random_polynomials_roots_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 500 {
        let degree = rng.gen_range(1..=8);
        let roots: Vec<f64> = (0..degree).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let separated = roots
            .iter()
            .enumerate()
            .all(|(i, a)| roots[i + 1..].iter().all(|b| (a - b).abs() > 1e-3));
        if !separated {
            continue;
        }
        let lead = rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = PolynomialReal::from_roots(lead, &roots);
        let found = real_roots(&p, -10.0, 10.0, 1e-8).unwrap();
        let mut want = roots.clone();
        want.sort_by(f64::total_cmp);
        let got: Vec<f64> = found
            .iter()
            .flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity))
            .collect();
        assert_eq!(got.len(), want.len(), "roots {want:?} found {found:?}");
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-8, "{g} vs {w}");
        }
        let rebuilt = PolynomialReal::from_roots(lead, &got);
        for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0));
        }
        checked += 1;
    }
}

#[test]
fn solve_inverts_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let a = &random_matrix(&mut rng, 6, 6) + &ComplexMatrix::identity(6).scale_real(3.0);
        let x = random_matrix(&mut rng, 6, 2);
        let b = &a * &x;
        assert!(solve(&a, &b).unwrap().max_abs_diff(&x) < 1e-12);
    }
}

#[test]
fn rank_of_products_of_thin_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for k in 0..=5 {
        let u = random_matrix(&mut rng, 8, k);
        let v = random_matrix(&mut rng, k, 8);
        let m = if k == 0 {
            ComplexMatrix::zeros(8, 8)
        } else {
            &u * &v
        };
        assert_eq!(numeric_rank(&m, 1e-10), k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_property(m in matrix_strategy(4, 4), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        // Scale so that the norm stays at most 10.
        let m = m.scale_real(10.0 / m.norm_1().max(1.0));
        let lhs = expm(&m.scale_real(s + t)).unwrap();
        let rhs = &expm(&m.scale_real(s)).unwrap() * &expm(&m.scale_real(t)).unwrap();
        let scale = lhs.max_abs().max(1.0);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-8 * scale);
    }

    #[test]
    fn kron_is_associative(
        a in matrix_strategy(2, 3),
        b in matrix_strategy(3, 2),
        c in matrix_strategy(2, 2),
    ) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn kron_mixed_product(
        a in matrix_strategy(2, 3),
        b in matrix_strategy(3, 2),
        c in matrix_strategy(3, 2),
        d in matrix_strategy(2, 4),
    ) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn eigenvalues_of_adjoint_are_conjugates(m in matrix_strategy(5, 5)) {
        let ev = eigenvalues(&m).unwrap();
        let conj: Vec<Complex64> = eigenvalues(&m.adjoint()).unwrap().iter().map(|z| z.conj()).collect();
        prop_assert!(multiset_distance(&ev, &conj) < 1e-9);
    }
}
