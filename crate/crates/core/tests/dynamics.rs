use lepm_core::dynamics::*;
use lepm_core::model::{build_liouvillian, sigma_x};
use lepm_core::ModelParams;
use lepm_linalg::{eigenvalues, kron, Complex64, ComplexMatrix};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn up_state() -> ComplexMatrix {
    ComplexMatrix::diag(&[c(1.0), c(0.0)])
}

#[test]
fn first_sample_is_initial_state() {
    let p = ModelParams::new(0.6, 0.4, 8.0).unwrap();
    let rho0 = ness_exact(0.4, 8.0).unwrap();
    let s = evolve(&p, &rho0, &[0.0, 0.5], &rho0).unwrap();
    assert_eq!(s[0].rho.matrix(), rho0.matrix());
    assert_eq!(s[0].distance, 0.0);
}

#[test]
fn steady_state_does_not_move() {
    for (g, d, b) in [(0.6, 0.4, 8.0), (1.3, 0.1, 2.5), (0.2, 1.1, 15.0)] {
        let p = ModelParams::new(g, d, b).unwrap();
        let rho = ness_exact(g, b).unwrap();
        for s in evolve(&p, &rho, &uniform_grid(20.0, 201), &rho).unwrap() {
            assert!(s.distance <= 1e-9, "({g},{d},{b}) t={} d={}", s.t, s.distance);
        }
    }
}

#[test]
fn unitary_evolution_conserves_purity() {
    let p = ModelParams::new(0.6, 0.4, 0.0).unwrap();
    let psi = [c(0.6), Complex64::new(0.0, 0.8), c(0.0), c(0.0)];
    let rho0 = DensityMatrix::pure(&psi).unwrap();
    for s in evolve(&p, &rho0, &uniform_grid(30.0, 301), &rho0).unwrap() {
        assert!((s.rho.purity() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn trajectories_stay_physical() {
    for b in [2.0, 8.0, 24.0] {
        let s = quench(0.4, 0.8, 0.4, b, 10.0, 1001).unwrap();
        for x in &s {
            assert!((x.rho.trace() - 1.0).norm() <= 1e-9);
            assert!(x.rho.min_eigenvalue().unwrap() >= -1e-9);
            assert!(x.hermitian_deviation <= 1e-12);
            let again = x.rho.distance(&ness_exact(0.8, b).unwrap(), DistanceNorm::Frobenius);
            assert!((again - x.distance).abs() <= 1e-12);
        }
    }
}

fn rk4(l: &ComplexMatrix, v: &[Complex64], dt: f64, steps: usize) -> Vec<Complex64> {
    let mut v = v.to_vec();
    let axpy = |a: &[Complex64], k: &[Complex64], h: f64| -> Vec<Complex64> {
        a.iter().zip(k).map(|(x, y)| x + y * h).collect()
    };
    for _ in 0..steps {
        let k1 = l.mul_vec(&v).unwrap();
        let k2 = l.mul_vec(&axpy(&v, &k1, dt / 2.0)).unwrap();
        let k3 = l.mul_vec(&axpy(&v, &k2, dt / 2.0)).unwrap();
        let k4 = l.mul_vec(&axpy(&v, &k3, dt)).unwrap();
        for i in 0..v.len() {
            v[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    v
}

#[test]
fn exact_propagation_agrees_with_rk4() {
    let p = ModelParams::new(0.8, 0.4, 8.0).unwrap();
    let l = build_liouvillian(&p);
    let rho0 = ness_exact(0.4, 8.0).unwrap();
    let samples = evolve(&p, &rho0, &[0.0, 1.0, 2.0], &rho0).unwrap();
    let v = lepm_core::model::vectorize(rho0.matrix());
    let stepped = rk4(&l, &v, 1e-3, 2000);
    let exact = lepm_core::model::vectorize(samples[2].rho.matrix());
    let err = stepped
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err <= 1e-8, "{err:e}");
}

#[test]
fn non_uniform_grid_matches_uniform() {
    let p = ModelParams::new(0.8, 0.4, 4.0).unwrap();
    let rho0 = ness_exact(0.4, 4.0).unwrap();
    let a = evolve(&p, &rho0, &uniform_grid(3.0, 31), &rho0).unwrap();
    let b = evolve(&p, &rho0, &[0.0, 0.25, 1.1, 3.0], &rho0).unwrap();
    assert!(a[30].rho.matrix().max_abs_diff(b[3].rho.matrix()) <= 1e-12);
}

#[test]
fn descending_grid_is_rejected() {
    let p = ModelParams::new(0.8, 0.4, 4.0).unwrap();
    let rho0 = ness_exact(0.4, 4.0).unwrap();
    assert!(evolve(&p, &rho0, &[1.0, 0.5], &rho0).is_err());
}

#[test]
fn trivial_quench_stays_put() {
    for s in quench(0.7, 0.7, 0.3, 5.0, 10.0, 101).unwrap() {
        assert!(s.distance <= 1e-9);
    }
}

#[test]
fn plane_quench_relaxes_below_one_in_a_thousand() {
    let s = quench(0.4, 0.8, 0.4, 8.0, 12.0, 1201).unwrap();
    assert!(s[1000].distance < 1e-3, "{}", s[1000].distance);
    assert!(relaxation_time(&s, 1e-3) <= 10.0);
}

#[test]
fn spectral_norm_keeps_plane_fastest() {
    let t = |b: f64| {
        let s = quench_with(&QuenchSpec {
            gamma_i: 0.4,
            gamma_f: 0.8,
            delta: 0.4,
            big_gamma_i: b,
            big_gamma_f: b,
            t_max: 20.0,
            n_samples: 4001,
            norm: DistanceNorm::Spectral,
        })
        .unwrap();
        relaxation_time(&s, DEFAULT_EPSILON)
    };
    let t8 = t(8.0);
    for b in [10.0, 12.0, 16.0, 24.0] {
        assert!(t8 < t(b));
    }
}

#[test]
fn strong_dissipation_state_approaches_zeno_limit() {
    for g in [0.0, 0.6, 1.7] {
        let d = ness_exact(g, 1e5)
            .unwrap()
            .distance(&ness_zeno(g), DistanceNorm::Frobenius);
        assert!(d <= 1e-4, "gamma={g}: {d:e}");
    }
}

#[test]
fn zeno_second_factor_below_the_plane() {
    let (up, down) = zeno_populations(0.6);
    assert!((up - 16.0 / 17.0).abs() < 1e-15);
    assert!((down - 1.0 / 17.0).abs() < 1e-15);
}

#[test]
fn mixed_reduced_state_is_stationary_without_anisotropy() {
    let r0 = DensityMatrix::maximally_mixed(2);
    for s in evolve_effective(0.0, 0.7, 20.0, &r0, &uniform_grid(10.0, 101)).unwrap() {
        assert!(s.rho.matrix().max_abs_diff(r0.matrix()) <= 1e-12);
    }
}

/// Discrepancy between the full evolution and `|↑⟩⟨↑| ⊗ R(t)` at time `t`.
fn reduction_error(big_gamma: f64, t: f64, prefactor: JumpPrefactor) -> f64 {
    let (g, d) = (0.6, 0.4);
    let r0 = DensityMatrix::new(
        (&ComplexMatrix::identity(2) + &sigma_x().scale_real(0.3)).scale_real(0.5),
    )
    .unwrap();
    let full0 = DensityMatrix::new(kron(&up_state(), r0.matrix())).unwrap();
    let p = ModelParams::new(g, d, big_gamma).unwrap();
    let full = evolve(&p, &full0, &[0.0, t], &full0).unwrap();
    let reduced = evolve_effective_with(g, d, big_gamma, prefactor, &r0, &[0.0, t]).unwrap();
    (full[1].rho.matrix() - &kron(&up_state(), reduced[1].rho.matrix())).frobenius_norm()
}

#[test]
fn reduced_dynamics_error_is_first_order_at_fixed_time() {
    for prefactor in [JumpPrefactor::Four, JumpPrefactor::Two] {
        let e1 = reduction_error(1e3, 5.0, prefactor);
        let e2 = reduction_error(2e3, 5.0, prefactor);
        let ratio = e1 / e2;
        println!("{prefactor:?}: error {e1:.3e} at 1e3, {e2:.3e} at 2e3, order {:.3}", ratio.log2());
        assert!((1.7..=2.3).contains(&ratio), "{ratio}");
    }
}

#[test]
fn slow_relaxation_needs_the_smaller_prefactor() {
    // On the slow time scale t ∝ Γ the reduced equation must track the
    // full one to O(1/Γ). Only the prefactor 2 does; 4 relaxes four times
    // too fast and leaves an O(1) discrepancy.
    let two: Vec<f64> = [1e3, 2e3]
        .iter()
        .map(|&b| reduction_error(b, 0.05 * b, JumpPrefactor::Two))
        .collect();
    assert!(two[0] < 5e-3 && (1.7..=2.3).contains(&(two[0] / two[1])), "{two:?}");
    let four = reduction_error(2e3, 100.0, JumpPrefactor::Four);
    assert!(four > 0.1, "{four}");
}

#[test]
fn late_time_decay_matches_slowest_eigenvalue() {
    for (g, d, b) in [(0.8, 0.4, 20.0), (0.3, 0.9, 12.0)] {
        let p = ModelParams::new(g, d, b).unwrap();
        let rate = eigenvalues(&build_liouvillian(&p))
            .unwrap()
            .iter()
            .filter(|z| z.norm() > 1e-9)
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        // A generic pure state overlaps every decaying mode.
        let rho0 = DensityMatrix::pure(&[
            c(0.5),
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.1, -0.45),
        ])
        .unwrap();
        let reference = ness_exact(g, b).unwrap();
        let t_end = 12.0 / rate.abs();
        let s = evolve(&p, &rho0, &uniform_grid(t_end, 2001), &reference).unwrap();
        // Least-squares slope of ln d over the last half of the trajectory.
        let tail: Vec<(f64, f64)> = s[1000..]
            .iter()
            .filter(|x| x.distance > 1e-12)
            .map(|x| (x.t, x.distance.ln()))
            .collect();
        let n = tail.len() as f64;
        let (mt, ml) = tail
            .iter()
            .fold((0.0, 0.0), |(a, b), (t, l)| (a + t / n, b + l / n));
        let (num, den) = tail
            .iter()
            .fold((0.0, 0.0), |(a, b), (t, l)| (a + (t - mt) * (l - ml), b + (t - mt).powi(2)));
        let slope = num / den;
        assert!(((slope - rate) / rate).abs() <= 0.05, "({g},{d},{b}) fit {slope} vs {rate}");
    }
}

#[test]
fn zeno_metrics_report_the_deviation() {
    let m = zeno_metrics(0.6, 1e4).unwrap();
    assert_eq!(m.gamma_ch_sq, gamma_ch_sq(0.6));
    assert!((m.trace_gap - trace_gap_limit(0.6)).abs() <= 1e-3);
    assert!(m.relative_deviation < -0.3);
}
