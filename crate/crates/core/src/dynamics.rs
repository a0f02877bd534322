//! Steady states, time evolution and quench experiments.

use lepm_linalg::{eigenvalues, expm, kron, singular_values, solve, Complex64, ComplexMatrix};

use crate::model::{build_liouvillian, sigma_x, sigma_y, sigma_z, unvectorize, vectorize};
use crate::{LepmError, ModelParams, Result};

/// Hermiticity and trace tolerance for [`DensityMatrix::new`].
pub const STATE_TOL: f64 = 1e-12;
/// Lowest eigenvalue tolerated in a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Default relaxation threshold.
pub const DEFAULT_EPSILON: f64 = 1e-2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hermitian, unit-trace, positive semidefinite 2×2 or 4×4 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix properties.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !(m.shape() == (2, 2) || m.shape() == (4, 4)) {
            return Err(LepmError::InvalidParams(format!(
                "density matrix must be 2x2 or 4x4, got {:?}",
                m.shape()
            )));
        }
        if !m.is_hermitian(STATE_TOL) {
            return Err(LepmError::InvalidParams("density matrix is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - 1.0).norm() > STATE_TOL {
            return Err(LepmError::InvalidParams(format!("trace is {tr}, not 1")));
        }
        let state = Self { m };
        let low = state.min_eigenvalue()?;
        if low < -POSITIVITY_TOL {
            return Err(LepmError::InvalidParams(format!(
                "density matrix has eigenvalue {low:e}"
            )));
        }
        Ok(state)
    }

    /// Wraps a matrix without checks; used for propagated states whose
    /// deviations are reported separately.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        Self { m }
    }

    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n = psi.len();
        Self::new(ComplexMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigenvalues(&self.m)?
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min))
    }

    pub fn distance(&self, other: &Self, norm: DistanceNorm) -> f64 {
        norm.apply(&(&self.m - &other.m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceNorm {
    /// Hilbert–Schmidt norm.
    #[default]
    Frobenius,
    /// Largest singular value.
    Spectral,
}

impl DistanceNorm {
    pub fn apply(self, m: &ComplexMatrix) -> f64 {
        match self {
            DistanceNorm::Frobenius => m.frobenius_norm(),
            DistanceNorm::Spectral => singular_values(m).first().copied().unwrap_or(0.0),
        }
    }
}

fn ness_denominator(gamma: f64, big_gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    let z = big_gamma * big_gamma;
    8.0 * g2 * g2 + g2 * (z - 16.0) + z + 8.0
}

/// Exact steady state. It does not depend on Δ.
pub fn ness_exact(gamma: f64, big_gamma: f64) -> Result<DensityMatrix> {
    let g = gamma;
    let big = big_gamma.abs();
    let d = ness_denominator(g, big);
    if d.abs() <= 1e-12 {
        return Err(LepmError::DenominatorVanishes { value: d });
    }
    let z = big * big;
    let mut r = ComplexMatrix::zeros(4, 4);
    r[(0, 0)] = c((g + 1.0).powi(2) * (4.0 * g * g - 8.0 * g + z + 4.0) / (2.0 * d), 0.0);
    r[(1, 1)] = c((g - 1.0).powi(2) * (4.0 * g * g + 8.0 * g + z + 4.0) / (2.0 * d), 0.0);
    let corner = 2.0 * (g - 1.0).powi(2) * (g + 1.0).powi(2) / d;
    r[(2, 2)] = c(corner, 0.0);
    r[(3, 3)] = c(corner, 0.0);
    r[(0, 3)] = c(0.0, -(g - 1.0) * (g + 1.0).powi(2) * big / d);
    r[(3, 0)] = r[(0, 3)].conj();
    r[(1, 2)] = c(0.0, (g - 1.0).powi(2) * (g + 1.0) * big / d);
    r[(2, 1)] = r[(1, 2)].conj();
    DensityMatrix::new(r)
}

/// Second-qubit populations of the strong-dissipation steady state.
pub fn zeno_populations(gamma: f64) -> (f64, f64) {
    let n = 2.0 * (gamma * gamma + 1.0);
    ((gamma + 1.0).powi(2) / n, (gamma - 1.0).powi(2) / n)
}

/// `|↑⟩⟨↑| ⊗ diag(p₊, p₋)`
pub fn ness_zeno(gamma: f64) -> DensityMatrix {
    let (up, down) = zeno_populations(gamma);
    DensityMatrix::new_unchecked(ComplexMatrix::diag(&[
        c(up, 0.0),
        c(down, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
    ]))
}

/// Steady state from the linear system `L v = 0` with the first row
/// replaced by the trace condition.
pub fn steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    steady_state_of(&build_liouvillian(p), 4)
}

fn steady_state_of(l: &ComplexMatrix, dim: usize) -> Result<DensityMatrix> {
    let n = dim * dim;
    let mut a = l.clone();
    for j in 0..n {
        a[(0, j)] = if j % (dim + 1) == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) };
    }
    let mut b = ComplexMatrix::zeros(n, 1);
    b[(0, 0)] = c(1.0, 0.0);
    let v = solve(&a, &b)?;
    let m = unvectorize(&v.col(0), dim);
    Ok(DensityMatrix::new_unchecked(hermitize(&m).0))
}

/// `(ρ + ρ†)/2` and the largest entry of the anti-Hermitian part removed.
pub fn hermitize(m: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let adj = m.adjoint();
    let dev = m.max_abs_diff(&adj) / 2.0;
    ((m + &adj).scale_real(0.5), dev)
}

/// Generator of `dρ/dt = −i[h, ρ] + Σ rate (L ρ L† − ½{L†L, ρ})` in the
/// row-major vectorization.
pub fn lindblad_generator(h: &ComplexMatrix, jumps: &[(f64, ComplexMatrix)]) -> ComplexMatrix {
    let n = h.rows();
    let id = ComplexMatrix::identity(n);
    let mut out = &kron(h, &id).scale(c(0.0, -1.0)) + &kron(&id, &h.transpose()).scale(c(0.0, 1.0));
    for (rate, l) in jumps {
        let ldl = &l.adjoint() * l;
        let d = &(&kron(l, &l.conj()) - &kron(&ldl, &id).scale_real(0.5))
            - &kron(&id, &ldl.transpose()).scale_real(0.5);
        out = &out + &d.scale_real(*rate);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub rho: DensityMatrix,
    /// Distance to the reference state.
    pub distance: f64,
    /// Size of the anti-Hermitian part removed after propagation.
    pub hermitian_deviation: f64,
}

/// Propagates `rho0` under the vectorized generator `l` with exact
/// exponentials of each time increment. Uniform grids reuse one propagator.
pub fn evolve_generator(
    l: &ComplexMatrix,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    reference: &DensityMatrix,
    norm: DistanceNorm,
) -> Result<Vec<TrajectorySample>> {
    if t_grid.windows(2).any(|w| !(w[1] >= w[0])) || t_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(LepmError::InvalidParams("time grid must be ascending and non-negative".into()));
    }
    let dim = rho0.dim();
    let mut v = vectorize(rho0.matrix());
    let mut cached: Option<(f64, ComplexMatrix)> = None;
    let mut prev_t = 0.0;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let dt = t - prev_t;
        if dt > 0.0 {
            let reuse = cached
                .as_ref()
                .is_some_and(|(h, _)| (h - dt).abs() <= 1e-12 * dt.max(1.0));
            if !reuse {
                cached = Some((dt, expm(&l.scale_real(dt))?));
            }
            v = cached.as_ref().unwrap().1.mul_vec(&v)?;
        }
        prev_t = t;
        let (m, dev) = hermitize(&unvectorize(&v, dim));
        let rho = DensityMatrix::new_unchecked(m);
        out.push(TrajectorySample {
            t,
            distance: rho.distance(reference, norm),
            rho,
            hermitian_deviation: dev,
        });
    }
    Ok(out)
}

/// Evolution under the full generator at `p`.
pub fn evolve(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    reference: &DensityMatrix,
) -> Result<Vec<TrajectorySample>> {
    evolve_generator(&build_liouvillian(p), rho0, t_grid, reference, DistanceNorm::Frobenius)
}

/// `n` equally spaced times from 0 to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchSpec {
    pub gamma_i: f64,
    pub gamma_f: f64,
    pub delta: f64,
    pub big_gamma_i: f64,
    pub big_gamma_f: f64,
    pub t_max: f64,
    pub n_samples: usize,
    pub norm: DistanceNorm,
}

/// Starts in the steady state at `(γ_i, Γ_i)` and relaxes under the
/// generator at `(γ_f, Δ, Γ_f)`; distances are to the final steady state.
pub fn quench_with(spec: &QuenchSpec) -> Result<Vec<TrajectorySample>> {
    let rho0 = ness_exact(spec.gamma_i, spec.big_gamma_i)?;
    let reference = ness_exact(spec.gamma_f, spec.big_gamma_f)?;
    let p = ModelParams::new(spec.gamma_f, spec.delta, spec.big_gamma_f)?;
    evolve_generator(
        &build_liouvillian(&p),
        &rho0,
        &uniform_grid(spec.t_max, spec.n_samples),
        &reference,
        spec.norm,
    )
}

/// Quench of γ alone at fixed Γ.
pub fn quench(
    gamma_i: f64,
    gamma_f: f64,
    delta: f64,
    big_gamma: f64,
    t_max: f64,
    n_samples: usize,
) -> Result<Vec<TrajectorySample>> {
    quench_with(&QuenchSpec {
        gamma_i,
        gamma_f,
        delta,
        big_gamma_i: big_gamma,
        big_gamma_f: big_gamma,
        t_max,
        n_samples,
        norm: DistanceNorm::Frobenius,
    })
}

/// Earliest sample time after which every distance stays below `epsilon`.
/// Infinite when the last sample is still at or above the threshold.
pub fn relaxation_time(samples: &[TrajectorySample], epsilon: f64) -> f64 {
    match samples.iter().rposition(|s| s.distance >= epsilon) {
        None => samples.first().map_or(0.0, |s| s.t),
        Some(k) if k + 1 == samples.len() => f64::INFINITY,
        Some(k) => samples[k + 1].t,
    }
}

/// Times of strict local minima of `d(t)` with value above `floor`.
pub fn local_minima(samples: &[TrajectorySample], floor: f64) -> Vec<f64> {
    samples
        .windows(3)
        .filter(|w| {
            w[1].distance < w[0].distance && w[1].distance < w[2].distance && w[1].distance > floor
        })
        .map(|w| w[1].t)
        .collect()
}

/// Prefactor of `σx + iγσy` in the reduced jump operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JumpPrefactor {
    /// `4(σx + iγσy)`.
    #[default]
    Four,
    /// `2(σx + iγσy)`, which reproduces the slow relaxation rates of the
    /// full generator, `8(1 + γ²)/Γ` for populations.
    Two,
}

impl JumpPrefactor {
    pub fn value(self) -> f64 {
        match self {
            JumpPrefactor::Four => 4.0,
            JumpPrefactor::Two => 2.0,
        }
    }
}

/// Generator of the reduced second-qubit dynamics with `h = Δσz` and jump
/// operator `4(σx + iγσy)` at rate `1/Γ`.
pub fn effective_generator(gamma: f64, delta: f64, big_gamma: f64) -> Result<ComplexMatrix> {
    effective_generator_with(gamma, delta, big_gamma, JumpPrefactor::Four)
}

pub fn effective_generator_with(
    gamma: f64,
    delta: f64,
    big_gamma: f64,
    prefactor: JumpPrefactor,
) -> Result<ComplexMatrix> {
    if !(big_gamma > 0.0) {
        return Err(LepmError::InvalidParams("effective dynamics needs Gamma > 0".into()));
    }
    let jump = effective_jump(gamma).scale_real(prefactor.value() / 4.0);
    Ok(lindblad_generator(&sigma_z().scale_real(delta), &[(1.0 / big_gamma, jump)]))
}

/// `4(σx + iγσy) = 4 [[0, 1+γ], [1−γ, 0]]`
pub fn effective_jump(gamma: f64) -> ComplexMatrix {
    (&sigma_x() + &sigma_y().scale(c(0.0, gamma))).scale_real(4.0)
}

/// Evolves the 2×2 reduced state; distances are to the stationary state
/// of the reduced equation.
pub fn evolve_effective(
    gamma: f64,
    delta: f64,
    big_gamma: f64,
    r0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<TrajectorySample>> {
    evolve_effective_with(gamma, delta, big_gamma, JumpPrefactor::Four, r0, t_grid)
}

pub fn evolve_effective_with(
    gamma: f64,
    delta: f64,
    big_gamma: f64,
    prefactor: JumpPrefactor,
    r0: &DensityMatrix,
    t_grid: &[f64],
) -> Result<Vec<TrajectorySample>> {
    if r0.dim() != 2 {
        return Err(LepmError::InvalidParams("reduced state must be 2x2".into()));
    }
    let l = effective_generator_with(gamma, delta, big_gamma, prefactor)?;
    let stationary = steady_state_of(&l, 2)?;
    evolve_generator(&l, r0, t_grid, &stationary, DistanceNorm::Frobenius)
}

/// Stationary state of the reduced equation.
pub fn effective_steady_state(gamma: f64, delta: f64, big_gamma: f64) -> Result<DensityMatrix> {
    steady_state_of(&effective_generator(gamma, delta, big_gamma)?, 2)
}

/// The rational function `(4γ¹⁰ + 36γ⁸ − 40γ⁶ − 40γ⁴ + 36γ² + 4) / (γ² + 1)⁴`.
pub fn gamma_ch_sq(gamma: f64) -> f64 {
    let x = gamma * gamma;
    let num = (((((4.0 * x + 36.0) * x - 40.0) * x - 40.0) * x + 36.0) * x) + 4.0;
    let den = (((x + 4.0) * x + 6.0) * x + 4.0) * x + 1.0;
    num / den
}

/// Characteristic dissipation strength, the square root of [`gamma_ch_sq`].
pub fn gamma_ch(gamma: f64) -> Result<f64> {
    let v = gamma_ch_sq(gamma);
    if v < 0.0 {
        return Err(LepmError::NegativeRadicand { value: v });
    }
    Ok(v.sqrt())
}

/// `Γ² (tr ρ_Zeno² − tr ρ_NESS(Γ)²)`
pub fn trace_gap(gamma: f64, big_gamma: f64) -> Result<f64> {
    let ness = ness_exact(gamma, big_gamma)?;
    Ok(big_gamma * big_gamma * (ness_zeno(gamma).purity() - ness.purity()))
}

/// Large-Γ limit of [`trace_gap`] implied by the exact steady state:
/// `32γ²(γ² − 1)² / (γ² + 1)³`.
pub fn trace_gap_limit(gamma: f64) -> f64 {
    let x = gamma * gamma;
    32.0 * x * (x - 1.0).powi(2) / (x + 1.0).powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoMetrics {
    pub gamma: f64,
    pub gamma_ch_sq: f64,
    pub big_gamma: f64,
    pub trace_gap: f64,
    /// `trace_gap / gamma_ch_sq − 1`; infinite when `gamma_ch_sq` is zero
    /// and the gap is not.
    pub relative_deviation: f64,
}

/// Compares the finite-Γ trace gap with the characteristic rate formula.
/// The deviation is reported, not asserted.
pub fn zeno_metrics(gamma: f64, big_gamma: f64) -> Result<ZenoMetrics> {
    let sq = gamma_ch_sq(gamma);
    let gap = trace_gap(gamma, big_gamma)?;
    let relative_deviation = if sq == 0.0 {
        if gap == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        gap / sq - 1.0
    };
    Ok(ZenoMetrics {
        gamma,
        gamma_ch_sq: sq,
        big_gamma,
        trace_gap: gap,
        relative_deviation,
    })
}
