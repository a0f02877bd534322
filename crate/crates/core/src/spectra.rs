//! Closed-form block spectra, large-Γ stripe asymptotics and Jordan
//! structure at coalescence points.

use lepm_linalg::{eigen, eigenvalues, numeric_rank, Complex64, ComplexMatrix};

use crate::model::{build_liouvillian, extract_blocks, BlockTag};
use crate::{LepmError, ModelParams, Result};

/// Radical solutions with `|p4|` below this are rejected.
pub const P4_FLOOR: f64 = 1e-13;
/// Relative residual above which radical roots are replaced by companion roots.
pub const QUARTIC_RESIDUAL_TOL: f64 = 1e-6;
/// Eigenvalues closer than this (relative to `max(1, |λ|)`) form one cluster.
pub const JORDAN_CLUSTER_RADIUS: f64 = 1e-6;
/// Relative singular-value cutoff for ranks of `(Σ − λI)^k`.
pub const JORDAN_RANK_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The eight Δ-independent eigenvalues of Σ₊.
pub fn sigma_plus_spectrum(p: &ModelParams) -> [Complex64; 8] {
    let g = p.big_gamma;
    let z = p.z();
    let x = p.x();
    let inner = (c(z - 64.0, 0.0) * c(z - 64.0 * x, 0.0)).sqrt();
    let base = c(z - 32.0 * (1.0 + x), 0.0);
    let k = 2f64.sqrt() / 4.0;
    let r1 = (base + inner).sqrt() * k;
    let r2 = (base - inner).sqrt() * k;
    let h = c(-g / 2.0, 0.0);
    [
        c(0.0, 0.0),
        c(-g, 0.0),
        h,
        h,
        h + r1,
        h - r1,
        h + r2,
        h - r2,
    ]
}

/// Coefficients `[c_a, c_b, c_c, c_d, c_e]` of the quartic in ξ whose
/// roots give the Σ₋ eigenvalues `½(−Γ ± √(Γ² + ξ))`.
pub fn minus_quartic_coeffs(p: &ModelParams) -> [f64; 5] {
    let x = p.x();
    let y = p.y();
    let g2 = p.z();
    let s = 1.0 + x;
    let cb = 2.0 * g2 + 32.0 * s + 64.0 * y;
    let cc = 32.0 * g2 * (2.0 * s + 5.0 * y)
        + g2 * g2
        + 256.0 * (2.0 * x + s * s + 2.0 * s * y + 6.0 * y * y);
    let cd = 32.0
        * (8.0 * g2 * (s * s + 6.0 * x + 14.0 * y * y)
            + g2 * g2 * (s + 5.0 * y)
            + 256.0 * (x * s + (s * s - 6.0 * x) * y - s * y * y + 2.0 * y * y * y));
    let q = x - s * y + y * y;
    let ce = 64.0 * g2 * g2 * g2 * y
        + 65536.0 * q * q
        + 256.0 * g2 * g2 * (4.0 * x - 2.0 * s * y + 9.0 * y * y)
        + 4096.0 * g2 * (2.0 * x * s + (s * s - 6.0 * x) * y - 4.0 * s * y * y + 6.0 * y * y * y);
    [1.0, cb, cc, cd, ce]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticMethod {
    Radical,
    Companion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticSolve {
    /// `[c_a, c_b, c_c, c_d, c_e]`
    pub coeffs: [f64; 5],
    /// `[p1, p2, p3, p4, p5, p6]`; all zero when the companion method was used.
    pub intermediates: [Complex64; 6],
    pub roots: [Complex64; 4],
    pub method: QuarticMethod,
}

impl QuarticSolve {
    /// Largest `|q(ξ)| / (max|c_i| · max(1, |ξ|)⁴)` over the roots.
    pub fn max_residual(&self) -> f64 {
        quartic_residual(&self.coeffs, &self.roots)
    }
}

fn quartic_residual(k: &[f64; 5], roots: &[Complex64; 4]) -> f64 {
    let top = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    roots
        .iter()
        .map(|&xi| {
            let v = (((xi * k[0] + k[1]) * xi + k[2]) * xi + k[3]) * xi + k[4];
            v.norm() / (top * xi.norm().max(1.0).powi(4))
        })
        .fold(0.0, f64::max)
}

/// Real cube root when the argument is real, principal root otherwise.
fn cube_root(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        c(z.re.cbrt(), 0.0)
    } else {
        z.powf(1.0 / 3.0)
    }
}

/// Solves `c_a ξ⁴ + c_b ξ³ + c_c ξ² + c_d ξ + c_e = 0` with the radical
/// formulas through the intermediates `p1..p6`.
pub fn solve_quartic_radical(k: [f64; 5]) -> Result<QuarticSolve> {
    let [ca, cb, cc, cd, ce] = k;
    let p1 = 2.0 * cc.powi(3) - 9.0 * cb * cc * cd + 27.0 * ca * cd * cd + 27.0 * cb * cb * ce
        - 72.0 * ca * cc * ce;
    let d0 = cc * cc - 3.0 * cb * cd + 12.0 * ca * ce;
    let disc = p1 * p1 - 4.0 * d0.powi(3);
    let p2 = if disc >= 0.0 {
        c(p1 + disc.sqrt(), 0.0)
    } else {
        c(p1, 0.0) + c(disc, 0.0).sqrt()
    };
    let cr = cube_root(p2 / 2.0);
    if cr.norm() == 0.0 {
        return Err(LepmError::QuarticBranchFailure { p4: 0.0 });
    }
    let p3 = d0 / (3.0 * ca * cr) + cr / (3.0 * ca);
    let p4 = (c(cb * cb / (4.0 * ca * ca) - 2.0 * cc / (3.0 * ca), 0.0) + p3).sqrt();
    if p4.norm() < P4_FLOOR {
        return Err(LepmError::QuarticBranchFailure { p4: p4.norm() });
    }
    let p5 = c(cb * cb / (2.0 * ca * ca) - 4.0 * cc / (3.0 * ca), 0.0) - p3;
    let p6 = c(-cb.powi(3) / ca.powi(3) + 4.0 * cb * cc / (ca * ca) - 8.0 * cd / ca, 0.0)
        / (4.0 * p4);
    let b = c(-cb / (4.0 * ca), 0.0);
    let s_minus = (p5 - p6).sqrt() / 2.0;
    let s_plus = (p5 + p6).sqrt() / 2.0;
    let roots = [
        b - p4 / 2.0 - s_minus,
        b - p4 / 2.0 + s_minus,
        b + p4 / 2.0 - s_plus,
        b + p4 / 2.0 + s_plus,
    ];
    Ok(QuarticSolve {
        coeffs: k,
        intermediates: [c(p1, 0.0), p2, p3, p4, p5, p6],
        roots,
        method: QuarticMethod::Radical,
    })
}

/// Complex roots of the quartic from its companion matrix.
pub fn solve_quartic_companion(k: [f64; 5]) -> Result<QuarticSolve> {
    let mut comp = ComplexMatrix::zeros(4, 4);
    for j in 0..4 {
        comp[(0, j)] = c(-k[j + 1] / k[0], 0.0);
    }
    for i in 1..4 {
        comp[(i, i - 1)] = c(1.0, 0.0);
    }
    let ev = eigenvalues(&comp)?;
    Ok(QuarticSolve {
        coeffs: k,
        intermediates: [c(0.0, 0.0); 6],
        roots: [ev[0], ev[1], ev[2], ev[3]],
        method: QuarticMethod::Companion,
    })
}

/// The quartic roots for `p`, by radicals unless that route is degenerate
/// or inaccurate, followed by Newton polishing.
pub fn minus_quartic(p: &ModelParams) -> Result<QuarticSolve> {
    let k = minus_quartic_coeffs(p);
    let mut sol = match solve_quartic_radical(k) {
        Ok(sol) if sol.max_residual() <= QUARTIC_RESIDUAL_TOL => sol,
        _ => solve_quartic_companion(k)?,
    };
    for xi in sol.roots.iter_mut() {
        *xi = polish_root(&k, *xi);
    }
    Ok(sol)
}

/// A few Newton steps on the quartic, each kept only if it lowers `|q(ξ)|`.
/// The radical formulas lose digits to cancellation when the coefficients
/// span many orders of magnitude.
fn polish_root(k: &[f64; 5], mut xi: Complex64) -> Complex64 {
    let q = |z: Complex64| (((z * k[0] + k[1]) * z + k[2]) * z + k[3]) * z + k[4];
    let dq = |z: Complex64| ((z * (4.0 * k[0]) + 3.0 * k[1]) * z + 2.0 * k[2]) * z + k[3];
    let mut val = q(xi).norm();
    for _ in 0..4 {
        let d = dq(xi);
        if d.norm() == 0.0 || val == 0.0 {
            break;
        }
        let next = xi - q(xi) / d;
        let next_val = q(next).norm();
        if !(next_val < val) {
            break;
        }
        xi = next;
        val = next_val;
    }
    xi
}

/// Maps quartic roots to the eight Σ₋ eigenvalues.
pub fn minus_eigs_from_roots(big_gamma: f64, roots: &[Complex64; 4]) -> [Complex64; 8] {
    let mut out = [c(0.0, 0.0); 8];
    for (i, &xi) in roots.iter().enumerate() {
        let r = (xi + big_gamma * big_gamma).sqrt();
        out[2 * i] = (r - big_gamma) / 2.0;
        out[2 * i + 1] = (-r - big_gamma) / 2.0;
    }
    out
}

pub fn sigma_minus_spectrum(p: &ModelParams) -> Result<([Complex64; 8], QuarticSolve)> {
    let sol = minus_quartic(p)?;
    Ok((minus_eigs_from_roots(p.big_gamma, &sol.roots), sol))
}

/// Worst distance after greedily pairing the globally closest elements.
pub fn multiset_mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    pair_multisets(a, b)
        .iter()
        .enumerate()
        .map(|(i, &j)| (a[i] - b[j]).norm())
        .fold(0.0, f64::max)
}

/// Greedy closest-first matching of two equal-size multisets. Entry `i` of
/// the result is the index in `b` paired with `a[i]`.
pub fn pair_multisets(a: &[Complex64], b: &[Complex64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len(), "multisets differ in size");
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut to_b = vec![usize::MAX; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut left = a.len();
    for (_, i, j) in pairs {
        if left == 0 {
            break;
        }
        if to_b[i] != usize::MAX || used_b[j] {
            continue;
        }
        to_b[i] = j;
        used_b[j] = true;
        left -= 1;
    }
    to_b
}

/// Smallest pairwise distance within a list.
pub fn min_pairwise_gap(values: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub plus_eigs: [Complex64; 8],
    pub minus_eigs: [Complex64; 8],
    pub quartic: QuarticSolve,
    /// Eigenvalues of the full 16×16 generator from the iterative solver.
    pub numeric_eigs: Vec<Complex64>,
    pub max_mismatch: f64,
    /// Smallest gap in the closed-form list. The doubly degenerate −Γ/2 of
    /// Σ₊ is present at every Γ and is counted once.
    pub min_gap: f64,
}

impl SpectrumResult {
    pub fn closed_form(&self) -> Vec<Complex64> {
        self.plus_eigs.iter().chain(&self.minus_eigs).copied().collect()
    }
}

/// Closed-form spectrum together with the numeric oracle.
pub fn spectrum(p: &ModelParams) -> Result<SpectrumResult> {
    let plus_eigs = sigma_plus_spectrum(p);
    let (minus_eigs, quartic) = sigma_minus_spectrum(p)?;
    let numeric_eigs = eigenvalues(&build_liouvillian(p))?;
    let closed: Vec<Complex64> = plus_eigs.iter().chain(&minus_eigs).copied().collect();
    let max_mismatch = multiset_mismatch(&closed, &numeric_eigs);
    Ok(SpectrumResult {
        params: *p,
        plus_eigs,
        minus_eigs,
        quartic,
        numeric_eigs,
        max_mismatch,
        min_gap: structural_gap(&plus_eigs, &minus_eigs),
    })
}

/// Minimum gap over both blocks with one copy of the persistent −Γ/2 removed.
pub fn structural_gap(plus: &[Complex64; 8], minus: &[Complex64; 8]) -> f64 {
    let values: Vec<Complex64> = plus
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 3)
        .map(|(_, z)| *z)
        .chain(minus.iter().copied())
        .collect();
    min_pairwise_gap(&values)
}

/// Leading large-Γ behaviour of all sixteen eigenvalues, grouped in stripes
/// with real parts near 0, −Γ/2 and −Γ.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSpectrum {
    /// `4(1 + γ²)`
    pub gamma_plus: f64,
    /// `4(1 − γ²)`
    pub gamma_minus: f64,
    pub stripe0: [Complex64; 4],
    pub stripe1: [Complex64; 8],
    pub stripe2: [Complex64; 4],
}

impl AsymptoticSpectrum {
    pub fn all(&self) -> Vec<Complex64> {
        self.stripe0
            .iter()
            .chain(&self.stripe1)
            .chain(&self.stripe2)
            .copied()
            .collect()
    }
}

pub fn asymptotic_spectrum(p: &ModelParams) -> AsymptoticSpectrum {
    let g = p.big_gamma;
    let gp = 4.0 * (1.0 + p.x());
    let gm = 4.0 * (1.0 - p.x());
    let d = c(0.0, 2.0 * p.delta);
    let h = c(-g / 2.0, 0.0);
    let w = 8.0 * p.gamma / g;
    AsymptoticSpectrum {
        gamma_plus: gp,
        gamma_minus: gm,
        stripe0: [
            c(0.0, 0.0),
            c(-2.0 * gp / g, 0.0),
            c(-gp / g, 0.0) + d,
            c(-gp / g, 0.0) - d,
        ],
        stripe1: [
            h,
            h,
            h + 2.0 * gm / g,
            h - 2.0 * gm / g,
            h + w + d,
            h + w - d,
            h - w + d,
            h - w - d,
        ],
        stripe2: [
            c(-g, 0.0),
            c(-g + 2.0 * gp / g, 0.0),
            c(-g + gp / g, 0.0) + d,
            c(-g + gp / g, 0.0) - d,
        ],
    }
}

/// Worst distance between the closed-form spectrum and the stripe values.
pub fn asymptotic_pairing_error(p: &ModelParams) -> Result<f64> {
    let plus = sigma_plus_spectrum(p);
    let (minus, _) = sigma_minus_spectrum(p)?;
    let exact: Vec<Complex64> = plus.iter().chain(&minus).copied().collect();
    Ok(multiset_mismatch(&exact, &asymptotic_spectrum(p).all()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanReport {
    pub block: BlockTag,
    pub eigenvalue: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
    /// Sizes of the Jordan blocks, largest first.
    pub block_sizes: Vec<usize>,
}

impl JordanReport {
    pub fn is_defective(&self) -> bool {
        self.geometric < self.algebraic
    }
}

pub fn block_matrix(p: &ModelParams, block: BlockTag) -> ComplexMatrix {
    let (plus, minus) = extract_blocks(&build_liouvillian(p));
    match block {
        BlockTag::Plus => plus,
        BlockTag::Minus => minus,
    }
}

/// Eigenvalue clusters of one block with their Jordan structure.
pub fn jordan_structure(p: &ModelParams, block: BlockTag) -> Result<Vec<JordanReport>> {
    let m = block_matrix(p, block);
    Ok(jordan_of_matrix(&m)?
        .into_iter()
        .map(|(eigenvalue, algebraic, geometric, block_sizes)| JordanReport {
            block,
            eigenvalue,
            algebraic,
            geometric,
            block_sizes,
        })
        .collect())
}

type Cluster = (Complex64, usize, usize, Vec<usize>);

/// Clusters the spectrum of `m` and infers Jordan block sizes from the ranks
/// of successive powers of `m − λI`.
pub fn jordan_of_matrix(m: &ComplexMatrix) -> Result<Vec<Cluster>> {
    let n = m.rows();
    let ev = eigen(m, false)?.eigenvalues;
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in ev {
        match groups.iter_mut().find(|g| {
            g.iter()
                .any(|w| (w - z).norm() <= JORDAN_CLUSTER_RADIUS * w.norm().max(1.0))
        }) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups.sort_by(|a, b| {
        let (x, y) = (a[0], b[0]);
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });

    let mut out = Vec::new();
    for g in groups {
        let alg = g.len();
        let lambda = g.iter().sum::<Complex64>() / alg as f64;
        let shifted = m.shifted(lambda);
        // ranks[k] = rank((M − λI)^k)
        let mut ranks = vec![n];
        let mut power = ComplexMatrix::identity(n);
        for _ in 0..alg {
            power = &power * &shifted;
            let r = numeric_rank(&power, JORDAN_RANK_TOL);
            ranks.push(r);
            if r + alg <= n {
                break;
            }
        }
        // Number of blocks of size ≥ k is ranks[k−1] − ranks[k].
        let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0].saturating_sub(w[1])).collect();
        let geometric = at_least[0];
        let mut sizes = Vec::new();
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k].saturating_sub(next) {
                sizes.push(k + 1);
            }
        }
        sizes.sort_by(|a, b| b.cmp(a));
        out.push((lambda, alg, geometric, sizes));
    }
    Ok(out)
}
