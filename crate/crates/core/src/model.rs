//! Hamiltonian, jump operator, vectorized Liouvillian and its two parity blocks.
//!
//! Vectorization is row-major: `vec(ρ)[4i + j] = ρ[i][j]`, so that
//! `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`.

use std::fmt;

use lepm_linalg::{kron, Complex64, ComplexMatrix};

use crate::{LepmError, ModelParams, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Indices of the 16-dimensional space kept in the even block Σ₊.
pub const PLUS_INDICES: [usize; 8] = [0, 3, 5, 6, 9, 10, 12, 15];
/// Indices kept in the odd block Σ₋.
pub const MINUS_INDICES: [usize; 8] = [1, 2, 4, 7, 8, 11, 13, 14];

/// Tolerance for the explicit-form comparison of the blocks.
pub const BLOCK_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockTag {
    Plus,
    Minus,
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockTag::Plus => "plus",
            BlockTag::Minus => "minus",
        })
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_rows(&[[z, -I], [I, z]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

/// Raising operator `[[0, 1], [0, 0]]`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]])
}

pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let xx = kron(&sigma_x(), &sigma_x());
    let yy = kron(&sigma_y(), &sigma_y()).scale_real(p.gamma);
    let zz = kron(&sigma_z(), &sigma_z()).scale_real(p.delta);
    &(&xx + &yy) + &zz
}

/// `σ⁺ ⊗ I₂`, pumping the first qubit up.
pub fn jump_operator() -> ComplexMatrix {
    kron(&sigma_plus(), &ComplexMatrix::identity(2))
}

pub fn build_liouvillian(p: &ModelParams) -> ComplexMatrix {
    let h = build_hamiltonian(p);
    let l = jump_operator();
    let id = ComplexMatrix::identity(4);
    let ldl = &l.adjoint() * &l;
    let unitary = &kron(&h, &id).scale(-I) + &kron(&id, &h.transpose()).scale(I);
    let dissipator = &(&kron(&l, &l.conj()) - &kron(&ldl, &id).scale_real(0.5))
        - &kron(&id, &ldl.transpose()).scale_real(0.5);
    &unitary + &dissipator.scale_real(p.big_gamma)
}

/// Row-major vectorization.
pub fn vectorize(m: &ComplexMatrix) -> Vec<Complex64> {
    m.as_slice().to_vec()
}

/// Inverse of [`vectorize`] for an `n × n` matrix.
pub fn unvectorize(v: &[Complex64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_vec(n, n, v.to_vec()).expect("vector length must be n²")
}

/// `Q± = ½(I₁₆ ± Σz⊗Σz)` with `Σz = σz⊗σz`.
pub fn projectors() -> (ComplexMatrix, ComplexMatrix) {
    let big_sz = kron(&sigma_z(), &sigma_z());
    let s = kron(&big_sz, &big_sz);
    let id = ComplexMatrix::identity(16);
    ((&id + &s).scale_real(0.5), (&id - &s).scale_real(0.5))
}

/// Σ₊ and Σ₋ taken from the full generator, rows in ascending index order.
pub fn extract_blocks(full: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (
        full.select(&PLUS_INDICES, &PLUS_INDICES),
        full.select(&MINUS_INDICES, &MINUS_INDICES),
    )
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn four(rows: [[Complex64; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&rows)
}

fn block_a(a: f64, big_gamma: f64) -> ComplexMatrix {
    let z = c(0.0, 0.0);
    let ia = c(0.0, a);
    let g = c(-big_gamma, 0.0);
    let h = c(-big_gamma / 2.0, 0.0);
    four([[z, z, -ia, ia], [z, g, ia, -ia], [-ia, ia, h, z], [ia, -ia, z, h]])
}

fn block_b(first: f64, second: f64, shift: Complex64, big_gamma: f64) -> ComplexMatrix {
    let z = c(0.0, 0.0);
    let i1 = c(0.0, first);
    let i2 = c(0.0, second);
    let g = c(-big_gamma, 0.0) + shift;
    let h = c(-big_gamma / 2.0, 0.0) + shift;
    four([
        [shift, z, -i1, i2],
        [z, g, i2, -i1],
        [-i1, i2, h, z],
        [i2, -i1, z, h],
    ])
}

fn assemble(top: &ComplexMatrix, bottom: &ComplexMatrix, big_gamma: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, true) => top[(i, j)],
        (false, false) => bottom[(i - 4, j - 4)],
        // The coupling block has a single nonzero entry at (0, 1).
        _ if i % 4 == 0 && j % 4 == 1 => c(big_gamma, 0.0),
        _ => c(0.0, 0.0),
    })
}

/// Closed-form Σ₊ written as `[[A1, C], [C, A2]]`.
pub fn explicit_sigma_plus(p: &ModelParams) -> ComplexMatrix {
    assemble(
        &block_a(1.0 - p.gamma, p.big_gamma),
        &block_a(-(1.0 + p.gamma), p.big_gamma),
        p.big_gamma,
    )
}

/// Closed-form Σ₋ written as `[[B1, C], [C, B2]]`.
pub fn explicit_sigma_minus(p: &ModelParams) -> ComplexMatrix {
    let d = c(0.0, 2.0 * p.delta);
    assemble(
        &block_b(1.0 + p.gamma, 1.0 - p.gamma, d, p.big_gamma),
        &block_b(1.0 - p.gamma, 1.0 + p.gamma, -d, p.big_gamma),
        p.big_gamma,
    )
}

#[derive(Debug, Clone)]
pub struct LiouvillianBlocks {
    pub params: ModelParams,
    pub full: ComplexMatrix,
    pub sigma_plus: ComplexMatrix,
    pub sigma_minus: ComplexMatrix,
    pub plus_indices: [usize; 8],
    pub minus_indices: [usize; 8],
    /// `sigma_plus[P][:, P]` equals the explicit form for this `P`.
    pub plus_permutation: Vec<usize>,
    pub minus_permutation: Vec<usize>,
}

/// Builds the generator, checks the parity decomposition, extracts both
/// blocks and matches them against their explicit forms.
pub fn build_blocks(p: &ModelParams) -> Result<LiouvillianBlocks> {
    let full = build_liouvillian(p);
    let (qp, qm) = projectors();
    let cross = (&(&qp * &full) * &qm).max_abs().max((&(&qm * &full) * &qp).max_abs());
    let sum_dev = (&qp + &qm).max_abs_diff(&ComplexMatrix::identity(16));
    if cross > 1e-14 || sum_dev > 0.0 {
        return Err(LepmError::BlockMismatch {
            block: BlockTag::Plus,
            deviation: cross.max(sum_dev),
        });
    }
    let (sigma_plus, sigma_minus) = extract_blocks(&full);
    let plus_permutation = match_permutation(&sigma_plus, &explicit_sigma_plus(p), BlockTag::Plus)?;
    let minus_permutation =
        match_permutation(&sigma_minus, &explicit_sigma_minus(p), BlockTag::Minus)?;
    Ok(LiouvillianBlocks {
        params: *p,
        full,
        sigma_plus,
        sigma_minus,
        plus_indices: PLUS_INDICES,
        minus_indices: MINUS_INDICES,
        plus_permutation,
        minus_permutation,
    })
}

/// Finds `P` with `x[P[i]][P[j]] ≈ target[i][j]`, trying only candidates
/// whose diagonal entries agree.
pub fn match_permutation(
    x: &ComplexMatrix,
    target: &ComplexMatrix,
    block: BlockTag,
) -> Result<Vec<usize>> {
    let n = x.rows();
    let tol = BLOCK_MATCH_TOL * x.max_abs().max(1.0);
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| (x[(k, k)] - target[(i, i)]).norm() <= tol)
                .collect()
        })
        .collect();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if search(x, target, tol, &candidates, &mut perm, &mut used) {
        return Ok(perm);
    }
    // Report the deviation under the identity ordering.
    Err(LepmError::BlockMismatch {
        block,
        deviation: x.max_abs_diff(target),
    })
}

fn search(
    x: &ComplexMatrix,
    target: &ComplexMatrix,
    tol: f64,
    candidates: &[Vec<usize>],
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let i = perm.len();
    if i == candidates.len() {
        return true;
    }
    for &k in &candidates[i] {
        if used[k] {
            continue;
        }
        let consistent = perm.iter().enumerate().all(|(j, &pj)| {
            (x[(k, pj)] - target[(i, j)]).norm() <= tol && (x[(pj, k)] - target[(j, i)]).norm() <= tol
        });
        if !consistent {
            continue;
        }
        perm.push(k);
        used[k] = true;
        if search(x, target, tol, candidates, perm, used) {
            return true;
        }
        perm.pop();
        used[k] = false;
    }
    false
}
