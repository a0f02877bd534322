//! Exceptional points of the generator.
//!
//! Σ₊ branches on the planes Γ = 8 and Γ = 8|γ|. Σ₋ branches where the
//! quartic for ξ has a repeated root; that discriminant is a degree-8
//! polynomial in Z = Γ² whose coefficients are polynomials in X = γ² and
//! Y = Δ².

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use lepm_linalg::{real_roots, Complex64, PolynomialReal};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::spectra::{min_pairwise_gap, sigma_minus_spectrum, sigma_plus_spectrum, structural_gap};
use crate::{LepmError, ModelParams, Result};

/// Acceptance bound on `|P(Z)| / Σ|a_i| max(1, Z)^i`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;
/// Residual bound for roots of even multiplicity. Such roots do not change
/// sign, so a shallow positive minimum of the polynomial (a near miss of two
/// coalescences) would otherwise pass the ordinary bound.
pub const EVEN_ROOT_RESIDUAL_TOL: f64 = 1e-14;
/// Coalescence witnesses sample the gap at `Γ(1 ± WITNESS_STEP)`.
pub const WITNESS_STEP: f64 = 1e-4;
/// Largest gap at the root for a witness to pass.
pub const WITNESS_GAP: f64 = 1e-3;
/// Below this, γ or Δ count as vanishing and the leading coefficients are
/// left to the trimming of the root finder.
pub const DEGENERATE_PARAM: f64 = 1e-4;
/// A Σ₋ root within this relative distance of a plane value is the same point.
pub const PLANE_MERGE_TOL: f64 = 1e-6;

/// Sum with Neumaier's compensation.
pub fn neumaier_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Exact or floating-point arithmetic for the coefficient table.
pub trait Ring: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn int(v: i64) -> Self;
}

impl Ring for f64 {
    fn int(v: i64) -> Self {
        v as f64
    }
}

/// `mant · 2^exp`, closed under the ring operations without any gcd work.
#[derive(Debug, Clone, PartialEq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::int(0));
        }
        let bits = v.abs().to_bits();
        let raw_exp = (bits >> 52) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mant = BigInt::from(m);
        Some(Self {
            mant: if v < 0.0 { -mant } else { mant },
            exp: e,
        })
    }

    /// Nearest `f64`, up to one unit in the last place.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&self.mant >> shift as usize).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        // Two steps keep the intermediate power of two representable.
        let half = e / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    fn aligned(a: Self, b: Self) -> (BigInt, BigInt, i64) {
        let exp = a.exp.min(b.exp);
        ((a.mant << (a.exp - exp) as usize), (b.mant << (b.exp - exp) as usize), exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::aligned(self, rhs);
        Dyadic { mant: a + b, exp }
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::aligned(self, rhs);
        Dyadic { mant: a - b, exp }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic {
            mant: self.mant * rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Ring for Dyadic {
    fn int(v: i64) -> Self {
        Dyadic {
            mant: BigInt::from(v),
            exp: 0,
        }
    }
}

fn prod<T: Ring>(factors: &[&T]) -> T {
    factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| acc * (*f).clone())
}

/// `table[i][k]` is the coefficient of `Y^k` in `a_i(X, Y)`.
pub fn lep_y_coefficients(x: f64) -> [[f64; 7]; 9] {
    y_table(x)
}

fn y_table<T: Ring>(x: T) -> [[T; 7]; 9] {
    let int = T::int;
    let one = int(1);
    let m = x.clone() - one.clone();
    let p = x.clone() + one;
    let m2 = prod(&[&m, &m]);
    let m4 = prod(&[&m2, &m2]);
    let m6 = prod(&[&m4, &m2]);
    let m8 = prod(&[&m4, &m4]);
    let h = |c: &[i64]| c.iter().rev().fold(int(0), |acc, &v| acc * x.clone() + int(v));
    let two = |e: u32| int(1i64 << e);
    let mut t: [[T; 7]; 9] = std::array::from_fn(|_| std::array::from_fn(|_| int(0)));

    // a0 = 2^32 (X−1)^4 X Y² q(Y)², q = (X−1)² − 8(1+X)Y + 16Y²
    let (q0, q1, q2) = (m2.clone(), -prod(&[&int(8), &p]), int(16));
    let pre = prod(&[&two(32), &m4, &x]);
    t[0][2] = prod(&[&pre, &q0, &q0]);
    t[0][3] = prod(&[&pre, &int(2), &q0, &q1]);
    t[0][4] = prod(&[&pre, &(prod(&[&q1, &q1]) + prod(&[&int(2), &q0, &q2]))]);
    t[0][5] = prod(&[&pre, &int(2), &q1, &q2]);
    t[0][6] = prod(&[&pre, &q2, &q2]);

    t[1][1] = -prod(&[&two(27), &m8, &x]);
    t[1][2] = prod(&[&two(31), &m6, &x, &p]);
    t[1][3] = prod(&[&two(31), &x, &m4, &h(&[1, 30, 1])]);
    t[1][4] = -prod(&[&two(35), &m2, &x, &p, &h(&[3, 2, 3])]);
    t[1][5] = prod(&[&two(36), &m2, &x, &h(&[5, 6, 5])]);
    t[1][6] = -prod(&[&two(38), &x, &m2, &p]);

    t[2][0] = prod(&[&two(20), &m8, &x]);
    t[2][1] = prod(&[&two(20), &m6, &p, &h(&[1, -34, 1])]);
    t[2][2] = -prod(&[&two(23), &m4, &h(&[1, 24, 238, 24, 1])]);
    t[2][3] = prod(&[&two(24), &m2, &p, &h(&[1, 44, -602, 44, 1])]);
    t[2][4] = prod(&[&two(29), &x, &h(&[27, 36, 2, 36, 27])]);
    t[2][5] = -prod(&[&two(33), &x, &p, &h(&[5, -2, 5])]);
    t[2][6] = prod(&[&two(33), &x, &h(&[3, 2, 3])]);

    t[3][0] = -prod(&[&two(14), &m6, &p, &h(&[1, -18, 1])]);
    t[3][1] = prod(&[&two(18), &m4, &h(&[1, 4, 54, 4, 1])]);
    t[3][2] = prod(&[&two(21), &p, &m2, &h(&[1, 10, 42, 10, 1])]);
    t[3][3] = -prod(&[&two(20), &h(&[3, 22, -883, -332, -883, 22, 3])]);
    t[3][4] = -prod(&[&two(26), &x, &p, &h(&[21, 22, 21])]);
    t[3][5] = prod(&[&two(29), &x, &h(&[5, 6, 5])]);
    t[3][6] = -prod(&[&two(30), &x, &p]);

    t[4][0] = -prod(&[&int(256), &m4, &h(&[15, -60, -166, -60, 15])]);
    t[4][1] = -prod(&[&two(15), &m2, &p, &h(&[1, 4, -42, 4, 1])]);
    t[4][2] = -prod(&[&two(16), &h(&[3, 42, -3, -340, -3, 42, 3])]);
    t[4][3] = prod(&[&two(16), &p, &h(&[3, -156, -974, -156, 3])]);
    t[4][4] = prod(&[&two(21), &x, &h(&[39, 74, 39])]);
    t[4][5] = -prod(&[&int(5), &two(24), &x, &p]);
    t[4][6] = prod(&[&two(24), &x]);

    t[5][0] = -prod(&[&int(64), &h(&[3, 1, -21, 17, 17, -21, 1, 3])]);
    t[5][1] = -prod(&[&int(256), &m2, &h(&[1, 68, 246, 68, 1])]);
    t[5][2] = prod(&[&two(13), &p, &h(&[1, -6, 1]), &h(&[1, 14, 1])]);
    t[5][3] = -prod(&[&two(12), &h(&[1, -236, -682, -236, 1])]);
    t[5][4] = -prod(&[&int(9), &two(18), &x, &p]);
    t[5][5] = prod(&[&two(20), &x]);

    t[6][0] = prod(&[&int(4), &h(&[1, -2, -1, 4, -1, -2, 1])]);
    t[6][1] = prod(&[&int(16), &m2, &p, &h(&[5, 38, 5])]);
    t[6][2] = -prod(&[&two(7), &h(&[1, -28, -138, -28, 1])]);
    t[6][3] = -prod(&[&int(7), &two(12), &x, &p]);
    t[6][4] = prod(&[&int(3), &two(13), &x]);

    t[7][1] = -h(&[1, 4, -10, 4, 1]);
    t[7][2] = -prod(&[&two(7), &x, &p]);
    t[7][3] = prod(&[&two(8), &x]);

    t[8][2] = x.clone();
    t
}

/// The nine coefficients `a_0..a_8` at one `(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LepPolynomial {
    pub x: f64,
    pub y: f64,
    pub coeffs: [f64; 9],
}

impl LepPolynomial {
    pub fn in_z(&self) -> PolynomialReal {
        PolynomialReal::new(self.coeffs.to_vec())
    }

    pub fn eval(&self, z: f64) -> f64 {
        neumaier_sum(self.coeffs.iter().enumerate().map(|(i, a)| a * z.powi(i as i32)))
    }

    /// `Σ |a_i| max(1, Z)^i`
    pub fn scale_at(&self, z: f64) -> f64 {
        self.in_z().scale_at(z)
    }
}

/// Coefficients evaluated exactly from the binary values of `x` and `y`
/// and rounded once, so that the heavy cancellation between the table
/// entries near X = 1 costs no accuracy.
pub fn lep_poly_coeffs(x: f64, y: f64) -> LepPolynomial {
    let table = y_table(exact(x));
    let ye = exact(y);
    let mut coeffs = [0.0; 9];
    for (i, row) in table.iter().enumerate() {
        let a = row.iter().rev().fold(Dyadic::int(0), |acc, t| acc * ye.clone() + t.clone());
        coeffs[i] = a.to_f64();
    }
    LepPolynomial { x, y, coeffs }
}

/// Non-finite input has no exact value; callers validate first.
fn exact(v: f64) -> Dyadic {
    Dyadic::from_f64(v).expect("finite input")
}

/// Gap samples around a candidate exceptional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub gap_below: f64,
    pub gap_at: f64,
    pub gap_above: f64,
}

impl Witness {
    pub fn evaluate(big_gamma: f64, gap: impl Fn(f64) -> Option<f64>) -> Option<Self> {
        Some(Self {
            gap_below: gap(big_gamma * (1.0 - WITNESS_STEP))?,
            gap_at: gap(big_gamma)?,
            gap_above: gap(big_gamma * (1.0 + WITNESS_STEP))?,
        })
    }

    pub fn passed(&self) -> bool {
        self.gap_at <= WITNESS_GAP && self.gap_at <= self.gap_below && self.gap_at <= self.gap_above
    }
}

/// Minimum gap among the closed-form Σ₋ eigenvalues.
pub fn minus_gap(gamma: f64, delta: f64, big_gamma: f64) -> Option<f64> {
    let p = ModelParams::new(gamma, delta, big_gamma).ok()?;
    let (eigs, _) = sigma_minus_spectrum(&p).ok()?;
    Some(min_pairwise_gap(&eigs))
}

/// Minimum gap among the closed-form Σ₊ eigenvalues, −Γ/2 counted once.
pub fn plus_gap(gamma: f64, big_gamma: f64) -> Option<f64> {
    let p = ModelParams::new(gamma, 0.0, big_gamma).ok()?;
    let plus = sigma_plus_spectrum(&p);
    let values: Vec<Complex64> = plus
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 3)
        .map(|(_, z)| *z)
        .collect();
    Some(min_pairwise_gap(&values))
}

/// Minimum gap over all sixteen closed-form eigenvalues.
pub fn full_gap(gamma: f64, delta: f64, big_gamma: f64) -> Option<f64> {
    let p = ModelParams::new(gamma, delta, big_gamma).ok()?;
    let (minus, _) = sigma_minus_spectrum(&p).ok()?;
    Some(structural_gap(&sigma_plus_spectrum(&p), &minus))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinusLep {
    pub big_gamma: f64,
    pub z: f64,
    pub multiplicity: usize,
    pub residual: f64,
    pub witness: Option<Witness>,
}

impl MinusLep {
    pub fn witness_passed(&self) -> bool {
        self.witness.is_some_and(|w| w.passed())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LepSet {
    pub gamma: f64,
    pub delta: f64,
    /// `[8, 8|γ|]`
    pub plus_leps: [f64; 2],
    /// Ascending in Γ.
    pub minus_leps: Vec<MinusLep>,
}

impl LepSet {
    pub fn branch_count(&self) -> usize {
        self.minus_leps.len()
    }

    pub fn minus_values(&self) -> Vec<f64> {
        self.minus_leps.iter().map(|l| l.big_gamma).collect()
    }

    /// Distinct exceptional Γ values of both blocks, merged within
    /// `PLANE_MERGE_TOL`.
    pub fn all_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.plus_leps.to_vec();
        v.extend(self.minus_values());
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() <= PLANE_MERGE_TOL * b.abs().max(1.0));
        v
    }
}

/// Positive real roots `Z` of the degree-8 polynomial, accepted by the
/// scale-relative residual bound.
pub fn lep_z_roots(x: f64, y: f64) -> Result<Vec<(f64, usize, f64)>> {
    lep_z_roots_with_tol(x, y, ROOT_RESIDUAL_TOL)
}

/// As [`lep_z_roots`] with `tol` in place of [`ROOT_RESIDUAL_TOL`]. Roots of
/// even multiplicity never use a bound looser than
/// [`EVEN_ROOT_RESIDUAL_TOL`].
pub fn lep_z_roots_with_tol(x: f64, y: f64, tol: f64) -> Result<Vec<(f64, usize, f64)>> {
    let poly = lep_poly_coeffs(x, y);
    let degenerate = x.sqrt() < DEGENERATE_PARAM || y.sqrt() < DEGENERATE_PARAM;
    // Substituting Z = s·W with s near the largest root magnitude keeps the
    // genuinely small leading coefficient from being trimmed away.
    let s = if degenerate { 1.0 } else { root_scale(&poly.coeffs) };
    let scaled: Vec<f64> = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a * s.powi(i as i32))
        .collect();
    let roots = real_roots(&PolynomialReal::new(scaled), 0.0, f64::INFINITY, f64::INFINITY)?;
    Ok(roots
        .into_iter()
        .filter(|r| r.value > 0.0)
        .filter_map(|r| {
            let z = r.value * s;
            let residual = poly.eval(z).abs() / poly.scale_at(z);
            let tol = if r.multiplicity % 2 == 0 {
                tol.min(EVEN_ROOT_RESIDUAL_TOL)
            } else {
                tol
            };
            (residual <= tol).then_some((z, r.multiplicity, residual))
        })
        .collect())
}

/// Power of two close to the Fujiwara bound on the root magnitudes.
fn root_scale(coeffs: &[f64]) -> f64 {
    let Some(d) = coeffs.iter().rposition(|&c| c != 0.0) else {
        return 1.0;
    };
    let lead = coeffs[d].abs();
    let bound = (0..d)
        .filter(|&i| coeffs[i] != 0.0)
        .map(|i| (coeffs[i].abs() / lead).powf(1.0 / (d - i) as f64))
        .fold(0.0f64, f64::max);
    if bound > 0.0 && bound.is_finite() {
        2f64.powi(bound.log2().round() as i32)
    } else {
        1.0
    }
}

/// All exceptional points of Σ₋ at `(γ, Δ)` with coalescence witnesses.
pub fn lep_roots_minus(gamma: f64, delta: f64) -> Result<LepSet> {
    lep_roots_minus_with_tol(gamma, delta, ROOT_RESIDUAL_TOL)
}

pub fn lep_roots_minus_with_tol(gamma: f64, delta: f64, tol: f64) -> Result<LepSet> {
    if !(gamma.is_finite() && delta.is_finite()) {
        return Err(LepmError::InvalidParams(format!("gamma={gamma}, delta={delta}")));
    }
    let minus_leps = lep_z_roots_with_tol(gamma * gamma, delta * delta, tol)?
        .into_iter()
        .map(|(z, multiplicity, residual)| {
            let big_gamma = z.sqrt();
            MinusLep {
                big_gamma,
                z,
                multiplicity,
                residual,
                witness: Witness::evaluate(big_gamma, |g| minus_gap(gamma, delta, g)),
            }
        })
        .collect();
    Ok(LepSet {
        gamma,
        delta,
        plus_leps: [8.0, 8.0 * gamma.abs()],
        minus_leps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Plane8,
    Plane8Gamma,
    SigmaMinus,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Plane8 => "PLANE_8",
            Region::Plane8Gamma => "PLANE_8GAMMA",
            Region::SigmaMinus => "SIGMA_MINUS",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub gamma: f64,
    pub delta: f64,
    pub gamma_cr: f64,
    pub region: Region,
    /// Largest Σ₋ exceptional point, if any.
    pub minus_max: Option<f64>,
}

/// Largest exceptional Γ and the block responsible for it. On the line
/// |γ| = 1 the two planes coincide and the point is labelled `PLANE_8`.
pub fn gamma_cr(gamma: f64, delta: f64) -> Result<PhasePoint> {
    let set = lep_roots_minus(gamma, delta)?;
    Ok(classify(&set))
}

pub fn classify(set: &LepSet) -> PhasePoint {
    let g = set.gamma.abs();
    let (plane, plane_region) = if g > 1.0 {
        (8.0 * g, Region::Plane8Gamma)
    } else {
        (8.0, Region::Plane8)
    };
    let minus_max = set
        .minus_leps
        .iter()
        .map(|l| l.big_gamma)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let (gamma_cr, region) = match minus_max {
        Some(m) if m > plane * (1.0 + PLANE_MERGE_TOL) => (m, Region::SigmaMinus),
        _ => (plane, plane_region),
    };
    PhasePoint {
        gamma: set.gamma,
        delta: set.delta,
        gamma_cr,
        region,
        minus_max,
    }
}

/// Leading small-Δ behaviour `max(|2(γ²−1)|, |γ³ − 1/γ|) / Δ`.
pub fn small_delta_asymptote(gamma: f64, delta: f64) -> f64 {
    (2.0 * (gamma * gamma - 1.0)).abs().max((gamma.powi(3) - 1.0 / gamma).abs()) / delta.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `0 < γ < 1`, boundary with the plane Γ = 8.
    Left,
    /// `γ > 1`, boundary with the plane Γ = 8γ.
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "LEFT",
            Side::Right => "RIGHT",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub gamma: f64,
    /// Positive roots `Δ`, ascending.
    pub roots: Vec<f64>,
    pub error: Option<LepmError>,
}

impl BoundarySample {
    /// Upper branch, the boundary of the plane region.
    pub fn delta2(&self) -> Option<f64> {
        self.roots.last().copied()
    }

    /// Branch just below the upper one.
    pub fn delta1(&self) -> Option<f64> {
        let n = self.roots.len();
        (n >= 2).then(|| self.roots[n - 2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub side: Side,
    pub samples: Vec<BoundarySample>,
}

/// The degree-8 polynomial at fixed `Z`, as a polynomial in `Y`, with
/// coefficients rounded once from exact values.
pub fn lep_poly_in_y(x: f64, z: f64) -> PolynomialReal {
    let table = y_table(exact(x));
    let z = exact(z);
    let coeffs = (0..7)
        .map(|k| {
            let c = table
                .iter()
                .rev()
                .fold(Dyadic::int(0), |acc, row| acc * z.clone() + row[k].clone());
            c.to_f64()
        })
        .collect();
    PolynomialReal::new(coeffs)
}

pub fn boundary_sample(side: Side, gamma: f64) -> BoundarySample {
    let in_range = match side {
        Side::Left => gamma > 0.0 && gamma < 1.0,
        Side::Right => gamma > 1.0 && gamma.is_finite(),
    };
    if !in_range {
        return BoundarySample {
            gamma,
            roots: vec![],
            error: Some(LepmError::InvalidParams(format!(
                "gamma {gamma} is outside the {side} side"
            ))),
        };
    }
    let z = match side {
        Side::Left => 64.0,
        Side::Right => 64.0 * gamma * gamma,
    };
    let poly = lep_poly_in_y(gamma * gamma, z);
    let result = real_roots(&poly, 0.0, f64::INFINITY, ROOT_RESIDUAL_TOL).map(|roots| {
        roots
            .into_iter()
            .filter(|r| r.value > 0.0)
            .map(|r| r.value.sqrt())
            .collect::<Vec<f64>>()
    });
    match result {
        Ok(roots) if !roots.is_empty() => BoundarySample {
            gamma,
            roots,
            error: None,
        },
        Ok(_) => BoundarySample {
            gamma,
            roots: vec![],
            error: Some(LepmError::NoRoot { gamma }),
        },
        Err(e) => BoundarySample {
            gamma,
            roots: vec![],
            error: Some(e.into()),
        },
    }
}

pub fn boundary_curve(side: Side, gamma_samples: &[f64]) -> BoundaryCurve {
    BoundaryCurve {
        side,
        samples: gamma_samples
            .par_iter()
            .map(|&g| boundary_sample(side, g))
            .collect(),
    }
}

/// `n` samples on one side, log-spaced in the distance to γ = 1 so they
/// crowd towards the meeting point of the two planes.
pub fn default_boundary_samples(side: Side, n: usize) -> Vec<f64> {
    let (near, far) = match side {
        Side::Left => (1e-3f64, 0.95),
        Side::Right => (1e-3, 2.0),
    };
    let n = n.max(2);
    (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            let d = near * (far / near).powf(t);
            match side {
                Side::Left => 1.0 - d,
                Side::Right => 1.0 + d,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub gamma: f64,
    pub delta: f64,
    pub result: std::result::Result<LepSet, LepmError>,
}

/// Evaluates every `(γ, Δ)` pair of the grid in parallel. Records come back
/// in row-major grid order (γ outer, Δ inner).
pub fn manifold_scan(gammas: &[f64], deltas: &[f64]) -> Vec<ScanRecord> {
    manifold_scan_with_tol(gammas, deltas, ROOT_RESIDUAL_TOL)
}

pub fn manifold_scan_with_tol(gammas: &[f64], deltas: &[f64], tol: f64) -> Vec<ScanRecord> {
    let points: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&g| deltas.iter().map(move |&d| (g, d)))
        .collect();
    points
        .par_iter()
        .map(|&(gamma, delta)| ScanRecord {
            gamma,
            delta,
            result: lep_roots_minus_with_tol(gamma, delta, tol),
        })
        .collect()
}

/// Phase classification of every grid point, in grid order.
pub fn phase_scan(gammas: &[f64], deltas: &[f64]) -> Vec<(f64, f64, Result<PhasePoint>)> {
    manifold_scan(gammas, deltas)
        .into_iter()
        .map(|r| (r.gamma, r.delta, r.result.map(|s| classify(&s))))
        .collect()
}

/// Values of Γ in `[lo, hi]` where some `Γ² + ξ_i` vanishes, so that a pair
/// of Σ₋ eigenvalues meets at −Γ/2 without the quartic having a repeated
/// root. Found as local minima of `min_i |Γ² + ξ_i| / Γ²` on a log grid of
/// `n` points, refined by golden-section search.
pub fn collapse_points(gamma: f64, delta: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let f = |g: f64| -> f64 {
        match ModelParams::new(gamma, delta, g).and_then(|p| sigma_minus_spectrum(&p)) {
            Ok((_, sol)) => sol
                .roots
                .iter()
                .map(|xi| (xi + g * g).norm() / (g * g).max(f64::MIN_POSITIVE))
                .fold(f64::INFINITY, f64::min),
            Err(_) => f64::INFINITY,
        }
    };
    let n = n.max(3);
    let grid: Vec<f64> = (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&g| f(g)).collect();
    let mut out = Vec::new();
    for k in 1..n - 1 {
        if vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1] {
            let (g, v) = golden_min(&f, grid[k - 1], grid[k + 1]);
            if v <= 1e-8 {
                out.push(g);
            }
        }
    }
    out
}

/// Golden-section minimization on `[a, b]`; returns the argument and value.
pub fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
