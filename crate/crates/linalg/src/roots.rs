//! Real roots of real polynomials via companion-matrix eigenvalues.

use num_complex::Complex64;

use crate::{eigen, ComplexMatrix, LinalgError, Result};

/// Coefficients below this fraction of the largest one are trimmed from the top.
pub const TRIM_TOL: f64 = 1e-12;
/// Radius, relative to `|z|`, within which companion
/// eigenvalues are merged into one root.
pub const CLUSTER_RADIUS: f64 = 1e-6;
/// Largest degree accepted after trimming.
pub const MAX_DEGREE: usize = 16;

/// Real polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialReal {
    coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
    /// `|p(z)|` divided by [`PolynomialReal::scale_at`].
    pub residual: f64,
}

impl PolynomialReal {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Builds `lead · Π (z − r)`.
    pub fn from_roots(lead: f64, roots: &[f64]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Self { coeffs: c }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Drops leading coefficients below `TRIM_TOL · max|c|`.
    pub fn trimmed(&self) -> Result<Self> {
        let top = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if !top.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        if top == 0.0 {
            return Err(LinalgError::DegenerateAllZero);
        }
        let cut = TRIM_TOL * top;
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.abs() <= cut) {
            c.pop();
        }
        Ok(Self { coeffs: c })
    }

    /// Degree as stored (no trimming).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Self { coeffs: c }
    }

    /// `Σ |c_i| max(1, |z|)^i`, the natural size of `p(z)` under rounding.
    pub fn scale_at(&self, z: f64) -> f64 {
        let w = z.abs().max(1.0);
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * w + c.abs())
    }
}

/// Real roots in `[lo, hi]` whose residual satisfies
/// `|p(z)| ≤ tol · scale_at(z)`, sorted ascending, with multiplicities.
pub fn real_roots(p: &PolynomialReal, lo: f64, hi: f64, tol: f64) -> Result<Vec<RealRoot>> {
    let p = p.trimmed()?;
    let lowest_nonzero = p.coeffs.iter().position(|&c| c != 0.0).unwrap_or(0);
    let reduced = PolynomialReal::new(p.coeffs[lowest_nonzero..].to_vec());
    if reduced.degree() > MAX_DEGREE {
        return Err(LinalgError::TooLarge {
            dim: reduced.degree(),
            max: MAX_DEGREE,
        });
    }

    let mut out = Vec::new();
    if lowest_nonzero > 0 && lo <= 0.0 && 0.0 <= hi {
        out.push(RealRoot {
            value: 0.0,
            multiplicity: lowest_nonzero,
            residual: 0.0,
        });
    }

    for cluster in clusters(&companion_roots(&reduced)?) {
        let m = cluster.len();
        let centre = cluster.iter().map(|z| z.re).sum::<f64>() / m as f64;
        let imag = cluster.iter().map(|z| z.im).sum::<f64>() / m as f64;
        // A lone root with sizeable imaginary part belongs to a complex pair.
        if imag.abs() > CLUSTER_RADIUS * centre.abs() {
            continue;
        }
        let z = polish(&p, centre, m);
        if !(lo..=hi).contains(&z) {
            continue;
        }
        let residual = p.eval(z).abs() / p.scale_at(z);
        if residual <= tol {
            out.push(RealRoot {
                value: z,
                multiplicity: m,
                residual,
            });
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(out)
}

fn companion_roots(p: &PolynomialReal) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 {
        return Ok(vec![]);
    }
    let c = p.coeffs();
    // Substitute z = s·w so the scaled polynomial has |c_0| = |c_d|.
    let s = (c[0].abs() / c[d].abs()).powf(1.0 / d as f64);
    let s = if s.is_finite() && s > 0.0 {
        2f64.powi(s.log2().round() as i32)
    } else {
        1.0
    };
    let scaled: Vec<f64> = c
        .iter()
        .enumerate()
        .map(|(i, &ci)| ci * s.powi(i as i32) / (c[d] * s.powi(d as i32)))
        .collect();
    let mut comp = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        comp[(0, j)] = Complex64::new(-scaled[d - 1 - j], 0.0);
    }
    for i in 1..d {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    Ok(eigen(&comp, false)?
        .eigenvalues
        .into_iter()
        .map(|w| w * s)
        .collect())
}

/// Groups roots lying within the relative cluster radius of one another.
fn clusters(roots: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut sorted = roots.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; sorted.len()];
    let mut out = Vec::new();
    for i in 0..sorted.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut group = vec![sorted[i]];
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..sorted.len() {
                if used[j] {
                    continue;
                }
                // A nearly real conjugate pair is a split real double root
                // even when the two halves lie more than one radius apart.
                let near = group.iter().any(|g| {
                    let r = CLUSTER_RADIUS * g.norm();
                    (g - sorted[j]).norm() <= r
                        || (g.im.abs() <= r && (g - sorted[j].conj()).norm() <= r)
                });
                if near {
                    used[j] = true;
                    group.push(sorted[j]);
                    grew = true;
                }
            }
        }
        out.push(group);
    }
    out
}

/// Newton iteration on the `(m−1)`-th derivative, where a root of
/// multiplicity `m` is simple.
fn polish(p: &PolynomialReal, start: f64, m: usize) -> f64 {
    let mut f = p.clone();
    for _ in 1..m {
        f = f.derivative();
    }
    let df = f.derivative();
    let radius = 10.0 * CLUSTER_RADIUS * start.abs();
    let mut z = start;
    for _ in 0..30 {
        let d = df.eval(z);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = f.eval(z) / d;
        let next = z - step;
        if !next.is_finite() || (next - start).abs() > radius {
            break;
        }
        z = next;
        if step.abs() <= 4.0 * f64::EPSILON * z.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if p.eval(z).abs() <= p.eval(start).abs() {
        z
    } else {
        start
    }
}
