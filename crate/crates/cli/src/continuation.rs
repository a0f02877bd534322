//! Branch labels for eigenvalues sampled along a parameter.

use lepm_linalg::Complex64;

/// Weight of the distance to the extrapolated position. Small enough that
/// it only decides between candidates the nearest-neighbour cost cannot
/// tell apart, as at a coalescence.
const EXTRAPOLATION_WEIGHT: f64 = 1e-6;

/// Reorders every sample so that entry `i` continues branch `i` of the
/// previous sample. `s` is the sampling coordinate (Γ or ln Γ) and
/// `values[k]` the unordered eigenvalues at `s[k]`.
///
/// Each step is a greedy closest-first matching on the distance to the
/// previous value, with the linear extrapolation of each branch as the
/// tie-breaker.
pub fn continue_branches(s: &[f64], values: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    assert_eq!(s.len(), values.len());
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(values.len());
    for (k, cur) in values.iter().enumerate() {
        if k == 0 {
            out.push(cur.clone());
            continue;
        }
        let prev = &out[k - 1];
        let predicted: Vec<Complex64> = if k >= 2 && s[k - 1] != s[k - 2] {
            let ratio = (s[k] - s[k - 1]) / (s[k - 1] - s[k - 2]);
            prev.iter()
                .zip(&out[k - 2])
                .map(|(a, b)| a + (a - b) * ratio)
                .collect()
        } else {
            prev.clone()
        };
        let mut cost: Vec<(f64, usize, usize)> = Vec::with_capacity(prev.len() * cur.len());
        for i in 0..prev.len() {
            for (j, z) in cur.iter().enumerate() {
                let c = (z - prev[i]).norm() + EXTRAPOLATION_WEIGHT * (z - predicted[i]).norm();
                cost.push((c, i, j));
            }
        }
        cost.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut next = vec![None; prev.len()];
        let mut taken = vec![false; cur.len()];
        for (_, i, j) in cost {
            if next[i].is_none() && !taken[j] {
                next[i] = Some(cur[j]);
                taken[j] = true;
            }
        }
        out.push(next.into_iter().map(|z| z.expect("square assignment")).collect());
    }
    out
}
