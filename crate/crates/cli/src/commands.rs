//! One function per subcommand, each turning the merged flags into a table.

use lepm_core::dynamics::{
    quench_with, relaxation_time, DistanceNorm, QuenchSpec, DEFAULT_EPSILON,
};
use lepm_core::lepm::{
    classify, default_boundary_samples, manifold_scan_with_tol, plus_gap, BoundarySample, Side,
    Witness, ROOT_RESIDUAL_TOL,
};
use lepm_core::model::BlockTag;
use lepm_core::spectra::{
    asymptotic_spectrum, jordan_structure, pair_multisets, sigma_minus_spectrum,
    sigma_plus_spectrum, spectrum,
};
use lepm_core::{LepmError, ModelParams};
use lepm_linalg::Complex64;
use rayon::prelude::*;

use crate::args::{Args, BlockArg, Norm, Range, SideArg};
use crate::continuation::continue_branches;
use crate::output::{Cell, Table};
use crate::CliError;

pub const DEFAULT_DELTA_FLOOR: f64 = 0.05;
pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_QUENCH_SAMPLES: usize = 2001;
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 400;
/// (γ, Δ) used by zeno-check when either is absent.
pub const ZENO_DEFAULT_GAMMA: f64 = 0.6;
pub const ZENO_DEFAULT_DELTA: f64 = 0.4;

pub const SPECTRUM_COLUMNS: &[&str] =
    &["block", "index", "re", "im", "numeric_re", "numeric_im", "mismatch"];
pub const SWEEP_COLUMNS: &[&str] = &["Gamma", "block", "branch", "re", "im"];
pub const SCAN_COLUMNS: &[&str] = &[
    "gamma", "delta", "block", "branch", "Gamma", "multiplicity", "residual", "witness", "error",
];
pub const PHASE_COLUMNS: &[&str] = &["gamma", "delta", "Gamma_cr", "region", "minus_max", "error"];
pub const BOUNDARY_COLUMNS: &[&str] = &["side", "gamma", "delta1", "delta2", "error"];
pub const QUENCH_COLUMNS: &[&str] = &["kind", "t", "distance"];
pub const ZENO_COLUMNS: &[&str] = &[
    "kind", "Gamma", "index", "exact_re", "exact_im", "stripe_re", "stripe_im", "error",
];
pub const JORDAN_COLUMNS: &[&str] =
    &["block", "re", "im", "algebraic", "geometric", "block_sizes"];

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("--{flag} is required")))
}

fn finite(v: f64, flag: &str) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("--{flag} must be finite, got {v}")))
    }
}

fn single_big_gamma(a: &Args) -> Result<f64, CliError> {
    match need(a.big_gamma.as_ref(), "Gamma")?.0.as_slice() {
        [g] => finite(*g, "Gamma"),
        _ => Err(CliError::Invalid("--Gamma takes a single value here".into())),
    }
}

fn point(a: &Args) -> Result<ModelParams, CliError> {
    let gamma = finite(need(a.gamma, "gamma")?, "gamma")?;
    let delta = finite(need(a.delta, "delta")?, "delta")?;
    ModelParams::new(gamma, delta, single_big_gamma(a)?).map_err(CliError::invalid)
}

/// Points of a scan axis: the range if given (at least two samples),
/// otherwise the single value.
fn axis(range: Option<Range>, value: Option<f64>, name: &str, log: bool) -> Result<Vec<f64>, CliError> {
    match (range, value) {
        (Some(r), _) if r.n < 2 => Err(CliError::Invalid(format!(
            "--{name}-range needs at least two samples"
        ))),
        (Some(r), _) => r.points(log),
        (None, Some(v)) => Ok(vec![finite(v, name)?]),
        (None, None) => Err(CliError::Invalid(format!("--{name}-range or --{name} is required"))),
    }
}

fn tol_root(a: &Args) -> Result<f64, CliError> {
    match a.tol_root {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            Err(CliError::Invalid(format!("--tol-root must be positive, got {t}")))
        }
        t => Ok(t.unwrap_or(ROOT_RESIDUAL_TOL)),
    }
}

fn delta_axis(a: &Args) -> Result<Vec<f64>, CliError> {
    let floor = a.delta_floor.unwrap_or(DEFAULT_DELTA_FLOOR);
    let deltas = axis(a.delta_range, a.delta, "delta", a.log_scale)?;
    if let Some(d) = deltas.iter().find(|d| d.abs() < floor) {
        return Err(CliError::Invalid(format!(
            "delta {d} is below the floor {floor} (lower it with --delta-floor)"
        )));
    }
    Ok(deltas)
}

fn c_re(z: Complex64) -> Cell {
    Cell::Num(z.re)
}

fn c_im(z: Complex64) -> Cell {
    Cell::Num(z.im)
}

fn error_text(e: &LepmError) -> Cell {
    Cell::text(e.to_string())
}

fn all_failed(errors: usize, total: usize, what: &str) -> Result<(), CliError> {
    if total > 0 && errors == total {
        Err(CliError::Compute(format!("every {what} failed")))
    } else {
        Ok(())
    }
}

pub fn cmd_spectrum(a: &Args) -> Result<Table, CliError> {
    let p = point(a)?;
    let s = spectrum(&p).map_err(CliError::compute)?;
    let closed = s.closed_form();
    let pairing = pair_multisets(&closed, &s.numeric_eigs);
    let mut t = Table::new(SPECTRUM_COLUMNS);
    for (i, z) in closed.iter().enumerate() {
        let block = if i < 8 { BlockTag::Plus } else { BlockTag::Minus };
        let n = s.numeric_eigs[pairing[i]];
        t.push(vec![
            Cell::text(block.to_string()),
            Cell::Int((i % 8) as i64),
            c_re(*z),
            c_im(*z),
            c_re(n),
            c_im(n),
            Cell::Num((z - n).norm()),
        ]);
    }
    Ok(t)
}

pub fn cmd_sweep(a: &Args) -> Result<Table, CliError> {
    let gamma = finite(need(a.gamma, "gamma")?, "gamma")?;
    let delta = finite(need(a.delta, "delta")?, "delta")?;
    let range = need(a.big_gamma_range, "Gamma-range")?;
    let gs = range.points(a.log_scale)?;
    if a.rescale && gs.contains(&0.0) {
        return Err(CliError::Invalid("--rescale needs Gamma > 0".into()));
    }
    let blocks: Vec<([Complex64; 8], [Complex64; 8])> = gs
        .par_iter()
        .map(|&g| {
            let p = ModelParams::new(gamma, delta, g)?;
            Ok((sigma_plus_spectrum(&p), sigma_minus_spectrum(&p)?.0))
        })
        .collect::<Result<_, LepmError>>()
        .map_err(CliError::compute)?;
    let coord: Vec<f64> = if a.log_scale {
        gs.iter().map(|g| g.ln()).collect()
    } else {
        gs.clone()
    };
    let plus = continue_branches(&coord, &blocks.iter().map(|b| b.0.to_vec()).collect::<Vec<_>>());
    let minus = continue_branches(&coord, &blocks.iter().map(|b| b.1.to_vec()).collect::<Vec<_>>());
    let mut t = Table::new(SWEEP_COLUMNS);
    for (k, &g) in gs.iter().enumerate() {
        let scale = if a.rescale { g } else { 1.0 };
        for (tag, branches) in [(BlockTag::Plus, &plus[k]), (BlockTag::Minus, &minus[k])] {
            for (i, z) in branches.iter().enumerate() {
                t.push(vec![
                    Cell::Num(g),
                    Cell::text(tag.to_string()),
                    Cell::Int(i as i64),
                    Cell::Num(z.re / scale),
                    c_im(*z),
                ]);
            }
        }
    }
    Ok(t)
}

pub fn cmd_lepm_scan(a: &Args) -> Result<Table, CliError> {
    let gammas = axis(a.gamma_range, a.gamma, "gamma", a.log_scale)?;
    let deltas = delta_axis(a)?;
    let records = manifold_scan_with_tol(&gammas, &deltas, tol_root(a)?);
    let mut t = Table::new(SCAN_COLUMNS);
    let mut errors = 0;
    for r in &records {
        let (g, d) = (Cell::Num(r.gamma), Cell::Num(r.delta));
        match &r.result {
            Err(e) => {
                errors += 1;
                let mut row = vec![g, d];
                row.extend(std::iter::repeat(Cell::Empty).take(6));
                row.push(error_text(e));
                t.push(row);
            }
            Ok(set) => {
                for (i, &b) in set.plus_leps.iter().enumerate() {
                    let w = Witness::evaluate(b, |x| plus_gap(set.gamma, x));
                    t.push(vec![
                        g.clone(),
                        d.clone(),
                        Cell::text(BlockTag::Plus.to_string()),
                        Cell::Int(i as i64),
                        Cell::Num(b),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Bool(w.is_some_and(|w| w.passed())),
                        Cell::Empty,
                    ]);
                }
                for (i, l) in set.minus_leps.iter().enumerate() {
                    t.push(vec![
                        g.clone(),
                        d.clone(),
                        Cell::text(BlockTag::Minus.to_string()),
                        Cell::Int(i as i64),
                        Cell::Num(l.big_gamma),
                        Cell::Int(l.multiplicity as i64),
                        Cell::Num(l.residual),
                        Cell::Bool(l.witness_passed()),
                        Cell::Empty,
                    ]);
                }
            }
        }
    }
    all_failed(errors, records.len(), "grid point")?;
    Ok(t)
}

pub fn cmd_phase_diagram(a: &Args) -> Result<Table, CliError> {
    let gammas = axis(a.gamma_range, a.gamma, "gamma", a.log_scale)?;
    let deltas = delta_axis(a)?;
    let records = manifold_scan_with_tol(&gammas, &deltas, tol_root(a)?);
    let mut t = Table::new(PHASE_COLUMNS);
    let mut errors = 0;
    for r in &records {
        let (g, d) = (Cell::Num(r.gamma), Cell::Num(r.delta));
        t.push(match &r.result {
            Ok(set) => {
                let pt = classify(set);
                vec![
                    g,
                    d,
                    Cell::Num(pt.gamma_cr),
                    Cell::text(pt.region.to_string()),
                    Cell::opt(pt.minus_max),
                    Cell::Empty,
                ]
            }
            Err(e) => {
                errors += 1;
                vec![g, d, Cell::Empty, Cell::Empty, Cell::Empty, error_text(e)]
            }
        });
    }
    all_failed(errors, records.len(), "grid point")?;
    Ok(t)
}

pub fn cmd_boundary(a: &Args) -> Result<Table, CliError> {
    let side = a.side.unwrap_or_default();
    let jobs: Vec<(Side, f64)> = match a.gamma_range {
        Some(r) => {
            if r.n < 2 {
                return Err(CliError::Invalid("--gamma-range needs at least two samples".into()));
            }
            r.points(a.log_scale)?
                .into_iter()
                .map(|g| {
                    let s = match side {
                        SideArg::Left => Side::Left,
                        SideArg::Right => Side::Right,
                        SideArg::Both if g < 1.0 => Side::Left,
                        SideArg::Both => Side::Right,
                    };
                    (s, g)
                })
                .collect()
        }
        None => {
            let n = a.samples.unwrap_or(DEFAULT_BOUNDARY_SAMPLES);
            if n < 2 {
                return Err(CliError::Invalid("--samples needs at least two".into()));
            }
            let sides: &[Side] = match side {
                SideArg::Left => &[Side::Left],
                SideArg::Right => &[Side::Right],
                SideArg::Both => &[Side::Left, Side::Right],
            };
            sides
                .iter()
                .flat_map(|&s| default_boundary_samples(s, n).into_iter().map(move |g| (s, g)))
                .collect()
        }
    };
    let samples: Vec<(Side, BoundarySample)> = jobs
        .par_iter()
        .map(|&(s, g)| (s, lepm_core::lepm::boundary_sample(s, g)))
        .collect();
    let mut t = Table::new(BOUNDARY_COLUMNS);
    let mut errors = 0;
    for (s, b) in &samples {
        if b.error.is_some() {
            errors += 1;
        }
        t.push(vec![
            Cell::text(s.to_string()),
            Cell::Num(b.gamma),
            Cell::opt(b.delta1()),
            Cell::opt(b.delta2()),
            b.error.as_ref().map_or(Cell::Empty, error_text),
        ]);
    }
    all_failed(errors, samples.len(), "boundary sample")?;
    Ok(t)
}

pub fn cmd_quench(a: &Args) -> Result<Table, CliError> {
    let gamma_i = finite(need(a.gamma_i, "gamma-i")?, "gamma-i")?;
    let gamma_f = finite(need(a.gamma_f, "gamma-f")?, "gamma-f")?;
    let delta = finite(need(a.delta, "delta")?, "delta")?;
    let shared = match &a.big_gamma {
        Some(_) => Some(single_big_gamma(a)?),
        None => None,
    };
    let big_gamma_i = finite(need(a.big_gamma_i.or(shared), "Gamma-i or --Gamma")?, "Gamma-i")?;
    let big_gamma_f = finite(need(a.big_gamma_f.or(shared), "Gamma-f or --Gamma")?, "Gamma-f")?;
    let t_max = a.t_max.unwrap_or(DEFAULT_T_MAX);
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::Invalid(format!("--t-max must be positive, got {t_max}")));
    }
    let n_samples = a.samples.unwrap_or(DEFAULT_QUENCH_SAMPLES);
    if n_samples < 2 {
        return Err(CliError::Invalid("--samples needs at least two".into()));
    }
    let epsilon = a.epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(CliError::Invalid(format!("--epsilon must be positive, got {epsilon}")));
    }
    let norm = match a.norm.unwrap_or_default() {
        Norm::Frobenius => DistanceNorm::Frobenius,
        Norm::Spectral => DistanceNorm::Spectral,
    };
    let samples = quench_with(&QuenchSpec {
        gamma_i,
        gamma_f,
        delta,
        big_gamma_i,
        big_gamma_f,
        t_max,
        n_samples,
        norm,
    })
    .map_err(CliError::compute)?;
    let mut t = Table::new(QUENCH_COLUMNS);
    for s in &samples {
        t.push(vec![Cell::text("sample"), Cell::Num(s.t), Cell::Num(s.distance)]);
    }
    t.push(vec![
        Cell::text("t_star"),
        Cell::Num(relaxation_time(&samples, epsilon)),
        Cell::Empty,
    ]);
    Ok(t)
}

pub fn cmd_zeno_check(a: &Args) -> Result<Table, CliError> {
    let gamma = finite(a.gamma.unwrap_or(ZENO_DEFAULT_GAMMA), "gamma")?;
    let delta = finite(a.delta.unwrap_or(ZENO_DEFAULT_DELTA), "delta")?;
    let list = need(a.big_gamma.as_ref(), "Gamma")?;
    if list.0.is_empty() {
        return Err(CliError::Invalid("--Gamma list is empty".into()));
    }
    let per_gamma: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = list
        .0
        .iter()
        .map(|&g| {
            let p = ModelParams::new(gamma, delta, finite(g, "Gamma")?).map_err(CliError::invalid)?;
            let stripes = asymptotic_spectrum(&p).all();
            let (minus, _) = sigma_minus_spectrum(&p).map_err(CliError::compute)?;
            let exact: Vec<Complex64> = sigma_plus_spectrum(&p).iter().chain(&minus).copied().collect();
            Ok((p.big_gamma, stripes, exact))
        })
        .collect::<Result<_, CliError>>()?;
    let mut t = Table::new(ZENO_COLUMNS);
    for (g, stripes, exact) in &per_gamma {
        let pairing = pair_multisets(stripes, exact);
        let mut worst = 0.0f64;
        for (i, s) in stripes.iter().enumerate() {
            let e = exact[pairing[i]];
            let err = (e - s).norm();
            worst = worst.max(err);
            t.push(vec![
                Cell::text("pair"),
                Cell::Num(*g),
                Cell::Int(i as i64),
                c_re(e),
                c_im(e),
                c_re(*s),
                c_im(*s),
                Cell::Num(err),
            ]);
        }
        let mut row = vec![Cell::text("max"), Cell::Num(*g)];
        row.extend(std::iter::repeat(Cell::Empty).take(5));
        row.push(Cell::Num(worst));
        t.push(row);
    }
    Ok(t)
}

pub fn cmd_jordan(a: &Args) -> Result<Table, CliError> {
    let p = point(a)?;
    let blocks: &[BlockTag] = match a.block.unwrap_or_default() {
        BlockArg::Plus => &[BlockTag::Plus],
        BlockArg::Minus => &[BlockTag::Minus],
        BlockArg::Both => &[BlockTag::Plus, BlockTag::Minus],
    };
    let mut t = Table::new(JORDAN_COLUMNS);
    for &b in blocks {
        for r in jordan_structure(&p, b).map_err(CliError::compute)? {
            let sizes: Vec<String> = r.block_sizes.iter().map(|s| s.to_string()).collect();
            t.push(vec![
                Cell::text(b.to_string()),
                c_re(r.eigenvalue),
                c_im(r.eigenvalue),
                Cell::Int(r.algebraic as i64),
                Cell::Int(r.geometric as i64),
                Cell::text(sizes.join(";")),
            ]);
        }
    }
    Ok(t)
}
