//! Threshold estimation by finite-size scaling.
//!
//! Near the threshold the logical error rate is modelled as a quadratic in
//! the rescaled variable `x = (p - p_th)·d^(1/ν)`:
//!
//! ```text
//! ler ≈ A + B·x + C·x²
//! ```
//!
//! For fixed `(p_th, ν)` the coefficients follow from weighted linear least
//! squares, so the search is a coarse grid over `(p_th, ν)` followed by a
//! shrinking pattern search around the best grid point. Both stages are
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SimRecord;

/// Points with fewer logical errors than this are left out of the fit.
pub const MIN_LOGICAL_ERRORS: u64 = 10;

const NU_MIN: f64 = 0.3;
const NU_MAX: f64 = 5.0;
const P_STEPS: usize = 160;
const NU_STEPS: usize = 80;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFit {
    pub p_th: f64,
    pub nu: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// Weighted sum of squared residuals.
    pub residual: f64,
    pub n_points: usize,
}

struct Point {
    p: f64,
    d: f64,
    ler: f64,
    weight: f64,
}

/// Weighted least squares for `(A, B, C)` at fixed `(p_th, ν)`; returns the
/// coefficients and the weighted residual.
fn fit_coefficients(points: &[Point], p_th: f64, nu: f64) -> Option<([f64; 3], f64)> {
    let xs: Vec<f64> = points.iter().map(|pt| (pt.p - p_th) * pt.d.powf(1.0 / nu)).collect();
    // Rescale x so the normal equations stay well conditioned.
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (pt, &x) in points.iter().zip(&xs) {
        let u = x / scale;
        let basis = [1.0, u, u * u];
        for i in 0..3 {
            atb[i] += pt.weight * basis[i] * pt.ler;
            for j in 0..3 {
                ata[i][j] += pt.weight * basis[i] * basis[j];
            }
        }
    }
    let sol = solve3(ata, atb)?;
    let coeffs = [sol[0], sol[1] / scale, sol[2] / (scale * scale)];
    let residual = points
        .iter()
        .zip(&xs)
        .map(|(pt, &x)| {
            let r = pt.ler - (coeffs[0] + coeffs[1] * x + coeffs[2] * x * x);
            pt.weight * r * r
        })
        .sum::<f64>();
    residual.is_finite().then_some((coeffs, residual))
}

/// Gaussian elimination with partial pivoting on a 3×3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn usable_points(records: &[SimRecord]) -> Vec<Point> {
    records
        .iter()
        .filter(|r| r.logical_errors >= MIN_LOGICAL_ERRORS && r.samples > 0)
        .map(|r| {
            let sigma = r.ler_stderr.max(1.0 / r.samples as f64);
            Point { p: r.p, d: r.distance as f64, ler: r.ler, weight: 1.0 / (sigma * sigma) }
        })
        .collect()
}

/// Fits the scaling ansatz to records from at least two distances, each with
/// at least four usable error rates.
pub fn fit_threshold(records: &[SimRecord]) -> Result<ThresholdFit> {
    let points = usable_points(records);
    let mut per_distance: BTreeMap<usize, BTreeMap<u64, f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.logical_errors >= MIN_LOGICAL_ERRORS) {
        per_distance.entry(r.distance).or_default().insert(r.p.to_bits(), r.ler);
    }
    let rich = per_distance.values().filter(|ps| ps.len() >= 4).count();
    if rich < 2 {
        return Err(Error::InsufficientData(format!(
            "need two distances with four or more points of at least {MIN_LOGICAL_ERRORS} logical errors, found {rich}"
        )));
    }
    let curves: Vec<&BTreeMap<u64, f64>> = per_distance.values().collect();
    let all_identical = curves.windows(2).all(|w| {
        w[0].iter()
            .filter_map(|(p, ler)| w[1].get(p).map(|other| (ler - other).abs()))
            .all(|diff| diff == 0.0)
    });
    if all_identical {
        return Err(Error::DegenerateFit("logical error rates do not depend on the distance".into()));
    }

    let p_lo = points.iter().map(|pt| pt.p).fold(f64::INFINITY, f64::min);
    let p_hi = points.iter().map(|pt| pt.p).fold(f64::NEG_INFINITY, f64::max);
    let nu_at = |k: usize| NU_MIN * (NU_MAX / NU_MIN).powf(k as f64 / (NU_STEPS - 1) as f64);

    let mut best: Option<(f64, f64, [f64; 3], f64)> = None;
    for i in 0..P_STEPS {
        let p_th = p_lo + (p_hi - p_lo) * i as f64 / (P_STEPS - 1) as f64;
        for k in 0..NU_STEPS {
            let nu = nu_at(k);
            if let Some((coeffs, res)) = fit_coefficients(&points, p_th, nu) {
                if best.is_none_or(|b| res < b.3) {
                    best = Some((p_th, nu, coeffs, res));
                }
            }
        }
    }
    let (mut p_th, mut nu, mut coeffs, mut res) =
        best.ok_or_else(|| Error::DegenerateFit("no finite fit on the grid".into()))?;

    // Pattern search: try the four axis moves, halve the steps when none
    // improves.
    let mut step_p = (p_hi - p_lo) / (P_STEPS - 1) as f64;
    let mut step_log_nu = (NU_MAX / NU_MIN).ln() / (NU_STEPS - 1) as f64;
    for _ in 0..200 {
        let mut improved = false;
        for (dp, dl) in [(step_p, 0.0), (-step_p, 0.0), (0.0, step_log_nu), (0.0, -step_log_nu)] {
            let cand_p = (p_th + dp).clamp(p_lo, p_hi);
            let cand_nu = (nu.ln() + dl).exp().clamp(NU_MIN, NU_MAX);
            if let Some((c, r)) = fit_coefficients(&points, cand_p, cand_nu) {
                if r < res {
                    (p_th, nu, coeffs, res) = (cand_p, cand_nu, c, r);
                    improved = true;
                }
            }
        }
        if !improved {
            step_p /= 2.0;
            step_log_nu /= 2.0;
            if step_p < 1e-9 && step_log_nu < 1e-9 {
                break;
            }
        }
    }

    if ![p_th, nu, res].iter().chain(&coeffs).all(|v| v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite parameters".into()));
    }
    Ok(ThresholdFit {
        p_th,
        nu,
        a: coeffs[0],
        b: coeffs[1],
        c: coeffs[2],
        residual: res,
        n_points: points.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuppressionRow {
    pub p: f64,
    pub distance: usize,
    pub ler: f64,
    pub ler_stderr: f64,
}

/// Logical error rate per `(p, d)`, sorted by `p` then `d`.
pub fn suppression_table(records: &[SimRecord]) -> Vec<SuppressionRow> {
    let mut rows: Vec<SuppressionRow> = records
        .iter()
        .map(|r| SuppressionRow { p: r.p, distance: r.distance, ler: r.ler, ler_stderr: r.ler_stderr })
        .collect();
    rows.sort_by(|a, b| a.p.total_cmp(&b.p).then(a.distance.cmp(&b.distance)));
    rows
}

/// The `p` values where the smallest and largest distance swap order: the
/// last grid point where the larger code is strictly better and the first
/// after it where it is not. `None` if the curves never cross.
pub fn empirical_crossing(records: &[SimRecord]) -> Option<(f64, f64)> {
    let distances: BTreeSet<usize> = records.iter().map(|r| r.distance).collect();
    let (&d_min, &d_max) = (distances.first()?, distances.last()?);
    let curve = |d: usize| -> BTreeMap<u64, f64> {
        records.iter().filter(|r| r.distance == d).map(|r| (r.p.to_bits(), r.ler)).collect()
    };
    let (small, large) = (curve(d_min), curve(d_max));
    let mut shared: Vec<(f64, f64)> =
        small.iter().filter_map(|(p, ler)| large.get(p).map(|l| (f64::from_bits(*p), l - ler))).collect();
    shared.sort_by(|a, b| a.0.total_cmp(&b.0));
    shared.windows(2).find(|w| w[0].1 < 0.0 && w[1].1 >= 0.0).map(|w| (w[0].0, w[1].0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(d: usize, p: f64, ler: f64, samples: u64) -> SimRecord {
        let errors = (ler * samples as f64).round() as u64;
        SimRecord::new(d, p, samples, errors, 0, 0.0, 0)
    }

    #[test]
    fn solve3_identity() {
        let x = solve3([[2.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 1.0]], [2.0, 8.0, 3.0]).unwrap();
        assert_eq!(x, [1.0, 2.0, 3.0]);
        assert!(solve3([[0.0; 3]; 3], [1.0; 3]).is_none());
    }

    #[test]
    fn exact_ansatz_data_is_recovered() {
        let (p_th, nu, a, b, c) = (0.1, 1.5, 0.25, 1.4, 1.0);
        let mut records = Vec::new();
        for d in [3, 5, 7, 9] {
            for k in 0..=16 {
                let p = 0.06 + 0.005 * k as f64;
                let x = (p - p_th) * (d as f64).powf(1.0 / nu);
                let mut r = record(d, p, 0.0, 10_000);
                r.ler = a + b * x + c * x * x;
                r.logical_errors = 1000;
                r.ler_stderr = (r.ler * (1.0 - r.ler) / 1e4).sqrt();
                records.push(r);
            }
        }
        let fit = fit_threshold(&records).unwrap();
        assert!((fit.p_th - p_th).abs() < 1e-4, "{fit:?}");
        assert!((fit.nu - nu).abs() < 1e-2, "{fit:?}");
        assert_eq!(fit.n_points, 68);
    }

    #[test]
    fn too_few_points() {
        let records = vec![record(3, 0.1, 0.2, 1000), record(5, 0.1, 0.1, 1000)];
        assert!(matches!(fit_threshold(&records), Err(Error::InsufficientData(_))));
        let sparse: Vec<SimRecord> = (0..6).map(|k| record(3, 0.08 + 0.01 * k as f64, 0.001, 1000)).collect();
        assert!(matches!(fit_threshold(&sparse), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn identical_curves_are_degenerate() {
        let mut records = Vec::new();
        for d in [3, 5] {
            for k in 0..6 {
                let p = 0.07 + 0.01 * k as f64;
                records.push(record(d, p, 2.0 * p, 10_000));
            }
        }
        assert!(matches!(fit_threshold(&records), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn table_sorted_by_p_then_distance() {
        assert!(suppression_table(&[]).is_empty());
        let records = vec![record(5, 0.1, 0.1, 100), record(3, 0.1, 0.2, 100), record(7, 0.05, 0.01, 100)];
        let table = suppression_table(&records);
        let keys: Vec<(f64, usize)> = table.iter().map(|r| (r.p, r.distance)).collect();
        assert_eq!(keys, vec![(0.05, 7), (0.1, 3), (0.1, 5)]);
        assert_eq!(suppression_table(&records[..1]).len(), 1);
    }

    #[test]
    fn crossing_bracket() {
        let records = vec![
            record(3, 0.08, 0.10, 100),
            record(7, 0.08, 0.05, 100),
            record(3, 0.10, 0.15, 100),
            record(7, 0.10, 0.14, 100),
            record(3, 0.12, 0.20, 100),
            record(7, 0.12, 0.25, 100),
        ];
        assert_eq!(empirical_crossing(&records), Some((0.10, 0.12)));
        assert_eq!(empirical_crossing(&records[..2]), None);
    }
}
