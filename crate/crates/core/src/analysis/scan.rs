use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{max_leakage, LeakageResult, OptimizerConfig};
use crate::encodings::{build_family, mub_family, random_family, FamilyKind};
use crate::qmath::SeededRng;
use crate::{Error, Result};

/// The `(c, α)` of the `c k^α m` comparison line.
pub const REFERENCE_FIT: (f64, f64) = (0.4, 0.7);

const MAX_CELL_BITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: usize,
    pub m: usize,
    pub family: FamilyKind,
    pub best_gain_bits: f64,
    pub bound_bits: f64,
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

/// Least-squares fit of `log(gain / m) = log c + α log k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageFit {
    pub c: f64,
    pub alpha: f64,
    /// Per fitted cell `(k, m, log residual)`.
    pub residuals: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub results: Vec<LeakageResult>,
    pub fit: Option<LeakageFit>,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,m,family,best_gain_bits,bound_bits,restarts,iters,seed\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{:.6},{:.6},{},{},{}",
                r.k, r.m, r.family, r.best_gain_bits, r.bound_bits, r.restarts, r.iters, r.seed
            )
            .expect("write to string");
        }
        match &self.fit {
            Some(fit) => {
                let residuals: Vec<String> = fit
                    .residuals
                    .iter()
                    .map(|(k, m, r)| format!("({k};{m};{r:.4})"))
                    .collect();
                writeln!(
                    out,
                    "# fit c={:.4} alpha={:.4} residuals={} reference c={} alpha={}",
                    fit.c,
                    fit.alpha,
                    residuals.join(" "),
                    REFERENCE_FIT.0,
                    REFERENCE_FIT.1
                )
            }
            None => writeln!(
                out,
                "# fit unavailable reference c={} alpha={}",
                REFERENCE_FIT.0, REFERENCE_FIT.1
            ),
        }
        .expect("write to string");
        out
    }
}

fn fit(rows: &[ScanRow]) -> Option<LeakageFit> {
    let pts: Vec<(usize, usize, f64, f64)> = rows
        .iter()
        .filter(|r| r.family == FamilyKind::Mub && r.best_gain_bits > 0.0)
        .map(|r| {
            (
                r.k,
                r.m,
                (r.k as f64).ln(),
                (r.best_gain_bits / r.m as f64).ln(),
            )
        })
        .collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.2).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.3).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.2 - mean_x).powi(2)).sum();
    if pts.len() < 2 || sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.2 - mean_x) * (p.3 - mean_y)).sum();
    let alpha = sxy / sxx;
    let log_c = mean_y - alpha * mean_x;
    let residuals = pts
        .iter()
        .map(|&(k, m, x, y)| (k, m, y - (log_c + alpha * x)))
        .collect();
    Some(LeakageFit {
        c: log_c.exp(),
        alpha,
        residuals,
    })
}

/// Runs [`max_leakage`] on every `(k, m)` cell: the mub family where one
/// exists (`k ≤ 2^m + 1`), otherwise a random family drawn from the cell's
/// stream. Only mub cells enter the fit.
pub fn leakage_scan(
    ks: &[usize],
    ms: &[usize],
    config: &OptimizerConfig,
    rng: &SeededRng,
) -> Result<ScanTable> {
    for &k in ks {
        for &m in ms {
            if k < 2 || m == 0 || k * m > MAX_CELL_BITS {
                return Err(Error::InvalidParameter(format!(
                    "scan cell k = {k}, m = {m} outside 2 ≤ k, 1 ≤ m, km ≤ {MAX_CELL_BITS}"
                )));
            }
        }
    }
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        for (mi, &m) in ms.iter().enumerate() {
            let cell = rng.substream(((ki as u64) << 32) | mi as u64);
            let basis = if k <= (1 << m) + 1 {
                mub_family(k, m)?
            } else {
                random_family(k, m, &mut cell.substream(u64::MAX))?
            };
            let family = build_family(basis)?;
            let result = max_leakage(&family, config, &cell)?;
            rows.push(ScanRow {
                k,
                m,
                family: family.kind(),
                best_gain_bits: result.best_gain,
                bound_bits: result.bound,
                restarts: config.restarts,
                iters: config.iterations,
                seed: rng.root(),
            });
            results.push(result);
        }
    }
    let fit = fit(&rows);
    Ok(ScanTable { rows, results, fit })
}
