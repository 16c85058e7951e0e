use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BoundReport;
use crate::qmath::{adjoint_mul, haar_unitary, linf, SeededRng};
use crate::{Error, Result};

/// `min(1, 4 ℓ^2 e^{-t^2 ℓ / 2})`.
pub fn concentration_bound(ell: usize, t: f64) -> f64 {
    let l = ell as f64;
    (4.0 * l * l * (-t * t * l / 2.0).exp()).min(1.0)
}

/// `{0, 1, 2, 3, 4, 5, 6, 8} / √ℓ`.
pub fn default_t_grid(ell: usize) -> Vec<f64> {
    let s = (ell as f64).sqrt();
    [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0].iter().map(|x| x / s).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationPoint {
    pub t: f64,
    pub frequency: f64,
    pub bound: f64,
    /// Binomial standard deviation at the bound, `√(p(1-p)/N)`.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub ell: usize,
    pub pairs: usize,
    pub points: Vec<ConcentrationPoint>,
    pub report: BoundReport,
}

/// Empirical `Pr[L∞(A^† B) ≥ t]` over independent Haar pairs, compared with
/// the bound plus a 3σ sampling margin.
pub fn concentration_experiment(
    ell: usize,
    pairs: usize,
    t_grid: &[f64],
    rng: &SeededRng,
) -> Result<ConcentrationReport> {
    if ell == 0 || pairs == 0 {
        return Err(Error::InvalidParameter("need ell ≥ 1 and at least one pair".into()));
    }
    let overlaps = (0..pairs)
        .into_par_iter()
        .map(|p| {
            let mut stream = rng.substream(p as u64);
            let a = haar_unitary(ell, &mut stream)?;
            let b = haar_unitary(ell, &mut stream)?;
            Ok(linf(&adjoint_mul(&a, &b)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut report = BoundReport::new("concentration");
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let hits = overlaps.iter().filter(|&&c| c >= t).count();
        let frequency = hits as f64 / pairs as f64;
        let bound = concentration_bound(ell, t);
        let sigma = (bound * (1.0 - bound) / pairs as f64).sqrt();
        report.record(bound + 3.0 * sigma - frequency, 0.0);
        points.push(ConcentrationPoint {
            t,
            frequency,
            bound,
            sigma,
        });
    }
    let max_overlap = overlaps.iter().copied().fold(0.0, f64::max);
    let report = report
        .param("ell", ell)
        .param("pairs", pairs)
        .param("max_overlap", max_overlap);
    Ok(ConcentrationReport {
        ell,
        pairs,
        points,
        report,
    })
}
