use serde::{Deserialize, Serialize};

use crate::encodings::{build_family, mub_family, random_family, FamilyKind};
use crate::protocol::honest_leakage_factored;
use crate::qmath::SeededRng;
use crate::{Error, Result};

/// Expected honest leakage per non-target item when the item bases are
/// independent Haar unitaries: each row of `A_j^† A_t` has Dirichlet(1,…,1)
/// squared moduli, whose mean entropy is `(H_ℓ - 1)/ln 2` bits.
pub fn haar_item_leakage(m: usize) -> f64 {
    let ell = 1u64 << m;
    let harmonic: f64 = (1..=ell).map(|x| 1.0 / x as f64).sum();
    m as f64 - (harmonic - 1.0) / std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub family: FamilyKind,
    pub k: usize,
    pub m: usize,
    pub seed_index: usize,
    /// Honest leakage averaged over the choice `j`, in bits.
    pub leakage: f64,
    /// `leakage / (k - 1)`.
    pub per_item: f64,
    /// Largest pairwise item-basis overlap `t`.
    pub max_overlap: f64,
    /// `m - log2(1/t^2)`, clamped to `[0, m]`.
    pub overlap_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSummary {
    pub k: usize,
    pub m: usize,
    pub median_per_item: f64,
    pub mean_per_item: f64,
    pub median_per_bit: f64,
    pub haar_expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendTable {
    pub rows: Vec<TrendRow>,
    pub summary: Vec<TrendSummary>,
}

impl TrendTable {
    /// Whether, for each `k`, the median of `f(summary)` strictly decreases
    /// along increasing `m`.
    pub fn decreasing_in_m(&self, f: impl Fn(&TrendSummary) -> f64) -> bool {
        let mut ks: Vec<usize> = self.summary.iter().map(|s| s.k).collect();
        ks.dedup();
        ks.iter().all(|&k| {
            let vals: Vec<f64> = self.summary.iter().filter(|s| s.k == k).map(&f).collect();
            vals.windows(2).all(|w| w[1] < w[0])
        })
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Honest leakage of random families over a `(k, m)` grid, with one mub
/// control row per cell where a mub family exists.
pub fn random_family_leakage_trend(
    ks: &[usize],
    ms: &[usize],
    seeds: usize,
    rng: &SeededRng,
) -> Result<TrendTable> {
    if seeds == 0 {
        return Err(Error::InvalidParameter("need at least one seed".into()));
    }
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (ki, &k) in ks.iter().enumerate() {
        let mut ms_sorted = ms.to_vec();
        ms_sorted.sort_unstable();
        for (mi, &m) in ms_sorted.iter().enumerate() {
            if k < 2 || m == 0 || k * m > 24 {
                return Err(Error::InvalidParameter(format!(
                    "trend cell k = {k}, m = {m} outside the supported grid"
                )));
            }
            let measure = |basis, kind, seed_index| -> Result<TrendRow> {
                let family = build_family(basis)?;
                let leakage = (0..k)
                    .map(|j| honest_leakage_factored(&family, j))
                    .sum::<Result<f64>>()?
                    / k as f64;
                let t = family.basis().max_pairwise_overlap();
                let estimate = (m as f64 + 2.0 * t.log2()).clamp(0.0, m as f64);
                Ok(TrendRow {
                    family: kind,
                    k,
                    m,
                    seed_index,
                    leakage,
                    per_item: leakage / (k - 1) as f64,
                    max_overlap: t,
                    overlap_estimate: estimate,
                })
            };
            if k <= (1 << m) + 1 {
                rows.push(measure(mub_family(k, m)?, FamilyKind::Mub, 0)?);
            }
            let cell = rng.substream(((ki as u64) << 32) | mi as u64);
            let mut per_item = Vec::with_capacity(seeds);
            for s in 0..seeds {
                let mut stream = cell.substream(s as u64);
                let row = measure(random_family(k, m, &mut stream)?, FamilyKind::Random, s)?;
                per_item.push(row.per_item);
                rows.push(row);
            }
            let mean_per_item = per_item.iter().sum::<f64>() / seeds as f64;
            let median_per_item = median(&mut per_item);
            summary.push(TrendSummary {
                k,
                m,
                median_per_item,
                mean_per_item,
                median_per_bit: median_per_item / m as f64,
                haar_expectation: haar_item_leakage(m),
            });
        }
    }
    Ok(TrendTable { rows, summary })
}
