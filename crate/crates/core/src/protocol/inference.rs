use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::{honest_basis, DatabaseState, MeasurementBasis};
use crate::encodings::EncodingFamily;
use crate::qmath::{entropy_bits, ProbabilityDistribution, QuantumState};
use crate::{Error, Result};

const UNIFORM_TOL: f64 = 1e-12;
const MARGINAL_TOL: f64 = 1e-9;

fn check_shape(db: &DatabaseState, family: &EncodingFamily) -> Result<()> {
    if db.k() != family.k() || db.m() != family.m() {
        return Err(Error::InvalidParameter(format!(
            "database is k = {}, m = {} but family is k = {}, m = {}",
            db.k(),
            db.m(),
            family.k(),
            family.m()
        )));
    }
    Ok(())
}

/// `E_i e_d` for the database configuration `d`.
pub fn vendor_encode(
    db: &DatabaseState,
    family: &EncodingFamily,
    i: usize,
) -> Result<QuantumState> {
    check_shape(db, family)?;
    family.encode_column(i, db.index())
}

pub fn outcome_distribution(
    state: &QuantumState,
    basis: &MeasurementBasis,
) -> Result<ProbabilityDistribution> {
    let out = basis.apply(state.amplitudes())?;
    ProbabilityDistribution::from_weights(out.iter().map(|z| z.norm_sqr()).collect())
}

pub fn sample_outcome<R: RngCore + ?Sized>(
    state: &QuantumState,
    basis: &MeasurementBasis,
    rng: &mut R,
) -> Result<usize> {
    let dist = outcome_distribution(state, basis)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (j, &p) in dist.probs().iter().enumerate() {
        if p > 0.0 {
            last = j;
            acc += p;
            if u < acc {
                return Ok(j);
            }
        }
    }
    Ok(last)
}

/// `P(d | j, i) ∝ |(M E_i)_{j,d}|^2 P(d)`.
pub fn posterior(
    basis: &MeasurementBasis,
    family: &EncodingFamily,
    i: usize,
    j: usize,
    prior: &ProbabilityDistribution,
) -> Result<ProbabilityDistribution> {
    let n = family.n();
    if basis.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: basis.dim(),
        });
    }
    if prior.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: prior.len(),
        });
    }
    let x = family.row_times_encoder(&basis.row(j)?, i)?;
    let weights: Vec<f64> = x
        .iter()
        .zip(prior.probs())
        .map(|(z, p)| z.norm_sqr() * p)
        .collect();
    if weights.iter().sum::<f64>() <= 1e-15 {
        return Err(Error::ZeroProbabilityEvent);
    }
    ProbabilityDistribution::from_weights(weights)
}

/// Entropy bookkeeping for one measurement basis under a uniform prior.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoAccount {
    /// `h_cond[j][i] = H(P(· | j, i))`.
    pub h_cond: Vec<Vec<f64>>,
    /// `h_avg[j]`: mean of `h_cond[j]` over encodings.
    pub h_avg: Vec<f64>,
    /// `log n - h_avg[j]`.
    pub gain: Vec<f64>,
    pub gain_worst: f64,
    pub gain_expected: f64,
}

pub fn info_account(
    basis: &MeasurementBasis,
    family: &EncodingFamily,
    prior: &ProbabilityDistribution,
) -> Result<InfoAccount> {
    let (n, k) = (family.n(), family.k());
    if prior.len() != n || basis.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: prior.len().max(basis.dim()),
        });
    }
    if !prior.is_uniform(UNIFORM_TOL) {
        return Err(Error::UnsupportedPrior);
    }
    let rows: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let row = basis.row(j)?;
            let mut hs = Vec::with_capacity(k);
            for i in 0..k {
                let x = family.row_times_encoder(&row, i)?;
                let p: Vec<f64> = x.iter().map(|z| z.norm_sqr()).collect();
                // P(j | i) = |row j|^2 / n must not depend on i, so that the
                // encoding stays uniform given the outcome.
                let mass: f64 = p.iter().sum();
                if (mass - 1.0).abs() > MARGINAL_TOL {
                    return Err(Error::CertificationFailed(format!(
                        "P(j = {j} | i = {i}) deviates from 1/n (row mass {mass})"
                    )));
                }
                hs.push(entropy_bits(&p));
            }
            Ok(hs)
        })
        .collect();
    let h_cond = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let log_n = (n as f64).log2();
    let h_avg: Vec<f64> = h_cond.iter().map(|r| r.iter().sum::<f64>() / k as f64).collect();
    let gain: Vec<f64> = h_avg.iter().map(|v| log_n - v).collect();
    let gain_worst = gain.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gain_expected = log_n - h_avg.iter().sum::<f64>() / n as f64;
    Ok(InfoAccount {
        h_cond,
        h_avg,
        gain,
        gain_worst,
        gain_expected,
    })
}

/// Item `j` from an honest outcome once encoding `i` is known: item `j`
/// lands in block `(j - i) mod k` of the outcome.
pub fn decode_item(outcome: usize, announced: usize, choice: usize, k: usize, m: usize) -> Result<u32> {
    if announced >= k || choice >= k {
        return Err(Error::IndexOutOfRange {
            what: "encoding or choice",
            index: announced.max(choice),
            limit: k,
        });
    }
    if k * m >= usize::BITS as usize || outcome >> (k * m) != 0 {
        return Err(Error::IndexOutOfRange {
            what: "outcome",
            index: outcome,
            limit: 1usize.checked_shl((k * m) as u32).unwrap_or(usize::MAX),
        });
    }
    let pos = (choice + k - announced) % k;
    Ok(((outcome >> (m * (k - 1 - pos))) & ((1usize << m) - 1)) as u32)
}

/// Expected information, in bits, about the items other than `j` left by
/// the honest measurement `M_j` (uniform prior). Generic route through the
/// full posterior, marginalized onto the non-target items.
pub fn honest_leakage(family: &EncodingFamily, j: usize) -> Result<f64> {
    let (n, k, m) = (family.n(), family.k(), family.m());
    let basis = honest_basis(family, j)?;
    let shift = m * (k - 1 - j);
    let low_mask = (1usize << shift) - 1;
    let marginal_len = n >> m;
    let per_outcome: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|o| {
            let row = basis.row(o)?;
            let mut acc = 0.0;
            for i in 0..k {
                let x = family.row_times_encoder(&row, i)?;
                let mut marginal = vec![0.0; marginal_len];
                let mut mass = 0.0;
                for (d, z) in x.iter().enumerate() {
                    let p = z.norm_sqr();
                    mass += p;
                    let key = ((d >> (shift + m)) << shift) | (d & low_mask);
                    marginal[key] += p;
                }
                if mass > 0.0 {
                    marginal.iter_mut().for_each(|v| *v /= mass);
                    acc += (mass / n as f64) * entropy_bits(&marginal);
                }
            }
            Ok(acc / k as f64)
        })
        .collect();
    let remaining: f64 = per_outcome.into_iter().sum::<Result<f64>>()?;
    Ok(((k - 1) * m) as f64 - remaining)
}

/// Same quantity as [`honest_leakage`] via the item factorization: item `t`
/// is always encoded with `A_t`, so the outcome block holding it is a
/// measurement of `A_j^† A_t` and items stay independent.
pub fn honest_leakage_factored(family: &EncodingFamily, j: usize) -> Result<f64> {
    let k = family.k();
    if j >= k {
        return Err(Error::IndexOutOfRange {
            what: "choice",
            index: j,
            limit: k,
        });
    }
    let m = family.m() as f64;
    let basis = family.basis();
    let aj = basis.matrix(j).adjoint();
    let mut total = 0.0;
    for t in (0..k).filter(|&t| t != j) {
        let overlap = &aj * basis.matrix(t);
        let l = overlap.nrows();
        let mean_h: f64 = (0..l)
            .map(|r| {
                let p: Vec<f64> = overlap.row(r).iter().map(|z| z.norm_sqr()).collect();
                entropy_bits(&p)
            })
            .sum::<f64>()
            / l as f64;
        total += m - mean_h;
    }
    Ok(total)
}
