use std::f64::consts::{LN_2, PI};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entropic_gain_bound;
use crate::encodings::{EncodingFamily, FamilyKind, MAX_DENSE_DIM};
use crate::protocol::honest_basis;
use crate::qmath::{
    exp_i_hermitian, haar_unitary, hermitian_eigen, rotate_index, unitary_log, ComplexMatrix,
    KronOperator, SeededRng, C64,
};
use crate::{Error, Result};

/// Search settings for [`max_leakage`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Proposals in the derivative-free stage, per restart.
    pub iterations: usize,
    /// Cap on gradient refinement steps, per restart.
    pub refine_iterations: usize,
    /// Refinement stops once a step gains less than this many bits.
    pub tol: f64,
    /// Start restart 0 from the honest basis `M_0` instead of a Haar draw.
    pub structured_start: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            iterations: 2000,
            refine_iterations: 200,
            tol: 1e-7,
            structured_start: true,
        }
    }
}

impl OptimizerConfig {
    /// Lighter preset used per cell by the leakage scan, where `n` reaches 256.
    pub fn scan() -> Self {
        Self {
            restarts: 4,
            iterations: 4000,
            refine_iterations: 40,
            ..Self::default()
        }
    }
}

/// Best measurement found. `best_gain` is a lower bound on the supremum
/// of the expected gain; `bound` is the entropic upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageResult {
    pub k: usize,
    pub m: usize,
    pub family: FamilyKind,
    pub best_gain: f64,
    pub bound: f64,
    pub config: OptimizerConfig,
    pub seed: u64,
    pub best_restart: usize,
    pub restart_gains: Vec<f64>,
    /// `θ ∈ R^{n²}`; the measurement is `exp(i H(θ))`.
    pub parameters: Vec<f64>,
}

impl LeakageResult {
    pub fn measurement(&self) -> Result<ComplexMatrix> {
        let n = (self.parameters.len() as f64).sqrt().round() as usize;
        unitary_from_params(n, &self.parameters)
    }

    /// Recomputes the gain from the stored parameters.
    pub fn reproduce(&self, family: &EncodingFamily) -> Result<f64> {
        expected_gain(&self.measurement()?, family)
    }
}

/// `θ[r n + r]` on the diagonal; for `r < c`, `H[r][c] = θ[r n + c] + i θ[c n + r]`.
pub fn hermitian_from_params(n: usize, theta: &[f64]) -> Result<ComplexMatrix> {
    if theta.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: theta.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => C64::new(theta[r * n + r], 0.0),
        std::cmp::Ordering::Less => C64::new(theta[r * n + c], theta[c * n + r]),
        std::cmp::Ordering::Greater => C64::new(theta[c * n + r], -theta[r * n + c]),
    }))
}

pub fn unitary_from_params(n: usize, theta: &[f64]) -> Result<ComplexMatrix> {
    exp_i_hermitian(&hermitian_from_params(n, theta)?)
}

pub fn params_from_unitary(u: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = unitary_log(u)?;
    let n = h.nrows();
    let mut theta = vec![0.0; n * n];
    for r in 0..n {
        theta[r * n + r] = h[(r, r)].re;
        for c in r + 1..n {
            theta[r * n + c] = h[(r, c)].re;
            theta[c * n + r] = h[(r, c)].im;
        }
    }
    Ok(theta)
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// `Σ_d p log2 p` over one row.
fn row_score(row: impl Iterator<Item = C64>) -> f64 {
    row.map(|z| plogp(z.norm_sqr())).sum()
}

/// The gain as a function of `M`, with `M E_i` formed row by row through
/// the factored circuits (`E_i = C_i P_i`).
struct Objective {
    circuits: Vec<KronOperator>,
    adjoints: Vec<KronOperator>,
    rotations: Vec<Vec<usize>>,
    n: usize,
}

impl Objective {
    fn new(family: &EncodingFamily) -> Result<Self> {
        if family.n() > MAX_DENSE_DIM {
            return Err(Error::TooLarge(family.n()));
        }
        let (k, m, n) = (family.k(), family.m(), family.n());
        let circuits: Vec<KronOperator> =
            (0..k).map(|i| family.circuit(i).cloned()).collect::<Result<_>>()?;
        let adjoints = circuits.iter().map(KronOperator::adjoint).collect();
        let rotations = (0..k)
            .map(|i| (0..n).map(|d| rotate_index(d, k, m, i)).collect())
            .collect();
        Ok(Self {
            circuits,
            adjoints,
            rotations,
            n,
        })
    }

    fn k(&self) -> usize {
        self.circuits.len()
    }

    fn scale(&self) -> f64 {
        1.0 / (self.n * self.k()) as f64
    }

    fn products(&self, m: &ComplexMatrix) -> Vec<ComplexMatrix> {
        let n = self.n;
        let rows: Vec<Vec<C64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        self.circuits
            .iter()
            .zip(&self.rotations)
            .map(|(c, rot)| {
                let mut x = ComplexMatrix::zeros(n, n);
                let mut buf = Vec::with_capacity(n);
                for (r, row) in rows.iter().enumerate() {
                    buf.clear();
                    buf.extend_from_slice(row);
                    c.apply_row_in_place(&mut buf).expect("dimensions checked");
                    for d in 0..n {
                        x[(r, d)] = buf[rot[d]];
                    }
                }
                x
            })
            .collect()
    }

    fn gain_of(&self, xs: &[ComplexMatrix]) -> f64 {
        let total: f64 = xs.iter().map(|x| row_score(x.iter().copied())).sum();
        (self.n as f64).log2() + total * self.scale()
    }

    fn gain(&self, m: &ComplexMatrix) -> f64 {
        self.gain_of(&self.products(m))
    }

    /// Euclidean gradient `∇` of the gain in `M`, in the sense
    /// `d gain = Re tr(∇^† dM)`: `∇ = Σ_i G_i E_i^†` with
    /// `G_i = (2/(nk)) (log2 p + 1/ln 2) ∘ X_i`.
    fn gradient(&self, xs: &[ComplexMatrix]) -> ComplexMatrix {
        let n = self.n;
        let w = 2.0 * self.scale();
        let mut grad = ComplexMatrix::zeros(n, n);
        let mut buf = vec![C64::new(0.0, 0.0); n];
        for ((x, adj), rot) in xs.iter().zip(&self.adjoints).zip(&self.rotations) {
            for r in 0..n {
                // Row r of G_i P_i^†, then through C_i^†.
                for d in 0..n {
                    let z = x[(r, d)];
                    let p = z.norm_sqr();
                    buf[rot[d]] = if p > 1e-300 {
                        z * (w * (p.log2() + 1.0 / LN_2))
                    } else {
                        C64::new(0.0, 0.0)
                    };
                }
                adj.apply_row_in_place(&mut buf).expect("dimensions checked");
                for c in 0..n {
                    grad[(r, c)] += buf[c];
                }
            }
        }
        grad
    }
}

/// Expected information gain of the projective measurement `M` under the
/// uniform prior, `log n - (1/n) Σ_j h_j`.
pub fn expected_gain(m: &ComplexMatrix, family: &EncodingFamily) -> Result<f64> {
    if m.shape() != (family.n(), family.n()) {
        return Err(Error::DimensionMismatch {
            expected: family.n(),
            actual: m.nrows(),
        });
    }
    Ok(Objective::new(family)?.gain(m))
}

/// Greedy (1+1) search over Givens rotations of two rows of `M`, with the
/// step size adapted by the one-fifth rule. Only the two touched rows of
/// each `M E_i` are rescored per proposal.
fn givens_search(obj: &Objective, m: &mut ComplexMatrix, iterations: usize, rng: &mut SeededRng) {
    let n = obj.n;
    if n < 2 {
        return;
    }
    let mut xs = obj.products(m);
    let mut scores: Vec<f64> = (0..n)
        .map(|j| xs.iter().map(|x| row_score(x.row(j).iter().copied())).sum())
        .collect();
    let mut sigma: f64 = 0.3;
    let k = obj.k();
    let mut ra = vec![vec![C64::new(0.0, 0.0); n]; k];
    let mut rb = ra.clone();
    for _ in 0..iterations {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let z: f64 = StandardNormal.sample(rng);
        let angle = sigma * z;
        let phase = C64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let (c, s) = (C64::new(angle.cos(), 0.0), angle.sin());
        let (sa, sb) = (phase * s, -phase.conj() * s);
        let mut new_a = 0.0;
        let mut new_b = 0.0;
        for (t, x) in xs.iter().enumerate() {
            for d in 0..n {
                let (xa, xb) = (x[(a, d)], x[(b, d)]);
                ra[t][d] = c * xa + sa * xb;
                rb[t][d] = sb * xa + c * xb;
            }
            new_a += row_score(ra[t].iter().copied());
            new_b += row_score(rb[t].iter().copied());
        }
        if new_a + new_b > scores[a] + scores[b] + 1e-15 {
            for (t, x) in xs.iter_mut().enumerate() {
                for d in 0..n {
                    x[(a, d)] = ra[t][d];
                    x[(b, d)] = rb[t][d];
                }
            }
            for d in 0..n {
                let (ma, mb) = (m[(a, d)], m[(b, d)]);
                m[(a, d)] = c * ma + sa * mb;
                m[(b, d)] = sb * ma + c * mb;
            }
            scores[a] = new_a;
            scores[b] = new_b;
            sigma = (sigma * 1.2).min(PI / 2.0);
        } else {
            sigma = (sigma * 0.95).max(1e-4);
        }
    }
}

/// Riemannian gradient ascent along `M ← exp(tΩ) M`, `Ω = ∇M^† - M∇^†`,
/// with Armijo backtracking. Returns the final gain.
fn refine(obj: &Objective, m: &mut ComplexMatrix, iterations: usize, tol: f64) -> Result<f64> {
    let mut xs = obj.products(m);
    let mut f = obj.gain_of(&xs);
    let mut step = 1.0;
    for _ in 0..iterations {
        let y = obj.gradient(&xs) * m.adjoint();
        let omega = &y - y.adjoint();
        let slope = 0.5 * omega.norm_squared();
        if slope < 1e-24 {
            break;
        }
        // Ω = iK with K Hermitian, so exp(tΩ) = V e^{itΛ} V^†.
        let kmat = omega * C64::new(0.0, -1.0);
        let (values, vectors) = hermitian_eigen(&kmat)?;
        let mut accepted = None;
        let mut t = step * 2.0;
        for _ in 0..40 {
            let phases = ComplexMatrix::from_fn(values.len(), values.len(), |r, c| {
                vectors[(r, c)] * C64::from_polar(1.0, t * values[c])
            });
            let candidate = phases * vectors.adjoint() * &*m;
            let cxs = obj.products(&candidate);
            let cf = obj.gain_of(&cxs);
            if cf >= f + 1e-4 * t * slope {
                accepted = Some((candidate, cxs, cf));
                break;
            }
            t *= 0.5;
        }
        let Some((candidate, cxs, cf)) = accepted else {
            break;
        };
        let improvement = cf - f;
        *m = candidate;
        xs = cxs;
        f = cf;
        step = t;
        if improvement < tol {
            break;
        }
    }
    Ok(f)
}

/// Multi-restart search for the projective measurement maximizing the
/// expected gain. Restarts run in parallel, each on its own substream of
/// `rng`; the best restart wins, ties to the lowest index.
pub fn max_leakage(
    family: &EncodingFamily,
    config: &OptimizerConfig,
    rng: &SeededRng,
) -> Result<LeakageResult> {
    if config.restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let obj = Objective::new(family)?;
    let n = family.n();
    let outcomes: Vec<Result<(f64, ComplexMatrix)>> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut stream = rng.substream(r as u64);
            let mut m = if r == 0 && config.structured_start {
                honest_basis(family, 0)?.matrix()
            } else {
                haar_unitary(n, &mut stream)?
            };
            givens_search(&obj, &mut m, config.iterations, &mut stream);
            let f = refine(&obj, &mut m, config.refine_iterations, config.tol)?;
            Ok((f, m))
        })
        .collect();
    let mut restart_gains = Vec::with_capacity(config.restarts);
    let mut best: Option<(usize, ComplexMatrix)> = None;
    for (r, outcome) in outcomes.into_iter().enumerate() {
        let (f, m) = outcome?;
        if best.is_none() || f > restart_gains[best.as_ref().map_or(0, |b| b.0)] {
            best = Some((r, m));
        }
        restart_gains.push(f);
    }
    let (best_restart, m) = best.expect("at least one restart");
    let parameters = params_from_unitary(&m)?;
    let best_gain = obj.gain(&unitary_from_params(n, &parameters)?);
    Ok(LeakageResult {
        k: family.k(),
        m: family.m(),
        family: family.kind(),
        best_gain,
        bound: entropic_gain_bound(family)?,
        config: config.clone(),
        seed: rng.root(),
        best_restart,
        restart_gains,
        parameters,
    })
}
