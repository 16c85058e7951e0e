//! Generalized measurements `{R_j}` with `Σ_j R_j^† R_j = I`.

use nalgebra::DVector;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::encodings::{matrix_repr, EncodingFamily, MatrixRepr};
use crate::protocol::MeasurementBasis;
use crate::qmath::{
    entropy_bits, haar_unitary, hermitian_eigen, identity, inverse_sqrt_psd, linf,
    min_hermitian_eigenvalue, ComplexMatrix, ProbabilityDistribution, QuantumState, C64,
};
use crate::{Error, Result};

pub const POVM_TOL: f64 = 1e-9;
const DEGENERATE_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn operator(&self, j: usize) -> Result<&ComplexMatrix> {
        self.operators.get(j).ok_or(Error::IndexOutOfRange {
            what: "POVM outcome",
            index: j,
            limit: self.operators.len(),
        })
    }

    /// `[re, im]` entry lists, one per operator.
    pub fn to_repr(&self) -> Vec<MatrixRepr> {
        self.operators.iter().map(matrix_repr).collect()
    }

    pub fn probabilities(&self, state: &QuantumState) -> Result<ProbabilityDistribution> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: state.dim(),
            });
        }
        let psi = state.amplitudes();
        ProbabilityDistribution::from_weights(
            self.operators.iter().map(|r| (r * psi).norm_squared()).collect(),
        )
    }
}

/// Certifies completeness and nonnegativity within [`POVM_TOL`].
pub fn validate_povm(operators: Vec<ComplexMatrix>) -> Result<Povm> {
    let Some(first) = operators.first() else {
        return Err(Error::InvalidParameter("POVM with no operators".into()));
    };
    let dim = first.nrows();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for (index, r) in operators.iter().enumerate() {
        if r.nrows() != dim || r.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: r.nrows().max(r.ncols()),
            });
        }
        if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let effect = r.adjoint() * r;
        let min_eigenvalue = min_hermitian_eigenvalue(&effect)?;
        if min_eigenvalue < -POVM_TOL {
            return Err(Error::PovmNegative {
                index,
                min_eigenvalue,
            });
        }
        total += effect;
    }
    let deviation = linf(&(total - identity(dim)));
    if deviation > POVM_TOL {
        return Err(Error::PovmIncomplete { deviation });
    }
    Ok(Povm { dim, operators })
}

/// Rank-one projectors onto the measurement vectors: `R_j = v_j v_j^†`
/// with `v_j` column `j` of `M^†`.
pub fn povm_from_basis(basis: &MeasurementBasis) -> Result<Povm> {
    let n = basis.dim();
    let operators = (0..n)
        .map(|j| {
            let v = DVector::from_iterator(n, basis.row(j)?.into_iter().map(|z| z.conj()));
            Ok(&v * v.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    validate_povm(operators)
}

/// Samples outcome `j` with `P(j) = ‖R_j ψ‖^2`; returns it with the
/// post-measurement state `R_j ψ / √P(j)`.
pub fn measure_povm<R: RngCore + ?Sized>(
    state: &QuantumState,
    povm: &Povm,
    rng: &mut R,
) -> Result<(usize, QuantumState)> {
    let probs = povm.probabilities(state)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut chosen = None;
    for (j, &p) in probs.probs().iter().enumerate() {
        if p >= DEGENERATE_TOL {
            chosen = Some(j);
            acc += p;
            if u < acc {
                break;
            }
        }
    }
    let j = chosen.ok_or(Error::ZeroProbabilityEvent)?;
    let post = &povm.operators[j] * state.amplitudes();
    Ok((j, QuantumState::normalized(post)?))
}

/// `s^2 = Tr(R_j^† R_j)`.
pub fn outcome_weight(povm: &Povm, j: usize) -> Result<f64> {
    Ok(povm.operator(j)?.norm_squared())
}

/// `Tr(E_i^† R_j^† R_j E_i)`, computed column by column; equal to
/// [`outcome_weight`] for every `i` since `E_i` is unitary.
pub fn outcome_weight_under(povm: &Povm, family: &EncodingFamily, i: usize, j: usize) -> Result<f64> {
    Ok(column_weights(povm, family, i, j)?.iter().sum())
}

fn column_weights(povm: &Povm, family: &EncodingFamily, i: usize, j: usize) -> Result<Vec<f64>> {
    if povm.dim() != family.n() {
        return Err(Error::DimensionMismatch {
            expected: family.n(),
            actual: povm.dim(),
        });
    }
    let r = povm.operator(j)?;
    // Rows of R_j E_i are rows of R_j pushed through the factored encoder.
    let mut weights = vec![0.0; family.n()];
    for row in r.row_iter() {
        let row: Vec<C64> = row.iter().copied().collect();
        for (w, z) in weights.iter_mut().zip(family.row_times_encoder(&row, i)?) {
            *w += z.norm_sqr();
        }
    }
    Ok(weights)
}

/// `P(d | j, i) = (E_i^† S^† S E_i)_{dd}` with `S = R_j / s` (uniform prior).
pub fn povm_posterior(
    povm: &Povm,
    family: &EncodingFamily,
    i: usize,
    j: usize,
) -> Result<ProbabilityDistribution> {
    let s2 = outcome_weight(povm, j)?;
    if s2 < DEGENERATE_TOL {
        return Err(Error::DegenerateOperator { index: j, trace: s2 });
    }
    let weights = column_weights(povm, family, i, j)?;
    let total: f64 = weights.iter().sum();
    if (total - s2).abs() > POVM_TOL * s2.max(1.0) {
        return Err(Error::CertificationFailed(format!(
            "outcome weight {total} under encoding {i} differs from Tr(R^†R) = {s2}"
        )));
    }
    ProbabilityDistribution::from_weights(weights.into_iter().map(|w| w / s2).collect())
}

/// The posterior as `Σ_r λ_r p^{(r)}` from `S^† S = Σ_r λ_r v_r v_r^†`,
/// with `p^{(r)}_d = |(E_i^† v_r)_d|^2`. Terms with `λ_r ≤ 0` are dropped.
pub fn eigen_mixture(
    povm: &Povm,
    family: &EncodingFamily,
    i: usize,
    j: usize,
) -> Result<Vec<(f64, ProbabilityDistribution)>> {
    let s2 = outcome_weight(povm, j)?;
    if s2 < DEGENERATE_TOL {
        return Err(Error::DegenerateOperator { index: j, trace: s2 });
    }
    let r = povm.operator(j)?;
    let effect = (r.adjoint() * r) / C64::new(s2, 0.0);
    let (values, vectors) = hermitian_eigen(&effect)?;
    let mut terms = Vec::new();
    for (t, &lambda) in values.iter().enumerate() {
        if lambda <= DEGENERATE_TOL {
            continue;
        }
        let v: Vec<C64> = vectors.column(t).iter().map(|z| z.conj()).collect();
        let amplitudes = family.row_times_encoder(&v, i)?;
        let p = ProbabilityDistribution::from_weights(amplitudes.iter().map(|z| z.norm_sqr()).collect())?;
        terms.push((lambda, p));
    }
    Ok(terms)
}

/// `N` operators `R_j = G_j S^{-1/2}` with `S = Σ G_j^† G_j` and each `G_j`
/// a Haar unitary whose rows are weighted by random magnitudes, zeroing
/// all but a random number of them (so ranks vary).
pub fn random_povm<R: RngCore + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Result<Povm> {
    if dim == 0 || outcomes == 0 {
        return Err(Error::InvalidParameter("random POVM needs dim, outcomes ≥ 1".into()));
    }
    let mut ranks: Vec<usize> = (0..outcomes).map(|_| rng.random_range(1..=dim)).collect();
    let mut short = dim.saturating_sub(ranks.iter().sum());
    for r in ranks.iter_mut() {
        let add = short.min(dim - *r);
        *r += add;
        short -= add;
    }
    let mut gs = Vec::with_capacity(outcomes);
    let mut total = ComplexMatrix::zeros(dim, dim);
    for &rank in &ranks {
        let mut g = haar_unitary(dim, rng)?;
        for row in 0..dim {
            let w = if row < rank { rng.random_range(0.1..1.0) } else { 0.0 };
            g.row_mut(row).scale_mut(w);
        }
        total += g.adjoint() * &g;
        gs.push(g);
    }
    let root = inverse_sqrt_psd(&total)?;
    validate_povm(gs.into_iter().map(|g| g * &root).collect())
}

/// Per-outcome audit of `H(P(·|j,i)) + H(P(·|j,i')) ≥ -2 log2 c_{ii'}` over
/// every encoding pair, `c_{ii'} = L∞(E_i^† E_{i'})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmBoundReport {
    pub outcomes: usize,
    pub pairs: usize,
    pub checks: usize,
    pub violations: usize,
    pub min_slack: f64,
    /// Largest `log n - mean_i H(P(·|j,i))` over outcomes with nonzero weight.
    pub max_gain: f64,
    /// `[outcome][encoding]` posterior entropies.
    pub entropies: Vec<Vec<f64>>,
}

pub fn povm_entropy_bound_check(povm: &Povm, family: &EncodingFamily) -> Result<PovmBoundReport> {
    let k = family.k();
    if k < 2 {
        return Err(Error::InvalidParameter("needs at least two encodings".into()));
    }
    let log_n = (family.n() as f64).log2();
    let mut bounds = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            bounds.push((a, b, -2.0 * family.pair_overlap(a, b)?.log2()));
        }
    }
    let mut report = PovmBoundReport {
        outcomes: povm.len(),
        pairs: bounds.len(),
        checks: 0,
        violations: 0,
        min_slack: f64::INFINITY,
        max_gain: f64::NEG_INFINITY,
        entropies: Vec::with_capacity(povm.len()),
    };
    for j in 0..povm.len() {
        if outcome_weight(povm, j)? < DEGENERATE_TOL {
            report.entropies.push(Vec::new());
            continue;
        }
        let h = (0..k)
            .map(|i| Ok(entropy_bits(povm_posterior(povm, family, i, j)?.probs())))
            .collect::<Result<Vec<f64>>>()?;
        for &(a, b, bound) in &bounds {
            let slack = h[a] + h[b] - bound;
            report.checks += 1;
            if slack < -POVM_TOL {
                report.violations += 1;
            }
            report.min_slack = report.min_slack.min(slack);
        }
        report.max_gain = report.max_gain.max(log_n - h.iter().sum::<f64>() / k as f64);
        report.entropies.push(h);
    }
    Ok(report)
}
