
use super::BoundReport;
use crate::encodings::{w2, EncodingFamily};
use crate::qmath::{
    h2, haar_unitary, identity, linf, random_state, tensor_power, ComplexMatrix, QuantumState,
    SeededRng, C64,
};
use crate::{Error, Result};

const SLACK_TOL: f64 = 1e-9;

/// `c(A, B)`: the largest overlap between a row of `A` and a row of `B`,
/// `L∞(A B^†)`.
pub fn theorem1_overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    Ok(linf(&(a * b.adjoint())))
}

/// `H_2(Au) + H_2(Bu) + 2 log2 c(A, B)`.
pub fn theorem1_slack(a: &ComplexMatrix, b: &ComplexMatrix, u: &QuantumState) -> Result<f64> {
    let c = theorem1_overlap(a, b)?;
    let au = QuantumState::normalized(a * u.amplitudes())?;
    let bu = QuantumState::normalized(b * u.amplitudes())?;
    Ok(h2(&au) + h2(&bu) + 2.0 * c.log2())
}

/// `W_2^{⊗m}` when `dim = 2^m`, otherwise the Fourier matrix.
pub fn walsh_or_fourier(dim: usize) -> ComplexMatrix {
    if dim.is_power_of_two() {
        tensor_power(&w2(), dim.trailing_zeros() as usize)
    } else {
        let s = 1.0 / (dim as f64).sqrt();
        ComplexMatrix::from_fn(dim, dim, |r, c| {
            let angle = 2.0 * std::f64::consts::PI * (r * c) as f64 / dim as f64;
            C64::from_polar(s, angle)
        })
    }
}

/// Random Haar pairs `(A, B)` with random `u`, plus `trials / 10` checks
/// of the Hadamard case `A = I, B = W` where the bound is `log2 dim`.
pub fn verify_theorem1(dim: usize, trials: usize, rng: &mut SeededRng) -> Result<BoundReport> {
    if dim < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2".into()));
    }
    let mut report = BoundReport::new("entropic");
    for _ in 0..trials {
        let a = haar_unitary(dim, rng)?;
        let b = haar_unitary(dim, rng)?;
        let u = random_state(dim, rng)?;
        report.record(theorem1_slack(&a, &b, &u)?, SLACK_TOL);
    }
    let id = identity(dim);
    let w = walsh_or_fourier(dim);
    let log_dim = (dim as f64).log2();
    let rhs = -2.0 * theorem1_overlap(&id, &w)?.log2();
    let mut hadamard = BoundReport::new("entropic-hadamard");
    let probes = (trials / 10).max(1);
    for t in 0..probes {
        let u = if t < dim {
            QuantumState::basis(dim, t)?
        } else {
            random_state(dim, rng)?
        };
        let slack = theorem1_slack(&id, &w, &u)?;
        hadamard.record(slack, SLACK_TOL);
    }
    if (rhs - log_dim).abs() > SLACK_TOL {
        hadamard.violations += 1;
    }
    report.merge(&hadamard);
    Ok(report
        .param("dim", dim)
        .param("random_trials", trials)
        .param("hadamard_trials", probes)
        .param("hadamard_rhs_bits", rhs))
}

/// Sums of `H_2(C_i^† u)` over random `u` and structured probes (basis
/// vectors and the columns of every `C_i`). Violations are counted against
/// the proven pairwise bound `(1/(k-1)) Σ_{a<b} -2 log2 L∞(C_a^† C_b)`,
/// which is `log n` for `k = 2` and `(k/2) log n` for mutually unbiased
/// products. The gap to `(k-1) log n` is reported without judgment.
pub fn explore_condition_2prime(
    encoders: &[ComplexMatrix],
    trials: usize,
    rng: &mut SeededRng,
) -> Result<BoundReport> {
    let k = encoders.len();
    if k < 2 {
        return Err(Error::InvalidParameter("need at least two encoders".into()));
    }
    let n = encoders[0].nrows();
    for c in encoders {
        if c.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: c.nrows(),
            });
        }
    }
    let adjoints: Vec<ComplexMatrix> = encoders.iter().map(|c| c.adjoint()).collect();
    let mut pairwise = 0.0;
    for a in 0..k {
        for b in a + 1..k {
            pairwise += -2.0 * linf(&(&adjoints[a] * &encoders[b])).log2();
        }
    }
    let proven = pairwise / (k - 1) as f64;
    let log_n = (n as f64).log2();
    let target = (k - 1) as f64 * log_n;

    let sum_for = |u: &QuantumState| -> Result<f64> {
        let mut total = 0.0;
        for adj in &adjoints {
            total += h2(&QuantumState::normalized(adj * u.amplitudes())?);
        }
        Ok(total)
    };
    let mut report = BoundReport::new("hk");
    let mut min_sum = f64::INFINITY;
    let mut probes: Vec<QuantumState> = (0..n).map(|d| QuantumState::basis(n, d)).collect::<Result<_>>()?;
    for c in encoders {
        for col in c.column_iter() {
            probes.push(QuantumState::normalized(col.into_owned())?);
        }
    }
    for u in &probes {
        let s = sum_for(u)?;
        min_sum = min_sum.min(s);
        report.record(s - proven, SLACK_TOL);
    }
    for _ in 0..trials {
        let u = random_state(n, rng)?;
        let s = sum_for(&u)?;
        min_sum = min_sum.min(s);
        report.record(s - proven, SLACK_TOL);
    }
    report.exploratory = k > 2;
    Ok(report
        .param("k", k)
        .param("n", n)
        .param("min_sum_bits", min_sum)
        .param("proven_bound_bits", proven)
        .param("hk_target_bits", target)
        .param("hk_gap_bits", min_sum - target))
}

/// Upper bound on the information gain for any outcome of any projective
/// measurement: `log n - (1/(k(k-1))) Σ_{i<j} -2 log2 c_{ij}`, with
/// `c_{ij} = L∞(E_i^† E_j)`. Equals `(k/2) m` for pairwise-Hadamard
/// families.
pub fn entropic_gain_bound(family: &EncodingFamily) -> Result<f64> {
    let k = family.k();
    let log_n = (family.n() as f64).log2();
    if k < 2 {
        return Ok(log_n);
    }
    let mut total = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            total += -2.0 * family.pair_overlap(i, j)?.log2();
        }
    }
    Ok((log_n - total / (k * (k - 1)) as f64).max(0.0))
}
