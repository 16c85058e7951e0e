use rand::Rng;
use rayon::prelude::*;

use super::{entropic_gain_bound, BoundReport};
use crate::encodings::{build_family, mub_family, EncodingFamily};
use crate::povm::{povm_entropy_bound_check, random_povm};
use crate::protocol::{honest_leakage, honest_leakage_factored, info_account, MeasurementBasis};
use crate::qmath::{haar_unitary, ProbabilityDistribution, SeededRng};
use crate::Result;

const GAIN_TOL: f64 = 1e-9;
const DENSE_LEAKAGE_LIMIT: usize = 1024;

/// Random Haar projective measurements and random POVMs against the
/// entropic gain bound, per outcome and in expectation.
pub fn gain_bound_audit(
    family: &EncodingFamily,
    bases: usize,
    povms: usize,
    rng: &SeededRng,
) -> Result<BoundReport> {
    let n = family.n();
    let bound = entropic_gain_bound(family)?;
    let prior = ProbabilityDistribution::uniform(n)?;
    let projective = (0..bases)
        .into_par_iter()
        .map(|t| {
            let mut stream = rng.substream(t as u64);
            let basis = MeasurementBasis::custom(haar_unitary(n, &mut stream)?)?;
            let acc = info_account(&basis, family, &prior)?;
            let mut r = BoundReport::new("gain");
            for g in &acc.gain {
                r.record(bound - g, GAIN_TOL);
            }
            r.record(bound - acc.gain_expected, GAIN_TOL);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let general = povm_reports(family, povms, bound, &rng.substream(u64::MAX))?;
    let mut report = BoundReport::new("gain");
    projective.iter().chain(&general).for_each(|r| report.merge(r));
    Ok(report
        .param("k", family.k())
        .param("m", family.m())
        .param("bound_bits", bound)
        .param("projective_bases", bases)
        .param("povms", povms))
}

fn povm_reports(
    family: &EncodingFamily,
    trials: usize,
    bound: f64,
    rng: &SeededRng,
) -> Result<Vec<BoundReport>> {
    let n = family.n();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut stream = rng.substream(t as u64);
            let outcomes = stream.random_range(1..=2 * n);
            let povm = random_povm(n, outcomes, &mut stream)?;
            let check = povm_entropy_bound_check(&povm, family)?;
            let mut r = BoundReport::new("povm");
            r.trials = check.checks;
            r.min_slack = check.min_slack;
            r.violations = check.violations;
            for h in check.entropies.iter().filter(|h| !h.is_empty()) {
                let gain = (n as f64).log2() - h.iter().sum::<f64>() / h.len() as f64;
                r.record(bound - gain, GAIN_TOL);
            }
            Ok(r)
        })
        .collect()
}

/// Random POVMs (random rank, up to `2n` outcomes): pairwise entropy bound
/// per outcome and the gain bound.
pub fn povm_audit(family: &EncodingFamily, trials: usize, rng: &SeededRng) -> Result<BoundReport> {
    let bound = entropic_gain_bound(family)?;
    let mut report = BoundReport::new("povm");
    for r in povm_reports(family, trials, bound, rng)? {
        report.merge(&r);
    }
    Ok(report
        .param("k", family.k())
        .param("m", family.m())
        .param("povms", trials)
        .param("bound_bits", bound))
}

/// Honest leakage of every mub family with `k ≤ 2^m + 1`, `m ≤ max_m`,
/// which must vanish. The dense route cross-checks the factored one while
/// `n` stays small.
pub fn honest_privacy_audit(max_m: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new("honest");
    let mut families = 0usize;
    for m in 1..=max_m {
        for k in 2..=(1 << m) + 1 {
            let family = build_family(mub_family(k, m)?)?;
            families += 1;
            let dense = k * m <= usize::BITS as usize && family.n() <= DENSE_LEAKAGE_LIMIT;
            for j in 0..k {
                report.record(-honest_leakage_factored(&family, j)?.abs(), GAIN_TOL);
                if dense {
                    report.record(-honest_leakage(&family, j)?.abs(), GAIN_TOL);
                }
            }
        }
    }
    Ok(report.param("max_m", max_m).param("families", families))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::explicit_single_bit_family;

    #[test]
    fn audits_pass() {
        let f = explicit_single_bit_family().unwrap();
        let r = gain_bound_audit(&f, 200, 50, &SeededRng::from_seed(1)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.min_slack >= -1e-9);
        let mub = build_family(mub_family(3, 1).unwrap()).unwrap();
        assert!(povm_audit(&mub, 30, &SeededRng::from_seed(2)).unwrap().passed());
        let h = honest_privacy_audit(2).unwrap();
        assert!(h.passed());
        assert_eq!(h.parameters["families"], 2 + 4);
    }
}
