use obliq_core::analysis::{
    concentration_experiment, default_t_grid, explore_condition_2prime, honest_privacy_audit,
    povm_audit, verify_theorem1, BoundReport,
};
use obliq_core::encodings::{build_family, explicit_single_bit_family, mub_family, EncodingFamily};
use obliq_core::qmath::ComplexMatrix;
use obliq_core::SeededRng;
use serde_json::Value;

use super::emit;
use crate::args::{Format, Suite, VerifyArgs};
use crate::error::CliError;
use crate::family::require_seed;

fn family(k: usize, m: usize) -> Result<EncodingFamily, CliError> {
    Ok(if (k, m) == (2, 1) {
        explicit_single_bit_family()?
    } else {
        build_family(mub_family(k, m)?)?
    })
}

fn suite_report(args: &VerifyArgs) -> Result<BoundReport, CliError> {
    let (k, m) = (args.k.unwrap_or(2), args.m.unwrap_or(1));
    let seeded = || require_seed(args.seed, "this suite").map(SeededRng::from_seed);
    Ok(match args.suite {
        Suite::Entropic => {
            let root = seeded()?;
            let dims = args.dim.map_or(vec![2, 4, 8], |d| vec![d]);
            let trials = args.trials.unwrap_or(100_000);
            let mut report = BoundReport::new("entropic");
            for &dim in &dims {
                let r = verify_theorem1(dim, trials, &mut root.substream(dim as u64))?;
                report.merge(&r);
            }
            report.param("dims", dims).param("trials_per_dim", trials)
        }
        Suite::Povm => {
            let trials = args.trials.unwrap_or(200);
            povm_audit(&family(k, m)?, trials, &seeded()?)?
        }
        Suite::Concentration => {
            let root = seeded()?;
            let ells = args.ell.map_or(vec![16, 64, 256], |l| vec![l]);
            let pairs = args.trials.unwrap_or(1000);
            let mut report = BoundReport::new("concentration");
            let mut points = Vec::new();
            for &ell in &ells {
                let r = concentration_experiment(ell, pairs, &default_t_grid(ell), &root.substream(ell as u64))?;
                report.merge(&r.report);
                points.push(serde_json::json!({ "ell": ell, "points": r.points }));
            }
            report.param("pairs", pairs).param("grids", Value::Array(points))
        }
        Suite::Hk => {
            let f = build_family(mub_family(k, m)?)?;
            let encoders = (0..k)
                .map(|i| Ok(f.circuit(i)?.dense()))
                .collect::<Result<Vec<ComplexMatrix>, obliq_core::Error>>()?;
            let trials = args.trials.unwrap_or(1000);
            let r = explore_condition_2prime(&encoders, trials, &mut seeded()?)?;
            r.param("family", "mub").param("m", m)
        }
        Suite::Honest => honest_privacy_audit(args.m.unwrap_or(3))?,
    })
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let report = suite_report(args)?;
    let text = match args.format {
        Format::Text => format!(
            "suite {}: trials {}, min slack {:.6e} bits, violations {}{}\n",
            report.suite,
            report.trials,
            report.min_slack,
            report.violations,
            if report.exploratory { " (exploratory)" } else { "" }
        ),
        _ => report.to_json() + "\n",
    };
    emit(&text, args.out.as_deref())?;
    if report.violations > 0 && !report.exploratory {
        return Err(CliError::Violation(format!(
            "suite {} reported {} violation(s)",
            report.suite, report.violations
        )));
    }
    Ok(())
}
