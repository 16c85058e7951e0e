use obliq_core::analysis::{leakage_scan, OptimizerConfig};
use obliq_core::SeededRng;

use super::emit;
use crate::args::{Format, ScanArgs};
use crate::error::CliError;
use crate::family::require_seed;

/// `a..b` (inclusive), `a,b,c`, or a single value.
pub fn parse_range(flag: &str, text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid {flag} {text:?}: expected a..b, a,b or a"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let values = if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(values)
}

pub fn run(args: &ScanArgs) -> Result<(), CliError> {
    let ks = parse_range("--k", &args.k)?;
    let ms = parse_range("--m", &args.m)?;
    let seed = require_seed(args.seed, "scan")?;
    let mut config = OptimizerConfig::scan();
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    if let Some(i) = args.iters {
        config.iterations = i;
    }
    let table = leakage_scan(&ks, &ms, &config, &SeededRng::from_seed(seed))?;
    let out = match args.format {
        Format::Json => serde_json::to_string_pretty(&table).expect("scan serializes") + "\n",
        Format::Csv | Format::Text => table.to_csv(),
    };
    emit(&out, args.out.as_deref())
}
