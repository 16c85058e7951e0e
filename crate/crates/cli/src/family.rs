use obliq_core::encodings::{
    build_family, cyclic_family, explicit_single_bit_family, mub_family, random_family,
    tensorized_family, walsh_family, EncodingFamily, FamilyKind,
};
use obliq_core::SeededRng;

use crate::error::CliError;

pub fn build(kind: &str, k: usize, m: usize, r: usize, rng: &mut SeededRng) -> Result<EncodingFamily, CliError> {
    let kind: FamilyKind = kind
        .parse()
        .map_err(|e: obliq_core::Error| CliError::Usage(format!("--family: {e}")))?;
    let need_k2 = |name: &str| {
        if k == 2 {
            Ok(())
        } else {
            Err(CliError::Usage(format!("--family {name} requires --k 2")))
        }
    };
    let family = match kind {
        FamilyKind::Explicit => {
            need_k2("explicit")?;
            if m != 1 {
                return Err(CliError::Usage("--family explicit requires --m 1".into()));
            }
            explicit_single_bit_family()?
        }
        FamilyKind::Walsh => {
            need_k2("walsh")?;
            walsh_family(m)?
        }
        FamilyKind::Mub => build_family(mub_family(k, m)?)?,
        FamilyKind::Cyclic => build_family(cyclic_family(k, m)?)?,
        FamilyKind::Random => build_family(random_family(k, m, rng)?)?,
        FamilyKind::Tensorized => build_family(tensorized_family(k, m, r, rng)?)?,
    };
    Ok(family)
}

pub fn require_seed(seed: Option<u64>, what: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Usage(format!("{what} is randomized and needs --seed")))
}
