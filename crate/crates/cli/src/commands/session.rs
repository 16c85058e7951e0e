use obliq_core::encodings::EncodingFamily;
use obliq_core::hardening::{masked_session, xor_reconstruct, xor_split, GfMask};
use obliq_core::protocol::{run_session, DatabaseState, Decoded, SessionTranscript, Strategy};
use obliq_core::SeededRng;
use serde_json::json;

use super::emit;
use crate::args::{SessionArgs, StrategyArg};
use crate::error::CliError;
use crate::family::{build, require_seed};
use crate::hexdb::parse_db;

fn strategy(args: &SessionArgs) -> Strategy {
    match args.strategy {
        StrategyArg::Honest => Strategy::Honest { choice: args.choice },
        StrategyArg::Invert => Strategy::InvertGuess { guess: args.guess },
        StrategyArg::Parity => Strategy::Parity,
    }
}

fn single(
    db: &DatabaseState,
    family: &EncodingFamily,
    strategy: &Strategy,
    mask: Option<&GfMask>,
    rng: &mut SeededRng,
) -> Result<SessionTranscript, CliError> {
    Ok(match mask {
        Some(mask) => masked_session(db, family, mask, strategy, rng)?,
        None => run_session(db, family, strategy, rng)?,
    })
}

pub fn run(args: &SessionArgs) -> Result<(), CliError> {
    let (k, m) = (args.k, args.m);
    let seed = require_seed(args.seed, "session")?;
    let root = SeededRng::from_seed(seed);
    let family = build(&args.family, k, m, args.r, &mut root.substream(1))?;
    let db = parse_db(&args.db, k, m)?;
    if args.choice >= k {
        return Err(CliError::Usage(format!("--choice {} must be below k = {k}", args.choice)));
    }
    if args.guess >= k {
        return Err(CliError::Usage(format!("--guess {} must be below k = {k}", args.guess)));
    }
    if args.rounds == 0 {
        return Err(CliError::Usage("--rounds must be at least 1".into()));
    }
    if (args.mask || args.rounds > 1) && k != 2 {
        return Err(CliError::Usage("--mask and --rounds need --k 2".into()));
    }
    let strategy = strategy(args);
    let mask = if args.mask {
        Some(GfMask::random(m, &mut root.substream(2))?)
    } else {
        None
    };
    let mut rng = SeededRng::new(seed, 0);

    let json = if args.rounds == 1 {
        single(&db, &family, &strategy, mask.as_ref(), &mut rng)?.to_json()
    } else {
        // Masking happens before splitting; shares run unmasked and the
        // folded value is unmasked once at the end.
        let stored: Vec<u32> = match &mask {
            Some(mask) => db.items().iter().map(|&v| mask.mask(v)).collect::<Result<_, _>>()?,
            None => db.items().to_vec(),
        };
        let shares = xor_split(stored[0], stored[1], m, args.rounds, &mut root.substream(3))?;
        let mut sessions = Vec::with_capacity(args.rounds);
        let mut folded = Some(0u32);
        for &(x, y) in &shares.shares {
            let share_db = DatabaseState::from_items(vec![x, y], m)?;
            let t = run_session(&share_db, &family, &strategy, &mut rng)?;
            folded = match (&t.decoded, folded) {
                (Decoded::Item { value, .. }, Some(acc)) => Some(acc ^ value),
                _ => None,
            };
            sessions.push(t);
        }
        let decoded = match (folded, &mask, &strategy) {
            (Some(v), Some(mask), Strategy::Honest { .. }) => Some(mask.unmask(v)?),
            (Some(v), None, Strategy::Honest { .. }) => Some(v),
            _ => None,
        };
        let check = xor_reconstruct(&shares);
        debug_assert_eq!(check, (stored[0], stored[1]));
        serde_json::to_string_pretty(&json!({
            "version": 1,
            "xor_rounds": args.rounds,
            "mask": mask,
            "choice": args.choice,
            "decoded": decoded,
            "sessions": sessions,
            "seed": seed,
        }))
        .expect("session output serializes")
    };
    emit(&(json + "\n"), args.out.as_deref())
}
