use std::fmt::Write;

use obliq_core::encodings::explicit_single_bit_family;
use obliq_core::protocol::{
    honest_basis, outcome_distribution, run_session, vendor_encode, DatabaseState, Decoded,
    Strategy,
};
use obliq_core::qmath::QuantumState;
use obliq_core::SeededRng;

use super::{emit, ket};
use crate::args::{DemoArgs, Format};
use crate::error::CliError;
use crate::family::require_seed;
use crate::hexdb::parse_db;

fn superposition(state: &QuantumState) -> String {
    let mut out = String::new();
    for (d, z) in state.amplitudes().iter().enumerate() {
        if z.norm() > 1e-12 {
            let sign = if z.re < 0.0 { '-' } else { '+' };
            write!(out, "{sign}{:.4}{} ", z.norm(), ket(d, 2)).expect("write to string");
        }
    }
    out.trim_end().to_string()
}

pub fn run(args: &DemoArgs) -> Result<(), CliError> {
    let db = parse_db(&args.db, 2, 1)?;
    if args.choice >= 2 {
        return Err(CliError::Usage(format!("--choice {} must be 0 or 1", args.choice)));
    }
    let seed = require_seed(args.seed, "demo")?;
    let family = explicit_single_bit_family()?;
    let mut rng = SeededRng::from_seed(seed);
    let transcript = run_session(&db, &family, &Strategy::Honest { choice: args.choice }, &mut rng)?;
    if args.format != Format::Text {
        return emit(&transcript.to_json(), None);
    }

    let mut out = String::new();
    let w = |out: &mut String, line: String| writeln!(out, "{line}").expect("write to string");
    w(&mut out, format!(
        "Single-bit exchange: d_0 = {}, d_1 = {} (d = {:02b})",
        db.item(0),
        db.item(1),
        db.index()
    ));
    w(&mut out, String::new());
    w(&mut out, "Encoded states E_i e_d:".into());
    for d in 0..4 {
        let cfg = DatabaseState::from_index(2, 1, d)?;
        let e0 = superposition(&vendor_encode(&cfg, &family, 0)?);
        let e1 = superposition(&vendor_encode(&cfg, &family, 1)?);
        w(&mut out, format!("  d = {d:02b}  i = 0: {e0:<28}  i = 1: {e1}"));
    }
    w(&mut out, String::new());
    w(&mut out, format!("Honest measurements of the state sent for d = {:02b}:", db.index()));
    for i in 0..2 {
        let state = vendor_encode(&db, &family, i)?;
        for j in 0..2 {
            let probs = outcome_distribution(&state, &honest_basis(&family, j)?)?;
            let terms: Vec<String> = probs
                .probs()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 1e-12)
                .map(|(o, p)| format!("P({o:02b}) = {p:.4}"))
                .collect();
            w(&mut out, format!("  encoding {i}, M_{j}: {}", terms.join("  ")));
        }
    }
    w(&mut out, String::new());
    w(&mut out, format!("Session (seed {seed}), honest choice j = {}:", args.choice));
    w(&mut out, format!("  outcome committed : {}", ket(transcript.outcome, 2)));
    w(&mut out, format!("  encoding announced: {}", transcript.announced));
    if let Decoded::Item { item, value } = transcript.decoded {
        w(&mut out, format!("  decoded item {item} = {value}"));
    }
    emit(&out, None)
}
