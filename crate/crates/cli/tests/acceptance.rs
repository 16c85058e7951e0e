//! Acceptance criteria 1-14. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use obliq_core::analysis::{
    concentration_experiment, default_t_grid, gain_bound_audit, honest_privacy_audit,
    leakage_scan, max_leakage, theorem1_overlap, verify_theorem1, walsh_or_fourier,
    OptimizerConfig, REFERENCE_FIT,
};
use obliq_core::encodings::{
    build_family, explicit_single_bit_family, mub_family, random_family, walsh_family,
    EncodingFamily, FamilyKind,
};
use obliq_core::hardening::{masked_session, simulate_xor_attack, GfMask};
use obliq_core::protocol::{
    decode_item, honest_basis, info_account, invert_basis, outcome_distribution, parity_basis,
    posterior, run_session, vendor_encode, DatabaseState, Decoded, Strategy,
};
use obliq_core::qmath::{identity, is_hadamard};
use obliq_core::{ProbabilityDistribution, Result, SeededRng, C64};

const EXACT: f64 = 1e-12;
const BOUND_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-6;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        passed,
        detail: detail.into(),
    })
}

fn explicit() -> Result<EncodingFamily> {
    explicit_single_bit_family()
}

fn uniform(n: usize) -> Result<ProbabilityDistribution> {
    ProbabilityDistribution::uniform(n)
}

/// Printed superpositions `(|a> ± |b>)/√2`, indexed `[encoding][database]`.
const STATE_TABLE: [[(usize, usize, f64); 4]; 2] = [
    [(0, 1, 1.0), (0, 1, -1.0), (2, 3, 1.0), (2, 3, -1.0)],
    [(0, 2, 1.0), (0, 2, -1.0), (1, 3, 1.0), (1, 3, -1.0)],
];

fn c1_state_table() -> Result<Verdict> {
    let f = explicit()?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = 0.0f64;
    for (i, row) in STATE_TABLE.iter().enumerate() {
        for (d, &(a, b, sign)) in row.iter().enumerate() {
            let state = vendor_encode(&DatabaseState::from_index(2, 1, d)?, &f, i)?;
            let mut want = [C64::new(0.0, 0.0); 4];
            want[a] = C64::new(s, 0.0);
            want[b] = C64::new(sign * s, 0.0);
            for (got, w) in state.amplitudes().iter().zip(want) {
                worst = worst.max((got - w).norm());
            }
        }
    }
    verdict(worst <= EXACT, format!("8 states, max entry error {worst:.1e}"))
}

fn c2_hadamard() -> Result<Verdict> {
    let f = explicit()?;
    let p = f.encoder(1)?.adjoint() * f.encoder(0)?;
    let worst = p.iter().map(|z| (z.norm() - 0.5).abs()).fold(0.0, f64::max);
    let certified = is_hadamard(&p, EXACT)?;
    verdict(
        certified && worst <= EXACT,
        format!("is_hadamard = {certified}, max ||entry| - 1/2| = {worst:.1e}"),
    )
}

fn c3_honest_completeness() -> Result<Verdict> {
    let mut rng = SeededRng::from_seed(3);
    let mut families = vec![explicit()?, walsh_family(2)?, walsh_family(3)?];
    for (k, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        families.push(build_family(mub_family(k, m)?)?);
    }
    families.push(build_family(random_family(4, 2, &mut rng)?)?);
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for f in &families {
        let (k, m) = (f.k(), f.m());
        for j in 0..k {
            let basis = honest_basis(f, j)?;
            for d in 0..f.n() {
                let db = DatabaseState::from_index(k, m, d)?;
                for i in 0..k {
                    let probs = outcome_distribution(&vendor_encode(&db, f, i)?, &basis)?;
                    let mut correct = 0.0;
                    for (o, &p) in probs.probs().iter().enumerate() {
                        if decode_item(o, i, j, k, m)? == db.item(j) {
                            correct += p;
                        }
                    }
                    worst = worst.max((1.0 - correct).abs());
                    cases += 1;
                }
            }
        }
    }
    verdict(
        worst <= EXACT,
        format!("{} families, {cases} (d, i, j) cases, max miss mass {worst:.1e}", families.len()),
    )
}

fn c4_invert_guess() -> Result<Verdict> {
    let f = explicit()?;
    let acc = info_account(&invert_basis(&f, 0)?, &f, &uniform(4)?)?;
    let mut worst = 0.0f64;
    for j in 0..4 {
        worst = worst
            .max(acc.h_cond[j][0].abs())
            .max((acc.h_cond[j][1] - 2.0).abs())
            .max((acc.h_avg[j] - 1.0).abs());
    }
    verdict(worst <= EXACT, format!("h_j0 = 0, h_j1 = 2, h_j = 1 for all j, max error {worst:.1e}"))
}

fn c5_gain_bound() -> Result<Verdict> {
    let f = explicit()?;
    let r = gain_bound_audit(&f, 10_000, 1_000, &SeededRng::from_seed(5))?;
    let bound = r.parameters["bound_bits"].as_f64().unwrap_or(f64::NAN);
    verdict(
        r.violations == 0 && (bound - 1.0).abs() <= EXACT && r.min_slack >= -BOUND_TOL,
        format!(
            "10^4 bases + 10^3 POVMs, {} checks, {} violations, bound {bound:.6}, min slack {:.3e}",
            r.trials, r.violations, r.min_slack
        ),
    )
}

fn c6_theorem1() -> Result<Verdict> {
    let root = SeededRng::from_seed(6);
    let mut checks = 0;
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for dim in [2usize, 4, 8] {
        let r = verify_theorem1(dim, 100_000, &mut root.substream(dim as u64))?;
        checks += r.trials;
        violations += r.violations;
        min_slack = min_slack.min(r.min_slack);
    }
    let mut hadamard_gap = 0.0f64;
    for n in [2usize, 4, 8, 16] {
        let rhs = -2.0 * theorem1_overlap(&identity(n), &walsh_or_fourier(n))?.log2();
        hadamard_gap = hadamard_gap.max((rhs - (n as f64).log2()).abs());
    }
    verdict(
        violations == 0 && min_slack >= -BOUND_TOL && hadamard_gap <= EXACT,
        format!(
            "{checks} checks, {violations} violations, min slack {min_slack:.3e}, \
             Hadamard RHS - log n = {hadamard_gap:.1e}"
        ),
    )
}

/// Every outcome of `M_j` leaves the non-target items uniform.
fn marginal_uniformity(f: &EncodingFamily, j: usize) -> Result<f64> {
    let (k, m, n) = (f.k(), f.m(), f.n());
    let basis = honest_basis(f, j)?;
    let prior = uniform(n)?;
    let others = 1usize << (m * (k - 1));
    let mut worst = 0.0f64;
    for i in 0..k {
        for o in 0..n {
            let post = posterior(&basis, f, i, o, &prior)?;
            let mut marginal = vec![0.0; others];
            for (d, &p) in post.probs().iter().enumerate() {
                let db = DatabaseState::from_index(k, m, d)?;
                let rest = (0..k)
                    .filter(|&t| t != j)
                    .fold(0usize, |acc, t| (acc << m) | db.item(t) as usize);
                marginal[rest] += p;
            }
            for q in marginal {
                worst = worst.max((q - 1.0 / others as f64).abs());
            }
        }
    }
    Ok(worst)
}

fn c7_mub_privacy() -> Result<Verdict> {
    let audit = honest_privacy_audit(3)?;
    let mut worst = 0.0f64;
    for m in 1..=2 {
        for k in 2..=(1 << m) + 1 {
            let f = build_family(mub_family(k, m)?)?;
            for j in 0..k {
                worst = worst.max(marginal_uniformity(&f, j)?);
            }
        }
    }
    verdict(
        audit.passed() && audit.min_slack >= -BOUND_TOL && worst <= BOUND_TOL,
        format!(
            "{} families up to m = 3, max |leakage| {:.1e}; posterior marginals (m <= 2) off uniform by {worst:.1e}",
            audit.parameters["families"],
            -audit.min_slack
        ),
    )
}

fn c8_optimizer() -> Result<Verdict> {
    let config = OptimizerConfig::default();
    let start = Instant::now();
    let two = max_leakage(&explicit()?, &config, &SeededRng::from_seed(8))?;
    let mub3 = build_family(mub_family(3, 1)?)?;
    let three = max_leakage(&mub3, &config, &SeededRng::from_seed(8))?;
    let elapsed = start.elapsed();
    let replay = (two.reproduce(&explicit()?)? - two.best_gain)
        .abs()
        .max((three.reproduce(&mub3)? - three.best_gain).abs());
    let ok_two = (0.999..=1.0 + OPT_TOL).contains(&two.best_gain);
    let ok_three = (1.0..=1.5 + OPT_TOL).contains(&three.best_gain);
    verdict(
        ok_two && ok_three && replay <= BOUND_TOL && elapsed < Duration::from_secs(300),
        format!(
            "k=2,m=1 best {:.6} in [0.999, 1]; k=3,m=1 mub best {:.6} in [1, 1.5]; replay error {replay:.1e}; {:.1}s",
            two.best_gain,
            three.best_gain,
            elapsed.as_secs_f64()
        ),
    )
}

fn c9_concentration() -> Result<Verdict> {
    let root = SeededRng::from_seed(9);
    let mut details = Vec::new();
    let mut ok = true;
    for ell in [16usize, 64, 256] {
        let grid = default_t_grid(ell);
        let r = concentration_experiment(ell, 1_000, &grid, &root.substream(ell as u64))?;
        ok &= grid.len() == 8 && r.report.violations == 0;
        let worst = r
            .points
            .iter()
            .map(|p| p.frequency - p.bound - 3.0 * p.sigma)
            .fold(f64::NEG_INFINITY, f64::max);
        details.push(format!("l={ell} max excess {worst:.3}"));
    }
    verdict(ok, format!("10^3 pairs x 8 thresholds; {}", details.join(", ")))
}

fn c10_xor_attack() -> Result<Verdict> {
    let f = explicit()?;
    let root = SeededRng::from_seed(10);
    let mut details = Vec::new();
    let mut ok = true;
    for r in 1..=3 {
        let rep = simulate_xor_attack(&f, r, 10_000, &mut root.substream(r as u64))?;
        ok &= rep.within_sigmas(3.0);
        details.push(format!(
            "r={r} {:.4} vs {:.4} ({:+.2} sigma)",
            rep.frequency,
            rep.expected,
            (rep.frequency - rep.expected) / rep.sigma
        ));
    }
    verdict(ok, details.join(", "))
}

fn c11_masking() -> Result<Verdict> {
    let mut round_trips = 0u64;
    let mut failures = 0u64;
    for m in 1..=8usize {
        let order = 1u32 << m;
        for a in 1..order {
            for b in 0..order {
                let mask = GfMask::new(m, a, b)?;
                for d in 0..order {
                    round_trips += 1;
                    if mask.unmask(mask.mask(d)?)? != d {
                        failures += 1;
                    }
                }
            }
        }
    }
    let mut sessions = 0u64;
    for m in 1..=3usize {
        let f = if m == 1 { explicit()? } else { walsh_family(m)? };
        let order = 1u32 << m;
        for a in 1..order {
            for b in 0..order {
                let mask = GfMask::new(m, a, b)?;
                for d in 0..f.n() {
                    let db = DatabaseState::from_index(2, m, d)?;
                    for choice in 0..2 {
                        let mut rng = SeededRng::new(11, d as u64);
                        let t = masked_session(&db, &f, &mask, &Strategy::Honest { choice }, &mut rng)?;
                        sessions += 1;
                        if t.decoded != (Decoded::Item { item: choice, value: db.item(choice) }) {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    verdict(
        failures == 0,
        format!("{round_trips} mask round trips (m <= 8), {sessions} masked sessions (m <= 3), {failures} failures"),
    )
}

fn c12_scan() -> Result<Verdict> {
    let table = leakage_scan(&[2, 3, 4], &[1, 2], &OptimizerConfig::scan(), &SeededRng::from_seed(12))?;
    let mut ok = table.rows.len() == 6;
    for row in &table.rows {
        ok &= row.best_gain_bits <= row.bound_bits + OPT_TOL;
        if row.family == FamilyKind::Mub {
            ok &= row.best_gain_bits <= row.k as f64 * row.m as f64 / 2.0 + OPT_TOL;
        }
        if (row.k, row.m) == (2, 1) {
            ok &= (row.best_gain_bits - 1.0).abs() <= 1e-3;
        }
    }
    let cells: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("({},{}) {:.3}/{:.3}", r.k, r.m, r.best_gain_bits, r.bound_bits))
        .collect();
    let fit = match &table.fit {
        Some(f) => format!("fit c={:.3} alpha={:.3}", f.c, f.alpha),
        None => {
            ok = false;
            "no fit".into()
        }
    };
    verdict(
        ok,
        format!(
            "{}; {fit}; reference c={} alpha={}",
            cells.join(" "),
            REFERENCE_FIT.0,
            REFERENCE_FIT.1
        ),
    )
}

fn c13_parity() -> Result<Verdict> {
    let f = explicit()?;
    let basis = parity_basis(2, 1)?;
    let prior = uniform(4)?;
    let mut ok = true;
    let mut checked = 0;
    let mut decoded = 0;
    for d in 0..4usize {
        let db = DatabaseState::from_index(2, 1, d)?;
        let parity = d.count_ones() & 1;
        for i in 0..2 {
            let probs = outcome_distribution(&vendor_encode(&db, &f, i)?, &basis)?;
            for o in 0..2 {
                if probs.probs()[o] <= EXACT {
                    continue;
                }
                let post = posterior(&basis, &f, i, o, &prior)?;
                ok &= (0..4usize)
                    .filter(|&x| post.probs()[x] > EXACT)
                    .all(|x| x.count_ones() & 1 == parity);
                checked += 1;
            }
        }
        for seed in 0..40 {
            let t = run_session(&db, &f, &Strategy::Parity, &mut SeededRng::new(13, seed))?;
            if t.outcome < 2 {
                ok &= t.decoded == (Decoded::Parity { value: parity });
                decoded += 1;
            } else {
                ok &= !matches!(t.decoded, Decoded::Parity { value } if value != parity);
            }
        }
    }
    let gain = info_account(&basis, &f, &prior)?.gain_expected;
    ok &= checked > 0 && decoded > 0 && gain <= 1.0 + EXACT;
    verdict(
        ok,
        format!(
            "{checked} reachable (d, i, outcome 0/1) cases single-class, {decoded} sessions decoded parity, expected gain {gain:.6} bits"
        ),
    )
}

fn run_verify_suites() -> std::result::Result<(bool, Vec<String>), String> {
    let mut ok = true;
    let mut notes = Vec::new();
    for suite in ["entropic", "povm", "concentration", "hk", "honest"] {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_obliq"))
            .args(["verify", "--suite", suite, "--seed", "14"])
            .output()
            .map_err(|e| e.to_string())?;
        let report: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| format!("{suite}: {e}"))?;
        let clean = out.status.success() && report["violations"] == 0;
        ok &= clean;
        notes.push(format!(
            "{suite} {} {:.1}s",
            if clean { "ok" } else { "FAILED" },
            start.elapsed().as_secs_f64()
        ));
    }
    Ok((ok, notes))
}

type Criterion = (u32, &'static str, fn() -> Result<Verdict>);

const CRITERIA: [Criterion; 13] = [
    (1, "state table", c1_state_table),
    (2, "explicit pair is Hadamard", c2_hadamard),
    (3, "honest completeness", c3_honest_completeness),
    (4, "invert-guess tightness", c4_invert_guess),
    (5, "gain bound audit", c5_gain_bound),
    (6, "entropic bound audit", c6_theorem1),
    (7, "mub honest privacy", c7_mub_privacy),
    (8, "optimizer cap and tightness", c8_optimizer),
    (9, "Haar concentration", c9_concentration),
    (10, "XOR splitting attack rate", c10_xor_attack),
    (11, "GF masking", c11_masking),
    (12, "leakage scan", c12_scan),
    (13, "parity capability", c13_parity),
];

const TIME_LIMITS: [(u32, u64); 3] = [(1, 1), (3, 30), (6, 60)];

fn main() -> ExitCode {
    let mut all = true;
    let mut budget = Duration::ZERO;
    for (id, name, check) in CRITERIA {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        if id != 12 {
            budget += elapsed;
        }
        let limit = TIME_LIMITS.iter().find(|(c, _)| *c == id).map(|&(_, s)| s);
        let (mut passed, mut detail) = match result {
            Ok(v) => (v.passed, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(secs) = limit {
            if elapsed > Duration::from_secs(secs) {
                passed = false;
                detail.push_str(&format!("; over the {secs}s limit"));
            }
        }
        all &= passed;
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{:.2}s]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }

    let start = Instant::now();
    let (suites_ok, notes) = match run_verify_suites() {
        Ok(r) => r,
        Err(e) => (false, vec![format!("error: {e}")]),
    };
    let total = budget + start.elapsed();
    let passed = suites_ok && total < Duration::from_secs(600);
    all &= passed;
    println!(
        "criterion 14 {}: full verification under 10 min: {}; with criteria 1-11, 13 total {:.1}s",
        if passed { "PASS" } else { "FAIL" },
        notes.join(", "),
        total.as_secs_f64()
    );

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
