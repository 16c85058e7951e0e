//! Hardening layers: XOR share splitting across rounds and GF(2^m) affine
//! masking of items.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encodings::EncodingFamily;
use crate::gf::Gf2m;
use crate::protocol::{run_session, DatabaseState, Decoded, SessionTranscript, Strategy};
use crate::qmath::{entropy_bits, SeededRng};
use crate::{Error, Result};

fn check_value(v: u32, m: usize) -> Result<u32> {
    if m == 0 || m > 32 || (v as u64) >> m != 0 {
        return Err(Error::InvalidParameter(format!(
            "value {v} does not fit in {m} bits"
        )));
    }
    Ok(v)
}

/// `r` pairs whose componentwise XOR gives back `(d_0, d_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorShares {
    pub m: usize,
    pub shares: Vec<(u32, u32)>,
}

impl XorShares {
    pub fn rounds(&self) -> usize {
        self.shares.len()
    }
}

/// `r - 1` uniform pairs plus a closing pair.
pub fn xor_split(d0: u32, d1: u32, m: usize, r: usize, rng: &mut SeededRng) -> Result<XorShares> {
    if r == 0 {
        return Err(Error::InvalidParameter("need at least one round".into()));
    }
    check_value(d0, m)?;
    check_value(d1, m)?;
    let mask = ((1u64 << m) - 1) as u32;
    let mut shares = Vec::with_capacity(r);
    let (mut x0, mut x1) = (d0, d1);
    for _ in 1..r {
        let pair = (rng.random::<u32>() & mask, rng.random::<u32>() & mask);
        x0 ^= pair.0;
        x1 ^= pair.1;
        shares.push(pair);
    }
    shares.push((x0, x1));
    Ok(XorShares { m, shares })
}

pub fn xor_reconstruct(shares: &XorShares) -> (u32, u32) {
    shares
        .shares
        .iter()
        .fold((0, 0), |(a, b), &(x, y)| (a ^ x, b ^ y))
}

/// Outcome of the guess-the-encoding attack against XOR splitting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub rounds: usize,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub expected: f64,
    pub sigma: f64,
}

impl AttackReport {
    pub fn within_sigmas(&self, z: f64) -> bool {
        (self.frequency - self.expected).abs() <= z * self.sigma
    }
}

/// Each trial splits a random database into `r` share pairs and runs one
/// session per pair; the adversary measures in `E_g^†` for a fresh random
/// guess `g` every round. The trial succeeds when every round collapses the
/// posterior to a single configuration and the folded result is correct.
pub fn simulate_xor_attack(
    family: &EncodingFamily,
    r: usize,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<AttackReport> {
    if family.k() != 2 {
        return Err(Error::InvalidParameter("XOR splitting needs k = 2".into()));
    }
    let m = family.m();
    let mask = ((1u64 << m) - 1) as u32;
    let mut successes = 0;
    for _ in 0..trials {
        let (d0, d1) = (rng.random::<u32>() & mask, rng.random::<u32>() & mask);
        let shares = xor_split(d0, d1, m, r, rng)?;
        let mut folded = Some((0u32, 0u32));
        for &(x, y) in &shares.shares {
            let db = DatabaseState::from_items(vec![x, y], m)?;
            let guess = rng.random_range(0..2);
            let t = run_session(&db, family, &Strategy::InvertGuess { guess }, rng)?;
            folded = match (folded, t.decoded) {
                (Some((a, b)), Decoded::Configuration { value }) => {
                    let got = DatabaseState::from_index(2, m, value)?;
                    Some((a ^ got.item(0), b ^ got.item(1)))
                }
                _ => None,
            };
        }
        if folded == Some((d0, d1)) {
            successes += 1;
        }
    }
    let expected = 0.5f64.powi(r as i32);
    Ok(AttackReport {
        rounds: r,
        trials,
        successes,
        frequency: successes as f64 / trials.max(1) as f64,
        expected,
        sigma: (expected * (1.0 - expected) / trials.max(1) as f64).sqrt(),
    })
}

/// Affine mask `x ↦ a·x + b` over GF(2^m); serialized as
/// `{m, a, b, modulus}` with the modulus bit-encoded, LSB = constant term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GfMask {
    pub m: usize,
    pub a: u32,
    pub b: u32,
    pub modulus: u32,
}

impl GfMask {
    pub fn new(m: usize, a: u32, b: u32) -> Result<Self> {
        let f = Gf2m::new(m)?;
        f.check(a)?;
        f.check(b)?;
        if a == 0 {
            return Err(Error::InvalidFieldElement { m, value: 0 });
        }
        Ok(Self {
            m,
            a,
            b,
            modulus: f.modulus(),
        })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(m, 1, 0)
    }

    pub fn random(m: usize, rng: &mut SeededRng) -> Result<Self> {
        let order = Gf2m::new(m)?.order();
        Self::new(m, rng.random_range(1..order), rng.random_range(0..order))
    }

    fn field(&self) -> Result<Gf2m> {
        let f = Gf2m::new(self.m)?;
        if f.modulus() != self.modulus {
            return Err(Error::InvalidParameter(format!(
                "mask modulus {:#x} does not match the built-in {:#x}",
                self.modulus,
                f.modulus()
            )));
        }
        f.check(self.b)?;
        if f.check(self.a)? == 0 {
            return Err(Error::InvalidFieldElement { m: self.m, value: 0 });
        }
        Ok(f)
    }

    pub fn mask(&self, d: u32) -> Result<u32> {
        let f = self.field()?;
        Ok(f.add(f.mul(self.a, f.check(d)?), self.b))
    }

    pub fn unmask(&self, y: u32) -> Result<u32> {
        let f = self.field()?;
        Ok(f.mul(f.inv(self.a)?, f.add(f.check(y)?, self.b)))
    }
}

pub fn gf_mask(d: u32, mask: &GfMask) -> Result<u32> {
    mask.mask(d)
}

pub fn gf_unmask(y: u32, mask: &GfMask) -> Result<u32> {
    mask.unmask(y)
}

/// Runs the protocol on the masked items `a·d_t + b`; the announcement also
/// carries the mask, and decoded items are unmasked.
pub fn masked_session(
    db: &DatabaseState,
    family: &EncodingFamily,
    mask: &GfMask,
    strategy: &Strategy,
    rng: &mut SeededRng,
) -> Result<SessionTranscript> {
    if db.k() != 2 {
        return Err(Error::InvalidParameter("masked sessions need k = 2".into()));
    }
    if mask.m != db.m() {
        return Err(Error::InvalidParameter(format!(
            "mask degree {} does not match item width {}",
            mask.m,
            db.m()
        )));
    }
    let masked = db
        .items()
        .iter()
        .map(|&v| mask.mask(v))
        .collect::<Result<Vec<_>>>()?;
    let masked = DatabaseState::from_items(masked, db.m())?;
    crate::protocol::run_session_masked(&masked, family, strategy, rng, mask.clone())
}

/// Result of the bit-targeting audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskAudit {
    pub m: usize,
    pub target_bit: usize,
    pub trials: usize,
    /// Mean posterior entropy of bit `t` of the original item, over trials.
    pub per_bit_entropy: Vec<f64>,
    pub min_entropy: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// A user who learns exactly bit `target_bit` of the masked item `a·d + b`
/// (and then hears `a`, `b`) gets a posterior on `d`; this reports how much
/// entropy is left on each single bit of `d`, averaged over random masks.
/// Bits are numbered from the least significant.
pub fn bit_targeting_audit(
    m: usize,
    target_bit: usize,
    trials: usize,
    threshold: f64,
    rng: &mut SeededRng,
) -> Result<MaskAudit> {
    if target_bit >= m || m > 16 {
        return Err(Error::InvalidParameter(format!(
            "target bit {target_bit} out of range for m = {m}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("audit needs at least one trial".into()));
    }
    let order = 1u32 << m;
    let mut sums = vec![0.0; m];
    for _ in 0..trials {
        let mask = GfMask::random(m, rng)?;
        let d = rng.random_range(0..order);
        let observed = (mask.mask(d)? >> target_bit) & 1;
        let mut support = Vec::new();
        for x in 0..order {
            if (mask.mask(x)? >> target_bit) & 1 == observed {
                support.push(x);
            }
        }
        for (t, sum) in sums.iter_mut().enumerate() {
            let ones = support.iter().filter(|&&x| (x >> t) & 1 == 1).count() as f64;
            let p1 = ones / support.len() as f64;
            *sum += entropy_bits(&[p1, 1.0 - p1]);
        }
    }
    let per_bit_entropy: Vec<f64> = sums.iter().map(|s| s / trials as f64).collect();
    let min_entropy = per_bit_entropy.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(MaskAudit {
        m,
        target_bit,
        trials,
        per_bit_entropy,
        min_entropy,
        threshold,
        passed: min_entropy >= threshold,
    })
}
