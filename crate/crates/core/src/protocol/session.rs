use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    decode_item, invert_basis, honest_basis, parity_basis, posterior, sample_outcome,
    vendor_encode, BasisLabel, DatabaseState, MeasurementBasis,
};
use crate::encodings::{matrix_repr, EncodingFamily, FamilyDescriptor, MatrixRepr};
use crate::hardening::GfMask;
use crate::qmath::{ProbabilityDistribution, QuantumState, SeededRng};
use crate::{Error, Result};

pub const TRANSCRIPT_VERSION: u32 = 1;

const POINT_MASS_TOL: f64 = 1e-9;

/// What the user measures.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Honest { choice: usize },
    InvertGuess { guess: usize },
    Parity,
    Custom(MeasurementBasis),
}

impl Strategy {
    pub fn basis(&self, family: &EncodingFamily) -> Result<MeasurementBasis> {
        match self {
            Strategy::Honest { choice } => honest_basis(family, *choice),
            Strategy::InvertGuess { guess } => invert_basis(family, *guess),
            Strategy::Parity => parity_basis(family.k(), family.m()),
            Strategy::Custom(b) => {
                if b.dim() != family.n() {
                    return Err(Error::DimensionMismatch {
                        expected: family.n(),
                        actual: b.dim(),
                    });
                }
                Ok(b.clone())
            }
        }
    }
}

/// The state in flight. It is not `Clone`, and measuring consumes it.
#[derive(Debug)]
pub struct SentState {
    state: QuantumState,
}

impl SentState {
    pub fn dim(&self) -> usize {
        self.state.dim()
    }
}

/// Proof that a measurement happened; only [`measure`] produces one.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    outcome: usize,
    label: BasisLabel,
}

impl MeasurementRecord {
    pub fn outcome(&self) -> usize {
        self.outcome
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Announcement {
    encoding: usize,
}

impl Announcement {
    pub fn encoding(&self) -> usize {
        self.encoding
    }
}

/// Vendor side of a session. The encoding index stays private until the
/// vendor is shown a [`MeasurementRecord`].
///
/// ```
/// use obliq_core::encodings::explicit_single_bit_family;
/// use obliq_core::protocol::{measure, honest_basis, DatabaseState, Vendor};
/// use obliq_core::SeededRng;
///
/// let family = explicit_single_bit_family().unwrap();
/// let db = DatabaseState::from_items(vec![0, 1], 1).unwrap();
/// let mut rng = SeededRng::from_seed(7);
/// let (vendor, sent) = Vendor::prepare(&family, &db, &mut rng).unwrap();
/// let record = measure(sent, &honest_basis(&family, 1).unwrap(), &mut rng).unwrap();
/// let announcement = vendor.announce(&record);
/// assert!(announcement.encoding() < 2);
/// ```
///
/// Announcing before measuring does not compile:
///
/// ```compile_fail
/// use obliq_core::encodings::explicit_single_bit_family;
/// use obliq_core::protocol::{DatabaseState, Vendor};
/// use obliq_core::SeededRng;
///
/// let family = explicit_single_bit_family().unwrap();
/// let db = DatabaseState::from_items(vec![0, 1], 1).unwrap();
/// let mut rng = SeededRng::from_seed(7);
/// let (vendor, _sent) = Vendor::prepare(&family, &db, &mut rng).unwrap();
/// let announcement = vendor.announce();
/// ```
///
/// Nor does measuring the same state twice:
///
/// ```compile_fail
/// use obliq_core::encodings::explicit_single_bit_family;
/// use obliq_core::protocol::{measure, honest_basis, DatabaseState, Vendor};
/// use obliq_core::SeededRng;
///
/// let family = explicit_single_bit_family().unwrap();
/// let db = DatabaseState::from_items(vec![0, 1], 1).unwrap();
/// let mut rng = SeededRng::from_seed(7);
/// let (vendor, sent) = Vendor::prepare(&family, &db, &mut rng).unwrap();
/// let basis = honest_basis(&family, 0).unwrap();
/// let first = measure(sent, &basis, &mut rng).unwrap();
/// let second = measure(sent, &basis, &mut rng).unwrap();
/// ```
#[derive(Debug)]
pub struct Vendor<'a> {
    family: &'a EncodingFamily,
    encoding: usize,
}

impl<'a> Vendor<'a> {
    /// Picks the encoding uniformly and prepares `E_i e_d`.
    pub fn prepare(
        family: &'a EncodingFamily,
        db: &DatabaseState,
        rng: &mut SeededRng,
    ) -> Result<(Self, SentState)> {
        let encoding = rng.random_range(0..family.k());
        Self::prepare_with(family, db, encoding)
    }

    pub fn prepare_with(
        family: &'a EncodingFamily,
        db: &DatabaseState,
        encoding: usize,
    ) -> Result<(Self, SentState)> {
        let state = vendor_encode(db, family, encoding)?;
        Ok((Self { family, encoding }, SentState { state }))
    }

    pub fn family(&self) -> &EncodingFamily {
        self.family
    }

    pub fn announce(self, _record: &MeasurementRecord) -> Announcement {
        Announcement {
            encoding: self.encoding,
        }
    }
}

pub fn measure(
    sent: SentState,
    basis: &MeasurementBasis,
    rng: &mut SeededRng,
) -> Result<MeasurementRecord> {
    let outcome = sample_outcome(&sent.state, basis, rng)?;
    Ok(MeasurementRecord {
        outcome,
        label: basis.label(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decoded {
    /// One item, read off an honest outcome.
    Item { item: usize, value: u32 },
    /// The posterior collapsed onto a single configuration.
    Configuration { value: usize },
    /// The posterior sits on one class of `d_0 ⊕ d_1`.
    Parity { value: u32 },
    Nothing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    StateSent {
        seq: u64,
        dim: usize,
        amplitudes: Vec<[f64; 2]>,
    },
    MeasurementCommitted {
        seq: u64,
        basis: BasisLabel,
        outcome: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        matrix: Option<MatrixRepr>,
    },
    EncodingAnnounced {
        seq: u64,
        encoding: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        mask: Option<GfMask>,
    },
    Decoded {
        seq: u64,
        result: Decoded,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub version: u32,
    pub k: usize,
    pub m: usize,
    pub family: FamilyDescriptor,
    pub prior: String,
    pub events: Vec<Event>,
    pub outcome: usize,
    pub announced: usize,
    pub posterior: Vec<f64>,
    pub decoded: Decoded,
    pub seed: u64,
}

impl SessionTranscript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// Recomputes the posterior from the recorded outcome and announcement.
    pub fn recompute_posterior(
        &self,
        family: &EncodingFamily,
        basis: &MeasurementBasis,
    ) -> Result<Vec<f64>> {
        let prior = ProbabilityDistribution::uniform(family.n())?;
        Ok(posterior(basis, family, self.announced, self.outcome, &prior)?.into_vec())
    }
}

/// One full round: encode, send, measure, announce, decode.
pub fn run_session(
    db: &DatabaseState,
    family: &EncodingFamily,
    strategy: &Strategy,
    rng: &mut SeededRng,
) -> Result<SessionTranscript> {
    run_session_inner(db, family, strategy, rng, None)
}

pub(crate) fn run_session_masked(
    db: &DatabaseState,
    family: &EncodingFamily,
    strategy: &Strategy,
    rng: &mut SeededRng,
    mask: GfMask,
) -> Result<SessionTranscript> {
    run_session_inner(db, family, strategy, rng, Some(mask))
}

fn run_session_inner(
    db: &DatabaseState,
    family: &EncodingFamily,
    strategy: &Strategy,
    rng: &mut SeededRng,
    mask: Option<GfMask>,
) -> Result<SessionTranscript> {
    let basis = strategy.basis(family)?;
    let (k, m) = (family.k(), family.m());
    let mut seq = 0u64;
    let mut next = || {
        seq += 1;
        seq - 1
    };
    let mut events = Vec::with_capacity(4);

    let (vendor, sent) = Vendor::prepare(family, db, rng)?;
    events.push(Event::StateSent {
        seq: next(),
        dim: sent.dim(),
        amplitudes: sent.state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
    });

    let record = measure(sent, &basis, rng)?;
    events.push(Event::MeasurementCommitted {
        seq: next(),
        basis: record.label(),
        outcome: record.outcome(),
        matrix: matches!(record.label(), BasisLabel::Custom).then(|| matrix_repr(&basis.matrix())),
    });

    let announced = vendor.announce(&record).encoding();
    events.push(Event::EncodingAnnounced {
        seq: next(),
        encoding: announced,
        mask: mask.clone(),
    });

    let prior = ProbabilityDistribution::uniform(family.n())?;
    let post = posterior(&basis, family, announced, record.outcome(), &prior)?.into_vec();
    let unmask = |v: u32| mask.as_ref().map_or(Ok(v), |r| r.unmask(v));
    let decoded = match strategy {
        Strategy::Honest { choice } => Decoded::Item {
            item: *choice,
            value: unmask(decode_item(record.outcome(), announced, *choice, k, m)?)?,
        },
        _ => decode_from_posterior(&post, k, m, &unmask)?,
    };
    events.push(Event::Decoded {
        seq: next(),
        result: decoded.clone(),
    });

    Ok(SessionTranscript {
        version: TRANSCRIPT_VERSION,
        k,
        m,
        family: family.descriptor(),
        prior: "uniform".into(),
        events,
        outcome: record.outcome(),
        announced,
        posterior: post,
        decoded,
        seed: rng.root(),
    })
}

fn decode_from_posterior(
    post: &[f64],
    k: usize,
    m: usize,
    unmask: &dyn Fn(u32) -> Result<u32>,
) -> Result<Decoded> {
    let support: Vec<usize> = (0..post.len()).filter(|&d| post[d] > POINT_MASS_TOL).collect();
    if let [d] = support[..] {
        let db = DatabaseState::from_index(k, m, d)?;
        let items = db
            .items()
            .iter()
            .map(|&v| unmask(v))
            .collect::<Result<Vec<_>>>()?;
        let value = DatabaseState::from_items(items, m)?.index();
        return Ok(Decoded::Configuration { value });
    }
    if (k, m) == (2, 1) && !support.is_empty() {
        let parity = |d: usize| (d.count_ones() & 1) as u32;
        let first = parity(support[0]);
        if support.iter().all(|&d| parity(d) == first) {
            return Ok(Decoded::Parity { value: first });
        }
    }
    Ok(Decoded::Nothing)
}
