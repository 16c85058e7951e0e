//! The vendor/user session: encode, transmit, measure, announce, decode,
//! plus Bayesian posteriors and information accounting.
//!
//! Limited coherence time is modeled as event order: the user commits a
//! measurement before the vendor reveals which encoding was used.

mod database;
mod inference;
mod measurement;
mod session;

pub use database::DatabaseState;
pub use inference::{
    decode_item, honest_leakage, honest_leakage_factored, info_account, outcome_distribution,
    posterior, sample_outcome, vendor_encode, InfoAccount,
};
pub use measurement::{honest_basis, invert_basis, parity_basis, BasisLabel, MeasurementBasis};
pub(crate) use session::run_session_masked;
pub use session::{
    measure, run_session, Announcement, Decoded, Event, MeasurementRecord, SentState,
    SessionTranscript, Strategy, Vendor, TRANSCRIPT_VERSION,
};
