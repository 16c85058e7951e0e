//! Classical simulator and analysis toolkit for quantum private database
//! queries (1-of-2 and 1-of-k oblivious transfer) under limited coherence
//! time.
//!
//! The vendor encodes a database of `k` items of `m` bits each into a state
//! of dimension `n = 2^(km)` using one of `k` secret encodings. The user must
//! measure before the encoding is announced, which caps what can be learned.
//!
//! * [`qmath`]: dense complex linear algebra, entropies, Haar sampling,
//!   item-rotation permutations and seeded randomness.
//! * [`encodings`]: certified encoding families (explicit, Walsh, MUB,
//!   cyclic, Haar-random, tensorized).
//! * [`protocol`]: encode, measure, announce, decode; posteriors and
//!   information accounting; session transcripts.
//! * [`povm`]: generalized measurements.
//! * [`hardening`]: XOR share splitting and GF(2^m) affine masking.
//! * [`analysis`]: bound audits, leakage optimization and scans.

pub mod analysis;
pub mod encodings;
mod error;
pub mod gf;
pub mod hardening;
pub mod povm;
pub mod protocol;
pub mod qmath;

pub use error::{Error, Result};
pub use qmath::{ComplexMatrix, ProbabilityDistribution, QuantumState, SeededRng, C64};
