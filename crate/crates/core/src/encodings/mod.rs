//! Encoding families.
//!
//! An [`ItemBasisFamily`] holds `k` unitary `2^m × 2^m` matrices `A_i`.
//! [`build_family`] lifts it to `k` encoders on the full configuration space:
//! `E_i = C_i P_i`, where `C_i = A_i ⊗ A_{i+1} ⊗ … ⊗ A_{i-1}` (indices mod k)
//! and `P_i` rotates the item string left by `i` items.
//!
//! Every family is certified when constructed; no uncertified family object
//! can be observed.

mod constructions;
mod descriptor;

pub use constructions::{
    alpha1, alpha2, cyclic_family, cyclic_generator, explicit_single_bit_family, mub_family,
    printed_single_bit_encoders, random_family, self_dual_basis, tensorized_family, w2,
    walsh_family,
};
pub use descriptor::{matrix_repr, FamilyDescriptor, MatrixRepr};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::qmath::{
    identity, is_unitary, linf, rotate_index, rotation_permutation, unitary_deviation,
    ComplexMatrix, KronOperator, QuantumState, C64, UNITARY_TOL,
};
use crate::{Error, Result};

/// Largest configuration space for which dense `n × n` matrices are built.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Walsh,
    Mub,
    Cyclic,
    Random,
    Tensorized,
    Explicit,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Walsh => "walsh",
            FamilyKind::Mub => "mub",
            FamilyKind::Cyclic => "cyclic",
            FamilyKind::Random => "random",
            FamilyKind::Tensorized => "tensorized",
            FamilyKind::Explicit => "explicit",
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "walsh" => FamilyKind::Walsh,
            "mub" => FamilyKind::Mub,
            "cyclic" => FamilyKind::Cyclic,
            "random" => FamilyKind::Random,
            "tensorized" => FamilyKind::Tensorized,
            "explicit" => FamilyKind::Explicit,
            other => return Err(Error::InvalidParameter(format!("unknown family kind {other}"))),
        })
    }
}

/// `k` certified unitary item matrices of size `2^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemBasisFamily {
    k: usize,
    m: usize,
    matrices: Vec<ComplexMatrix>,
    kind: FamilyKind,
    seed: Option<u64>,
    tensor_factor: Option<usize>,
    max_pairwise_overlap: f64,
}

impl ItemBasisFamily {
    /// Certifies unitarity of every matrix, plus the kind-specific property
    /// (pairwise Hadamard for `mub`, `A_i = A_1^i` and `A_1^k = I` for
    /// `cyclic`).
    pub fn new(kind: FamilyKind, m: usize, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let k = matrices.len();
        if k < 2 {
            return Err(Error::InvalidParameter(format!("family needs k >= 2, got {k}")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("items need m >= 1 bits".into()));
        }
        if m >= usize::BITS as usize - 1 {
            return Err(Error::TooLarge(m));
        }
        let ell = 1usize << m;
        for (i, a) in matrices.iter().enumerate() {
            if a.nrows() != ell || a.ncols() != ell {
                return Err(Error::DimensionMismatch {
                    expected: ell,
                    actual: a.nrows(),
                });
            }
            let deviation = unitary_deviation(a)?;
            if deviation > UNITARY_TOL {
                return Err(Error::CertificationFailed(format!(
                    "A_{i} not unitary (deviation {deviation:e})"
                )));
            }
        }
        let mut max_pairwise_overlap = 0.0f64;
        let target = 1.0 / (ell as f64).sqrt();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let prod = matrices[i].adjoint() * &matrices[j];
                max_pairwise_overlap = max_pairwise_overlap.max(linf(&prod));
                if kind == FamilyKind::Mub
                    && prod.iter().any(|z| (z.norm() - target).abs() > UNITARY_TOL)
                {
                    return Err(Error::CertificationFailed(format!(
                        "A_{i}^† A_{j} is not Hadamard"
                    )));
                }
            }
        }
        if kind == FamilyKind::Cyclic {
            let gen = &matrices[1];
            let mut power = identity(ell);
            for (i, a) in matrices.iter().enumerate() {
                if linf(&(a - &power)) > UNITARY_TOL {
                    return Err(Error::CertificationFailed(format!("A_{i} != A_1^{i}")));
                }
                power = &power * gen;
            }
            if linf(&(power - identity(ell))) > UNITARY_TOL {
                return Err(Error::CertificationFailed(format!("A_1^{k} != I")));
            }
        }
        Ok(Self {
            k,
            m,
            matrices,
            kind,
            seed: None,
            tensor_factor: None,
            max_pairwise_overlap,
        })
    }

    pub(crate) fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub(crate) fn with_tensor_factor(mut self, r: usize) -> Self {
        self.tensor_factor = Some(r);
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Factor size `r` for tensorized families.
    pub fn tensor_factor(&self) -> Option<usize> {
        self.tensor_factor
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &ComplexMatrix {
        &self.matrices[i]
    }

    /// `max_{i≠j} L∞(A_i^† A_j)`.
    pub fn max_pairwise_overlap(&self) -> f64 {
        self.max_pairwise_overlap
    }

    /// Whether every `A_i^† A_j` (i ≠ j) is Hadamard within tolerance.
    pub fn is_pairwise_hadamard(&self) -> bool {
        let ell = 1usize << self.m;
        (self.max_pairwise_overlap - 1.0 / (ell as f64).sqrt()).abs() <= UNITARY_TOL
    }
}

/// Encoders `E_0 … E_{k-1}` on the `2^(km)`-dimensional configuration space.
///
/// The encoders are kept in factored form; [`EncodingFamily::encoder`]
/// materializes a dense matrix on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingFamily {
    basis: ItemBasisFamily,
    n: usize,
    circuits: Vec<KronOperator>,
}

/// Lifts an item family to the full configuration space.
pub fn build_family(basis: ItemBasisFamily) -> Result<EncodingFamily> {
    let (k, m) = (basis.k, basis.m);
    let bits = k * m;
    if bits >= usize::BITS as usize - 1 {
        return Err(Error::TooLarge(bits));
    }
    for (i, a) in basis.matrices.iter().enumerate() {
        if !is_unitary(a, UNITARY_TOL)? {
            return Err(Error::CertificationFailed(format!("A_{i} not unitary")));
        }
    }
    let circuits = (0..k)
        .map(|i| KronOperator::new((0..k).map(|t| basis.matrices[(i + t) % k].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    let family = EncodingFamily {
        n: 1usize << bits,
        basis,
        circuits,
    };
    if family.n <= 256 {
        for i in 0..k {
            let deviation = unitary_deviation(&family.encoder(i)?)?;
            if deviation > UNITARY_TOL {
                return Err(Error::CertificationFailed(format!(
                    "E_{i} not unitary (deviation {deviation:e})"
                )));
            }
        }
    }
    Ok(family)
}

impl EncodingFamily {
    pub fn k(&self) -> usize {
        self.basis.k
    }

    pub fn m(&self) -> usize {
        self.basis.m
    }

    /// Number of database configurations `n = 2^(km)`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FamilyKind {
        self.basis.kind
    }

    pub fn basis(&self) -> &ItemBasisFamily {
        &self.basis
    }

    fn check_encoding(&self, i: usize) -> Result<()> {
        if i >= self.k() {
            return Err(Error::IndexOutOfRange {
                what: "encoding",
                index: i,
                limit: self.k(),
            });
        }
        Ok(())
    }

    /// `C_i` in factored form.
    pub fn circuit(&self, i: usize) -> Result<&KronOperator> {
        self.check_encoding(i)?;
        Ok(&self.circuits[i])
    }

    /// Dense `E_i = C_i P_i`.
    pub fn encoder(&self, i: usize) -> Result<ComplexMatrix> {
        self.check_encoding(i)?;
        if self.n > MAX_DENSE_DIM {
            return Err(Error::TooLarge(self.n));
        }
        let c = self.circuits[i].dense();
        let p = rotation_permutation(self.k(), self.m(), i)?;
        Ok(c * p)
    }

    /// Column `d` of `E_i`: the state sent for configuration `d`.
    pub fn encode_column(&self, i: usize, d: usize) -> Result<QuantumState> {
        self.check_encoding(i)?;
        if d >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "configuration",
                index: d,
                limit: self.n,
            });
        }
        let c = rotate_index(d, self.k(), self.m(), i);
        let mut basis = DVector::zeros(self.n);
        basis[c] = C64::new(1.0, 0.0);
        QuantumState::new(self.circuits[i].apply(&basis)?)
    }

    /// Row vector times `E_i`: entry `d` is `(v C_i)_{rotate(d)}`.
    pub fn row_times_encoder(&self, row: &[C64], i: usize) -> Result<Vec<C64>> {
        self.check_encoding(i)?;
        let vc = self.circuits[i].apply_row(row)?;
        let (k, m) = (self.k(), self.m());
        Ok((0..self.n).map(|d| vc[rotate_index(d, k, m, i)]).collect())
    }

    /// `L∞(E_i^† E_j)`, computed factor-wise (permutations and Kronecker
    /// structure make it the product of item-level overlaps).
    pub fn pair_overlap(&self, i: usize, j: usize) -> Result<f64> {
        self.check_encoding(i)?;
        self.check_encoding(j)?;
        let k = self.k();
        Ok((0..k)
            .map(|t| {
                let a = self.basis.matrix((i + t) % k);
                let b = self.basis.matrix((j + t) % k);
                linf(&(a.adjoint() * b))
            })
            .product())
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor::of(&self.basis)
    }
}
