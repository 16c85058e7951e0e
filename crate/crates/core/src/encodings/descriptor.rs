use serde::{Deserialize, Serialize};

use super::{FamilyKind, ItemBasisFamily};
use crate::qmath::ComplexMatrix;

/// Row-major matrix with complex entries written as `[re, im]`.
pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

/// JSON form of a family. Item matrices are embedded only for kinds that
/// cannot be rebuilt from parameters alone (`explicit`, `random`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub k: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrices: Option<Vec<MatrixRepr>>,
}

pub fn matrix_repr(m: &ComplexMatrix) -> MatrixRepr {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

impl FamilyDescriptor {
    pub fn of(basis: &ItemBasisFamily) -> Self {
        let matrices = matches!(basis.kind(), FamilyKind::Explicit | FamilyKind::Random)
            .then(|| basis.matrices().iter().map(matrix_repr).collect());
        Self {
            kind: basis.kind(),
            k: basis.k(),
            m: basis.m(),
            seed: basis.seed(),
            r: basis.tensor_factor(),
            matrices,
        }
    }
}
