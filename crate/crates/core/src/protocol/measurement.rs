use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::encodings::EncodingFamily;
use crate::qmath::{unitary_deviation, ComplexMatrix, KronOperator, C64, UNITARY_TOL};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum BasisLabel {
    /// `M_j = A_j^† ⊗ … ⊗ A_j^†`, reveals item `j`.
    Honest(usize),
    /// `M = E_i^†`, a guess that the vendor used encoding `i`.
    Invert(usize),
    Parity,
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
enum Operator {
    Dense(ComplexMatrix),
    Kron(KronOperator),
}

/// Projective measurement: outcome `j` has probability `|(M e)_j|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    op: Operator,
    label: BasisLabel,
}

impl MeasurementBasis {
    pub fn new(matrix: ComplexMatrix, label: BasisLabel) -> Result<Self> {
        let deviation = unitary_deviation(&matrix)?;
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            op: Operator::Dense(matrix),
            label,
        })
    }

    pub fn custom(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, BasisLabel::Custom)
    }

    pub fn from_kron(op: KronOperator, label: BasisLabel) -> Result<Self> {
        for f in op.factors() {
            let deviation = unitary_deviation(f)?;
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self {
            op: Operator::Kron(op),
            label,
        })
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        match &self.op {
            Operator::Dense(m) => m.nrows(),
            Operator::Kron(k) => k.dim(),
        }
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        match &self.op {
            Operator::Dense(m) => Ok(m * v),
            Operator::Kron(k) => k.apply(v),
        }
    }

    /// Row `j` of `M`.
    pub fn row(&self, j: usize) -> Result<Vec<C64>> {
        let n = self.dim();
        if j >= n {
            return Err(Error::IndexOutOfRange {
                what: "outcome",
                index: j,
                limit: n,
            });
        }
        match &self.op {
            Operator::Dense(m) => Ok(m.row(j).iter().copied().collect()),
            Operator::Kron(k) => {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[j] = C64::new(1.0, 0.0);
                k.apply_row(&e)
            }
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        match &self.op {
            Operator::Dense(m) => m.clone(),
            Operator::Kron(k) => k.dense(),
        }
    }
}

/// `M_j = (A_j^†)^{⊗k}`.
pub fn honest_basis(family: &EncodingFamily, j: usize) -> Result<MeasurementBasis> {
    let k = family.k();
    if j >= k {
        return Err(Error::IndexOutOfRange {
            what: "choice",
            index: j,
            limit: k,
        });
    }
    let factor = family.basis().matrix(j).adjoint();
    MeasurementBasis::from_kron(KronOperator::new(vec![factor; k])?, BasisLabel::Honest(j))
}

/// `M = E_i^†`: reveals everything if the vendor used encoding `i`.
pub fn invert_basis(family: &EncodingFamily, i: usize) -> Result<MeasurementBasis> {
    MeasurementBasis::new(family.encoder(i)?.adjoint(), BasisLabel::Invert(i))
}

/// Rows `(1,1,1,-1)/2`, `(1,1,-1,1)/2`, `(1,-1,0,0)/√2`, `(0,0,1,1)/√2`.
///
/// Outcomes 0 and 1 leave a posterior on a single parity class of
/// `d_0 ⊕ d_1` for both single-bit encodings. Only defined for k = 2, m = 1.
pub fn parity_basis(k: usize, m: usize) -> Result<MeasurementBasis> {
    if (k, m) != (2, 1) {
        return Err(Error::InvalidParameter(format!(
            "parity basis is defined for k = 2, m = 1 only (got k = {k}, m = {m})"
        )));
    }
    let h = 0.5;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rows = [
        [h, h, h, -h],
        [h, h, -h, h],
        [s, -s, 0.0, 0.0],
        [0.0, 0.0, s, s],
    ];
    let matrix = ComplexMatrix::from_fn(4, 4, |r, c| C64::new(rows[r][c], 0.0));
    MeasurementBasis::new(matrix, BasisLabel::Parity)
}
