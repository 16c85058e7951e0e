use nalgebra::DVector;

use super::linalg::{ensure_square, tensor_product, ComplexMatrix, C64};
use crate::{Error, Result};

/// A linear operator stored as a Kronecker product of square factors,
/// applied mode by mode without materializing the full matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KronOperator {
    factors: Vec<ComplexMatrix>,
    dim: usize,
}

impl KronOperator {
    pub fn new(factors: Vec<ComplexMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("empty Kronecker product".into()));
        }
        let mut dim = 1usize;
        for f in &factors {
            dim = dim
                .checked_mul(ensure_square(f)?)
                .ok_or(Error::TooLarge(usize::MAX))?;
        }
        Ok(Self { factors, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    pub fn adjoint(&self) -> KronOperator {
        KronOperator {
            factors: self.factors.iter().map(|f| f.adjoint()).collect(),
            dim: self.dim,
        }
    }

    pub fn dense(&self) -> ComplexMatrix {
        let mut it = self.factors.iter();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, f| tensor_product(&acc, f))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: len,
            });
        }
        Ok(())
    }

    /// `(F_0 ⊗ … ⊗ F_{k-1}) · v`.
    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_len(v.len())?;
        let mut data: Vec<C64> = v.iter().copied().collect();
        self.contract(&mut data, false);
        Ok(DVector::from_vec(data))
    }

    /// `vᵀ · (F_0 ⊗ … ⊗ F_{k-1})`, i.e. the row vector times the operator.
    pub fn apply_row(&self, row: &[C64]) -> Result<Vec<C64>> {
        self.check_len(row.len())?;
        let mut data = row.to_vec();
        self.contract(&mut data, true);
        Ok(data)
    }

    /// In-place row application on a caller-owned buffer.
    pub fn apply_row_in_place(&self, data: &mut Vec<C64>) -> Result<()> {
        self.check_len(data.len())?;
        self.contract(data, true);
        Ok(())
    }

    fn contract(&self, data: &mut Vec<C64>, row_side: bool) {
        let mut scratch = vec![C64::new(0.0, 0.0); data.len()];
        let mut stride = self.dim;
        for f in &self.factors {
            let d = f.nrows();
            stride /= d;
            let block = d * stride;
            for (src, dst) in data.chunks(block).zip(scratch.chunks_mut(block)) {
                for out in 0..d {
                    let dst_row = &mut dst[out * stride..(out + 1) * stride];
                    dst_row.fill(C64::new(0.0, 0.0));
                    for inp in 0..d {
                        let w = if row_side { f[(inp, out)] } else { f[(out, inp)] };
                        if w == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let src_row = &src[inp * stride..(inp + 1) * stride];
                        for (o, s) in dst_row.iter_mut().zip(src_row) {
                            *o += w * s;
                        }
                    }
                }
            }
            std::mem::swap(data, &mut scratch);
        }
    }
}
