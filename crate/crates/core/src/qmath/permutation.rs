use super::linalg::{ComplexMatrix, C64};
use crate::{Error, Result};

/// Index of the string `d_i … d_{k-1} d_0 … d_{i-1}` given the index of
/// `d_0 … d_{k-1}` (item 0 most significant, `m` bits per item).
pub fn rotate_index(d: usize, k: usize, m: usize, i: usize) -> usize {
    let bits = k * m;
    let shift = (m * i) % bits.max(1);
    if shift == 0 {
        return d;
    }
    let mask = (1usize << bits) - 1;
    ((d << shift) | (d >> (bits - shift))) & mask
}

/// Permutation matrix `P_i` with `P_i e_d = e_{rotate_index(d)}`.
pub fn rotation_permutation(k: usize, m: usize, i: usize) -> Result<ComplexMatrix> {
    if i >= k {
        return Err(Error::IndexOutOfRange {
            what: "rotation",
            index: i,
            limit: k,
        });
    }
    let n = 1usize << (k * m);
    let mut p = ComplexMatrix::zeros(n, n);
    for d in 0..n {
        p[(rotate_index(d, k, m, i), d)] = C64::new(1.0, 0.0);
    }
    Ok(p)
}
