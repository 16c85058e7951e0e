use nalgebra::{DMatrix, DVector};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::{ComplexMatrix, C64};
use super::state::QuantumState;
use crate::{Error, Result};

/// Deterministic random source identified by `(root seed, stream id)`.
///
/// Independent tasks take their own stream through [`SeededRng::substream`]
/// so results do not depend on scheduling.
#[derive(Debug, Clone)]
pub struct SeededRng {
    root: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl SeededRng {
    pub fn new(root: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(root);
        inner.set_stream(stream);
        Self {
            root,
            stream,
            inner,
        }
    }

    pub fn from_seed(root: u64) -> Self {
        Self::new(root, 0)
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Fresh generator for child task `id`; independent of how much of this
    /// stream has been consumed.
    pub fn substream(&self, id: u64) -> SeededRng {
        SeededRng::new(self.root, splitmix64(self.stream ^ splitmix64(id)))
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

fn complex_gaussian<R: RngCore + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

const GS_BLOCK: usize = 32;

/// Haar-distributed unitary: the `Q` factor, with positive real `diag(R)`,
/// of a complex Ginibre matrix. Computed by block Gram-Schmidt with one
/// re-orthogonalization pass, on split real and imaginary parts so the bulk
/// of the work runs through real matrix products.
pub fn haar_unitary<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::InvalidParameter("Haar unitary of dimension 0".into()));
    }
    let (re, im) = ginibre(dim, rng);
    orthonormalize(re, im)
}

fn ginibre<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> (DMatrix<f64>, DMatrix<f64>) {
    let z: Vec<C64> = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    (
        DMatrix::from_iterator(dim, dim, z.iter().map(|c| c.re)),
        DMatrix::from_iterator(dim, dim, z.iter().map(|c| c.im)),
    )
}

/// `(column p, column c)` of a column-major buffer, `p < c`.
fn column_pair(data: &mut [f64], dim: usize, p: usize, c: usize) -> (&[f64], &mut [f64]) {
    let (head, tail) = data.split_at_mut(c * dim);
    (&head[p * dim..(p + 1) * dim], &mut tail[..dim])
}

fn orthonormalize(mut re: DMatrix<f64>, mut im: DMatrix<f64>) -> Result<ComplexMatrix> {
    let dim = re.nrows();
    let mut c0 = 0;
    while c0 < dim {
        let b = GS_BLOCK.min(dim - c0);
        for _ in 0..2 {
            if c0 == 0 {
                break;
            }
            let (qr_t, qi_t) = (re.columns(0, c0).transpose(), im.columns(0, c0).transpose());
            let (vr, vi) = (re.columns(c0, b).into_owned(), im.columns(c0, b).into_owned());
            let wr = &qr_t * &vr + &qi_t * &vi;
            let wi = &qr_t * &vi - &qi_t * &vr;
            let (qr, qi) = (re.columns(0, c0), im.columns(0, c0));
            let nr = &vr - (qr * &wr - qi * &wi);
            let ni = &vi - (qr * &wi + qi * &wr);
            re.columns_mut(c0, b).copy_from(&nr);
            im.columns_mut(c0, b).copy_from(&ni);
        }
        for c in c0..c0 + b {
            for _ in 0..2 {
                for p in c0..c {
                    let (pr, cr) = column_pair(re.as_mut_slice(), dim, p, c);
                    let (pi, ci) = column_pair(im.as_mut_slice(), dim, p, c);
                    let (mut dr, mut di) = (0.0, 0.0);
                    for r in 0..dim {
                        dr += pr[r] * cr[r] + pi[r] * ci[r];
                        di += pr[r] * ci[r] - pi[r] * cr[r];
                    }
                    for r in 0..dim {
                        cr[r] -= dr * pr[r] - di * pi[r];
                        ci[r] -= dr * pi[r] + di * pr[r];
                    }
                }
            }
            let norm = (re.column(c).norm_squared() + im.column(c).norm_squared()).sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::NonFinite);
            }
            re.column_mut(c).unscale_mut(norm);
            im.column_mut(c).unscale_mut(norm);
        }
        c0 += b;
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| C64::new(re[(r, c)], im[(r, c)])))
}

/// Uniformly random unit vector.
pub fn random_state<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Result<QuantumState> {
    if dim == 0 {
        return Err(Error::InvalidParameter("state of dimension 0".into()));
    }
    QuantumState::normalized(DVector::from_fn(dim, |_, _| complex_gaussian(rng)))
}
