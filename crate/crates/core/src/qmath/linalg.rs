use nalgebra::{Complex, DMatrix, DVector};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Max-entry tolerance for unitarity and Hadamard certification.
pub const UNITARY_TOL: f64 = 1e-9;

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Kronecker product `a ⊗ b`; `a` selects the most significant index digit.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// `times`-fold tensor power; the zeroth power is the 1x1 identity.
pub fn tensor_power(a: &ComplexMatrix, times: usize) -> ComplexMatrix {
    (0..times).fold(identity(1), |acc, _| tensor_product(&acc, a))
}

/// Largest entry magnitude of `m†m - I`.
pub fn unitary_deviation(m: &ComplexMatrix) -> Result<f64> {
    let n = ensure_square(m)?;
    let gram = m.adjoint() * m;
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((gram[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(unitary_deviation(m)? <= tol)
}

/// Unitary with every entry of magnitude `1/sqrt(n)` (complex Hadamard).
pub fn is_hadamard(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let n = ensure_square(m)?;
    if !is_unitary(m, tol)? {
        return Ok(false);
    }
    let target = 1.0 / (n as f64).sqrt();
    Ok(m.iter().all(|z| (z.norm() - target).abs() <= tol))
}

/// Largest entry magnitude.
pub fn linf(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// `A^† B` through four real matrix products.
pub fn adjoint_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    let ar_t = a.map(|z| z.re).transpose();
    let ai_t = a.map(|z| z.im).transpose();
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar_t * &br + &ai_t * &bi;
    let im = &ar_t * &bi - &ai_t * &br;
    Ok(ComplexMatrix::from_fn(re.nrows(), re.ncols(), |r, c| C64::new(re[(r, c)], im[(r, c)])))
}

/// `c(A, B) = L∞(A·B)`, the product taken exactly as given.
pub fn linf_overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let n = ensure_square(a)?;
    let nb = ensure_square(b)?;
    if n != nb {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: nb,
        });
    }
    Ok(linf(&(a * b)))
}

pub fn matrix_power(a: &ComplexMatrix, power: usize) -> Result<ComplexMatrix> {
    let n = ensure_square(a)?;
    let mut out = identity(n);
    for _ in 0..power {
        out = &out * a;
    }
    Ok(out)
}

/// Eigen-decomposition of the Hermitian part of `h`: ascending eigenvalues
/// and the matching unitary of eigenvectors (as columns).
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    ensure_square(h)?;
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(h.nrows(), h.ncols(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok((values, vectors))
}

pub fn min_hermitian_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?.0.first().copied().unwrap_or(0.0))
}

fn reassemble(vectors: &ComplexMatrix, diag: impl Fn(usize) -> C64) -> ComplexMatrix {
    let n = vectors.nrows();
    let d = DVector::from_fn(n, |i, _| diag(i));
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, c)] * d[c]);
    scaled * vectors.adjoint()
}

/// `exp(i·H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    Ok(reassemble(&vectors, |i| C64::from_polar(1.0, values[i])))
}

/// Hermitian `H` with `exp(i·H) = U` and spectrum in `(-π, π]`.
pub fn unitary_log(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(u)?;
    let (q, t) = u.clone().schur().unpack();
    let angles: Vec<f64> = (0..t.nrows()).map(|i| t[(i, i)].arg()).collect();
    let h = reassemble(&q, |i| C64::new(angles[i], 0.0));
    Ok((&h + h.adjoint()) * C64::new(0.5, 0.0))
}

/// `S^{-1/2}` for a positive definite Hermitian `S`.
pub fn inverse_sqrt_psd(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(s)?;
    if values.first().is_some_and(|&v| v <= 0.0) {
        return Err(Error::InvalidParameter(
            "matrix is not positive definite".into(),
        ));
    }
    Ok(reassemble(&vectors, |i| C64::new(values[i].powf(-0.5), 0.0)))
}
