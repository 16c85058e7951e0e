use rand::RngCore;

use super::{build_family, EncodingFamily, FamilyKind, ItemBasisFamily};
use crate::gf::Gf2m;
use crate::qmath::{
    haar_unitary, identity, linf, tensor_power, ComplexMatrix, SeededRng, C64, UNITARY_TOL,
};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn mat2(entries: [C64; 4]) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &entries)
}

/// `W_2 = (1/√2)[[1, 1], [-1, 1]]`, the Walsh factor.
pub fn w2() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    mat2([c(s, 0.0), c(s, 0.0), c(-s, 0.0), c(s, 0.0)])
}

/// `α_1 = (1/√2)[[1, 1], [1, -1]]`.
pub fn alpha1() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    mat2([c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

/// `α_2 = (1/√2)[[1, 1], [-i, i]]`.
pub fn alpha2() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    mat2([c(s, 0.0), c(s, 0.0), c(0.0, -s), c(0.0, s)])
}

/// The two 4×4 single-bit encoders, entry for entry.
pub fn printed_single_bit_encoders() -> [ComplexMatrix; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let real = |v: [f64; 16]| {
        ComplexMatrix::from_row_slice(4, 4, &v.map(|x| c(x * s, 0.0)))
    };
    [
        real([
            1.0, 1.0, 0.0, 0.0, //
            1.0, -1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 1.0, //
            0.0, 0.0, 1.0, -1.0,
        ]),
        real([
            1.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 1.0, //
            1.0, -1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, -1.0,
        ]),
    ]
}

/// The k = 2, m = 1 family of the single-bit walkthrough: computational
/// basis for the first bit, `|0⟩ ± |1⟩` basis for the second.
pub fn explicit_single_bit_family() -> Result<EncodingFamily> {
    let basis = ItemBasisFamily::new(FamilyKind::Explicit, 1, vec![identity(2), alpha1()])?;
    let family = build_family(basis)?;
    for (i, printed) in printed_single_bit_encoders().iter().enumerate() {
        if linf(&(family.encoder(i)? - printed)) > 1e-15 {
            return Err(Error::CertificationFailed(format!(
                "E_{i} differs from the single-bit table"
            )));
        }
    }
    Ok(family)
}

/// k = 2 family with `A_0 = I`, `A_1 = W_2^{⊗m}`.
pub fn walsh_family(m: usize) -> Result<EncodingFamily> {
    if m == 0 {
        return Err(Error::InvalidParameter("walsh family needs m >= 1".into()));
    }
    let ell = 1usize << m;
    let basis = ItemBasisFamily::new(FamilyKind::Walsh, m, vec![identity(ell), tensor_power(&w2(), m)])?;
    build_family(basis)
}

/// A basis `β_0 … β_{m-1}` of GF(2^m) over GF(2) with `tr(β_i β_j) = δ_ij`.
pub fn self_dual_basis(field: &Gf2m) -> Result<Vec<u32>> {
    let m = field.degree();
    let candidates: Vec<u32> = (1..field.order()).filter(|&b| field.trace(b) == 1).collect();

    fn extend(field: &Gf2m, candidates: &[u32], start: usize, chosen: &mut Vec<u32>, m: usize) -> bool {
        if chosen.len() == m {
            return true;
        }
        for (pos, &b) in candidates.iter().enumerate().skip(start) {
            if chosen.iter().all(|&a| field.trace(field.mul(a, b)) == 0) {
                chosen.push(b);
                if extend(field, candidates, pos + 1, chosen, m) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::with_capacity(m);
    if extend(field, &candidates, 0, &mut chosen, m) {
        Ok(chosen)
    } else {
        Err(Error::CertificationFailed(format!(
            "no self-dual basis found for GF(2^{m})"
        )))
    }
}

/// Mutually unbiased item bases: `A_0 = I` and, for field elements `a`
/// taken in the order `0, 1, 2, …`, `A = D_a H^{⊗m}` where `H = α_1` and
/// `D_a = diag((-i)^{Q_a(x)})` with the Z4-valued quadratic form
/// `Q_a(x) = Σ_{s,t} tr(a β_s β_t) x_s x_t mod 4` in a self-dual basis.
///
/// For `a ≠ b` the binary form of `Q_a - Q_b` is the trace form of `a + b`,
/// which is nondegenerate, so `A_a^† A_b` is Hadamard. `a = 0` gives
/// `α_1^{⊗m}` and `a = 1` gives `α_2^{⊗m}`.
pub fn mub_family(k: usize, m: usize) -> Result<ItemBasisFamily> {
    if m == 0 {
        return Err(Error::InvalidParameter("mub family needs m >= 1".into()));
    }
    if m > 12 {
        return Err(Error::TooLarge(1usize << m.min(usize::BITS as usize - 2)));
    }
    let ell = 1usize << m;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("family needs k >= 2, got {k}")));
    }
    if k > ell + 1 {
        return Err(Error::FamilySizeExceeded { k, m });
    }
    let field = Gf2m::new(m)?;
    let beta = self_dual_basis(&field)?;
    let hadamard = tensor_power(&alpha1(), m);

    let mut labels: Vec<u32> = vec![0, 1];
    labels.extend(2..field.order());
    let mut matrices = vec![identity(ell)];
    for &a in labels.iter().take(k - 1) {
        // form[s][t] = tr(a β_s β_t)
        let form: Vec<Vec<u32>> = (0..m)
            .map(|s| {
                (0..m)
                    .map(|t| field.trace(field.mul(a, field.mul(beta[s], beta[t]))))
                    .collect()
            })
            .collect();
        // Coordinate s is bit (m-1-s) of the index, so that the diagonal
        // case factors as a tensor power with coordinate 0 most significant.
        let phases: Vec<C64> = (0..ell)
            .map(|x| {
                let bit = |s: usize| ((x >> (m - 1 - s)) & 1) as u32;
                let q: u32 = (0..m)
                    .flat_map(|s| (0..m).map(move |t| (s, t)))
                    .map(|(s, t)| form[s][t] * bit(s) * bit(t))
                    .sum::<u32>()
                    % 4;
                [c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)][q as usize]
            })
            .collect();
        let a_mat = ComplexMatrix::from_fn(ell, ell, |r, col| phases[r] * hadamard[(r, col)]);
        matrices.push(a_mat);
    }
    ItemBasisFamily::new(FamilyKind::Mub, m, matrices)
}

/// The k = 3 cyclic generator `((e^{iπ/12}/√2)[[1, 1], [-i, i]])^{⊗m}`.
pub fn cyclic_generator(m: usize) -> ComplexMatrix {
    let phase = C64::from_polar(1.0, std::f64::consts::PI / 12.0);
    tensor_power(&(alpha2() * phase), m)
}

/// `{I, A, A^2}` with `A^3 = I` and `A`, `A^2` Hadamard. Only k = 3 has a
/// known construction.
pub fn cyclic_family(k: usize, m: usize) -> Result<ItemBasisFamily> {
    if k != 3 {
        return Err(Error::NoKnownConstruction(format!(
            "cyclic family for k = {k} (only k = 3 is constructed)"
        )));
    }
    if m == 0 || m > 12 {
        return Err(Error::InvalidParameter(format!("cyclic family needs 1 <= m <= 12, got {m}")));
    }
    let a = cyclic_generator(m);
    let a2 = &a * &a;
    let ell = 1usize << m;
    let family = ItemBasisFamily::new(FamilyKind::Cyclic, m, vec![identity(ell), a, a2])?;
    let target = 1.0 / (ell as f64).sqrt();
    for i in 1..3 {
        if family.matrix(i).iter().any(|z| (z.norm() - target).abs() > UNITARY_TOL) {
            return Err(Error::CertificationFailed(format!("A^{i} is not Hadamard")));
        }
    }
    Ok(family)
}

/// `k` independent Haar unitaries of dimension `2^m`.
pub fn random_family(k: usize, m: usize, rng: &mut SeededRng) -> Result<ItemBasisFamily> {
    if k < 2 || m == 0 || m > 12 {
        return Err(Error::InvalidParameter(format!(
            "random family needs k >= 2 and 1 <= m <= 12 (k = {k}, m = {m})"
        )));
    }
    let seed = rng.root();
    let matrices = sample_unitaries(k, 1usize << m, rng)?;
    Ok(ItemBasisFamily::new(FamilyKind::Random, m, matrices)?.with_seed(seed))
}

fn sample_unitaries<R: RngCore>(k: usize, dim: usize, rng: &mut R) -> Result<Vec<ComplexMatrix>> {
    (0..k).map(|_| haar_unitary(dim, rng)).collect()
}

/// `A_i = B_i^{⊗(m / log2 r)}` for independent Haar `r × r` unitaries `B_i`.
pub fn tensorized_family(k: usize, m: usize, r: usize, rng: &mut SeededRng) -> Result<ItemBasisFamily> {
    if !r.is_power_of_two() || r < 2 {
        return Err(Error::InvalidParameter(format!("r = {r} is not a power of two >= 2")));
    }
    let log_r = r.trailing_zeros() as usize;
    if m == 0 || m % log_r != 0 {
        return Err(Error::InvalidParameter(format!("log2(r) = {log_r} does not divide m = {m}")));
    }
    if k < 2 || m > 12 {
        return Err(Error::InvalidParameter(format!(
            "tensorized family needs k >= 2 and m <= 12 (k = {k}, m = {m})"
        )));
    }
    let seed = rng.root();
    let factors = sample_unitaries(k, r, rng)?;
    let matrices = factors.iter().map(|b| tensor_power(b, m / log_r)).collect();
    Ok(ItemBasisFamily::new(FamilyKind::Tensorized, m, matrices)?
        .with_seed(seed)
        .with_tensor_factor(r))
}
