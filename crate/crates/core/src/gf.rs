//! Arithmetic in GF(2^m), 1 ≤ m ≤ 16.
//!
//! Elements are polynomials over GF(2) packed into a `u32`, bit `t` holding
//! the coefficient of `x^t`. Each degree uses a fixed modulus: the
//! lexicographically least irreducible polynomial of that degree.

use std::sync::OnceLock;

use crate::{Error, Result};

pub const MAX_DEGREE: usize = 16;

/// Carry-less product of two polynomials.
pub fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let wide = a as u64;
    for t in 0..32 {
        if (b >> t) & 1 == 1 {
            acc ^= wide << t;
        }
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `modulus` (polynomial division over GF(2)).
pub fn poly_rem(mut a: u64, modulus: u64) -> u64 {
    let dm = degree(modulus);
    while a != 0 && degree(a) >= dm {
        a ^= modulus << (degree(a) - dm);
    }
    a
}

/// Irreducibility by trial division with every polynomial of degree
/// `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let d = degree(poly as u64);
    if d < 1 {
        return false;
    }
    let half = d / 2;
    (2u64..(1u64 << (half + 1))).all(|div| poly_rem(poly as u64, div) != 0)
}

fn moduli() -> &'static [u32; MAX_DEGREE + 1] {
    static TABLE: OnceLock<[u32; MAX_DEGREE + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u32; MAX_DEGREE + 1];
        for (m, slot) in table.iter_mut().enumerate().skip(1) {
            let start = 1u32 << m;
            *slot = (start..start << 1)
                .find(|&p| is_irreducible(p))
                .expect("an irreducible polynomial exists in every degree");
        }
        table
    })
}

/// The fixed modulus for degree `m`, e.g. `x^3 + x + 1` (`0b1011`) for m = 3.
pub fn modulus(m: usize) -> Result<u32> {
    if m == 0 || m > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "field degree {m} outside 1..={MAX_DEGREE}"
        )));
    }
    Ok(moduli()[m])
}

/// The field GF(2^m) with its built-in modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf2m {
    m: usize,
    modulus: u32,
}

impl Gf2m {
    pub fn new(m: usize) -> Result<Self> {
        Ok(Self {
            m,
            modulus: modulus(m)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1u32 << self.m
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.order() {
            Ok(a)
        } else {
            Err(Error::InvalidFieldElement { m: self.m, value: a })
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        poly_rem(clmul(a, b), self.modulus as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(Error::InvalidParameter("zero has no inverse".into()));
        }
        // Invariant: r0 ≡ s0·a, r1 ≡ s1·a (mod modulus).
        let (mut r0, mut r1) = (self.modulus as u64, a as u64);
        let (mut s0, mut s1) = (0u64, 1u64);
        while r1 != 0 {
            let mut q = 0u64;
            let mut r = r0;
            let d1 = degree(r1);
            while r != 0 && degree(r) >= d1 {
                let shift = degree(r) - d1;
                q ^= 1 << shift;
                r ^= r1 << shift;
            }
            let s = s0 ^ clmul(q as u32, s1 as u32);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        debug_assert_eq!(r0, 1);
        Ok(poly_rem(s0, self.modulus as u64) as u32)
    }

    /// Absolute trace `a + a^2 + … + a^(2^(m-1))`, an element of GF(2).
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.m {
            acc ^= x;
            x = self.mul(x, x);
        }
        debug_assert!(acc <= 1);
        acc
    }
}
