use crate::{Error, Result};

/// `k` items of `m` bits; item 0 is the most significant block of the
/// configuration index `d = Σ d_i 2^{m(k-1-i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DatabaseState {
    m: usize,
    items: Vec<u32>,
    index: usize,
}

impl DatabaseState {
    pub fn from_items(items: Vec<u32>, m: usize) -> Result<Self> {
        let k = items.len();
        if k == 0 || m == 0 || m > 32 || k * m >= usize::BITS as usize - 1 {
            return Err(Error::InvalidParameter(format!(
                "unsupported database shape k = {k}, m = {m}"
            )));
        }
        let mut index = 0usize;
        for (t, &v) in items.iter().enumerate() {
            if (v as u64) >> m != 0 {
                return Err(Error::InvalidParameter(format!(
                    "item {t} value {v} does not fit in {m} bits"
                )));
            }
            index = (index << m) | v as usize;
        }
        Ok(Self { m, items, index })
    }

    pub fn from_index(k: usize, m: usize, index: usize) -> Result<Self> {
        if k == 0 || m == 0 || m > 32 || k * m >= usize::BITS as usize - 1 {
            return Err(Error::InvalidParameter(format!(
                "unsupported database shape k = {k}, m = {m}"
            )));
        }
        if index >> (k * m) != 0 {
            return Err(Error::IndexOutOfRange {
                what: "configuration",
                index,
                limit: 1 << (k * m),
            });
        }
        let mask = (1usize << m) - 1;
        let items = (0..k)
            .map(|t| ((index >> (m * (k - 1 - t))) & mask) as u32)
            .collect();
        Ok(Self { m, items, index })
    }

    pub fn k(&self) -> usize {
        self.items.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn items(&self) -> &[u32] {
        &self.items
    }

    pub fn item(&self, t: usize) -> u32 {
        self.items[t]
    }

    pub fn index(&self) -> usize {
        self.index
    }
}
