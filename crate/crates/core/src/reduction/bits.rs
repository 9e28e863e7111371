//! Bit-packed F₂ column vectors.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitColumn {
    len: usize,
    words: Vec<u64>,
}

impl BitColumn {
    pub fn zeros(len: usize) -> Self {
        BitColumn { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut c = BitColumn::zeros(len);
        for &i in ones {
            c.flip(i);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest nonzero entry, i.e. the largest set index.
    pub fn low(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &BitColumn) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank over F₂ of a set of columns.
pub fn rank(columns: &[BitColumn]) -> usize {
    let mut pivots: Vec<Option<BitColumn>> = Vec::new();
    let mut rank = 0;
    for col in columns {
        let mut c = col.clone();
        if pivots.len() < c.len() {
            pivots.resize(c.len(), None);
        }
        while let Some(l) = c.low() {
            match &pivots[l] {
                Some(p) => c.xor_assign(p),
                None => {
                    pivots[l] = Some(c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}
