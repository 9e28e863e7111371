use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Largest size accepted by [`perm_leq_oracle`].
pub const ORACLE_MAX_N: usize = 7;

/// A permutation of `{0, …, n-1}` stored in one-line form. Displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The order-reversing permutation, the largest element of the order.
    pub fn reverse(n: usize) -> Self {
        Permutation((0..n).rev().collect())
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Invalid(format!("not a permutation: {images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    /// From 1-based one-line notation, e.g. `[5, 4, 3, 6, 2, 1]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Invalid("one-line notation is 1-based".into()));
        }
        Permutation::from_zero_based(images.iter().map(|v| v - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() > 9 { " " } else { "" };
        let parts: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(sep))
    }
}

/// Whether `rho ≤ sigma`: `sigma` is reachable from `rho` by repeatedly
/// swapping two positions `i < j` holding values in increasing order.
/// Exhaustive search, limited to `n ≤ 7`.
pub fn perm_leq_oracle(rho: &Permutation, sigma: &Permutation) -> Result<bool> {
    let n = rho.len();
    if sigma.len() != n {
        return Err(Error::Invalid(format!("sizes differ: {n} vs {}", sigma.len())));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge(format!("permutation oracle supports n <= {ORACLE_MAX_N}, got {n}")));
    }
    let target_inv = sigma.inversions();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(rho.0.clone());
    queue.push_back(rho.0.clone());
    while let Some(p) = queue.pop_front() {
        if p == sigma.0 {
            return Ok(true);
        }
        for i in 0..n {
            for j in i + 1..n {
                if p[i] < p[j] {
                    let mut q = p.clone();
                    q.swap(i, j);
                    if Permutation(q.clone()).inversions() <= target_inv && seen.insert(q.clone()) {
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    Ok(false)
}
