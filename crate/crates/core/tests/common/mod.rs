//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsrank::reduction::BarMorphism;
use wsrank::{Bar, Barcode, Component, Contour, Exponent};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_bars` bars with endpoints on a quarter grid in `[0, 10]`, each
/// infinite with probability `infinite_prob`.
pub fn random_barcode<R: Rng>(rng: &mut R, max_bars: usize, infinite_prob: f64) -> Barcode {
    let n = rng.random_range(0..=max_bars);
    (0..n)
        .map(|_| {
            let a = rng.random_range(0..40) as f64 / 4.0;
            if rng.random_bool(infinite_prob) {
                Bar::infinite(a).unwrap()
            } else {
                let len = rng.random_range(1..=40) as f64 / 4.0;
                Bar::new(a, a + len).unwrap()
            }
        })
        .collect()
}

pub fn random_gmm<R: Rng>(rng: &mut R) -> Contour {
    let k = rng.random_range(1..=3);
    let comps = (0..k)
        .map(|_| Component {
            mu: rng.random_range(0.0..20.0),
            sigma: rng.random_range(0.3..5.0),
            lambda: rng.random_range(0.1..3.0),
        })
        .collect();
    Contour::gaussian_mixture(rng.random_range(1e-3..0.5), comps).unwrap()
}

pub fn random_contour<R: Rng>(rng: &mut R) -> Contour {
    if rng.random_bool(0.5) {
        Contour::Standard
    } else {
        random_gmm(rng)
    }
}

pub fn random_exponent<R: Rng>(rng: &mut R) -> Exponent {
    match rng.random_range(0..4) {
        0 => Exponent::ONE,
        1 => Exponent::TWO,
        2 => Exponent::Infinite,
        _ => Exponent::new(rng.random_range(1.0..5.0)).unwrap(),
    }
}

pub fn pairs(x: &Barcode) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = x.iter().map(|b| (b.birth(), b.death())).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn alive(x: &Barcode, t: f64) -> u64 {
    x.iter().enumerate().filter(|(_, b)| b.contains(t)).fold(0, |m, (j, _)| m | 1 << j)
}

/// Images of the domain generators alive at `t`, as codomain masks.
fn images_at(f: &BarMorphism, t: f64) -> Vec<(usize, u64)> {
    let live = alive(&f.codomain, t);
    f.images
        .iter()
        .enumerate()
        .filter(|(i, _)| f.domain.bars()[*i].contains(t))
        .map(|(i, img)| (i, img.iter().fold(0u64, |m, &j| m | 1 << j) & live))
        .collect()
}

/// Rank of `coker f_s → coker f_t`.
fn coker_rank(f: &BarMorphism, s: f64, t: f64) -> usize {
    let through = alive(&f.codomain, s) & alive(&f.codomain, t);
    let im: Vec<u64> = images_at(f, t).into_iter().map(|(_, v)| v).collect();
    let mut all = im.clone();
    all.extend((0..64).filter(|j| through >> j & 1 == 1).map(|j| 1u64 << j));
    gf2_rank(&all) - gf2_rank(&im)
}

/// Rank of `ker f_s → ker f_t`.
fn ker_rank(f: &BarMorphism, s: f64, t: f64) -> usize {
    // eliminate while tracking which domain generators were combined
    let mut basis: Vec<(u64, u64)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, v) in images_at(f, s) {
        let (mut v, mut comb) = (v, 1u64 << i);
        for &(b, c) in &basis {
            if v ^ b < v {
                v ^= b;
                comb ^= c;
            }
        }
        if v == 0 {
            kernel.push(comb);
        } else {
            basis.push((v, comb));
            basis.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    let live_t = alive(&f.domain, t);
    let mapped: Vec<u64> = kernel.into_iter().map(|k| k & live_t).collect();
    gf2_rank(&mapped)
}

/// Barcode of a pointwise finite-dimensional module with endpoints among
/// `grid`, recovered from its rank invariant by inclusion-exclusion.
fn barcode_from_ranks(grid: &[f64], rank: impl Fn(f64, f64) -> usize) -> Barcode {
    if grid.is_empty() {
        return Barcode::empty();
    }
    let n = grid.len();
    let beyond = grid[n - 1] + 1.0;
    let pts: Vec<f64> = grid.iter().copied().chain([beyond]).collect();
    let r = |i: isize, j: usize| -> i64 {
        if i < 0 {
            0
        } else {
            rank(pts[i as usize], pts[j]) as i64
        }
    };
    let mut bars = Vec::new();
    for i in 0..n {
        let ii = i as isize;
        for j in i + 1..n {
            let m = r(ii, j - 1) - r(ii - 1, j - 1) - r(ii, j) + r(ii - 1, j);
            assert!(m >= 0, "negative multiplicity");
            for _ in 0..m {
                bars.push(Bar::new(pts[i], pts[j]).unwrap());
            }
        }
        let m = r(ii, n) - r(ii - 1, n);
        assert!(m >= 0, "negative multiplicity");
        for _ in 0..m {
            bars.push(Bar::infinite(pts[i]).unwrap());
        }
    }
    Barcode::new(bars)
}

/// Cokernel barcode of a monomorphism from ranks of its structure maps.
pub fn coker_oracle(f: &BarMorphism) -> Barcode {
    assert!(f.codomain.rank() <= 64);
    barcode_from_ranks(&f.critical_values(), |s, t| coker_rank(f, s, t))
}

/// Kernel barcode of a morphism from ranks of its structure maps.
pub fn ker_oracle(f: &BarMorphism) -> Barcode {
    assert!(f.domain.rank() <= 64);
    barcode_from_ranks(&f.critical_values(), |s, t| ker_rank(f, s, t))
}
