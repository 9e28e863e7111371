//! Seeded random monomorphisms and epimorphisms between small barcodes.

use rand::Rng;

use super::presentation::BarMorphism;
use crate::barcode::{Bar, Barcode};

/// Shape of the random morphisms produced by [`random_monomorphism`].
#[derive(Clone, Copy, Debug)]
pub struct RandomMorphismSpec {
    /// Number of codomain bars.
    pub n: usize,
    /// Number of domain bars, at most `n`.
    pub m: usize,
    /// Endpoints are integers in `0..=horizon`, which makes ties common.
    pub horizon: u32,
    /// Probability that a codomain bar is infinite.
    pub infinite_prob: f64,
}

impl Default for RandomMorphismSpec {
    fn default() -> Self {
        RandomMorphismSpec { n: 5, m: 3, horizon: 12, infinite_prob: 0.0 }
    }
}

fn random_codomain<R: Rng + ?Sized>(rng: &mut R, spec: &RandomMorphismSpec) -> Vec<Bar> {
    (0..spec.n)
        .map(|_| {
            let birth = rng.random_range(0..spec.horizon) as f64;
            if rng.random_bool(spec.infinite_prob) {
                Bar::infinite(birth).expect("finite birth")
            } else {
                let death = rng.random_range(birth as u32 + 1..=spec.horizon) as f64;
                Bar::new(birth, death).expect("death after birth")
            }
        })
        .collect()
}

/// Draws a monomorphism: a random codomain, then for each domain bar a birth
/// and a nonempty subset of the codomain bars alive at that birth, with the
/// death set to the largest death in the subset. Candidates that are not
/// injective at every degree are rejected and redrawn.
pub fn random_monomorphism<R: Rng + ?Sized>(rng: &mut R, spec: &RandomMorphismSpec) -> BarMorphism {
    assert!(spec.m <= spec.n && spec.n > 0 && spec.horizon > 0);
    loop {
        let x = random_codomain(rng, spec);
        let mut z = Vec::with_capacity(spec.m);
        let mut images = Vec::with_capacity(spec.m);
        for _ in 0..spec.m {
            let (birth, support) = loop {
                let a = rng.random_range(0..spec.horizon) as f64;
                let alive: Vec<usize> = (0..x.len()).filter(|&j| x[j].contains(a)).collect();
                if alive.is_empty() {
                    continue;
                }
                let mut support: Vec<usize> = alive.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
                if support.is_empty() {
                    support.push(alive[rng.random_range(0..alive.len())]);
                }
                break (a, support);
            };
            let death = support.iter().map(|&j| x[j].death()).fold(f64::NEG_INFINITY, f64::max);
            z.push(Bar::new(birth, death).expect("support alive at birth"));
            images.push(support);
        }
        let f = BarMorphism::new(Barcode::new(z), Barcode::new(x), images).expect("indices in range");
        if f.is_pointwise_injective() {
            return f;
        }
    }
}

/// The reflected dual of a random finite monomorphism, which is an
/// epimorphism.
pub fn random_epimorphism<R: Rng + ?Sized>(rng: &mut R, spec: &RandomMorphismSpec) -> BarMorphism {
    let finite = RandomMorphismSpec { infinite_prob: 0.0, ..*spec };
    let f = random_monomorphism(rng, &finite);
    f.dual(spec.horizon as f64).expect("finite bars inside the horizon")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{build_copresentation, build_presentation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_morphisms_pass_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = RandomMorphismSpec { n: 6, m: 4, horizon: 10, infinite_prob: 0.2 };
        for _ in 0..50 {
            let f = random_monomorphism(&mut rng, &spec);
            assert!(f.is_pointwise_injective());
            f.check_coefficients().unwrap();
            build_presentation(&f).unwrap();
            let g = random_epimorphism(&mut rng, &spec);
            assert!(g.is_pointwise_surjective());
            build_copresentation(&g).unwrap();
        }
    }
}
