//! Reparametrizations of the filtration axis.
//!
//! A [`Contour`] is either the standard one, `C(a, ε) = a + ε`, or a distance
//! type contour induced by a positive density `f`: `C(a, ε)` is the point `t`
//! with `∫_a^t f = ε`. Densities are Gaussian mixtures plus a constant floor, so
//! the cumulative `F(t) = ∫_0^t f` has a closed form in terms of `erf`.

use serde::{Deserialize, Serialize};

use crate::barcode::{Bar, Barcode};
use crate::error::{Error, Result};
use crate::norms::{p_norm_unchecked, Exponent};

pub const DEFAULT_FLOOR: f64 = 1e-4;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// One weighted Gaussian `λ · N(x | μ, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub mu: f64,
    pub sigma: f64,
    #[serde(default = "one")]
    pub lambda: f64,
}

fn one() -> f64 {
    1.0
}

fn default_floor() -> f64 {
    DEFAULT_FLOOR
}

/// `f(x) = floor + Σ λ_i N(x | μ_i, σ_i)` on `[0, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixture {
    #[serde(default = "default_floor")]
    floor: f64,
    components: Vec<Component>,
}

/// Upper tail `1 - Φ(x)`, accurate for large positive `x`.
fn upper_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `Φ(x) - Φ(y)` for `x >= y`, choosing the tail that avoids cancellation.
fn phi_diff(x: f64, y: f64) -> f64 {
    if x == y {
        return 0.0;
    }
    if y >= 0.0 {
        upper_tail(y) - upper_tail(x)
    } else if x <= 0.0 {
        upper_tail(-x) - upper_tail(-y)
    } else {
        1.0 - upper_tail(x) - upper_tail(-y)
    }
}

impl GaussianMixture {
    /// Validates the parameters. The first weight is forced to 1.
    pub fn new(floor: f64, mut components: Vec<Component>) -> Result<Self> {
        if !(floor.is_finite() && floor >= 0.0) {
            return Err(Error::InvalidContour(format!("floor must be finite and >= 0 (got {floor})")));
        }
        if floor == 0.0 && components.is_empty() {
            return Err(Error::InvalidContour("zero density: no floor and no components".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if !c.mu.is_finite() {
                return Err(Error::InvalidContour(format!("component {i}: mean must be finite")));
            }
            if !(c.sigma.is_finite() && c.sigma > 0.0) {
                return Err(Error::InvalidContour(format!("component {i}: sigma must be > 0")));
            }
            if !(c.lambda.is_finite() && c.lambda > 0.0) {
                return Err(Error::InvalidContour(format!("component {i}: lambda must be > 0")));
            }
        }
        if let Some(first) = components.first_mut() {
            first.lambda = 1.0;
        }
        Ok(GaussianMixture { floor, components })
    }

    /// The constant density `f ≡ floor`.
    pub fn constant(floor: f64) -> Result<Self> {
        GaussianMixture::new(floor, Vec::new())
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn density(&self, x: f64) -> f64 {
        self.floor
            + self
                .components
                .iter()
                .map(|c| {
                    let z = (x - c.mu) / c.sigma;
                    c.lambda * INV_SQRT_2PI / c.sigma * (-0.5 * z * z).exp()
                })
                .sum::<f64>()
    }

    /// `∫_a^b f` for finite `0 <= a <= b`.
    fn integral(&self, a: f64, b: f64) -> f64 {
        let gauss: f64 = self
            .components
            .iter()
            .map(|c| c.lambda * phi_diff((b - c.mu) / c.sigma, (a - c.mu) / c.sigma))
            .sum();
        self.floor * (b - a) + gauss
    }

    /// `∫_a^∞ f`; infinite whenever the floor is positive.
    fn tail_mass(&self, a: f64) -> f64 {
        if self.floor > 0.0 {
            return f64::INFINITY;
        }
        self.components
            .iter()
            .map(|c| c.lambda * upper_tail((a - c.mu) / c.sigma))
            .sum()
    }

    /// `F(t) = ∫_0^t f`.
    pub fn cumulative(&self, t: f64) -> f64 {
        if t.is_infinite() {
            return self.tail_mass(0.0);
        }
        self.integral(0.0, t)
    }

    /// Solves `∫_a^t f = ε` for `t`.
    fn solve(&self, a: f64, eps: f64) -> f64 {
        if eps == 0.0 {
            return a;
        }
        if eps.is_infinite() || eps >= self.tail_mass(a) {
            return f64::INFINITY;
        }
        let mut lo = a;
        let mut hi = if self.floor > 0.0 {
            a + eps / self.floor
        } else {
            let mut width = eps.max(1e-3);
            while self.integral(a, a + width) < eps {
                width *= 2.0;
                if !(a + width).is_finite() {
                    return f64::INFINITY;
                }
            }
            a + width
        };
        let tol = 1e-13 * eps.max(1.0);
        let mut t = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = self.integral(a, t) - eps;
            if g.abs() <= tol {
                return t;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = self.density(t);
            let newton = t - g / d;
            t = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        t
    }
}

/// A regular action contour on `[0, ∞)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Contour {
    #[default]
    Standard,
    #[serde(rename = "gmm")]
    Density(GaussianMixture),
}

impl Contour {
    pub fn gaussian_mixture(floor: f64, components: Vec<Component>) -> Result<Self> {
        GaussianMixture::new(floor, components).map(Contour::Density)
    }

    /// Lifetime `ℓ(a, b)` of the bar `[a, b)`; `ℓ(a, ∞) = ∞`.
    pub fn lifetime(&self, a: f64, b: f64) -> Result<f64> {
        if a.is_nan() || b.is_nan() || a > b {
            return Err(Error::ReversedInterval { a, b });
        }
        Ok(self.lifetime_unchecked(a, b))
    }

    pub(crate) fn lifetime_unchecked(&self, a: f64, b: f64) -> f64 {
        if b.is_infinite() {
            return f64::INFINITY;
        }
        match self {
            Contour::Standard => b - a,
            Contour::Density(f) => f.integral(a, b),
        }
    }

    /// `C(a, ε)`; `+∞` only if the density has finite mass beyond `a` and
    /// `ε` exceeds it, which requires a zero floor.
    pub fn shift(&self, a: f64, eps: f64) -> Result<f64> {
        if eps.is_nan() || eps < 0.0 {
            return Err(Error::Invalid(format!("shift amount must be >= 0 (got {eps})")));
        }
        Ok(match self {
            Contour::Standard => a + eps,
            Contour::Density(f) => f.solve(a, eps),
        })
    }

    /// Lifetime of a bar.
    pub fn bar_lifetime(&self, bar: &Bar) -> f64 {
        self.lifetime_unchecked(bar.birth(), bar.death())
    }

    pub fn lifetimes(&self, x: &Barcode) -> Vec<f64> {
        x.iter().map(|b| self.bar_lifetime(b)).collect()
    }

    /// Sends each `K(a, b)` to `K(ℓ(0, a), ℓ(0, b))`.
    ///
    /// With a zero floor two distinct endpoints can land on the same value in
    /// floating point; such collapsed bars have zero lifetime and are dropped.
    pub fn transform_barcode(&self, x: &Barcode) -> Barcode {
        match self {
            Contour::Standard => x.clone(),
            Contour::Density(_) => x
                .iter()
                .filter_map(|bar| {
                    let a = self.lifetime_unchecked(0.0, bar.birth());
                    let b = self.lifetime_unchecked(0.0, bar.death());
                    Bar::new(a, b).ok()
                })
                .collect(),
        }
    }

    /// The `(p, C)`-norm: p-norm of the bar lifetimes.
    pub fn pc_norm(&self, x: &Barcode, p: Exponent) -> Result<f64> {
        let p = p.check()?;
        Ok(p_norm_unchecked(&self.lifetimes(x), p))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Contour = serde_json::from_str(s)?;
        match c {
            Contour::Standard => Ok(Contour::Standard),
            Contour::Density(f) => Contour::gaussian_mixture(f.floor, f.components),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("contour serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single(mu: f64, sigma: f64, floor: f64) -> Contour {
        Contour::gaussian_mixture(floor, vec![Component { mu, sigma, lambda: 1.0 }]).unwrap()
    }

    #[test]
    fn standard_contour() {
        let c = Contour::Standard;
        assert_eq!(c.lifetime(2.0, 5.0).unwrap(), 3.0);
        assert_eq!(c.shift(2.0, 3.0).unwrap(), 5.0);
        assert_eq!(c.lifetime(4.0, 4.0).unwrap(), 0.0);
        assert!(c.lifetime(5.0, 2.0).is_err());
        assert_eq!(c.lifetime(1.0, f64::INFINITY).unwrap(), f64::INFINITY);
    }

    #[test]
    fn constant_density() {
        let c = Contour::Density(GaussianMixture::constant(2.0).unwrap());
        assert!((c.shift(1.0, 4.0).unwrap() - 3.0).abs() < 1e-12);
        let x = Barcode::from_pairs([(1.0, 3.0)]).unwrap();
        let y = c.transform_barcode(&x);
        assert!(y.approx_eq(&Barcode::from_pairs([(2.0, 6.0)]).unwrap(), 1e-12));
        let z = Barcode::from_pairs([(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert!((c.pc_norm(&z, Exponent::ONE).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_cdf_lifetime() {
        let c = single(0.5, 0.15, 0.0);
        let v = c.lifetime(0.0, 0.5).unwrap();
        // Φ(0) - Φ(-10/3), with Φ(-10/3) = 4.290603331968...e-4
        assert!((v - (0.5 - 4.290_603_331_968_372e-4)).abs() < 1e-12, "{v}");
        assert_eq!(c.lifetime(0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn zero_floor_shift_past_mass_is_infinite() {
        let c = single(0.5, 0.15, 0.0);
        assert_eq!(c.shift(0.0, 2.0).unwrap(), f64::INFINITY);
        let t = c.shift(0.0, 0.3).unwrap();
        assert!((c.lifetime(0.0, t).unwrap() - 0.3).abs() < 1e-10);
    }

    #[test]
    fn json_forms() {
        assert_eq!(Contour::from_json(r#"{"type":"standard"}"#).unwrap(), Contour::Standard);
        let c = Contour::from_json(
            r#"{"type":"gmm","floor":0.01,"components":[{"mu":1,"sigma":0.5,"lambda":7},{"mu":3,"sigma":1,"lambda":2}]}"#,
        )
        .unwrap();
        let Contour::Density(f) = &c else { panic!() };
        assert_eq!(f.components()[0].lambda, 1.0);
        assert_eq!(f.components()[1].lambda, 2.0);
        assert_eq!(Contour::from_json(&c.to_json()).unwrap(), c);
        assert!(Contour::from_json(r#"{"type":"gmm","floor":0.1,"components":[{"mu":1,"sigma":0}]}"#).is_err());
        let d = Contour::from_json(r#"{"type":"gmm","components":[{"mu":1,"sigma":1}]}"#).unwrap();
        let Contour::Density(f) = d else { panic!() };
        assert_eq!(f.floor(), DEFAULT_FLOOR);
    }

    #[test]
    fn far_tail_keeps_precision() {
        let c = single(0.0, 1.0, 1e-4);
        let v = c.lifetime(10.0, 12.0).unwrap();
        assert!((v - (2e-4 + 7.619853024160527e-24)).abs() < 1e-18);
    }

    fn mixtures() -> impl Strategy<Value = Contour> {
        (
            1e-4f64..0.5,
            prop::collection::vec((0.0f64..10.0, 0.05f64..3.0, 0.1f64..5.0), 1..4),
        )
            .prop_map(|(floor, comps)| {
                Contour::gaussian_mixture(
                    floor,
                    comps.into_iter().map(|(mu, sigma, lambda)| Component { mu, sigma, lambda }).collect(),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn action_law(c in mixtures(), a in 0.0f64..10.0, e in 0.0f64..3.0, t in 0.0f64..3.0) {
            let lhs = c.shift(c.shift(a, e).unwrap(), t).unwrap();
            let rhs = c.shift(a, e + t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs.abs()));
        }

        #[test]
        fn round_trip(c in mixtures(), a in 0.0f64..10.0, e in 0.0f64..5.0) {
            let t = c.shift(a, e).unwrap();
            prop_assert!((c.lifetime(a, t).unwrap() - e).abs() <= 1e-9);
        }

        #[test]
        fn additivity(c in mixtures(), a in 0.0f64..10.0, d1 in 0.0f64..5.0, d2 in 0.0f64..5.0) {
            let (b, e) = (a + d1, a + d1 + d2);
            let lhs = c.lifetime(a, e).unwrap();
            let rhs = c.lifetime(a, b).unwrap() + c.lifetime(b, e).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }

        #[test]
        fn isometry(c in mixtures(), pairs in prop::collection::vec((0.0f64..10.0, 0.01f64..5.0), 0..8), p in 1.0f64..4.0) {
            let x = Barcode::from_pairs(pairs.iter().map(|&(b, l)| (b, b + l))).unwrap();
            let p = Exponent::Finite(p);
            let lhs = c.pc_norm(&x, p).unwrap();
            let rhs = c.transform_barcode(&x).p_norm(p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-8);
        }
    }
}
