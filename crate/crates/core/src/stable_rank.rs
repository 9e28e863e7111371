//! Wasserstein stable ranks and the interleaving distance between them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::barcode::{fmt_real, Barcode};
use crate::distance::{sorted_by_lifetime, MetricChoice};
use crate::error::{Error, Result};
use crate::norms::sorted_prefix_norms;

/// A right-continuous non-increasing step function on `[0, ∞)` with natural
/// values: `f(t) = values[j]` for `t ∈ [breakpoints[j], breakpoints[j+1])`.
///
/// Canonical form: `breakpoints[0] = 0`, breakpoints strictly increasing,
/// values strictly decreasing; the last value is the limit at infinity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<usize>,
    limit: usize,
}

#[derive(Deserialize)]
struct RawStep {
    breakpoints: Vec<f64>,
    values: Vec<usize>,
    limit: usize,
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawStep::deserialize(d)?;
        let f = StepFunction::new(raw.breakpoints, raw.values).map_err(serde::de::Error::custom)?;
        if f.limit != raw.limit {
            return Err(serde::de::Error::custom(format!(
                "limit {} does not match last value {}",
                raw.limit, f.limit
            )));
        }
        Ok(f)
    }
}

impl StepFunction {
    /// Validates a canonical step function.
    pub fn new(breakpoints: Vec<f64>, values: Vec<usize>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::Invalid("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1] && w[1].is_finite())) {
            return Err(Error::Invalid("breakpoints must be finite and strictly increasing".into()));
        }
        if values.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid("values must be strictly decreasing".into()));
        }
        let limit = *values.last().expect("nonempty");
        Ok(StepFunction { breakpoints, values, limit })
    }

    /// The constant function.
    pub fn constant(value: usize) -> Self {
        StepFunction { breakpoints: vec![0.0], values: vec![value], limit: value }
    }

    /// Builds the canonical form of `initial` on `[0, t_1)` followed by drops
    /// to `value_k` at `t_k`, with `t_k` non-decreasing and values
    /// non-increasing. At repeated breakpoints the last value wins.
    pub fn from_drops(initial: usize, drops: &[(f64, usize)]) -> Result<Self> {
        let mut breakpoints = vec![0.0];
        let mut values = vec![initial];
        let mut prev_t = 0.0;
        for &(t, v) in drops {
            if !(t >= prev_t && t.is_finite()) {
                return Err(Error::Invalid(format!("drop at {t} before {prev_t}")));
            }
            let last = *values.last().expect("nonempty");
            if v > last {
                return Err(Error::Invalid(format!("value increases from {last} to {v}")));
            }
            prev_t = t;
            if v == last {
                continue;
            }
            if *breakpoints.last().expect("nonempty") == t {
                *values.last_mut().expect("nonempty") = v;
                if values.len() >= 2 && values[values.len() - 2] == v {
                    values.pop();
                    breakpoints.pop();
                }
            } else {
                breakpoints.push(t);
                values.push(v);
            }
        }
        StepFunction::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `lim_{t→∞} f(t)`.
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn eval(&self, t: f64) -> usize {
        let k = self.breakpoints.partition_point(|&b| b <= t);
        self.values[k.saturating_sub(1)]
    }

    /// `f⁻¹(y) = min { t ≥ 0 : f(t) ≤ y }`, `+∞` when `y` is below the limit.
    pub fn inverse(&self, y: usize) -> f64 {
        if y < self.limit {
            return f64::INFINITY;
        }
        let k = self.values.partition_point(|&v| v > y);
        self.breakpoints[k]
    }

    /// `(value, f⁻¹(value))` for every value taken.
    pub fn inverse_pairs(&self) -> Vec<(usize, f64)> {
        self.values.iter().map(|&v| (v, self.inverse(v))).collect()
    }

    pub fn write_inverse_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "rank,t")?;
        for (v, t) in self.inverse_pairs() {
            writeln!(w, "{v},{}", fmt_real(t))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("step function serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Finite lifetimes sorted non-decreasingly, and the number of infinite bars.
fn finite_lifetimes(x: &Barcode, m: &MetricChoice) -> (Vec<f64>, usize) {
    let mut finite = Vec::with_capacity(x.rank());
    let mut infinite = 0;
    for (l, _) in sorted_by_lifetime(x, &m.contour) {
        if l.is_infinite() {
            infinite += 1;
        } else {
            finite.push(l);
        }
    }
    (finite, infinite)
}

/// Precomputed data for repeated stable rank and interleaving evaluations:
/// the count of infinite bars and the prefix norms `‖(ℓ_1, …, ℓ_j)‖_p` of the
/// sorted finite lifetimes.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixNorms {
    infinite: usize,
    prefix: Vec<f64>,
}

impl PrefixNorms {
    pub fn new(x: &Barcode, m: &MetricChoice) -> Self {
        let (finite, infinite) = finite_lifetimes(x, m);
        PrefixNorms { infinite, prefix: sorted_prefix_norms(&finite, m.p) }
    }

    /// From lifetimes already sorted non-decreasingly; `+∞` entries count as
    /// infinite bars.
    pub fn from_sorted_lifetimes(lifetimes: &[f64], p: crate::norms::Exponent) -> Self {
        let k = lifetimes.partition_point(|l| l.is_finite());
        PrefixNorms { infinite: lifetimes.len() - k, prefix: sorted_prefix_norms(&lifetimes[..k], p) }
    }

    pub fn finite_count(&self) -> usize {
        self.prefix.len() - 1
    }

    pub fn infinite_count(&self) -> usize {
        self.infinite
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }
}

/// Stable rank `t ↦ min { rank Y : d(X, Y) ≤ t }` as a step function: it
/// drops from `rank X - j + 1` to `rank X - j` at `κ(q)·‖(ℓ_1, …, ℓ_j)‖_p`,
/// lifetimes sorted non-decreasingly, and never goes below the number of
/// infinite bars.
pub fn stable_rank(x: &Barcode, m: &MetricChoice) -> StepFunction {
    stable_rank_from_prefix(&PrefixNorms::new(x, m), m.kappa())
}

pub fn stable_rank_from_prefix(pn: &PrefixNorms, kappa: f64) -> StepFunction {
    let n = pn.finite_count();
    let mut prev = 0.0f64;
    let drops: Vec<(f64, usize)> = (1..=n)
        .map(|j| {
            prev = prev.max(kappa * pn.prefix[j]);
            (prev, n - j + pn.infinite)
        })
        .collect();
    StepFunction::from_drops(n + pn.infinite, &drops).expect("prefix norms are non-decreasing")
}

/// `sup_y |f⁻¹(y) - g⁻¹(y)|`, `+∞` when the limits differ.
pub fn interleaving_step(f: &StepFunction, g: &StepFunction) -> f64 {
    if f.limit != g.limit {
        return f64::INFINITY;
    }
    f.values
        .iter()
        .chain(g.values.iter())
        .map(|&y| (f.inverse(y) - g.inverse(y)).abs())
        .fold(0.0, f64::max)
}

/// Interleaving distance between the stable ranks of `X` and `Y` directly
/// from prefix norms: `κ(q) · max_i |P_X(n-i) - P_Y(m-i)|` over
/// `i = 0, …, min(n, m)`, where `P(k)` is the norm of the `k` shortest
/// finite lifetimes.
pub fn interleaving_fast(x: &Barcode, y: &Barcode, m: &MetricChoice) -> f64 {
    interleaving_from_prefix(&PrefixNorms::new(x, m), &PrefixNorms::new(y, m), m.kappa())
}

pub fn interleaving_from_prefix(a: &PrefixNorms, b: &PrefixNorms, kappa: f64) -> f64 {
    if a.infinite != b.infinite {
        return f64::INFINITY;
    }
    let (n, m) = (a.finite_count(), b.finite_count());
    let worst = (0..=n.min(m))
        .map(|i| (a.prefix[n - i] - b.prefix[m - i]).abs())
        .fold(0.0, f64::max);
    kappa * worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{Component, Contour};
    use crate::norms::Exponent;
    use proptest::prelude::*;

    fn bc(pairs: &[(f64, f64)]) -> Barcode {
        Barcode::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn std_metric(p: Exponent, q: Exponent) -> MetricChoice {
        MetricChoice::standard(p, q).unwrap()
    }

    #[test]
    fn prefix_sums() {
        let x = bc(&[(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]);
        let f = stable_rank(&x, &std_metric(Exponent::ONE, Exponent::ONE));
        assert_eq!(f.breakpoints(), &[0.0, 1.0, 3.0, 6.0]);
        assert_eq!(f.values(), &[3, 2, 1, 0]);
        assert_eq!(f.eval(0.5), 3);
        assert_eq!(f.eval(1.0), 2);
        assert_eq!(f.eval(100.0), 0);
    }

    #[test]
    fn sup_norm_collapses_equal_drops() {
        let x = bc(&[(0.0, 2.0), (0.0, 2.0)]);
        let f = stable_rank(&x, &std_metric(Exponent::Infinite, Exponent::ONE));
        assert_eq!(f.breakpoints(), &[0.0, 2.0]);
        assert_eq!(f.values(), &[2, 0]);
    }

    #[test]
    fn infinite_bars_set_the_limit() {
        let x = bc(&[(0.0, f64::INFINITY), (0.0, 1.0)]);
        let f = stable_rank(&x, &std_metric(Exponent::ONE, Exponent::ONE));
        assert_eq!(f.breakpoints(), &[0.0, 1.0]);
        assert_eq!(f.values(), &[2, 1]);
        assert_eq!(f.limit(), 1);
        assert_eq!(f.inverse(0), f64::INFINITY);
    }

    #[test]
    fn step_interleavings() {
        let f = StepFunction::from_drops(1, &[(2.0, 0)]).unwrap();
        let g = StepFunction::from_drops(1, &[(5.0, 0)]).unwrap();
        assert_eq!(interleaving_step(&f, &f), 0.0);
        assert_eq!(interleaving_step(&f, &g), 3.0);
        assert_eq!(interleaving_step(&f, &StepFunction::constant(1)), f64::INFINITY);
    }

    #[test]
    fn adding_a_shortest_bar() {
        let y = bc(&[(0.0, 3.0), (1.0, 5.0), (2.0, 2.5)]);
        let eps = 0.25;
        let mut x = y.clone();
        x.push(crate::Bar::new(4.0, 4.0 + eps).unwrap());
        for q in [Exponent::ONE, Exponent::TWO, Exponent::Infinite] {
            for p in [Exponent::ONE, Exponent::Finite(3.0), Exponent::Infinite] {
                let m = std_metric(p, q);
                let d = interleaving_fast(&x, &y, &m);
                assert!((d - q.kappa() * eps).abs() < 1e-12, "p={p} q={q}: {d}");
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = StepFunction::from_drops(3, &[(1.0, 2), (1.0, 1), (4.0, 0)]).unwrap();
        assert_eq!(f.breakpoints(), &[0.0, 1.0, 4.0]);
        let s = f.to_json();
        assert_eq!(s, r#"{"breakpoints":[0.0,1.0,4.0],"values":[3,1,0],"limit":0}"#);
        assert_eq!(StepFunction::from_json(&s).unwrap(), f);
        assert!(StepFunction::from_json(r#"{"breakpoints":[0,1],"values":[1,1],"limit":1}"#).is_err());
        assert!(StepFunction::from_json(r#"{"breakpoints":[0,1],"values":[2,1],"limit":0}"#).is_err());
        let mut csv = Vec::new();
        f.write_inverse_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "rank,t\n3,0\n1,1\n0,4\n");
    }

    fn barcodes() -> impl Strategy<Value = Barcode> {
        prop::collection::vec((0.0f64..10.0, 0.01f64..6.0, prop::bool::weighted(0.1)), 0..12).prop_map(|v| {
            Barcode::from_pairs(v.into_iter().map(|(b, l, inf)| (b, if inf { f64::INFINITY } else { b + l }))).unwrap()
        })
    }

    fn metrics() -> impl Strategy<Value = MetricChoice> {
        let exps = prop_oneof![
            Just(Exponent::ONE),
            Just(Exponent::TWO),
            (1.0f64..6.0).prop_map(Exponent::Finite),
            Just(Exponent::Infinite)
        ];
        (exps.clone(), exps, prop::option::of((0.0f64..10.0, 0.1f64..3.0))).prop_map(|(p, q, g)| {
            let contour = match g {
                None => Contour::Standard,
                Some((mu, sigma)) => {
                    Contour::gaussian_mixture(0.01, vec![Component { mu, sigma, lambda: 1.0 }]).unwrap()
                }
            };
            MetricChoice::new(p, q, contour).unwrap()
        })
    }

    proptest! {
        #[test]
        fn fast_matches_step(x in barcodes(), y in barcodes(), m in metrics()) {
            let fast = interleaving_fast(&x, &y, &m);
            let slow = interleaving_step(&stable_rank(&x, &m), &stable_rank(&y, &m));
            if fast.is_infinite() || slow.is_infinite() {
                prop_assert_eq!(fast, slow);
            } else {
                prop_assert!((fast - slow).abs() <= 1e-9 * (1.0 + slow), "{} vs {}", fast, slow);
            }
        }

        #[test]
        fn contract_holds(x in barcodes(), m in metrics()) {
            let f = stable_rank(&x, &m);
            prop_assert!(f.breakpoints().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(f.values().windows(2).all(|w| w[0] > w[1]));
            prop_assert_eq!(f.values()[0], x.rank());
            prop_assert_eq!(f.limit(), x.infinite_count());
        }
    }
}
