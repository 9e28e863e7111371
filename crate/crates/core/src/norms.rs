//! p-norms on vectors of extended non-negative reals.
//!
//! Extended reals are plain `f64` values where `f64::INFINITY` stands for +∞;
//! IEEE infinity already absorbs addition and dominates `max`. The exponent,
//! on the other hand, keeps +∞ as a distinct variant so that p = ∞ is never
//! approximated by a large float.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent `p ∈ [1, ∞]` of a p-norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// Validating constructor; `f64::INFINITY` maps to [`Exponent::Infinite`].
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(Exponent::Infinite)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    /// The constant `2^((1-q)/q)` relating distances to the zero module with
    /// norms; equals `1/2` for `q = ∞`.
    pub fn kappa(self) -> f64 {
        match self {
            Exponent::Finite(q) => 2f64.powf((1.0 - q) / q),
            Exponent::Infinite => 0.5,
        }
    }

    pub(crate) fn check(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if p.is_nan() || p < 1.0 || p.is_infinite() => {
                Err(Error::InvalidExponent(p))
            }
            other => Ok(other),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(Exponent::Infinite),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Invalid(format!("not an exponent: {s:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(deserializer)? {
            Raw::Num(p) => Exponent::new(p),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// p-norm of a vector of non-negative extended reals.
///
/// The empty vector has norm 0 and any infinite entry gives +∞.
pub fn p_norm(values: &[f64], p: Exponent) -> Result<f64> {
    let p = p.check()?;
    if let Some(&bad) = values.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::Invalid(format!("p-norm entries must be >= 0 (got {bad})")));
    }
    Ok(p_norm_unchecked(values, p))
}

pub(crate) fn p_norm_unchecked(values: &[f64], p: Exponent) -> f64 {
    let max = values.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 || max.is_infinite() {
        return max;
    }
    match p {
        Exponent::Infinite => max,
        Exponent::Finite(p) if p == 1.0 => compensated_sum(values.iter().copied()),
        Exponent::Finite(p) => {
            let scaled = compensated_sum(values.iter().map(|v| (v / max).powf(p)));
            max * scaled.powf(1.0 / p)
        }
    }
}

/// Norms of every prefix of a non-decreasing vector: entry `k` is the p-norm
/// of the first `k` values, so the result has `len + 1` entries and starts at 0.
pub(crate) fn sorted_prefix_norms(sorted: &[f64], p: Exponent) -> Vec<f64> {
    let mut out = Vec::with_capacity(sorted.len() + 1);
    out.push(0.0);
    match p {
        Exponent::Infinite => {
            let mut running = 0.0f64;
            for &v in sorted {
                running = running.max(v);
                out.push(running);
            }
        }
        Exponent::Finite(p) if p == 1.0 => {
            let (mut sum, mut comp) = (0.0f64, 0.0f64);
            for &v in sorted {
                let t = sum + v;
                if sum.abs() >= v.abs() {
                    comp += (sum - t) + v;
                } else {
                    comp += (v - t) + sum;
                }
                sum = t;
                out.push(sum + comp);
            }
        }
        Exponent::Finite(p) => {
            // s_k = sum_{j<=k} (v_j / v_k)^p, updated as the scale grows.
            let mut scale = 0.0f64;
            let mut s = 0.0f64;
            for &v in sorted {
                if v.is_infinite() {
                    out.push(f64::INFINITY);
                    scale = f64::INFINITY;
                    continue;
                }
                if scale.is_infinite() {
                    out.push(f64::INFINITY);
                    continue;
                }
                if v > scale {
                    if scale > 0.0 {
                        s *= (scale / v).powf(p);
                    }
                    scale = v;
                }
                if scale > 0.0 {
                    s += (v / scale).powf(p);
                }
                out.push(if scale > 0.0 { scale * s.powf(1.0 / p) } else { 0.0 });
            }
        }
    }
    out
}
