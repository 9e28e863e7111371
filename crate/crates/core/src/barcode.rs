//! Bars, barcodes and their CSV form.

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{p_norm_unchecked, Exponent};

const CONSTRUCTION_TOL: f64 = 1e-12;

/// The interval module supported on `[birth, death)`; `death` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    birth: f64,
    #[serde(with = "extended")]
    death: f64,
}

impl Bar {
    pub fn new(birth: f64, death: f64) -> Result<Self> {
        if !birth.is_finite() {
            return Err(Error::InvalidBar { birth, death, reason: "birth must be finite" });
        }
        if birth < -CONSTRUCTION_TOL {
            return Err(Error::InvalidBar { birth, death, reason: "birth must be >= 0" });
        }
        if death.is_nan() {
            return Err(Error::InvalidBar { birth, death, reason: "death is NaN" });
        }
        if death <= birth + CONSTRUCTION_TOL {
            return Err(Error::InvalidBar { birth, death, reason: "death must exceed birth" });
        }
        Ok(Bar { birth: birth.max(0.0), death })
    }

    /// `[birth, ∞)`.
    pub fn infinite(birth: f64) -> Result<Self> {
        Bar::new(birth, f64::INFINITY)
    }

    pub fn birth(&self) -> f64 {
        self.birth
    }

    pub fn death(&self) -> f64 {
        self.death
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    /// `death - birth` under the standard contour.
    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    /// Whether the bar is alive at `t`, i.e. `birth <= t < death`.
    pub fn contains(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({}, {})", fmt_real(self.birth), fmt_real(self.death))
    }
}

/// Shortest round-trip representation, `inf` for +∞.
pub fn fmt_real(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

/// Parses a real with `inf`/`infinity` accepted for +∞.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        other => other.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

pub(crate) mod extended {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() {
            s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.trim() {
                "-inf" => Ok(f64::NEG_INFINITY),
                other => super::parse_real(other)
                    .ok_or_else(|| serde::de::Error::custom(format!("not a real: {t:?}"))),
            },
        }
    }
}

/// A finite multiset of bars.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(bars: Vec<Bar>) -> Self {
        Barcode { bars }
    }

    pub fn empty() -> Self {
        Barcode::default()
    }

    /// Builds a barcode from `(birth, death)` pairs, validating each bar.
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        pairs
            .into_iter()
            .map(|(b, d)| Bar::new(b, d))
            .collect::<Result<Vec<_>>>()
            .map(Barcode::new)
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn into_bars(self) -> Vec<Bar> {
        self.bars
    }

    pub fn push(&mut self, bar: Bar) {
        self.bars.push(bar);
    }

    pub fn rank(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Bar> {
        self.bars.iter()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.bars.iter().map(Bar::length).collect()
    }

    pub fn infinite_count(&self) -> usize {
        self.bars.iter().filter(|b| b.is_infinite()).count()
    }

    /// p-norm of the bar lengths.
    pub fn p_norm(&self, p: Exponent) -> Result<f64> {
        let p = p.check()?;
        Ok(p_norm_unchecked(&self.lengths(), p))
    }

    /// Bars sorted by `(birth, death)`; a canonical form for multiset comparison.
    pub fn sorted(&self) -> Barcode {
        let mut bars = self.bars.clone();
        bars.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        Barcode { bars }
    }

    /// Multiset equality up to an absolute tolerance on endpoints.
    pub fn approx_eq(&self, other: &Barcode, tol: f64) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        let close = |x: f64, y: f64| x == y || (x - y).abs() <= tol;
        self.sorted()
            .bars
            .iter()
            .zip(other.sorted().bars.iter())
            .all(|(a, b)| close(a.birth, b.birth) && close(a.death, b.death))
    }

    /// Reads `birth,death` lines; blank lines and `#` comments are skipped and a
    /// first line that does not parse as numbers is treated as a header.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut bars = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 2 fields, found {}", fields.len()),
                });
            }
            let (b, d) = (parse_real(fields[0]), parse_real(fields[1]));
            match (b, d) {
                (Some(b), Some(d)) => {
                    let bar = Bar::new(b, d).map_err(|e| Error::Parse {
                        line: lineno,
                        message: e.to_string(),
                    })?;
                    bars.push(bar);
                }
                _ if bars.is_empty() && lineno == 1 => continue,
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("cannot parse {trimmed:?} as birth,death"),
                    })
                }
            }
        }
        Ok(Barcode { bars })
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "birth,death")?;
        for bar in &self.bars {
            writeln!(writer, "{},{}", fmt_real(bar.birth), fmt_real(bar.death))?;
        }
        Ok(())
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Barcode::read_csv(s.as_bytes())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }
}

impl FromIterator<Bar> for Barcode {
    fn from_iter<I: IntoIterator<Item = Bar>>(iter: I) -> Self {
        Barcode { bars: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a Barcode {
    type Item = &'a Bar;
    type IntoIter = std::slice::Iter<'a, Bar>;

    fn into_iter(self) -> Self::IntoIter {
        self.bars.iter()
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bars.is_empty() {
            return f.write_str("0");
        }
        for (i, bar) in self.bars.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{bar}")?;
        }
        Ok(())
    }
}
