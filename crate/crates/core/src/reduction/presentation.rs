//! Morphisms between barcodes and their presentation matrices over F₂.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bits::{self, BitColumn};
use super::permutation::Permutation;
use crate::barcode::{fmt_real, Bar, Barcode};
use crate::error::{Error, Result};

const DEGREE_TOL: f64 = 1e-12;

/// A morphism `Z → X` between direct sums of bars, given on generators:
/// `images[i]` lists the codomain bars `j` with `f(z_i) = Σ x_j` over F₂.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarMorphism {
    pub domain: Barcode,
    pub codomain: Barcode,
    pub images: Vec<Vec<usize>>,
}

impl BarMorphism {
    pub fn new(domain: Barcode, codomain: Barcode, images: Vec<Vec<usize>>) -> Result<Self> {
        if images.len() != domain.rank() {
            return Err(Error::Invalid(format!(
                "{} image lists for {} domain bars",
                images.len(),
                domain.rank()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            let mut seen = vec![false; codomain.rank()];
            for &j in img {
                if j >= codomain.rank() {
                    return Err(Error::OutOfRange { index: j, max: codomain.rank().saturating_sub(1) });
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::Invalid(format!("generator {i}: codomain bar {j} listed twice")));
                }
            }
        }
        Ok(BarMorphism { domain, codomain, images })
    }

    /// Checks that every nonzero coefficient `z_i ↦ x_j` is a morphism of
    /// bars, i.e. `a_j ≤ a_i < b_j ≤ b_i`.
    pub fn check_coefficients(&self) -> Result<()> {
        for (i, img) in self.images.iter().enumerate() {
            let z = self.domain.bars()[i];
            for &j in img {
                let x = self.codomain.bars()[j];
                if !(x.birth() <= z.birth() && z.birth() < x.death() && x.death() <= z.death()) {
                    return Err(Error::Invalid(format!("no bar morphism {z} -> {x} (generator {i} -> {j})")));
                }
            }
        }
        Ok(())
    }

    /// Every finite endpoint of every bar, sorted and deduplicated.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .domain
            .iter()
            .chain(self.codomain.iter())
            .flat_map(|b| [b.birth(), b.death()])
            .filter(|v| v.is_finite())
            .collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    /// Images at time `t` of the domain generators alive at `t`, as columns
    /// over the codomain generators alive at `t`.
    pub fn images_at(&self, t: f64) -> Vec<BitColumn> {
        let n = self.codomain.rank();
        self.images
            .iter()
            .enumerate()
            .filter(|(i, _)| self.domain.bars()[*i].contains(t))
            .map(|(_, img)| {
                let alive: Vec<usize> = img.iter().copied().filter(|&j| self.codomain.bars()[j].contains(t)).collect();
                BitColumn::from_indices(n, &alive)
            })
            .collect()
    }

    /// Whether `f_t` is injective at every `t`.
    pub fn is_pointwise_injective(&self) -> bool {
        self.critical_values().into_iter().all(|t| {
            let cols = self.images_at(t);
            bits::rank(&cols) == cols.len()
        })
    }

    /// Whether `f_t` is surjective at every `t`.
    pub fn is_pointwise_surjective(&self) -> bool {
        self.critical_values().into_iter().all(|t| {
            let alive = self.codomain.iter().filter(|b| b.contains(t)).count();
            bits::rank(&self.images_at(t)) == alive
        })
    }

    /// The dual morphism `X* → Z*` on the filtration reflected by
    /// `t ↦ mirror - t`. Requires finite bars inside `[0, mirror]`.
    pub fn dual(&self, mirror: f64) -> Result<BarMorphism> {
        let reflect = |x: &Barcode| -> Result<Barcode> {
            x.iter()
                .map(|b| {
                    if b.is_infinite() || b.death() > mirror {
                        return Err(Error::Invalid(format!("cannot reflect {b} at {mirror}")));
                    }
                    Bar::new(mirror - b.death(), mirror - b.birth())
                })
                .collect::<Result<Vec<_>>>()
                .map(Barcode::new)
        };
        let mut images = vec![Vec::new(); self.codomain.rank()];
        for (i, img) in self.images.iter().enumerate() {
            for &j in img {
                images[j].push(i);
            }
        }
        BarMorphism::new(reflect(&self.codomain)?, reflect(&self.domain)?, images)
    }

    /// Largest finite endpoint, the natural reflection point for [`dual`](Self::dual).
    pub fn max_degree(&self) -> f64 {
        self.critical_values().last().copied().unwrap_or(0.0)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: BarMorphism = serde_json::from_str(s)?;
        BarMorphism::new(raw.domain, raw.codomain, raw.images)
    }
}

/// What a column of a presentation matrix stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    /// The image of domain generator `source`.
    Generator { source: usize },
    /// The relation killing the generator on matrix row `row`.
    Relation { row: usize },
}

/// Degree-labelled F₂ matrix `[f | i]` presenting the cokernel of a
/// monomorphism: rows are codomain generators at their births; columns are
/// domain generators at their births and codomain relations at their deaths.
///
/// Rows are sorted by `(degree, index)` and columns by `(degree, relation
/// before generator, index)`. Relations of infinite bars sit at degree `+∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentationMatrix {
    row_degrees: Vec<f64>,
    row_sources: Vec<usize>,
    col_degrees: Vec<f64>,
    col_kinds: Vec<ColumnKind>,
    columns: Vec<BitColumn>,
}

/// Builds the presentation matrix of a monomorphism.
///
/// Rejects zero generator columns, coefficients on codomain generators not
/// alive at the generator's birth, and deaths that differ from the largest
/// death in the image support.
pub fn build_presentation(f: &BarMorphism) -> Result<PresentationMatrix> {
    let births = |x: &Barcode| x.iter().map(Bar::birth).collect::<Vec<_>>();
    let deaths = |x: &Barcode| x.iter().map(Bar::death).collect::<Vec<_>>();
    PresentationMatrix::from_degrees(
        &births(&f.domain),
        &deaths(&f.domain),
        &births(&f.codomain),
        &deaths(&f.codomain),
        &f.images,
    )
    .map_err(Error::NotMonomorphism)
}

impl PresentationMatrix {
    pub(crate) fn from_degrees(
        z_births: &[f64],
        z_deaths: &[f64],
        x_births: &[f64],
        x_deaths: &[f64],
        images: &[Vec<usize>],
    ) -> std::result::Result<Self, String> {
        let n = x_births.len();
        if images.len() != z_births.len() {
            return Err(format!("{} image lists for {} generators", images.len(), z_births.len()));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(format!("generator z{} maps to zero", i + 1));
            }
            let (a, b) = (z_births[i], z_deaths[i]);
            let mut max_death = f64::NEG_INFINITY;
            for &j in img {
                if j >= n {
                    return Err(format!("generator z{} refers to missing x{}", i + 1, j + 1));
                }
                if !(x_births[j] <= a && a < x_deaths[j]) {
                    return Err(format!(
                        "generator z{} born at {} has a coefficient on x{} = [{}, {}) which is not alive then",
                        i + 1,
                        fmt_real(a),
                        j + 1,
                        fmt_real(x_births[j]),
                        fmt_real(x_deaths[j])
                    ));
                }
                max_death = max_death.max(x_deaths[j]);
            }
            let consistent = b == max_death || (b - max_death).abs() <= DEGREE_TOL;
            if !consistent {
                return Err(format!(
                    "generator z{} dies at {} but its image dies at {}",
                    i + 1,
                    fmt_real(b),
                    fmt_real(max_death)
                ));
            }
        }

        let mut rows: Vec<usize> = (0..n).collect();
        rows.sort_by(|&p, &q| x_births[p].total_cmp(&x_births[q]).then(p.cmp(&q)));
        let mut row_of = vec![0; n];
        for (r, &src) in rows.iter().enumerate() {
            row_of[src] = r;
        }

        // (degree, tag, index): tag 0 = relation, 1 = generator.
        let mut order: Vec<(f64, u8, usize)> = Vec::with_capacity(n + images.len());
        order.extend((0..n).map(|j| (x_deaths[j], 0u8, j)));
        order.extend((0..images.len()).map(|i| (z_births[i], 1u8, i)));
        order.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));

        let mut col_degrees = Vec::with_capacity(order.len());
        let mut col_kinds = Vec::with_capacity(order.len());
        let mut columns = Vec::with_capacity(order.len());
        for (deg, tag, idx) in order {
            col_degrees.push(deg);
            if tag == 0 {
                let row = row_of[idx];
                col_kinds.push(ColumnKind::Relation { row });
                columns.push(BitColumn::from_indices(n, &[row]));
            } else {
                col_kinds.push(ColumnKind::Generator { source: idx });
                let ones: Vec<usize> = images[idx].iter().map(|&j| row_of[j]).collect();
                columns.push(BitColumn::from_indices(n, &ones));
            }
        }
        Ok(PresentationMatrix {
            row_degrees: rows.iter().map(|&j| x_births[j]).collect(),
            row_sources: rows,
            col_degrees,
            col_kinds,
            columns,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.row_degrees.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row_degrees(&self) -> &[f64] {
        &self.row_degrees
    }

    /// Codomain generator index of each row.
    pub fn row_sources(&self) -> &[usize] {
        &self.row_sources
    }

    pub fn col_degrees(&self) -> &[f64] {
        &self.col_degrees
    }

    pub fn col_kinds(&self) -> &[ColumnKind] {
        &self.col_kinds
    }

    pub fn column(&self, c: usize) -> &BitColumn {
        &self.columns[c]
    }

    pub(crate) fn column_mut(&mut self, c: usize) -> &mut BitColumn {
        &mut self.columns[c]
    }

    pub(crate) fn add_column(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (a, b) = if src < dst {
            let (lo, hi) = self.columns.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.columns.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        b.xor_assign(a);
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.columns[col].get(row)
    }

    pub fn generator_columns(&self) -> Vec<usize> {
        (0..self.n_cols())
            .filter(|&c| matches!(self.col_kinds[c], ColumnKind::Generator { .. }))
            .collect()
    }

    pub fn relation_columns(&self) -> Vec<usize> {
        (0..self.n_cols())
            .filter(|&c| matches!(self.col_kinds[c], ColumnKind::Relation { .. }))
            .collect()
    }

    /// Rows by columns as 0/1 bytes.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.n_rows())
            .map(|r| (0..self.n_cols()).map(|c| self.entry(r, c) as u8).collect())
            .collect()
    }

    fn col_label(&self, c: usize) -> String {
        match self.col_kinds[c] {
            ColumnKind::Generator { source } => format!("z{}", source + 1),
            ColumnKind::Relation { row } => format!("r{}", self.row_sources[row] + 1),
        }
    }

    /// Left-to-right column reduction, each column reduced by the columns to
    /// its left in order.
    pub fn reduce(&self) -> Reduction {
        let mut m = self.clone();
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; m.n_rows()];
        for j in 0..m.n_cols() {
            while let Some(l) = m.columns[j].low() {
                match pivot_of_row[l] {
                    Some(i) => m.add_column(i, j),
                    None => {
                        pivot_of_row[l] = Some(j);
                        break;
                    }
                }
            }
        }
        Reduction::new(m)
    }

    /// Reduction where each step adds a uniformly chosen earlier column with
    /// the same lowest entry, until no two columns share a lowest entry.
    pub fn reduce_random_order<R: Rng + ?Sized>(&self, rng: &mut R) -> Reduction {
        let mut m = self.clone();
        loop {
            let lows: Vec<Option<usize>> = m.columns.iter().map(BitColumn::low).collect();
            let mut candidates = Vec::new();
            for j in 0..lows.len() {
                for i in 0..j {
                    if lows[j].is_some() && lows[i] == lows[j] {
                        candidates.push((i, j));
                    }
                }
            }
            if candidates.is_empty() {
                break;
            }
            let (i, j) = candidates[rng.random_range(0..candidates.len())];
            m.add_column(i, j);
        }
        Reduction::new(m)
    }
}

impl fmt::Display for PresentationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col_labels: Vec<String> = (0..self.n_cols())
            .map(|c| format!("{}@{}", self.col_label(c), fmt_real(self.col_degrees[c])))
            .collect();
        let row_labels: Vec<String> = (0..self.n_rows())
            .map(|r| format!("x{}@{}", self.row_sources[r] + 1, fmt_real(self.row_degrees[r])))
            .collect();
        let rw = row_labels.iter().map(String::len).max().unwrap_or(0);
        write!(f, "{:rw$} |", "")?;
        for l in &col_labels {
            write!(f, " {l}")?;
        }
        writeln!(f)?;
        for (r, label) in row_labels.iter().enumerate() {
            write!(f, "{label:rw$} |")?;
            for (c, l) in col_labels.iter().enumerate() {
                let w = l.len();
                write!(f, " {:>w$}", if self.entry(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A reduced presentation matrix: every nonzero column has a lowest entry on
/// a row where no other column has its lowest entry.
#[derive(Clone, Debug)]
pub struct Reduction {
    matrix: PresentationMatrix,
    lows: Vec<Option<usize>>,
}

impl Reduction {
    fn new(matrix: PresentationMatrix) -> Self {
        let lows = matrix.columns.iter().map(BitColumn::low).collect();
        Reduction { matrix, lows }
    }

    pub fn matrix(&self) -> &PresentationMatrix {
        &self.matrix
    }

    pub fn lows(&self) -> &[Option<usize>] {
        &self.lows
    }

    /// Positions of the nonzero columns, left to right.
    pub fn nonzero_columns(&self) -> Vec<usize> {
        (0..self.lows.len()).filter(|&c| self.lows[c].is_some()).collect()
    }

    /// The permutation sending the `k`-th nonzero column to the row of its
    /// lowest entry.
    pub fn sigma(&self) -> Permutation {
        let images: Vec<usize> = self.lows.iter().flatten().copied().collect();
        Permutation::from_zero_based(images).expect("a reduced presentation pairs every row once")
    }

    /// Bars `K(row degree, column degree)` over the pairs found by the
    /// reduction, dropping zero-length pairs.
    pub fn cokernel(&self) -> Result<Barcode> {
        let starts = &self.matrix.row_degrees;
        let ends: Vec<f64> = self.nonzero_columns().iter().map(|&c| self.matrix.col_degrees[c]).collect();
        cokernel_barcode(&self.sigma(), starts, &ends)
    }
}

/// Reads a barcode from a pairing: the `k`-th end degree is paired with the
/// start degree on row `σ(k)`, giving `K(starts[σ(k)], ends[k])`.
/// Zero-length pairs are dropped and a start after its end is an error.
pub fn cokernel_barcode(sigma: &Permutation, starts: &[f64], ends: &[f64]) -> Result<Barcode> {
    let n = sigma.len();
    if starts.len() != n || ends.len() != n {
        return Err(Error::Invalid(format!(
            "permutation of size {n} with {} starts and {} ends",
            starts.len(),
            ends.len()
        )));
    }
    let mut bars = Vec::new();
    for (k, &end) in ends.iter().enumerate() {
        let start = starts[sigma.apply(k)];
        match start.partial_cmp(&end) {
            Some(Ordering::Less) => bars.push(Bar::new(start, end)?),
            Some(Ordering::Equal) => {}
            _ => return Err(Error::InconsistentPairing { start, end }),
        }
    }
    Ok(Barcode::new(bars))
}
