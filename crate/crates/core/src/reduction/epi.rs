//! Epimorphisms through copresentations.
//!
//! A copresentation of `f: Z ↠ X` is the matrix of `G_Z → R_Z ⊕ G_X`, with
//! cogenerators at deaths and corelations at births. Its row reduction from
//! top to bottom is the column reduction of its transpose once the degree
//! order is reversed, so the transpose is stored with every degree reflected
//! by `t ↦ T - t` (`+∞ ↦ -∞`). In reflected degrees it is the presentation
//! matrix of the dual monomorphism `X* ↪ Z*`, and all of the column machinery
//! applies unchanged.

use std::fmt;

use super::bar_to_bar::bar_to_bar;
use super::permutation::Permutation;
use super::presentation::{BarMorphism, ColumnKind, PresentationMatrix, Reduction};
use crate::barcode::{fmt_real, Bar, Barcode};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Copresentation {
    epi: BarMorphism,
    mirror: f64,
    transposed: PresentationMatrix,
}

/// Builds the copresentation of an epimorphism.
///
/// Rejects codomain generators outside the image, coefficients that are not
/// bar morphisms, and births that differ from the smallest birth in the
/// preimage support.
pub fn build_copresentation(f: &BarMorphism) -> Result<Copresentation> {
    f.check_coefficients().map_err(|e| Error::NotEpimorphism(e.to_string()))?;
    let mirror = f.max_degree();
    let reflect = |t: f64| if t.is_infinite() { f64::NEG_INFINITY } else { mirror - t };
    let x = f.codomain.bars();
    let z = f.domain.bars();
    let mut preimages = vec![Vec::new(); x.len()];
    for (i, img) in f.images.iter().enumerate() {
        for &j in img {
            preimages[j].push(i);
        }
    }
    let transposed = PresentationMatrix::from_degrees(
        &x.iter().map(|b| reflect(b.death())).collect::<Vec<_>>(),
        &x.iter().map(|b| reflect(b.birth())).collect::<Vec<_>>(),
        &z.iter().map(|b| reflect(b.death())).collect::<Vec<_>>(),
        &z.iter().map(|b| reflect(b.birth())).collect::<Vec<_>>(),
        &preimages,
    )
    .map_err(|msg| Error::NotEpimorphism(format!("dual check failed: {msg}")))?;
    Ok(Copresentation { epi: f.clone(), mirror, transposed })
}

impl Copresentation {
    pub fn morphism(&self) -> &BarMorphism {
        &self.epi
    }

    /// Reflection point `T` of the stored transpose.
    pub fn mirror(&self) -> f64 {
        self.mirror
    }

    /// The transpose in reflected degrees.
    pub fn transposed(&self) -> &PresentationMatrix {
        &self.transposed
    }

    /// Original degree of a column of the transpose: a domain birth for a
    /// corelation, a codomain death for a codomain cogenerator.
    fn column_degree(&self, c: usize) -> f64 {
        match self.transposed.col_kinds()[c] {
            ColumnKind::Generator { source } => self.epi.codomain.bars()[source].death(),
            ColumnKind::Relation { row } => {
                self.epi.domain.bars()[self.transposed.row_sources()[row]].birth()
            }
        }
    }

    fn row_degree(&self, r: usize) -> f64 {
        self.epi.domain.bars()[self.transposed.row_sources()[r]].death()
    }
}

impl fmt::Display for Copresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "transpose with degrees reflected at {}", fmt_real(self.mirror))?;
        write!(f, "{}", self.transposed)
    }
}

/// Result of [`epi_dual_reduce`].
#[derive(Clone, Debug)]
pub struct EpiReduction {
    pub reduction: Reduction,
    pub sigma: Permutation,
    pub kernel: Barcode,
}

/// Reduces a copresentation and reads off the kernel: each pair found by the
/// reduction gives the bar from the column's original degree to the death of
/// the paired domain cogenerator.
pub fn epi_dual_reduce(c: &Copresentation) -> Result<EpiReduction> {
    let reduction = c.transposed.reduce();
    let mut bars = Vec::new();
    for col in reduction.nonzero_columns() {
        let row = reduction.lows()[col].expect("nonzero column");
        let (start, end) = (c.column_degree(col), c.row_degree(row));
        if start > end {
            return Err(Error::InconsistentPairing { start, end });
        }
        if start < end {
            bars.push(Bar::new(start, end)?);
        }
    }
    let sigma = reduction.sigma();
    Ok(EpiReduction { reduction, sigma, kernel: Barcode::new(bars) })
}

/// The bar-to-bar epimorphism obtained by running the bar-to-bar algorithm on
/// the reflected transpose, together with its copresentation.
pub fn epi_bar_to_bar(c: &Copresentation) -> Result<(BarMorphism, Copresentation)> {
    let out = bar_to_bar(&c.transposed).map_err(|e| Error::NotEpimorphism(e.to_string()))?;
    let m = &out.bar_to_bar;
    let mut images = vec![Vec::new(); c.epi.domain.rank()];
    for col in m.generator_columns() {
        if let ColumnKind::Generator { source: j } = m.col_kinds()[col] {
            for r in m.column(col).ones() {
                images[m.row_sources()[r]].push(j);
            }
        }
    }
    let fb = BarMorphism::new(c.epi.domain.clone(), c.epi.codomain.clone(), images)?;
    let cb = build_copresentation(&fb)?;
    Ok((fb, cb))
}
