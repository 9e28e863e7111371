use super::presentation::{BarMorphism, ColumnKind, PresentationMatrix};
use crate::error::{Error, Result};

/// Output of [`bar_to_bar`].
#[derive(Clone, Debug)]
pub struct BarToBar {
    /// The input after the partial reductions performed along the way.
    pub partially_reduced: PresentationMatrix,
    /// Same labels as the input; each generator column keeps a single entry.
    pub bar_to_bar: PresentationMatrix,
    /// `(generator column, relation column)` pairs of the rightmost matched
    /// column map, sorted by generator column.
    pub r_max: Vec<(usize, usize)>,
}

impl BarToBar {
    /// The bar-to-bar morphism presented by [`BarToBar::bar_to_bar`], with
    /// the domain and codomain of `original`.
    pub fn morphism(&self, original: &BarMorphism) -> BarMorphism {
        let m = &self.bar_to_bar;
        let mut images = vec![Vec::new(); original.domain.rank()];
        for c in m.generator_columns() {
            if let ColumnKind::Generator { source } = m.col_kinds()[c] {
                images[source] = m.column(c).ones().map(|r| m.row_sources()[r]).collect();
            }
        }
        BarMorphism {
            domain: original.domain.clone(),
            codomain: original.codomain.clone(),
            images,
        }
    }

    pub fn r_max_of(&self, generator_column: usize) -> Option<usize> {
        self.r_max.iter().find(|(z, _)| *z == generator_column).map(|&(_, r)| r)
    }
}

/// Bar-to-bar algorithm.
///
/// Relation columns are visited right to left. For the relation `r` of row
/// `x`, the leftmost generator column `z` with an entry on `x` and no match
/// yet is matched to `r`; `M_b` keeps the single entry `(x, z)`. Every later
/// generator column with an entry on `x` is then reduced by `z`, and
/// afterwards by each relation column to its left on whose row it still has
/// an entry.
pub fn bar_to_bar(m: &PresentationMatrix) -> Result<BarToBar> {
    let mut star = m.clone();
    let mut b = m.clone();
    let generators = m.generator_columns();
    for &z in &generators {
        b.column_mut(z).clear();
    }
    let relation_of_row: Vec<usize> = {
        let mut v = vec![usize::MAX; m.n_rows()];
        for c in m.relation_columns() {
            if let ColumnKind::Relation { row } = m.col_kinds()[c] {
                v[row] = c;
            }
        }
        v
    };
    let mut matched: Vec<Option<usize>> = vec![None; m.n_cols()];

    for r in m.relation_columns().into_iter().rev() {
        let ColumnKind::Relation { row: x } = m.col_kinds()[r] else { unreachable!() };
        let Some(&z) = generators.iter().find(|&&z| star.entry(x, z) && matched[z].is_none()) else {
            continue;
        };
        b.column_mut(z).set(x, true);
        matched[z] = Some(r);
        for &z2 in generators.iter().filter(|&&z2| z2 > z) {
            if !star.entry(x, z2) {
                continue;
            }
            star.add_column(z, z2);
            let rows: Vec<usize> = star.column(z2).ones().collect();
            for row in rows {
                let r2 = relation_of_row[row];
                if r2 < z2 {
                    star.add_column(r2, z2);
                }
            }
        }
    }

    let mut r_max = Vec::with_capacity(generators.len());
    for &z in &generators {
        match matched[z] {
            Some(r) if r > z => r_max.push((z, r)),
            Some(r) => {
                return Err(Error::NotMonomorphism(format!(
                    "column {z} matched to relation column {r} on its left"
                )))
            }
            None => {
                return Err(Error::NotMonomorphism(format!(
                    "no rightmost matched column for generator column {z}"
                )))
            }
        }
    }
    Ok(BarToBar { partially_reduced: star, bar_to_bar: b, r_max })
}
