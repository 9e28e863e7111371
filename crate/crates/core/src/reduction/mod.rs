//! Presentation matrices of morphisms between barcodes and their reduction
//! over F₂.

mod bar_to_bar;
pub mod bits;
mod epi;
mod example;
mod permutation;
mod presentation;
pub mod random;

pub use bar_to_bar::{bar_to_bar, BarToBar};
pub use epi::{build_copresentation, epi_bar_to_bar, epi_dual_reduce, Copresentation, EpiReduction};
pub use example::running_example;
pub use permutation::{perm_leq_oracle, Permutation, ORACLE_MAX_N};
pub use presentation::{
    build_presentation, cokernel_barcode, BarMorphism, ColumnKind, PresentationMatrix, Reduction,
};
