use super::presentation::BarMorphism;
use crate::barcode::Barcode;

/// A small monomorphism with three domain bars and six codomain bars whose
/// presentation matrix exercises every branch of the bar-to-bar algorithm.
///
/// Codomain: `x1 = K(4,6)`, `x2 = K(2,9)`, `x3 = K(3,10)`, `x4 = K(5,11)`,
/// `x5 = K(0,12)`, `x6 = K(1,13)`. Domain: `z1 = K(5,10) ↦ x1 + x3`,
/// `z2 = K(7,10) ↦ x2 + x3`, `z3 = K(8,13) ↦ x4 + x5 + x6`.
///
/// On `[9, 10)` both `z1` and `z2` map to `x3`, so the map is not injective
/// at every degree even though it passes the presentation checks.
pub fn running_example() -> BarMorphism {
    let x = Barcode::from_pairs([
        (4.0, 6.0),
        (2.0, 9.0),
        (3.0, 10.0),
        (5.0, 11.0),
        (0.0, 12.0),
        (1.0, 13.0),
    ])
    .expect("valid bars");
    let z = Barcode::from_pairs([(5.0, 10.0), (7.0, 10.0), (8.0, 13.0)]).expect("valid bars");
    BarMorphism::new(z, x, vec![vec![0, 2], vec![1, 2], vec![4, 5, 3]]).expect("valid morphism")
}
