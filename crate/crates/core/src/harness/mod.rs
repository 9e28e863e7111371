//! Synthetic datasets, zero-dimensional persistence and nearest-neighbour
//! evaluation.

pub mod graph;
pub mod image;
pub mod knn;
pub mod manifest;
pub mod persistence;
pub mod synthetic;

pub use graph::FilteredGraph;
pub use image::GrayImage;
pub use knn::{knn_loocv, KnnReport};
pub use manifest::{write_synthetic, Manifest, ManifestEntry};
pub use persistence::{h0_sublevel_graph, h0_superlevel};
pub use synthetic::{gen_dataset1, gen_dataset2, generate, generate_image, DatasetKind, SyntheticImage};

use crate::distance::MetricChoice;
use crate::error::Result;
use crate::learning::LabeledDataset;

/// Leave-one-out error of a dataset under the interleaving distance of `m`.
pub fn evaluate(data: &LabeledDataset, m: &MetricChoice, k: usize) -> Result<KnnReport> {
    let d = crate::learning::pairwise_distances(&data.barcodes(), m);
    let ids: Vec<String> = data.samples().iter().map(|s| s.id.clone()).collect();
    knn_loocv(&d, &data.labels(), &ids, k)
}
