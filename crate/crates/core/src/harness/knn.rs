//! Leave-one-out k-nearest-neighbour classification on a distance matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::learning::Label;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnnReport {
    pub k: usize,
    pub error_rate: f64,
    pub errors: usize,
    pub predictions: Vec<Label>,
}

/// Classifies every sample by the majority label of its `k` nearest other
/// samples. Equal distances are ordered by sample id; a tied vote goes to A.
pub fn knn_loocv(d: &[Vec<f64>], labels: &[Label], ids: &[String], k: usize) -> Result<KnnReport> {
    let n = d.len();
    if labels.len() != n || ids.len() != n || d.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("distance matrix, labels and ids disagree in size".into()));
    }
    if k == 0 || k >= n {
        return Err(Error::Invalid(format!("k must satisfy 1 <= k < {n} (got {k})")));
    }
    let mut predictions = Vec::with_capacity(n);
    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| d[i][a].total_cmp(&d[i][b]).then_with(|| ids[a].cmp(&ids[b])));
        let votes_a = others[..k].iter().filter(|&&j| labels[j] == Label::A).count();
        predictions.push(if 2 * votes_a >= k { Label::A } else { Label::B });
    }
    let errors = predictions.iter().zip(labels).filter(|(p, l)| p != l).count();
    Ok(KnnReport { k, error_rate: errors as f64 / n as f64, errors, predictions })
}
