//! Wasserstein distances between persistence diagrams and the closed forms
//! for distances to the zero module and to bar deletions.

use serde::{Deserialize, Serialize};

use crate::assignment::{bottleneck_assignment, min_cost_assignment};
use crate::barcode::{Bar, Barcode};
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::norms::{p_norm_unchecked, Exponent};

/// Largest `|D| + |D'|` accepted by [`wasserstein_qp_bruteforce`].
pub const BRUTE_FORCE_MAX_POINTS: usize = 8;

/// Parameters of a distance: the norm `p` measuring each bar, the norm `q`
/// aggregating costs, and the contour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricChoice {
    pub p: Exponent,
    pub q: Exponent,
    #[serde(default)]
    pub contour: Contour,
}

impl MetricChoice {
    pub fn new(p: Exponent, q: Exponent, contour: Contour) -> Result<Self> {
        Ok(MetricChoice { p: p.check()?, q: q.check()?, contour })
    }

    /// Standard contour.
    pub fn standard(p: Exponent, q: Exponent) -> Result<Self> {
        MetricChoice::new(p, q, Contour::Standard)
    }

    /// `2^((1-q)/q)`, or `1/2` for `q = ∞`.
    pub fn kappa(&self) -> f64 {
        self.q.kappa()
    }
}

/// `d_p(x, y) = ‖x - y‖_p`; two infinite points differ only in birth.
pub fn point_distance(x: &Bar, y: &Bar, p: Exponent) -> f64 {
    let db = (x.birth() - y.birth()).abs();
    match (x.is_infinite(), y.is_infinite()) {
        (true, true) => db,
        (false, false) => p_norm_unchecked(&[db, (x.death() - y.death()).abs()], p),
        _ => f64::INFINITY,
    }
}

/// `d_p(x, Δ) = ‖(ℓ/2, ℓ/2)‖_p` for `x = (a, b)` with `ℓ = b - a`.
pub fn diagonal_distance(x: &Bar, p: Exponent) -> f64 {
    let h = 0.5 * x.length();
    p_norm_unchecked(&[h, h], p)
}

fn split_infinite(d: &Barcode) -> (Vec<Bar>, Vec<f64>) {
    let mut finite = Vec::new();
    let mut inf_births = Vec::new();
    for bar in d {
        if bar.is_infinite() {
            inf_births.push(bar.birth());
        } else {
            finite.push(*bar);
        }
    }
    inf_births.sort_by(f64::total_cmp);
    (finite, inf_births)
}

/// `W^p_p(D, D')` by optimal assignment on the diagonally augmented cost
/// matrix; `p = ∞` gives the bottleneck distance.
///
/// Infinite points are matched among themselves in birth order and the
/// distance is `+∞` when their counts differ.
pub fn wasserstein_pp(d: &Barcode, e: &Barcode, p: Exponent) -> Result<f64> {
    let p = p.check()?;
    let (fd, id) = split_infinite(d);
    let (fe, ie) = split_infinite(e);
    if id.len() != ie.len() {
        return Ok(f64::INFINITY);
    }
    let inf_costs: Vec<f64> = id.iter().zip(&ie).map(|(a, c)| (a - c).abs()).collect();

    let (m, n) = (fd.len(), fe.len());
    let size = m + n;
    let mut dist = vec![vec![0.0f64; size]; size];
    for i in 0..m {
        let diag = diagonal_distance(&fd[i], p);
        for j in 0..n {
            dist[i][j] = point_distance(&fd[i], &fe[j], p);
        }
        for slot in dist[i].iter_mut().skip(n) {
            *slot = diag;
        }
    }
    for j in 0..n {
        let diag = diagonal_distance(&fe[j], p);
        for row in dist.iter_mut().skip(m) {
            row[j] = diag;
        }
    }

    match p {
        Exponent::Infinite => {
            let finite = bottleneck_assignment(&dist);
            Ok(inf_costs.iter().copied().fold(finite, f64::max))
        }
        Exponent::Finite(pv) => {
            let scale = dist.iter().flatten().chain(inf_costs.iter()).copied().fold(0.0f64, f64::max);
            if scale == 0.0 {
                return Ok(0.0);
            }
            let powered: Vec<Vec<f64>> =
                dist.iter().map(|row| row.iter().map(|c| (c / scale).powf(pv)).collect()).collect();
            let (_, finite) = min_cost_assignment(&powered);
            let inf: f64 = inf_costs.iter().map(|c| (c / scale).powf(pv)).sum();
            Ok(scale * (finite + inf).powf(1.0 / pv))
        }
    }
}

/// `W^q_p(D, D')` by enumerating every partial injection `D → D'`.
/// Only for `|D| + |D'| ≤ 8`.
pub fn wasserstein_qp_bruteforce(d: &Barcode, e: &Barcode, p: Exponent, q: Exponent) -> Result<f64> {
    let (p, q) = (p.check()?, q.check()?);
    if d.rank() + e.rank() > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "brute force supports at most {BRUTE_FORCE_MAX_POINTS} points, got {}",
            d.rank() + e.rank()
        )));
    }
    fn rec(
        i: usize,
        d: &[Bar],
        e: &[Bar],
        used: &mut [bool],
        costs: &mut Vec<f64>,
        p: Exponent,
        q: Exponent,
        best: &mut f64,
    ) {
        if i == d.len() {
            let base = costs.len();
            for (j, y) in e.iter().enumerate() {
                if !used[j] {
                    costs.push(diagonal_distance(y, p));
                }
            }
            *best = best.min(p_norm_unchecked(costs, q));
            costs.truncate(base);
            return;
        }
        costs.push(diagonal_distance(&d[i], p));
        rec(i + 1, d, e, used, costs, p, q, best);
        costs.pop();
        for j in 0..e.len() {
            if !used[j] {
                used[j] = true;
                costs.push(point_distance(&d[i], &e[j], p));
                rec(i + 1, d, e, used, costs, p, q, best);
                costs.pop();
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(0, d.bars(), e.bars(), &mut vec![false; e.rank()], &mut Vec::new(), p, q, &mut best);
    Ok(best)
}

/// Bars with their lifetimes, sorted by `(lifetime, birth, death)`.
pub fn sorted_by_lifetime(x: &Barcode, contour: &Contour) -> Vec<(f64, Bar)> {
    let mut v: Vec<(f64, Bar)> = x.iter().map(|b| (contour.bar_lifetime(b), *b)).collect();
    v.sort_by(|(la, a), (lb, b)| {
        la.total_cmp(lb)
            .then(a.birth().total_cmp(&b.birth()))
            .then(a.death().total_cmp(&b.death()))
    });
    v
}

/// Distance to the zero module: `κ(q) · ‖X‖_{p,C}`.
pub fn dist_to_zero(x: &Barcode, m: &MetricChoice) -> Result<f64> {
    Ok(m.kappa() * m.contour.pc_norm(x, m.p)?)
}

/// `X` with its `j` shortest bars (under the contour) removed.
pub fn delete_shortest(x: &Barcode, j: usize, contour: &Contour) -> Result<Barcode> {
    if j > x.rank() {
        return Err(Error::OutOfRange { index: j, max: x.rank() });
    }
    Ok(sorted_by_lifetime(x, contour).into_iter().skip(j).map(|(_, b)| b).collect())
}

/// Distance from `X` to `X` with its `j` shortest bars removed:
/// `κ(q) · ‖(ℓ_1, …, ℓ_j)‖_p` over the `j` smallest lifetimes.
pub fn dist_delete_shortest(x: &Barcode, j: usize, m: &MetricChoice) -> Result<f64> {
    if j > x.rank() {
        return Err(Error::OutOfRange { index: j, max: x.rank() });
    }
    let lifetimes: Vec<f64> = sorted_by_lifetime(x, &m.contour).into_iter().take(j).map(|(l, _)| l).collect();
    Ok(m.kappa() * p_norm_unchecked(&lifetimes, m.p.check()?))
}
