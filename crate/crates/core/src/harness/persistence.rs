//! Zero-dimensional persistence by union-find: super-level sets of images
//! and sub-level sets of vertex-filtered graphs.

use crate::barcode::{Bar, Barcode};
use crate::harness::graph::FilteredGraph;
use crate::harness::image::GrayImage;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Super-level persistence of an image, reported as `255 − intensity`.
///
/// Pixels enter in decreasing intensity, ties in row-major order, and join
/// their 4-neighbours. When two components meet at intensity `w` the younger
/// one (lower birth intensity, then later in row-major order) dies with bar
/// `[255 − v, 255 − w)`. The surviving component dies at `255 − min`.
/// Zero-length bars are dropped.
pub fn h0_superlevel(image: &GrayImage) -> Barcode {
    let (w, h) = (image.width(), image.height());
    let px = image.pixels();
    let n = px.len();
    if n == 0 {
        return Barcode::empty();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| px[b].cmp(&px[a]).then(a.cmp(&b)));
    // elder key of the root: (birth intensity, position in processing order)
    let mut rank_in_order = vec![0usize; n];
    for (k, &i) in order.iter().enumerate() {
        rank_in_order[i] = k;
    }
    let mut uf = UnionFind::new(n);
    let mut present = vec![false; n];
    let mut birth = vec![0u8; n];
    let mut bars = Vec::new();
    let t = |v: u8| 255.0 - f64::from(v);

    for &i in &order {
        present[i] = true;
        birth[i] = px[i];
        let (r, c) = (i / w, i % w);
        let mut neighbours = [usize::MAX; 4];
        if r > 0 {
            neighbours[0] = i - w;
        }
        if r + 1 < h {
            neighbours[1] = i + w;
        }
        if c > 0 {
            neighbours[2] = i - 1;
        }
        if c + 1 < w {
            neighbours[3] = i + 1;
        }
        for &j in &neighbours {
            if j == usize::MAX || !present[j] {
                continue;
            }
            let (a, b) = (uf.find(i), uf.find(j));
            if a == b {
                continue;
            }
            let a_elder = rank_in_order[a] < rank_in_order[b];
            let (elder, younger) = if a_elder { (a, b) } else { (b, a) };
            if birth[younger] > px[i] {
                bars.push(Bar::new(t(birth[younger]), t(px[i])).expect("birth before death"));
            }
            uf.parent[younger] = elder;
        }
    }
    let min = image.min().expect("non-empty image");
    let mut roots: Vec<usize> = (0..n).filter(|&i| uf.find(i) == i).collect();
    roots.sort_by_key(|&r| rank_in_order[r]);
    for r in roots {
        if birth[r] > min {
            bars.push(Bar::new(t(birth[r]), t(min)).expect("birth before death"));
        }
    }
    Barcode::new(bars)
}

/// Sub-level persistence of a vertex-filtered graph.
///
/// Vertices enter at their values and edges at the larger endpoint value,
/// vertices first at equal values. A merge kills the younger component
/// (larger birth, then larger vertex index). Every final component yields an
/// infinite bar. Zero-length bars are dropped.
pub fn h0_sublevel_graph(g: &FilteredGraph) -> Barcode {
    let n = g.vertex_count();
    let values = g.values();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut edges: Vec<(f64, usize, usize, usize)> =
        g.edges().iter().enumerate().map(|(k, &(u, v))| (g.edge_value(k), k, u, v)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut uf = UnionFind::new(n);
    let elder = |a: usize, b: usize| -> bool { values[a].total_cmp(&values[b]).then(a.cmp(&b)).is_lt() };
    let mut bars = Vec::new();
    // vertices are all present before any edge at the same value; an edge
    // never precedes its endpoints because its value is their maximum
    for &(w, _, u, v) in &edges {
        let (a, b) = (uf.find(u), uf.find(v));
        if a == b {
            continue;
        }
        let (old, young) = if elder(a, b) { (a, b) } else { (b, a) };
        if values[young] < w {
            bars.push(Bar::new(values[young], w).expect("birth before death"));
        }
        uf.parent[young] = old;
    }
    let mut roots: Vec<usize> = order.iter().copied().filter(|&i| uf.find(i) == i).collect();
    roots.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    for r in roots {
        bars.push(Bar::new(values[r], f64::INFINITY).expect("finite birth"));
    }
    Barcode::new(bars)
}
