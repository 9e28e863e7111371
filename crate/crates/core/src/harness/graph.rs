//! Graphs with real vertex values, read from `id,value` and `u,v` CSV files.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Undirected graph whose edges carry the larger of their endpoint values.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredGraph {
    values: Vec<f64>,
    edges: Vec<(usize, usize)>,
}

impl FilteredGraph {
    pub fn new(values: Vec<f64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("vertex value {v} is not finite")));
        }
        for &(u, v) in &edges {
            let max = values.len();
            for x in [u, v] {
                if x >= max {
                    return Err(Error::OutOfRange { index: x, max });
                }
            }
        }
        Ok(FilteredGraph { values, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_value(&self, k: usize) -> f64 {
        let (u, v) = self.edges[k];
        self.values[u].max(self.values[v])
    }

    /// Parses a vertex table `id,value` and an edge list `u,v` whose entries
    /// are vertex ids. Header lines and `#` comments are skipped.
    pub fn from_csv_str(vertices: &str, edges: &str) -> Result<Self> {
        let mut index = HashMap::new();
        let mut values = Vec::new();
        for (line_no, fields) in records(vertices) {
            let [id, value] = fields[..] else {
                return Err(Error::Parse { line: line_no, message: "expected `id,value`".into() });
            };
            let value: f64 = match value.parse() {
                Ok(v) => v,
                Err(_) if line_no == 1 && values.is_empty() => continue,
                Err(_) => return Err(Error::Parse { line: line_no, message: format!("bad value {value:?}") }),
            };
            if index.insert(id.to_string(), values.len()).is_some() {
                return Err(Error::Parse { line: line_no, message: format!("duplicate vertex {id:?}") });
            }
            values.push(value);
        }
        let mut edge_list = Vec::new();
        for (line_no, fields) in records(edges) {
            let [u, v] = fields[..] else {
                return Err(Error::Parse { line: line_no, message: "expected `u,v`".into() });
            };
            match (index.get(u), index.get(v)) {
                (Some(&a), Some(&b)) => edge_list.push((a, b)),
                _ if line_no == 1 && edge_list.is_empty() && (u, v) == ("u", "v") => continue,
                _ => {
                    return Err(Error::Parse { line: line_no, message: format!("unknown vertex in edge {u:?},{v:?}") })
                }
            }
        }
        FilteredGraph::new(values, edge_list)
    }

    pub fn load(vertices: &Path, edges: &Path) -> Result<Self> {
        let v = std::fs::read_to_string(vertices)?;
        let e = std::fs::read_to_string(edges)?;
        FilteredGraph::from_csv_str(&v, &e)
    }
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split(',').map(str::trim).collect()))
        }
    })
}
