//! Dataset manifests: a JSON list of labelled samples whose files live next
//! to the manifest.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::barcode::Barcode;
use crate::error::{Error, Result};
use crate::harness::graph::FilteredGraph;
use crate::harness::image::GrayImage;
use crate::harness::persistence::{h0_sublevel_graph, h0_superlevel};
use crate::harness::synthetic::{DatasetKind, SyntheticImage};
use crate::learning::{Label, LabeledDataset, Sample};
use crate::par;

/// One sample. Paths are relative to the manifest directory. The barcode is
/// read from `barcode` if given, else computed from `image` (super-level) or
/// from `vertices` and `edges` (sub-level).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barcode: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_per_class: Option<usize>,
    pub samples: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Manifest::from_json(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Reads or computes every barcode. `dir` is the manifest directory.
    pub fn load_dataset(&self, dir: &Path) -> Result<LabeledDataset> {
        let loaded = par::map_range(self.samples.len(), |i| entry_barcode(&self.samples[i], dir));
        let mut samples = Vec::with_capacity(loaded.len());
        for (entry, barcode) in self.samples.iter().zip(loaded) {
            samples.push(Sample { id: entry.id.clone(), label: entry.label, barcode: barcode? });
        }
        LabeledDataset::new(samples)
    }
}

fn entry_barcode(e: &ManifestEntry, dir: &Path) -> Result<Barcode> {
    let context = |err: Error, p: &Path| Error::Invalid(format!("sample {}: {}: {err}", e.id, p.display()));
    if let Some(p) = &e.barcode {
        let p = dir.join(p);
        let text = std::fs::read_to_string(&p).map_err(|err| context(err.into(), &p))?;
        return Barcode::from_csv_str(&text).map_err(|err| context(err, &p));
    }
    if let Some(p) = &e.image {
        let p = dir.join(p);
        return Ok(h0_superlevel(&GrayImage::load(&p)?));
    }
    if let (Some(v), Some(ed)) = (&e.vertices, &e.edges) {
        let g = FilteredGraph::load(&dir.join(v), &dir.join(ed))?;
        return Ok(h0_sublevel_graph(&g));
    }
    Err(Error::Invalid(format!("sample {} names no barcode, image or graph", e.id)))
}

/// Writes `images/<id>.pgm`, `barcodes/<id>.csv` and `manifest.json` under
/// `dir` and returns the manifest.
pub fn write_synthetic(
    dir: &Path,
    samples: &[SyntheticImage],
    kind: DatasetKind,
    seed: u64,
    n_per_class: usize,
) -> Result<Manifest> {
    std::fs::create_dir_all(dir.join("images"))?;
    std::fs::create_dir_all(dir.join("barcodes"))?;
    let barcodes = par::map_range(samples.len(), |i| h0_superlevel(&samples[i].image));
    let mut entries = Vec::with_capacity(samples.len());
    for (s, b) in samples.iter().zip(&barcodes) {
        let image = PathBuf::from("images").join(format!("{}.pgm", s.id));
        let barcode = PathBuf::from("barcodes").join(format!("{}.csv", s.id));
        s.image.save(&dir.join(&image))?;
        std::fs::write(dir.join(&barcode), b.to_csv_string())?;
        entries.push(ManifestEntry {
            id: s.id.clone(),
            label: s.label,
            barcode: Some(barcode),
            image: Some(image),
            vertices: None,
            edges: None,
        });
    }
    let manifest = Manifest {
        dataset: Some(kind.number()),
        seed: Some(seed),
        n_per_class: Some(n_per_class),
        samples: entries,
    };
    manifest.save(&dir.join("manifest.json"))?;
    Ok(manifest)
}
