//! Synthetic image datasets: one bright block plus faint noise blocks on a
//! black canvas.
//!
//! Each image comes from its own ChaCha8 stream: the generator is seeded with
//! the dataset seed and the stream is `(class << 32) | index`, so changing the
//! number of samples never changes earlier images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::harness::image::GrayImage;
use crate::learning::Label;
use crate::par;

pub const CANVAS: usize = 128;
pub const HIGH_BLOCK: usize = 8;
pub const NOISE_BLOCK: usize = 2;
const MAX_PLACEMENT_ATTEMPTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetKind {
    /// Bright block 245–255 (A) or 200–210 (B); 50–100 noise blocks in both.
    One,
    /// Bright block 100–255 in both; 20–30 (A) or 120–130 (B) noise blocks.
    Two,
}

impl DatasetKind {
    pub fn from_number(n: u32) -> Option<Self> {
        match n {
            1 => Some(DatasetKind::One),
            2 => Some(DatasetKind::Two),
            _ => None,
        }
    }

    pub fn number(self) -> u32 {
        match self {
            DatasetKind::One => 1,
            DatasetKind::Two => 2,
        }
    }

    /// Inclusive intensity range of the bright block.
    pub fn high_range(self, label: Label) -> (u8, u8) {
        match (self, label) {
            (DatasetKind::One, Label::A) => (245, 255),
            (DatasetKind::One, Label::B) => (200, 210),
            (DatasetKind::Two, _) => (100, 255),
        }
    }

    /// Inclusive range of the number of noise blocks.
    pub fn noise_count_range(self, label: Label) -> (usize, usize) {
        match (self, label) {
            (DatasetKind::One, _) => (50, 100),
            (DatasetKind::Two, Label::A) => (20, 30),
            (DatasetKind::Two, Label::B) => (120, 130),
        }
    }
}

/// Inclusive intensity range of a noise block.
pub const NOISE_RANGE: (u8, u8) = (1, 10);

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticImage {
    pub id: String,
    pub label: Label,
    pub image: GrayImage,
    pub noise_blocks: usize,
}

struct Canvas {
    image: GrayImage,
    occupied: Vec<bool>,
}

impl Canvas {
    fn new() -> Self {
        Canvas { image: GrayImage::filled(CANVAS, CANVAS, 0), occupied: vec![false; CANVAS * CANVAS] }
    }

    /// The block together with a one-pixel margin is free.
    fn is_free(&self, r: usize, c: usize, size: usize) -> bool {
        let r0 = r.saturating_sub(1);
        let c0 = c.saturating_sub(1);
        let r1 = (r + size + 1).min(CANVAS);
        let c1 = (c + size + 1).min(CANVAS);
        (r0..r1).all(|y| (c0..c1).all(|x| !self.occupied[y * CANVAS + x]))
    }

    /// Places a block at a random free position; `value` gives each pixel.
    fn place(&mut self, rng: &mut ChaCha8Rng, size: usize, mut value: impl FnMut(&mut ChaCha8Rng) -> u8) {
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            let r = rng.random_range(0..=CANVAS - size);
            let c = rng.random_range(0..=CANVAS - size);
            if self.is_free(r, c, size) {
                for y in r..r + size {
                    for x in c..c + size {
                        self.occupied[y * CANVAS + x] = true;
                        let v = value(rng);
                        self.image.set(y, x, v);
                    }
                }
                return;
            }
        }
        panic!("canvas too crowded to place a {size}x{size} block");
    }
}

fn stream(label: Label, index: usize) -> u64 {
    let class = match label {
        Label::A => 0u64,
        Label::B => 1u64,
    };
    (class << 32) | index as u64
}

/// One image of a dataset, determined by `(kind, seed, label, index)`.
pub fn generate_image(kind: DatasetKind, seed: u64, label: Label, index: usize) -> SyntheticImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream(label, index));
    let (lo, hi) = kind.high_range(label);
    let (nlo, nhi) = kind.noise_count_range(label);
    let count = rng.random_range(nlo..=nhi);
    let mut canvas = Canvas::new();
    canvas.place(&mut rng, HIGH_BLOCK, |r| r.random_range(lo..=hi));
    for _ in 0..count {
        let v = rng.random_range(NOISE_RANGE.0..=NOISE_RANGE.1);
        canvas.place(&mut rng, NOISE_BLOCK, |_| v);
    }
    SyntheticImage {
        id: format!("{}{:03}", label.to_string().to_lowercase(), index),
        label,
        image: canvas.image,
        noise_blocks: count,
    }
}

/// `n_per_class` images of class A followed by `n_per_class` of class B.
pub fn generate(kind: DatasetKind, n_per_class: usize, seed: u64) -> Vec<SyntheticImage> {
    par::map_range(2 * n_per_class, |i| {
        let (label, idx) = if i < n_per_class { (Label::A, i) } else { (Label::B, i - n_per_class) };
        generate_image(kind, seed, label, idx)
    })
}

pub fn gen_dataset1(n_per_class: usize, seed: u64) -> Vec<SyntheticImage> {
    generate(DatasetKind::One, n_per_class, seed)
}

pub fn gen_dataset2(n_per_class: usize, seed: u64) -> Vec<SyntheticImage> {
    generate(DatasetKind::Two, n_per_class, seed)
}
