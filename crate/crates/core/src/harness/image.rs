//! 8-bit grayscale images and binary PGM (P5) files.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Row-major pixels.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Invalid(format!(
                "{}x{} image needs {} pixels, got {}",
                width,
                height,
                width * height,
                pixels.len()
            )));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage { width, height, pixels: vec![value; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn min(&self) -> Option<u8> {
        self.pixels.iter().copied().min()
    }

    pub fn max(&self) -> Option<u8> {
        self.pixels.iter().copied().max()
    }

    pub fn transpose(&self) -> GrayImage {
        let mut out = GrayImage::filled(self.height, self.width, 0);
        for r in 0..self.height {
            for c in 0..self.width {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)?;
        Ok(())
    }

    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() + 20);
        self.write_pgm(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    /// Parses a binary PGM with maxval at most 255. `#` comments in the
    /// header are skipped.
    pub fn from_pgm_bytes(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Invalid("truncated PGM header".into()));
            }
            fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
        if fields[0] != "P5" {
            return Err(Error::Invalid(format!("not a binary PGM (magic {:?})", fields[0])));
        }
        let num = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Invalid(format!("bad PGM {what}: {s:?}")))
        };
        let width = num(&fields[1], "width")?;
        let height = num(&fields[2], "height")?;
        let maxval = num(&fields[3], "maxval")?;
        if maxval == 0 || maxval > 255 {
            return Err(Error::Invalid(format!("unsupported PGM maxval {maxval}")));
        }
        // exactly one whitespace byte separates the header from the raster
        pos += 1;
        let raster = bytes.get(pos..).unwrap_or(&[]);
        if raster.len() < width * height {
            return Err(Error::Invalid(format!(
                "PGM raster has {} bytes, expected {}",
                raster.len(),
                width * height
            )));
        }
        GrayImage::new(width, height, raster[..width * height].to_vec())
    }

    pub fn read_pgm<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        GrayImage::from_pgm_bytes(&bytes)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        GrayImage::from_pgm_bytes(&bytes).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_pgm_bytes())?;
        Ok(())
    }
}
