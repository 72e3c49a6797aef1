use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Which gray levels count as the shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarity {
    /// Gray value `>= threshold` is foreground.
    Bright,
    /// Gray value `< threshold` is foreground.
    Dark,
    /// Foreground is the minority class after thresholding; if one class is
    /// empty the non-empty one is used.
    #[default]
    Auto,
}

impl std::str::FromStr for Polarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bright" => Ok(Polarity::Bright),
            "dark" => Ok(Polarity::Dark),
            "auto" => Ok(Polarity::Auto),
            other => Err(Error::invalid(format!("unknown polarity `{other}`"))),
        }
    }
}

impl std::fmt::Display for Polarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarity::Bright => "bright",
            Polarity::Dark => "dark",
            Polarity::Auto => "auto",
        })
    }
}

/// Row-major foreground mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        if mask.len() != width * height {
            return Err(Error::invalid(format!(
                "mask length {} does not match {width}x{height}",
                mask.len()
            )));
        }
        Ok(BinaryImage {
            width,
            height,
            mask,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mask = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        BinaryImage::new(width, height, mask)
    }

    /// Parses an ASCII sketch: `#` (or `1`) is foreground, anything else is
    /// background. Rows are lines; short rows are padded with background.
    pub fn from_ascii(art: &str) -> Result<Self> {
        let rows: Vec<&str> = art.lines().filter(|l| !l.trim().is_empty()).collect();
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        BinaryImage::from_fn(width, rows.len(), |x, y| {
            matches!(rows[y].as_bytes().get(x), Some(b'#') | Some(b'1'))
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Foreground test; out-of-range coordinates are background.
    pub fn get(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.mask[y as usize * self.width + x as usize]
    }

    pub fn foreground_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn inverted(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    /// Writes a binary PGM (P5): foreground 255, background 0.
    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let mut bytes = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        bytes.extend(self.mask.iter().map(|&b| if b { 255u8 } else { 0 }));
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = fs::File::create(path).map_err(io_err)?;
        file.write_all(&bytes).map_err(io_err)
    }
}

fn read_gray(path: &Path) -> Result<image::GrayImage> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let decoded = image::load_from_memory(&bytes).map_err(|e| Error::Image {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(decoded.to_luma8())
}

/// Loads a raster image (PGM/PPM/PBM, PNG or GIF) and marks pixels with gray
/// value `>= threshold` as foreground.
pub fn load_binary_image(path: &Path, threshold: u8) -> Result<BinaryImage> {
    load_shape_image(path, threshold, Polarity::Bright)
}

/// Loads a raster image and thresholds it under the given polarity rule.
pub fn load_shape_image(path: &Path, threshold: u8, polarity: Polarity) -> Result<BinaryImage> {
    let gray = read_gray(path)?;
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    let bright: Vec<bool> = gray.as_raw().iter().map(|&g| g >= threshold).collect();
    let img = BinaryImage::new(w, h, bright)?;
    let img = apply_polarity(img, polarity);
    if img.foreground_count() == 0 {
        return Err(Error::ZeroForeground);
    }
    Ok(img)
}

fn apply_polarity(bright: BinaryImage, polarity: Polarity) -> BinaryImage {
    match polarity {
        Polarity::Bright => bright,
        Polarity::Dark => bright.inverted(),
        Polarity::Auto => {
            let fg = bright.foreground_count();
            let bg = bright.mask.len() - fg;
            if fg == 0 || (bg > 0 && bg < fg) {
                bright.inverted()
            } else {
                bright
            }
        }
    }
}
