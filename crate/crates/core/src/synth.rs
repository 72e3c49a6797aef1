//! Synthetic shapes for demos, tests and the built-in mini benchmark.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{resample_contour, BinaryImage, Contour, Point};
use crate::retrieval::{DatasetManifest, ManifestEntry};

/// Axis-aligned rectangle centered on the origin, counterclockwise.
pub fn rectangle(width: f64, height: f64) -> Vec<Point> {
    let (w, h) = (width / 2.0, height / 2.0);
    vec![
        Point::new(-w, -h),
        Point::new(w, -h),
        Point::new(w, h),
        Point::new(-w, h),
    ]
}

pub fn square(side: f64) -> Vec<Point> {
    rectangle(side, side)
}

/// Star with `spikes` outer tips alternating with inner vertices.
pub fn star(spikes: usize, outer: f64, inner: f64) -> Vec<Point> {
    (0..2 * spikes)
        .map(|i| {
            let r = if i % 2 == 0 { outer } else { inner };
            let t = PI * i as f64 / spikes as f64 - PI / 2.0;
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

/// Polygonal ellipse with `segments` vertices.
pub fn ellipse(a: f64, b: f64, segments: usize) -> Vec<Point> {
    (0..segments)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / segments as f64;
            Point::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

/// Regularly spaced contour points along a closed polygon.
pub fn sample_polygon(vertices: &[Point], n: usize) -> Result<Contour> {
    resample_contour(&Contour::new(vertices.to_vec())?, n)
}

/// Even-odd point-in-polygon test.
pub fn contains(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Fills the polygon into a `width x height` mask, sampling pixel centers.
pub fn rasterize(poly: &[Point], width: usize, height: usize) -> Result<BinaryImage> {
    BinaryImage::from_fn(width, height, |x, y| {
        contains(poly, Point::new(x as f64 + 0.5, y as f64 + 0.5))
    })
}

/// Random similarity placement plus per-vertex jitter.
#[derive(Debug, Clone, Copy)]
pub struct Placement {
    pub rotation: f64,
    pub scale: f64,
    pub center: Point,
    /// Standard deviation of vertex jitter, in units of the shape's size.
    pub jitter: f64,
}

impl Placement {
    pub fn random(rng: &mut impl Rng, canvas: usize) -> Self {
        let c = canvas as f64;
        Placement {
            rotation: rng.gen_range(0.0..2.0 * PI),
            scale: rng.gen_range(0.85..1.15),
            center: Point::new(
                c / 2.0 + rng.gen_range(-0.08..0.08) * c,
                c / 2.0 + rng.gen_range(-0.08..0.08) * c,
            ),
            jitter: 0.01,
        }
    }

    pub fn apply(&self, poly: &[Point], size: f64, rng: &mut impl Rng) -> Vec<Point> {
        poly.iter()
            .map(|&p| {
                let noise = Point::new(
                    rng.gen_range(-1.0..1.0) * self.jitter * size,
                    rng.gen_range(-1.0..1.0) * self.jitter * size,
                );
                (p + noise).rotated(self.rotation) * self.scale + self.center
            })
            .collect()
    }
}

/// Shape families of the mini benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeClass {
    Square,
    Rectangle,
    Star,
    Ellipse,
}

impl ShapeClass {
    pub const ALL: [ShapeClass; 4] = [
        ShapeClass::Square,
        ShapeClass::Rectangle,
        ShapeClass::Star,
        ShapeClass::Ellipse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeClass::Square => "square",
            ShapeClass::Rectangle => "rectangle",
            ShapeClass::Star => "star",
            ShapeClass::Ellipse => "ellipse",
        }
    }

    /// Prototype outline sized for a canvas of `canvas` pixels, and its
    /// characteristic size.
    pub fn prototype(self, canvas: usize) -> (Vec<Point>, f64) {
        let s = canvas as f64 * 0.3;
        let poly = match self {
            ShapeClass::Square => square(1.4 * s),
            ShapeClass::Rectangle => rectangle(2.1 * s, 0.7 * s),
            ShapeClass::Star => star(5, 1.1 * s, 0.45 * s),
            ShapeClass::Ellipse => ellipse(1.05 * s, 0.6 * s, 72),
        };
        (poly, s)
    }
}

/// Side length of generated images.
pub const CANVAS: usize = 128;

/// One randomly placed instance of `class`, rasterized.
pub fn instance(class: ShapeClass, rng: &mut impl Rng) -> Result<BinaryImage> {
    let (proto, size) = class.prototype(CANVAS);
    let placement = Placement::random(rng, CANVAS);
    rasterize(&placement.apply(&proto, size, rng), CANVAS, CANVAS)
}

/// Writes `per_class` instances of every [`ShapeClass`] as PGM files into
/// `dir` and returns their manifest. Identical seeds give identical files.
pub fn write_benchmark_set(dir: &Path, per_class: usize, seed: u64) -> Result<DatasetManifest> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for class in ShapeClass::ALL {
        for i in 0..per_class {
            let img = instance(class, &mut rng)?;
            let shape_id = format!("{}-{:02}", class.name(), i + 1);
            let path: PathBuf = dir.join(format!("{shape_id}.pgm"));
            img.write_pgm(&path)?;
            entries.push(ManifestEntry {
                shape_id,
                class_label: class.name().to_string(),
                image_path: path,
            });
        }
    }
    DatasetManifest::new(entries)
}
