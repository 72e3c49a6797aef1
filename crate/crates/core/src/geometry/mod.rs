//! Planar geometry: binary images, outer-contour tracing, arc-length
//! resampling and centroids.

mod image;
mod trace;

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

pub use self::image::{load_binary_image, load_shape_image, BinaryImage, Polarity};
pub use self::trace::{extract_contour, largest_component};

/// Default number of points a contour is resampled to.
pub const DEFAULT_POINT_COUNT: usize = 100;

/// A point in pixel units. `x` runs along image columns, `y` along rows.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Rotation by `theta` radians about the origin.
    pub fn rotated(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Winding direction, measured by the sign of the shoelace area in the
/// contour's own `(x, y)` frame. With image coordinates (`y` pointing down)
/// a counterclockwise contour appears clockwise on screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    CounterClockwise,
}

/// A closed polygon given by its vertices in cyclic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    points: Vec<Point>,
    orientation: Orientation,
}

impl Contour {
    /// Builds a contour, checking that it has at least three finite points
    /// and that no two cyclically consecutive points coincide.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooSmall(format!(
                "contour needs at least 3 points, got {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::invalid(format!("non-finite contour point {p:?}")));
        }
        let n = points.len();
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(Error::invalid(format!(
                    "contour points {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        let orientation = if signed_area(&points) >= 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        };
        Ok(Contour {
            points,
            orientation,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Point at a cyclic index.
    pub fn at(&self, i: usize) -> Point {
        self.points[i % self.points.len()]
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    /// Length of the closed polyline, including the closing edge.
    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].dist(self.points[(i + 1) % n]))
            .sum()
    }

    pub fn centroid(&self) -> Point {
        centroid(self)
    }

    /// Same vertices walked in the opposite direction, keeping the first point.
    pub fn reversed(&self) -> Contour {
        let mut points = Vec::with_capacity(self.points.len());
        points.push(self.points[0]);
        points.extend(self.points[1..].iter().rev());
        Contour::new(points).expect("reversal preserves contour validity")
    }

    /// Applies `f` to every vertex.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Contour> {
        Contour::new(self.points.iter().map(|&p| f(p)).collect())
    }

    /// Rotates the vertex list so that index `start` becomes index 0.
    pub fn rotated_start(&self, start: usize) -> Contour {
        let n = self.points.len();
        let points = (0..n).map(|i| self.points[(start + i) % n]).collect();
        Contour {
            points,
            orientation: self.orientation,
        }
    }

    /// Renders as `N <count>` followed by one `x y` line per point.
    pub fn to_text(&self) -> String {
        let mut out = format!("N {}\n", self.points.len());
        for p in &self.points {
            out.push_str(&format!("{} {}\n", p.x, p.y));
        }
        out
    }
}

impl fmt::Display for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Contour {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty contour"))?;
        let count: usize = header
            .strip_prefix("N ")
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| Error::parse(1, "expected header `N <count>`"))?;
        let mut points = Vec::with_capacity(count);
        for (idx, line) in lines {
            let mut fields = line.split_whitespace().map(str::parse::<f64>);
            match (fields.next(), fields.next(), fields.next()) {
                (Some(Ok(x)), Some(Ok(y)), None) => points.push(Point::new(x, y)),
                _ => return Err(Error::parse(idx + 1, format!("bad point line `{line}`"))),
            }
        }
        if points.len() != count {
            return Err(Error::parse(
                1,
                format!("header says {count} points, found {}", points.len()),
            ));
        }
        Contour::new(points)
    }
}

fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| points[i].cross(points[(i + 1) % n]))
        .sum::<f64>()
}

/// Arithmetic mean of the contour vertices.
pub fn centroid(c: &Contour) -> Point {
    mean_point(c.points())
}

pub(crate) fn mean_point(points: &[Point]) -> Point {
    let n = points.len() as f64;
    let sum = points.iter().fold(Point::default(), |acc, &p| acc + p);
    Point::new(sum.x / n, sum.y / n)
}

/// Resamples `c` to `n` points at equal arc-length spacing along the closed
/// polyline, starting at the original first point.
pub fn resample_contour(c: &Contour, n: usize) -> Result<Contour> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "resample count must be >= 3, got {n}"
        )));
    }
    let pts = c.points();
    let m = pts.len();
    let perimeter = c.perimeter();
    if perimeter <= 0.0 {
        return Err(Error::Degenerate("contour perimeter is zero".into()));
    }
    let step = perimeter / n as f64;

    let mut out = Vec::with_capacity(n);
    out.push(pts[0]);
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut seg_len = pts[0].dist(pts[1 % m]);
    for k in 1..n {
        let target = k as f64 * step;
        while seg_start + seg_len < target && seg < m - 1 {
            seg_start += seg_len;
            seg += 1;
            seg_len = pts[seg].dist(pts[(seg + 1) % m]);
        }
        let a = pts[seg];
        let b = pts[(seg + 1) % m];
        let t = ((target - seg_start) / seg_len).clamp(0.0, 1.0);
        out.push(if t == 0.0 {
            a
        } else if t == 1.0 {
            b
        } else {
            a + (b - a) * t
        });
    }
    Contour::new(out)
}
