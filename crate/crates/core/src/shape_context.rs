//! Log-polar shape contexts, the chi-square matching cost between them and
//! an order-preserving cyclic point correspondence found by dynamic
//! programming.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Default cost charged for leaving a point unmatched in [`correspond`].
pub const DEFAULT_SKIP_PENALTY: f64 = 0.3;

/// Direction against which bin angles are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleReference {
    /// Positive x-axis of the image frame.
    #[default]
    GlobalX,
    /// Local tangent at the reference point, estimated from its two contour
    /// neighbors. Makes histograms rotation invariant.
    Tangent,
}

/// Log-polar binning layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinConfig {
    pub radial_bins: usize,
    pub angular_bins: usize,
    /// Innermost radial edge as a fraction of the outer radius.
    pub r_inner: f64,
    /// Outer radius as a multiple of the mean pairwise point distance.
    pub r_outer_scale: f64,
    pub angle_reference: AngleReference,
}

impl Default for BinConfig {
    fn default() -> Self {
        BinConfig {
            radial_bins: 5,
            angular_bins: 12,
            r_inner: 0.125,
            r_outer_scale: 2.0,
            angle_reference: AngleReference::GlobalX,
        }
    }
}

impl BinConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radial_bins == 0 || self.angular_bins == 0 {
            return Err(Error::invalid("bin counts must be at least 1"));
        }
        if !(self.r_inner > 0.0 && self.r_inner < 1.0) {
            return Err(Error::invalid(format!(
                "r_inner must lie in (0, 1), got {}",
                self.r_inner
            )));
        }
        if !(self.r_outer_scale > 0.0 && self.r_outer_scale.is_finite()) {
            return Err(Error::invalid("r_outer_scale must be positive"));
        }
        Ok(())
    }

    pub fn bin_count(&self) -> usize {
        self.radial_bins * self.angular_bins
    }

    /// Normalized radial edges `r_inner = e_0 < e_1 < ... < e_R = 1`, evenly
    /// spaced in log radius.
    fn radial_edges(&self) -> Vec<f64> {
        let r = self.radial_bins as f64;
        (0..=self.radial_bins)
            .map(|k| {
                if k == self.radial_bins {
                    1.0
                } else {
                    self.r_inner.powf(1.0 - k as f64 / r)
                }
            })
            .collect()
    }
}

/// Per-point bin counts, indexed `radial * angular_bins + angular`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u32>,
}

impl Histogram {
    pub fn new(counts: Vec<u32>) -> Self {
        Histogram { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Counts divided by their total; an empty histogram normalizes to zeros.
    pub fn normalized(&self) -> Vec<f64> {
        let total = self.total();
        if total == 0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect()
    }
}

/// Mean Euclidean distance over all unordered point pairs.
pub fn mean_pairwise_distance(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let sum: f64 = (0..n)
        .map(|i| (i + 1..n).map(|j| points[i].dist(points[j])).sum::<f64>())
        .sum();
    sum / (n * (n - 1) / 2) as f64
}

struct Binner {
    cfg: BinConfig,
    edges: Vec<f64>,
    outer_radius: f64,
}

impl Binner {
    fn new(points: &[Point], cfg: BinConfig) -> Result<Self> {
        cfg.validate()?;
        let outer_radius = cfg.r_outer_scale * mean_pairwise_distance(points);
        if outer_radius.is_nan() || outer_radius <= 0.0 {
            return Err(Error::Degenerate(
                "all points coincide; outer radius is zero".into(),
            ));
        }
        Ok(Binner {
            edges: cfg.radial_edges(),
            cfg,
            outer_radius,
        })
    }

    fn reference_angle(&self, points: &[Point], i: usize) -> f64 {
        match self.cfg.angle_reference {
            AngleReference::GlobalX => 0.0,
            AngleReference::Tangent => {
                let n = points.len();
                let d = points[(i + 1) % n] - points[(i + n - 1) % n];
                if d.norm() == 0.0 {
                    0.0
                } else {
                    d.y.atan2(d.x)
                }
            }
        }
    }

    fn histogram(&self, points: &[Point], i: usize) -> Histogram {
        let cfg = &self.cfg;
        let mut counts = vec![0u32; cfg.bin_count()];
        let p = points[i];
        let reference = self.reference_angle(points, i);
        for (j, &q) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = q - p;
            let rho = d.norm() / self.outer_radius;
            if rho > 1.0 {
                continue;
            }
            // first edge above rho; values under r_inner fall in bin 0
            let radial = self.edges[1..]
                .iter()
                .position(|&e| rho < e)
                .unwrap_or(cfg.radial_bins - 1);
            let mut theta = d.y.atan2(d.x) - reference;
            theta = theta.rem_euclid(2.0 * PI);
            let angular =
                ((theta / (2.0 * PI) * cfg.angular_bins as f64) as usize).min(cfg.angular_bins - 1);
            counts[radial * cfg.angular_bins + angular] += 1;
        }
        Histogram { counts }
    }
}

/// Shape context of point `i`: counts of the other points falling in each
/// log-polar bin around it. The outer radius is derived from the whole
/// point set; points beyond it are not counted.
pub fn compute_histogram(points: &[Point], i: usize, cfg: &BinConfig) -> Result<Histogram> {
    if i >= points.len() {
        return Err(Error::invalid(format!(
            "point index {i} out of range for {} points",
            points.len()
        )));
    }
    Ok(Binner::new(points, *cfg)?.histogram(points, i))
}

/// One shape context per point, all sharing one bin configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeContextDescriptor {
    histograms: Vec<Histogram>,
    config: BinConfig,
}

impl ShapeContextDescriptor {
    pub fn new(histograms: Vec<Histogram>, config: BinConfig) -> Result<Self> {
        config.validate()?;
        let k = config.bin_count();
        if let Some(h) = histograms.iter().find(|h| h.len() != k) {
            return Err(Error::invalid(format!(
                "histogram has {} bins, configuration needs {k}",
                h.len()
            )));
        }
        Ok(ShapeContextDescriptor { histograms, config })
    }

    pub fn histograms(&self) -> &[Histogram] {
        &self.histograms
    }

    pub fn config(&self) -> &BinConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.histograms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.histograms.is_empty()
    }

    /// `SC <n> <radial> <angular>` then one line of bin counts per point.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "SC {} {} {}\n",
            self.histograms.len(),
            self.config.radial_bins,
            self.config.angular_bins
        );
        for h in &self.histograms {
            let row: Vec<String> = h.counts.iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output. The header's bin counts
    /// replace those in `base`; the remaining fields are taken from `base`.
    pub fn from_text(text: &str, base: BinConfig) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty descriptor"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(1, "bad header"))
        };
        if fields.len() != 4 || fields[0] != "SC" {
            return Err(Error::parse(1, "expected `SC <n> <radial> <angular>`"));
        }
        let (n, radial, angular) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
        let config = BinConfig {
            radial_bins: radial,
            angular_bins: angular,
            ..base
        };
        let mut histograms = Vec::with_capacity(n);
        for (idx, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
            let counts = line
                .split_whitespace()
                .map(|c| c.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            histograms.push(Histogram { counts });
        }
        if histograms.len() != n {
            return Err(Error::parse(1, format!("expected {n} histograms")));
        }
        ShapeContextDescriptor::new(histograms, config)
    }
}

/// Shape contexts for every point of a contour.
pub fn descriptor(points: &[Point], cfg: &BinConfig) -> Result<ShapeContextDescriptor> {
    let binner = Binner::new(points, *cfg)?;
    let histograms = (0..points.len())
        .into_par_iter()
        .map(|i| binner.histogram(points, i))
        .collect();
    Ok(ShapeContextDescriptor {
        histograms,
        config: *cfg,
    })
}

/// Chi-square statistic between the normalized forms of two histograms:
/// `1/2 * sum (a_k - b_k)^2 / (a_k + b_k)`, skipping empty bins. Always in
/// `[0, 1]`.
pub fn match_cost(a: &Histogram, b: &Histogram) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "histogram sizes differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.normalized(), b.normalized());
    let sum: f64 = na
        .iter()
        .zip(&nb)
        .filter(|(x, y)| *x + *y > 0.0)
        .map(|(x, y)| (x - y) * (x - y) / (x + y))
        .sum();
    Ok(0.5 * sum)
}

/// Dense matching costs between two descriptors.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::invalid("cost matrix entry count mismatch"));
        }
        if entries.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::invalid(
                "cost entries must be finite and non-negative",
            ));
        }
        Ok(CostMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        CostMatrix::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> CostMatrix {
        CostMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
            .expect("transpose keeps entries valid")
    }

    /// Tab-separated rows, one line per row of the matrix.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        out
    }
}

/// `entry(i, j) = match_cost(a[i], b[j])`.
pub fn cost_matrix(a: &ShapeContextDescriptor, b: &ShapeContextDescriptor) -> Result<CostMatrix> {
    if a.config != b.config {
        return Err(Error::Incompatible(
            "descriptors were built with different bin configurations".into(),
        ));
    }
    let cols = b.len();
    let entries: Vec<f64> = (0..a.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (0..cols).map(move |j| {
                match_cost(&a.histograms[i], &b.histograms[j]).expect("same bin count")
            })
        })
        .collect();
    CostMatrix::new(a.len(), cols, entries)
}

/// Order-preserving matching between two cyclic point sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    /// Matched `(index in A, index in B)` pairs in increasing A order.
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: f64,
    /// Rotation of B's index sequence under which the pairs are monotone.
    pub offset: usize,
}

impl Correspondence {
    /// Identity matching `(i, i)` for `n` points, used when the point order
    /// is already known to agree.
    pub fn identity(n: usize) -> Self {
        Correspondence {
            pairs: (0..n).map(|i| (i, i)).collect(),
            total_cost: 0.0,
            offset: 0,
        }
    }
}

/// Minimum-cost order-preserving cyclic correspondence.
///
/// For each rotation offset `s` of B a monotone alignment is computed where a
/// diagonal step matches `A[i]` with `B[(j + s) mod m]` at cost `C(i, ·)` and
/// a horizontal or vertical step leaves one point unmatched at
/// `skip_penalty`. The cheapest offset wins; ties keep the lowest offset and,
/// within an offset, prefer a match over skipping a B point over skipping an
/// A point.
pub fn correspond(m: &CostMatrix, skip_penalty: f64) -> Result<Correspondence> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("cost matrix is empty"));
    }
    if !(skip_penalty >= 0.0 && skip_penalty.is_finite()) {
        return Err(Error::invalid(
            "skip penalty must be finite and non-negative",
        ));
    }

    let per_offset: Vec<(f64, Vec<(usize, usize)>)> = (0..cols)
        .into_par_iter()
        .map(|offset| align_at_offset(m, offset, skip_penalty))
        .collect();

    let (offset, (total_cost, pairs)) = per_offset
        .into_iter()
        .enumerate()
        .fold(
            None,
            |best: Option<(usize, (f64, Vec<_>))>, (s, cand)| match best {
                Some((_, ref b)) if b.0 <= cand.0 => best,
                _ => Some((s, cand)),
            },
        )
        .expect("at least one offset");
    Ok(Correspondence {
        pairs,
        total_cost,
        offset,
    })
}

fn align_at_offset(m: &CostMatrix, offset: usize, skip: f64) -> (f64, Vec<(usize, usize)>) {
    let (n, k) = (m.rows(), m.cols());
    let w = k + 1;
    let b_index = |j: usize| (j + offset) % k;
    // suffix costs: cost[i][j] aligns A[i..] with rotated B[j..]
    let mut cost = vec![0.0f64; (n + 1) * w];
    for i in (0..=n).rev() {
        for j in (0..=k).rev() {
            cost[i * w + j] = if i == n {
                (k - j) as f64 * skip
            } else if j == k {
                (n - i) as f64 * skip
            } else {
                let diag = m.get(i, b_index(j)) + cost[(i + 1) * w + j + 1];
                let skip_b = skip + cost[i * w + j + 1];
                let skip_a = skip + cost[(i + 1) * w + j];
                diag.min(skip_b).min(skip_a)
            };
        }
    }

    let mut pairs = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < k {
        let here = cost[i * w + j];
        if m.get(i, b_index(j)) + cost[(i + 1) * w + j + 1] == here {
            pairs.push((i, b_index(j)));
            i += 1;
            j += 1;
        } else if skip + cost[i * w + j + 1] == here {
            j += 1;
        } else {
            i += 1;
        }
    }
    (cost[0], pairs)
}
