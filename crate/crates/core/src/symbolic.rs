//! Centroid-anchored state sequence and its quantization into symbol
//! triples.
//!
//! The walk starts from two anchors: `x` at the point farthest from the
//! centroid `G` and `y` at the nearest one. Both advance one contour index
//! per state, so their index offset stays fixed. Each state records the two
//! centroid distances and the angle `x G y`; the encoder turns the angle
//! into a letter `A..` and each distance into `S`, `M` or `L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{Contour, Point};
use crate::seqalign::{Symbol, SymbolString};

/// Relative spread `(D_max - D_min) / D_max` below which a contour counts
/// as circle-like.
pub const DEGENERATE_SPREAD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x_index: usize,
    pub y_index: usize,
    pub x_point: Point,
    pub y_point: Point,
    /// `|G x|`.
    pub x_dist: f64,
    /// `|G y|`.
    pub y_dist: f64,
    /// Non-reflex angle `x G y` in `[0, pi]`.
    pub angle: f64,
}

/// Anchors and distance range of a contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub state: State,
    pub centroid: Point,
    pub d_min: f64,
    pub d_max: f64,
    /// `D_max` and `D_min` (nearly) coincide; the anchors are then picked by
    /// index tie-break only.
    pub degenerate: bool,
}

/// Default [`QuantizationConfig::anchor_tolerance`].
pub const DEFAULT_ANCHOR_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationConfig {
    /// Number of angle bins, 2..=6, drawn from `A..F` in order.
    pub k_angle_bins: usize,
    /// Fixed distance range; `None` uses each contour's own `D_min..D_max`.
    pub distance_range: Option<(f64, f64)>,
    /// Local maxima (minima) of the centroid distance lying within this
    /// fraction of `D_max - D_min` of the global extreme are also tried as
    /// anchors; the encoder keeps the lexicographically smallest string.
    /// Zero restricts the choice to exact ties.
    pub anchor_tolerance: f64,
}

impl Default for QuantizationConfig {
    fn default() -> Self {
        QuantizationConfig {
            k_angle_bins: 6,
            distance_range: None,
            anchor_tolerance: DEFAULT_ANCHOR_TOLERANCE,
        }
    }
}

impl QuantizationConfig {
    pub fn with_k(k_angle_bins: usize) -> Self {
        QuantizationConfig {
            k_angle_bins,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=6).contains(&self.k_angle_bins) {
            return Err(Error::invalid(format!(
                "angle bins must be between 2 and 6, got {}",
                self.k_angle_bins
            )));
        }
        if !(0.0..=1.0).contains(&self.anchor_tolerance) {
            return Err(Error::invalid("anchor tolerance must lie in [0, 1]"));
        }
        if let Some((lo, hi)) = self.distance_range {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::invalid("distance range needs d_min < d_max"));
            }
        }
        Ok(())
    }
}

fn subtended_angle(g: Point, x: Point, y: Point) -> f64 {
    let (u, v) = (x - g, y - g);
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return 0.0;
    }
    u.cross(v).abs().atan2(u.dot(v))
}

fn state_at(c: &Contour, g: Point, x_index: usize, y_index: usize) -> State {
    let (x_point, y_point) = (c.at(x_index), c.at(y_index));
    State {
        x_index,
        y_index,
        x_point,
        y_point,
        x_dist: x_point.dist(g),
        y_dist: y_point.dist(g),
        angle: subtended_angle(g, x_point, y_point),
    }
}

/// Farthest and nearest points from the centroid, lowest index on ties.
pub fn initial_state(c: &Contour) -> InitialState {
    let g = c.centroid();
    let dists: Vec<f64> = c.points().iter().map(|p| p.dist(g)).collect();
    let (mut imax, mut imin) = (0, 0);
    for (i, &d) in dists.iter().enumerate() {
        if d > dists[imax] {
            imax = i;
        }
        if d < dists[imin] {
            imin = i;
        }
    }
    let (d_max, d_min) = (dists[imax], dists[imin]);
    let degenerate = d_max - d_min <= DEGENERATE_SPREAD * d_max;
    if degenerate {
        imax = 0;
    }
    InitialState {
        state: state_at(c, g, imax, imin),
        centroid: g,
        d_min,
        d_max,
        degenerate,
    }
}

/// One state per contour point, walking `x` and `y` forward in lockstep
/// from the anchors.
pub fn states(c: &Contour) -> Vec<State> {
    let init = initial_state(c);
    states_from(c, &init)
}

fn states_from(c: &Contour, init: &InitialState) -> Vec<State> {
    walk(c, init.centroid, init.state.x_index, init.state.y_index)
}

fn walk(c: &Contour, g: Point, x0: usize, y0: usize) -> Vec<State> {
    (0..c.len())
        .map(|i| state_at(c, g, (x0 + i) % c.len(), (y0 + i) % c.len()))
        .collect()
}

/// Candidate anchor indices `(farthest, nearest)`: cyclic local extrema of
/// the centroid distance within `tolerance * (D_max - D_min)` of the global
/// extremes, always including every exact extreme. Both lists ascend.
pub fn anchor_candidates(c: &Contour, tolerance: f64) -> (Vec<usize>, Vec<usize>) {
    let g = c.centroid();
    let d: Vec<f64> = c.points().iter().map(|p| p.dist(g)).collect();
    let n = d.len();
    let d_max = d.iter().copied().fold(f64::MIN, f64::max);
    let d_min = d.iter().copied().fold(f64::MAX, f64::min);
    let slack = tolerance * (d_max - d_min);
    let (prev, next) = (|i: usize| d[(i + n - 1) % n], |i: usize| d[(i + 1) % n]);
    let far = (0..n)
        .filter(|&i| d[i] == d_max || (d[i] >= d_max - slack && d[i] >= prev(i) && d[i] >= next(i)))
        .collect();
    let near = (0..n)
        .filter(|&i| d[i] == d_min || (d[i] <= d_min + slack && d[i] <= prev(i) && d[i] <= next(i)))
        .collect();
    (far, near)
}

/// `S`, `M` or `L` by equal thirds of `[d_min, d_max]`; `d` is clamped into
/// the range first. An empty range maps everything to `M`.
pub fn quantize_distance(d: f64, d_min: f64, d_max: f64) -> Symbol {
    let spread = d_max - d_min;
    if spread.is_nan() || spread <= DEGENERATE_SPREAD * d_max.abs() {
        return Symbol::M;
    }
    let t = ((d.clamp(d_min, d_max) - d_min) / (d_max - d_min)) * 3.0;
    match t {
        t if t < 1.0 => Symbol::S,
        t if t < 2.0 => Symbol::M,
        _ => Symbol::L,
    }
}

/// Letter of bin `floor(a * k / pi)`, with `a = pi` folded into the last bin.
pub fn quantize_angle(a: f64, k: usize) -> Result<Symbol> {
    if !(2..=6).contains(&k) {
        return Err(Error::invalid(format!("angle bins must be 2..=6, got {k}")));
    }
    if !(0.0..=PI).contains(&a) {
        return Err(Error::invalid(format!("angle {a} outside [0, pi]")));
    }
    let bin = ((a / PI * k as f64).floor() as usize).min(k - 1);
    Ok(Symbol::angle(bin).expect("bin below 6"))
}

/// Encoded contour plus the facts the encoding depended on.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub string: SymbolString,
    pub degenerate: bool,
    pub d_min: f64,
    pub d_max: f64,
    /// Contour index where the `x` walk starts.
    pub x_index: usize,
    /// Contour index where the `y` walk starts.
    pub y_index: usize,
}

/// Encodes every state as `(angle letter, size of |Gx|, size of |Gy|)`.
pub fn encode(c: &Contour, cfg: &QuantizationConfig) -> Result<SymbolString> {
    encode_detailed(c, cfg).map(|e| e.string)
}

/// Encodes with full provenance. Every candidate anchor pair from
/// [`anchor_candidates`] is encoded and the lexicographically smallest
/// string wins, ties going to the lowest `(x, y)` indices. With unique
/// extremes and zero tolerance this is exactly the walk from
/// [`initial_state`].
pub fn encode_detailed(c: &Contour, cfg: &QuantizationConfig) -> Result<Encoding> {
    cfg.validate()?;
    let init = initial_state(c);
    let (lo, hi) = cfg.distance_range.unwrap_or((init.d_min, init.d_max));
    let pairs: Vec<(usize, usize)> = if init.degenerate {
        vec![(init.state.x_index, init.state.y_index)]
    } else {
        let (far, near) = anchor_candidates(c, cfg.anchor_tolerance);
        far.iter()
            .flat_map(|&x| near.iter().map(move |&y| (x, y)))
            .collect()
    };

    let mut best: Option<(SymbolString, usize, usize)> = None;
    for (x0, y0) in pairs {
        let mut symbols = Vec::with_capacity(3 * c.len());
        for st in walk(c, init.centroid, x0, y0) {
            symbols.push(quantize_angle(st.angle, cfg.k_angle_bins)?);
            if init.degenerate && cfg.distance_range.is_none() {
                symbols.extend([Symbol::M, Symbol::M]);
            } else {
                symbols.push(quantize_distance(st.x_dist, lo, hi));
                symbols.push(quantize_distance(st.y_dist, lo, hi));
            }
        }
        let string = SymbolString::new(symbols);
        if best
            .as_ref()
            .is_none_or(|(b, _, _)| string.symbols() < b.symbols())
        {
            best = Some((string, x0, y0));
        }
    }
    let (string, x_index, y_index) = best.expect("at least one anchor pair");
    Ok(Encoding {
        string,
        degenerate: init.degenerate,
        d_min: init.d_min,
        d_max: init.d_max,
        x_index,
        y_index,
    })
}
