//! Outer-boundary tracing by Moore-neighbor following.

use std::collections::VecDeque;

use super::{BinaryImage, Contour, Orientation, Point};
use crate::error::{Error, Result};

/// Moore neighborhood, clockwise on screen (y down), starting west.
const NEIGHBORS: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

/// Mask of the largest 8-connected foreground component. Ties go to the
/// component reached first in raster order.
pub fn largest_component(img: &BinaryImage) -> Option<BinaryImage> {
    let (w, h) = (img.width(), img.height());
    let mut label = vec![0u32; w * h];
    let mut best: Option<(u32, usize)> = None;
    let mut next = 0u32;
    let mut queue = VecDeque::new();

    for start in 0..w * h {
        if !img.mask()[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        queue.push_back(start);
        let mut size = 0;
        while let Some(idx) = queue.pop_front() {
            size += 1;
            let (x, y) = ((idx % w) as i64, (idx / w) as i64);
            for (dx, dy) in NEIGHBORS {
                let (nx, ny) = (x + dx, y + dy);
                if img.get(nx, ny) {
                    let n = ny as usize * w + nx as usize;
                    if label[n] == 0 {
                        label[n] = next;
                        queue.push_back(n);
                    }
                }
            }
        }
        if best.is_none_or(|(_, s)| size > s) {
            best = Some((next, size));
        }
    }

    let (keep, _) = best?;
    let mask = label.iter().map(|&l| l == keep).collect();
    BinaryImage::new(w, h, mask).ok()
}

fn neighbor_index(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    NEIGHBORS
        .iter()
        .position(|&n| n == d)
        .expect("pixels are 8-adjacent")
}

/// One Moore step: scan clockwise around `cur` starting just after
/// `backtrack`, returning the first foreground pixel and the background
/// pixel scanned immediately before it.
fn moore_step(
    img: &BinaryImage,
    cur: (i64, i64),
    backtrack: (i64, i64),
) -> Option<((i64, i64), (i64, i64))> {
    let b = neighbor_index(cur, backtrack);
    let mut prev = backtrack;
    for k in 1..=8 {
        let (dx, dy) = NEIGHBORS[(b + k) % 8];
        let cand = (cur.0 + dx, cur.1 + dy);
        if img.get(cand.0, cand.1) {
            return Some((cand, prev));
        }
        prev = cand;
    }
    None
}

/// Traces the outer boundary of the largest 8-connected foreground
/// component. Holes are ignored. The result starts at the component's first
/// pixel in raster order and is oriented counterclockwise in `(x, y)` pixel
/// coordinates.
pub fn extract_contour(img: &BinaryImage) -> Result<Contour> {
    let comp = largest_component(img).ok_or(Error::ZeroForeground)?;
    let w = comp.width();
    let first = comp
        .mask()
        .iter()
        .position(|&b| b)
        .ok_or(Error::ZeroForeground)?;
    let start = ((first % w) as i64, (first / w) as i64);
    // raster order guarantees the west neighbor is background
    let west = (start.0 - 1, start.1);

    let Some((second, mut backtrack)) = moore_step(&comp, start, west) else {
        return Err(Error::TooSmall("component is a single pixel".into()));
    };
    let mut boundary = vec![start];
    let mut cur = second;
    // every boundary pixel is visited at most four times (once per side)
    let limit = 4 * comp.foreground_count() + 8;
    loop {
        let (next, bt) = moore_step(&comp, cur, backtrack)
            .ok_or_else(|| Error::Internal("boundary trace lost the component".into()))?;
        if cur == start && next == second {
            break;
        }
        boundary.push(cur);
        if boundary.len() > limit {
            return Err(Error::Internal("boundary trace did not close".into()));
        }
        cur = next;
        backtrack = bt;
    }

    if boundary.len() < 3 {
        return Err(Error::TooSmall(format!(
            "boundary has {} pixels, need at least 3",
            boundary.len()
        )));
    }
    let contour = Contour::new(
        boundary
            .into_iter()
            .map(|(x, y)| Point::new(x as f64, y as f64))
            .collect(),
    )?;
    Ok(match contour.orientation() {
        Orientation::CounterClockwise => contour,
        Orientation::Clockwise => contour.reversed(),
    })
}
