//! Rigid (rotation + translation) least-squares superimposition.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{mean_point, Contour, Point};
use crate::shape_context::Correspondence;

/// `p -> R(rotation) p + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    /// Radians in `(-pi, pi]`.
    pub rotation: f64,
    pub translation: Point,
}

impl RigidTransform {
    pub const IDENTITY: RigidTransform = RigidTransform {
        rotation: 0.0,
        translation: Point::new(0.0, 0.0),
    };

    pub fn new(rotation: f64, translation: Point) -> Self {
        RigidTransform {
            rotation: wrap_angle(rotation),
            translation,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        p.rotated(self.rotation) + self.translation
    }

    /// Row-major 2x2 rotation matrix.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.rotation.sin_cos();
        [[c, -s], [s, c]]
    }
}

impl fmt::Display for RigidTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R {} T {} {}",
            self.rotation, self.translation.x, self.translation.y
        )
    }
}

impl FromStr for RigidTransform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let f: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| t.parse::<f64>().map_err(|e| Error::parse(1, e.to_string()));
        match f.as_slice() {
            ["R", r, "T", dx, dy] => {
                Ok(RigidTransform::new(num(r)?, Point::new(num(dx)?, num(dy)?)))
            }
            _ => Err(Error::parse(1, "expected `R <radians> T <dx> <dy>`")),
        }
    }
}

fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Result of [`align`].
#[derive(Debug, Clone)]
pub struct Alignment {
    pub transform: RigidTransform,
    /// Contour B with the transform applied to every point.
    pub aligned: Contour,
    /// RMS distance over the matched pairs after alignment.
    pub rms_residual: f64,
    /// RMS distance over the matched pairs before alignment.
    pub rms_before: f64,
    /// Set when the matched points of either set all coincide; the rotation
    /// is then fixed at zero.
    pub degenerate: bool,
}

fn rms(pairs: &[(Point, Point)], t: &RigidTransform) -> f64 {
    let ss: f64 = pairs
        .iter()
        .map(|&(a, b)| {
            let d = a - t.apply(b);
            d.dot(d)
        })
        .sum();
    (ss / pairs.len() as f64).sqrt()
}

/// Finds the rotation and translation carrying B's matched points onto A's
/// in the least-squares sense. Scaling and reflection are excluded.
pub fn align(a: &Contour, b: &Contour, corr: &Correspondence) -> Result<Alignment> {
    if corr.pairs.len() < 2 {
        return Err(Error::invalid(format!(
            "alignment needs at least 2 matched pairs, got {}",
            corr.pairs.len()
        )));
    }
    let pairs: Vec<(Point, Point)> = corr
        .pairs
        .iter()
        .map(|&(i, j)| {
            if i >= a.len() || j >= b.len() {
                Err(Error::invalid(format!("pair ({i}, {j}) out of range")))
            } else {
                Ok((a.points()[i], b.points()[j]))
            }
        })
        .collect::<Result<_>>()?;

    let ca = mean_point(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let cb = mean_point(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
    let spread = |c: Point, sel: fn(&(Point, Point)) -> Point| {
        pairs
            .iter()
            .map(|p| (sel(p) - c).norm())
            .fold(0.0, f64::max)
    };
    let degenerate = spread(ca, |p| p.0) == 0.0 || spread(cb, |p| p.1) == 0.0;

    // 2D cross-covariance reduces to one angle: atan2(sum cross, sum dot)
    let rotation = if degenerate {
        0.0
    } else {
        let (mut sin, mut cos) = (0.0, 0.0);
        for &(pa, pb) in &pairs {
            let (u, v) = (pb - cb, pa - ca);
            cos += u.dot(v);
            sin += u.cross(v);
        }
        if sin == 0.0 && cos == 0.0 {
            0.0
        } else {
            sin.atan2(cos)
        }
    };
    let rotation = wrap_angle(rotation);
    let translation = ca - cb.rotated(rotation);
    let transform = RigidTransform {
        rotation,
        translation,
    };
    let aligned = b.map_points(|p| transform.apply(p))?;
    Ok(Alignment {
        rms_residual: rms(&pairs, &transform),
        rms_before: rms(&pairs, &RigidTransform::IDENTITY),
        transform,
        aligned,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn shape() -> Contour {
        Contour::new(vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.5),
            Point::new(5.0, 3.0),
            Point::new(1.5, 4.0),
            Point::new(-1.0, 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn undoes_translation() {
        let a = shape();
        let b = a.map_points(|p| p + Point::new(3.0, 4.0)).unwrap();
        let out = align(&a, &b, &Correspondence::identity(5)).unwrap();
        assert!(out.transform.rotation.abs() < 1e-12);
        assert!((out.transform.translation.x + 3.0).abs() < 1e-12);
        assert!((out.transform.translation.y + 4.0).abs() < 1e-12);
        assert!(out.rms_residual < 1e-12);
    }

    #[test]
    fn undoes_quarter_turn_about_centroid() {
        let a = shape();
        let g = a.centroid();
        let b = a.map_points(|p| (p - g).rotated(FRAC_PI_2) + g).unwrap();
        let out = align(&a, &b, &Correspondence::identity(5)).unwrap();
        assert!((out.transform.rotation + FRAC_PI_2).abs() < 1e-9);
        assert!(out.rms_residual < 1e-9);
        for (p, q) in a.points().iter().zip(out.aligned.points()) {
            assert!(p.dist(*q) < 1e-9);
        }
    }

    #[test]
    fn scaling_leaves_residual() {
        let a = shape();
        let b = a.map_points(|p| p * 2.0).unwrap();
        let out = align(&a, &b, &Correspondence::identity(5)).unwrap();
        assert!(out.rms_residual > 0.1);
        assert!(out.rms_residual <= out.rms_before);
    }

    #[test]
    fn self_alignment_is_identity() {
        let a = shape();
        let out = align(&a, &a, &Correspondence::identity(5)).unwrap();
        assert!(out.transform.rotation.abs() < 1e-9);
        assert!(out.transform.translation.norm() < 1e-9);
    }

    #[test]
    fn never_reflects() {
        let a = shape();
        let mirrored = a.map_points(|p| Point::new(-p.x, p.y)).unwrap();
        let out = align(&a, &mirrored, &Correspondence::identity(5)).unwrap();
        let m = out.transform.matrix();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((det - 1.0).abs() < 1e-12);
        assert!(out.rms_residual > 0.0);
    }

    #[test]
    fn rejects_short_and_flags_degenerate() {
        let a = shape();
        let one = Correspondence {
            pairs: vec![(0, 0)],
            total_cost: 0.0,
            offset: 0,
        };
        assert!(align(&a, &a, &one).is_err());
        // both B indices are the same point
        let same = Correspondence {
            pairs: vec![(0, 2), (1, 2)],
            total_cost: 0.0,
            offset: 0,
        };
        let out = align(&a, &a, &same).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.transform.rotation, 0.0);
    }

    #[test]
    fn transform_text_round_trip() {
        let t = RigidTransform::new(-0.25, Point::new(1.5, -2.0));
        assert_eq!(t.to_string(), "R -0.25 T 1.5 -2");
        assert_eq!(t.to_string().parse::<RigidTransform>().unwrap(), t);
        assert!("R 1 T 2".parse::<RigidTransform>().is_err());
    }

    #[test]
    fn wraps_rotation_range() {
        assert!((wrap_angle(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-12);
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
    }
}
