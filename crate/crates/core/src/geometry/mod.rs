//! Airfoil boundary discretizations and per-panel quantities.
//!
//! An [`Airfoil`] is a closed polyline traversed trailing edge → upper
//! surface → leading edge → lower surface → trailing edge. Panel outward
//! directions, the collocation points, and the orientation test all assume
//! this traversal, so it is validated at construction and everything
//! downstream can rely on it.

mod bspline;
mod dat;
mod naca;

pub use bspline::{from_bspline, BsplineGenome};
pub use dat::{read_dat, write_dat};
pub use naca::{camber_line, naca4, naca4_params, thickness_profile};

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Point (or vector) in the chord-normalized plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Rotation by -90 degrees: `(x, y) -> (y, -x)`.
    ///
    /// Applied to a panel vector of the enforced traversal this yields the
    /// outward direction, preserving the length exactly.
    #[inline]
    pub fn perp(self) -> Self {
        Point2::new(self.y, -self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Point2::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: T) -> Self {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// One straight boundary segment with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel<T> {
    /// Start point.
    pub a: Point2<T>,
    /// End point.
    pub b: Point2<T>,
    /// Panel vector `b - a`.
    pub h: Point2<T>,
    /// Outward orthogonal of the same length as `h`.
    pub h_perp: Point2<T>,
    /// Control point `(a + b) / 2`.
    pub mid: Point2<T>,
    /// Panel length `|h|`.
    pub len: T,
}

impl<T: Scalar> Panel<T> {
    fn between(a: Point2<T>, b: Point2<T>) -> Self {
        let h = b - a;
        let half = T::of(0.5);
        Panel {
            a,
            b,
            h,
            h_perp: h.perp(),
            mid: Point2::new((a.x + b.x) * half, (a.y + b.y) * half),
            len: h.norm(),
        }
    }
}

/// Closed airfoil contour.
///
/// Invariants established by [`Airfoil::new`]:
/// - `points[n] == points[0]` bit-exactly (closure),
/// - `points[0]` is the trailing edge and attains the maximum x,
/// - at least 4 panels, all of positive length,
/// - the traversal runs over the upper surface first (negative signed area
///   under the `∮ y dx` convention used by [`Airfoil::signed_area`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Airfoil<T> {
    points: Vec<Point2<T>>,
    name: String,
}

impl<T: Scalar> Airfoil<T> {
    pub fn new(points: Vec<Point2<T>>, name: impl Into<String>) -> Result<Self> {
        if points.len() < 5 {
            return Err(Error::InvalidGeometry(format!(
                "need at least 5 points for 4 panels, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite coordinate".into()));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first.x != last.x || first.y != last.y {
            return Err(Error::InvalidGeometry(
                "contour is not closed: first and last points differ".into(),
            ));
        }
        if points.iter().any(|p| p.x > first.x) {
            return Err(Error::InvalidGeometry(
                "trailing edge (first point) must attain the maximum x".into(),
            ));
        }
        for (i, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::InvalidGeometry(format!(
                    "zero-length panel between points {} and {}",
                    i,
                    i + 1
                )));
            }
        }
        let airfoil = Airfoil {
            points,
            name: name.into(),
        };
        if airfoil.signed_area() >= T::zero() {
            return Err(Error::InvalidGeometry(
                "wrong orientation: traversal must run trailing edge -> upper \
                 surface -> leading edge -> lower surface"
                    .into(),
            ));
        }
        Ok(airfoil)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// All boundary points including the repeated closure point.
    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    /// Number of panels `n` (one less than the stored point count).
    pub fn n_panels(&self) -> usize {
        self.points.len() - 1
    }

    /// Signed area `½ Σ (x_{i+1} - x_i)(y_i + y_{i+1})`, i.e. `∮ y dx`.
    ///
    /// Negative for the enforced trailing-edge-first, upper-surface-first
    /// traversal.
    pub fn signed_area(&self) -> T {
        let half = T::of(0.5);
        let mut acc = T::zero();
        for w in self.points.windows(2) {
            acc += (w[1].x - w[0].x) * (w[0].y + w[1].y);
        }
        acc * half
    }

    /// Chord length `max x - min x`.
    pub fn chord(&self) -> T {
        let mut lo = self.points[0].x;
        let mut hi = self.points[0].x;
        for p in &self.points {
            lo = lo.min(p.x);
            hi = hi.max(p.x);
        }
        hi - lo
    }

    /// Derive the `n` panels with control points and outward orthogonals.
    pub fn panels(&self) -> Vec<Panel<T>> {
        self.points
            .windows(2)
            .map(|w| Panel::between(w[0], w[1]))
            .collect()
    }
}

/// Node spacing rule for generated airfoils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    /// Cosine clustering towards both the leading and trailing edge.
    #[default]
    Cosine,
    Uniform,
}

/// Abscissae running from 1 (trailing edge) down to 0 (leading edge),
/// `half_n + 1` stations.
fn surface_stations<T: Scalar>(half_n: usize, spacing: Spacing) -> Vec<T> {
    (0..=half_n)
        .map(|k| {
            let frac = k as f64 / half_n as f64;
            match spacing {
                Spacing::Cosine => T::of(0.5 * (1.0 + (std::f64::consts::PI * frac).cos())),
                Spacing::Uniform => T::of(1.0 - frac),
            }
        })
        .collect()
}

/// Assemble a closed contour from per-surface ordinates.
///
/// `upper`/`lower` are evaluated at the same stations; the trailing- and
/// leading-edge points are pinned to exactly (1, 0) and (0, 0) so closure
/// holds bit-exactly.
fn closed_contour<T: Scalar>(
    stations: &[T],
    upper: impl Fn(T) -> Point2<T>,
    lower: impl Fn(T) -> Point2<T>,
) -> Vec<Point2<T>> {
    let half_n = stations.len() - 1;
    let te = Point2::new(T::one(), T::zero());
    let le = Point2::new(T::zero(), T::zero());
    let mut points = Vec::with_capacity(2 * half_n + 1);
    points.push(te);
    for &x in &stations[1..half_n] {
        points.push(upper(x));
    }
    points.push(le);
    for &x in stations[1..half_n].iter().rev() {
        points.push(lower(x));
    }
    points.push(te);
    points
}

pub(crate) fn check_panel_count(n: usize) -> Result<()> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidGeometry(format!(
            "panel count must be even and at least 8, got {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Airfoil<f64> {
        Airfoil::new(
            vec![
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
            ],
            "square",
        )
        .unwrap()
    }

    #[test]
    fn unit_square_panels() {
        let panels = square().panels();
        assert_eq!(panels.len(), 4);
        for p in &panels {
            assert_eq!(p.len, 1.0);
        }
        assert_eq!(panels[0].mid, Point2::new(1.0, 0.5));
        assert_eq!(panels[1].mid, Point2::new(0.5, 1.0));
        assert_eq!(panels[2].mid, Point2::new(0.0, 0.5));
        assert_eq!(panels[3].mid, Point2::new(0.5, 0.0));
    }

    #[test]
    fn square_orthogonals_point_outward() {
        let a = square();
        let centroid = Point2::new(0.5, 0.5);
        for p in a.panels() {
            assert!(p.h_perp.dot(p.mid - centroid) > 0.0);
            assert_eq!(p.h.dot(p.h_perp), 0.0);
            assert_eq!(p.h.norm(), p.h_perp.norm());
        }
    }

    #[test]
    fn reversed_orientation_rejected() {
        let err = Airfoil::new(
            vec![
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 0.0),
                Point2::new(0.0, 1.0),
                Point2::new(1.0, 1.0),
                Point2::new(1.0, 0.0),
            ],
            "reversed",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGeometry(_)));
    }

    #[test]
    fn open_contour_rejected() {
        let err = Airfoil::<f64>::new(
            vec![
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
                Point2::new(0.0, 0.0),
                Point2::new(0.99, 0.0),
            ],
            "open",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGeometry(_)));
    }

    #[test]
    fn too_few_points_rejected() {
        let err = Airfoil::<f64>::new(
            vec![
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
                Point2::new(1.0, 0.0),
            ],
            "tri",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGeometry(_)));
    }

    #[test]
    fn panel_vectors_telescope() {
        let a = naca4::<f64>("2412", 64, Spacing::Cosine).unwrap();
        let (mut sx, mut sy) = (0.0, 0.0);
        for p in a.panels() {
            sx += p.h.x;
            sy += p.h.y;
        }
        assert!(sx.abs() < 1e-14 && sy.abs() < 1e-14);
    }
}
