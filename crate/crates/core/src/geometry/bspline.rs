//! Clamped cubic B-spline airfoil parametrization used by the optimizer.
//!
//! Each surface is the graph of `y(x) = Σ c_j B_j(x)` over a clamped uniform
//! knot vector on [0, 1]. The first and last coefficients are pinned to zero
//! so both surfaces interpolate (0, 0) and (1, 0).

use super::{check_panel_count, closed_contour, surface_stations, Airfoil, Spacing};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) const DEGREE: usize = 3;

/// Free-form airfoil genome: one coefficient vector per surface.
#[derive(Debug, Clone, PartialEq)]
pub struct BsplineGenome<T> {
    upper: Vec<T>,
    lower: Vec<T>,
}

impl<T: Scalar> BsplineGenome<T> {
    /// Validates the pinning and minimum-size invariants.
    pub fn new(upper: Vec<T>, lower: Vec<T>) -> Result<Self> {
        for coeffs in [&upper, &lower] {
            if coeffs.len() < DEGREE + 1 {
                return Err(Error::InvalidGeometry(format!(
                    "need at least {} coefficients per surface, got {}",
                    DEGREE + 1,
                    coeffs.len()
                )));
            }
            if coeffs[0] != T::zero() || coeffs[coeffs.len() - 1] != T::zero() {
                return Err(Error::InvalidGeometry(
                    "endpoint coefficients must be pinned to zero".into(),
                ));
            }
            if coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidGeometry("non-finite coefficient".into()));
            }
        }
        Ok(BsplineGenome { upper, lower })
    }

    /// Builds a genome from full coefficient vectors, forcing the endpoint
    /// pinning instead of rejecting it (used after recombination).
    pub fn repinned(upper: Vec<T>, lower: Vec<T>) -> Result<Self> {
        let mut g = BsplineGenome { upper, lower };
        if g.upper.len() < DEGREE + 1 || g.lower.len() < DEGREE + 1 {
            return Err(Error::InvalidGeometry(format!(
                "need at least {} coefficients per surface",
                DEGREE + 1
            )));
        }
        g.repin();
        BsplineGenome::new(g.upper, g.lower)
    }

    /// Builds a genome from interior coefficients, adding the pinned zeros.
    pub fn from_interior(upper_interior: &[T], lower_interior: &[T]) -> Result<Self> {
        let wrap = |interior: &[T]| {
            let mut v = Vec::with_capacity(interior.len() + 2);
            v.push(T::zero());
            v.extend_from_slice(interior);
            v.push(T::zero());
            v
        };
        BsplineGenome::new(wrap(upper_interior), wrap(lower_interior))
    }

    pub fn degree(&self) -> usize {
        DEGREE
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn eval_upper(&self, x: T) -> T {
        de_boor(&self.upper, x)
    }

    pub fn eval_lower(&self, x: T) -> T {
        de_boor(&self.lower, x)
    }

    /// Total coefficient count over the concatenated (upper, lower) layout.
    pub fn coeff_count(&self) -> usize {
        self.upper.len() + self.lower.len()
    }

    /// Coefficient at a flat index into the concatenated layout.
    pub fn coeff(&self, i: usize) -> T {
        if i < self.upper.len() {
            self.upper[i]
        } else {
            self.lower[i - self.upper.len()]
        }
    }

    /// Overwrites a flat-index coefficient. Pinned slots are left unchanged.
    pub fn set_coeff(&mut self, i: usize, v: T) {
        if self.is_pinned(i) {
            return;
        }
        if i < self.upper.len() {
            self.upper[i] = v;
        } else {
            let i = i - self.upper.len();
            self.lower[i] = v;
        }
    }

    /// Whether a flat index addresses one of the four pinned endpoints.
    pub fn is_pinned(&self, i: usize) -> bool {
        let u = self.upper.len();
        i == 0 || i == u - 1 || i == u || i == self.coeff_count() - 1
    }

    /// Re-imposes the endpoint pinning (used after recombination).
    pub fn repin(&mut self) {
        let u = self.upper.len();
        let l = self.lower.len();
        self.upper[0] = T::zero();
        self.upper[u - 1] = T::zero();
        self.lower[0] = T::zero();
        self.lower[l - 1] = T::zero();
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.upper.len() == other.upper.len() && self.lower.len() == other.lower.len()
    }
}

/// Knot `i` of the clamped uniform vector for `m` coefficients.
fn knot<T: Scalar>(m: usize, i: usize) -> T {
    if i <= DEGREE {
        T::zero()
    } else if i >= m {
        T::one()
    } else {
        T::of((i - DEGREE) as f64 / (m - DEGREE) as f64)
    }
}

/// De Boor evaluation of the spline at `u` in [0, 1].
fn de_boor<T: Scalar>(coeffs: &[T], u: T) -> T {
    let m = coeffs.len();
    // Knot span: largest k in [DEGREE, m-1] with knot(k) <= u.
    let mut span = m - 1;
    for k in DEGREE..m {
        if u < knot::<T>(m, k + 1) {
            span = k;
            break;
        }
    }
    let mut w: [T; DEGREE + 1] = [T::zero(); DEGREE + 1];
    for (j, slot) in w.iter_mut().enumerate() {
        *slot = coeffs[span - DEGREE + j];
    }
    for r in 1..=DEGREE {
        for j in (r..=DEGREE).rev() {
            let i = span - DEGREE + j;
            let lo = knot::<T>(m, i);
            let hi = knot::<T>(m, i + DEGREE - r + 1);
            let alpha = (u - lo) / (hi - lo);
            w[j] = (T::one() - alpha) * w[j - 1] + alpha * w[j];
        }
    }
    w[DEGREE]
}

/// Sample a genome into a closed airfoil with `n` panels (cosine spacing).
///
/// Fails with [`Error::InvalidGeometry`] when the upper surface does not stay
/// strictly above the lower surface everywhere inside (0, 1); the optimizer
/// treats that as a fitness penalty.
pub fn from_bspline<T: Scalar>(genome: &BsplineGenome<T>, n: usize) -> Result<Airfoil<T>> {
    check_panel_count(n)?;
    let stations = surface_stations::<T>(n / 2, Spacing::Cosine);
    for &x in &stations[1..n / 2] {
        if genome.eval_upper(x) - genome.eval_lower(x) <= T::zero() {
            return Err(Error::InvalidGeometry(format!(
                "upper surface does not stay above lower surface (x = {x})"
            )));
        }
    }
    let points = closed_contour(
        &stations,
        |x| super::Point2::new(x, genome.eval_upper(x)),
        |x| super::Point2::new(x, genome.eval_lower(x)),
    );
    Airfoil::new(points, "b-spline")
}
