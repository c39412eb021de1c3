//! NACA 4-digit airfoil generator.

use super::{check_panel_count, closed_contour, surface_stations, Airfoil, Point2, Spacing};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Half thickness of a 4-digit section of max thickness `t` at station `x`.
///
/// Uses the closed-trailing-edge quartic coefficient (-0.1036) so the
/// thickness vanishes identically at `x = 1`.
pub fn thickness_profile<T: Scalar>(t: T, x: T) -> T {
    let c = |v: f64| T::of(v);
    c(5.0) * t
        * (c(0.2969) * x.sqrt() - c(0.1260) * x - c(0.3516) * x * x
            + c(0.2843) * x * x * x
            - c(0.1036) * x * x * x * x)
}

/// Mean camber-line ordinate for max camber `m` located at `p`.
pub fn camber_line<T: Scalar>(m: T, p: T, x: T) -> T {
    if m == T::zero() {
        return T::zero();
    }
    let two = T::of(2.0);
    if x < p {
        m / (p * p) * (two * p * x - x * x)
    } else {
        let q = T::one() - p;
        m / (q * q) * ((T::one() - two * p) + two * p * x - x * x)
    }
}

/// Build an airfoil from continuous 4-digit parameters.
///
/// `camber` is the maximum camber (fraction of chord), `camber_pos` its
/// chordwise location, `thickness` the maximum thickness. Surface ordinates
/// are the camber line plus/minus the half thickness.
pub fn naca4_params<T: Scalar>(
    camber: T,
    camber_pos: T,
    thickness: T,
    n: usize,
    spacing: Spacing,
    name: impl Into<String>,
) -> Result<Airfoil<T>> {
    check_panel_count(n)?;
    if thickness <= T::zero() {
        return Err(Error::InvalidGeometry(
            "thickness must be positive".into(),
        ));
    }
    if camber < T::zero()
        || (camber > T::zero() && (camber_pos <= T::zero() || camber_pos >= T::one()))
    {
        return Err(Error::InvalidGeometry(
            "camber position must lie strictly inside (0, 1) for a cambered section".into(),
        ));
    }
    let stations = surface_stations::<T>(n / 2, spacing);
    let surface = |x: T, sign: T| {
        let yt = thickness_profile(thickness, x);
        let yc = camber_line(camber, camber_pos, x);
        Point2::new(x, yc + sign * yt)
    };
    let points = closed_contour(
        &stations,
        |x| surface(x, T::one()),
        |x| surface(x, -T::one()),
    );
    Airfoil::new(points, name)
}

/// Build an airfoil from a 4-digit code such as `"2412"`.
pub fn naca4<T: Scalar>(digits: &str, n: usize, spacing: Spacing) -> Result<Airfoil<T>> {
    let ds: Vec<u32> = digits.chars().filter_map(|c| c.to_digit(10)).collect();
    if ds.len() != 4 || digits.chars().count() != 4 {
        return Err(Error::InvalidGeometry(format!(
            "NACA code must be exactly 4 digits, got {digits:?}"
        )));
    }
    let camber = T::of(ds[0] as f64 / 100.0);
    let camber_pos = T::of(ds[1] as f64 / 10.0);
    let thickness = T::of((ds[2] * 10 + ds[3]) as f64 / 100.0);
    naca4_params(
        camber,
        camber_pos,
        thickness,
        n,
        spacing,
        format!("NACA {digits}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thickness_vanishes_at_leading_edge() {
        assert_eq!(thickness_profile(0.12_f64, 0.0), 0.0);
    }

    #[test]
    fn symmetric_sections_mirror_about_chord() {
        let a = naca4::<f64>("0012", 200, Spacing::Cosine).unwrap();
        let pts = a.points();
        let n = a.n_panels();
        for i in 0..=n {
            let m = pts[n - i];
            assert!((pts[i].x - m.x).abs() <= 1e-12);
            assert!((pts[i].y + m.y).abs() <= 1e-12);
        }
    }

    #[test]
    fn camber_line_maximum_matches_digits() {
        // Dense sampling of the camber polynomial for the 2412 section.
        let (m, p) = (0.02_f64, 0.4_f64);
        let mut best = (0.0, 0.0);
        for k in 0..=100_000 {
            let x = k as f64 / 100_000.0;
            let y = camber_line(m, p, x);
            if y > best.1 {
                best = (x, y);
            }
        }
        assert!((best.1 - 0.02).abs() < 1e-9);
        assert!((best.0 - 0.4).abs() < 1e-4);
    }

    #[test]
    fn closure_is_exact() {
        let a = naca4::<f64>("2412", 100, Spacing::Cosine).unwrap();
        let pts = a.points();
        assert_eq!(pts[0], pts[pts.len() - 1]);
        assert_eq!(pts[0], Point2::new(1.0, 0.0));
    }

    #[test]
    fn upper_surface_orthogonals_point_up() {
        let a = naca4::<f64>("2412", 200, Spacing::Cosine).unwrap();
        for p in &a.panels()[..100] {
            assert!(p.h_perp.y > 0.0, "upper-surface panel must face upward");
        }
    }

    #[test]
    fn malformed_codes_rejected() {
        assert!(naca4::<f64>("24a2", 100, Spacing::Cosine).is_err());
        assert!(naca4::<f64>("241", 100, Spacing::Cosine).is_err());
        assert!(naca4::<f64>("0012", 6, Spacing::Cosine).is_err());
        assert!(naca4::<f64>("0012", 9, Spacing::Cosine).is_err());
        // max camber with no stated position is not a valid section
        assert!(naca4::<f64>("2012", 100, Spacing::Cosine).is_err());
    }

    #[test]
    fn uniform_spacing_supported() {
        let a = naca4::<f64>("0012", 50 * 2, Spacing::Uniform).unwrap();
        assert_eq!(a.n_panels(), 100);
    }
}
