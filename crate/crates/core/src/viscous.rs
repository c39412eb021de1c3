//! Integral laminar boundary-layer march and profile-drag extraction.
//!
//! The inviscid surface solution provides an edge-velocity distribution per
//! surface; a Thwaites momentum-integral march produces momentum thickness,
//! pressure-gradient parameter, shape factor, and skin friction along each
//! surface, and a Squire-Young evaluation at the trailing edge (or at the
//! laminar separation point) yields the drag coefficient.

use crate::error::{Error, Result};
use crate::geometry::Airfoil;
use crate::panel::{FlowCondition, FlowSolution};
use crate::scalar::Scalar;

/// Which side of the airfoil a distribution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Upper,
    Lower,
}

/// Edge speeds along one surface, parametrized by arclength from the
/// stagnation point.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVelocityDistribution<T> {
    s: Vec<T>,
    ue: Vec<T>,
    surface: Surface,
}

impl<T: Scalar> EdgeVelocityDistribution<T> {
    pub fn new(s: Vec<T>, ue: Vec<T>, surface: Surface) -> Result<Self> {
        if s.len() != ue.len() || s.len() < 2 {
            return Err(Error::DegenerateDistribution);
        }
        if s[0] != T::zero() {
            return Err(Error::InvalidConfig("arclength must start at zero".into()));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "arclength stations must be strictly increasing".into(),
            ));
        }
        if ue.iter().any(|&u| u < T::zero() || !u.is_finite()) {
            return Err(Error::InvalidConfig("edge speeds must be non-negative".into()));
        }
        if ue.iter().all(|&u| u == T::zero()) {
            return Err(Error::DegenerateDistribution);
        }
        if ue[1..].iter().any(|&u| u == T::zero()) {
            return Err(Error::InvalidConfig(
                "edge speed may vanish only at the stagnation station".into(),
            ));
        }
        Ok(EdgeVelocityDistribution { s, ue, surface })
    }

    pub fn s(&self) -> &[T] {
        &self.s
    }

    pub fn ue(&self) -> &[T] {
        &self.ue
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// Locates the attachment point as the sign change of the vortex strength
/// along the contour and splits the surface speeds into two distributions
/// marching from stagnation towards the trailing edge.
///
/// When several sign changes exist, the one closest to the leading edge is
/// taken. Both distributions start with an interpolated `Ue = 0` station.
pub fn split_surfaces<T: Scalar>(
    solution: &FlowSolution<T>,
    airfoil: &Airfoil<T>,
) -> Result<(EdgeVelocityDistribution<T>, EdgeVelocityDistribution<T>)> {
    let panels = airfoil.panels();
    let gamma = solution.gamma();
    let n = panels.len();

    // Arclength position of each control point along the traversal.
    let mut arc = Vec::with_capacity(n);
    let mut acc = T::zero();
    let half = T::of(0.5);
    for p in &panels {
        arc.push(acc + half * p.len);
        acc += p.len;
    }

    // Interior sign change nearest the leading edge (smallest midpoint x).
    let mut pick: Option<(usize, T)> = None;
    for k in 0..n - 1 {
        let (g0, g1) = (gamma[k], gamma[k + 1]);
        if g0 * g1 < T::zero() || (g0 == T::zero() && g1 != T::zero()) {
            let x = panels[k].mid.x.min(panels[k + 1].mid.x);
            if pick.is_none_or(|(_, best)| x < best) {
                pick = Some((k, x));
            }
        }
    }
    let (k, _) = pick.ok_or(Error::NoStagnationPoint)?;

    // Linear interpolation of the zero crossing between the two bracketing
    // control points.
    let t = gamma[k] / (gamma[k] - gamma[k + 1]);
    let s_stag = arc[k] + t * (arc[k + 1] - arc[k]);

    // Upper surface: from stagnation back towards the trailing edge over
    // panels k, k-1, …, 0.
    let mut s_up = vec![T::zero()];
    let mut ue_up = vec![T::zero()];
    for i in (0..=k).rev() {
        let s = s_stag - arc[i];
        if s > T::zero() {
            s_up.push(s);
            ue_up.push(gamma[i].abs());
        }
    }
    // Lower surface: panels k+1, …, n-1.
    let mut s_lo = vec![T::zero()];
    let mut ue_lo = vec![T::zero()];
    for i in k + 1..n {
        let s = arc[i] - s_stag;
        if s > T::zero() {
            s_lo.push(s);
            ue_lo.push(gamma[i].abs());
        }
    }
    Ok((
        EdgeVelocityDistribution::new(s_up, ue_up, Surface::Upper)?,
        EdgeVelocityDistribution::new(s_lo, ue_lo, Surface::Lower)?,
    ))
}

/// Boundary-layer quantities along one surface.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLayerState<T> {
    /// Momentum thickness per station.
    pub theta: Vec<T>,
    /// Pressure-gradient parameter `θ² (dUe/ds) / ν` per station.
    pub lambda: Vec<T>,
    /// Shape factor per station.
    pub h: Vec<T>,
    /// Skin-friction coefficient per station.
    pub cf: Vec<T>,
    /// First station where `λ ≤ -0.09`, if the layer separates.
    pub separated_at: Option<usize>,
}

const LAMBDA_SEPARATION: f64 = -0.09;

/// Correlation `ℓ(λ)` (shear) with the fit domain clamped to [-0.1, 0.1].
fn correlation_l<T: Scalar>(lambda: T) -> T {
    let c = |v: f64| T::of(v);
    let l = lambda.max(c(-0.1)).min(c(0.1));
    if l >= T::zero() {
        c(0.22) + c(1.57) * l - c(1.8) * l * l
    } else {
        c(0.22) + c(1.402) * l + c(0.018) * l / (c(0.107) + l)
    }
}

/// Correlation `H(λ)` (shape factor) with the fit domain clamped to
/// [-0.1, 0.1].
fn correlation_h<T: Scalar>(lambda: T) -> T {
    let c = |v: f64| T::of(v);
    let l = lambda.max(c(-0.1)).min(c(0.1));
    if l >= T::zero() {
        c(2.61) - c(3.75) * l + c(5.24) * l * l
    } else {
        c(2.088) + c(0.0731) / (c(0.14) + l)
    }
}

/// Marches the momentum-integral boundary layer along one distribution.
///
/// `θ²(s) = 0.45 ν Ue⁻⁶ ∫₀ˢ Ue⁵ ds'` with the integral by trapezoid on the
/// given stations and `ν = chord · v_inf / re`. At a stagnation start
/// (`Ue[0] = 0`) the limiting value `θ₀² = 0.075 ν / (dUe/ds)₀` is used.
/// The derivative in `λ` uses one-sided differences at the ends and central
/// differences inside. The march records the first station with
/// `λ ≤ -0.09` as the separation point.
pub fn thwaites_march<T: Scalar>(
    dist: &EdgeVelocityDistribution<T>,
    re: T,
    chord: T,
    v_inf: T,
) -> Result<BoundaryLayerState<T>> {
    if re.is_nan() || re <= T::zero() {
        return Err(Error::InvalidConfig("Reynolds number must be positive".into()));
    }
    let s = dist.s();
    let ue = dist.ue();
    let m = s.len();
    if ue.iter().all(|&u| u == T::zero()) {
        return Err(Error::DegenerateDistribution);
    }
    let nu = chord * v_inf / re;
    let half = T::of(0.5);

    // dUe/ds: one-sided at the ends, central inside.
    let mut due = vec![T::zero(); m];
    due[0] = (ue[1] - ue[0]) / (s[1] - s[0]);
    due[m - 1] = (ue[m - 1] - ue[m - 2]) / (s[m - 1] - s[m - 2]);
    for i in 1..m - 1 {
        due[i] = (ue[i + 1] - ue[i - 1]) / (s[i + 1] - s[i - 1]);
    }

    // Cumulative trapezoid of Ue^5.
    let pow5 = |u: T| u * u * u * u * u;
    let mut integral = vec![T::zero(); m];
    for i in 1..m {
        integral[i] =
            integral[i - 1] + half * (pow5(ue[i]) + pow5(ue[i - 1])) * (s[i] - s[i - 1]);
    }

    let mut theta = vec![T::zero(); m];
    let mut lambda = vec![T::zero(); m];
    let mut shape = vec![T::zero(); m];
    let mut cf = vec![T::zero(); m];
    let mut separated_at = None;

    for i in 0..m {
        let theta_sq = if ue[i] == T::zero() {
            // Stagnation-point limit of the integral form.
            if due[i] > T::zero() {
                T::of(0.075) * nu / due[i]
            } else {
                T::zero()
            }
        } else {
            T::of(0.45) * nu * integral[i] / pow5(ue[i]) / ue[i]
        };
        theta[i] = theta_sq.sqrt();
        lambda[i] = theta_sq * due[i] / nu;
        shape[i] = correlation_h(lambda[i]);
        cf[i] = if ue[i] == T::zero() || theta[i] == T::zero() {
            T::zero()
        } else {
            T::of(2.0) * nu * correlation_l(lambda[i]) / (ue[i] * theta[i])
        };
        if separated_at.is_none() && lambda[i] <= T::of(LAMBDA_SEPARATION) {
            separated_at = Some(i);
        }
    }

    Ok(BoundaryLayerState {
        theta,
        lambda,
        h: shape,
        cf,
        separated_at,
    })
}

/// Profile-drag result, per surface and total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragResult<T> {
    /// Total drag coefficient, `cd_upper + cd_lower`.
    pub cd: T,
    pub cd_upper: T,
    pub cd_lower: T,
    pub upper_separated: bool,
    pub lower_separated: bool,
    /// Whether either surface separated before the trailing edge.
    pub separated: bool,
}

/// Squire-Young drag from the trailing-edge boundary-layer state:
/// `Cd_side = 2 (θ/chord) (Ue/v_inf)^((H+5)/2)`.
///
/// A separated surface is evaluated at the separation station with `θ` and
/// `H` frozen there (a crude stall model) and flagged.
pub fn squire_young_drag<T: Scalar>(
    upper: &BoundaryLayerState<T>,
    lower: &BoundaryLayerState<T>,
    upper_dist: &EdgeVelocityDistribution<T>,
    lower_dist: &EdgeVelocityDistribution<T>,
    flow: &FlowCondition<T>,
    chord: T,
) -> DragResult<T> {
    let side = |bl: &BoundaryLayerState<T>, dist: &EdgeVelocityDistribution<T>| {
        let at = bl.separated_at.unwrap_or(dist.len() - 1);
        let exponent = (bl.h[at] + T::of(5.0)) * T::of(0.5);
        let cd = T::of(2.0) * (bl.theta[at] / chord)
            * (dist.ue()[at] / flow.v_inf()).powf(exponent);
        (cd, bl.separated_at.is_some())
    };
    let (cd_upper, upper_separated) = side(upper, upper_dist);
    let (cd_lower, lower_separated) = side(lower, lower_dist);
    DragResult {
        cd: cd_upper + cd_lower,
        cd_upper,
        cd_lower,
        upper_separated,
        lower_separated,
        separated: upper_separated || lower_separated,
    }
}

/// CSV table of boundary-layer stations: `s,ue,theta,lambda,h,cf`.
pub fn bl_csv<T: Scalar>(dist: &EdgeVelocityDistribution<T>, bl: &BoundaryLayerState<T>) -> String {
    let mut out = String::from("s,ue,theta,lambda,h,cf\n");
    for i in 0..dist.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            dist.s()[i],
            dist.ue()[i],
            bl.theta[i],
            bl.lambda[i],
            bl.h[i],
            bl.cf[i]
        ));
    }
    out
}
