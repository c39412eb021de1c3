//! Collocation system of the constant-strength vortex panel method.
//!
//! The stream function is represented as a superposition of per-panel line
//! integrals of the free-space kernel `-log|x|/2π` plus the freestream
//! stream function, required to be constant on the body. Collocating at the
//! panel midpoints and eliminating the rear vortex strength through the
//! trailing-edge condition `γ_0 = -γ_{n-1}` gives a dense n×n system for
//! `[γ_0, …, γ_{n-2}, C]`.

use crate::error::{Error, Result};
use crate::geometry::{Airfoil, Panel, Point2};
use crate::linalg::{lu_solve_in_place, DenseMatrix};
use crate::scalar::Scalar;

/// Squared distance below which a field point counts as sitting on a panel
/// endpoint (1e-14 in length units).
const ENDPOINT_TOL_SQ: f64 = 1e-28;

/// Freestream at speed `v_inf` and angle of attack `alpha` (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowCondition<T> {
    v_inf: T,
    alpha: T,
}

impl<T: Scalar> FlowCondition<T> {
    pub fn new(v_inf: T, alpha: T) -> Result<Self> {
        if v_inf.is_nan() || v_inf <= T::zero() || !v_inf.is_finite() {
            return Err(Error::InvalidConfig("freestream speed must be positive".into()));
        }
        if alpha.is_nan() || alpha.abs() >= T::FRAC_PI_2() {
            return Err(Error::InvalidConfig(
                "angle of attack must satisfy |alpha| < pi/2".into(),
            ));
        }
        Ok(FlowCondition { v_inf, alpha })
    }

    pub fn v_inf(&self) -> T {
        self.v_inf
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Freestream stream function `v_inf (y cos α - x sin α)`.
    pub fn stream(&self, p: Point2<T>) -> T {
        self.v_inf * (p.y * self.alpha.cos() - p.x * self.alpha.sin())
    }
}

/// Stream-function influence of a unit-strength panel on a field point:
/// the line integral of `-log|x - s| / 2π` along the panel.
///
/// Closed form with two logarithms and two `atan2` evaluations; finite at
/// the panel's own midpoint (the self-influence term), singular only at the
/// endpoints.
pub fn influence<T: Scalar>(x: Point2<T>, panel: &Panel<T>) -> Result<T> {
    let d0 = x - panel.a;
    let d1 = x - panel.b;
    let r0_sq = d0.norm_sq();
    let r1_sq = d1.norm_sq();
    if r0_sq < T::of(ENDPOINT_TOL_SQ) || r1_sq < T::of(ENDPOINT_TOL_SQ) {
        return Err(Error::EndpointSingularity);
    }
    let u0 = d0.dot(panel.h);
    let u1 = d1.dot(panel.h);
    let w = panel.h_perp.dot(d0);
    let half = T::of(0.5);
    let bracket = half * u0 * r0_sq.ln() - half * u1 * r1_sq.ln() - w * w.atan2(u0)
        + w * w.atan2(u1)
        - panel.len * panel.len;
    Ok(-bracket / (T::of(2.0) * T::PI() * panel.len))
}

/// Dense collocation system with the trailing-edge condition folded in.
///
/// Unknown ordering is `[γ_0, …, γ_{n-2}, C]`; the last column (the
/// coefficient of the stream constant) is identically one.
#[derive(Debug, Clone)]
pub struct PanelSystem<T> {
    pub a: DenseMatrix<T>,
    pub b: Vec<T>,
}

impl<T: Scalar> PanelSystem<T> {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Estimated size of the dense data in bytes (matrix plus right-hand
    /// side), used by the transfer model of the batch engine.
    pub fn bytes(&self) -> usize {
        let n = self.n();
        (n * n + n) * std::mem::size_of::<T>()
    }
}

/// Assembles the collocation system for one airfoil and flow condition.
///
/// Row `j` enforces the surface boundary condition at control point `j`.
/// The raw coefficient of `γ_i` is the influence of panel `i`; substituting
/// `γ_{n-1} = -γ_0` folds column `n-1` into column 0.
pub fn assemble<T: Scalar>(airfoil: &Airfoil<T>, flow: &FlowCondition<T>) -> Result<PanelSystem<T>> {
    assemble_panels(&airfoil.panels(), flow)
}

/// [`assemble`] over pre-computed panels.
pub fn assemble_panels<T: Scalar>(
    panels: &[Panel<T>],
    flow: &FlowCondition<T>,
) -> Result<PanelSystem<T>> {
    let n = panels.len();
    let mut a = DenseMatrix::zeros(n);
    let mut b = vec![T::zero(); n];
    for j in 0..n {
        let mid = panels[j].mid;
        let row = a.row_mut(j);
        for (i, panel) in panels.iter().enumerate() {
            let coeff = influence(mid, panel)?;
            match i {
                0 => row[0] = coeff,
                i if i == n - 1 => row[0] -= coeff,
                _ => row[i] = coeff,
            }
        }
        row[n - 1] = T::one();
        b[j] = flow.stream(mid);
    }
    Ok(PanelSystem { a, b })
}

/// Vortex strengths and stream constant solved from a [`PanelSystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSolution<T> {
    gamma: Vec<T>,
    c: T,
}

impl<T: Scalar> FlowSolution<T> {
    /// Per-panel vortex strengths; `gamma[n-1] == -gamma[0]` exactly.
    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    /// Stream-function constant on the body surface.
    pub fn c(&self) -> T {
        self.c
    }

    #[cfg(test)]
    pub(crate) fn from_parts(gamma: Vec<T>, c: T) -> Self {
        FlowSolution { gamma, c }
    }
}

/// Solves the system in place by LU with partial pivoting and reconstructs
/// the eliminated rear vortex strength.
pub fn lu_solve<T: Scalar>(mut system: PanelSystem<T>) -> Result<FlowSolution<T>> {
    let n = system.n();
    lu_solve_in_place(&mut system.a, &mut system.b)?;
    let x = system.b;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    let mut gamma = Vec::with_capacity(n);
    gamma.extend_from_slice(&x[..n - 1]);
    gamma.push(-x[0]);
    Ok(FlowSolution { gamma, c: x[n - 1] })
}

/// Per-panel surface speeds and pressure coefficients plus the lift
/// coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceQuantities<T> {
    /// Tangential surface speed per panel (equal to the vortex strength in
    /// this formulation).
    pub v_t: Vec<T>,
    /// Pressure coefficient per panel, `1 - (v_t / v_inf)^2`.
    pub cp: Vec<T>,
    /// Lift coefficient from the total circulation.
    pub cl: T,
}

/// Derives surface speed, pressure distribution, and lift from a solution.
pub fn surface_quantities<T: Scalar>(
    solution: &FlowSolution<T>,
    airfoil: &Airfoil<T>,
    flow: &FlowCondition<T>,
) -> SurfaceQuantities<T> {
    let panels = airfoil.panels();
    let v_t = solution.gamma.clone();
    let cp: Vec<T> = v_t
        .iter()
        .map(|&g| {
            let r = g / flow.v_inf();
            T::one() - r * r
        })
        .collect();
    let circulation: T = panels
        .iter()
        .zip(&solution.gamma)
        .map(|(p, &g)| g * p.len)
        .sum();
    let cl = T::of(2.0) * circulation / (flow.v_inf() * airfoil.chord());
    SurfaceQuantities { v_t, cp, cl }
}

/// CSV table of the surface solution: `panel,x_mid,y_mid,gamma,cp`.
pub fn cp_csv<T: Scalar>(
    solution: &FlowSolution<T>,
    airfoil: &Airfoil<T>,
    flow: &FlowCondition<T>,
) -> String {
    let sq = surface_quantities(solution, airfoil, flow);
    let mut out = String::from("panel,x_mid,y_mid,gamma,cp\n");
    for (i, p) in airfoil.panels().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i,
            p.mid.x,
            p.mid.y,
            solution.gamma[i],
            sq.cp[i]
        ));
    }
    out
}
