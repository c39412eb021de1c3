//! One-shot analysis of a single airfoil: assemble, solve, surface
//! quantities, boundary-layer march, drag. This is the exact per-problem
//! code path the batch engine runs, so results are bitwise comparable
//! across execution modes.

use crate::error::Result;
use crate::panel::{assemble, lu_solve, surface_quantities, FlowCondition, FlowSolution};
use crate::scalar::Scalar;
use crate::viscous::{split_surfaces, squire_young_drag, thwaites_march, DragResult};
use crate::geometry::Airfoil;

/// Aggregate result for one airfoil and flow condition.
#[derive(Debug, Clone, PartialEq)]
pub struct AirfoilAnalysis<T> {
    pub solution: FlowSolution<T>,
    pub cl: T,
    pub drag: DragResult<T>,
}

impl<T: Scalar> AirfoilAnalysis<T> {
    /// Lift-to-drag ratio.
    pub fn l_over_d(&self) -> T {
        self.cl / self.drag.cd
    }
}

/// Full inviscid + viscous analysis at the given chord Reynolds number.
pub fn analyze<T: Scalar>(
    airfoil: &Airfoil<T>,
    flow: &FlowCondition<T>,
    reynolds: T,
) -> Result<AirfoilAnalysis<T>> {
    let solution = lu_solve(assemble(airfoil, flow)?)?;
    let postprocessed = postprocess(solution, airfoil, flow, reynolds)?;
    Ok(postprocessed)
}

/// Post-processing stage shared by the batch engine: everything after the
/// linear solve.
pub(crate) fn postprocess<T: Scalar>(
    solution: FlowSolution<T>,
    airfoil: &Airfoil<T>,
    flow: &FlowCondition<T>,
    reynolds: T,
) -> Result<AirfoilAnalysis<T>> {
    let sq = surface_quantities(&solution, airfoil, flow);
    let (upper_dist, lower_dist) = split_surfaces(&solution, airfoil)?;
    let chord = airfoil.chord();
    let upper_bl = thwaites_march(&upper_dist, reynolds, chord, flow.v_inf())?;
    let lower_bl = thwaites_march(&lower_dist, reynolds, chord, flow.v_inf())?;
    let drag = squire_young_drag(&upper_bl, &lower_bl, &upper_dist, &lower_dist, flow, chord);
    Ok(AirfoilAnalysis {
        solution,
        cl: sq.cl,
        drag,
    })
}
