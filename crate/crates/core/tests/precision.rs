//! Single-precision instantiation of the full stack.

mod common;

use panelflow::analysis::analyze;
use panelflow::geometry::{naca4, read_dat, write_dat, Spacing};
use panelflow::panel::{assemble, lu_solve, surface_quantities, FlowCondition};
use panelflow::pipeline::{run_pipelined, run_sequential, PipelineConfig, Problem, Workload};
use panelflow::{Airfoil32, FlowCondition32};

#[test]
fn single_precision_solver_matches_double_loosely() {
    let a32: Airfoil32 = naca4("2412", 64, Spacing::Cosine).unwrap();
    let a64 = naca4::<f64>("2412", 64, Spacing::Cosine).unwrap();
    let f32_flow = FlowCondition32::new(1.0, 0.0).unwrap();
    let f64_flow = FlowCondition::new(1.0, 0.0).unwrap();
    let cl32 = surface_quantities(
        &lu_solve(assemble(&a32, &f32_flow).unwrap()).unwrap(),
        &a32,
        &f32_flow,
    )
    .cl;
    let cl64 = surface_quantities(
        &lu_solve(assemble(&a64, &f64_flow).unwrap()).unwrap(),
        &a64,
        &f64_flow,
    )
    .cl;
    assert!(
        (cl32 as f64 - cl64).abs() < 5e-3,
        "f32 Cl {cl32} vs f64 Cl {cl64}"
    );
}

#[test]
fn single_precision_pipeline_is_bitwise_reproducible() {
    let problems: Vec<Problem<f32>> = (0..12)
        .map(|i| {
            let airfoil = naca4::<f32>("0012", 48, Spacing::Cosine).unwrap();
            Problem {
                airfoil,
                flow: FlowCondition32::new(1.0, 0.01 * i as f32 / 12.0).unwrap(),
                reynolds: 1e6,
            }
        })
        .collect();
    let w = Workload::new(problems).unwrap();
    let (seq, _) = run_sequential(&w, 2).unwrap();
    let cfg = PipelineConfig {
        num_slices: 3,
        assembly_workers: 1,
        solver_workers: 1,
        ..PipelineConfig::default()
    };
    let (pip, _) = run_pipelined(&w, &cfg).unwrap();
    for (a, b) in seq.iter().zip(&pip) {
        let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
        assert!(a.solution == b.solution && a.cl == b.cl && a.drag == b.drag);
    }
}

#[test]
fn single_precision_end_to_end_drag_is_sane() {
    let a: Airfoil32 = naca4("0012", 64, Spacing::Cosine).unwrap();
    let flow = FlowCondition32::new(1.0, 0.0).unwrap();
    let result = analyze(&a, &flow, 1e6_f32).unwrap();
    assert!(result.drag.cd > 0.0 && result.drag.cd < 0.05);
    assert!((result.cl as f64).abs() < 0.02);
}

#[test]
fn single_precision_dat_round_trip() {
    let a: Airfoil32 = naca4("2412", 40, Spacing::Cosine).unwrap();
    let text = write_dat(&a);
    let b = read_dat::<f32>(&text).unwrap();
    assert_eq!(text, write_dat(&b));
}
