//! Wall-clock behavior of the batch engine. These tests measure real time,
//! so they serialize on a local gate.

mod common;

use std::sync::Mutex;

use common::seeded_workload;
use panelflow::pipeline::{
    run_pipelined, run_sequential, run_split, PipelineConfig, TimingReport, Workload,
};

static GATE: Mutex<()> = Mutex::new(());

fn gate() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn median_of<F: FnMut() -> TimingReport>(mut run: F, reps: usize) -> TimingReport {
    let mut reports: Vec<TimingReport> = (0..reps).map(|_| run()).collect();
    reports.sort_by(|a, b| a.wall_s.total_cmp(&b.wall_s));
    reports.swap_remove((reps - 1) / 2)
}

#[test]
fn single_slice_pipeline_stays_within_the_overhead_floor() {
    let _g = gate();
    let workload = seeded_workload(400, 200, 31);
    let cfg = PipelineConfig {
        num_slices: 1,
        assembly_workers: 1,
        solver_workers: 1,
        ..PipelineConfig::default()
    };
    // Warmup run settles the allocator and CPU state after compilation.
    let _ = run_sequential(&workload, 1).unwrap();
    let seq = median_of(|| run_sequential(&workload, 1).unwrap().1, 3);
    let pip = median_of(|| run_pipelined(&workload, &cfg).unwrap().1, 3);

    // One slice cannot overlap anything: wall time is the three stages
    // back-to-back, and at most 5% above the sequential baseline.
    let stages = pip.assembly_s + pip.transfer_s + pip.solve_s;
    assert!(
        pip.wall_s >= 0.95 * stages,
        "W {:.3}s vs serialized stages {:.3}s",
        pip.wall_s,
        stages
    );
    assert!(
        pip.wall_s <= 1.05 * seq.wall_s,
        "pipelined {:.3}s more than 5% over sequential {:.3}s",
        pip.wall_s,
        seq.wall_s
    );
}

#[test]
fn splitting_work_to_an_idle_secondary_pool_beats_the_full_pipeline() {
    let _g = gate();
    let workload = seeded_workload(400, 200, 32);
    let pipelined_cfg = PipelineConfig {
        num_slices: 10,
        assembly_workers: 1,
        solver_workers: 1,
        ..PipelineConfig::default()
    };
    let split_cfg = PipelineConfig {
        split_fraction: 0.6,
        secondary_workers: 1,
        ..pipelined_cfg.clone()
    };
    let full = median_of(|| run_pipelined(&workload, &pipelined_cfg).unwrap().1, 3);
    let split = median_of(|| run_split(&workload, &split_cfg).unwrap().1, 3);
    assert!(
        split.wall_s < full.wall_s,
        "split {:.3}s should beat the assembly-bound pipeline {:.3}s",
        split.wall_s,
        full.wall_s
    );
}

#[test]
fn hundred_identical_problems_solve_identically() {
    let _g = gate();
    let base = seeded_workload(1, 64, 33).problems()[0].clone();
    let workload = Workload::new(vec![base; 100]).unwrap();
    let (results, _) = run_sequential(&workload, 2).unwrap();
    let first = results[0].as_ref().unwrap();
    for r in &results[1..] {
        let r = r.as_ref().unwrap();
        assert!(r.solution == first.solution && r.cl == first.cl && r.drag == first.drag);
    }
}
