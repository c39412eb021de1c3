//! Batched execution of independent airfoil problems with stage overlap.
//!
//! Three execution modes over the same per-problem kernels:
//!
//! - [`run_sequential`]: assemble everything, then solve everything, then
//!   post-process — the baseline whose assembly/solve split mirrors a
//!   CPU-only run.
//! - [`run_pipelined`]: the workload is cut into contiguous slices that flow
//!   through assembly pool → rate-limited transfer stage → solver pool,
//!   connected by bounded FIFO queues so slice `k`'s solve overlaps slice
//!   `k+1`'s assembly and transfer. The transfer stage models an accelerator
//!   interconnect with a configurable synthetic bandwidth.
//! - [`run_split`]: a fraction of the problems takes the pipelined path while
//!   the remainder is assembled *and* solved end-to-end on a secondary pool
//!   running concurrently.
//!
//! Per-problem arithmetic is identical in all modes, so results are bitwise
//! equal problem-for-problem; only the schedule differs. Timing reports
//! capture wall time `W`, per-stage busy times `A`/`L` (and the modeled
//! transfer occupancy), and the overhead `O = W - max(stage busy time)` —
//! the cost of imperfect overlap.

use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::thread;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analysis::{postprocess, AirfoilAnalysis};
use crate::error::{Error, Result};
use crate::geometry::Airfoil;
use crate::panel::{assemble, lu_solve, FlowCondition, PanelSystem};
use crate::scalar::Scalar;

/// One independent problem: geometry, flow condition, Reynolds number.
#[derive(Debug, Clone)]
pub struct Problem<T> {
    pub airfoil: Airfoil<T>,
    pub flow: FlowCondition<T>,
    pub reynolds: T,
}

/// Outcome of one problem; solver failures are captured, never aborting a
/// batch.
pub type ProblemResult<T> = Result<AirfoilAnalysis<T>>;

/// A batch of independent problems.
#[derive(Debug, Clone)]
pub struct Workload<T> {
    problems: Vec<Problem<T>>,
}

impl<T: Scalar> Workload<T> {
    pub fn new(problems: Vec<Problem<T>>) -> Result<Self> {
        if problems.is_empty() {
            return Err(Error::EmptyWorkload);
        }
        Ok(Workload { problems })
    }

    pub fn len(&self) -> usize {
        self.problems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn problems(&self) -> &[Problem<T>] {
        &self.problems
    }
}

/// Scheduling parameters for the pipelined modes.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Number of contiguous slices the workload is partitioned into.
    pub num_slices: usize,
    /// Thread count of the assembly pool (the modeled accelerator).
    pub assembly_workers: usize,
    /// Thread count of the solver pool.
    pub solver_workers: usize,
    /// Thread count of the secondary end-to-end pool used by [`run_split`].
    pub secondary_workers: usize,
    /// Fraction of problems routed through the primary pipelined path in
    /// [`run_split`]; the remainder goes to the secondary pool.
    pub split_fraction: f64,
    /// Synthetic bandwidth of the transfer stage in bytes per second;
    /// `0` means infinite (no modeled copy cost).
    pub transfer_bytes_per_sec: f64,
    /// Bounded queue depth (in slices) between stages.
    pub queue_capacity: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let cores = thread::available_parallelism().map_or(2, |c| c.get());
        let assembly = (cores / 2).max(1);
        // Leave a thread for the transfer stage where possible.
        let solver = cores.saturating_sub(assembly + 1).max(1);
        PipelineConfig {
            num_slices: 10,
            assembly_workers: assembly,
            solver_workers: solver,
            secondary_workers: assembly,
            split_fraction: 0.75,
            transfer_bytes_per_sec: 0.0,
            queue_capacity: 2,
        }
    }
}

impl PipelineConfig {
    fn validate(&self, workload_len: usize) -> Result<()> {
        if self.num_slices == 0 || self.num_slices > workload_len {
            return Err(Error::InvalidConfig(format!(
                "num_slices must be in 1..={workload_len}, got {}",
                self.num_slices
            )));
        }
        if self.assembly_workers == 0 || self.solver_workers == 0 || self.secondary_workers == 0 {
            return Err(Error::InvalidConfig("worker pools must be non-empty".into()));
        }
        if self.queue_capacity == 0 {
            return Err(Error::InvalidConfig("queue capacity must be at least 1".into()));
        }
        if !self.transfer_bytes_per_sec.is_finite() || self.transfer_bytes_per_sec < 0.0 {
            return Err(Error::InvalidConfig(
                "transfer bandwidth must be non-negative and finite".into(),
            ));
        }
        Ok(())
    }
}

/// Execution mode tag carried by timing reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Pipelined,
    Split,
}

impl std::fmt::Display for ExecMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExecMode::Sequential => write!(f, "sequential"),
            ExecMode::Pipelined => write!(f, "pipelined"),
            ExecMode::Split => write!(f, "split"),
        }
    }
}

/// Per-slice bookkeeping: problem range and stage completion stamps
/// (seconds since run start).
#[derive(Debug, Clone, Copy)]
pub struct Slice {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub assembled_at: f64,
    pub transferred_at: f64,
    pub solved_at: f64,
}

/// Wall time and per-stage accounting for one batch run.
#[derive(Debug, Clone)]
pub struct TimingReport {
    pub mode: ExecMode,
    pub slices: usize,
    /// Fraction routed through the primary path (1 outside split mode).
    pub split: f64,
    /// Wall-clock seconds for the whole run.
    pub wall_s: f64,
    /// Summed per-slice busy seconds of the assembly stage.
    pub assembly_s: f64,
    /// Modeled occupancy of the transfer stage.
    pub transfer_s: f64,
    /// Summed per-slice busy seconds of the solve stage (includes
    /// post-processing, which rides with the solve).
    pub solve_s: f64,
    /// Busy seconds of the secondary end-to-end pool (split mode only).
    pub secondary_s: f64,
    /// `wall_s - max(stage busy seconds)`: the cost of imperfect overlap.
    pub overhead_s: f64,
    /// `W_baseline / W` when produced by a sweep with a baseline.
    pub speedup: Option<f64>,
    pub slice_trace: Vec<Slice>,
}

impl TimingReport {
    /// Longest per-stage critical path.
    pub fn max_stage_s(&self) -> f64 {
        self.assembly_s
            .max(self.transfer_s)
            .max(self.solve_s)
            .max(self.secondary_s)
    }
}

/// Contiguous ranges whose sizes differ by at most one.
fn partition(len: usize, slices: usize) -> Vec<(usize, usize)> {
    let base = len / slices;
    let extra = len % slices;
    let mut out = Vec::with_capacity(slices);
    let mut start = 0;
    for i in 0..slices {
        let size = base + usize::from(i < extra);
        out.push((start, start + size));
        start += size;
    }
    out
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn solve_one<T: Scalar>(problem: &Problem<T>, system: Result<PanelSystem<T>>) -> ProblemResult<T> {
    system
        .and_then(lu_solve)
        .and_then(|sol| postprocess(sol, &problem.airfoil, &problem.flow, problem.reynolds))
}

/// Baseline: parallel-for assembly over all problems, then all solves, then
/// post-processing, on one pool of `n_threads`.
pub fn run_sequential<T: Scalar>(
    workload: &Workload<T>,
    n_threads: usize,
) -> Result<(Vec<ProblemResult<T>>, TimingReport)> {
    if n_threads == 0 {
        return Err(Error::InvalidConfig("need at least one thread".into()));
    }
    let pool = build_pool(n_threads)?;
    let problems = workload.problems();
    let t0 = Instant::now();

    let systems: Vec<Result<PanelSystem<T>>> = pool.install(|| {
        problems
            .par_iter()
            .map(|p| assemble(&p.airfoil, &p.flow))
            .collect()
    });
    let assembly_s = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let solutions: Vec<Result<crate::panel::FlowSolution<T>>> =
        pool.install(|| systems.into_par_iter().map(|s| s.and_then(lu_solve)).collect());
    let solve_s = t1.elapsed().as_secs_f64();

    let results: Vec<ProblemResult<T>> = pool.install(|| {
        solutions
            .into_par_iter()
            .zip(problems.par_iter())
            .map(|(sol, p)| {
                sol.and_then(|s| postprocess(s, &p.airfoil, &p.flow, p.reynolds))
            })
            .collect()
    });

    let wall_s = t0.elapsed().as_secs_f64();
    let report = TimingReport {
        mode: ExecMode::Sequential,
        slices: 1,
        split: 1.0,
        wall_s,
        assembly_s,
        transfer_s: 0.0,
        solve_s,
        secondary_s: 0.0,
        overhead_s: wall_s - assembly_s.max(solve_s),
        speedup: None,
        slice_trace: vec![Slice {
            index: 0,
            start: 0,
            end: problems.len(),
            assembled_at: assembly_s,
            transferred_at: assembly_s,
            solved_at: assembly_s + solve_s,
        }],
    };
    Ok((results, report))
}

struct StageTimes {
    assembly_s: f64,
    transfer_s: f64,
    solve_s: f64,
}

struct InFlight<T> {
    slice_no: usize,
    start: usize,
    end: usize,
    systems: Vec<Result<PanelSystem<T>>>,
}

/// The three-stage interleave over a contiguous run of problems.
///
/// Stage drivers are plain threads connected by bounded FIFO channels; the
/// stage order is fixed and acyclic, so the schedule cannot deadlock. Each
/// result slot is written exactly once by the solve stage.
fn pipeline_over<T: Scalar>(
    problems: &[Problem<T>],
    cfg: &PipelineConfig,
    num_slices: usize,
    t0: Instant,
) -> Result<(Vec<ProblemResult<T>>, StageTimes, Vec<Slice>)> {
    let asm_pool = build_pool(cfg.assembly_workers)?;
    let sol_pool = build_pool(cfg.solver_workers)?;
    let ranges = partition(problems.len(), num_slices);
    let bandwidth = cfg.transfer_bytes_per_sec;

    let (to_transfer, from_assembly): (SyncSender<InFlight<T>>, Receiver<InFlight<T>>) =
        sync_channel(cfg.queue_capacity);
    let (to_solver, from_transfer): (SyncSender<InFlight<T>>, Receiver<InFlight<T>>) =
        sync_channel(cfg.queue_capacity);

    let (results, times, trace) = thread::scope(|scope| {
        let assembly = scope.spawn(move || {
            let mut busy = 0.0;
            let mut stamps = Vec::with_capacity(ranges.len());
            for (slice_no, &(start, end)) in ranges.iter().enumerate() {
                let tick = Instant::now();
                let systems: Vec<Result<PanelSystem<T>>> = asm_pool.install(|| {
                    problems[start..end]
                        .par_iter()
                        .map(|p| assemble(&p.airfoil, &p.flow))
                        .collect()
                });
                busy += tick.elapsed().as_secs_f64();
                stamps.push((slice_no, t0.elapsed().as_secs_f64()));
                to_transfer
                    .send(InFlight {
                        slice_no,
                        start,
                        end,
                        systems,
                    })
                    .expect("solve side of the pipeline hung up");
            }
            (busy, stamps)
        });

        let transfer = scope.spawn(move || {
            let mut busy = 0.0;
            let mut stamps = Vec::new();
            while let Ok(msg) = from_assembly.recv() {
                if bandwidth > 0.0 {
                    let bytes: usize = msg
                        .systems
                        .iter()
                        .filter_map(|s| s.as_ref().ok().map(|sys| sys.bytes()))
                        .sum();
                    let seconds = bytes as f64 / bandwidth;
                    thread::sleep(Duration::from_secs_f64(seconds));
                    busy += seconds;
                }
                stamps.push((msg.slice_no, t0.elapsed().as_secs_f64()));
                to_solver
                    .send(msg)
                    .expect("solve side of the pipeline hung up");
            }
            (busy, stamps)
        });

        let solver = scope.spawn(move || {
            let mut busy = 0.0;
            let mut stamps = Vec::new();
            let mut collected = Vec::new();
            while let Ok(msg) = from_transfer.recv() {
                let tick = Instant::now();
                let slice_problems = &problems[msg.start..msg.end];
                let results: Vec<ProblemResult<T>> = sol_pool.install(|| {
                    msg.systems
                        .into_par_iter()
                        .zip(slice_problems.par_iter())
                        .map(|(sys, p)| solve_one(p, sys))
                        .collect()
                });
                busy += tick.elapsed().as_secs_f64();
                stamps.push((msg.slice_no, t0.elapsed().as_secs_f64()));
                collected.push((msg.slice_no, msg.start, msg.end, results));
            }
            (busy, stamps, collected)
        });

        let (assembly_s, assembled_stamps) = assembly.join().expect("assembly stage panicked");
        let (transfer_s, transfer_stamps) = transfer.join().expect("transfer stage panicked");
        let (solve_s, solve_stamps, collected) = solver.join().expect("solve stage panicked");

        let mut trace: Vec<Slice> = collected
            .iter()
            .map(|&(slice_no, start, end, _)| Slice {
                index: slice_no,
                start,
                end,
                assembled_at: assembled_stamps[slice_no].1,
                transferred_at: transfer_stamps
                    .iter()
                    .find(|(no, _)| *no == slice_no)
                    .map_or(0.0, |&(_, at)| at),
                solved_at: solve_stamps
                    .iter()
                    .find(|(no, _)| *no == slice_no)
                    .map_or(0.0, |&(_, at)| at),
            })
            .collect();
        trace.sort_by_key(|s| s.index);

        let mut collected = collected;
        collected.sort_by_key(|&(slice_no, _, _, _)| slice_no);
        let mut results = Vec::with_capacity(problems.len());
        for (_, _, _, slice_results) in collected {
            results.extend(slice_results);
        }

        (
            results,
            StageTimes {
                assembly_s,
                transfer_s,
                solve_s,
            },
            trace,
        )
    });

    Ok((results, times, trace))
}

/// Runs the workload through the assembly → transfer → solve interleave.
///
/// Results are bitwise identical to [`run_sequential`] for every problem.
pub fn run_pipelined<T: Scalar>(
    workload: &Workload<T>,
    cfg: &PipelineConfig,
) -> Result<(Vec<ProblemResult<T>>, TimingReport)> {
    cfg.validate(workload.len())?;
    let t0 = Instant::now();
    let (results, times, trace) = pipeline_over(workload.problems(), cfg, cfg.num_slices, t0)?;
    let wall_s = t0.elapsed().as_secs_f64();
    let max_stage = times.assembly_s.max(times.transfer_s).max(times.solve_s);
    Ok((
        results,
        TimingReport {
            mode: ExecMode::Pipelined,
            slices: cfg.num_slices,
            split: 1.0,
            wall_s,
            assembly_s: times.assembly_s,
            transfer_s: times.transfer_s,
            solve_s: times.solve_s,
            secondary_s: 0.0,
            overhead_s: wall_s - max_stage,
            speedup: None,
            slice_trace: trace,
        },
    ))
}

/// Routes `split_fraction` of the problems through the pipelined path while
/// the remainder runs end-to-end on the secondary pool, concurrently.
pub fn run_split<T: Scalar>(
    workload: &Workload<T>,
    cfg: &PipelineConfig,
) -> Result<(Vec<ProblemResult<T>>, TimingReport)> {
    cfg.validate(workload.len())?;
    let f = cfg.split_fraction;
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "split_fraction must be in (0, 1], got {f}"
        )));
    }
    let m = workload.len();
    let n_primary = ((f * m as f64).round() as usize).clamp(1, m);
    let num_slices = cfg.num_slices.min(n_primary);
    let problems = workload.problems();
    let sec_pool = build_pool(cfg.secondary_workers)?;

    let t0 = Instant::now();
    let (primary, secondary) = thread::scope(|scope| {
        let secondary = scope.spawn(|| {
            let tick = Instant::now();
            let results: Vec<ProblemResult<T>> = sec_pool.install(|| {
                problems[n_primary..]
                    .par_iter()
                    .map(|p| {
                        assemble(&p.airfoil, &p.flow)
                            .and_then(lu_solve)
                            .and_then(|sol| {
                                postprocess(sol, &p.airfoil, &p.flow, p.reynolds)
                            })
                    })
                    .collect()
            });
            (results, tick.elapsed().as_secs_f64())
        });
        let primary = pipeline_over(&problems[..n_primary], cfg, num_slices, t0);
        (primary, secondary.join().expect("secondary pool panicked"))
    });
    let (mut results, times, trace) = primary?;
    let (secondary_results, secondary_s) = secondary;
    results.extend(secondary_results);

    let wall_s = t0.elapsed().as_secs_f64();
    let max_stage = times
        .assembly_s
        .max(times.transfer_s)
        .max(times.solve_s)
        .max(secondary_s);
    Ok((
        results,
        TimingReport {
            mode: ExecMode::Split,
            slices: num_slices,
            split: f,
            wall_s,
            assembly_s: times.assembly_s,
            transfer_s: times.transfer_s,
            solve_s: times.solve_s,
            secondary_s,
            overhead_s: wall_s - max_stage,
            speedup: None,
            slice_trace: trace,
        },
    ))
}

/// Runs a configuration sweep and reports one median-of-`repetitions` row
/// per configuration, with speedups against the sequential baseline.
pub fn bench_sweep<T: Scalar>(
    workload: &Workload<T>,
    base: &PipelineConfig,
    slice_list: &[usize],
    split_list: &[f64],
    repetitions: usize,
) -> Result<Vec<TimingReport>> {
    if repetitions == 0 {
        return Err(Error::InvalidConfig("need at least one repetition".into()));
    }
    if slice_list.is_empty() && split_list.is_empty() {
        return Err(Error::InvalidConfig("nothing to sweep".into()));
    }

    let median = |mut reports: Vec<TimingReport>| -> TimingReport {
        reports.sort_by(|a, b| a.wall_s.total_cmp(&b.wall_s));
        reports.swap_remove((reports.len() - 1) / 2)
    };

    let baseline_threads = base.assembly_workers + base.solver_workers;
    let mut runs = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        runs.push(run_sequential(workload, baseline_threads)?.1);
    }
    let mut baseline = median(runs);
    let base_wall = baseline.wall_s;
    baseline.speedup = Some(1.0);

    let mut rows = vec![baseline];
    for &slices in slice_list {
        let cfg = PipelineConfig {
            num_slices: slices,
            ..base.clone()
        };
        let mut runs = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            runs.push(run_pipelined(workload, &cfg)?.1);
        }
        let mut row = median(runs);
        row.speedup = Some(base_wall / row.wall_s);
        rows.push(row);
    }
    for &split in split_list {
        let cfg = PipelineConfig {
            split_fraction: split,
            ..base.clone()
        };
        let mut runs = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            runs.push(run_split(workload, &cfg)?.1);
        }
        let mut row = median(runs);
        row.speedup = Some(base_wall / row.wall_s);
        rows.push(row);
    }
    Ok(rows)
}

/// CSV table of sweep rows: `mode,slices,split,W_s,A_s,L_s,O_s,speedup`.
pub fn bench_csv(rows: &[TimingReport]) -> String {
    let mut out = String::from("mode,slices,split,W_s,A_s,L_s,O_s,speedup\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.2},{:.6},{:.6},{:.6},{:.6},{:.4}\n",
            r.mode,
            r.slices,
            r.split,
            r.wall_s,
            r.assembly_s,
            r.solve_s,
            r.overhead_s,
            r.speedup.unwrap_or(f64::NAN)
        ));
    }
    out
}
