//! Desk-scale optimizer runs: improvement, elitism, reproducibility.

use panelflow::ga::{evolve, generations_csv, GaConfig};
use panelflow::pipeline::PipelineConfig;

fn desk_cfg() -> GaConfig<f64> {
    GaConfig {
        population_size: 40,
        generations: 5,
        panels_per_airfoil: 100,
        reynolds: 1e6,
        rng_seed: 7,
        ..GaConfig::default()
    }
}

fn pipe(workers: usize) -> PipelineConfig {
    PipelineConfig {
        num_slices: 4,
        assembly_workers: workers,
        solver_workers: workers,
        ..PipelineConfig::default()
    }
}

#[test]
fn best_fitness_improves_and_is_monotone() {
    let (best, logs) = evolve(&desk_cfg(), &pipe(1)).unwrap();
    assert_eq!(logs.len(), 5);
    assert!(
        logs.last().unwrap().best_fitness > logs[0].best_fitness,
        "final best {} must exceed initial best {}",
        logs.last().unwrap().best_fitness,
        logs[0].best_fitness
    );
    for w in logs.windows(2) {
        assert!(w[1].best_fitness >= w[0].best_fitness, "elitism violated");
    }
    assert_eq!(best.fitness().unwrap(), logs.last().unwrap().best_fitness);
}

#[test]
fn same_seed_reproduces_the_run_bitwise() {
    let (best_a, logs_a) = evolve(&desk_cfg(), &pipe(1)).unwrap();
    let (best_b, logs_b) = evolve(&desk_cfg(), &pipe(1)).unwrap();
    assert_eq!(best_a.genome, best_b.genome);
    assert_eq!(generations_csv(&logs_a), generations_csv(&logs_b));
    for (a, b) in logs_a.iter().zip(&logs_b) {
        assert_eq!(a.best_fitness, b.best_fitness);
        assert_eq!(a.median_fitness, b.median_fitness);
        assert_eq!(a.best.genome, b.best.genome);
    }
}

#[test]
fn worker_counts_do_not_change_the_run() {
    let cfg = GaConfig {
        population_size: 16,
        generations: 3,
        panels_per_airfoil: 64,
        ..desk_cfg()
    };
    let (_, logs_1) = evolve(&cfg, &pipe(1)).unwrap();
    let (_, logs_2) = evolve(&cfg, &pipe(2)).unwrap();
    assert_eq!(generations_csv(&logs_1), generations_csv(&logs_2));
}

#[test]
fn different_seeds_diverge() {
    let cfg_a = GaConfig {
        rng_seed: 1,
        population_size: 10,
        generations: 2,
        panels_per_airfoil: 32,
        ..desk_cfg()
    };
    let cfg_b = GaConfig {
        rng_seed: 2,
        ..cfg_a.clone()
    };
    let (_, logs_a) = evolve(&cfg_a, &pipe(1)).unwrap();
    let (_, logs_b) = evolve(&cfg_b, &pipe(1)).unwrap();
    assert_ne!(logs_a[0].best_fitness, logs_b[0].best_fitness);
}

#[test]
fn single_and_batched_evaluation_agree_bitwise() {
    use panelflow::ga::{evaluate, Evaluation};
    use panelflow::geometry::{from_bspline, BsplineGenome};
    use panelflow::panel::FlowCondition;
    use panelflow::pipeline::{run_pipelined, Problem, Workload};

    let cfg = GaConfig::<f64> {
        panels_per_airfoil: 64,
        ..desk_cfg()
    };
    let genome =
        BsplineGenome::from_interior(&[0.03, 0.05, 0.04, 0.02], &[-0.02, -0.03, -0.02, -0.01])
            .unwrap();
    let direct = match evaluate(&genome, &cfg) {
        Evaluation::Scored { fitness, cl, cd } => (fitness, cl, cd),
        other => panic!("expected a scored genome, got {other:?}"),
    };

    let airfoil = from_bspline(&genome, cfg.panels_per_airfoil).unwrap();
    let workload = Workload::new(vec![Problem {
        airfoil,
        flow: FlowCondition::new(1.0, 0.0).unwrap(),
        reynolds: cfg.reynolds,
    }])
    .unwrap();
    let batch_cfg = panelflow::pipeline::PipelineConfig {
        num_slices: 1,
        ..pipe(1)
    };
    let (results, _) = run_pipelined(&workload, &batch_cfg).unwrap();
    let analysis = results[0].as_ref().unwrap();
    assert_eq!(analysis.cl / analysis.drag.cd, direct.0);
    assert_eq!(analysis.cl, direct.1);
    assert_eq!(analysis.drag.cd, direct.2);
}

#[test]
fn log_rows_follow_the_csv_schema() {
    let cfg = GaConfig {
        population_size: 8,
        generations: 2,
        panels_per_airfoil: 32,
        ..desk_cfg()
    };
    let (_, logs) = evolve(&cfg, &pipe(1)).unwrap();
    let csv = generations_csv(&logs);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "generation,best_fitness,median_fitness,best_cl,best_cd"
    );
    assert_eq!(lines.count(), 2);
}
