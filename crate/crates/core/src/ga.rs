//! Genetic optimization of B-spline airfoil genomes against lift-to-drag
//! fitness at zero angle of attack.
//!
//! The orchestration is single-threaded and owns one sequential RNG stream;
//! each generation's unevaluated individuals are evaluated as one workload
//! through the pipelined batch engine, so a fixed seed reproduces the whole
//! run bit-for-bit regardless of worker counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::analysis::analyze;
use crate::error::{Error, Result};
use crate::geometry::{from_bspline, BsplineGenome};
use crate::panel::FlowCondition;
use crate::pipeline::{run_pipelined, PipelineConfig, Problem, TimingReport, Workload};
use crate::scalar::Scalar;

/// Optimizer parameters.
#[derive(Debug, Clone)]
pub struct GaConfig<T> {
    pub population_size: usize,
    pub generations: usize,
    pub tournament_size: usize,
    /// Scale of the single-coefficient mutation perturbation (chord units).
    pub mutation_sigma: T,
    /// Probability that a child is mutated at all.
    pub mutation_rate: f64,
    pub elite_count: usize,
    pub rng_seed: u64,
    pub panels_per_airfoil: usize,
    pub reynolds: T,
    /// Fitness assigned to invalid or fully separated candidates.
    pub invalid_fitness_penalty: T,
    /// B-spline coefficients per surface (pinned endpoints included).
    pub coeffs_per_surface: usize,
}

impl<T: Scalar> Default for GaConfig<T> {
    fn default() -> Self {
        GaConfig {
            population_size: 1000,
            generations: 10,
            tournament_size: 3,
            mutation_sigma: T::of(0.01),
            mutation_rate: 0.9,
            elite_count: 2,
            rng_seed: 0,
            panels_per_airfoil: 200,
            reynolds: T::of(1e6),
            invalid_fitness_penalty: T::of(-1e9),
            coeffs_per_surface: 8,
        }
    }
}

impl<T: Scalar> GaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::InvalidConfig(format!(
                "population_size must be at least 4, got {}",
                self.population_size
            )));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::InvalidConfig(
                "elite_count must be smaller than the population".into(),
            ));
        }
        if self.tournament_size < 2 {
            return Err(Error::InvalidConfig("tournament_size must be at least 2".into()));
        }
        if self.generations == 0 {
            return Err(Error::InvalidConfig("need at least one generation".into()));
        }
        if self.coeffs_per_surface < 4 {
            return Err(Error::InvalidConfig(
                "need at least 4 coefficients per surface".into(),
            ));
        }
        if !(self.mutation_rate >= 0.0 && self.mutation_rate <= 1.0) {
            return Err(Error::InvalidConfig("mutation_rate must be in [0, 1]".into()));
        }
        let positive = |v: T| v.is_finite() && v > T::zero();
        if !positive(self.mutation_sigma) || !positive(self.reynolds) {
            return Err(Error::InvalidConfig(
                "mutation_sigma and reynolds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Evaluation outcome cached on an individual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation<T> {
    Scored { fitness: T, cl: T, cd: T },
    Penalized { penalty: T },
}

impl<T: Scalar> Evaluation<T> {
    pub fn fitness(&self) -> T {
        match *self {
            Evaluation::Scored { fitness, .. } => fitness,
            Evaluation::Penalized { penalty } => penalty,
        }
    }
}

/// One candidate airfoil.
#[derive(Debug, Clone)]
pub struct Individual<T> {
    pub genome: BsplineGenome<T>,
    pub eval: Option<Evaluation<T>>,
}

impl<T: Scalar> Individual<T> {
    pub fn unevaluated(genome: BsplineGenome<T>) -> Self {
        Individual { genome, eval: None }
    }

    pub fn fitness(&self) -> Option<T> {
        self.eval.as_ref().map(Evaluation::fitness)
    }
}

/// Per-generation record.
#[derive(Debug, Clone)]
pub struct GenerationLog<T> {
    pub generation: usize,
    pub best_fitness: T,
    pub median_fitness: T,
    /// Snapshot of the generation's best individual.
    pub best: Individual<T>,
    /// Timing of the batched evaluation (absent when every candidate was
    /// penalized before reaching the solver).
    pub timing: Option<TimingReport>,
}

fn score<T: Scalar>(analysis: &crate::analysis::AirfoilAnalysis<T>, cfg: &GaConfig<T>) -> Evaluation<T> {
    // Separated candidates keep their (frozen-state) drag and compete on
    // lift-to-drag; a laminar layer running into the rear stagnation of a
    // sharp trailing edge flags separation on nearly every closed section,
    // so a hard penalty would flatten the fitness landscape.
    let fitness = analysis.cl / analysis.drag.cd;
    if !fitness.is_finite() {
        return Evaluation::Penalized {
            penalty: cfg.invalid_fitness_penalty,
        };
    }
    Evaluation::Scored {
        fitness,
        cl: analysis.cl,
        cd: analysis.drag.cd,
    }
}

/// Lift-to-drag fitness of a single genome at zero angle of attack.
///
/// Invalid geometry and solver failures collapse to the configured penalty.
pub fn fitness<T: Scalar>(genome: &BsplineGenome<T>, cfg: &GaConfig<T>) -> T {
    evaluate(genome, cfg).fitness()
}

/// Full evaluation of a single genome (same arithmetic as the batched path).
pub fn evaluate<T: Scalar>(genome: &BsplineGenome<T>, cfg: &GaConfig<T>) -> Evaluation<T> {
    let airfoil = match from_bspline(genome, cfg.panels_per_airfoil) {
        Ok(a) => a,
        Err(_) => {
            return Evaluation::Penalized {
                penalty: cfg.invalid_fitness_penalty,
            }
        }
    };
    let flow = FlowCondition::new(T::one(), T::zero()).expect("zero-alpha flow is valid");
    match analyze(&airfoil, &flow, cfg.reynolds) {
        Ok(analysis) => score(&analysis, cfg),
        Err(_) => Evaluation::Penalized {
            penalty: cfg.invalid_fitness_penalty,
        },
    }
}

/// Best of `k` uniform draws with replacement; the first-drawn individual
/// wins ties.
pub fn tournament_select<'a, T: Scalar, R: Rng>(
    population: &'a [Individual<T>],
    k: usize,
    rng: &mut R,
) -> &'a Individual<T> {
    assert!(k >= 1 && !population.is_empty());
    let mut best: Option<&Individual<T>> = None;
    for _ in 0..k {
        let pick = &population[rng.random_range(0..population.len())];
        let fitness = pick.fitness().expect("tournament requires evaluated individuals");
        match best {
            Some(b) if fitness <= b.fitness().unwrap() => {}
            _ => best = Some(pick),
        }
    }
    best.unwrap()
}

/// One-point crossover over the concatenated (upper, lower) coefficient
/// vector; children swap tails and the endpoint pinning is re-imposed.
pub fn one_point_crossover<T: Scalar, R: Rng>(
    a: &BsplineGenome<T>,
    b: &BsplineGenome<T>,
    rng: &mut R,
) -> Result<(BsplineGenome<T>, BsplineGenome<T>)> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch);
    }
    let total = a.coeff_count();
    let cut = rng.random_range(0..total);
    let upper_len = a.upper().len();
    let splice = |head: &BsplineGenome<T>, tail: &BsplineGenome<T>| {
        let mut flat: Vec<T> = (0..total)
            .map(|i| if i < cut { head.coeff(i) } else { tail.coeff(i) })
            .collect();
        let lower = flat.split_off(upper_len);
        BsplineGenome::repinned(flat, lower)
    };
    Ok((splice(a, b)?, splice(b, a)?))
}

/// With probability `mutation_rate`, perturbs exactly one uniformly chosen
/// non-pinned coefficient by a zero-mean Gaussian of scale `mutation_sigma`.
pub fn mutate<T: Scalar, R: Rng>(
    genome: &BsplineGenome<T>,
    cfg: &GaConfig<T>,
    rng: &mut R,
) -> BsplineGenome<T> {
    let mut out = genome.clone();
    if cfg.mutation_rate == 0.0 || rng.random::<f64>() >= cfg.mutation_rate {
        return out;
    }
    let upper_len = genome.upper().len();
    let lower_len = genome.lower().len();
    let free = (upper_len - 2) + (lower_len - 2);
    let k = rng.random_range(0..free);
    let idx = if k < upper_len - 2 {
        1 + k
    } else {
        upper_len + 1 + (k - (upper_len - 2))
    };
    let normal = Normal::new(0.0, cfg.mutation_sigma.as_f64()).expect("positive sigma");
    let delta = T::of(normal.sample(rng));
    out.set_coeff(idx, out.coeff(idx) + delta);
    out
}

/// Symmetric thin base genome used to seed generation zero.
fn base_genome<T: Scalar>(coeffs: usize) -> BsplineGenome<T> {
    let upper: Vec<T> = (0..coeffs)
        .map(|i| {
            if i == 0 || i == coeffs - 1 {
                T::zero()
            } else {
                T::of(0.04)
            }
        })
        .collect();
    let lower: Vec<T> = upper.iter().map(|&c| -c).collect();
    BsplineGenome::new(upper, lower).expect("base genome is valid")
}

fn jitter<T: Scalar, R: Rng>(genome: &BsplineGenome<T>, sigma: f64, rng: &mut R) -> BsplineGenome<T> {
    let normal = Normal::new(0.0, sigma).expect("positive sigma");
    let mut out = genome.clone();
    for i in 0..out.coeff_count() {
        if !out.is_pinned(i) {
            let delta = T::of(normal.sample(rng));
            out.set_coeff(i, out.coeff(i) + delta);
        }
    }
    out
}

/// Evaluates every unevaluated individual as one pipelined workload.
fn evaluate_population<T: Scalar>(
    population: &mut [Individual<T>],
    cfg: &GaConfig<T>,
    pipe: &PipelineConfig,
) -> Result<Option<TimingReport>> {
    let flow = FlowCondition::new(T::one(), T::zero()).expect("zero-alpha flow is valid");
    let mut owners = Vec::new();
    let mut problems = Vec::new();
    for (idx, ind) in population.iter_mut().enumerate() {
        if ind.eval.is_some() {
            continue;
        }
        match from_bspline(&ind.genome, cfg.panels_per_airfoil) {
            Ok(airfoil) => {
                owners.push(idx);
                problems.push(Problem {
                    airfoil,
                    flow,
                    reynolds: cfg.reynolds,
                });
            }
            Err(_) => {
                ind.eval = Some(Evaluation::Penalized {
                    penalty: cfg.invalid_fitness_penalty,
                });
            }
        }
    }
    if problems.is_empty() {
        return Ok(None);
    }
    let workload = Workload::new(problems)?;
    let mut pipe = pipe.clone();
    pipe.num_slices = pipe.num_slices.min(workload.len()).max(1);
    let (results, timing) = run_pipelined(&workload, &pipe)?;
    for (owner, result) in owners.into_iter().zip(results) {
        population[owner].eval = Some(match result {
            Ok(analysis) => score(&analysis, cfg),
            Err(_) => Evaluation::Penalized {
                penalty: cfg.invalid_fitness_penalty,
            },
        });
    }
    Ok(Some(timing))
}

/// Indices sorted by fitness descending, index ascending on ties.
fn ranked<T: Scalar>(population: &[Individual<T>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..population.len()).collect();
    idx.sort_by(|&a, &b| {
        population[b]
            .fitness()
            .unwrap()
            .partial_cmp(&population[a].fitness().unwrap())
            .expect("fitness values are never NaN")
            .then(a.cmp(&b))
    });
    idx
}

fn median_fitness<T: Scalar>(population: &[Individual<T>]) -> T {
    let mut values: Vec<T> = population.iter().map(|i| i.fitness().unwrap()).collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("fitness values are never NaN"));
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        (values[m / 2 - 1] + values[m / 2]) * T::of(0.5)
    }
}

fn breed<T: Scalar, R: Rng>(
    population: &[Individual<T>],
    cfg: &GaConfig<T>,
    rng: &mut R,
) -> Result<Vec<Individual<T>>> {
    let order = ranked(population);
    let mut next: Vec<Individual<T>> = order[..cfg.elite_count]
        .iter()
        .map(|&i| population[i].clone())
        .collect();
    while next.len() < cfg.population_size {
        let pa = tournament_select(population, cfg.tournament_size, rng);
        let pb = tournament_select(population, cfg.tournament_size, rng);
        let (c1, c2) = one_point_crossover(&pa.genome, &pb.genome, rng)?;
        next.push(Individual::unevaluated(mutate(&c1, cfg, rng)));
        if next.len() < cfg.population_size {
            next.push(Individual::unevaluated(mutate(&c2, cfg, rng)));
        }
    }
    Ok(next)
}

/// Runs the generational loop and returns the best individual ever seen
/// along with one log entry per generation.
pub fn evolve<T: Scalar>(
    cfg: &GaConfig<T>,
    pipe: &PipelineConfig,
) -> Result<(Individual<T>, Vec<GenerationLog<T>>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let base = base_genome::<T>(cfg.coeffs_per_surface);
    let seed_sigma = cfg.mutation_sigma.as_f64() * 2.0;
    let mut population: Vec<Individual<T>> = (0..cfg.population_size)
        .map(|_| Individual::unevaluated(jitter(&base, seed_sigma, &mut rng)))
        .collect();

    let mut logs = Vec::with_capacity(cfg.generations);
    let mut best_ever: Option<Individual<T>> = None;

    for generation in 0..cfg.generations {
        let timing = evaluate_population(&mut population, cfg, pipe)?;
        let order = ranked(&population);
        let best = population[order[0]].clone();
        let best_fitness = best.fitness().unwrap();
        logs.push(GenerationLog {
            generation,
            best_fitness,
            median_fitness: median_fitness(&population),
            best: best.clone(),
            timing,
        });
        let improved = best_ever
            .as_ref()
            .is_none_or(|b| best_fitness > b.fitness().unwrap());
        if improved {
            best_ever = Some(best);
        }
        if generation + 1 < cfg.generations {
            population = breed(&population, cfg, &mut rng)?;
        }
    }
    Ok((best_ever.expect("at least one generation ran"), logs))
}

/// CSV of the per-generation log:
/// `generation,best_fitness,median_fitness,best_cl,best_cd`.
pub fn generations_csv<T: Scalar>(logs: &[GenerationLog<T>]) -> String {
    let mut out = String::from("generation,best_fitness,median_fitness,best_cl,best_cd\n");
    for log in logs {
        let (cl, cd) = match log.best.eval {
            Some(Evaluation::Scored { cl, cd, .. }) => (format!("{cl}"), format!("{cd}")),
            _ => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            log.generation, log.best_fitness, log.median_fitness, cl, cd
        ));
    }
    out
}
