use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bb_synthesis::{
    embed_on_sites, solve_storage_vectors, synthesize, SynthesisOptions, TargetKind,
};
use crate::error::{Error, Result};
use crate::groups::enumerate_candidate_groups;
use crate::json::format_f64;
use crate::open_system::PulseGroup;
use crate::operator_algebra::CoordinateVector;
use crate::tomography::{EffectiveGenerator, QubitLayout};

use super::cost::{measure_generator, CostFunction};
use super::genome::Genome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LearningLoopConfig {
    pub population: usize,
    pub generations: usize,
    pub tournament: usize,
    pub mutation_sigma: f64,
    pub size_mutation_rate: f64,
    pub crossover_rate: f64,
    pub elitism: usize,
    #[serde(alias = "group_size_bound")]
    pub max_group_size: usize,
    pub delta_t: f64,
    /// Components below this fraction of the largest are dropped before solving.
    pub resolution: f64,
    pub max_passes: usize,
    /// Measured generators below this size end the analysis chain.
    pub noise_floor: f64,
    /// Stop once the best cost is at or below this value; 0 disables
    /// convergence and runs the whole budget.
    #[serde(alias = "tolerance")]
    pub target_cost: f64,
    pub seed: u64,
    /// Also seed the population with the candidate catalogue.
    pub seed_catalog: bool,
}

impl Default for LearningLoopConfig {
    fn default() -> Self {
        Self {
            population: 32,
            generations: 20,
            tournament: 3,
            mutation_sigma: 0.1,
            size_mutation_rate: 0.1,
            crossover_rate: 0.9,
            elitism: 2,
            max_group_size: 4,
            delta_t: 0.01,
            resolution: 0.1,
            max_passes: 4,
            noise_floor: 1e-10,
            target_cost: 1e-6,
            seed: 0,
            seed_catalog: false,
        }
    }
}

impl LearningLoopConfig {
    fn validate(&self) -> Result<()> {
        if self.population < 2 || self.tournament == 0 || self.elitism >= self.population {
            return Err(Error::Config(
                "population must exceed elitism, and tournaments need at least one entrant".into(),
            ));
        }
        if self.max_group_size < 2 {
            return Err(Error::Config("max_group_size must be at least 2".into()));
        }
        if self.target_cost.is_nan() || self.target_cost < 0.0 {
            return Err(Error::Config(format!("tolerance must be non-negative, got {}", self.target_cost)));
        }
        if !(self.delta_t > 0.0 && self.mutation_sigma >= 0.0 && (0.0..1.0).contains(&self.resolution)) {
            return Err(Error::Config("delta_t > 0, mutation_sigma ≥ 0 and resolution in [0, 1) are required".into()));
        }
        Ok(())
    }
}

/// One round of measure → threshold → solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisPass {
    pub pass: usize,
    /// Generator measured under the previous candidate.
    pub measured: Vec<f64>,
    pub thresholded: Vec<f64>,
    pub candidate: PulseGroup,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    #[serde(rename = "best_J")]
    pub best_j: f64,
    #[serde(rename = "mean_J")]
    pub mean_j: f64,
    /// |G| of the best member.
    pub group_size: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningOutcome {
    pub passes: Vec<AnalysisPass>,
    pub records: Vec<GenerationRecord>,
    pub best_group: PulseGroup,
    pub best_cost: f64,
    pub converged: bool,
}

fn threshold(v: &[f64], resolution: f64) -> Vec<f64> {
    let top = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v.iter().map(|&x| if x.abs() < resolution * top { 0.0 } else { x }).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Repeated tomography and synthesis. Storage targets accumulate the
/// thresholded generators of every pass as constraints; other targets
/// solve once from the free generator.
pub fn analysis_chain(cost: &CostFunction, config: &LearningLoopConfig) -> Result<Vec<AnalysisPass>> {
    config.validate()?;
    let n = cost.num_qubits();
    let model = &cost.model;
    let substeps = cost.settings.substeps;
    let target = &cost.target;
    let mut current = PulseGroup::trivial(1 << n, config.delta_t)?;
    let mut passes = Vec::new();
    let mut constraints: Vec<[f64; 3]> = Vec::new();
    for pass in 1..=config.max_passes {
        let generator = measure_generator(model, &current, substeps)?;
        let (measured, thresholded, candidate) = if target.kind == TargetKind::Storage {
            let site = target.sites[0];
            let measured = generator.xi[site].to_vec();
            if max_abs(&measured) <= config.noise_floor {
                break;
            }
            let thr = threshold(&measured, config.resolution);
            constraints.push([thr[0], thr[1], thr[2]]);
            let res = match solve_storage_vectors(&constraints, &generator.single(site)?, config.delta_t, config.max_group_size) {
                Ok(r) => r,
                Err(Error::NoSolution { .. }) => {
                    log::info!("analysis chain stopped at pass {pass}: constraints need a larger group");
                    break;
                }
                Err(e) => return Err(e),
            };
            let group = if n == 1 {
                res.group
            } else {
                let pulses = res
                    .group
                    .pulses()
                    .iter()
                    .map(|p| embed_on_sites(p, &[site], n))
                    .collect::<Result<Vec<_>>>()?;
                PulseGroup::new(pulses, config.delta_t)?
            };
            (measured, thr, group)
        } else {
            if pass > 1 {
                break;
            }
            let measured = generator.full.coords.clone();
            let thr = threshold(&measured, config.resolution);
            let cleaned = EffectiveGenerator::from_coordinates(
                CoordinateVector::new(thr.clone(), generator.full.basis)?,
                generator.time_scale,
                &QubitLayout::all_pairs(n),
            )?;
            let options = SynthesisOptions {
                max_group_size: config.max_group_size,
                delta_t: Some(config.delta_t),
                ..SynthesisOptions::default()
            };
            match synthesize(&cleaned, target, &options) {
                Ok(res) => (measured, thr, res.group),
                Err(e) => {
                    log::info!("analysis chain found no candidate: {e}");
                    break;
                }
            }
        };
        let j = cost.evaluate(&candidate)?.value;
        log::debug!("pass {pass}: |G| = {}, J = {j:.3e}", candidate.len());
        passes.push(AnalysisPass {
            pass,
            measured,
            thresholded,
            candidate: candidate.clone(),
            cost: j,
        });
        current = candidate;
        if j <= config.target_cost {
            break;
        }
    }
    Ok(passes)
}

fn member_rng(seed: u64, generation: usize, population: usize, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((generation * population + index) as u64);
    r
}

#[derive(Clone)]
struct Scored {
    genome: Genome,
    cost: f64,
}

/// Costs closer than this count as a tie, broken by the smaller group.
const COST_RESOLUTION: f64 = 1e-13;

fn better(a: &Scored, b: &Scored) -> Ordering {
    let q = |s: &Scored| (s.cost / COST_RESOLUTION).round();
    q(a).total_cmp(&q(b))
        .then(a.genome.group_size().cmp(&b.genome.group_size()))
        .then(a.cost.total_cmp(&b.cost))
}

fn score(cost: &CostFunction, genomes: Vec<Genome>, delta_t: f64) -> Result<Vec<Scored>> {
    let n = cost.num_qubits();
    genomes
        .into_par_iter()
        .map(|genome| {
            let group = genome.to_group(n, delta_t)?;
            let value = cost.evaluate(&group)?.value;
            Ok(Scored { genome, cost: value })
        })
        .collect()
}

fn tournament<'a>(pop: &'a [Scored], k: usize, r: &mut impl Rng) -> &'a Scored {
    let mut best = &pop[r.random_range(0..pop.len())];
    for _ in 1..k {
        let c = &pop[r.random_range(0..pop.len())];
        if better(c, best) == Ordering::Less {
            best = c;
        }
    }
    best
}

/// Analysis chain followed by a genetic search seeded with its candidates.
pub fn learning_loop(cost: &CostFunction, config: &LearningLoopConfig) -> Result<LearningOutcome> {
    config.validate()?;
    let n = cost.num_qubits();
    let passes = analysis_chain(cost, config)?;

    let mut initial: Vec<Genome> = Vec::new();
    for p in passes.iter().rev() {
        match Genome::from_group(&p.candidate) {
            Ok(g) if !initial.contains(&g) => initial.push(g),
            Ok(_) => {}
            Err(e) => log::info!("pass {} candidate not injected: {e}", p.pass),
        }
    }
    let trivial = Genome::trivial();
    if !initial.contains(&trivial) {
        initial.push(trivial);
    }
    if config.seed_catalog && n <= 2 {
        for sk in enumerate_candidate_groups(1 << n, config.max_group_size)? {
            if initial.len() >= config.population {
                break;
            }
            if let Ok(g) = Genome::from_group(&sk.with_delta_t(config.delta_t)?) {
                initial.push(g);
            }
        }
    }
    initial.truncate(config.population);
    let fill: Vec<Genome> = (initial.len()..config.population)
        .into_par_iter()
        .map(|i| Genome::random(&mut member_rng(config.seed, 0, config.population, i), n, config.max_group_size))
        .collect();
    initial.extend(fill);

    let mut pop = score(cost, initial, config.delta_t)?;
    let mut records = Vec::new();
    let mut converged = false;
    let mut best_j = f64::INFINITY;
    for generation in 1..=config.generations.max(1) {
        pop.sort_by(better);
        let mean = pop.iter().map(|s| s.cost).sum::<f64>() / pop.len() as f64;
        // ties within COST_RESOLUTION may swap in a smaller group that is
        // marginally worse; the record keeps the best value seen
        best_j = best_j.min(pop[0].cost);
        converged = config.target_cost > 0.0 && pop[0].cost <= config.target_cost;
        records.push(GenerationRecord {
            generation,
            best_j,
            mean_j: mean,
            group_size: pop[0].genome.group_size(),
            converged,
        });
        log::debug!("generation {generation}: best J = {:.3e}", pop[0].cost);
        if converged {
            break;
        }
        if generation == config.generations {
            break;
        }
        let elites: Vec<Scored> = pop[..config.elitism].to_vec();
        let children: Vec<Genome> = (config.elitism..config.population)
            .into_par_iter()
            .map(|i| {
                let mut r = member_rng(config.seed, generation, config.population, i);
                let a = tournament(&pop, config.tournament, &mut r);
                let mut child = if r.random_bool(config.crossover_rate) {
                    let b = tournament(&pop, config.tournament, &mut r);
                    a.genome.crossover(&b.genome, &mut r)
                } else {
                    a.genome.clone()
                };
                child.mutate(&mut r, config.mutation_sigma);
                if r.random_bool(config.size_mutation_rate) {
                    child.mutate_size(&mut r, n, config.max_group_size);
                }
                child
            })
            .collect();
        let mut next = elites;
        next.extend(score(cost, children, config.delta_t)?);
        pop = next;
    }
    pop.sort_by(better);
    let best_group = pop[0].genome.to_group(n, config.delta_t)?;
    Ok(LearningOutcome {
        passes,
        records,
        best_group,
        best_cost: pop[0].cost,
        converged,
    })
}

/// Generation records as CSV with a header row.
pub fn write_records_csv<W: std::io::Write>(records: &[GenerationRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["generation", "best_J", "mean_J", "group_size", "converged"])?;
    for r in records {
        w.write_record([
            r.generation.to_string(),
            format_f64(r.best_j),
            format_f64(r.mean_j),
            r.group_size.to_string(),
            r.converged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
