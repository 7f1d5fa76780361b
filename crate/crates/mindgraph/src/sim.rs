//! Scenario assembly, the deterministic run loop and trajectory metrics.

use rand::{Rng, SeedableRng};

use crate::dynamics::{influence_step, sharing, Agent, DynamicsParams, Population, SimRng};
use crate::error::{Error, Result};
use crate::mind::{AgentMind, EpistemicRepresentation};
use crate::tvg::{Tick, TimeVaryingGraph, TvgBuilder, Window};

#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    Complete,
    /// Ring lattice, each agent linked to its `k` nearest neighbors on
    /// each side.
    Ring { k: usize },
    /// Erdos-Renyi with edge probability `p`, its own seed so the graph
    /// is independent of the dynamics stream.
    Random { p: f64, seed: u64 },
    /// Path to a TVG file in the line-oriented text format.
    ExplicitTvg { path: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialOpinions {
    Uniform { seed: u64 },
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MindMode {
    /// One unverifiable opinion representation per agent, zero base
    /// confidence: tolerance stays at eps_max and classic BCM is
    /// recovered.
    Scalar,
    /// Minds come from explicit representation and support records.
    Explicit,
}

/// `rep` record from a scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct RepRecord {
    pub agent: usize,
    pub prop: String,
    pub objective_truth: Option<f64>,
    pub subjective_truth: f64,
    pub confidence: f64,
    pub verifiable: bool,
}

/// `sup` record from a scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct SupRecord {
    pub agent: usize,
    pub prop_u: String,
    pub prop_v: String,
    pub weight: f64,
    pub t1: Tick,
    pub t2: Tick,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_agents: usize,
    pub horizon: Tick,
    pub topology: Topology,
    pub initial_opinions: InitialOpinions,
    pub minds: MindMode,
    pub reps: Vec<RepRecord>,
    pub sups: Vec<SupRecord>,
    pub params: DynamicsParams,
    pub seed: u64,
    pub metrics_every: Tick,
    /// Proposition carried by scalar minds.
    pub proposition: String,
    /// Gap threshold for cluster counting.
    pub cluster_delta: f64,
    /// Consecutive converged samples required for early termination;
    /// 0 disables the check.
    pub convergence_window: usize,
    pub convergence_tol: f64,
    /// Record per-agent sharing values at each sample.
    pub record_sharing: bool,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_agents == 0 {
            return Err(Error::InvalidArgument("n_agents must be positive".into()));
        }
        if self.metrics_every == 0 {
            return Err(Error::InvalidArgument("metrics_every must be positive".into()));
        }
        self.params.validate()?;
        if self.cluster_delta <= 0.0 {
            return Err(Error::InvalidArgument("cluster_delta must be positive".into()));
        }
        match &self.topology {
            Topology::Ring { k } => {
                if *k == 0 || 2 * *k >= self.n_agents {
                    return Err(Error::InvalidArgument(format!(
                        "ring neighborhood {k} invalid for {} agents",
                        self.n_agents
                    )));
                }
            }
            Topology::Random { p, .. } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidArgument(format!(
                        "edge probability must be in [0, 1], got {p}"
                    )));
                }
            }
            _ => {}
        }
        if let InitialOpinions::Explicit(xs) = &self.initial_opinions {
            if xs.len() != self.n_agents {
                return Err(Error::InvalidArgument(format!(
                    "explicit opinion list has {} entries for {} agents",
                    xs.len(),
                    self.n_agents
                )));
            }
            if let Some(x) = xs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::InvalidArgument(format!(
                    "initial opinion {x} outside [0, 1]"
                )));
            }
        }
        if self.minds == MindMode::Explicit && self.reps.is_empty() {
            return Err(Error::InvalidArgument(
                "minds = explicit but no rep records given".into(),
            ));
        }
        for r in &self.reps {
            if r.agent >= self.n_agents {
                return Err(Error::UnknownEntity(r.agent));
            }
        }
        for s in &self.sups {
            if s.agent >= self.n_agents {
                return Err(Error::UnknownEntity(s.agent));
            }
        }
        Ok(())
    }
}

/// One sampled point of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub tick: Tick,
    pub opinions: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub clusters: usize,
    pub sharing: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub n_agents: usize,
    /// Canonical text of the scenario that produced this trajectory.
    pub config_echo: String,
    pub samples: Vec<Sample>,
    pub converged_at: Option<Tick>,
}

impl TrajectoryRecord {
    pub fn final_sample(&self) -> &Sample {
        self.samples.last().expect("a run always records tick 0")
    }
}

/// Number of opinion groups after sorting and splitting at gaps >= delta
/// (single-linkage chaining). Empty input has zero clusters.
pub fn cluster_count(opinions: &[f64], delta: f64) -> usize {
    if opinions.is_empty() {
        return 0;
    }
    let mut xs = opinions.to_vec();
    xs.sort_by(f64::total_cmp);
    1 + xs.windows(2).filter(|w| w[1] - w[0] >= delta).count()
}

/// Population variance of the opinion vector.
pub fn polarization(opinions: &[f64]) -> Result<f64> {
    if opinions.is_empty() {
        return Err(Error::InvalidArgument("empty opinion vector".into()));
    }
    let n = opinions.len() as f64;
    let mean = opinions.iter().sum::<f64>() / n;
    Ok(opinions.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n)
}

/// True when every cluster has pairwise spread below `tol`.
fn clusters_settled(opinions: &[f64], delta: f64, tol: f64) -> bool {
    let mut xs = opinions.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut cluster_min = match xs.first() {
        Some(&x) => x,
        None => return true,
    };
    let mut prev = cluster_min;
    for &x in &xs[1..] {
        if x - prev >= delta {
            cluster_min = x;
        } else if x - cluster_min >= tol {
            return false;
        }
        prev = x;
    }
    true
}

fn build_social(config: &ScenarioConfig) -> Result<TimeVaryingGraph> {
    let n = config.n_agents;
    let lifetime = Window::new(0, config.horizon.max(1));
    let mut b = TvgBuilder::new(n, lifetime);
    match &config.topology {
        Topology::Complete => {
            for i in 0..n {
                for j in (i + 1)..n {
                    b.add_interaction(i, j, lifetime.start, lifetime.end)?;
                }
            }
        }
        Topology::Ring { k } => {
            for i in 0..n {
                for d in 1..=*k {
                    b.add_interaction(i, (i + d) % n, lifetime.start, lifetime.end)?;
                }
            }
        }
        Topology::Random { p, seed } => {
            let mut rng = SimRng::seed_from_u64(*seed);
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random::<f64>() < *p {
                        b.add_interaction(i, j, lifetime.start, lifetime.end)?;
                    }
                }
            }
        }
        Topology::ExplicitTvg { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot read TVG file `{path}`: {e}"))
            })?;
            let g = TimeVaryingGraph::from_text(&text)?;
            if g.n_entities() != n {
                return Err(Error::InvalidArgument(format!(
                    "TVG file `{path}` has {} entities for {n} agents",
                    g.n_entities()
                )));
            }
            if config.horizon > 0 && g.lifetime().end < config.horizon {
                return Err(Error::InvalidArgument(format!(
                    "TVG lifetime ends at {} before horizon {}",
                    g.lifetime().end,
                    config.horizon
                )));
            }
            return Ok(g);
        }
    }
    Ok(b.build())
}

/// Builds the initial population for a scenario.
pub fn build_population(config: &ScenarioConfig) -> Result<Population> {
    config.validate()?;
    let social = build_social(config)?;
    let agents = match config.minds {
        MindMode::Scalar => {
            let xs: Vec<f64> = match &config.initial_opinions {
                InitialOpinions::Uniform { seed } => {
                    let mut rng = SimRng::seed_from_u64(*seed);
                    (0..config.n_agents).map(|_| rng.random::<f64>()).collect()
                }
                InitialOpinions::Explicit(xs) => xs.clone(),
            };
            xs.into_iter()
                .enumerate()
                .map(|(id, x)| {
                    let mut mind = AgentMind::new();
                    mind.add_representation(EpistemicRepresentation::new(
                        config.proposition.clone(),
                        None,
                        x,
                        0.0,
                        false,
                    )?)?;
                    Ok(Agent::new(id, mind))
                })
                .collect::<Result<Vec<_>>>()?
        }
        MindMode::Explicit => {
            let mut minds: Vec<AgentMind> = (0..config.n_agents).map(|_| AgentMind::new()).collect();
            for r in &config.reps {
                minds[r.agent].add_representation(EpistemicRepresentation::new(
                    r.prop.clone(),
                    r.objective_truth,
                    r.subjective_truth,
                    r.confidence,
                    r.verifiable,
                )?)?;
            }
            for s in &config.sups {
                minds[s.agent].add_support(&s.prop_u, &s.prop_v, s.weight, s.t1, s.t2)?;
            }
            minds
                .into_iter()
                .enumerate()
                .map(|(id, mind)| Agent::new(id, mind))
                .collect()
        }
    };
    Population::new(agents, social)
}

fn take_sample(pop: &Population, config: &ScenarioConfig, tick: Tick) -> Result<Sample> {
    let opinions: Vec<f64> = pop
        .agents
        .iter()
        .map(|a| a.opinions.get(&config.proposition).copied().unwrap_or(f64::NAN))
        .collect();
    let finite: Vec<f64> = opinions.iter().copied().filter(|x| x.is_finite()).collect();
    let mean = finite.iter().sum::<f64>() / finite.len().max(1) as f64;
    let variance = polarization(&finite).unwrap_or(0.0);
    let clusters = cluster_count(&finite, config.cluster_delta);
    let shr = if config.record_sharing {
        let mut vals = Vec::with_capacity(pop.agents.len());
        for a in &pop.agents {
            let v = if a.opinions.contains_key(&config.proposition) {
                sharing(pop, a.id, &config.proposition, config.params.delta_share)?
            } else {
                f64::NAN
            };
            vals.push(v);
        }
        Some(vals)
    } else {
        None
    };
    Ok(Sample { tick, opinions, mean, variance, clusters, sharing: shr })
}

/// Executes a scenario: `horizon` influence steps with sampling every
/// `metrics_every` ticks, terminating early once every cluster has
/// settled for `convergence_window` consecutive samples.
pub fn run(config: &ScenarioConfig) -> Result<TrajectoryRecord> {
    run_with_echo(config, String::new())
}

/// Like `run`, but embeds the canonical scenario text in the record.
pub fn run_with_echo(config: &ScenarioConfig, config_echo: String) -> Result<TrajectoryRecord> {
    config.validate()?;
    let mut pop = build_population(config)?;
    let mut rng = SimRng::seed_from_u64(config.seed);
    let finite: Vec<f64> = pop
        .agents
        .iter()
        .filter_map(|a| a.opinions.get(&config.proposition).copied())
        .collect();
    let mut samples = vec![take_sample(&pop, config, 0)?];
    let mut settled_streak =
        usize::from(clusters_settled(&finite, config.cluster_delta, config.convergence_tol));
    let mut converged_at = None;

    let lifetime = pop.social.lifetime();
    for t in 0..config.horizon {
        if lifetime.contains(t) {
            influence_step(&mut pop, t, &config.params, &mut rng)?;
        }
        let tick = t + 1;
        let is_sample = tick % config.metrics_every == 0 || tick == config.horizon;
        if !is_sample {
            continue;
        }
        let sample = take_sample(&pop, config, tick)?;
        let settled = clusters_settled(
            &sample.opinions.iter().copied().filter(|x| x.is_finite()).collect::<Vec<_>>(),
            config.cluster_delta,
            config.convergence_tol,
        );
        if sample.tick > samples.last().map(|s| s.tick).unwrap_or(0) {
            samples.push(sample);
        }
        settled_streak = if settled { settled_streak + 1 } else { 0 };
        if config.convergence_window > 0 && settled_streak >= config.convergence_window {
            converged_at = Some(tick);
            break;
        }
    }

    Ok(TrajectoryRecord {
        seed: config.seed,
        n_agents: config.n_agents,
        config_echo,
        samples,
        converged_at,
    })
}
