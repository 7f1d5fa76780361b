//! Population-level influence: bounded-confidence exchanges over a social
//! time-varying graph, with per-agent tolerance derived from mind-graph
//! resistance, plus the sharing metric.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mind::{AgentMind, ResistanceStat};
use crate::tvg::{EntityId, Tick, TimeVaryingGraph, Window};

/// Deterministic stream used everywhere randomness is needed.
pub type SimRng = ChaCha8Rng;

/// Feedback rate from sharing into confidence.
pub const CONFIDENCE_FEEDBACK_RATE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsParams {
    /// Convergence rate, in (0, 0.5].
    pub mu: f64,
    pub eps_min: f64,
    pub eps_max: f64,
    /// Sharing radius, in (0, 1).
    pub delta_share: f64,
    pub confidence_feedback: bool,
    pub resistance_stat: ResistanceStat,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        DynamicsParams {
            mu: 0.5,
            eps_min: 0.0,
            eps_max: 0.5,
            delta_share: 0.1,
            confidence_feedback: false,
            resistance_stat: ResistanceStat::Mean,
        }
    }
}

impl DynamicsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "mu must be in (0, 0.5], got {}",
                self.mu
            )));
        }
        if !(0.0 <= self.eps_min && self.eps_min <= self.eps_max && self.eps_max <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= eps_min <= eps_max <= 1, got eps_min={} eps_max={}",
                self.eps_min, self.eps_max
            )));
        }
        if !(self.delta_share > 0.0 && self.delta_share < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta_share must be in (0, 1), got {}",
                self.delta_share
            )));
        }
        Ok(())
    }
}

/// One agent: its mind plus the scalar positions it exchanges socially.
/// `opinions` mirrors the subjective truth values of the mind at every
/// step boundary.
#[derive(Debug, Clone)]
pub struct Agent {
    pub id: EntityId,
    pub mind: AgentMind,
    pub opinions: BTreeMap<String, f64>,
}

impl Agent {
    pub fn new(id: EntityId, mind: AgentMind) -> Self {
        let opinions = mind
            .representations()
            .map(|r| (r.prop.clone(), r.subjective_truth))
            .collect();
        Agent { id, mind, opinions }
    }

    fn set_opinion(&mut self, prop: &str, value: f64) -> Result<()> {
        self.mind.set_subjective_truth(prop, value)?;
        self.opinions.insert(prop.to_string(), value);
        Ok(())
    }
}

pub struct Population {
    pub agents: Vec<Agent>,
    pub social: TimeVaryingGraph,
}

impl Population {
    pub fn new(agents: Vec<Agent>, social: TimeVaryingGraph) -> Result<Self> {
        if social.n_entities() != agents.len() {
            return Err(Error::InvalidArgument(format!(
                "social graph has {} entities for {} agents",
                social.n_entities(),
                agents.len()
            )));
        }
        for (i, a) in agents.iter().enumerate() {
            if a.id != i {
                return Err(Error::InvalidArgument(format!(
                    "agent at index {i} has id {}",
                    a.id
                )));
            }
        }
        Ok(Population { agents, social })
    }

    /// All propositions held by at least one agent, sorted.
    pub fn propositions(&self) -> Vec<String> {
        let mut props: Vec<String> = self
            .agents
            .iter()
            .flat_map(|a| a.opinions.keys().cloned())
            .collect();
        props.sort();
        props.dedup();
        props
    }
}

/// Tolerance interpolated between `eps_max` (no resistance) and `eps_min`
/// (full resistance).
pub fn tolerance(
    agent: &Agent,
    prop: &str,
    window: Window,
    params: &DynamicsParams,
) -> Result<f64> {
    let r = agent.mind.resistance(prop, window, params.resistance_stat)?;
    Ok(params.eps_max - (params.eps_max - params.eps_min) * r)
}

/// The symmetric bounded-confidence rule with per-side tolerances: a side
/// moves toward the other only when the gap is strictly inside its own
/// tolerance interval.
pub fn bcm_update(x_i: f64, x_j: f64, eps_i: f64, eps_j: f64, mu: f64) -> (f64, f64) {
    let gap = (x_i - x_j).abs();
    let next_i = if gap < eps_i { x_i + mu * (x_j - x_i) } else { x_i };
    let next_j = if gap < eps_j { x_j + mu * (x_i - x_j) } else { x_j };
    (next_i.clamp(0.0, 1.0), next_j.clamp(0.0, 1.0))
}

/// Fraction of the other agents holding `prop` whose opinion lies within
/// `delta` of agent `a`'s.
pub fn sharing(pop: &Population, agent_id: EntityId, prop: &str, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sharing delta must be in (0, 1), got {delta}"
        )));
    }
    let agent = pop
        .agents
        .get(agent_id)
        .ok_or(Error::UnknownEntity(agent_id))?;
    let &x = agent
        .opinions
        .get(prop)
        .ok_or_else(|| Error::UnknownProposition(prop.to_string()))?;
    let mut others = 0usize;
    let mut close = 0usize;
    for b in &pop.agents {
        if b.id == agent_id {
            continue;
        }
        if let Some(&y) = b.opinions.get(prop) {
            others += 1;
            if (x - y).abs() <= delta {
                close += 1;
            }
        }
    }
    if others == 0 {
        Ok(0.0)
    } else {
        Ok(close as f64 / others as f64)
    }
}

/// One synchronous tick: every social edge present at `t`, visited in an
/// rng-shuffled order, exchanges opinions on each shared proposition.
/// Tolerances are computed from the mind state at the start of the tick
/// over the window `[0, t]`.
pub fn influence_step(
    pop: &mut Population,
    t: Tick,
    params: &DynamicsParams,
    rng: &mut SimRng,
) -> Result<()> {
    let lifetime = pop.social.lifetime();
    if !lifetime.contains(t) {
        return Err(Error::OutOfDomain {
            t,
            start: lifetime.start,
            end: lifetime.end,
        });
    }
    let window = Window::new(0, t.saturating_add(1));
    let mut edges: Vec<(EntityId, EntityId)> = Vec::new();
    for snapshot_edge in pop.social.underlying_graph(lifetime)?.edges {
        let (u, v) = snapshot_edge.endpoints();
        if pop.social.presence((u, v), t)? {
            edges.push((u, v));
        }
    }
    edges.shuffle(rng);

    // minds do not change during the pair scan, so tolerance per
    // (agent, proposition) is fixed for the whole tick
    let mut eps_cache: HashMap<(EntityId, String), f64> = HashMap::new();
    let mut eps_of = |pop: &Population, id: EntityId, prop: &str| -> Result<f64> {
        if let Some(&e) = eps_cache.get(&(id, prop.to_string())) {
            return Ok(e);
        }
        let e = tolerance(&pop.agents[id], prop, window, params)?;
        eps_cache.insert((id, prop.to_string()), e);
        Ok(e)
    };

    for (i, j) in edges {
        let shared: Vec<String> = pop.agents[i]
            .opinions
            .keys()
            .filter(|p| pop.agents[j].opinions.contains_key(*p))
            .cloned()
            .collect();
        for prop in shared {
            let eps_i = eps_of(pop, i, &prop)?;
            let eps_j = eps_of(pop, j, &prop)?;
            let x_i = pop.agents[i].opinions[&prop];
            let x_j = pop.agents[j].opinions[&prop];
            let (next_i, next_j) = bcm_update(x_i, x_j, eps_i, eps_j, params.mu);
            if next_i != x_i {
                pop.agents[i].set_opinion(&prop, next_i)?;
            }
            if next_j != x_j {
                pop.agents[j].set_opinion(&prop, next_j)?;
            }
        }
    }

    if params.confidence_feedback {
        let props = pop.propositions();
        for id in 0..pop.agents.len() {
            for prop in &props {
                if !pop.agents[id].opinions.contains_key(prop) {
                    continue;
                }
                let s = sharing(pop, id, prop, params.delta_share)?;
                let d = pop.agents[id]
                    .mind
                    .representation(prop)
                    .expect("opinion mirrors a representation")
                    .confidence;
                let nudged = (d + CONFIDENCE_FEEDBACK_RATE * (s - d)).clamp(0.0, 1.0);
                pop.agents[id].mind.set_confidence(prop, nudged)?;
            }
        }
    }
    Ok(())
}
