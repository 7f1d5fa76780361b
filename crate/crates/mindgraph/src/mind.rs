//! Per-agent mind graphs: the quadruplet representation model, the
//! knowledge/belief/opinion taxonomy, stimulus-induced activation and
//! confidence/resistance aggregation over the activated component.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::tvg::{EdgeKey, Tick, TimeVaryingGraph, TvgBuilder, Window};

/// An epistemic representation: proposition, objective truth value
/// (`None` when unknowable), perceived truth value, degree of confidence
/// and whether the truth value can be verified at all.
#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicRepresentation {
    pub prop: String,
    pub objective_truth: Option<f64>,
    pub subjective_truth: f64,
    pub confidence: f64,
    pub verifiable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationKind {
    Knowledge,
    Belief,
    Opinion,
}

impl EpistemicRepresentation {
    pub fn new(
        prop: impl Into<String>,
        objective_truth: Option<f64>,
        subjective_truth: f64,
        confidence: f64,
        verifiable: bool,
    ) -> Result<Self> {
        let unit = |name: &str, v: f64| {
            if !(0.0..=1.0).contains(&v) {
                Err(Error::InvalidArgument(format!("{name} must be in [0, 1], got {v}")))
            } else {
                Ok(())
            }
        };
        if let Some(t) = objective_truth {
            unit("objective truth value", t)?;
        }
        unit("subjective truth value", subjective_truth)?;
        unit("confidence", confidence)?;
        Ok(EpistemicRepresentation {
            prop: prop.into(),
            objective_truth,
            subjective_truth,
            confidence,
            verifiable,
        })
    }

    /// Total classification. Precedence: Knowledge > Opinion > Belief.
    /// Knowledge requires a verifiable, known objective value equal to the
    /// perceived one; anything unverifiable or with unknown objective value
    /// is an opinion; the rest are beliefs.
    pub fn classify(&self) -> RepresentationKind {
        match self.objective_truth {
            Some(t_o) if self.verifiable && t_o == self.subjective_truth => {
                RepresentationKind::Knowledge
            }
            Some(_) if self.verifiable => RepresentationKind::Belief,
            _ => RepresentationKind::Opinion,
        }
    }
}

/// How per-node confidences aggregate into resistance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResistanceStat {
    #[default]
    Mean,
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
struct SupportLink {
    u: usize,
    v: usize,
    weight: f64,
    t1: Tick,
    t2: Tick,
}

/// One agent's mind: representations plus a time-varying support
/// structure over them.
#[derive(Debug, Clone)]
pub struct AgentMind {
    reps: Vec<EpistemicRepresentation>,
    by_prop: HashMap<String, usize>,
    links: Vec<SupportLink>,
    structure: TimeVaryingGraph,
}

impl AgentMind {
    pub fn new() -> Self {
        AgentMind {
            reps: Vec::new(),
            by_prop: HashMap::new(),
            links: Vec::new(),
            structure: TvgBuilder::new(0, Window::new(0, Tick::MAX)).build(),
        }
    }

    pub fn representations(&self) -> impl Iterator<Item = &EpistemicRepresentation> {
        self.reps.iter()
    }

    pub fn representation(&self, prop: &str) -> Option<&EpistemicRepresentation> {
        self.by_prop.get(prop).map(|&i| &self.reps[i])
    }

    pub fn holds(&self, prop: &str) -> bool {
        self.by_prop.contains_key(prop)
    }

    pub fn structure(&self) -> &TimeVaryingGraph {
        &self.structure
    }

    fn index_of(&self, prop: &str) -> Result<usize> {
        self.by_prop
            .get(prop)
            .copied()
            .ok_or_else(|| Error::UnknownProposition(prop.to_string()))
    }

    fn rebuild_structure(&mut self) {
        let mut b = TvgBuilder::new(self.reps.len(), Window::new(0, Tick::MAX));
        for link in &self.links {
            b.add_interaction(link.u, link.v, link.t1, link.t2)
                .expect("links validated on insert");
        }
        self.structure = b.build();
    }

    pub fn add_representation(&mut self, rep: EpistemicRepresentation) -> Result<()> {
        if self.by_prop.contains_key(&rep.prop) {
            return Err(Error::InvalidArgument(format!(
                "duplicate proposition `{}`",
                rep.prop
            )));
        }
        self.by_prop.insert(rep.prop.clone(), self.reps.len());
        self.reps.push(rep);
        self.rebuild_structure();
        Ok(())
    }

    /// Adds a support link between two held propositions, active over
    /// `[t1, t2)` with weight in `(0, 1]`.
    pub fn add_support(
        &mut self,
        prop_u: &str,
        prop_v: &str,
        weight: f64,
        t1: Tick,
        t2: Tick,
    ) -> Result<()> {
        let u = self.index_of(prop_u)?;
        let v = self.index_of(prop_v)?;
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "support weight must be in (0, 1], got {weight}"
            )));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if t1 >= t2 {
            return Err(Error::EmptyInterval { t1, t2 });
        }
        self.links.push(SupportLink { u, v, weight, t1, t2 });
        self.rebuild_structure();
        Ok(())
    }

    /// Removes every support link between the two propositions.
    pub fn remove_support(&mut self, prop_u: &str, prop_v: &str) -> Result<usize> {
        let u = self.index_of(prop_u)?;
        let v = self.index_of(prop_v)?;
        let before = self.links.len();
        self.links
            .retain(|l| !((l.u == u && l.v == v) || (l.u == v && l.v == u)));
        let removed = before - self.links.len();
        if removed > 0 {
            self.rebuild_structure();
        }
        Ok(removed)
    }

    pub fn set_subjective_truth(&mut self, prop: &str, value: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidArgument(format!(
                "subjective truth value must be in [0, 1], got {value}"
            )));
        }
        let i = self.index_of(prop)?;
        self.reps[i].subjective_truth = value;
        Ok(())
    }

    pub fn set_confidence(&mut self, prop: &str, value: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidArgument(format!(
                "confidence must be in [0, 1], got {value}"
            )));
        }
        let i = self.index_of(prop)?;
        self.reps[i].confidence = value;
        Ok(())
    }

    /// The set of propositions temporally reachable back and forth from the
    /// stimulus within `window`. Always contains the stimulus.
    pub fn activate(&self, stimulus: &str, window: Window) -> Result<BTreeSet<String>> {
        let idx = self.index_of(stimulus)?;
        let component = self
            .structure
            .temporal_component(&BTreeSet::from([idx]), window)?;
        Ok(component
            .into_iter()
            .map(|i| self.reps[i].prop.clone())
            .collect())
    }

    /// Largest weight among links on the pair that are active at `t`.
    fn link_weight_at(&self, a: usize, b: usize, t: Tick) -> Option<f64> {
        self.links
            .iter()
            .filter(|l| {
                ((l.u == a && l.v == b) || (l.u == b && l.v == a)) && l.t1 <= t && t < l.t2
            })
            .map(|l| l.weight)
            .max_by(|x, y| x.total_cmp(y))
    }

    /// Noisy-OR confidence over the activated component, without writing
    /// the result back.
    pub fn confidence_value(&self, target: &str, window: Window) -> Result<f64> {
        let target_idx = self.index_of(target)?;
        let d_base = self.reps[target_idx].confidence;
        let component = self.activate(target, window)?;
        let clipped = self.structure.clipped(window);
        let mut keep = 1.0;
        let mut effective = false;
        for prop in &component {
            if prop == target {
                continue;
            }
            let k = self.by_prop[prop];
            let journey = clipped
                .foremost_journey(target_idx, k, window.start)?
                .expect("activated nodes are forward-reachable");
            let last = journey.steps.last().expect("non-trivial journey to supporter");
            let w = self
                .link_weight_at(last.from, last.to, last.departure)
                .expect("journey edge present at departure");
            let contribution = w * self.reps[k].confidence;
            if contribution > 0.0 {
                keep *= 1.0 - contribution;
                effective = true;
            }
        }
        if !effective {
            return Ok(d_base);
        }
        Ok((1.0 - (1.0 - d_base) * keep).clamp(0.0, 1.0))
    }

    /// Computes confidence and writes it back as the target's effective
    /// degree of confidence.
    pub fn confidence(&mut self, target: &str, window: Window) -> Result<f64> {
        let d = self.confidence_value(target, window)?;
        let i = self.index_of(target)?;
        self.reps[i].confidence = d;
        Ok(d)
    }

    /// Aggregated confidence over the activated component, the agent's
    /// unwillingness to revise the target.
    pub fn resistance(&self, target: &str, window: Window, stat: ResistanceStat) -> Result<f64> {
        let component = self.activate(target, window)?;
        let values: Vec<f64> = component
            .iter()
            .map(|p| self.reps[self.by_prop[p]].confidence)
            .collect();
        Ok(match stat {
            ResistanceStat::Mean => values.iter().sum::<f64>() / values.len() as f64,
            ResistanceStat::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            ResistanceStat::Max => values.iter().copied().fold(0.0, f64::max),
        })
    }

    /// Weight of the strongest support link between two propositions at `t`.
    pub fn support_weight_at(&self, prop_u: &str, prop_v: &str, t: Tick) -> Result<Option<f64>> {
        let u = self.index_of(prop_u)?;
        let v = self.index_of(prop_v)?;
        EdgeKey::new(u, v)?;
        Ok(self.link_weight_at(u, v, t))
    }
}

impl Default for AgentMind {
    fn default() -> Self {
        AgentMind::new()
    }
}

/// Ordered map from proposition to representation, mainly for inspection.
pub fn representation_map(mind: &AgentMind) -> BTreeMap<String, EpistemicRepresentation> {
    mind.representations()
        .map(|r| (r.prop.clone(), r.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(
        prop: &str,
        t_o: Option<f64>,
        t_s: f64,
        d_c: f64,
        verifiable: bool,
    ) -> EpistemicRepresentation {
        EpistemicRepresentation::new(prop, t_o, t_s, d_c, verifiable).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(rep("p", Some(0.7), 0.7, 0.5, true).classify(), RepresentationKind::Knowledge);
        assert_eq!(rep("p", None, 0.9, 0.5, false).classify(), RepresentationKind::Opinion);
        assert_eq!(rep("p", Some(0.3), 0.9, 0.5, true).classify(), RepresentationKind::Belief);
    }

    #[test]
    fn classify_grid_is_total_with_knowledge_precedence() {
        let t_os = [None, Some(0.0), Some(0.25), Some(0.5), Some(0.75), Some(1.0)];
        let t_ss = [0.0, 0.5, 1.0];
        for t_o in t_os {
            for t_s in t_ss {
                for verifiable in [true, false] {
                    let kind = rep("p", t_o, t_s, 0.5, verifiable).classify();
                    if verifiable && t_o == Some(t_s) {
                        assert_eq!(kind, RepresentationKind::Knowledge);
                    }
                    if !verifiable || t_o.is_none() {
                        assert_eq!(kind, RepresentationKind::Opinion);
                    }
                }
            }
        }
    }

    fn chain_mind() -> AgentMind {
        // o supported by b1, b1 supported by b2
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.6, 0.2, false)).unwrap();
        m.add_representation(rep("b1", Some(0.8), 0.8, 0.5, true)).unwrap();
        m.add_representation(rep("b2", Some(0.4), 0.6, 0.4, true)).unwrap();
        m.add_support("o", "b1", 1.0, 0, 10).unwrap();
        m.add_support("b1", "b2", 1.0, 0, 10).unwrap();
        m
    }

    // tiny independent journey check for three-node minds: existence of a
    // time-respecting walk inside the window, by exhaustive expansion
    fn brute_reachable(m: &AgentMind, from: usize, to: usize, window: Window) -> bool {
        let g = m.structure();
        let mut best: HashMap<usize, Tick> = HashMap::from([(from, window.start)]);
        let mut frontier = vec![(from, window.start)];
        while let Some((n, at)) = frontier.pop() {
            for next in 0..g.n_entities() {
                if next == n {
                    continue;
                }
                // earliest feasible departure is enough with zero latency
                for t in at..window.end {
                    if g.presence((n, next), t).unwrap_or(false) {
                        if best.get(&next).is_none_or(|&b| t < b) {
                            best.insert(next, t);
                            frontier.push((next, t));
                        }
                        break;
                    }
                }
            }
        }
        best.contains_key(&to)
    }

    #[test]
    fn activate_support_chain() {
        let m = chain_mind();
        let window = Window::new(0, 10);
        for (i, j) in [(0, 1), (0, 2), (1, 0), (2, 0)] {
            assert!(brute_reachable(&m, i, j, window));
        }
        let act = m.activate("o", window).unwrap();
        assert_eq!(act, BTreeSet::from(["o".into(), "b1".into(), "b2".into()]));
    }

    #[test]
    fn activate_isolated_singleton() {
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.5, 0.3, false)).unwrap();
        assert_eq!(m.activate("o", Window::new(0, 5)).unwrap(), BTreeSet::from(["o".into()]));
        assert_eq!(
            m.activate("missing", Window::new(0, 5)),
            Err(Error::UnknownProposition("missing".into()))
        );
    }

    #[test]
    fn activate_excludes_expired_support() {
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.5, 0.3, false)).unwrap();
        m.add_representation(rep("b", Some(0.5), 0.5, 0.6, true)).unwrap();
        m.add_support("o", "b", 1.0, 0, 3).unwrap();
        let late = Window::new(5, 10);
        assert!(!brute_reachable(&m, 0, 1, late));
        assert_eq!(m.activate("o", late).unwrap(), BTreeSet::from(["o".into()]));
        assert_eq!(
            m.activate("o", Window::new(0, 3)).unwrap(),
            BTreeSet::from(["o".into(), "b".into()])
        );
    }

    #[test]
    fn confidence_no_supporters_is_base() {
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.5, 0.4, false)).unwrap();
        assert_eq!(m.confidence_value("o", Window::new(0, 5)).unwrap(), 0.4);
    }

    #[test]
    fn confidence_noisy_or() {
        // two supporters, each contributing w * d = 0.5, base 0
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.5, 0.0, false)).unwrap();
        m.add_representation(rep("b1", Some(0.5), 0.5, 0.5, true)).unwrap();
        m.add_representation(rep("b2", Some(0.5), 0.5, 0.5, true)).unwrap();
        m.add_support("o", "b1", 1.0, 0, 10).unwrap();
        m.add_support("o", "b2", 1.0, 0, 10).unwrap();
        let d = m.confidence_value("o", Window::new(0, 10)).unwrap();
        assert!((d - 0.75).abs() < 1e-12);
    }

    #[test]
    fn confidence_zero_strength_support_is_neutral() {
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.5, 0.3, false)).unwrap();
        m.add_representation(rep("b", Some(0.5), 0.5, 0.0, true)).unwrap();
        m.add_support("o", "b", 1.0, 0, 10).unwrap();
        assert_eq!(m.confidence_value("o", Window::new(0, 10)).unwrap(), 0.3);
    }

    #[test]
    fn confidence_writes_back() {
        let mut m = chain_mind();
        let d = m.confidence("o", Window::new(0, 10)).unwrap();
        assert_eq!(m.representation("o").unwrap().confidence, d);
        assert!(d >= 0.2);
    }

    #[test]
    fn resistance_statistics() {
        let m = chain_mind(); // component confidences {0.2, 0.5, 0.4}
        let w = Window::new(0, 10);
        let mean = m.resistance("o", w, ResistanceStat::Mean).unwrap();
        assert!((mean - (0.2 + 0.5 + 0.4) / 3.0).abs() < 1e-12);
        assert_eq!(m.resistance("o", w, ResistanceStat::Min).unwrap(), 0.2);
        assert_eq!(m.resistance("o", w, ResistanceStat::Max).unwrap(), 0.5);
    }

    #[test]
    fn resistance_singleton() {
        let mut m = AgentMind::new();
        m.add_representation(rep("o", None, 0.5, 0.9, false)).unwrap();
        assert_eq!(m.resistance("o", Window::new(0, 5), ResistanceStat::Mean).unwrap(), 0.9);
    }
}
