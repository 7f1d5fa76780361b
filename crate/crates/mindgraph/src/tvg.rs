//! Time-varying graphs: interval-stamped interactions between entities,
//! presence queries, footprints, snapshots and journey computation.
//!
//! Edges are undirected, time is nonnegative integer ticks and every
//! interval is half-open `[t1, t2)`. A built graph is immutable; all
//! queries can run concurrently.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type EntityId = usize;
pub type Tick = u64;

/// Undirected edge key, endpoints stored in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    a: EntityId,
    b: EntityId,
}

impl EdgeKey {
    pub fn new(u: EntityId, v: EntityId) -> Result<Self> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(if u < v {
            EdgeKey { a: u, b: v }
        } else {
            EdgeKey { a: v, b: u }
        })
    }

    pub fn endpoints(&self) -> (EntityId, EntityId) {
        (self.a, self.b)
    }
}

/// One labeled interaction `u -- v` over `[t1, t2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    pub u: EntityId,
    pub v: EntityId,
    pub t1: Tick,
    pub t2: Tick,
    pub label: Option<String>,
}

/// Half-open time window `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: Tick,
    pub end: Tick,
}

impl Window {
    pub fn new(start: Tick, end: Tick) -> Self {
        Window { start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn contains(&self, t: Tick) -> bool {
        self.start <= t && t < self.end
    }
}

/// Flattened footprint of a TVG over some window.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StaticGraph {
    pub nodes: BTreeSet<EntityId>,
    pub edges: BTreeSet<EdgeKey>,
}

impl StaticGraph {
    pub fn has_edge(&self, u: EntityId, v: EntityId) -> bool {
        EdgeKey::new(u, v).map(|e| self.edges.contains(&e)).unwrap_or(false)
    }

    /// True when every node can reach every other over static edges.
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.nodes.iter().next() else {
            return true;
        };
        let mut adj: HashMap<EntityId, Vec<EntityId>> = HashMap::new();
        for e in &self.edges {
            let (a, b) = e.endpoints();
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            for &m in adj.get(&n).into_iter().flatten() {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen.len() == self.nodes.len()
    }
}

/// One step of a journey: the edge traversed `from -> to`, departing at `departure`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JourneyStep {
    pub from: EntityId,
    pub to: EntityId,
    pub departure: Tick,
}

/// A time-respecting path. An empty step list is the trivial journey
/// from a node to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Journey {
    pub steps: Vec<JourneyStep>,
    pub arrival: Tick,
}

impl Journey {
    pub fn trivial(at: Tick) -> Self {
        Journey { steps: Vec::new(), arrival: at }
    }

    /// Checks every journey invariant against `g`: consecutive steps chain,
    /// each edge is present at its departure and departures respect latency.
    pub fn validate(&self, g: &TimeVaryingGraph) -> Result<()> {
        let mut earliest = None;
        for (i, step) in self.steps.iter().enumerate() {
            let edge = EdgeKey::new(step.from, step.to)?;
            if i > 0 && self.steps[i - 1].to != step.from {
                return Err(Error::InvalidArgument(format!(
                    "journey step {i} does not chain: {} != {}",
                    self.steps[i - 1].to,
                    step.from
                )));
            }
            if !g.presence((step.from, step.to), step.departure)? {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) absent at departure {}",
                    step.from, step.to, step.departure
                )));
            }
            if let Some(min) = earliest {
                if step.departure < min {
                    return Err(Error::InvalidArgument(format!(
                        "departure {} before earliest allowed {min}",
                        step.departure
                    )));
                }
            }
            earliest = Some(step.departure + g.latency(edge, step.departure));
        }
        if let Some(min) = earliest {
            if self.arrival != min {
                return Err(Error::InvalidArgument(format!(
                    "arrival {} does not match final step ({min})",
                    self.arrival
                )));
            }
        }
        Ok(())
    }
}

/// Snapshot extraction mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotMode {
    /// Cut at `t_a, t_a + step, ...`.
    Uniform { step: Tick },
    /// Cut at the graph's characteristic dates, so every snapshot is
    /// topology-constant.
    Characteristic,
}

/// Appearance/disappearance dates of an edge after interval normalization.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharacteristicDates {
    pub appearances: Vec<Tick>,
    pub disappearances: Vec<Tick>,
    pub all: Vec<Tick>,
}

#[derive(Debug, Clone, Default)]
struct LatencyMap {
    per_edge: HashMap<EdgeKey, Tick>,
    timed: HashMap<(EdgeKey, Tick), Tick>,
}

impl LatencyMap {
    fn get(&self, e: EdgeKey, t: Tick) -> Tick {
        self.timed
            .get(&(e, t))
            .or_else(|| self.per_edge.get(&e))
            .copied()
            .unwrap_or(0)
    }
}

/// Single-writer builder; `build` freezes the graph and computes the
/// per-edge interval index.
#[derive(Debug, Clone)]
pub struct TvgBuilder {
    n_entities: usize,
    lifetime: Window,
    interactions: Vec<Interaction>,
    latency: LatencyMap,
}

impl TvgBuilder {
    pub fn new(n_entities: usize, lifetime: Window) -> Self {
        TvgBuilder {
            n_entities,
            lifetime,
            interactions: Vec::new(),
            latency: LatencyMap::default(),
        }
    }

    fn check_entity(&self, id: EntityId) -> Result<()> {
        if id >= self.n_entities {
            return Err(Error::UnknownEntity(id));
        }
        Ok(())
    }

    pub fn add_interaction(&mut self, u: EntityId, v: EntityId, t1: Tick, t2: Tick) -> Result<()> {
        self.add_labeled(u, v, t1, t2, None)
    }

    pub fn add_labeled(
        &mut self,
        u: EntityId,
        v: EntityId,
        t1: Tick,
        t2: Tick,
        label: Option<String>,
    ) -> Result<()> {
        self.check_entity(u)?;
        self.check_entity(v)?;
        EdgeKey::new(u, v)?;
        if t1 >= t2 {
            return Err(Error::EmptyInterval { t1, t2 });
        }
        if t2 <= self.lifetime.start || t1 >= self.lifetime.end {
            return Err(Error::OutsideLifetime {
                t1,
                t2,
                start: self.lifetime.start,
                end: self.lifetime.end,
            });
        }
        self.interactions.push(Interaction { u, v, t1, t2, label });
        Ok(())
    }

    pub fn set_edge_latency(&mut self, u: EntityId, v: EntityId, latency: Tick) -> Result<()> {
        self.check_entity(u)?;
        self.check_entity(v)?;
        self.latency.per_edge.insert(EdgeKey::new(u, v)?, latency);
        Ok(())
    }

    pub fn set_latency_at(
        &mut self,
        u: EntityId,
        v: EntityId,
        t: Tick,
        latency: Tick,
    ) -> Result<()> {
        self.check_entity(u)?;
        self.check_entity(v)?;
        self.latency.timed.insert((EdgeKey::new(u, v)?, t), latency);
        Ok(())
    }

    pub fn build(self) -> TimeVaryingGraph {
        let mut raw: BTreeMap<EdgeKey, Vec<(Tick, Tick)>> = BTreeMap::new();
        for i in &self.interactions {
            let key = EdgeKey::new(i.u, i.v).expect("validated on insert");
            raw.entry(key).or_default().push((i.t1, i.t2));
        }
        let index: BTreeMap<EdgeKey, Vec<(Tick, Tick)>> = raw
            .into_iter()
            .map(|(k, ivals)| (k, normalize_intervals(ivals)))
            .collect();
        let mut adjacency: HashMap<EntityId, Vec<EntityId>> = HashMap::new();
        for key in index.keys() {
            let (a, b) = key.endpoints();
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
        TimeVaryingGraph {
            n_entities: self.n_entities,
            lifetime: self.lifetime,
            interactions: self.interactions,
            index,
            adjacency,
            latency: self.latency,
        }
    }
}

/// Merge possibly-overlapping half-open intervals into a sorted disjoint
/// multi-interval. Touching intervals are merged as well.
fn normalize_intervals(mut ivals: Vec<(Tick, Tick)>) -> Vec<(Tick, Tick)> {
    ivals.sort_unstable();
    let mut out: Vec<(Tick, Tick)> = Vec::with_capacity(ivals.len());
    for (s, e) in ivals {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

/// Immutable time-varying graph over entities `0..n_entities`.
#[derive(Debug, Clone)]
pub struct TimeVaryingGraph {
    n_entities: usize,
    lifetime: Window,
    interactions: Vec<Interaction>,
    index: BTreeMap<EdgeKey, Vec<(Tick, Tick)>>,
    adjacency: HashMap<EntityId, Vec<EntityId>>,
    latency: LatencyMap,
}

impl TimeVaryingGraph {
    pub fn n_entities(&self) -> usize {
        self.n_entities
    }

    pub fn lifetime(&self) -> Window {
        self.lifetime
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    pub fn latency(&self, e: EdgeKey, t: Tick) -> Tick {
        self.latency.get(e, t)
    }

    fn check_entity(&self, id: EntityId) -> Result<()> {
        if id >= self.n_entities {
            return Err(Error::UnknownEntity(id));
        }
        Ok(())
    }

    /// Presence function: true iff some interaction on `e` contains `t`.
    pub fn presence(&self, e: (EntityId, EntityId), t: Tick) -> Result<bool> {
        self.check_entity(e.0)?;
        self.check_entity(e.1)?;
        if !self.lifetime.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                start: self.lifetime.start,
                end: self.lifetime.end,
            });
        }
        let key = EdgeKey::new(e.0, e.1)?;
        Ok(self.interval_at(key, t).is_some())
    }

    /// The normalized interval containing `t`, if any.
    fn interval_at(&self, key: EdgeKey, t: Tick) -> Option<(Tick, Tick)> {
        let ivals = self.index.get(&key)?;
        // intervals are sorted and disjoint
        let pos = ivals.partition_point(|&(_, e)| e <= t);
        ivals.get(pos).copied().filter(|&(s, _)| s <= t)
    }

    /// Appearance, disappearance and merged characteristic dates of an edge.
    /// An edge that is never present yields empty lists.
    pub fn characteristic_dates(&self, e: (EntityId, EntityId)) -> Result<CharacteristicDates> {
        self.check_entity(e.0)?;
        self.check_entity(e.1)?;
        let key = EdgeKey::new(e.0, e.1)?;
        let mut out = CharacteristicDates::default();
        if let Some(ivals) = self.index.get(&key) {
            for &(s, t) in ivals {
                out.appearances.push(s);
                out.disappearances.push(t);
            }
            out.all = out
                .appearances
                .iter()
                .chain(out.disappearances.iter())
                .copied()
                .collect();
            out.all.sort_unstable();
        }
        Ok(out)
    }

    /// Footprint over `window`: an edge exists iff at least one interaction
    /// on it intersects the window.
    pub fn underlying_graph(&self, window: Window) -> Result<StaticGraph> {
        if window.start < self.lifetime.start || window.end > self.lifetime.end {
            return Err(Error::WindowOutOfRange {
                start: window.start,
                end: window.end,
                lt_start: self.lifetime.start,
                lt_end: self.lifetime.end,
            });
        }
        let mut g = StaticGraph {
            nodes: (0..self.n_entities).collect(),
            edges: BTreeSet::new(),
        };
        if window.is_empty() {
            return Ok(g);
        }
        for (key, ivals) in &self.index {
            if ivals.iter().any(|&(s, e)| s < window.end && e > window.start) {
                g.edges.insert(*key);
            }
        }
        Ok(g)
    }

    /// True iff `e` is present throughout the whole (nonempty) interval.
    fn present_throughout(&self, key: EdgeKey, from: Tick, to: Tick) -> bool {
        if from >= to {
            return false;
        }
        self.interval_at(key, from).is_some_and(|(_, e)| e >= to)
    }

    /// Sequence of static snapshots; each snapshot holds the edges present
    /// throughout `[t_i, t_{i+1})` (the tail snapshot runs to the lifetime end).
    pub fn snapshot_sequence(&self, mode: SnapshotMode) -> Result<Vec<(Tick, StaticGraph)>> {
        if self.n_entities == 0 {
            return Ok(Vec::new());
        }
        let cuts: Vec<Tick> = match mode {
            SnapshotMode::Uniform { step } => {
                if step == 0 {
                    return Err(Error::InvalidArgument("uniform snapshot step must be > 0".into()));
                }
                let mut cuts = Vec::new();
                let mut t = self.lifetime.start;
                while t < self.lifetime.end {
                    cuts.push(t);
                    t += step;
                }
                cuts
            }
            SnapshotMode::Characteristic => {
                let mut dates: BTreeSet<Tick> = BTreeSet::new();
                for ivals in self.index.values() {
                    for &(s, e) in ivals {
                        dates.insert(s);
                        dates.insert(e);
                    }
                }
                dates.into_iter().collect()
            }
        };
        let nodes: BTreeSet<EntityId> = (0..self.n_entities).collect();
        let mut out = Vec::with_capacity(cuts.len());
        for (i, &t) in cuts.iter().enumerate() {
            let next = cuts.get(i + 1).copied().unwrap_or(self.lifetime.end);
            let next = next.max(t);
            let mut snap = StaticGraph { nodes: nodes.clone(), edges: BTreeSet::new() };
            for key in self.index.keys() {
                if self.present_throughout(*key, t, next) {
                    snap.edges.insert(*key);
                }
            }
            out.push((t, snap));
        }
        Ok(out)
    }

    /// Candidate departures within one presence interval, starting no
    /// earlier than `ready`. Besides the earliest feasible departure this
    /// includes ticks with a timed latency override, so a time-varying
    /// latency cannot hide a better departure.
    fn departure_candidates(&self, key: EdgeKey, ival: (Tick, Tick), ready: Tick) -> Vec<Tick> {
        let (s, e) = ival;
        if e <= ready {
            return Vec::new();
        }
        let first = s.max(ready);
        let mut cands = vec![first];
        for (&(k, t), _) in self.latency.timed.iter() {
            if k == key && t >= first && t < e {
                cands.push(t);
                if t + 1 < e {
                    cands.push(t + 1);
                }
            }
        }
        cands
    }

    /// Earliest-arrival journey from `src` to `dst` departing no earlier
    /// than `t_start`. Returns the trivial journey when `src == dst`.
    pub fn foremost_journey(
        &self,
        src: EntityId,
        dst: EntityId,
        t_start: Tick,
    ) -> Result<Option<Journey>> {
        self.check_entity(src)?;
        self.check_entity(dst)?;
        if src == dst {
            return Ok(Some(Journey::trivial(t_start)));
        }
        let mut best: HashMap<EntityId, Tick> = HashMap::from([(src, t_start)]);
        let mut pred: HashMap<EntityId, JourneyStep> = HashMap::new();
        let mut heap = BinaryHeap::from([(Reverse(t_start), src)]);
        while let Some((Reverse(at), u)) = heap.pop() {
            if best.get(&u).copied() != Some(at) {
                continue;
            }
            if u == dst {
                break;
            }
            for &v in self.adjacency.get(&u).into_iter().flatten() {
                let key = EdgeKey::new(u, v).expect("index holds no self-loops");
                let Some(ivals) = self.index.get(&key) else { continue };
                for &ival in ivals {
                    for dep in self.departure_candidates(key, ival, at) {
                        if !self.lifetime.contains(dep) {
                            continue;
                        }
                        let arr = dep + self.latency.get(key, dep);
                        if best.get(&v).is_none_or(|&b| arr < b) {
                            best.insert(v, arr);
                            pred.insert(v, JourneyStep { from: u, to: v, departure: dep });
                            heap.push((Reverse(arr), v));
                        }
                    }
                }
            }
        }
        let Some(&arrival) = best.get(&dst) else {
            return Ok(None);
        };
        let mut steps = Vec::new();
        let mut cur = dst;
        while cur != src {
            let step = pred[&cur];
            steps.push(step);
            cur = step.from;
        }
        steps.reverse();
        Ok(Some(Journey { steps, arrival }))
    }

    /// Restriction of the graph to `window`: intervals clipped, latency kept.
    pub fn clipped(&self, window: Window) -> TimeVaryingGraph {
        let mut b = TvgBuilder::new(self.n_entities, window);
        for i in &self.interactions {
            let s = i.t1.max(window.start);
            let e = i.t2.min(window.end);
            if s < e {
                b.add_labeled(i.u, i.v, s, e, i.label.clone()).expect("clipped interval is valid");
            }
        }
        b.latency = self.latency.clone();
        b.build()
    }

    fn reaches_within(&self, from: EntityId, to: EntityId, window: Window) -> bool {
        match self.foremost_journey(from, to, window.start) {
            Ok(Some(j)) => j.steps.is_empty() || j.arrival < window.end,
            _ => false,
        }
    }

    /// Maximal node set containing `seeds` whose members are journey-reachable
    /// from some seed within `window` and admit a journey back to some seed.
    pub fn temporal_component(
        &self,
        seeds: &BTreeSet<EntityId>,
        window: Window,
    ) -> Result<BTreeSet<EntityId>> {
        if seeds.is_empty() {
            return Err(Error::EmptySeeds);
        }
        for &s in seeds {
            self.check_entity(s)?;
        }
        let g = self.clipped(window);
        let mut component: BTreeSet<EntityId> = seeds.clone();
        for v in 0..self.n_entities {
            if component.contains(&v) {
                continue;
            }
            let forward = seeds.iter().any(|&s| g.reaches_within(s, v, window));
            if forward && seeds.iter().any(|&s| g.reaches_within(v, s, window)) {
                component.insert(v);
            }
        }
        Ok(component)
    }

    /// Line-oriented text form: a `tvg` header then one interaction per
    /// line, sorted by `(t1, u, v)`.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<&Interaction> = self.interactions.iter().collect();
        lines.sort_by_key(|i| {
            let (a, b) = if i.u < i.v { (i.u, i.v) } else { (i.v, i.u) };
            (i.t1, a, b, i.t2)
        });
        let mut out = format!(
            "tvg {} {} {}\n",
            self.n_entities, self.lifetime.start, self.lifetime.end
        );
        for i in lines {
            let (a, b) = if i.u < i.v { (i.u, i.v) } else { (i.v, i.u) };
            let _ = write!(out, "{} {} {} {}", a, b, i.t1, i.t2);
            if let Some(label) = &i.label {
                let _ = write!(out, " {label}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the `to_text` format. Errors name the offending line.
    pub fn from_text(text: &str) -> Result<TimeVaryingGraph> {
        let mut builder: Option<TvgBuilder> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: String| Error::InvalidArgument(format!("line {}: {msg}", lineno + 1));
            match builder {
                None => {
                    if fields.len() != 4 || fields[0] != "tvg" {
                        return Err(bad("expected header `tvg <n_entities> <t_a> <t_b>`".into()));
                    }
                    let n = fields[1].parse().map_err(|_| bad("bad entity count".into()))?;
                    let ta = fields[2].parse().map_err(|_| bad("bad lifetime start".into()))?;
                    let tb = fields[3].parse().map_err(|_| bad("bad lifetime end".into()))?;
                    builder = Some(TvgBuilder::new(n, Window::new(ta, tb)));
                }
                Some(ref mut b) => {
                    if fields.len() < 4 || fields.len() > 5 {
                        return Err(bad("expected `u v t1 t2 [label]`".into()));
                    }
                    let u = fields[0].parse().map_err(|_| bad("bad entity id".into()))?;
                    let v = fields[1].parse().map_err(|_| bad("bad entity id".into()))?;
                    let t1 = fields[2].parse().map_err(|_| bad("bad t1".into()))?;
                    let t2 = fields[3].parse().map_err(|_| bad("bad t2".into()))?;
                    let label = fields.get(4).map(|s| s.to_string());
                    b.add_labeled(u, v, t1, t2, label)
                        .map_err(|e| bad(e.to_string()))?;
                }
            }
        }
        builder
            .map(TvgBuilder::build)
            .ok_or_else(|| Error::InvalidArgument("missing tvg header".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, lifetime: (Tick, Tick), edges: &[(usize, usize, Tick, Tick)]) -> TimeVaryingGraph {
        let mut b = TvgBuilder::new(n, Window::new(lifetime.0, lifetime.1));
        for &(u, v, t1, t2) in edges {
            b.add_interaction(u, v, t1, t2).unwrap();
        }
        b.build()
    }

    #[test]
    fn presence_half_open() {
        let g = graph(3, (0, 10), &[(0, 1, 2, 5)]);
        assert!(g.presence((0, 1), 2).unwrap());
        assert!(g.presence((0, 1), 4).unwrap());
        assert!(!g.presence((0, 1), 5).unwrap());
        assert!(!g.presence((0, 2), 3).unwrap());
    }

    #[test]
    fn presence_errors() {
        let g = graph(2, (0, 5), &[(0, 1, 0, 5)]);
        assert_eq!(g.presence((0, 7), 1), Err(Error::UnknownEntity(7)));
        assert!(matches!(g.presence((0, 1), 5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn builder_rejects_bad_interactions() {
        let mut b = TvgBuilder::new(2, Window::new(0, 10));
        assert_eq!(b.add_interaction(0, 0, 1, 2), Err(Error::SelfLoop(0)));
        assert_eq!(b.add_interaction(0, 1, 3, 3), Err(Error::EmptyInterval { t1: 3, t2: 3 }));
        assert!(matches!(b.add_interaction(0, 1, 10, 12), Err(Error::OutsideLifetime { .. })));
    }

    #[test]
    fn characteristic_dates_merges_overlaps() {
        let g = graph(2, (0, 10), &[(0, 1, 1, 3), (0, 1, 2, 5)]);
        let cd = g.characteristic_dates((0, 1)).unwrap();
        assert_eq!(cd.appearances, vec![1]);
        assert_eq!(cd.disappearances, vec![5]);
        assert_eq!(cd.all, vec![1, 5]);
    }

    #[test]
    fn characteristic_dates_disjoint_and_empty() {
        let g = graph(3, (0, 10), &[(0, 1, 0, 1), (0, 1, 4, 6)]);
        let cd = g.characteristic_dates((0, 1)).unwrap();
        assert_eq!(cd.appearances, vec![0, 4]);
        assert_eq!(cd.disappearances, vec![1, 6]);
        assert_eq!(cd.all, vec![0, 1, 4, 6]);
        let none = g.characteristic_dates((0, 2)).unwrap();
        assert_eq!(none, CharacteristicDates::default());
    }

    #[test]
    fn touching_intervals_merge() {
        let g = graph(2, (0, 10), &[(0, 1, 0, 2), (0, 1, 2, 4)]);
        let cd = g.characteristic_dates((0, 1)).unwrap();
        assert_eq!(cd.all, vec![0, 4]);
    }

    #[test]
    fn underlying_graph_windows() {
        let g = graph(3, (0, 3), &[(0, 1, 0, 1), (1, 2, 2, 3)]);
        let full = g.underlying_graph(Window::new(0, 3)).unwrap();
        assert!(full.has_edge(0, 1) && full.has_edge(1, 2));
        let early = g.underlying_graph(Window::new(0, 1)).unwrap();
        assert!(early.has_edge(0, 1) && !early.has_edge(1, 2));
        let empty = g.underlying_graph(Window::new(1, 1)).unwrap();
        assert!(empty.edges.is_empty());
    }

    #[test]
    fn snapshots_characteristic() {
        let g = graph(2, (0, 3), &[(0, 1, 0, 2)]);
        let seq = g.snapshot_sequence(SnapshotMode::Characteristic).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq[0].0, 0);
        assert!(seq[0].1.has_edge(0, 1));
        assert_eq!(seq[1].0, 2);
        assert!(seq[1].1.edges.is_empty());
    }

    #[test]
    fn snapshots_uniform() {
        let g = graph(2, (0, 3), &[(0, 1, 0, 2)]);
        let seq = g.snapshot_sequence(SnapshotMode::Uniform { step: 1 }).unwrap();
        let edges: Vec<bool> = seq.iter().map(|(_, s)| s.has_edge(0, 1)).collect();
        assert_eq!(seq.iter().map(|s| s.0).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(edges, vec![true, true, false]);
    }

    #[test]
    fn snapshots_empty_graph() {
        let g = graph(0, (0, 3), &[]);
        assert!(g.snapshot_sequence(SnapshotMode::Characteristic).unwrap().is_empty());
        assert!(g.snapshot_sequence(SnapshotMode::Uniform { step: 1 }).unwrap().is_empty());
    }

    #[test]
    fn foremost_journey_two_hops() {
        let g = graph(3, (0, 5), &[(0, 1, 0, 1), (1, 2, 2, 3)]);
        let j = g.foremost_journey(0, 2, 0).unwrap().unwrap();
        assert_eq!(j.arrival, 2);
        assert_eq!(j.steps.len(), 2);
        assert_eq!((j.steps[0].from, j.steps[0].to, j.steps[0].departure), (0, 1, 0));
        assert_eq!((j.steps[1].from, j.steps[1].to, j.steps[1].departure), (1, 2, 2));
        j.validate(&g).unwrap();
    }

    #[test]
    fn footprint_connected_but_not_over_time() {
        // edge to the destination expires before the source can get there
        let g = graph(3, (0, 5), &[(1, 2, 0, 1), (0, 1, 2, 3)]);
        assert!(g.underlying_graph(g.lifetime()).unwrap().is_connected());
        assert!(g.foremost_journey(0, 2, 0).unwrap().is_none());
    }

    #[test]
    fn foremost_journey_reflexive() {
        let g = graph(2, (0, 5), &[]);
        let j = g.foremost_journey(0, 0, 3).unwrap().unwrap();
        assert!(j.steps.is_empty());
        assert_eq!(j.arrival, 3);
    }

    #[test]
    fn foremost_journey_honors_latency() {
        let mut b = TvgBuilder::new(3, Window::new(0, 10));
        b.add_interaction(0, 1, 0, 10).unwrap();
        b.add_interaction(1, 2, 0, 10).unwrap();
        b.set_edge_latency(0, 1, 3).unwrap();
        let g = b.build();
        let j = g.foremost_journey(0, 2, 0).unwrap().unwrap();
        assert_eq!(j.arrival, 3);
        assert_eq!(j.steps[1].departure, 3);
        j.validate(&g).unwrap();
    }

    #[test]
    fn temporal_component_round_trip() {
        let g = graph(2, (0, 2), &[(0, 1, 0, 2)]);
        let comp = g.temporal_component(&BTreeSet::from([0]), Window::new(0, 2)).unwrap();
        assert_eq!(comp, BTreeSet::from([0, 1]));
    }

    #[test]
    fn temporal_component_excludes_disconnected() {
        let g = graph(3, (0, 2), &[(0, 1, 0, 2)]);
        let comp = g.temporal_component(&BTreeSet::from([0]), Window::new(0, 2)).unwrap();
        assert!(!comp.contains(&2));
    }

    #[test]
    fn temporal_component_singleton() {
        let g = graph(2, (0, 2), &[]);
        let comp = g.temporal_component(&BTreeSet::from([0]), Window::new(0, 2)).unwrap();
        assert_eq!(comp, BTreeSet::from([0]));
        assert_eq!(g.temporal_component(&BTreeSet::new(), Window::new(0, 2)), Err(Error::EmptySeeds));
    }

    #[test]
    fn text_round_trip() {
        let mut b = TvgBuilder::new(3, Window::new(0, 5));
        b.add_labeled(2, 1, 1, 3, Some("ally".into())).unwrap();
        b.add_interaction(0, 1, 0, 2).unwrap();
        let g = b.build();
        let text = g.to_text();
        assert!(text.starts_with("tvg 3 0 5\n0 1 0 2\n1 2 1 3 ally\n"));
        let g2 = TimeVaryingGraph::from_text(&text).unwrap();
        assert_eq!(g2.to_text(), text);
    }

    #[test]
    fn from_text_reports_line() {
        let err = TimeVaryingGraph::from_text("tvg 2 0 5\n0 0 1 2\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
