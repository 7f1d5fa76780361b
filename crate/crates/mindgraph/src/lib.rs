//! Opinion formation and spread over time-varying networks.
//!
//! Agents hold mind graphs of epistemic representations (knowledge,
//! beliefs, opinions); confidence emerges from journey-reachable support
//! structures; a bounded-confidence influence process with
//! confidence-derived tolerance runs over a time-varying social network.

pub mod dynamics;
pub mod error;
pub mod mind;
pub mod scenario;
pub mod sim;
pub mod tvg;

pub use dynamics::{
    bcm_update, influence_step, sharing, tolerance, Agent, DynamicsParams, Population, SimRng,
};
pub use error::{Error, Result};
pub use mind::{AgentMind, EpistemicRepresentation, RepresentationKind, ResistanceStat};
pub use scenario::{
    emit_results, emit_scenario, parse_scenario, DiagCode, EmitOptions, OutputFormat,
    ScenarioError,
};
pub use sim::{
    cluster_count, polarization, run, run_with_echo, InitialOpinions, MindMode, ScenarioConfig,
    Topology, TrajectoryRecord,
};
pub use tvg::{
    EdgeKey, EntityId, Interaction, Journey, JourneyStep, SnapshotMode, StaticGraph, Tick,
    TimeVaryingGraph, TvgBuilder, Window,
};
