//! Scenario file parsing and result emission.
//!
//! The scenario format is flat `key = value` lines plus sectioned `rep`
//! and `sup` records:
//!
//! ```text
//! n_agents = 100
//! horizon = 500
//! topology = complete            # or: ring 2 | random 0.1 7 | tvg net.tvg
//! initial_opinions = uniform 1   # or: explicit 0.4 0.6 ...
//! minds = scalar                 # or: explicit
//! mu = 0.5
//! eps_min = 0.0
//! eps_max = 0.5
//! rep 0 p ? 0.4 0.0 false
//! sup 0 b p 0.8 0 100
//! ```
//!
//! Parsing is strict: unknown keys are rejected and every diagnostic
//! carries a line number, field name and stable code.

use std::fmt;
use std::io::Write;

use crate::dynamics::DynamicsParams;
use crate::mind::ResistanceStat;
use crate::sim::{
    InitialOpinions, MindMode, RepRecord, ScenarioConfig, Sample, SupRecord, Topology,
    TrajectoryRecord,
};

/// Stable machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagCode {
    MissingField,
    OutOfRange,
    Malformed,
    UnknownKey,
    DuplicateKey,
    BadMindRecord,
    BadTvgRecord,
    WriteFailed,
}

impl DiagCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiagCode::MissingField => "E_MISSING_FIELD",
            DiagCode::OutOfRange => "E_OUT_OF_RANGE",
            DiagCode::Malformed => "E_MALFORMED",
            DiagCode::UnknownKey => "E_UNKNOWN_KEY",
            DiagCode::DuplicateKey => "E_DUPLICATE_KEY",
            DiagCode::BadMindRecord => "E_BAD_MIND_RECORD",
            DiagCode::BadTvgRecord => "E_BAD_TVG_RECORD",
            DiagCode::WriteFailed => "E_WRITE_FAILED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub code: DiagCode,
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
    /// Set when output was already partially written.
    pub partial_output: bool,
}

impl ScenarioError {
    fn new(code: DiagCode, message: impl Into<String>) -> Self {
        ScenarioError {
            code,
            line: None,
            field: None,
            message: message.into(),
            partial_output: false,
        }
    }

    fn at(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    fn at_opt(mut self, line: Option<usize>) -> Self {
        self.line = line;
        self
    }

    fn field(mut self, field: impl Into<String>) -> Self {
        self.field = Some(field.into());
        self
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code.as_str())?;
        if let Some(line) = self.line {
            write!(f, " line {line}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ScenarioError {}

pub type ScenarioResult<T> = Result<T, ScenarioError>;

fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        n_agents: 0,
        horizon: 0,
        topology: Topology::Complete,
        initial_opinions: InitialOpinions::Uniform { seed: 0 },
        minds: MindMode::Scalar,
        reps: Vec::new(),
        sups: Vec::new(),
        params: DynamicsParams::default(),
        seed: 0,
        metrics_every: 1,
        proposition: "p".into(),
        cluster_delta: 0.01,
        convergence_window: 10,
        convergence_tol: 1e-6,
        record_sharing: false,
    }
}

struct LineCtx {
    line: Option<usize>,
    key: String,
}

impl LineCtx {
    fn parse<T: std::str::FromStr>(&self, raw: &str) -> ScenarioResult<T> {
        raw.parse().map_err(|_| {
            ScenarioError::new(DiagCode::Malformed, format!("cannot parse `{raw}`"))
                .at_opt(self.line)
                .field(&self.key)
        })
    }

    fn range(&self, ok: bool, bound: &str) -> ScenarioResult<()> {
        if ok {
            Ok(())
        } else {
            Err(
                ScenarioError::new(DiagCode::OutOfRange, format!("value must be in {bound}"))
                    .at_opt(self.line)
                    .field(&self.key),
            )
        }
    }
}

fn set_key(
    config: &mut ScenarioConfig,
    key: &str,
    value: &str,
    line: Option<usize>,
) -> ScenarioResult<()> {
    let ctx = LineCtx { line, key: key.to_string() };
    match key {
        "n_agents" => {
            config.n_agents = ctx.parse(value)?;
            ctx.range(config.n_agents > 0, "[1, ...)")?;
        }
        "horizon" => config.horizon = ctx.parse(value)?,
        "topology" => config.topology = parse_topology(value, &ctx)?,
        "initial_opinions" => config.initial_opinions = parse_initial(value, &ctx)?,
        "minds" => {
            config.minds = match value {
                "scalar" => MindMode::Scalar,
                "explicit" => MindMode::Explicit,
                other => {
                    return Err(ScenarioError::new(
                        DiagCode::Malformed,
                        format!("expected `scalar` or `explicit`, got `{other}`"),
                    )
                    .at_opt(line)
                    .field(key))
                }
            };
        }
        "mu" => {
            config.params.mu = ctx.parse(value)?;
            ctx.range(config.params.mu > 0.0 && config.params.mu <= 0.5, "(0, 0.5]")?;
        }
        "eps_min" => {
            config.params.eps_min = ctx.parse(value)?;
            ctx.range((0.0..=1.0).contains(&config.params.eps_min), "[0, 1]")?;
        }
        "eps_max" => {
            config.params.eps_max = ctx.parse(value)?;
            ctx.range((0.0..=1.0).contains(&config.params.eps_max), "[0, 1]")?;
        }
        "delta_share" => {
            config.params.delta_share = ctx.parse(value)?;
            ctx.range(
                config.params.delta_share > 0.0 && config.params.delta_share < 1.0,
                "(0, 1)",
            )?;
        }
        "confidence_feedback" => {
            config.params.confidence_feedback = ctx.parse(value)?;
        }
        "resistance" => {
            config.params.resistance_stat = match value {
                "mean" => ResistanceStat::Mean,
                "min" => ResistanceStat::Min,
                "max" => ResistanceStat::Max,
                other => {
                    return Err(ScenarioError::new(
                        DiagCode::Malformed,
                        format!("expected mean|min|max, got `{other}`"),
                    )
                    .at_opt(line)
                    .field(key))
                }
            };
        }
        "seed" => config.seed = ctx.parse(value)?,
        "metrics_every" => {
            config.metrics_every = ctx.parse(value)?;
            ctx.range(config.metrics_every > 0, "[1, ...)")?;
        }
        "proposition" => config.proposition = value.to_string(),
        "cluster_delta" => {
            config.cluster_delta = ctx.parse(value)?;
            ctx.range(config.cluster_delta > 0.0, "(0, ...)")?;
        }
        "convergence_window" => config.convergence_window = ctx.parse(value)?,
        "convergence_tol" => {
            config.convergence_tol = ctx.parse(value)?;
            ctx.range(config.convergence_tol > 0.0, "(0, ...)")?;
        }
        "record_sharing" => config.record_sharing = ctx.parse(value)?,
        other => {
            return Err(ScenarioError::new(DiagCode::UnknownKey, "unknown key")
                .at_opt(line)
                .field(other))
        }
    }
    Ok(())
}

/// Applies a `key=value` override on top of a parsed config.
pub fn apply_override(config: &mut ScenarioConfig, key: &str, value: &str) -> ScenarioResult<()> {
    set_key(config, key.trim(), value.trim(), None)
}

/// Parses a scenario file into a validated config.
pub fn parse_scenario(text: &str) -> ScenarioResult<ScenarioConfig> {
    let mut config = defaults();
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "rep" => {
                config.reps.push(parse_rep(&fields, lineno)?);
                continue;
            }
            "sup" => {
                config.sups.push(parse_sup(&fields, lineno)?);
                continue;
            }
            _ => {}
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ScenarioError::new(
                DiagCode::Malformed,
                "expected `key = value`, `rep ...` or `sup ...`",
            )
            .at(lineno));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if seen.contains(&key) {
            return Err(ScenarioError::new(DiagCode::DuplicateKey, "key given twice")
                .at(lineno)
                .field(&key));
        }
        seen.push(key.clone());
        set_key(&mut config, &key, &value, Some(lineno))?;
    }

    let missing = |name: &str| {
        Err(ScenarioError::new(DiagCode::MissingField, "required field missing").field(name))
    };
    if !seen.iter().any(|k| k == "n_agents") {
        return missing("n_agents");
    }
    if !seen.iter().any(|k| k == "horizon") {
        return missing("horizon");
    }
    if !seen.iter().any(|k| k == "topology") {
        return missing("topology");
    }
    if !seen.iter().any(|k| k == "initial_opinions") && config.minds == MindMode::Scalar {
        return missing("initial_opinions");
    }
    if config.params.eps_min > config.params.eps_max {
        return Err(ScenarioError::new(
            DiagCode::OutOfRange,
            format!(
                "eps_min {} exceeds eps_max {}",
                config.params.eps_min, config.params.eps_max
            ),
        )
        .field("eps_min"));
    }
    config.validate().map_err(|e| {
        ScenarioError::new(DiagCode::OutOfRange, e.to_string())
    })?;
    Ok(config)
}

fn parse_topology(value: &str, ctx: &LineCtx) -> ScenarioResult<Topology> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    match parts.as_slice() {
        ["complete"] => Ok(Topology::Complete),
        ["ring", k] => Ok(Topology::Ring { k: ctx.parse(k)? }),
        ["random", p, seed] => Ok(Topology::Random {
            p: ctx.parse(p)?,
            seed: ctx.parse(seed)?,
        }),
        ["tvg", path] => Ok(Topology::ExplicitTvg { path: path.to_string() }),
        _ => Err(ScenarioError::new(
            DiagCode::Malformed,
            format!("expected complete | ring <k> | random <p> <seed> | tvg <path>, got `{value}`"),
        )
        .at_opt(ctx.line)
        .field(&ctx.key)),
    }
}

fn parse_initial(value: &str, ctx: &LineCtx) -> ScenarioResult<InitialOpinions> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    match parts.as_slice() {
        ["uniform", seed] => Ok(InitialOpinions::Uniform { seed: ctx.parse(seed)? }),
        ["explicit", rest @ ..] if !rest.is_empty() => {
            let xs = rest
                .iter()
                .map(|x| ctx.parse::<f64>(x))
                .collect::<ScenarioResult<Vec<f64>>>()?;
            Ok(InitialOpinions::Explicit(xs))
        }
        _ => Err(ScenarioError::new(
            DiagCode::Malformed,
            format!("expected uniform <seed> | explicit <x0> <x1> ..., got `{value}`"),
        )
        .at_opt(ctx.line)
        .field(&ctx.key)),
    }
}

fn parse_rep(fields: &[&str], lineno: usize) -> ScenarioResult<RepRecord> {
    let bad = |msg: String| {
        ScenarioError::new(DiagCode::BadMindRecord, msg)
            .at(lineno)
            .field("rep")
    };
    if fields.len() != 7 {
        return Err(bad("expected `rep <agent> <prop> <T_o|?> <T_s> <d_c> <verifiable>`".into()));
    }
    let ctx = LineCtx { line: Some(lineno), key: "rep".into() };
    let objective_truth = if fields[3] == "?" {
        None
    } else {
        Some(ctx.parse::<f64>(fields[3])?)
    };
    Ok(RepRecord {
        agent: ctx.parse(fields[1])?,
        prop: fields[2].to_string(),
        objective_truth,
        subjective_truth: ctx.parse(fields[4])?,
        confidence: ctx.parse(fields[5])?,
        verifiable: ctx.parse(fields[6])?,
    })
}

fn parse_sup(fields: &[&str], lineno: usize) -> ScenarioResult<SupRecord> {
    if fields.len() != 7 {
        return Err(ScenarioError::new(
            DiagCode::BadMindRecord,
            "expected `sup <agent> <prop_u> <prop_v> <w> <t1> <t2>`",
        )
        .at(lineno)
        .field("sup"));
    }
    let ctx = LineCtx { line: Some(lineno), key: "sup".into() };
    Ok(SupRecord {
        agent: ctx.parse(fields[1])?,
        prop_u: fields[2].to_string(),
        prop_v: fields[3].to_string(),
        weight: ctx.parse(fields[4])?,
        t1: ctx.parse(fields[5])?,
        t2: ctx.parse(fields[6])?,
    })
}

/// Canonical text form; `parse_scenario(emit_scenario(c)) == c`.
pub fn emit_scenario(config: &ScenarioConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("n_agents = {}\n", config.n_agents));
    out.push_str(&format!("horizon = {}\n", config.horizon));
    let topology = match &config.topology {
        Topology::Complete => "complete".to_string(),
        Topology::Ring { k } => format!("ring {k}"),
        Topology::Random { p, seed } => format!("random {p} {seed}"),
        Topology::ExplicitTvg { path } => format!("tvg {path}"),
    };
    out.push_str(&format!("topology = {topology}\n"));
    let initial = match &config.initial_opinions {
        InitialOpinions::Uniform { seed } => format!("uniform {seed}"),
        InitialOpinions::Explicit(xs) => {
            let xs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            format!("explicit {}", xs.join(" "))
        }
    };
    out.push_str(&format!("initial_opinions = {initial}\n"));
    let minds = match config.minds {
        MindMode::Scalar => "scalar",
        MindMode::Explicit => "explicit",
    };
    out.push_str(&format!("minds = {minds}\n"));
    out.push_str(&format!("mu = {}\n", config.params.mu));
    out.push_str(&format!("eps_min = {}\n", config.params.eps_min));
    out.push_str(&format!("eps_max = {}\n", config.params.eps_max));
    out.push_str(&format!("delta_share = {}\n", config.params.delta_share));
    out.push_str(&format!("confidence_feedback = {}\n", config.params.confidence_feedback));
    let stat = match config.params.resistance_stat {
        ResistanceStat::Mean => "mean",
        ResistanceStat::Min => "min",
        ResistanceStat::Max => "max",
    };
    out.push_str(&format!("resistance = {stat}\n"));
    out.push_str(&format!("seed = {}\n", config.seed));
    out.push_str(&format!("metrics_every = {}\n", config.metrics_every));
    out.push_str(&format!("proposition = {}\n", config.proposition));
    out.push_str(&format!("cluster_delta = {}\n", config.cluster_delta));
    out.push_str(&format!("convergence_window = {}\n", config.convergence_window));
    out.push_str(&format!("convergence_tol = {}\n", config.convergence_tol));
    out.push_str(&format!("record_sharing = {}\n", config.record_sharing));
    for r in &config.reps {
        let t_o = r
            .objective_truth
            .map(|t| t.to_string())
            .unwrap_or_else(|| "?".into());
        out.push_str(&format!(
            "rep {} {} {} {} {} {}\n",
            r.agent, r.prop, t_o, r.subjective_truth, r.confidence, r.verifiable
        ));
    }
    for s in &config.sups {
        out.push_str(&format!(
            "sup {} {} {} {} {} {}\n",
            s.agent, s.prop_u, s.prop_v, s.weight, s.t1, s.t2
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Options controlling result emission.
#[derive(Debug, Clone, Copy)]
pub struct EmitOptions {
    /// Include a wall-clock timestamp in JSON output.
    pub timestamp: bool,
    /// Force per-agent opinion columns even for large populations.
    pub force_opinion_columns: bool,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions { timestamp: true, force_opinion_columns: false }
    }
}

/// Opinion columns are bounded to keep file sizes sane.
const OPINION_COLUMN_LIMIT: usize = 1024;

fn write_failed(e: std::io::Error, partial: bool) -> ScenarioError {
    let mut err = ScenarioError::new(DiagCode::WriteFailed, e.to_string());
    err.partial_output = partial;
    err
}

/// Writes a trajectory to `sink` as CSV or JSON. Output is a pure
/// function of the record (plus the timestamp when enabled).
pub fn emit_results(
    tr: &TrajectoryRecord,
    format: OutputFormat,
    opts: &EmitOptions,
    sink: &mut dyn Write,
) -> ScenarioResult<()> {
    match format {
        OutputFormat::Csv => emit_csv(tr, opts, sink),
        OutputFormat::Json => emit_json(tr, opts, sink),
    }
}

fn emit_csv(tr: &TrajectoryRecord, opts: &EmitOptions, sink: &mut dyn Write) -> ScenarioResult<()> {
    let with_opinions = opts.force_opinion_columns || tr.n_agents <= OPINION_COLUMN_LIMIT;
    let mut header = String::from("tick,mean,variance,clusters");
    if with_opinions {
        for i in 0..tr.n_agents {
            header.push_str(&format!(",x_{i}"));
        }
    }
    header.push('\n');
    sink.write_all(header.as_bytes())
        .map_err(|e| write_failed(e, false))?;
    for s in &tr.samples {
        let mut row = format!("{},{},{},{}", s.tick, s.mean, s.variance, s.clusters);
        if with_opinions {
            for x in &s.opinions {
                row.push_str(&format!(",{x}"));
            }
        }
        row.push('\n');
        sink.write_all(row.as_bytes())
            .map_err(|e| write_failed(e, true))?;
    }
    Ok(())
}

fn sample_json(s: &Sample) -> serde_json::Value {
    let mut obj = serde_json::json!({
        "tick": s.tick,
        "mean": s.mean,
        "variance": s.variance,
        "clusters": s.clusters,
        "opinions": s.opinions,
    });
    if let Some(shr) = &s.sharing {
        obj["sharing"] = serde_json::json!(shr);
    }
    obj
}

fn emit_json(tr: &TrajectoryRecord, opts: &EmitOptions, sink: &mut dyn Write) -> ScenarioResult<()> {
    let last = tr.final_sample();
    let mut doc = serde_json::json!({
        "config": tr.config_echo,
        "seed": tr.seed,
        "n_agents": tr.n_agents,
        "converged_at": tr.converged_at,
        "final": {
            "tick": last.tick,
            "mean": last.mean,
            "variance": last.variance,
            "clusters": last.clusters,
        },
        "samples": tr.samples.iter().map(sample_json).collect::<Vec<_>>(),
    });
    if opts.timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        doc["timestamp"] = serde_json::json!(now);
    }
    let text = serde_json::to_string_pretty(&doc).expect("trajectory serializes");
    sink.write_all(text.as_bytes())
        .map_err(|e| write_failed(e, false))?;
    sink.write_all(b"\n").map_err(|e| write_failed(e, true))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_with_echo;

    const MINIMAL: &str = "n_agents = 2\nhorizon = 10\ntopology = complete\ninitial_opinions = uniform 1\n";

    #[test]
    fn minimal_scenario_defaults() {
        let c = parse_scenario(MINIMAL).unwrap();
        assert_eq!(c.n_agents, 2);
        assert_eq!(c.params.eps_max, 0.5);
        assert_eq!(c.params.mu, 0.5);
        assert_eq!(c.metrics_every, 1);
    }

    #[test]
    fn mu_out_of_range_names_field_and_bound() {
        let err = parse_scenario(&format!("{MINIMAL}mu = 0.9\n")).unwrap_err();
        assert_eq!(err.code, DiagCode::OutOfRange);
        assert_eq!(err.field.as_deref(), Some("mu"));
        assert!(err.message.contains("(0, 0.5]"));
        assert_eq!(err.line, Some(5));
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse_scenario(&format!("{MINIMAL}bogus = 1\n")).unwrap_err();
        assert_eq!(err.code, DiagCode::UnknownKey);
        assert_eq!(err.field.as_deref(), Some("bogus"));
    }

    #[test]
    fn missing_required_field() {
        let err = parse_scenario("horizon = 5\ntopology = complete\n").unwrap_err();
        assert_eq!(err.code, DiagCode::MissingField);
        assert_eq!(err.field.as_deref(), Some("n_agents"));
    }

    #[test]
    fn malformed_mind_record() {
        let err = parse_scenario(&format!("{MINIMAL}rep 0 p ?\n")).unwrap_err();
        assert_eq!(err.code, DiagCode::BadMindRecord);
        assert_eq!(err.line, Some(5));
    }

    #[test]
    fn round_trip_is_stable() {
        let text = format!(
            "{MINIMAL}minds = explicit\nrep 0 p ? 0.4 0.2 false\nrep 1 p ? 0.6 0 false\nsup 0 p p2 0.5 0 5\nrep 0 p2 0.5 0.5 0.9 true\n"
        );
        let c = parse_scenario(&text).unwrap();
        let emitted = emit_scenario(&c);
        let c2 = parse_scenario(&emitted).unwrap();
        assert_eq!(c, c2);
        assert_eq!(emit_scenario(&c2), emitted);
    }

    #[test]
    fn csv_has_header_plus_rows() {
        let c = parse_scenario("n_agents = 2\nhorizon = 0\ntopology = complete\ninitial_opinions = explicit 0.4 0.6\n").unwrap();
        let tr = run_with_echo(&c, emit_scenario(&c)).unwrap();
        let mut buf = Vec::new();
        let opts = EmitOptions { timestamp: false, ..Default::default() };
        emit_results(&tr, OutputFormat::Csv, &opts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "tick,mean,variance,clusters,x_0,x_1");
        assert!(lines[1].starts_with("0,0.5,"));
    }

    #[test]
    fn json_round_trips_summary_fields() {
        let c = parse_scenario(MINIMAL).unwrap();
        let tr = run_with_echo(&c, emit_scenario(&c)).unwrap();
        let mut buf = Vec::new();
        let opts = EmitOptions { timestamp: false, ..Default::default() };
        emit_results(&tr, OutputFormat::Json, &opts, &mut buf).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["seed"], serde_json::json!(tr.seed));
        assert_eq!(doc["n_agents"], serde_json::json!(2));
        let last = tr.final_sample();
        assert_eq!(doc["final"]["tick"], serde_json::json!(last.tick));
        assert_eq!(doc["final"]["clusters"], serde_json::json!(last.clusters));
        assert_eq!(doc["samples"].as_array().unwrap().len(), tr.samples.len());
        assert!(doc.get("timestamp").is_none());
    }
}
