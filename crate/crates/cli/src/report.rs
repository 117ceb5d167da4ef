//! JSON report written by `analyze`, `sparsify` and `verify`.
//!
//! Key order follows field order, so reports from identical runs are
//! byte-identical once the timestamp is dropped with `--deterministic`.

use std::collections::BTreeMap;

use serde::Serialize;

use expgirth_core::lll::LllCheck;
use expgirth_core::sparsify::SparsifyOutcome;
use expgirth_core::spectral::SpectralSummary;
use expgirth_core::verify::{
    CheegerInterval, CheegerResult, Corollary3Check, Theorem2Audit, Theorem4Check,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Bound,
    Iterative,
}

/// A number together with how it was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct Quantity<T> {
    pub value: T,
    pub mode: Mode,
    pub tolerance: f64,
}

impl<T> Quantity<T> {
    pub fn exact(value: T) -> Self {
        Quantity {
            value,
            mode: Mode::Exact,
            tolerance: 0.0,
        }
    }

    pub fn bound(value: T) -> Self {
        Quantity {
            value,
            mode: Mode::Bound,
            tolerance: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgraph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_source: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub deterministic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphMeta {
    pub n: usize,
    pub m: usize,
    /// `None` for irregular graphs.
    pub d: Option<usize>,
    pub connected: bool,
    pub source: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralSection {
    #[serde(flatten)]
    pub summary: SpectralSummary,
    pub mode: Mode,
    /// `λ₂ >= 1 - 2 sqrt(d-1) / d`.
    pub ramanujan_or_better: bool,
    pub ramanujan_threshold: f64,
    /// `(d λ₂ / 2, sqrt(2 d λ₂))`.
    pub cheeger_sandwich: (f64, f64),
    /// `d sqrt(2 λ₂)`, the upper end that holds for every regular graph.
    pub cheeger_upper_degree_scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheegerSection {
    Exact(CheegerResult),
    Interval(CheegerInterval),
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleRow {
    pub k: usize,
    pub total: u64,
    /// Largest number of length-`k` cycles through a single vertex.
    pub max_per_vertex: Quantity<u64>,
    /// `d^k / n + d^k |1 - λ₂|^k`.
    pub spectral_bound: Option<Quantity<f64>>,
    pub within_spectral_bound: Option<bool>,
    /// `(d / 8δ)^k` for the δ in use.
    pub hypothesis_limit: Option<Quantity<f64>>,
    pub within_hypothesis: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LllSection {
    pub delta: f64,
    #[serde(flatten)]
    pub check: LllCheck,
    pub mode: Mode,
    /// Largest `δ <= d/2` passing the check.
    pub delta_max_feasible: Option<Quantity<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgraphSummary {
    pub m: usize,
    pub girth: Quantity<Option<usize>>,
    pub diameter: Quantity<Option<usize>>,
    pub diameter_girth_ratio: Option<Quantity<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cheeger: Option<CheegerResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SparsifySection {
    #[serde(flatten)]
    pub outcome: SparsifyOutcome,
    pub mode: Mode,
    pub subgraph: SubgraphSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySection {
    pub pass: bool,
    pub theorem2: Theorem2Audit,
    pub subgraph: SubgraphSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary3: Option<Corollary3Check>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    pub params: Params,
    pub graph: GraphMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub girth: Option<Quantity<Option<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<Quantity<Option<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cheeger: Option<CheegerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_table: Option<Vec<CycleRow>>,
    /// `min_k (d/8) c_k^(-1/k)`; `d/8` when no short cycle exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_max: Option<Quantity<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lll: Option<LllSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem4: Option<Theorem4Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsify: Option<SparsifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, params: Params, graph: GraphMeta) -> Report {
        let generated_at_unix = (!params.deterministic).then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            command,
            generated_at_unix,
            params,
            graph,
            girth: None,
            diameter: None,
            spectral: None,
            cheeger: None,
            cycle_table: None,
            delta_max: None,
            lll: None,
            theorem4: None,
            sparsify: None,
            verify: None,
            warnings: Vec::new(),
        }
    }
}

/// `min_k (d/8) c_k^(-1/k)` over the nonzero counts, or `d/8` if there are none.
pub fn delta_max(d: usize, counts: &BTreeMap<usize, u64>) -> f64 {
    counts
        .iter()
        .filter(|&(_, &c)| c > 0)
        .map(|(&k, &c)| d as f64 / 8.0 * (c as f64).powf(-1.0 / k as f64))
        .fold(d as f64 / 8.0, f64::min)
}
