use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use expgirth_core::cycles::{diameter, enumerate_short_cycles, girth};
use expgirth_core::generators::{
    cayley_sl2, default_sl2_generators, fixture, random_regular, Fixture,
};
use expgirth_core::lll::{lll_condition_check, max_feasible_delta};
use expgirth_core::sparsify::{moser_tardos_sparsify, SparsifyParams};
use expgirth_core::spectral::{
    cheeger_sandwich, cycle_count_bound, is_ramanujan_or_better, lambda2, ramanujan_threshold,
    SpectralMethod,
};
use expgirth_core::verify::{
    cheeger_exact, cheeger_interval, diameter_girth_ratio, verify_corollary3,
    verify_theorem2_inequality, verify_theorem4_with_lambda2, EXACT_CHEEGER_MAX_N,
};
use expgirth_core::{Error, Graph, Seed};

use crate::report::{
    delta_max, CheegerSection, CycleRow, GraphMeta, LllSection, Mode, Params, Quantity, Report,
    SparsifySection, SpectralSection, SubgraphSummary, VerifySection,
};
use crate::{Family, ReportArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input, violated preconditions.
    Usage(String),
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. }
            | Error::GenerationFailed { .. }
            | Error::NoConvergence { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub enum Outcome {
    Success,
    VerificationFailed,
    BudgetExhausted,
}

type CliResult<T = Outcome> = Result<T, CliError>;

fn require<T>(value: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{family} needs --{flag}")))
}

fn fixture_checked(f: Fixture) -> CliResult<Graph> {
    f.check()?;
    Ok(fixture(f))
}

pub fn generate(
    family: Family,
    n: Option<usize>,
    d: Option<usize>,
    p: Option<u64>,
    seed: u64,
    out: Option<&Path>,
) -> CliResult {
    let (name, g) = match family {
        Family::RandomRegular => {
            let n = require(n, "n", "random-regular")?;
            let d = require(d, "d", "random-regular")?;
            ("random-regular", random_regular(n, d, Seed(seed))?)
        }
        Family::CayleySl2 => {
            let p = require(p, "p", "cayley-sl2")?;
            ("cayley-sl2", cayley_sl2(p, &default_sl2_generators(p))?)
        }
        Family::Cycle => (
            "cycle",
            fixture_checked(Fixture::Cycle(require(n, "n", "cycle")?))?,
        ),
        Family::Complete => (
            "complete",
            fixture_checked(Fixture::Complete(require(n, "n", "complete")?))?,
        ),
        Family::Path => (
            "path",
            fixture_checked(Fixture::Path(require(n, "n", "path")?))?,
        ),
        Family::Petersen => ("petersen", fixture(Fixture::Petersen)),
    };
    let text = g.to_edge_list();
    let degree = g
        .degree()
        .map_or_else(|| "irregular".to_string(), |d| format!("d={d}"));
    let summary = format!("{name}: n={} m={} {degree}", g.n(), g.m());
    match out {
        Some(path) => {
            write_file(path, &text)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(Outcome::Success)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Graph::parse_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn graph_meta(g: &Graph, source: &Path) -> GraphMeta {
    GraphMeta {
        n: g.n(),
        m: g.m(),
        d: g.degree(),
        connected: g.is_connected(),
        source: source.display().to_string(),
    }
}

fn emit(report: &Report, args: &ReportArgs) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Runtime(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    match &args.json {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write report: {e}"))),
    }
}

fn spectral_section(g: &Graph, d: usize, warnings: &mut Vec<String>) -> Option<SpectralSection> {
    match lambda2(g) {
        Ok(summary) => {
            if summary.disconnected {
                warnings.push("graph is disconnected; λ₂ reported as 0".into());
            }
            let mode = match summary.method {
                SpectralMethod::Dense => Mode::Exact,
                SpectralMethod::Iterative => Mode::Iterative,
            };
            Some(SpectralSection {
                ramanujan_or_better: is_ramanujan_or_better(d, summary.lambda2),
                ramanujan_threshold: ramanujan_threshold(d),
                cheeger_sandwich: cheeger_sandwich(d, summary.lambda2),
                cheeger_upper_degree_scaled: d as f64 * (2.0 * summary.lambda2).sqrt(),
                summary,
                mode,
            })
        }
        Err(e) => {
            warnings.push(format!("spectral computation failed: {e}"));
            None
        }
    }
}

fn subgraph_summary(h: &Graph) -> SubgraphSummary {
    SubgraphSummary {
        m: h.m(),
        girth: Quantity::exact(girth(h)),
        diameter: Quantity::exact(diameter(h)),
        diameter_girth_ratio: diameter_girth_ratio(h).ok().map(Quantity::exact),
        cheeger: (h.n() <= EXACT_CHEEGER_MAX_N)
            .then(|| cheeger_exact(h).ok())
            .flatten(),
    }
}

pub fn analyze(input: &Path, g_target: usize, delta: Option<f64>, args: &ReportArgs) -> CliResult {
    if g_target < 3 {
        return Err(CliError::Usage(format!(
            "--g must be at least 3, got {g_target}"
        )));
    }
    if let Some(delta) = delta {
        if delta.is_nan() || delta <= 0.0 {
            return Err(CliError::Usage(format!(
                "--delta must be positive, got {delta}"
            )));
        }
    }
    let g = read_graph(input)?;
    let params = Params {
        input: Some(input.display().to_string()),
        g: Some(g_target),
        delta,
        deterministic: args.deterministic,
        ..Params::default()
    };
    let mut report = Report::new("analyze", params, graph_meta(&g, input));
    if !g.is_connected() {
        report.warnings.push("graph is disconnected".into());
    }
    report.girth = Some(Quantity::exact(girth(&g)));
    report.diameter = Some(Quantity::exact(diameter(&g)));

    let d = g.degree();
    if d.is_none() {
        report
            .warnings
            .push("graph is not regular; spectral and local-lemma sections skipped".into());
    }
    let spectral = d.and_then(|d| spectral_section(&g, d, &mut report.warnings));

    report.cheeger = if g.n() <= EXACT_CHEEGER_MAX_N && g.n() >= 2 {
        Some(CheegerSection::Exact(cheeger_exact(&g)?))
    } else {
        match &spectral {
            Some(s) if !s.summary.disconnected => match cheeger_interval(&g, &s.summary) {
                Ok(i) => Some(CheegerSection::Interval(i)),
                Err(e) => {
                    report.warnings.push(format!("sweep cut failed: {e}"));
                    None
                }
            },
            _ => None,
        }
    };

    let cycles = enumerate_short_cycles(&g, g_target)?;
    let max_counts = cycles.max_per_vertex_counts(g.n());
    let totals = cycles.totals_by_length();

    if let Some(d) = d {
        let dmax = delta_max(d, &max_counts);
        let (delta, source) = match delta {
            Some(x) => (x, "flag"),
            None => (dmax.min(d as f64 / 2.0), "delta_max"),
        };
        report.params.delta = Some(delta);
        report.params.delta_source = Some(source);
        let live_lambda = spectral
            .as_ref()
            .filter(|s| !s.summary.disconnected)
            .map(|s| s.summary.lambda2);
        let rows = totals
            .iter()
            .map(|(&k, &total)| {
                let c = max_counts.get(&k).copied().unwrap_or(0);
                let spectral_bound = live_lambda.map(|l| cycle_count_bound(d, g.n(), l, k));
                let limit = (d as f64 / (8.0 * delta)).powi(k as i32);
                CycleRow {
                    k,
                    total,
                    max_per_vertex: Quantity::exact(c),
                    within_spectral_bound: spectral_bound.map(|b| c as f64 <= b),
                    spectral_bound: spectral_bound.map(Quantity::bound),
                    hypothesis_limit: Some(Quantity::exact(limit)),
                    within_hypothesis: Some(c as f64 <= limit),
                }
            })
            .collect();
        report.cycle_table = Some(rows);
        report.delta_max = Some(Quantity::exact(dmax));
        report.lll = Some(LllSection {
            delta,
            check: lll_condition_check(d, delta, g_target, &max_counts, g.n()),
            mode: Mode::Bound,
            delta_max_feasible: max_feasible_delta(d, g_target, &max_counts, g.n())
                .map(Quantity::bound),
        });
        if let Some(l) = live_lambda {
            report.theorem4 = verify_theorem4_with_lambda2(&g, l, g_target).ok();
        }
    } else {
        report.cycle_table = Some(
            totals
                .iter()
                .map(|(&k, &total)| {
                    let c = max_counts.get(&k).copied().unwrap_or(0);
                    CycleRow {
                        k,
                        total,
                        max_per_vertex: Quantity::exact(c),
                        spectral_bound: None,
                        within_spectral_bound: None,
                        hypothesis_limit: None,
                        within_hypothesis: None,
                    }
                })
                .collect(),
        );
    }
    report.spectral = spectral;
    emit(&report, args)?;
    Ok(Outcome::Success)
}

pub struct SparsifyArgs {
    pub g: usize,
    pub delta: f64,
    pub s_max: usize,
    pub seed: u64,
    pub max_rounds: u64,
}

pub fn sparsify(input: &Path, a: SparsifyArgs, out: Option<&Path>, args: &ReportArgs) -> CliResult {
    let g = read_graph(input)?;
    let params = SparsifyParams {
        s_max: a.s_max,
        max_rounds: a.max_rounds,
        ..SparsifyParams::new(a.g, a.delta, Seed(a.seed))
    };
    let outcome = moser_tardos_sparsify(&g, &params)?;
    if let Some(path) = out {
        write_file(path, &outcome.h.to_edge_list())?;
    }
    let echo = Params {
        input: Some(input.display().to_string()),
        g: Some(a.g),
        delta: Some(a.delta),
        s_max: Some(a.s_max),
        seed: Some(a.seed),
        max_rounds: Some(a.max_rounds),
        out: out.map(|p| p.display().to_string()),
        deterministic: args.deterministic,
        ..Params::default()
    };
    let mut report = Report::new("sparsify", echo, graph_meta(&g, input));
    if !outcome.lll_precheck.pass {
        report.warnings.push(format!(
            "local-lemma precheck fails (worst template {}); resampling may still converge",
            outcome.lll_precheck.worst_template
        ));
    }
    if outcome.budget_exhausted {
        report.warnings.push(format!(
            "resampling budget of {} rounds exhausted",
            a.max_rounds
        ));
    }
    let exhausted = outcome.budget_exhausted;
    report.sparsify = Some(SparsifySection {
        subgraph: subgraph_summary(&outcome.h),
        outcome,
        mode: Mode::Exact,
    });
    emit(&report, args)?;
    Ok(if exhausted {
        Outcome::BudgetExhausted
    } else {
        Outcome::Success
    })
}

pub fn verify(
    graph: &Path,
    subgraph: &Path,
    delta: f64,
    s_max: usize,
    g_target: Option<usize>,
    args: &ReportArgs,
) -> CliResult {
    if delta.is_nan() || delta <= 0.0 {
        return Err(CliError::Usage(format!(
            "--delta must be positive, got {delta}"
        )));
    }
    if s_max == 0 {
        return Err(CliError::Usage("--s-max must be at least 1".into()));
    }
    let g = read_graph(graph)?;
    let h = read_graph(subgraph)?;
    let theorem2 = verify_theorem2_inequality(&g, &h, delta, s_max)?;
    let echo = Params {
        input: Some(graph.display().to_string()),
        subgraph: Some(subgraph.display().to_string()),
        g: g_target,
        delta: Some(delta),
        s_max: Some(s_max),
        deterministic: args.deterministic,
        ..Params::default()
    };
    let mut report = Report::new("verify", echo, graph_meta(&g, graph));
    report.girth = Some(Quantity::exact(girth(&g)));
    let corollary3 = if g.n() <= EXACT_CHEEGER_MAX_N {
        Some(verify_corollary3(&g, &h, delta)?)
    } else {
        None
    };
    if let (Some(target), Some(d)) = (g_target, g.degree()) {
        if let Some(s) = spectral_section(&g, d, &mut report.warnings) {
            if !s.summary.disconnected {
                report.theorem4 = verify_theorem4_with_lambda2(&g, s.summary.lambda2, target).ok();
            }
            report.spectral = Some(s);
        }
    }
    let pass = theorem2.pass && corollary3.as_ref().is_none_or(|c| c.pass);
    report.verify = Some(VerifySection {
        pass,
        theorem2,
        subgraph: subgraph_summary(&h),
        corollary3,
        mode: Mode::Exact,
    });
    emit(&report, args)?;
    Ok(if pass {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}
