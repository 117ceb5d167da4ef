//! The random orientation model, the two bad-event families and the
//! local-lemma arithmetic around them.
//!
//! Every edge `{u, v}` of the host graph carries two independent Boolean
//! variables, one per direction, each true with probability `δ/d`. Variable
//! `2e` is the direction `u → v` of edge `e = (u, v)`, `u < v`, and `2e + 1`
//! is `v → u`. An undirected edge survives when either direction is present.
//!
//! Bad events:
//! * a short cycle `C` survives entirely (`A_C`);
//! * a connected set `S` has too few present out-directions:
//!   `|∂out_D S| <= (δ / 2d) |∂_G S| - (2 ln d + 4) |S|` (`A_S`).

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use rand::Rng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Seed;
use crate::graph::{edge_boundary, Cycle, Graph, VertexSet};

/// Variable index of the direction `from → to` of an edge of `g`.
pub fn variable(g: &Graph, from: usize, to: usize) -> Option<usize> {
    g.edge_id(from, to).map(|e| 2 * e + usize::from(from > to))
}

/// State of all `2|E|` direction variables plus the generator that drives
/// (re)sampling.
#[derive(Debug, Clone)]
pub struct Orientation {
    present: Vec<bool>,
    prob: f64,
    rng: Xoshiro256PlusPlus,
}

impl Orientation {
    /// Samples every direction independently with probability `δ/d`. Each
    /// variable is set by `u < δ/d` for a fresh uniform `u`, so for a fixed
    /// seed the present set grows monotonically with `δ`.
    pub fn sample(g: &Graph, delta: f64, seed: Seed) -> Result<Orientation> {
        let d = g.degree().ok_or(Error::NotRegular)? as f64;
        let prob = delta / d;
        if !(0.0..=0.5).contains(&prob) {
            return Err(Error::InvalidParameter(format!(
                "δ/d must lie in [0, 1/2], got {prob}"
            )));
        }
        let mut rng = seed.rng();
        let present = (0..2 * g.m()).map(|_| rng.gen::<f64>() < prob).collect();
        Ok(Orientation { present, prob, rng })
    }

    /// Orientation with every variable set to `value` (for tests and audits).
    pub fn constant(g: &Graph, value: bool) -> Orientation {
        Orientation {
            present: vec![value; 2 * g.m()],
            prob: if value { 1.0 } else { 0.0 },
            rng: Seed(0).rng(),
        }
    }

    pub fn from_present(present: Vec<bool>, prob: f64, seed: Seed) -> Orientation {
        Orientation {
            present,
            prob,
            rng: seed.rng(),
        }
    }

    pub fn num_variables(&self) -> usize {
        self.present.len()
    }

    pub fn prob(&self) -> f64 {
        self.prob
    }

    #[inline]
    pub fn is_present(&self, var: usize) -> bool {
        self.present[var]
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.present[var] = value;
    }

    pub fn flip(&mut self, var: usize) {
        self.present[var] = !self.present[var];
    }

    pub fn present_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    /// Redraws the given variables, in the order given.
    pub fn resample(&mut self, vars: &[usize]) {
        for &v in vars {
            self.present[v] = self.rng.gen::<f64>() < self.prob;
        }
    }

    #[inline]
    pub fn edge_present(&self, edge: usize) -> bool {
        self.present[2 * edge] || self.present[2 * edge + 1]
    }
}

/// Spanning subgraph `H` with `{u, v}` present iff either direction is.
pub fn undirect(g: &Graph, orientation: &Orientation) -> Graph {
    g.spanning_subgraph(|e| orientation.edge_present(e))
}

/// `(δ / 2d) b - (2 ln d + 4) s`, the right-hand side of the set event.
pub fn set_threshold(boundary: usize, size: usize, d: usize, delta: f64) -> f64 {
    let df = d as f64;
    delta / (2.0 * df) * boundary as f64 - (2.0 * df.ln() + 4.0) * size as f64
}

/// Largest set-event threshold possible for a connected set of `size`
/// vertices in a `d`-regular graph (boundary at most `d s - 2(s - 1)`).
pub fn max_set_threshold(size: usize, d: usize, delta: f64) -> f64 {
    let b = (d * size).saturating_sub(2 * size.saturating_sub(1));
    set_threshold(b, size, d, delta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "vertices")]
pub enum EventKind {
    Cycle(Cycle),
    Set(VertexSet),
}

/// A bad event together with its variable set and local-lemma weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRecord {
    pub kind: EventKind,
    pub vbl: Vec<usize>,
    pub x_value: f64,
}

impl EventRecord {
    pub fn cycle(g: &Graph, cycle: Cycle, delta: f64) -> Result<EventRecord> {
        let vbl = cycle_vbl(g, &cycle);
        let kind = EventKind::Cycle(cycle);
        let x_value = x_assignment(&kind, g.degree().ok_or(Error::NotRegular)?, delta)?;
        Ok(EventRecord { kind, vbl, x_value })
    }

    pub fn set(g: &Graph, set: VertexSet, delta: f64) -> Result<EventRecord> {
        let vbl = set_vbl(g, set.members());
        let kind = EventKind::Set(set);
        let x_value = x_assignment(&kind, g.degree().ok_or(Error::NotRegular)?, delta)?;
        Ok(EventRecord { kind, vbl, x_value })
    }

    pub fn holds(&self, g: &Graph, orientation: &Orientation, delta: f64) -> bool {
        match &self.kind {
            EventKind::Cycle(c) => event_cycle_holds(g, orientation, c),
            EventKind::Set(s) => event_set_holds(g, orientation, s, delta),
        }
    }
}

/// Both directions of every edge of the cycle, sorted.
pub fn cycle_vbl(g: &Graph, cycle: &Cycle) -> Vec<usize> {
    let mut vbl: Vec<usize> = cycle
        .edge_ids(g)
        .into_iter()
        .flat_map(|e| [2 * e, 2 * e + 1])
        .collect();
    vbl.sort_unstable();
    vbl
}

/// Out-directions `u → w`, `u ∈ S`, `w ∉ S`, sorted. `members` must be sorted.
pub fn set_vbl(g: &Graph, members: &[usize]) -> Vec<usize> {
    let mut vbl = Vec::new();
    for &u in members {
        for (&w, &e) in g.neighbors(u).iter().zip(g.incident_edges(u)) {
            if members.binary_search(&w).is_err() {
                vbl.push(2 * e + usize::from(u > w));
            }
        }
    }
    vbl.sort_unstable();
    vbl
}

/// `A_C`: every edge of `C` survives in `H`.
pub fn event_cycle_holds(g: &Graph, orientation: &Orientation, cycle: &Cycle) -> bool {
    cycle
        .edge_ids(g)
        .into_iter()
        .all(|e| orientation.edge_present(e))
}

/// `A_S`: `|∂out_D S| <= (δ / 2d) |∂_G S| - (2 ln d + 4) |S|`.
pub fn event_set_holds(g: &Graph, orientation: &Orientation, set: &VertexSet, delta: f64) -> bool {
    let d = g
        .degree()
        .expect("set events are defined on regular graphs");
    let out = set_vbl(g, set.members())
        .into_iter()
        .filter(|&v| orientation.is_present(v))
        .count();
    out as f64 <= set_threshold(edge_boundary(g, set), set.len(), d, delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleProbability {
    /// `(2δ/d)^k`.
    pub bound: f64,
    /// `(1 - (1 - δ/d)^2)^k`.
    pub exact: f64,
}

pub fn prob_cycle_bound(d: usize, delta: f64, k: usize) -> CycleProbability {
    let p = delta / d as f64;
    CycleProbability {
        bound: (2.0 * p).powi(k as i32),
        exact: (1.0 - (1.0 - p).powi(2)).powi(k as i32),
    }
}

/// Lower tail of `Binomial(b, δ/d)` at the set-event threshold, with the
/// `(10d)^-s` bound. Values are also given as natural logs so comparisons
/// never underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SetTail {
    pub exact: f64,
    pub ln_exact: f64,
    pub bound: f64,
    pub ln_bound: f64,
    /// `(16 d^(2 ln 2))^-s`, the Markov bound at `α = 1/2` before it is
    /// weakened to `(10d)^-s`.
    pub ln_chernoff: f64,
}

pub fn prob_set_tail(b: usize, s: usize, d: usize, delta: f64) -> SetTail {
    let p = delta / d as f64;
    let threshold = set_threshold(b, s, d, delta);
    let ln_exact = if threshold < 0.0 {
        f64::NEG_INFINITY
    } else {
        let top = (threshold.floor() as usize).min(b);
        ln_binomial_cdf(b, p, top)
    };
    let ln_bound = -(s as f64) * (10.0 * d as f64).ln();
    SetTail {
        exact: ln_exact.exp(),
        ln_exact,
        bound: ln_bound.exp(),
        ln_bound,
        ln_chernoff: ln_set_chernoff_bound(d, s),
    }
}

/// `ln (16 d^(2 ln 2))^-s = -s ln 2 (2 ln d + 4)`.
pub fn ln_set_chernoff_bound(d: usize, s: usize) -> f64 {
    -(s as f64) * LN_2 * (2.0 * (d as f64).ln() + 4.0)
}

/// `ln P(Binomial(n, p) <= top)`, summed in log space.
pub fn ln_binomial_cdf(n: usize, p: f64, top: usize) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return if top >= n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut ln_choose = 0.0;
    let mut terms = Vec::with_capacity(top + 1);
    for k in 0..=top.min(n) {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        terms.push(ln_choose + k as f64 * lp + (n - k) as f64 * lq);
    }
    log_sum_exp(&terms)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `(8d)^-|S|` for set events, `(4δ/d)^|C|` for cycle events.
pub fn x_assignment(kind: &EventKind, d: usize, delta: f64) -> Result<f64> {
    match kind {
        EventKind::Set(s) => Ok(x_set(d, s.len())),
        EventKind::Cycle(c) => x_cycle(d, delta, c.len()),
    }
}

pub fn x_set(d: usize, size: usize) -> f64 {
    (8.0 * d as f64).powi(-(size as i32))
}

pub fn x_cycle(d: usize, delta: f64, len: usize) -> Result<f64> {
    let r = 4.0 * delta / d as f64;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cycle weight needs 0 < 4δ/d < 1, got {r}"
        )));
    }
    Ok(r.powi(len as i32))
}

/// Outcome of the numeric local-lemma check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LllCheck {
    pub pass: bool,
    /// Minimum over event templates of `x(A) Π(1 - x(B)) / P(A)`.
    pub margin: f64,
    /// `ln Π_{C ∋ v} (1 - x(A_C))` using the supplied per-vertex counts.
    pub ln_cycle_product: f64,
    /// `ln Π_{S ∋ v} (1 - x(A_S))` using `(4d)^(s-1)` sets of size `s`.
    pub ln_set_product: f64,
    /// Template attaining the margin, e.g. `cycle:5` or `set:1`.
    pub worst_template: String,
    /// Margin of the set templates when `P(A_S)` is bounded by `(10d)^-s`
    /// instead of the sharper Markov bound.
    pub set_margin_with_10d_bound: f64,
}

/// Evaluates the local-lemma condition for every event template.
///
/// For an event `A` on vertex set `V(A)`, every event sharing a variable with
/// `A` contains a vertex of `A`, so `Π_{B ~ A} (1 - x(B)) >= F^|V(A)|` with
/// `F = Π_{C ∋ v} (1 - x(A_C)) · Π_{S ∋ v} (1 - x(A_S))`. The check then
/// requires, per template,
/// * cycle length `k`: `(2δ/d)^k <= (4δ/d)^k F^k`;
/// * set size `s`: `(16 d^(2 ln 2))^-s <= (8d)^-s F^s`.
///
/// `cycle_counts[k]` is the maximum number of length-`k` cycles through any
/// vertex; lengths outside `3..g` are ignored.
pub fn lll_condition_check(
    d: usize,
    delta: f64,
    g: usize,
    cycle_counts: &BTreeMap<usize, u64>,
    n: usize,
) -> LllCheck {
    let present: Vec<(usize, u64)> = cycle_counts
        .iter()
        .filter(|&(&k, &c)| k >= 3 && k < g && c > 0)
        .map(|(&k, &c)| (k, c))
        .collect();

    let mut ln_cycle_product = 0.0;
    for &(k, c) in &present {
        match x_cycle(d, delta, k) {
            Ok(x) => ln_cycle_product += c as f64 * (-x).ln_1p(),
            Err(_) => {
                return LllCheck {
                    pass: false,
                    margin: 0.0,
                    ln_cycle_product: f64::NEG_INFINITY,
                    ln_set_product: ln_set_product(d, n),
                    worst_template: format!("cycle:{k}"),
                    set_margin_with_10d_bound: 0.0,
                }
            }
        }
    }
    let ln_sets = ln_set_product(d, n);
    let ln_f = ln_cycle_product + ln_sets;

    let mut worst = (f64::INFINITY, String::new());
    for &(k, _) in &present {
        let r = k as f64 * (LN_2 + ln_f);
        if r < worst.0 {
            worst = (r, format!("cycle:{k}"));
        }
    }
    let ln_8d = (8.0 * d as f64).ln();
    let mut worst_10d = f64::INFINITY;
    for s in 1..=n.max(1) {
        let sf = s as f64;
        let r = -sf * ln_8d + sf * ln_f - ln_set_chernoff_bound(d, s);
        if r < worst.0 {
            worst = (r, format!("set:{s}"));
        }
        worst_10d = worst_10d.min(sf * (1.25f64.ln() + ln_f));
    }
    LllCheck {
        pass: worst.0 >= 0.0,
        margin: worst.0.exp(),
        ln_cycle_product,
        ln_set_product: ln_sets,
        worst_template: worst.1,
        set_margin_with_10d_bound: worst_10d.exp(),
    }
}

/// `Σ_{s=1}^{n} (4d)^(s-1) ln(1 - (8d)^-s)`; terms shrink like `2^-s`.
fn ln_set_product(d: usize, n: usize) -> f64 {
    let df = d as f64;
    let mut total = 0.0;
    for s in 1..=n.max(1) {
        let x = (8.0 * df).powi(-(s as i32));
        let count = (4.0 * df).powi(s as i32 - 1);
        let term = count * (-x).ln_1p();
        total += term;
        if term.abs() < 1e-18 * total.abs() || x == 0.0 {
            break;
        }
    }
    total
}

/// Largest `δ <= d/2` passing [`lll_condition_check`], by bisection (the
/// check is monotone in `δ`). `None` if no positive `δ` passes.
pub fn max_feasible_delta(
    d: usize,
    g: usize,
    cycle_counts: &BTreeMap<usize, u64>,
    n: usize,
) -> Option<f64> {
    let passes = |delta: f64| lll_condition_check(d, delta, g, cycle_counts, n).pass;
    let hi = d as f64 / 2.0;
    if passes(hi) {
        return Some(hi);
    }
    let mut lo = 0.0;
    let mut hi = hi;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo > 0.0).then_some(lo)
}

/// `δ = (1 - λ₂)^-1 / 16`.
pub fn choose_delta(lambda2: f64) -> Result<f64> {
    if !(lambda2 > 0.0 && lambda2 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "δ choice needs 0 < λ₂ < 1, got {lambda2}"
        )));
    }
    Ok(1.0 / (1.0 - lambda2) / 16.0)
}
