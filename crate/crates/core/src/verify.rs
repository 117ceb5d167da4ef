//! Cheeger constants and exact or bounded checks of the expansion guarantees.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::connected::visit_all_connected_sets;
use crate::cycles::{diameter, girth, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::generators::Seed;
use crate::graph::{edge_boundary_sorted, Graph, VertexSet};
use crate::lll::{choose_delta, max_set_threshold};
use crate::sparsify::{moser_tardos_sparsify, SparsifyParams};
use crate::spectral::{cheeger_sandwich, fiedler_vector, lambda2, SpectralSummary};

/// Largest graph [`cheeger_exact`] accepts.
pub const EXACT_CHEEGER_MAX_N: usize = 24;
/// Largest graph on which the boundary inequality is checked over all subsets.
pub const EXHAUSTIVE_SUBSETS_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheegerMode {
    Exact,
    SweepBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerResult {
    pub value: f64,
    pub witness: Option<VertexSet>,
    pub mode: CheegerMode,
}

/// `2 ln d + 4`, the per-vertex penalty in the boundary inequality.
fn size_penalty(d: usize) -> f64 {
    2.0 * (d as f64).ln() + 4.0
}

fn neighbor_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

/// Visits every subset of `0..n` (`n <= 24`), in parallel over the top bits,
/// with the boundary size maintained incrementally along a Gray code. The
/// visitor receives `(mask, boundary)` and folds into a per-chunk state.
fn gray_subsets<T, F, R>(g: &Graph, init: impl Fn() -> T + Sync + Send, visit: F, reduce: R) -> T
where
    T: Send,
    F: Fn(&mut T, u32, usize) + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    let n = g.n();
    let nmask = neighbor_masks(g);
    let top = n.min(4);
    let low = n - top;
    let boundary_of = |mask: u32| -> usize {
        (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| (nmask[v] & !mask).count_ones() as usize)
            .sum()
    };
    (0u32..1 << top)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = init();
            let mut mask = chunk << low;
            let mut b = boundary_of(mask);
            visit(&mut acc, mask, b);
            for i in 1u32..1 << low {
                let v = i.trailing_zeros() as usize;
                let inside = (nmask[v] & mask).count_ones() as usize;
                let deg = g.deg(v);
                if mask >> v & 1 == 1 {
                    b = b + 2 * inside - deg;
                } else {
                    b = b + deg - 2 * inside;
                }
                mask ^= 1 << v;
                visit(&mut acc, mask, b);
            }
            acc
        })
        .reduce(&init, reduce)
}

/// `h(G) = min |∂S| / |S|` over `0 < |S| <= n/2`, by exhaustive search.
pub fn cheeger_exact(g: &Graph) -> Result<CheegerResult> {
    let n = g.n();
    if n > EXACT_CHEEGER_MAX_N {
        return Err(Error::ResourceLimit {
            what: "exact Cheeger constant (vertices)",
            cap: EXACT_CHEEGER_MAX_N,
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "Cheeger constant needs at least 2 vertices".into(),
        ));
    }
    // (boundary, size, mask) of the best set; ties go to the smaller mask.
    type Best = Option<(usize, usize, u32)>;
    let better = |a: Best, b: Best| -> Best {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => {
                let (lhs, rhs) = (x.0 * y.1, y.0 * x.1);
                if lhs < rhs || (lhs == rhs && x.2 < y.2) {
                    Some(x)
                } else {
                    Some(y)
                }
            }
        }
    };
    let best = gray_subsets(
        g,
        || None,
        |acc: &mut Best, mask, b| {
            let s = mask.count_ones() as usize;
            if s > 0 && 2 * s <= n {
                *acc = better(*acc, Some((b, s, mask)));
            }
        },
        better,
    )
    .expect("n >= 2 has a set of size 1");
    Ok(CheegerResult {
        value: best.0 as f64 / best.1 as f64,
        witness: Some(VertexSet::from_mask(n, best.2 as u64)),
        mode: CheegerMode::Exact,
    })
}

/// Upper bound on `h(G)` from the best prefix cut of the Fiedler vector.
pub fn cheeger_sweep(g: &Graph) -> Result<CheegerResult> {
    let (_, vec) = fiedler_vector(g)?;
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vec[a].total_cmp(&vec[b]).then(a.cmp(&b)));
    let mut inside = vec![false; n];
    let mut b: isize = 0;
    let mut best = (f64::INFINITY, 0usize);
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        let deg = g.deg(v) as isize;
        let nin = g.neighbors(v).iter().filter(|&&w| inside[w]).count() as isize;
        b += deg - 2 * nin;
        inside[v] = true;
        let size = (k + 1).min(n - k - 1);
        let ratio = b as f64 / size as f64;
        if ratio < best.0 {
            best = (ratio, k + 1);
        }
    }
    let (value, k) = best;
    let prefix = &order[..k];
    let witness = if 2 * k <= n {
        VertexSet::from_members(n, prefix.iter().copied())
    } else {
        VertexSet::from_members(n, order[k..].iter().copied())
    };
    Ok(CheegerResult {
        value,
        witness: Some(witness),
        mode: CheegerMode::SweepBound,
    })
}

/// Cheeger constant as an interval: spectral lower bound `d λ₂ / 2` and the
/// sweep-cut upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerInterval {
    pub lower: f64,
    pub lower_mode: &'static str,
    pub upper: f64,
    pub upper_mode: &'static str,
}

pub fn cheeger_interval(g: &Graph, spectral: &SpectralSummary) -> Result<CheegerInterval> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    let sweep = cheeger_sweep(g)?;
    Ok(CheegerInterval {
        lower: cheeger_sandwich(d, spectral.lambda2).0,
        lower_mode: "spectral_bound",
        upper: sweep.value,
        upper_mode: "sweep_bound",
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditScope {
    /// Every nonempty subset of `V(G)`.
    AllSubsets,
    /// Every connected set of size at most `s_max`.
    ConnectedUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstSet {
    pub set: VertexSet,
    /// `|∂_H S| - ((δ / 2d) |∂_G S| - (2 ln d + 4) |S|)`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Audit {
    pub pass: bool,
    pub scope: AuditScope,
    /// Sets whose right-hand side is nonnegative.
    pub substantive_checks: u64,
    /// Sets whose right-hand side is negative (pass for any `H`).
    pub vacuous_checks: u64,
    /// Sizes skipped because the right-hand side is negative for every
    /// connected set of that size.
    pub vacuous_sizes: Vec<usize>,
    pub worst: Option<WorstSet>,
}

/// Checks `|∂_H S| >= (δ / 2d) |∂_G S| - (2 ln d + 4) |S|`.
///
/// All nonempty subsets are checked when `n <= 20`; otherwise every
/// connected set of size at most `s_max`, skipping sizes that cannot have a
/// nonnegative right-hand side.
pub fn verify_theorem2_inequality(
    g: &Graph,
    h: &Graph,
    delta: f64,
    s_max: usize,
) -> Result<Theorem2Audit> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    if !h.is_spanning_subgraph_of(g) {
        return Err(Error::NotSpanningSubgraph(format!(
            "{} vertices / {} edges against host with {} vertices",
            h.n(),
            h.m(),
            g.n()
        )));
    }
    let scale = delta / (2.0 * d as f64);
    let penalty = size_penalty(d);
    if g.n() <= EXHAUSTIVE_SUBSETS_MAX_N {
        exhaustive_theorem2(g, h, scale, penalty)
    } else {
        connected_theorem2(g, h, delta, d, s_max, scale, penalty)
    }
}

#[derive(Clone, Default)]
struct Tally {
    substantive: u64,
    vacuous: u64,
    worst: Option<(f64, u32)>,
}

fn exhaustive_theorem2(g: &Graph, h: &Graph, scale: f64, penalty: f64) -> Result<Theorem2Audit> {
    let n = g.n();
    let hmask = neighbor_masks(h);
    let merge = |a: Tally, b: Tally| Tally {
        substantive: a.substantive + b.substantive,
        vacuous: a.vacuous + b.vacuous,
        worst: match (a.worst, b.worst) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(if (x.0, x.1) <= (y.0, y.1) { x } else { y }),
        },
    };
    let t = gray_subsets(
        g,
        Tally::default,
        |acc: &mut Tally, mask, bg| {
            if mask == 0 {
                return;
            }
            let s = mask.count_ones() as f64;
            let bh: u32 = (0..n)
                .filter(|&v| mask >> v & 1 == 1)
                .map(|v| (hmask[v] & !mask).count_ones())
                .sum();
            let rhs = scale * bg as f64 - penalty * s;
            if rhs >= 0.0 {
                acc.substantive += 1;
            } else {
                acc.vacuous += 1;
            }
            let slack = bh as f64 - rhs;
            if acc.worst.is_none_or(|(w, m)| (slack, mask) < (w, m)) {
                acc.worst = Some((slack, mask));
            }
        },
        merge,
    );
    let worst = t.worst.map(|(slack, mask)| WorstSet {
        set: VertexSet::from_mask(n, mask as u64),
        slack,
    });
    Ok(Theorem2Audit {
        pass: worst.as_ref().is_none_or(|w| w.slack >= 0.0),
        scope: AuditScope::AllSubsets,
        substantive_checks: t.substantive,
        vacuous_checks: t.vacuous,
        vacuous_sizes: Vec::new(),
        worst,
    })
}

fn connected_theorem2(
    g: &Graph,
    h: &Graph,
    delta: f64,
    d: usize,
    s_max: usize,
    scale: f64,
    penalty: f64,
) -> Result<Theorem2Audit> {
    let s_max = s_max.min(g.n());
    let live: Vec<bool> = (0..=s_max)
        .map(|s| s > 0 && max_set_threshold(s, d, delta) >= 0.0)
        .collect();
    let vacuous_sizes: Vec<usize> = (1..=s_max).filter(|&s| !live[s]).collect();
    let mut tally = Tally::default();
    let mut worst: Option<(f64, Vec<usize>)> = None;
    if let Some(top) = (1..=s_max).rev().find(|&s| live[s]) {
        let mut visited = 0usize;
        let flow = visit_all_connected_sets(g, top, |members| {
            visited += 1;
            if visited > DEFAULT_ENUMERATION_CAP {
                return ControlFlow::Break(());
            }
            if !live[members.len()] {
                return ControlFlow::Continue(());
            }
            let bg = edge_boundary_sorted(g, members);
            let bh = edge_boundary_sorted(h, members);
            let rhs = scale * bg as f64 - penalty * members.len() as f64;
            if rhs >= 0.0 {
                tally.substantive += 1;
            } else {
                tally.vacuous += 1;
            }
            let slack = bh as f64 - rhs;
            if worst.as_ref().is_none_or(|(w, _)| slack < *w) {
                worst = Some((slack, members.to_vec()));
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return Err(Error::ResourceLimit {
                what: "connected-set enumeration",
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
    }
    let worst = worst.map(|(slack, members)| WorstSet {
        set: VertexSet::from_members(g.n(), members),
        slack,
    });
    Ok(Theorem2Audit {
        pass: worst.as_ref().is_none_or(|w| w.slack >= 0.0),
        scope: AuditScope::ConnectedUpTo(s_max),
        substantive_checks: tally.substantive,
        vacuous_checks: tally.vacuous,
        vacuous_sizes,
        worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corollary3Check {
    pub h_g: f64,
    pub h_h: f64,
    /// `8 d (ln d + 2) / δ`.
    pub required_h_g: f64,
    pub hypothesis_met: bool,
    /// `(δ / 4d) h(G)`.
    pub guarantee: f64,
    pub pass: bool,
    /// Passed only because the hypothesis fails.
    pub vacuous: bool,
}

pub fn verify_corollary3(g: &Graph, h: &Graph, delta: f64) -> Result<Corollary3Check> {
    let d = g.degree().ok_or(Error::NotRegular)? as f64;
    if !h.is_spanning_subgraph_of(g) {
        return Err(Error::NotSpanningSubgraph("corollary check".into()));
    }
    let h_g = cheeger_exact(g)?.value;
    let h_h = cheeger_exact(h)?.value;
    Ok(corollary3_from_values(d, delta, h_g, h_h))
}

/// The corollary's implication evaluated on given Cheeger values.
pub fn corollary3_from_values(d: f64, delta: f64, h_g: f64, h_h: f64) -> Corollary3Check {
    let required_h_g = 8.0 * d * (d.ln() + 2.0) / delta;
    let hypothesis_met = h_g >= required_h_g;
    let guarantee = delta / (4.0 * d) * h_g;
    Corollary3Check {
        h_g,
        h_h,
        required_h_g,
        hypothesis_met,
        guarantee,
        pass: !hypothesis_met || h_h >= guarantee,
        vacuous: !hypothesis_met,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem4Run {
    pub girth: Option<usize>,
    pub girth_certified: bool,
    pub boundary_audit_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem4Check {
    pub lambda2: f64,
    /// `λ₂ >= 1 - 1 / (16 (ln d + 2))`.
    pub spectral_condition: bool,
    /// `n > 16 (ln d + 2)^g`.
    pub size_condition: bool,
    pub applicable: bool,
    /// `(1 - λ₂)^-1 / 16`, when `λ₂ < 1`.
    pub delta: Option<f64>,
    /// `λ₂ (1 - λ₂)^-1 / 64 - 2 ln d - 4`, when `λ₂ < 1`.
    pub predicted_h_lower: Option<f64>,
    /// `λ₂ >= 1 - 1 / (192 (ln d + 2))`.
    pub strong_regime: bool,
    /// `0.99 (ln d + 2)`, the guarantee that is checked.
    pub strong_guarantee_stated: f64,
    /// `0.99 (ln d + 4)`, the larger constant, reported alongside.
    pub strong_guarantee_alt: f64,
    pub run: Option<Theorem4Run>,
}

pub fn theorem4_predicted_h_lower(d: usize, lambda2: f64) -> Option<f64> {
    (lambda2 < 1.0).then(|| lambda2 / (1.0 - lambda2) / 64.0 - size_penalty(d))
}

/// Evaluates the spectral corollary's applicability and guarantee; when it
/// applies and `δ <= d/2`, also runs the sparsifier and audits its output.
pub fn verify_theorem4(g: &Graph, girth_target: usize) -> Result<Theorem4Check> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let l2 = lambda2(g)?.lambda2;
    Ok(theorem4_from_lambda2(g, d, l2, girth_target))
}

/// [`verify_theorem4`] with a precomputed λ₂.
pub fn verify_theorem4_with_lambda2(
    g: &Graph,
    lambda2: f64,
    girth_target: usize,
) -> Result<Theorem4Check> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(theorem4_from_lambda2(g, d, lambda2, girth_target))
}

fn theorem4_from_lambda2(g: &Graph, d: usize, l2: f64, girth_target: usize) -> Theorem4Check {
    let ln_term = (d as f64).ln() + 2.0;
    let spectral_condition = l2 >= 1.0 - 1.0 / (16.0 * ln_term);
    let size_condition = g.n() as f64 > 16.0 * ln_term.powi(girth_target as i32);
    let applicable = spectral_condition && size_condition;
    let delta = choose_delta(l2).ok();
    let run = match delta {
        Some(delta) if applicable && 2.0 * delta <= d as f64 => {
            let params = SparsifyParams::new(girth_target, delta, Seed(0));
            moser_tardos_sparsify(g, &params).ok().and_then(|out| {
                let audit = verify_theorem2_inequality(g, &out.h, delta, params.s_max).ok()?;
                Some(Theorem4Run {
                    girth: out.girth,
                    girth_certified: out.certified.girth_certified,
                    boundary_audit_pass: audit.pass,
                })
            })
        }
        _ => None,
    };
    Theorem4Check {
        lambda2: l2,
        spectral_condition,
        size_condition,
        applicable,
        delta,
        predicted_h_lower: theorem4_predicted_h_lower(d, l2),
        strong_regime: l2 >= 1.0 - 1.0 / (192.0 * ln_term),
        strong_guarantee_stated: 0.99 * ln_term,
        strong_guarantee_alt: 0.99 * ((d as f64).ln() + 4.0),
        run,
    }
}

/// `diam(H) / girth(H)`.
pub fn diameter_girth_ratio(h: &Graph) -> Result<f64> {
    let diam = diameter(h).ok_or(Error::Disconnected)?;
    let gi = girth(h).ok_or_else(|| Error::InvalidParameter("graph is acyclic".into()))?;
    Ok(diam as f64 / gi as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, Fixture};

    #[test]
    fn exact_cheeger_small() {
        let k4 = cheeger_exact(&fixture(Fixture::Complete(4))).unwrap();
        assert_eq!(k4.value, 2.0);
        assert_eq!(k4.witness.unwrap().len(), 2);
        let c4 = cheeger_exact(&fixture(Fixture::Cycle(4))).unwrap();
        assert_eq!(c4.value, 1.0);
        let p = cheeger_exact(&fixture(Fixture::Petersen)).unwrap();
        assert_eq!(p.value, 1.0);
        let w = p.witness.unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(
            crate::graph::edge_boundary(&fixture(Fixture::Petersen), &w),
            5
        );
    }

    #[test]
    fn exact_cheeger_cap() {
        assert!(cheeger_exact(&fixture(Fixture::Cycle(25))).is_err());
    }

    #[test]
    fn sweep_is_upper_bound() {
        for g in [
            fixture(Fixture::Petersen),
            fixture(Fixture::Cycle(12)),
            fixture(Fixture::Complete(6)),
        ] {
            let e = cheeger_exact(&g).unwrap().value;
            let s = cheeger_sweep(&g).unwrap();
            assert!(s.value >= e - 1e-12);
            assert_eq!(s.mode, CheegerMode::SweepBound);
        }
        let c100 = cheeger_sweep(&fixture(Fixture::Cycle(100))).unwrap();
        assert!((c100.value - 2.0 / 50.0).abs() < 1e-12);
    }

    #[test]
    fn host_passes_own_inequality() {
        let g = fixture(Fixture::Petersen);
        for delta in [0.5, 1.5, 3.0] {
            assert!(verify_theorem2_inequality(&g, &g, delta, 6).unwrap().pass);
        }
    }

    #[test]
    fn isolated_vertex_is_worst() {
        let g = fixture(Fixture::Petersen);
        let h = g.spanning_subgraph(|e| {
            let (u, v) = g.edge(e);
            u != 4 && v != 4
        });
        let audit = verify_theorem2_inequality(&g, &h, 20.0, 6).unwrap();
        assert!(!audit.pass);
        let worst = audit.worst.unwrap();
        let singleton = -(20.0 / 6.0 * 3.0 - (2.0 * 3f64.ln() + 4.0));
        assert!(worst.slack <= singleton);
        let bh = crate::graph::edge_boundary(&h, &worst.set) as f64;
        let bg = crate::graph::edge_boundary(&g, &worst.set) as f64;
        let rhs = 20.0 / 6.0 * bg - (2.0 * 3f64.ln() + 4.0) * worst.set.len() as f64;
        assert!((worst.slack - (bh - rhs)).abs() < 1e-9);
    }

    #[test]
    fn edgeless_passes_vacuously_for_small_delta() {
        let g = fixture(Fixture::Petersen);
        let h = g.spanning_subgraph(|_| false);
        let audit = verify_theorem2_inequality(&g, &h, 4.0, 6).unwrap();
        assert!(audit.pass);
        assert_eq!(audit.substantive_checks, 0);
        assert_eq!(audit.vacuous_checks, 1023);
    }

    #[test]
    fn non_subgraph_rejected() {
        let g = fixture(Fixture::Cycle(5));
        let h = fixture(Fixture::Complete(5));
        assert!(matches!(
            verify_theorem2_inequality(&g, &h, 1.0, 3),
            Err(Error::NotSpanningSubgraph(_))
        ));
    }

    #[test]
    fn corollary3_vacuous_for_cubic() {
        let g = fixture(Fixture::Petersen);
        let c = verify_corollary3(&g, &g, 1.5).unwrap();
        assert!(!c.hypothesis_met && c.pass && c.vacuous);
        assert!((c.required_h_g - 16.0 * (3f64.ln() + 2.0)).abs() < 1e-12);
        let forced = corollary3_from_values(3.0, 1e6, 1.0, 1e5);
        assert!(forced.hypothesis_met && forced.pass && !forced.vacuous);
    }

    #[test]
    fn theorem4_inapplicable_on_petersen() {
        let t = verify_theorem4(&fixture(Fixture::Petersen), 5).unwrap();
        assert!(!t.applicable && !t.spectral_condition);
        assert!((t.delta.unwrap() - 3.0 / 16.0).abs() < 1e-9);
        assert!(t.run.is_none());
    }

    #[test]
    fn theorem4_formula() {
        let l = 1.0 - 1.0 / 192.0;
        let d = 7;
        let p = theorem4_predicted_h_lower(d, l).unwrap();
        assert!((p - (3.0 * l - 2.0 * 7f64.ln() - 4.0)).abs() < 1e-9);
        for d in [3usize, 8, 64, 1000] {
            let ln_term = (d as f64).ln() + 2.0;
            let l = 1.0 - 1.0 / (192.0 * ln_term);
            assert!(theorem4_predicted_h_lower(d, l).unwrap() >= 0.99 * ln_term);
        }
    }

    #[test]
    fn ratios() {
        assert!((diameter_girth_ratio(&fixture(Fixture::Petersen)).unwrap() - 0.4).abs() < 1e-15);
        assert!(
            (diameter_girth_ratio(&fixture(Fixture::Complete(4))).unwrap() - 1.0 / 3.0).abs()
                < 1e-15
        );
        assert_eq!(
            diameter_girth_ratio(&fixture(Fixture::Cycle(9))).unwrap(),
            4.0 / 9.0
        );
        assert!(diameter_girth_ratio(&fixture(Fixture::Path(4))).is_err());
    }
}
