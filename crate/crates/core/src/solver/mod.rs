//! Maximum Γ-cycle packing: exact search, exhaustive oracle, complexity
//! classification of parameter tuples and the polynomial special cases.

mod blossom;
mod classify;
mod exact;
mod hungarian;

use serde::Serialize;

pub use blossom::maximum_matching;
pub use classify::{classify_gamma, DichotomyCase, Verdict};
pub use hungarian::min_cost_assignment;

use crate::bound::Bound;
use crate::enumeration::{national_gamma_cycles, CycleCatalog};
use crate::error::{Error, Result};
use crate::model::{Country, Cycle, CyclePacking, Instance, VertexId};
use crate::vertex_set::VertexSet;
use crate::Config;
use exact::PackingSearch;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Exact,
    BruteForce,
    MatchingTwoCycles,
    UnboundedCycleCover,
    /// Countries solved independently (no international cycles allowed),
    /// each by matching or cycle cover.
    NationalDecomposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub packing: CyclePacking,
    pub opt_value: usize,
    pub method: SolveMethod,
    pub node_count: u64,
}

/// Maximum packing built from `cycles` (sorted, distinct, pairwise
/// feasible), the lexicographically smallest one among ties.
pub fn max_packing_of(cycles: &[Cycle], vertex_count: usize, cfg: &Config) -> Result<SolveResult> {
    let mut search = PackingSearch::new(cycles, vertex_count, cfg.max_search_nodes);
    let opt = search.optimum()?;
    let chosen = search.smallest_reaching(opt)?;
    let packing = CyclePacking::from_disjoint(chosen.into_iter().map(|j| cycles[j].clone()).collect());
    Ok(SolveResult { opt_value: opt, packing, method: SolveMethod::Exact, node_count: search.nodes() })
}

/// Exact maximum Γ-cycle packing with canonical tie-breaking.
pub fn max_gamma_packing_exact(inst: &Instance, cfg: &Config) -> Result<SolveResult> {
    let catalog = CycleCatalog::build(inst, cfg)?;
    max_packing_of(&catalog.gamma_cycles(), inst.vertex_count(), cfg)
}

/// Canonical maximum packing of `G[V_country]` under `ncl_country`.
pub fn max_national_packing(inst: &Instance, country: Country, cfg: &Config) -> Result<SolveResult> {
    inst.check_country(country)?;
    let cycles = national_gamma_cycles(inst, country, &inst.all_vertices(), cfg)?;
    max_packing_of(&cycles, inst.vertex_count(), cfg)
}

/// All maximum packings built from `cycles`, at most `limit` of them.
pub fn all_maximum_packings(
    cycles: &[Cycle],
    vertex_count: usize,
    limit: usize,
    cfg: &Config,
) -> Result<Vec<CyclePacking>> {
    let mut search = PackingSearch::new(cycles, vertex_count, cfg.max_search_nodes);
    let opt = search.optimum()?;
    Ok(search
        .all_reaching(opt, limit)?
        .into_iter()
        .map(|idx| CyclePacking::from_disjoint(idx.into_iter().map(|j| cycles[j].clone()).collect()))
        .collect())
}

pub const BRUTE_FORCE_CAP: usize = 20;

/// Tries every subset of Γ-cycles. Test oracle; at most 20 Γ-cycles.
pub fn brute_force_opt(inst: &Instance, cfg: &Config) -> Result<SolveResult> {
    let cycles = CycleCatalog::build(inst, cfg)?.gamma_cycles();
    let k = cycles.len();
    if k > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap { found: k, cap: BRUTE_FORCE_CAP });
    }
    let sets: Vec<VertexSet> = cycles.iter().map(|c| c.vertex_set(inst.vertex_count())).collect();
    let conflict: Vec<u32> = (0..k)
        .map(|a| (0..k).filter(|&b| b != a && !sets[a].is_disjoint(&sets[b])).fold(0, |m, b| m | 1 << b))
        .collect();
    let mut valid = vec![false; 1 << k];
    let mut weight = vec![0usize; 1 << k];
    valid[0] = true;
    let mut best_mask = 0usize;
    let as_list = |m: usize| (0..k).filter(|b| m >> b & 1 == 1).collect::<Vec<_>>();
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if !valid[rest] || conflict[low] as usize & rest != 0 {
            continue;
        }
        valid[mask] = true;
        weight[mask] = weight[rest] + cycles[low].len();
        if weight[mask] > weight[best_mask]
            || (weight[mask] == weight[best_mask] && as_list(mask) < as_list(best_mask))
        {
            best_mask = mask;
        }
    }
    let packing = CyclePacking::from_disjoint(as_list(best_mask).into_iter().map(|j| cycles[j].clone()).collect());
    Ok(SolveResult {
        opt_value: weight[best_mask],
        packing,
        method: SolveMethod::BruteForce,
        node_count: 1 << k,
    })
}

fn in_0_2(b: Bound) -> bool {
    b == 0 || b == 2
}

/// Whether every Γ-cycle of instances with these parameters has length 2.
fn two_cycle_case(inst: &Instance) -> bool {
    let g = inst.gamma();
    match classify_gamma(g).verdict {
        Verdict::Poly(1) | Verdict::Poly(2) => g.ncl.iter().all(|&b| in_0_2(b)),
        Verdict::Poly(3..=5) => true,
        _ => false,
    }
}

/// Cycle-cover parameters: every Γ-cycle uses only admissible arcs and every
/// cycle on admissible arcs is a Γ-cycle.
fn cover_case(inst: &Instance) -> bool {
    let g = inst.gamma();
    match classify_gamma(g).verdict {
        Verdict::Poly(1) => g.ncl[0].is_unbounded(),
        Verdict::Poly(2) => g.ncl.iter().all(|&b| b == 0 || b.is_unbounded()),
        Verdict::Poly(6) | Verdict::Poly(7) => true,
        _ => false,
    }
}

fn pairwise_packing(inst: &Instance, keep: impl Fn(VertexId, VertexId) -> bool) -> Vec<Cycle> {
    let mut edges = Vec::new();
    for &(u, v) in inst.arcs() {
        if u < v && inst.has_arc(v, u) && keep(u, v) {
            let c = Cycle::from_canonical(vec![u, v]);
            if inst.is_gamma_cycle(&c) {
                edges.push((u.index(), v.index()));
            }
        }
    }
    maximum_matching(inst.vertex_count(), &edges)
        .into_iter()
        .map(|(u, v)| Cycle::from_canonical(vec![VertexId::from(u), VertexId::from(v)]))
        .collect()
}

/// Vertex-disjoint cycles on admissible arcs covering as many vertices as
/// possible: assignment with cost -1 per admissible arc and 0 for staying put.
fn cover_packing(inst: &Instance, admissible: impl Fn(VertexId, VertexId) -> bool) -> Vec<Cycle> {
    let nv = inst.vertex_count();
    let blocked = nv as i64 + 1;
    let mut cost = vec![vec![blocked; nv]; nv];
    for (u, row) in cost.iter_mut().enumerate() {
        row[u] = 0;
    }
    for &(u, v) in inst.arcs() {
        if admissible(u, v) {
            cost[u.index()][v.index()] = -1;
        }
    }
    let next = min_cost_assignment(&cost);
    let mut seen = vec![false; nv];
    let mut cycles = Vec::new();
    for start in 0..nv {
        if seen[start] || next[start] == start {
            continue;
        }
        let mut seq = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            seq.push(VertexId::from(v));
            v = next[v];
        }
        cycles.push(Cycle::canonicalize(&seq).expect("assignment cycles are simple"));
    }
    cycles
}

fn result(inst: &Instance, cycles: Vec<Cycle>, method: SolveMethod) -> SolveResult {
    let packing = CyclePacking::from_disjoint(cycles);
    debug_assert!(inst.validate_packing(&packing).is_ok());
    SolveResult { opt_value: packing.size(), packing, method, node_count: 0 }
}

/// Maximum matching on the graph of Γ 2-cycles. Requires parameters under
/// which no longer Γ-cycle exists.
pub fn solve_poly_two_cycles(inst: &Instance) -> Result<SolveResult> {
    if !two_cycle_case(inst) {
        return Err(Error::Precondition(format!(
            "parameters allow Γ-cycles longer than 2 ({})",
            classify_gamma(inst.gamma()).verdict
        )));
    }
    Ok(result(inst, pairwise_packing(inst, |_, _| true), SolveMethod::MatchingTwoCycles))
}

/// Cycle cover through an assignment problem. Requires parameters where
/// cycle length and segments are unrestricted on the admissible arcs.
pub fn solve_poly_unbounded(inst: &Instance) -> Result<SolveResult> {
    if !cover_case(inst) {
        return Err(Error::Precondition(format!(
            "parameters are not an unbounded cycle-cover case ({})",
            classify_gamma(inst.gamma()).verdict
        )));
    }
    let g = inst.gamma();
    let cycles = cover_packing(inst, |u, v| {
        let (cu, cv) = (inst.country(u), inst.country(v));
        if cu == cv {
            g.ncl[cu].is_unbounded()
        } else {
            g.icl.is_unbounded()
        }
    });
    Ok(result(inst, cycles, SolveMethod::UnboundedCycleCover))
}

/// Routes polynomial parameter tuples to their solver and everything else to
/// the exact search.
pub fn solve_auto(inst: &Instance, cfg: &Config) -> Result<SolveResult> {
    let g = inst.gamma();
    if two_cycle_case(inst) {
        return solve_poly_two_cycles(inst);
    }
    if cover_case(inst) {
        return solve_poly_unbounded(inst);
    }
    if classify_gamma(g).verdict == Verdict::Poly(2) {
        // Mixed national limits with no international cycles: countries with
        // ncl = 2 use matching, countries with unbounded ncl use cycle cover.
        let mut cycles = pairwise_packing(inst, |u, _| g.ncl[inst.country(u)] == 2);
        cycles.extend(cover_packing(inst, |u, v| {
            inst.country(u) == inst.country(v) && g.ncl[inst.country(u)].is_unbounded()
        }));
        return Ok(result(inst, cycles, SolveMethod::NationalDecomposition));
    }
    max_gamma_packing_exact(inst, cfg)
}
