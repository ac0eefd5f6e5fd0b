//! Simple-cycle enumeration, the cycle catalog and instance statistics.
//!
//! Cycles are found by depth-first search from each anchor vertex, visiting
//! only vertices larger than the anchor, so every cycle is produced exactly
//! once and already in canonical rotation.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

use crate::bound::Bound;
use crate::error::{Error, Result};
use crate::model::{segments_of, Country, Cycle, GammaParams, Instance, VertexId};
use crate::vertex_set::VertexSet;
use crate::Config;

/// Which cycles an enumeration keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    Any,
    National,
    International,
}

/// All simple cycles on `allowed` with length at most `length_cap` and of the
/// requested kind, sorted canonically.
pub fn enumerate_cycles(
    inst: &Instance,
    allowed: &VertexSet,
    length_cap: usize,
    kind: CycleKind,
    cfg: &Config,
) -> Result<Vec<Cycle>> {
    let nv = inst.vertex_count();
    if length_cap < 2 || allowed.len() < 2 {
        return Ok(Vec::new());
    }
    let emitted = AtomicUsize::new(0);
    let anchors: Vec<usize> = allowed.iter().collect();
    let per_anchor = cfg.execution.map(&anchors, |&s| {
        let mut search = AnchorSearch {
            inst,
            allowed,
            anchor: VertexId::from(s),
            cap: length_cap,
            kind,
            path: vec![VertexId::from(s)],
            on_path: VertexSet::new(nv),
            out: Vec::new(),
            emitted: &emitted,
            limit: cfg.max_cycles,
        };
        search.on_path.insert(s);
        search.extend().map(|()| search.out)
    });
    let mut all = Vec::new();
    for cycles in per_anchor {
        all.extend(cycles?);
    }
    if all.len() > cfg.max_cycles {
        return Err(Error::EnumerationOverflow { limit: cfg.max_cycles });
    }
    all.sort();
    Ok(all)
}

struct AnchorSearch<'a> {
    inst: &'a Instance,
    allowed: &'a VertexSet,
    anchor: VertexId,
    cap: usize,
    kind: CycleKind,
    path: Vec<VertexId>,
    on_path: VertexSet,
    out: Vec<Cycle>,
    emitted: &'a AtomicUsize,
    limit: usize,
}

impl AnchorSearch<'_> {
    fn extend(&mut self) -> Result<()> {
        let last = *self.path.last().unwrap();
        for &next in self.inst.successors(last) {
            if next == self.anchor {
                if self.path.len() >= 2 && self.keeps() {
                    if self.emitted.fetch_add(1, Ordering::Relaxed) >= self.limit {
                        return Err(Error::EnumerationOverflow { limit: self.limit });
                    }
                    self.out.push(Cycle::from_canonical(self.path.clone()));
                }
                continue;
            }
            if next < self.anchor
                || self.path.len() >= self.cap
                || !self.allowed.contains(next.index())
                || self.on_path.contains(next.index())
            {
                continue;
            }
            if self.kind == CycleKind::National
                && self.inst.country(next) != self.inst.country(self.anchor)
            {
                continue;
            }
            self.path.push(next);
            self.on_path.insert(next.index());
            self.extend()?;
            self.on_path.remove(next.index());
            self.path.pop();
        }
        Ok(())
    }

    fn keeps(&self) -> bool {
        let c0 = self.inst.country(self.anchor);
        let national = self.path.iter().all(|&v| self.inst.country(v) == c0);
        match self.kind {
            CycleKind::Any => true,
            CycleKind::National => national,
            CycleKind::International => !national,
        }
    }
}

/// International cycles (at least one international arc) of length at most
/// `length_cap`; an unbounded cap means any length.
pub fn enumerate_international_cycles(inst: &Instance, length_cap: Bound, cfg: &Config) -> Result<Vec<Cycle>> {
    let all = inst.all_vertices();
    enumerate_cycles(inst, &all, length_cap.or_cap(inst.vertex_count()), CycleKind::International, cfg)
}

/// National Γ-cycles of one country inside `allowed`.
pub fn national_gamma_cycles(
    inst: &Instance,
    country: Country,
    allowed: &VertexSet,
    cfg: &Config,
) -> Result<Vec<Cycle>> {
    let members = inst.country_members(country);
    let cap = inst.gamma().ncl[country].or_cap(members.len());
    let inside = VertexSet::from_indices(
        inst.vertex_count(),
        members.into_iter().map(VertexId::index).filter(|&v| allowed.contains(v)),
    );
    enumerate_cycles(inst, &inside, cap, CycleKind::National, cfg)
}

/// Cycles of an instance grouped the way the solvers and mechanisms use them.
///
/// `international_all` is the set of international cycles of length at most
/// `icl`, whether or not they satisfy the segment limits; `is_gamma` marks the
/// ones that do. `intersection_index[k]` lists the members of
/// `international_all` sharing a vertex with member `k`, including `k`.
#[derive(Clone, Debug, Serialize)]
pub struct CycleCatalog {
    pub national_gamma: Vec<Vec<Cycle>>,
    pub international_all: Vec<Cycle>,
    pub is_gamma: Vec<bool>,
    pub intersection_index: Vec<Vec<usize>>,
    #[serde(skip)]
    vertex_sets: Vec<VertexSet>,
}

impl CycleCatalog {
    /// Catalog restricted to the subgraph induced by `allowed`.
    pub fn build_on(inst: &Instance, allowed: &VertexSet, cfg: &Config) -> Result<CycleCatalog> {
        let nv = inst.vertex_count();
        let mut national_gamma = Vec::with_capacity(inst.country_count());
        for country in 0..inst.country_count() {
            national_gamma.push(national_gamma_cycles(inst, country, allowed, cfg)?);
        }
        let icl_cap = inst.gamma().icl.or_cap(allowed.len());
        let international_all = enumerate_cycles(inst, allowed, icl_cap, CycleKind::International, cfg)?;
        let vertex_sets: Vec<VertexSet> = international_all.iter().map(|c| c.vertex_set(nv)).collect();
        let intersection_index = cfg.execution.map_range(vertex_sets.len(), |k| {
            (0..vertex_sets.len())
                .filter(|&j| !vertex_sets[k].is_disjoint(&vertex_sets[j]))
                .collect()
        });
        let is_gamma = international_all.iter().map(|c| inst.is_gamma_cycle(c)).collect();
        Ok(CycleCatalog { national_gamma, international_all, is_gamma, intersection_index, vertex_sets })
    }

    pub fn build(inst: &Instance, cfg: &Config) -> Result<CycleCatalog> {
        Self::build_on(inst, &inst.all_vertices(), cfg)
    }

    /// Same cycles judged under other segment limits. `icl` and `ncl` must
    /// match the parameters the catalog was built with.
    pub fn regamma(&self, inst: &Instance, gamma: &GammaParams) -> Result<CycleCatalog> {
        if gamma.icl != inst.gamma().icl || gamma.ncl != inst.gamma().ncl {
            return Err(Error::Precondition(
                "regamma only changes segment limits; rebuild the catalog for new icl or ncl".into(),
            ));
        }
        let mut out = self.clone();
        out.is_gamma = self.international_all.iter().map(|c| gamma.admits(c, inst.country_of())).collect();
        Ok(out)
    }

    pub fn vertex_set(&self, k: usize) -> &VertexSet {
        &self.vertex_sets[k]
    }

    pub fn international_gamma(&self) -> Vec<&Cycle> {
        self.international_all
            .iter()
            .zip(&self.is_gamma)
            .filter_map(|(c, &g)| g.then_some(c))
            .collect()
    }

    /// Every Γ-cycle: national ones per country, then international ones.
    pub fn gamma_cycles(&self) -> Vec<Cycle> {
        let mut out: Vec<Cycle> = self.national_gamma.iter().flatten().cloned().collect();
        out.extend(self.international_gamma().into_iter().cloned());
        out.sort();
        out
    }

    pub fn position(&self, cycle: &Cycle) -> Option<usize> {
        self.international_all.binary_search(cycle).ok()
    }

    /// Indices of the substitutes of member `k`: international Γ-cycles whose
    /// vertices lie inside member `k` and that have at most
    /// `max_segments_per_country` segments of every country.
    pub fn substitute_indices(&self, inst: &Instance, k: usize, max_segments_per_country: usize) -> Vec<usize> {
        let host = &self.vertex_sets[k];
        (0..self.international_all.len())
            .filter(|&j| j != k && self.is_gamma[j] && self.vertex_sets[j].is_subset(host))
            .filter(|&j| within_segment_count(inst, &self.international_all[j], max_segments_per_country))
            .collect()
    }
}

fn within_segment_count(inst: &Instance, cycle: &Cycle, max_segments: usize) -> bool {
    let mut counts = vec![0usize; inst.country_count()];
    for s in segments_of(cycle, inst.country_of()) {
        counts[s.country] += 1;
    }
    counts.iter().all(|&c| c <= max_segments)
}

/// Substitutes of a non-Γ international cycle under the shipping rule (at
/// most one segment per country).
pub fn substitutes(cycle: &Cycle, inst: &Instance, cfg: &Config) -> Result<Vec<Cycle>> {
    substitutes_with_rule(cycle, inst, 1, cfg)
}

pub fn substitutes_with_rule(
    cycle: &Cycle,
    inst: &Instance,
    max_segments_per_country: usize,
    cfg: &Config,
) -> Result<Vec<Cycle>> {
    inst.check_cycle(cycle)?;
    if !cycle.is_international(inst.country_of()) {
        return Ok(Vec::new());
    }
    let host = cycle.vertex_set(inst.vertex_count());
    let inside = enumerate_cycles(inst, &host, cycle.len(), CycleKind::International, cfg)?;
    Ok(inside
        .into_iter()
        .filter(|d| d != cycle && inst.is_gamma_cycle(d))
        .filter(|d| within_segment_count(inst, d, max_segments_per_country))
        .collect())
}

/// Largest national and international Γ-cycle lengths and the largest number
/// of international Γ-cycles meeting a single one (itself included).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InstanceStats {
    pub c_nat: usize,
    pub c_int: usize,
    pub d_star: usize,
}

impl InstanceStats {
    pub fn from_catalog(catalog: &CycleCatalog) -> InstanceStats {
        let c_nat = catalog.national_gamma.iter().flatten().map(Cycle::len).max().unwrap_or(0);
        let gamma: Vec<usize> = (0..catalog.international_all.len()).filter(|&k| catalog.is_gamma[k]).collect();
        let c_int = gamma.iter().map(|&k| catalog.international_all[k].len()).max().unwrap_or(0);
        let d_star = gamma
            .iter()
            .map(|&k| catalog.intersection_index[k].iter().filter(|&&j| catalog.is_gamma[j]).count())
            .max()
            .unwrap_or(0);
        InstanceStats { c_nat, c_int, d_star }
    }

    /// `max(c_int, d*, 1)`.
    pub fn approximation_bound(&self) -> usize {
        self.c_int.max(self.d_star).max(1)
    }
}

pub fn instance_stats(inst: &Instance, cfg: &Config) -> Result<InstanceStats> {
    Ok(InstanceStats::from_catalog(&CycleCatalog::build(inst, cfg)?))
}
