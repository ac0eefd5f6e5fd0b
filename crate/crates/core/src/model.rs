//! Partitioned compatibility graphs, country parameters, cycles and packings.
//!
//! A vertex is a recipient-donor pair; an arc `(u, v)` means the donor of `u`
//! can give to the recipient of `v`. Every vertex belongs to one country.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bound::Bound;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub type Country = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Country-specific limits: international cycle length, national cycle
/// length per country, and per-country segment size and segment count inside
/// international cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GammaParams {
    pub n: usize,
    pub icl: Bound,
    pub ncl: Vec<Bound>,
    pub iss: Vec<Bound>,
    pub isn: Vec<Bound>,
}

#[derive(Deserialize)]
struct GammaRepr {
    n: Option<usize>,
    icl: Option<Bound>,
    ncl: Vec<Bound>,
    iss: Option<Vec<Bound>>,
    isn: Option<Vec<Bound>>,
}

impl<'de> Deserialize<'de> for GammaParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GammaRepr::deserialize(d)?;
        let n = r.n.unwrap_or(r.ncl.len());
        Ok(GammaParams {
            n,
            icl: r.icl.unwrap_or(Bound::Unbounded),
            iss: r.iss.unwrap_or_else(|| vec![Bound::Unbounded; n]),
            isn: r.isn.unwrap_or_else(|| vec![Bound::Unbounded; n]),
            ncl: r.ncl,
        })
    }
}

impl GammaParams {
    /// Builds and validates parameters.
    pub fn new(icl: Bound, ncl: Vec<Bound>, iss: Vec<Bound>, isn: Vec<Bound>) -> Result<Self> {
        let g = GammaParams { n: ncl.len(), icl, ncl, iss, isn };
        g.validate()?;
        Ok(g)
    }

    /// Same value for every country.
    pub fn uniform(n: usize, icl: Bound, ncl: Bound, iss: Bound, isn: Bound) -> Result<Self> {
        Self::new(icl, vec![ncl; n], vec![iss; n], vec![isn; n])
    }

    /// Shape checks only: vector lengths and no length-one cycle limits.
    pub fn validate_structure(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidGamma("at least one country is required".into()));
        }
        for (name, v) in [("ncl", &self.ncl), ("iss", &self.iss), ("isn", &self.isn)] {
            if v.len() != self.n {
                return Err(Error::InvalidGamma(format!(
                    "{name} has length {}, expected {}",
                    v.len(),
                    self.n
                )));
            }
        }
        if self.icl == 1 {
            return Err(Error::InvalidGamma("icl must not be 1".into()));
        }
        if let Some(i) = self.ncl.iter().position(|&b| b == 1) {
            return Err(Error::InvalidGamma(format!("ncl[{i}] must not be 1")));
        }
        Ok(())
    }

    /// Full validation: also requires every country to accept international
    /// segments (`iss_i >= 1`, `isn_i >= 1`).
    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        for (name, v) in [("iss", &self.iss), ("isn", &self.isn)] {
            if let Some(i) = v.iter().position(|&b| b == 0) {
                return Err(Error::InvalidGamma(format!("{name}[{i}] must be at least 1")));
            }
        }
        Ok(())
    }

    /// Reason `cycle` is not feasible under these parameters, if any.
    ///
    /// Conditions are checked in order: length, segment size, segment count.
    pub fn violation(&self, cycle: &Cycle, country_of: &[Country]) -> Option<GammaViolation> {
        let len = cycle.len();
        let first = country_of[cycle.vertices()[0].index()];
        if cycle.vertices().iter().all(|v| country_of[v.index()] == first) {
            let limit = self.ncl[first];
            return (!limit.admits(len)).then_some(GammaViolation::NationalLength {
                country: first,
                length: len,
                limit,
            });
        }
        if !self.icl.admits(len) {
            return Some(GammaViolation::InternationalLength { length: len, limit: self.icl });
        }
        let segments = segments_of(cycle, country_of);
        for s in &segments {
            if !self.iss[s.country].admits(s.size) {
                return Some(GammaViolation::SegmentSize {
                    country: s.country,
                    size: s.size,
                    limit: self.iss[s.country],
                });
            }
        }
        let mut counts = vec![0usize; self.n];
        for s in &segments {
            counts[s.country] += 1;
        }
        for (country, &count) in counts.iter().enumerate() {
            if !self.isn[country].admits(count) {
                return Some(GammaViolation::SegmentCount {
                    country,
                    count,
                    limit: self.isn[country],
                });
            }
        }
        None
    }

    pub fn admits(&self, cycle: &Cycle, country_of: &[Country]) -> bool {
        self.violation(cycle, country_of).is_none()
    }
}

/// First failed feasibility condition of a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaViolation {
    NationalLength { country: Country, length: usize, limit: Bound },
    InternationalLength { length: usize, limit: Bound },
    SegmentSize { country: Country, size: usize, limit: Bound },
    SegmentCount { country: Country, count: usize, limit: Bound },
}

impl fmt::Display for GammaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaViolation::NationalLength { country, length, limit } => {
                write!(f, "national cycle of country {country} has length {length} > ncl {limit}")
            }
            GammaViolation::InternationalLength { length, limit } => {
                write!(f, "international cycle has length {length} > icl {limit}")
            }
            GammaViolation::SegmentSize { country, size, limit } => {
                write!(f, "segment of country {country} has size {size} > iss {limit}")
            }
            GammaViolation::SegmentCount { country, count, limit } => {
                write!(f, "country {country} has {count} segments > isn {limit}")
            }
        }
    }
}

/// Directed cycle stored in canonical rotation (smallest vertex first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<VertexId>);

impl Cycle {
    /// Rotates `seq` so that it starts at its smallest vertex.
    pub fn canonicalize(seq: &[VertexId]) -> Result<Cycle> {
        if seq.len() < 2 {
            return Err(Error::InvalidCycle(format!(
                "a cycle needs at least 2 vertices, got {}",
                seq.len()
            )));
        }
        let distinct: BTreeSet<_> = seq.iter().collect();
        if distinct.len() != seq.len() {
            return Err(Error::InvalidCycle("repeated vertex".into()));
        }
        let (start, _) = seq.iter().enumerate().min_by_key(|(_, v)| **v).unwrap();
        let mut out = Vec::with_capacity(seq.len());
        out.extend_from_slice(&seq[start..]);
        out.extend_from_slice(&seq[..start]);
        Ok(Cycle(out))
    }

    pub fn from_indices(seq: &[usize]) -> Result<Cycle> {
        let v: Vec<VertexId> = seq.iter().map(|&i| VertexId::from(i)).collect();
        Self::canonicalize(&v)
    }

    /// Caller guarantees `seq` is already canonical and duplicate-free.
    pub(crate) fn from_canonical(seq: Vec<VertexId>) -> Cycle {
        debug_assert!(seq.len() >= 2 && seq.iter().all(|v| *v >= seq[0]));
        Cycle(seq)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of arcs, which equals the number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn vertex_set(&self, capacity: usize) -> VertexSet {
        VertexSet::from_indices(capacity, self.0.iter().map(|v| v.index()))
    }

    pub fn is_international(&self, country_of: &[Country]) -> bool {
        let c0 = country_of[self.0[0].index()];
        self.0.iter().any(|v| country_of[v.index()] != c0)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(">")
    }
}

/// Maximal run of same-country vertices along a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub country: Country,
    pub size: usize,
}

pub(crate) fn segments_of(cycle: &Cycle, country_of: &[Country]) -> Vec<Segment> {
    let mut runs: Vec<Segment> = Vec::new();
    for v in cycle.vertices() {
        let c = country_of[v.index()];
        match runs.last_mut() {
            Some(last) if last.country == c => last.size += 1,
            _ => runs.push(Segment { country: c, size: 1 }),
        }
    }
    if runs.len() > 1 && runs[0].country == runs[runs.len() - 1].country {
        let tail = runs.pop().unwrap();
        runs[0].size += tail.size;
    }
    runs
}

/// Vertex-disjoint set of cycles, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CyclePacking {
    cycles: Vec<Cycle>,
}

impl CyclePacking {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorts the cycles; fails if two of them share a vertex.
    pub fn new(mut cycles: Vec<Cycle>) -> Result<Self> {
        cycles.sort();
        let mut seen = BTreeSet::new();
        for c in &cycles {
            for v in c.vertices() {
                if !seen.insert(*v) {
                    return Err(Error::InvalidCycle(format!(
                        "vertex {v} appears in two cycles of the packing"
                    )));
                }
            }
        }
        Ok(CyclePacking { cycles })
    }

    pub(crate) fn from_disjoint(mut cycles: Vec<Cycle>) -> Self {
        cycles.sort();
        CyclePacking { cycles }
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Total number of arcs (transplants).
    pub fn size(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    pub fn union(&self, other: &CyclePacking) -> Result<CyclePacking> {
        let mut all = self.cycles.clone();
        all.extend(other.cycles.iter().cloned());
        CyclePacking::new(all)
    }

    pub fn covered(&self, capacity: usize) -> VertexSet {
        let mut s = VertexSet::new(capacity);
        for c in &self.cycles {
            for v in c.vertices() {
                s.insert(v.index());
            }
        }
        s
    }
}

impl fmt::Display for CyclePacking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// Partitioned compatibility graph together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    country_of: Vec<Country>,
    arcs: Vec<(VertexId, VertexId)>,
    out: Vec<Vec<VertexId>>,
    adjacency: Vec<VertexSet>,
    gamma: GammaParams,
}

impl Instance {
    /// Validates and builds an instance. Arcs may come in any order; self-loops
    /// and repeated arcs are rejected. Countries without vertices are allowed.
    pub fn new(
        country_of: Vec<Country>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
        gamma: GammaParams,
    ) -> Result<Instance> {
        gamma.validate_structure()?;
        let nv = country_of.len();
        if let Some(v) = country_of.iter().position(|&c| c >= gamma.n) {
            return Err(Error::InvalidInstance(format!(
                "vertex {v} has country {} but there are only {} countries",
                country_of[v], gamma.n
            )));
        }
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            if u >= nv || v >= nv {
                return Err(Error::InvalidInstance(format!("arc ({u},{v}) references a missing vertex")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if !set.insert((VertexId::from(u), VertexId::from(v))) {
                return Err(Error::InvalidInstance(format!("duplicate arc ({u},{v})")));
            }
        }
        let arcs: Vec<_> = set.into_iter().collect();
        let mut out = vec![Vec::new(); nv];
        let mut adjacency = vec![VertexSet::new(nv); nv];
        for &(u, v) in &arcs {
            out[u.index()].push(v);
            adjacency[u.index()].insert(v.index());
        }
        Ok(Instance { country_of, arcs, out, adjacency, gamma })
    }

    pub fn vertex_count(&self) -> usize {
        self.country_of.len()
    }

    pub fn country_count(&self) -> usize {
        self.gamma.n
    }

    pub fn gamma(&self) -> &GammaParams {
        &self.gamma
    }

    pub fn country_of(&self) -> &[Country] {
        &self.country_of
    }

    pub fn country(&self, v: VertexId) -> Country {
        self.country_of[v.index()]
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.out[v.index()]
    }

    #[inline]
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u.index()].contains(v.index())
    }

    pub fn country_members(&self, country: Country) -> Vec<VertexId> {
        (0..self.vertex_count())
            .filter(|&v| self.country_of[v] == country)
            .map(VertexId::from)
            .collect()
    }

    pub fn country_size(&self, country: Country) -> usize {
        self.country_of.iter().filter(|&&c| c == country).count()
    }

    /// Countries that own no vertex.
    pub fn empty_countries(&self) -> Vec<Country> {
        (0..self.gamma.n).filter(|&c| self.country_size(c) == 0).collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    /// Same graph under different parameters.
    pub fn with_gamma(&self, gamma: GammaParams) -> Result<Instance> {
        if gamma.n != self.gamma.n {
            return Err(Error::InvalidGamma(format!(
                "parameters describe {} countries, instance has {}",
                gamma.n, self.gamma.n
            )));
        }
        gamma.validate_structure()?;
        Ok(Instance { gamma, ..self.clone() })
    }

    pub fn check_country(&self, country: Country) -> Result<()> {
        if country >= self.gamma.n {
            return Err(Error::CountryOutOfRange { country, count: self.gamma.n });
        }
        Ok(())
    }

    /// Checks that `cycle` exists in this graph.
    pub fn check_cycle(&self, cycle: &Cycle) -> Result<()> {
        for v in cycle.vertices() {
            if v.index() >= self.vertex_count() {
                return Err(Error::InvalidCycle(format!("vertex {v} is not in the instance")));
            }
        }
        for (u, v) in cycle.arcs() {
            if !self.has_arc(u, v) {
                return Err(Error::InvalidCycle(format!("arc ({u},{v}) is not in the instance")));
            }
        }
        Ok(())
    }

    /// Maximal same-country runs along `cycle`; the run wrapping around the
    /// starting vertex is merged.
    pub fn segment_decomposition(&self, cycle: &Cycle) -> Result<Vec<Segment>> {
        self.check_cycle(cycle)?;
        Ok(segments_of(cycle, &self.country_of))
    }

    pub fn gamma_violation(&self, cycle: &Cycle) -> Option<GammaViolation> {
        self.gamma.violation(cycle, &self.country_of)
    }

    pub fn is_gamma_cycle(&self, cycle: &Cycle) -> bool {
        self.gamma.admits(cycle, &self.country_of)
    }

    /// Transplants received by `country`: arcs of the packing whose head is
    /// one of its vertices.
    pub fn utility(&self, packing: &CyclePacking, country: Country) -> Result<usize> {
        self.check_country(country)?;
        Ok(self.utility_unchecked(packing, country))
    }

    pub(crate) fn utility_unchecked(&self, packing: &CyclePacking, country: Country) -> usize {
        packing
            .cycles()
            .iter()
            .flat_map(|c| c.arcs())
            .filter(|(_, head)| self.country(*head) == country)
            .count()
    }

    pub fn utilities(&self, packing: &CyclePacking) -> Vec<usize> {
        let mut u = vec![0; self.gamma.n];
        for c in packing.cycles() {
            for v in c.vertices() {
                u[self.country(*v)] += 1;
            }
        }
        u
    }

    /// Cycles exist, are pairwise disjoint and each satisfies the parameters.
    pub fn validate_packing(&self, packing: &CyclePacking) -> Result<()> {
        let mut used = VertexSet::new(self.vertex_count());
        for c in packing.cycles() {
            self.check_cycle(c)?;
            if let Some(v) = self.gamma_violation(c) {
                return Err(Error::InvalidCycle(format!("{c}: {v}")));
            }
            for v in c.vertices() {
                if used.contains(v.index()) {
                    return Err(Error::InvalidCycle(format!("vertex {v} is covered twice")));
                }
                used.insert(v.index());
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    id: usize,
    country: Country,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    n: usize,
    vertices: Vec<VertexRepr>,
    arcs: Vec<[usize; 2]>,
    gamma: GammaParams,
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceRepr {
            n: self.gamma.n,
            vertices: self
                .country_of
                .iter()
                .enumerate()
                .map(|(id, &country)| VertexRepr { id, country })
                .collect(),
            arcs: self.arcs.iter().map(|(u, v)| [u.index(), v.index()]).collect(),
            gamma: self.gamma.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = InstanceRepr::deserialize(d)?;
        if r.gamma.n != r.n {
            return Err(D::Error::custom(format!(
                "n = {} but gamma describes {} countries",
                r.n, r.gamma.n
            )));
        }
        let mut country_of = vec![usize::MAX; r.vertices.len()];
        for v in &r.vertices {
            if v.id >= country_of.len() || country_of[v.id] != usize::MAX {
                return Err(D::Error::custom(format!(
                    "vertex ids must be exactly 0..{} (bad id {})",
                    r.vertices.len(),
                    v.id
                )));
            }
            country_of[v.id] = v.country;
        }
        Instance::new(country_of, r.arcs.iter().map(|a| (a[0], a[1])), r.gamma)
            .map_err(D::Error::custom)
    }
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }
}
