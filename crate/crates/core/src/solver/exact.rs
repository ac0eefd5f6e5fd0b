//! Maximum-weight independent set over the conflict graph of cycles.
//!
//! Nodes are cycles weighted by length; two cycles conflict when they share a
//! vertex. The first pass finds the optimum value with branch-and-bound, the
//! second finds the lexicographically smallest sorted cycle list reaching it.

use crate::error::{Error, Result};
use crate::model::Cycle;
use crate::vertex_set::VertexSet;

pub(crate) struct PackingSearch<'a> {
    cycles: &'a [Cycle],
    sets: Vec<VertexSet>,
    nv: usize,
    nodes: u64,
    node_limit: u64,
}

impl<'a> PackingSearch<'a> {
    /// `cycles` must be sorted canonically and free of duplicates.
    pub(crate) fn new(cycles: &'a [Cycle], nv: usize, node_limit: u64) -> Self {
        debug_assert!(cycles.windows(2).all(|w| w[0] < w[1]));
        let sets = cycles.iter().map(|c| c.vertex_set(nv)).collect();
        PackingSearch { cycles, sets, nv, nodes: 0, node_limit }
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::SearchBudgetExceeded { limit: self.node_limit });
        }
        Ok(())
    }

    /// Sum of remaining compatible lengths, capped by how many uncovered
    /// vertices those cycles touch.
    fn upper_bound(&self, order: &[usize], used: &VertexSet) -> usize {
        let mut sum = 0;
        let mut touched = VertexSet::new(self.nv);
        for &j in order {
            if self.sets[j].is_disjoint(used) {
                sum += self.cycles[j].len();
                touched.union_with(&self.sets[j]);
            }
        }
        sum.min(touched.len())
    }

    /// Optimum packing size.
    pub(crate) fn optimum(&mut self) -> Result<usize> {
        let mut order: Vec<usize> = (0..self.cycles.len()).collect();
        order.sort_by(|&a, &b| self.cycles[b].len().cmp(&self.cycles[a].len()).then(a.cmp(&b)));

        let mut used = VertexSet::new(self.nv);
        let mut best = 0;
        for &j in &order {
            if self.sets[j].is_disjoint(&used) {
                used.union_with(&self.sets[j]);
                best += self.cycles[j].len();
            }
        }
        self.branch(&order, &VertexSet::new(self.nv), 0, &mut best)?;
        Ok(best)
    }

    fn branch(&mut self, order: &[usize], used: &VertexSet, weight: usize, best: &mut usize) -> Result<()> {
        self.tick()?;
        *best = (*best).max(weight);
        let Some(pos) = order.iter().position(|&j| self.sets[j].is_disjoint(used)) else {
            return Ok(());
        };
        if weight + self.upper_bound(&order[pos..], used) <= *best {
            return Ok(());
        }
        let j = order[pos];
        let mut with = used.clone();
        with.union_with(&self.sets[j]);
        self.branch(&order[pos + 1..], &with, weight + self.cycles[j].len(), best)?;
        self.branch(&order[pos + 1..], used, weight, best)
    }

    /// Lexicographically smallest sorted list of cycle indices whose lengths
    /// sum to `target`.
    pub(crate) fn smallest_reaching(&mut self, target: usize) -> Result<Vec<usize>> {
        let order: Vec<usize> = (0..self.cycles.len()).collect();
        let mut chosen = Vec::new();
        if target == 0 || self.lex(&order, &VertexSet::new(self.nv), 0, target, &mut chosen)? {
            Ok(chosen)
        } else {
            Err(Error::Precondition(format!("no packing of size {target}")))
        }
    }

    fn lex(
        &mut self,
        order: &[usize],
        used: &VertexSet,
        weight: usize,
        target: usize,
        chosen: &mut Vec<usize>,
    ) -> Result<bool> {
        self.tick()?;
        if weight == target {
            return Ok(true);
        }
        if weight + self.upper_bound(order, used) < target {
            return Ok(false);
        }
        for (pos, &j) in order.iter().enumerate() {
            if !self.sets[j].is_disjoint(used) {
                continue;
            }
            let mut with = used.clone();
            with.union_with(&self.sets[j]);
            chosen.push(j);
            if self.lex(&order[pos + 1..], &with, weight + self.cycles[j].len(), target, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    /// Every packing of size `target`, as sorted index lists, up to `limit`.
    pub(crate) fn all_reaching(&mut self, target: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
        let order: Vec<usize> = (0..self.cycles.len()).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.collect(&order, &VertexSet::new(self.nv), 0, target, &mut chosen, &mut out, limit)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn collect(
        &mut self,
        order: &[usize],
        used: &VertexSet,
        weight: usize,
        target: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<()> {
        self.tick()?;
        if weight == target {
            if out.len() >= limit {
                return Err(Error::Precondition(format!("more than {limit} maximum packings")));
            }
            out.push(chosen.clone());
            return Ok(());
        }
        if weight + self.upper_bound(order, used) < target {
            return Ok(());
        }
        for (pos, &j) in order.iter().enumerate() {
            if !self.sets[j].is_disjoint(used) {
                continue;
            }
            let mut with = used.clone();
            with.union_with(&self.sets[j]);
            chosen.push(j);
            self.collect(&order[pos + 1..], &with, weight + self.cycles[j].len(), target, chosen, out, limit)?;
            chosen.pop();
        }
        Ok(())
    }
}
