//! National, consecutive, international and order-based mechanisms.
//!
//! Every mechanism is exposed as a distribution over cycle packings with
//! exact rational probabilities; deterministic mechanisms give a point mass.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumeration::CycleCatalog;
use crate::error::{Error, Result};
use crate::model::{Cycle, CyclePacking, Instance};
use crate::rational::{self, Ratio};
use crate::solver::{max_gamma_packing_exact, max_national_packing, max_packing_of};
use crate::vertex_set::VertexSet;
use crate::Config;

/// Finite distribution over packings, sorted by packing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingDistribution {
    outcomes: Vec<(CyclePacking, Ratio)>,
}

#[derive(Serialize)]
struct OutcomeRepr<'a> {
    packing: &'a CyclePacking,
    #[serde(with = "rational::serde_str")]
    probability: Ratio,
}

impl Serialize for PackingDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.outcomes.iter().map(|(p, r)| OutcomeRepr { packing: p, probability: r.clone() }))
    }
}

impl PackingDistribution {
    pub fn point(packing: CyclePacking) -> Self {
        PackingDistribution { outcomes: vec![(packing, Ratio::one())] }
    }

    /// Merges equal packings, drops zero weights and checks the total is 1.
    pub fn from_weights(weights: impl IntoIterator<Item = (CyclePacking, Ratio)>) -> Result<Self> {
        let mut merged: BTreeMap<CyclePacking, Ratio> = BTreeMap::new();
        for (p, w) in weights {
            if w < Ratio::zero() {
                return Err(Error::Precondition("negative probability".into()));
            }
            *merged.entry(p).or_insert_with(Ratio::zero) += w;
        }
        let outcomes: Vec<_> = merged.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let total: Ratio = outcomes.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::Precondition(format!("probabilities sum to {total}, not 1")));
        }
        Ok(PackingDistribution { outcomes })
    }

    pub fn outcomes(&self) -> &[(CyclePacking, Ratio)] {
        &self.outcomes
    }

    pub fn probability_of(&self, packing: &CyclePacking) -> Ratio {
        self.outcomes.iter().find(|(p, _)| p == packing).map(|(_, w)| w.clone()).unwrap_or_else(Ratio::zero)
    }

    pub fn expected_utilities(&self, inst: &Instance) -> Vec<Ratio> {
        let mut out = vec![Ratio::zero(); inst.country_count()];
        for (p, w) in &self.outcomes {
            for (i, u) in inst.utilities(p).into_iter().enumerate() {
                out[i] += w * rational::int(u);
            }
        }
        out
    }

    pub fn social_welfare(&self) -> Ratio {
        self.outcomes.iter().map(|(p, w)| w * rational::int(p.size())).sum()
    }

    /// Half the L1 distance between the two probability vectors.
    pub fn total_variation(&self, other: &PackingDistribution) -> Ratio {
        let mut diff: BTreeMap<&CyclePacking, Ratio> = BTreeMap::new();
        for (p, w) in &self.outcomes {
            *diff.entry(p).or_insert_with(Ratio::zero) += w;
        }
        for (p, w) in &other.outcomes {
            *diff.entry(p).or_insert_with(Ratio::zero) -= w;
        }
        let l1: Ratio = diff.into_values().map(|d| if d < Ratio::zero() { -d } else { d }).sum();
        l1 / rational::int(2)
    }

    /// Every outcome is a Γ-cycle packing of `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        self.outcomes.iter().try_for_each(|(p, _)| inst.validate_packing(p))
    }
}

/// Expected utilities and welfare of a mechanism run, compared with the
/// optimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UtilityReport {
    #[serde(with = "rational::serde_vec")]
    pub expected_utility: Vec<Ratio>,
    #[serde(with = "rational::serde_str")]
    pub social_welfare: Ratio,
    pub opt_value: usize,
    /// `opt / SW`; `None` when the welfare is zero but the optimum is not.
    #[serde(with = "rational::serde_opt")]
    pub ratio: Option<Ratio>,
}

impl UtilityReport {
    pub fn new(dist: &PackingDistribution, inst: &Instance, opt_value: usize) -> Self {
        let expected_utility = dist.expected_utilities(inst);
        let social_welfare: Ratio = expected_utility.iter().cloned().sum();
        let ratio = if opt_value == 0 {
            Some(Ratio::one())
        } else if social_welfare.is_zero() {
            None
        } else {
            Some(rational::int(opt_value) / &social_welfare)
        };
        UtilityReport { expected_utility, social_welfare, opt_value, ratio }
    }
}

/// Report against the exact optimum of `inst`.
pub fn expected_utilities(dist: &PackingDistribution, inst: &Instance, cfg: &Config) -> Result<UtilityReport> {
    let opt = max_gamma_packing_exact(inst, cfg)?.opt_value;
    Ok(UtilityReport::new(dist, inst, opt))
}

/// Union of every country's canonical maximum national packing.
pub fn mech_nat(inst: &Instance, cfg: &Config) -> Result<CyclePacking> {
    let mut cycles = Vec::new();
    for country in 0..inst.country_count() {
        cycles.extend(max_national_packing(inst, country, cfg)?.packing.cycles().iter().cloned());
    }
    Ok(CyclePacking::from_disjoint(cycles))
}

/// Maximum Γ-cycle packing of the merged pool.
pub fn mech_int(inst: &Instance, cfg: &Config) -> Result<CyclePacking> {
    Ok(max_gamma_packing_exact(inst, cfg)?.packing)
}

/// National optimisation first, then a maximum packing of the leftover pairs.
/// With `international_only` the second stage ignores national cycles.
pub fn mech_con(inst: &Instance, international_only: bool, cfg: &Config) -> Result<CyclePacking> {
    let nat = mech_nat(inst, cfg)?;
    let mut remaining = inst.all_vertices();
    remaining.difference_with(&nat.covered(inst.vertex_count()));
    let catalog = CycleCatalog::build_on(inst, &remaining, cfg)?;
    let cycles = if international_only {
        catalog.international_gamma().into_iter().cloned().collect()
    } else {
        catalog.gamma_cycles()
    };
    let second = max_packing_of(&cycles, inst.vertex_count(), cfg)?.packing;
    nat.union(&second)
}

/// How the order mechanism's randomness is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    /// Exact distribution over every ordering and substitute choice.
    Exact,
    /// Empirical distribution of `runs` seeded runs.
    Sampled { runs: usize, seed: u64 },
}

/// The order-based mechanism: keep a maximum national packing, then greedily
/// add international cycles in random order, replacing infeasible ones by a
/// random substitute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderMechanism {
    /// Substitutes may have at most this many segments per country. The
    /// incentive-compatible rule is 1.
    pub substitute_segments: usize,
}

impl Default for OrderMechanism {
    fn default() -> Self {
        OrderMechanism { substitute_segments: 1 }
    }
}

struct OrderSetup {
    vertex_count: usize,
    c_nat: CyclePacking,
    x: Vec<Cycle>,
    sets: Vec<VertexSet>,
    conflict: Vec<u64>,
    is_gamma: Vec<bool>,
    substitutes: Vec<Vec<Cycle>>,
}

fn factorial_check(k: usize, limit: u64) -> Result<()> {
    let needed: BigUint = (1..=k as u64).map(BigUint::from).product();
    if needed > BigUint::from(limit) {
        return Err(Error::PermutationCap { needed: format!("{k}! = {needed}"), limit });
    }
    Ok(())
}

impl OrderMechanism {
    pub fn with_substitute_segments(segments: usize) -> Self {
        OrderMechanism { substitute_segments: segments }
    }

    fn setup(&self, inst: &Instance, c_nat: CyclePacking, cfg: &Config) -> Result<OrderSetup> {
        let nv = inst.vertex_count();
        let mut remaining = inst.all_vertices();
        remaining.difference_with(&c_nat.covered(nv));
        let catalog = CycleCatalog::build_on(inst, &remaining, cfg)?;
        let k = catalog.international_all.len();
        let substitutes = (0..k)
            .map(|j| {
                if catalog.is_gamma[j] {
                    Vec::new()
                } else {
                    catalog
                        .substitute_indices(inst, j, self.substitute_segments)
                        .into_iter()
                        .map(|s| catalog.international_all[s].clone())
                        .collect()
                }
            })
            .collect();
        let conflict = if k <= 64 {
            (0..k).map(|j| catalog.intersection_index[j].iter().fold(0u64, |m, &i| m | 1 << i)).collect()
        } else {
            Vec::new()
        };
        Ok(OrderSetup {
            vertex_count: nv,
            c_nat,
            sets: (0..k).map(|j| catalog.vertex_set(j).clone()).collect(),
            is_gamma: catalog.is_gamma.clone(),
            x: catalog.international_all,
            conflict,
            substitutes,
        })
    }

    pub fn distribution(&self, inst: &Instance, mode: OrderMode, cfg: &Config) -> Result<PackingDistribution> {
        self.distribution_given(inst, mech_nat(inst, cfg)?, mode, cfg)
    }

    /// Distribution when the national stage is fixed to `c_nat`.
    pub fn distribution_given(
        &self,
        inst: &Instance,
        c_nat: CyclePacking,
        mode: OrderMode,
        cfg: &Config,
    ) -> Result<PackingDistribution> {
        let setup = self.setup(inst, c_nat, cfg)?;
        match mode {
            OrderMode::Exact => exact_distribution(&setup, cfg),
            OrderMode::Sampled { runs, seed } => {
                if runs == 0 {
                    return Err(Error::Precondition("sampling needs at least one run".into()));
                }
                let packings = cfg.execution.map_range(runs, |r| run_once(&setup, &mut rng_for(seed, r as u64)));
                let mut counts: BTreeMap<CyclePacking, usize> = BTreeMap::new();
                for p in packings {
                    *counts.entry(p).or_default() += 1;
                }
                PackingDistribution::from_weights(counts.into_iter().map(|(p, c)| (p, rational::frac(c, runs))))
            }
        }
    }

    /// One run of the mechanism driven by `seed`.
    pub fn sample(&self, inst: &Instance, seed: u64, cfg: &Config) -> Result<CyclePacking> {
        let setup = self.setup(inst, mech_nat(inst, cfg)?, cfg)?;
        Ok(run_once(&setup, &mut rng_for(seed, 0)))
    }

    /// Mixture over national stages drawn from `step1`; each support packing
    /// must be a maximum national packing.
    pub fn distribution_randomized_step1(
        &self,
        inst: &Instance,
        step1: &PackingDistribution,
        cfg: &Config,
    ) -> Result<PackingDistribution> {
        let nat = mech_nat(inst, cfg)?;
        let target = inst.utilities(&nat);
        for (p, _) in step1.outcomes() {
            inst.validate_packing(p)?;
            if p.cycles().iter().any(|c| c.is_international(inst.country_of())) || inst.utilities(p) != target {
                return Err(Error::Precondition(format!("{p} is not a maximum national packing")));
            }
        }
        let parts = cfg.execution.map(step1.outcomes(), |(p, w)| {
            self.distribution_given(inst, p.clone(), OrderMode::Exact, cfg).map(|d| (d, w.clone()))
        });
        let mut weights = Vec::new();
        for part in parts {
            let (d, w) = part?;
            weights.extend(d.outcomes.into_iter().map(|(p, q)| (p, q * &w)));
        }
        PackingDistribution::from_weights(weights)
    }

    /// Exact probability that each cycle of the international pool is chosen
    /// in the greedy stage, next to `1 / |X_C|`.
    pub fn selection_probabilities(&self, inst: &Instance, cfg: &Config) -> Result<Vec<SelectionProbability>> {
        let setup = self.setup(inst, mech_nat(inst, cfg)?, cfg)?;
        let greedy = greedy_distribution(&setup, cfg)?;
        Ok((0..setup.x.len())
            .map(|j| {
                let exact = greedy.iter().filter(|(m, _)| *m >> j & 1 == 1).map(|(_, w)| w.clone()).sum();
                let degree = setup.conflict[j].count_ones() as usize;
                SelectionProbability {
                    cycle: setup.x[j].clone(),
                    is_gamma: setup.is_gamma[j],
                    exact,
                    inverse_degree: rational::frac(1, degree),
                }
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionProbability {
    pub cycle: Cycle,
    pub is_gamma: bool,
    #[serde(with = "rational::serde_str")]
    pub exact: Ratio,
    #[serde(with = "rational::serde_str")]
    pub inverse_degree: Ratio,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_once(setup: &OrderSetup, rng: &mut ChaCha8Rng) -> CyclePacking {
    let mut order: Vec<usize> = (0..setup.x.len()).collect();
    order.shuffle(rng);
    let mut used = VertexSet::new(setup.vertex_count);
    let mut chosen: Vec<Cycle> = setup.c_nat.cycles().to_vec();
    for j in order {
        if !setup.sets[j].is_disjoint(&used) {
            continue;
        }
        used.union_with(&setup.sets[j]);
        if setup.is_gamma[j] {
            chosen.push(setup.x[j].clone());
        } else if !setup.substitutes[j].is_empty() {
            let pick = rng.gen_range(0..setup.substitutes[j].len());
            chosen.push(setup.substitutes[j][pick].clone());
        }
    }
    CyclePacking::from_disjoint(chosen)
}

type Memo = HashMap<u64, BTreeMap<u64, Ratio>>;

/// Distribution of the greedy selection (as a bitmask over the pool) when
/// the pool is visited in uniformly random order. The first available cycle
/// in a uniform order is uniform among the available ones, and the order of
/// the rest stays uniform, so the recursion below covers every ordering.
fn greedy_distribution(setup: &OrderSetup, cfg: &Config) -> Result<BTreeMap<u64, Ratio>> {
    let k = setup.x.len();
    factorial_check(k, cfg.max_permutations)?;
    if k > 64 {
        return Err(Error::PermutationCap { needed: format!("{k}!"), limit: cfg.max_permutations });
    }
    if k == 0 {
        return Ok(BTreeMap::from([(0, Ratio::one())]));
    }
    let all: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let share = rational::frac(1, k);
    let branches = cfg.execution.map_range(k, |first| {
        let mut memo = Memo::new();
        let rest = all & !setup.conflict[first];
        let sub = greedy_from(rest, &setup.conflict, &mut memo);
        sub.iter().map(|(m, w)| (m | 1 << first, w * &share)).collect::<Vec<_>>()
    });
    let mut out: BTreeMap<u64, Ratio> = BTreeMap::new();
    for (m, w) in branches.into_iter().flatten() {
        *out.entry(m).or_insert_with(Ratio::zero) += w;
    }
    Ok(out)
}

fn greedy_from(avail: u64, conflict: &[u64], memo: &mut Memo) -> BTreeMap<u64, Ratio> {
    if avail == 0 {
        return BTreeMap::from([(0, Ratio::one())]);
    }
    if let Some(hit) = memo.get(&avail) {
        return hit.clone();
    }
    let share = rational::frac(1, avail.count_ones() as usize);
    let mut out: BTreeMap<u64, Ratio> = BTreeMap::new();
    let mut bits = avail;
    while bits != 0 {
        let c = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        for (m, w) in greedy_from(avail & !conflict[c], conflict, memo) {
            *out.entry(m | 1 << c).or_insert_with(Ratio::zero) += w * &share;
        }
    }
    memo.insert(avail, out.clone());
    out
}

fn exact_distribution(setup: &OrderSetup, cfg: &Config) -> Result<PackingDistribution> {
    let greedy = greedy_distribution(setup, cfg)?;
    let mut weights = Vec::new();
    for (mask, w) in greedy {
        // Each selected cycle resolves independently: kept, one of its
        // substitutes uniformly, or dropped.
        let mut partial: Vec<(Vec<Cycle>, Ratio)> = vec![(setup.c_nat.cycles().to_vec(), w)];
        for j in (0..setup.x.len()).filter(|j| mask >> j & 1 == 1) {
            if setup.is_gamma[j] {
                for (cycles, _) in &mut partial {
                    cycles.push(setup.x[j].clone());
                }
            } else if !setup.substitutes[j].is_empty() {
                let subs = &setup.substitutes[j];
                let share = rational::frac(1, subs.len());
                partial = partial
                    .into_iter()
                    .flat_map(|(cycles, p)| {
                        let share = &share;
                        subs.iter().map(move |s| {
                            let mut next = cycles.clone();
                            next.push(s.clone());
                            (next, &p * share)
                        })
                    })
                    .collect();
            }
        }
        weights.extend(partial.into_iter().map(|(c, p)| (CyclePacking::from_disjoint(c), p)));
    }
    PackingDistribution::from_weights(weights)
}

pub fn mech_order_sample(inst: &Instance, seed: u64, cfg: &Config) -> Result<CyclePacking> {
    OrderMechanism::default().sample(inst, seed, cfg)
}

pub fn mech_order_distribution(inst: &Instance, mode: OrderMode, cfg: &Config) -> Result<PackingDistribution> {
    OrderMechanism::default().distribution(inst, mode, cfg)
}

pub fn mech_order_randomized_step1(
    inst: &Instance,
    step1: &PackingDistribution,
    cfg: &Config,
) -> Result<PackingDistribution> {
    OrderMechanism::default().distribution_randomized_step1(inst, step1, cfg)
}

/// Anything that maps an instance to a distribution over packings.
pub trait Mechanism: Sync {
    fn name(&self) -> String;
    fn distribution(&self, inst: &Instance, cfg: &Config) -> Result<PackingDistribution>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct National;

#[derive(Clone, Copy, Debug, Default)]
pub struct Consecutive {
    pub international_only: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct International;

/// Order mechanism evaluated exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct Order(pub OrderMechanism);

impl Mechanism for National {
    fn name(&self) -> String {
        "nat".into()
    }
    fn distribution(&self, inst: &Instance, cfg: &Config) -> Result<PackingDistribution> {
        Ok(PackingDistribution::point(mech_nat(inst, cfg)?))
    }
}

impl Mechanism for Consecutive {
    fn name(&self) -> String {
        if self.international_only { "con-strict".into() } else { "con".into() }
    }
    fn distribution(&self, inst: &Instance, cfg: &Config) -> Result<PackingDistribution> {
        Ok(PackingDistribution::point(mech_con(inst, self.international_only, cfg)?))
    }
}

impl Mechanism for International {
    fn name(&self) -> String {
        "int".into()
    }
    fn distribution(&self, inst: &Instance, cfg: &Config) -> Result<PackingDistribution> {
        Ok(PackingDistribution::point(mech_int(inst, cfg)?))
    }
}

impl Mechanism for Order {
    fn name(&self) -> String {
        match self.0.substitute_segments {
            1 => "order".into(),
            k => format!("order-{k}seg"),
        }
    }
    fn distribution(&self, inst: &Instance, cfg: &Config) -> Result<PackingDistribution> {
        self.0.distribution(inst, OrderMode::Exact, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::verification::fixtures::{build_fixture, Fixture};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn fig1_mechanisms() {
        let inst = build_fixture(&Fixture::Fig1).unwrap();
        assert_eq!(mech_nat(&inst, &cfg()).unwrap().to_string(), "{<0,1>}");
        assert_eq!(mech_int(&inst, &cfg()).unwrap().to_string(), "{<0,2,3>}");
        assert_eq!(mech_con(&inst, false, &cfg()).unwrap().to_string(), "{<0,1>}");
        let d = mech_order_distribution(&inst, OrderMode::Exact, &cfg()).unwrap();
        assert_eq!(d, PackingDistribution::point(mech_nat(&inst, &cfg()).unwrap()));
    }

    #[test]
    fn example_one_expected_utilities() {
        let inst = build_fixture(&Fixture::Fig2b).unwrap();
        let d = mech_order_distribution(&inst, OrderMode::Exact, &cfg()).unwrap();
        assert_eq!(d.outcomes().len(), 2);
        assert!(d.outcomes().iter().all(|(_, w)| *w == frac(1, 2)));
        let r = expected_utilities(&d, &inst, &cfg()).unwrap();
        assert_eq!(r.expected_utility, vec![frac(7, 2), frac(5, 2)]);
        assert_eq!(r.social_welfare, int(6));
        assert_eq!(r.opt_value, 6);
        assert_eq!(r.ratio, Some(int(1)));
    }

    #[test]
    fn example_three_substitution() {
        let inst = build_fixture(&Fixture::Ex3 { l: 5 }).unwrap();
        let d = mech_order_distribution(&inst, OrderMode::Exact, &cfg()).unwrap();
        assert_eq!(d.expected_utilities(&inst)[0], int(4));
        let two = OrderMechanism::with_substitute_segments(2).distribution(&inst, OrderMode::Exact, &cfg()).unwrap();
        assert_eq!(two.expected_utilities(&inst)[0], frac(7, 2));
    }

    #[test]
    fn sampling_is_reproducible_and_first_run_matches_single_sample() {
        let inst = build_fixture(&Fixture::Fig2b).unwrap();
        let mode = OrderMode::Sampled { runs: 200, seed: 9 };
        let a = mech_order_distribution(&inst, mode, &cfg()).unwrap();
        let b = mech_order_distribution(&inst, mode, &Config::sequential()).unwrap();
        assert_eq!(a, b);
        let one = mech_order_distribution(&inst, OrderMode::Sampled { runs: 1, seed: 9 }, &cfg()).unwrap();
        assert_eq!(one.outcomes()[0].0, mech_order_sample(&inst, 9, &cfg()).unwrap());
    }

    #[test]
    fn permutation_cap_is_enforced() {
        let inst = build_fixture(&Fixture::Thm5 { n: 3, l: 4 }).unwrap();
        let tight = Config { max_permutations: 5, ..cfg() };
        assert!(matches!(
            mech_order_distribution(&inst, OrderMode::Exact, &tight),
            Err(Error::PermutationCap { .. })
        ));
    }

    #[test]
    fn point_mass_step1_equals_canonical_run() {
        let inst = build_fixture(&Fixture::Fig7 { ncl_j: 4 }).unwrap();
        let nat = PackingDistribution::point(mech_nat(&inst, &cfg()).unwrap());
        assert_eq!(
            mech_order_randomized_step1(&inst, &nat, &cfg()).unwrap(),
            mech_order_distribution(&inst, OrderMode::Exact, &cfg()).unwrap()
        );
        let bad = PackingDistribution::point(CyclePacking::empty());
        assert!(mech_order_randomized_step1(&inst, &bad, &cfg()).is_err());
    }

    #[test]
    fn selection_probabilities_on_example_one() {
        let inst = build_fixture(&Fixture::Fig2b).unwrap();
        let rows = OrderMechanism::default().selection_probabilities(&inst, &cfg()).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert_eq!(row.exact, frac(1, 2));
            assert_eq!(row.inverse_degree, frac(1, 2));
        }
    }

    #[test]
    fn total_variation() {
        let a = PackingDistribution::point(CyclePacking::empty());
        let c = Cycle::from_indices(&[0, 1]).unwrap();
        let b = PackingDistribution::from_weights([
            (CyclePacking::empty(), frac(1, 4)),
            (CyclePacking::new(vec![c]).unwrap(), frac(3, 4)),
        ])
        .unwrap();
        assert_eq!(a.total_variation(&b), frac(3, 4));
        assert_eq!(b.total_variation(&b), int(0));
    }
}
