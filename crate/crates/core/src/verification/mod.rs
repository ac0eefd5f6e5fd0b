//! Checkers for individual rationality, incentive compatibility, the
//! approximation bound, perfect packings and related properties.

pub mod fixtures;

use num_traits::Zero;
use serde::Serialize;

use crate::bound::Bound;
use crate::enumeration::{CycleCatalog, InstanceStats};
use crate::error::{Error, Result};
use crate::mechanisms::{mech_order_distribution, Mechanism, OrderMode, PackingDistribution};
use crate::model::{Country, Cycle, CyclePacking, GammaParams, Instance};
use crate::rational::{self, Ratio};
use crate::solver::{all_maximum_packings, max_gamma_packing_exact, max_national_packing, BRUTE_FORCE_CAP};
use crate::vertex_set::VertexSet;
use crate::Config;

/// Each country's national optimum under its own cycle limit.
pub fn nat_values(inst: &Instance, cfg: &Config) -> Result<Vec<usize>> {
    (0..inst.country_count()).map(|c| max_national_packing(inst, c, cfg).map(|r| r.opt_value)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrReport {
    pub mechanism: String,
    pub holds: bool,
    pub nat: Vec<usize>,
    #[serde(with = "rational::serde_vec")]
    pub expected_utility: Vec<Ratio>,
    /// Expected utility minus the national optimum, per country.
    #[serde(with = "rational::serde_vec")]
    pub slack: Vec<Ratio>,
}

pub fn check_ir(mech: &dyn Mechanism, inst: &Instance, cfg: &Config) -> Result<IrReport> {
    let nat = nat_values(inst, cfg)?;
    let expected_utility = mech.distribution(inst, cfg)?.expected_utilities(inst);
    let slack: Vec<Ratio> = expected_utility.iter().zip(&nat).map(|(u, &n)| u - rational::int(n)).collect();
    Ok(IrReport {
        mechanism: mech.name(),
        holds: slack.iter().all(|s| *s >= Ratio::zero()),
        nat,
        expected_utility,
        slack,
    })
}

/// Parameter tuples a country can report by lowering its own segment size
/// and segment count limits. The honest report comes first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MisreportSpace {
    pub country: Country,
    pub variants: Vec<GammaParams>,
}

/// Values worth trying for one lowered limit: every value below the
/// structural ceiling, then the reported value itself. Values between the
/// ceiling and the reported value admit exactly the same cycles as the
/// reported one.
fn lowered_values(reported: Bound, ceiling: usize) -> Vec<Bound> {
    let top = match reported {
        Bound::Finite(v) => (v as usize).min(ceiling),
        Bound::Unbounded => ceiling,
    };
    let mut out: Vec<Bound> = (1..top).map(|v| Bound::Finite(v as u32)).collect();
    out.push(reported);
    out
}

pub fn enumerate_misreports(g: &GammaParams, country: Country, inst: &Instance) -> Result<MisreportSpace> {
    inst.check_country(country)?;
    if g.n != inst.country_count() {
        return Err(Error::InvalidGamma("parameters do not match the instance".into()));
    }
    let icl = g.icl.or_cap(inst.vertex_count());
    let iss_ceiling = icl.saturating_sub(1).min(inst.country_size(country)).max(1);
    let isn_ceiling = (icl / 2).max(1);
    let mut variants = Vec::new();
    for &iss in &lowered_values(g.iss[country], iss_ceiling) {
        for &isn in &lowered_values(g.isn[country], isn_ceiling) {
            let mut v = g.clone();
            v.iss[country] = iss;
            v.isn[country] = isn;
            variants.push(v);
        }
    }
    // Put the honest report first.
    let honest = variants.iter().position(|v| v == g).expect("honest report is always listed");
    let h = variants.remove(honest);
    variants.insert(0, h);
    Ok(MisreportSpace { country, variants })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcEntry {
    pub country: Country,
    pub iss: Bound,
    pub isn: Bound,
    #[serde(with = "rational::serde_str")]
    pub honest_utility: Ratio,
    #[serde(with = "rational::serde_str")]
    pub misreport_utility: Ratio,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcReport {
    pub mechanism: String,
    pub entries: Vec<IcEntry>,
    pub violations: Vec<IcEntry>,
}

impl IcReport {
    pub fn is_ic(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares every country's honest expected utility with its utility under
/// every lowered segment report. Only exact distributions are meaningful here.
pub fn check_ic(mech: &dyn Mechanism, inst: &Instance, cfg: &Config) -> Result<IcReport> {
    let honest = mech.distribution(inst, cfg)?.expected_utilities(inst);
    let mut jobs = Vec::new();
    for country in 0..inst.country_count() {
        for v in enumerate_misreports(inst.gamma(), country, inst)?.variants.into_iter().skip(1) {
            jobs.push((country, v));
        }
    }
    let results = cfg.execution.map(&jobs, |(country, g)| -> Result<IcEntry> {
        let lied = inst.with_gamma(g.clone())?;
        let u = mech.distribution(&lied, cfg)?.expected_utilities(&lied);
        Ok(IcEntry {
            country: *country,
            iss: g.iss[*country],
            isn: g.isn[*country],
            honest_utility: honest[*country].clone(),
            misreport_utility: u[*country].clone(),
        })
    });
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let violations = entries.iter().filter(|e| e.misreport_utility > e.honest_utility).cloned().collect();
    Ok(IcReport { mechanism: mech.name(), entries, violations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NclReport {
    pub mechanism: String,
    pub country: Country,
    pub honest_ncl: Bound,
    pub reported_ncl: Bound,
    #[serde(with = "rational::serde_str")]
    pub honest_utility: Ratio,
    #[serde(with = "rational::serde_str")]
    pub reported_utility: Ratio,
    #[serde(with = "rational::serde_str")]
    pub honest_sw: Ratio,
    #[serde(with = "rational::serde_str")]
    pub reported_sw: Ratio,
    /// Vertices of the country left uncovered by some packing in the support.
    pub honest_uncovered: Vec<usize>,
    pub reported_uncovered: Vec<usize>,
    pub improves: bool,
}

fn uncovered_in(dist: &PackingDistribution, inst: &Instance, country: Country) -> Vec<usize> {
    let covered: Vec<VertexSet> = dist.outcomes().iter().map(|(p, _)| p.covered(inst.vertex_count())).collect();
    inst.country_members(country)
        .into_iter()
        .map(|v| v.index())
        .filter(|&v| covered.iter().any(|c| !c.contains(v)))
        .collect()
}

/// Effect of `country` reporting a lower national cycle limit.
pub fn check_ncl_manipulation(
    mech: &dyn Mechanism,
    inst: &Instance,
    country: Country,
    ncl_variant: Bound,
    cfg: &Config,
) -> Result<NclReport> {
    inst.check_country(country)?;
    let honest_ncl = inst.gamma().ncl[country];
    if ncl_variant > honest_ncl {
        return Err(Error::Precondition(format!("ncl {ncl_variant} exceeds the reported {honest_ncl}")));
    }
    let mut g = inst.gamma().clone();
    g.ncl[country] = ncl_variant;
    let lied = inst.with_gamma(g)?;
    let d0 = mech.distribution(inst, cfg)?;
    let d1 = mech.distribution(&lied, cfg)?;
    let u0 = d0.expected_utilities(inst)[country].clone();
    let u1 = d1.expected_utilities(&lied)[country].clone();
    Ok(NclReport {
        mechanism: mech.name(),
        country,
        honest_ncl,
        reported_ncl: ncl_variant,
        improves: u1 > u0,
        honest_utility: u0,
        reported_utility: u1,
        honest_sw: d0.social_welfare(),
        reported_sw: d1.social_welfare(),
        honest_uncovered: uncovered_in(&d0, inst, country),
        reported_uncovered: uncovered_in(&d1, &lied, country),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxReport {
    #[serde(with = "rational::serde_str")]
    pub sw: Ratio,
    pub opt: usize,
    pub c_int: usize,
    pub d_star: usize,
    /// `max(c_int, d*, 1)`.
    pub bound: usize,
    #[serde(with = "rational::serde_opt")]
    pub ratio: Option<Ratio>,
    pub holds: bool,
}

/// Checks `SW(order) * max(c_int, d*, 1) >= opt` with the exact order
/// distribution.
pub fn check_approx_bound(inst: &Instance, cfg: &Config) -> Result<ApproxReport> {
    let stats = InstanceStats::from_catalog(&CycleCatalog::build(inst, cfg)?);
    let opt = max_gamma_packing_exact(inst, cfg)?.opt_value;
    let sw = mech_order_distribution(inst, OrderMode::Exact, cfg)?.social_welfare();
    Ok(approx_report(sw, opt, stats))
}

pub fn approx_report(sw: Ratio, opt: usize, stats: InstanceStats) -> ApproxReport {
    let bound = stats.approximation_bound();
    let ratio = if opt == 0 {
        Some(rational::int(1))
    } else if sw.is_zero() {
        None
    } else {
        Some(rational::int(opt) / &sw)
    };
    ApproxReport {
        holds: &sw * rational::int(bound) >= rational::int(opt),
        sw,
        opt,
        c_int: stats.c_int,
        d_star: stats.d_star,
        bound,
        ratio,
    }
}

pub const PERFECT_VERTEX_CAP: usize = 14;

/// A packing covering every vertex, if one exists.
pub fn has_perfect_packing(inst: &Instance, cfg: &Config) -> Result<Option<CyclePacking>> {
    let cycles = CycleCatalog::build(inst, cfg)?.gamma_cycles();
    let nv = inst.vertex_count();
    if cycles.len() > BRUTE_FORCE_CAP && nv > PERFECT_VERTEX_CAP {
        return Err(Error::BruteForceCap { found: cycles.len(), cap: BRUTE_FORCE_CAP });
    }
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (k, c) in cycles.iter().enumerate() {
        for v in c.vertices() {
            through[v.index()].push(k);
        }
    }
    let sets: Vec<VertexSet> = cycles.iter().map(|c| c.vertex_set(nv)).collect();
    fn cover(
        covered: &mut VertexSet,
        nv: usize,
        through: &[Vec<usize>],
        sets: &[VertexSet],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let Some(v) = (0..nv).find(|&v| !covered.contains(v)) else {
            return true;
        };
        for &k in &through[v] {
            if sets[k].is_disjoint(covered) {
                covered.union_with(&sets[k]);
                chosen.push(k);
                if cover(covered, nv, through, sets, chosen) {
                    return true;
                }
                chosen.pop();
                covered.difference_with(&sets[k]);
            }
        }
        false
    }
    let mut covered = VertexSet::new(nv);
    let mut chosen = Vec::new();
    Ok(cover(&mut covered, nv, &through, &sets, &mut chosen)
        .then(|| CyclePacking::from_disjoint(chosen.into_iter().map(|k| cycles[k].clone()).collect())))
}

/// No Γ-cycle can be added to `packing`.
pub fn is_maximal(inst: &Instance, packing: &CyclePacking, cfg: &Config) -> Result<bool> {
    let used = packing.covered(inst.vertex_count());
    let cycles = CycleCatalog::build(inst, cfg)?.gamma_cycles();
    Ok(cycles.iter().all(|c| !c.vertex_set(inst.vertex_count()).is_disjoint(&used)))
}

/// Every Γ-cycle packing of the instance, up to `limit` of them.
pub fn all_packings(inst: &Instance, limit: usize, cfg: &Config) -> Result<Vec<CyclePacking>> {
    let cycles = CycleCatalog::build(inst, cfg)?.gamma_cycles();
    let nv = inst.vertex_count();
    let sets: Vec<VertexSet> = cycles.iter().map(|c| c.vertex_set(nv)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, VertexSet, Vec<usize>)> = vec![(0, VertexSet::new(nv), Vec::new())];
    while let Some((start, used, chosen)) = stack.pop() {
        if out.len() >= limit {
            return Err(Error::Precondition(format!("more than {limit} packings")));
        }
        out.push(CyclePacking::from_disjoint(chosen.iter().map(|&k| cycles[k].clone()).collect()));
        for k in (start..cycles.len()).rev() {
            if sets[k].is_disjoint(&used) {
                let mut u = used.clone();
                u.union_with(&sets[k]);
                let mut c = chosen.clone();
                c.push(k);
                stack.push((k + 1, u, c));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Whether some distribution over maximum packings gives every country at
/// least its national optimum in expectation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfficientIrReport {
    pub nat: Vec<usize>,
    pub maximum_packings: Vec<CyclePacking>,
    pub utilities: Vec<Vec<usize>>,
    pub exists: bool,
    /// `false` when the answer comes from a grid over mixtures.
    pub exact: bool,
}

pub fn efficient_ir_report(inst: &Instance, grid_steps: usize, cfg: &Config) -> Result<EfficientIrReport> {
    let nat = nat_values(inst, cfg)?;
    let cycles = CycleCatalog::build(inst, cfg)?.gamma_cycles();
    let maximum_packings = all_maximum_packings(&cycles, inst.vertex_count(), 1000, cfg)?;
    let utilities: Vec<Vec<usize>> = maximum_packings.iter().map(|p| inst.utilities(p)).collect();
    let ok = |w: &[Ratio]| {
        (0..nat.len()).all(|i| {
            let u: Ratio = w.iter().zip(&utilities).map(|(p, u)| p * rational::int(u[i])).sum();
            u >= rational::int(nat[i])
        })
    };
    let (exists, exact) = match maximum_packings.len() {
        1 => (ok(&[rational::int(1)]), true),
        k if k <= 3 => (simplex_grid(k, grid_steps).iter().any(|w| ok(w)), false),
        k => {
            return Err(Error::Precondition(format!("{k} maximum packings; grid search handles at most 3")));
        }
    };
    Ok(EfficientIrReport { nat, maximum_packings, utilities, exists, exact })
}

/// Every probability vector of length `k` with entries in multiples of
/// `1/steps`.
pub fn simplex_grid(k: usize, steps: usize) -> Vec<Vec<Ratio>> {
    fn go(k: usize, left: usize, steps: usize, cur: &mut Vec<Ratio>, out: &mut Vec<Vec<Ratio>>) {
        if k == 1 {
            cur.push(rational::frac(left, steps));
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for take in 0..=left {
            cur.push(rational::frac(take, steps));
            go(k - 1, left - take, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 && steps > 0 {
        go(k, steps, steps, &mut Vec::new(), &mut out);
    }
    out
}

/// Grid evidence that no nonempty mechanism is incentive compatible on
/// `inst`. Honest behaviour ranges over distributions on the nonempty
/// packings; for each lowered report the deviating country is credited the
/// least it could get from any nonempty packing of the lowered instance, which
/// is the best a mechanism could do to deter the deviation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonemptyIcGrid {
    pub support: Vec<CyclePacking>,
    pub points_checked: usize,
    pub feasible_points: Vec<Vec<String>>,
}

pub fn nonempty_ic_grid(inst: &Instance, steps: usize, cfg: &Config) -> Result<NonemptyIcGrid> {
    let support: Vec<CyclePacking> = all_packings(inst, 10_000, cfg)?.into_iter().filter(|p| !p.is_empty()).collect();
    if support.is_empty() || support.len() > 3 {
        return Err(Error::Precondition(format!(
            "grid search needs 1 to 3 nonempty packings, found {}",
            support.len()
        )));
    }
    let utilities: Vec<Vec<usize>> = support.iter().map(|p| inst.utilities(p)).collect();
    let mut floors: Vec<(Country, usize)> = Vec::new();
    for country in 0..inst.country_count() {
        for g in enumerate_misreports(inst.gamma(), country, inst)?.variants.into_iter().skip(1) {
            let lied = inst.with_gamma(g)?;
            let least = all_packings(&lied, 10_000, cfg)?
                .iter()
                .filter(|p| !p.is_empty())
                .map(|p| lied.utilities(p)[country])
                .min()
                .unwrap_or(0);
            floors.push((country, least));
        }
    }
    let grid = simplex_grid(support.len(), steps);
    let feasible_points = grid
        .iter()
        .filter(|w| {
            floors.iter().all(|&(c, least)| {
                let u: Ratio = w.iter().zip(&utilities).map(|(p, u)| p * rational::int(u[c])).sum();
                u >= rational::int(least)
            })
        })
        .map(|w| w.iter().map(|r| r.to_string()).collect())
        .collect();
    Ok(NonemptyIcGrid { support, points_checked: grid.len(), feasible_points })
}

/// Deterministic mechanism returning a nonempty packing that is best for one
/// country (larger size, then smallest packing, breaks ties); empty only
/// when no Γ-cycle exists.
#[derive(Clone, Copy, Debug)]
pub struct BestForCountry {
    pub country: Country,
}

impl Mechanism for BestForCountry {
    fn name(&self) -> String {
        format!("best-for-{}", self.country)
    }

    fn distribution(&self, inst: &Instance, cfg: &Config) -> Result<PackingDistribution> {
        let best = all_packings(inst, 100_000, cfg)?
            .into_iter()
            .filter(|p| !p.is_empty())
            .max_by(|a, b| {
                let key = |p: &CyclePacking| (inst.utilities(p)[self.country], p.size());
                key(a).cmp(&key(b)).then_with(|| b.cmp(a))
            })
            .unwrap_or_default();
        Ok(PackingDistribution::point(best))
    }
}

/// The packing's cycles, each checked against the instance.
pub fn packing_from_cycles(inst: &Instance, cycles: &[Vec<usize>]) -> Result<CyclePacking> {
    let cycles: Vec<Cycle> = cycles.iter().map(|c| Cycle::from_indices(c)).collect::<Result<_>>()?;
    let p = CyclePacking::new(cycles)?;
    inst.validate_packing(&p)?;
    Ok(p)
}
