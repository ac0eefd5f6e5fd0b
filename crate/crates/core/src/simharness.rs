//! Batch comparison of the mechanisms over instance corpora and parameter
//! sweeps, with CSV export.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bound::Bound;
use crate::error::{Error, Result};
use crate::generator::{gen_instance, GenConfig};
use crate::mechanisms::{mech_con, mech_int, mech_nat, mech_order_distribution, OrderMode, PackingDistribution};
use crate::model::{GammaParams, Instance};
use crate::rational::{self, Ratio};
use crate::verification::fixtures::{build_fixture, Fixture};
use crate::Config;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusEntry {
    Generate(GenConfig),
    /// `count` generated instances with seeds `base.seed`, `base.seed + 1`, ...
    Batch { count: usize, base: GenConfig },
    File(PathBuf),
    Fixture {
        name: String,
        #[serde(default)]
        params: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechKind {
    Nat,
    Con,
    Int,
    Order,
}

impl MechKind {
    pub const ALL: [MechKind; 4] = [MechKind::Nat, MechKind::Con, MechKind::Int, MechKind::Order];

    pub fn name(self) -> &'static str {
        match self {
            MechKind::Nat => "nat",
            MechKind::Con => "con",
            MechKind::Int => "int",
            MechKind::Order => "order",
        }
    }
}

/// Values to substitute for every country at once. An empty list keeps the
/// instance's own value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sweep {
    pub icl: Vec<Bound>,
    pub ncl: Vec<Bound>,
    pub iss: Vec<Bound>,
    pub isn: Vec<Bound>,
}

impl Sweep {
    /// Every combination of the listed values applied to `base`.
    pub fn points(&self, base: &GammaParams) -> Result<Vec<GammaParams>> {
        fn opts(v: &[Bound]) -> Vec<Option<Bound>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().copied().map(Some).collect()
            }
        }
        let mut out = Vec::new();
        for icl in opts(&self.icl) {
            for ncl in opts(&self.ncl) {
                for iss in opts(&self.iss) {
                    for isn in opts(&self.isn) {
                        let mut g = base.clone();
                        if let Some(b) = icl {
                            g.icl = b;
                        }
                        if let Some(b) = ncl {
                            g.ncl = vec![b; g.n];
                        }
                        if let Some(b) = iss {
                            g.iss = vec![b; g.n];
                        }
                        if let Some(b) = isn {
                            g.isn = vec![b; g.n];
                        }
                        g.validate()?;
                        out.push(g);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn default_mechanisms() -> Vec<MechKind> {
    MechKind::ALL.to_vec()
}

fn default_runs() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub corpus: Vec<CorpusEntry>,
    #[serde(default = "default_mechanisms")]
    pub mechanisms: Vec<MechKind>,
    /// Sampled runs of the order mechanism when its exact distribution is
    /// over the permutation budget.
    #[serde(default = "default_runs")]
    pub order_runs_per_instance: usize,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Base seed for sampled order runs.
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    /// Reads a JSON config; relative instance paths are taken relative to
    /// the config file.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let mut cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let dir = path.parent().unwrap_or(Path::new(""));
        for entry in &mut cfg.corpus {
            if let CorpusEntry::File(p) = entry {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order_runs_per_instance == 0 {
            return Err(Error::InvalidConfig("order_runs_per_instance must be at least 1".into()));
        }
        if self.mechanisms.is_empty() {
            return Err(Error::InvalidConfig("no mechanisms selected".into()));
        }
        Ok(())
    }

    fn runs(&self, m: MechKind) -> bool {
        self.mechanisms.contains(&m)
    }
}

/// Loads every corpus instance in order, with a short description of where
/// it came from.
pub fn load_corpus(corpus: &[CorpusEntry]) -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for entry in corpus {
        match entry {
            CorpusEntry::Generate(g) => out.push((format!("gen:seed={}", g.seed), gen_instance(g)?)),
            CorpusEntry::Batch { count, base } => {
                for k in 0..*count as u64 {
                    let g = base.with_seed(base.seed.wrapping_add(k));
                    out.push((format!("gen:seed={}", g.seed), gen_instance(&g)?));
                }
            }
            CorpusEntry::File(p) => {
                out.push((format!("file:{}", p.display()), Instance::from_json(&std::fs::read_to_string(p)?)?))
            }
            CorpusEntry::Fixture { name, params } => {
                let f = Fixture::parse(name, params)?;
                out.push((format!("fixture:{f}"), build_fixture(&f)?));
            }
        }
    }
    Ok(out)
}

/// Short label for a parameter tuple, e.g. `icl4_ncl3.3.3_iss2.2.2_isn1.1.1`.
pub fn gamma_tag(g: &GammaParams) -> String {
    let join = |v: &[Bound]| v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(".");
    format!("icl{}_ncl{}_iss{}_isn{}", g.icl, join(&g.ncl), join(&g.iss), join(&g.isn))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultRow {
    pub instance_id: usize,
    pub source: String,
    pub gamma: GammaParams,
    pub gamma_tag: String,
    /// Expected social welfare per mechanism that ran successfully.
    pub sw: BTreeMap<MechKind, Ratio>,
    pub utilities: BTreeMap<MechKind, Vec<Ratio>>,
    /// `exact` or `sampled:k`.
    pub order_mode: Option<String>,
    pub note: String,
}

impl ResultRow {
    /// `sw(a) / sw(b)`, with `0 / 0 = 1` and `None` for a positive value over
    /// zero.
    pub fn ratio(&self, a: MechKind, b: MechKind) -> Option<Option<Ratio>> {
        let (x, y) = (self.sw.get(&a)?, self.sw.get(&b)?);
        Some(if y.is_zero() {
            x.is_zero().then(|| rational::int(1))
        } else {
            Some(x / y)
        })
    }
}

fn run_row(
    instance_id: usize,
    source: &str,
    inst: &Instance,
    exp: &ExperimentConfig,
    order_seed: u64,
    cfg: &Config,
) -> ResultRow {
    let mut row = ResultRow {
        instance_id,
        source: source.to_string(),
        gamma: inst.gamma().clone(),
        gamma_tag: gamma_tag(inst.gamma()),
        sw: BTreeMap::new(),
        utilities: BTreeMap::new(),
        order_mode: None,
        note: String::new(),
    };
    let mut notes = Vec::new();
    for m in MechKind::ALL.into_iter().filter(|&m| exp.runs(m)) {
        let dist = match m {
            MechKind::Nat => mech_nat(inst, cfg).map(PackingDistribution::point),
            MechKind::Con => mech_con(inst, false, cfg).map(PackingDistribution::point),
            MechKind::Int => mech_int(inst, cfg).map(PackingDistribution::point),
            MechKind::Order => match mech_order_distribution(inst, OrderMode::Exact, cfg) {
                Ok(d) => {
                    row.order_mode = Some("exact".into());
                    Ok(d)
                }
                Err(Error::PermutationCap { .. }) => {
                    let runs = exp.order_runs_per_instance;
                    row.order_mode = Some(format!("sampled:{runs}"));
                    mech_order_distribution(inst, OrderMode::Sampled { runs, seed: order_seed }, cfg)
                }
                Err(e) => Err(e),
            },
        };
        match dist {
            Ok(d) => {
                row.sw.insert(m, d.social_welfare());
                row.utilities.insert(m, d.expected_utilities(inst));
            }
            Err(e) => notes.push(format!("{}: {e}", m.name())),
        }
    }
    row.note = notes.join("; ");
    row
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub gamma_tag: String,
    pub instances: usize,
    pub failures: usize,
    /// Mean social welfare per mechanism over rows where it ran.
    pub mean_sw: BTreeMap<String, f64>,
    /// Mean of each per-instance ratio over rows where it is finite.
    pub mean_ratio: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub rows: usize,
    pub sweep_points: Vec<SweepSummary>,
    /// Rows breaking a welfare ordering that must hold instance by instance.
    pub invariant_violations: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub mechanisms: Vec<MechKind>,
    pub rows: Vec<ResultRow>,
    pub summary: ExperimentSummary,
}

pub const RATIO_COLUMNS: [(MechKind, MechKind); 4] = [
    (MechKind::Order, MechKind::Int),
    (MechKind::Con, MechKind::Int),
    (MechKind::Order, MechKind::Con),
    (MechKind::Order, MechKind::Nat),
];

fn ratio_name(a: MechKind, b: MechKind) -> String {
    format!("ratio_{}_{}", a.name(), b.name())
}

/// Runs every selected mechanism on every corpus instance at every sweep
/// point. Rows come out in corpus order, then sweep order, whatever the
/// execution mode.
pub fn run_experiment(exp: &ExperimentConfig, cfg: &Config) -> Result<ExperimentOutput> {
    exp.validate()?;
    let mut jobs = Vec::new();
    for (source, inst) in load_corpus(&exp.corpus)? {
        let points = match &exp.sweep {
            Some(s) => s.points(inst.gamma())?,
            None => vec![inst.gamma().clone()],
        };
        for g in points {
            let id = jobs.len();
            jobs.push((id, source.clone(), inst.with_gamma(g)?));
        }
    }
    let rows = cfg.execution.map(&jobs, |(id, source, inst)| {
        run_row(*id, source, inst, exp, exp.seed.wrapping_add(*id as u64), cfg)
    });
    let summary = summarize(&rows);
    Ok(ExperimentOutput { mechanisms: exp.mechanisms.clone(), rows, summary })
}

fn summarize(rows: &[ResultRow]) -> ExperimentSummary {
    let mut tags: Vec<&str> = Vec::new();
    for r in rows {
        if !tags.contains(&r.gamma_tag.as_str()) {
            tags.push(&r.gamma_tag);
        }
    }
    let mean = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    let sweep_points = tags
        .into_iter()
        .map(|tag| {
            let group: Vec<&ResultRow> = rows.iter().filter(|r| r.gamma_tag == tag).collect();
            let mut mean_sw = BTreeMap::new();
            for m in MechKind::ALL {
                if let Some(v) = mean(group.iter().filter_map(|r| r.sw.get(&m)).map(rational::to_f64).collect()) {
                    mean_sw.insert(m.name().to_string(), v);
                }
            }
            let mut mean_ratio = BTreeMap::new();
            for (a, b) in RATIO_COLUMNS {
                let xs = group.iter().filter_map(|r| r.ratio(a, b).flatten()).map(|x| rational::to_f64(&x)).collect();
                if let Some(v) = mean(xs) {
                    mean_ratio.insert(ratio_name(a, b), v);
                }
            }
            SweepSummary {
                gamma_tag: tag.to_string(),
                instances: group.len(),
                failures: group.iter().filter(|r| !r.note.is_empty()).count(),
                mean_sw,
                mean_ratio,
            }
        })
        .collect();
    ExperimentSummary { rows: rows.len(), sweep_points, invariant_violations: check_invariants(rows) }
}

/// `SW(nat) <= SW(con) <= SW(int)` and `SW(nat) <= SW(order) <= SW(int)` per
/// row, and a higher national cycle limit never lowers `SW(nat)` on the same
/// instance.
pub fn check_invariants(rows: &[ResultRow]) -> Vec<String> {
    let mut out = Vec::new();
    let chains = [[MechKind::Nat, MechKind::Con, MechKind::Int], [MechKind::Nat, MechKind::Order, MechKind::Int]];
    for r in rows {
        for chain in chains {
            for w in chain.windows(2) {
                if let (Some(a), Some(b)) = (r.sw.get(&w[0]), r.sw.get(&w[1])) {
                    if a > b {
                        out.push(format!(
                            "instance {} ({}): sw_{} = {a} > sw_{} = {b}",
                            r.instance_id,
                            r.gamma_tag,
                            w[0].name(),
                            w[1].name()
                        ));
                    }
                }
            }
        }
    }
    for a in rows {
        for b in rows {
            let same_but_ncl = a.source == b.source
                && a.gamma.icl == b.gamma.icl
                && a.gamma.iss == b.gamma.iss
                && a.gamma.isn == b.gamma.isn
                && a.gamma.ncl.len() == b.gamma.ncl.len()
                && a.gamma.ncl.iter().zip(&b.gamma.ncl).all(|(x, y)| x <= y);
            if a.instance_id != b.instance_id && same_but_ncl {
                if let (Some(x), Some(y)) = (a.sw.get(&MechKind::Nat), b.sw.get(&MechKind::Nat)) {
                    if x > y {
                        out.push(format!(
                            "{}: sw_nat drops from {x} to {y} when ncl rises ({} -> {})",
                            a.source, a.gamma_tag, b.gamma_tag
                        ));
                    }
                }
            }
        }
    }
    out
}

fn fmt6(r: &Ratio) -> String {
    format!("{:.6}", rational::to_f64(r))
}

impl ExperimentOutput {
    fn country_columns(&self) -> usize {
        self.rows.iter().map(|r| r.gamma.n).max().unwrap_or(0)
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["instance_id", "gamma_tag"].map(String::from).to_vec();
        h.extend(MechKind::ALL.map(|m| format!("sw_{}", m.name())));
        h.extend(RATIO_COLUMNS.map(|(a, b)| ratio_name(a, b)));
        for m in MechKind::ALL.into_iter().filter(|m| self.mechanisms.contains(m)) {
            h.extend((0..self.country_columns()).map(|c| format!("u_{}_{c}", m.name())));
        }
        h.extend(["order_mode", "source", "note"].map(String::from));
        h
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        let nc = self.country_columns();
        for r in &self.rows {
            let mut rec = vec![r.instance_id.to_string(), r.gamma_tag.clone()];
            rec.extend(MechKind::ALL.map(|m| r.sw.get(&m).map(fmt6).unwrap_or_default()));
            rec.extend(RATIO_COLUMNS.map(|(a, b)| match r.ratio(a, b) {
                None => String::new(),
                Some(None) => "inf".into(),
                Some(Some(x)) => fmt6(&x),
            }));
            for m in MechKind::ALL.into_iter().filter(|m| self.mechanisms.contains(m)) {
                let u = r.utilities.get(&m);
                rec.extend((0..nc).map(|c| u.and_then(|u| u.get(c)).map(fmt6).unwrap_or_default()));
            }
            rec.push(r.order_mode.clone().unwrap_or_default());
            rec.push(r.source.clone());
            rec.push(r.note.clone());
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
