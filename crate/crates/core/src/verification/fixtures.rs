//! Hand-built instances reproducing the worked examples and lower-bound
//! constructions. Vertex ids follow label order (h1 < h2 < j1 < ...).

use std::collections::BTreeMap;
use std::fmt;

use crate::bound::Bound;
use crate::error::{Error, Result};
use crate::model::{GammaParams, Instance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixture {
    /// Two countries where merging pools is not individually rational.
    Fig1,
    /// Efficient mechanisms cannot be individually rational.
    Fig2a,
    /// Two international cycles through u1; the order mechanism's two-outcome
    /// example with icl = 6, iss = (4, 2), isn = (3, 3).
    Fig2b,
    /// National r-cycle whose first r-1 vertices each lie on an
    /// international cycle of length `icl`.
    Fig2c { r: usize, icl: usize },
    /// `n` cycles of length 1 + L + 2(n-1) sharing a single vertex x.
    Thm5 { n: usize, l: usize },
    /// Non-feasible cycle D whose only one-segment substitute is C1.
    Ex3 { l: usize },
    /// Instance with near-perfect but no perfect packing.
    Rem1,
    /// National cycle limit manipulation by country J.
    Fig7 { ncl_j: u32 },
    /// National r-cycle, every vertex on its own international cycle of
    /// length `c_int`.
    Thm7a { r: usize, c_int: usize },
    /// A 4-cycle sharing vertex v with `d` alternating 4-cycles.
    Thm7b { d: usize },
}

pub const FIXTURE_NAMES: &[&str] = &["fig1", "fig2a", "fig2b", "fig2c", "thm5", "ex3", "rem1", "fig7", "thm7a", "thm7b"];

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Fig1 => write!(f, "fig1"),
            Fixture::Fig2a => write!(f, "fig2a"),
            Fixture::Fig2b => write!(f, "fig2b"),
            Fixture::Fig2c { r, icl } => write!(f, "fig2c(r={r},icl={icl})"),
            Fixture::Thm5 { n, l } => write!(f, "thm5(n={n},L={l})"),
            Fixture::Ex3 { l } => write!(f, "ex3(L={l})"),
            Fixture::Rem1 => write!(f, "rem1"),
            Fixture::Fig7 { ncl_j } => write!(f, "fig7(ncl_J={ncl_j})"),
            Fixture::Thm7a { r, c_int } => write!(f, "thm7a(r={r},c_int={c_int})"),
            Fixture::Thm7b { d } => write!(f, "thm7b(d={d})"),
        }
    }
}

impl Fixture {
    /// Parses a name and a `key=value,key=value` parameter list. Keys are
    /// case-insensitive; missing keys take their defaults.
    pub fn parse(name: &str, params: &str) -> Result<Fixture> {
        let mut kv: BTreeMap<String, usize> = BTreeMap::new();
        for part in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidFixture(format!("expected key=value, got {part:?}")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidFixture(format!("{k} must be a non-negative integer")))?;
            kv.insert(k.trim().to_ascii_lowercase(), v);
        }
        let mut take = |key: &str, default: usize| kv.remove(key).unwrap_or(default);
        let fixture = match name.to_ascii_lowercase().as_str() {
            "fig1" => Fixture::Fig1,
            "fig2a" | "prop1" => Fixture::Fig2a,
            "fig2b" | "prop4" | "ex1" => Fixture::Fig2b,
            "fig2c" | "prop3" => Fixture::Fig2c { r: take("r", 3), icl: take("icl", 3) },
            "thm5" | "fig4" => Fixture::Thm5 { n: take("n", 3), l: take("l", 10) },
            "ex3" | "fig5a" => Fixture::Ex3 { l: take("l", 5) },
            "rem1" | "fig5b" => Fixture::Rem1,
            "fig7" => Fixture::Fig7 { ncl_j: take("ncl_j", 4) as u32 },
            "thm7a" => Fixture::Thm7a { r: take("r", 7), c_int: take("c_int", 6) },
            "thm7b" => Fixture::Thm7b { d: take("d", 5) },
            "fig6" => {
                return Err(Error::InvalidFixture(
                    "fig6 illustrates cycle sets in a proof and has no concrete instance".into(),
                ))
            }
            other => {
                return Err(Error::InvalidFixture(format!(
                    "unknown fixture {other:?}; known: {}",
                    FIXTURE_NAMES.join(", ")
                )))
            }
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::InvalidFixture(format!("parameter {k:?} does not apply to {name}")));
        }
        Ok(fixture)
    }
}

#[derive(Default)]
struct Builder {
    country_of: Vec<usize>,
    arcs: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, country: usize) -> usize {
        self.country_of.push(country);
        self.country_of.len() - 1
    }

    fn vertices(&mut self, country: usize, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.vertex(country)).collect()
    }

    fn cycle(&mut self, seq: &[usize]) {
        for i in 0..seq.len() {
            self.arcs.push((seq[i], seq[(i + 1) % seq.len()]));
        }
    }

    fn path(&mut self, seq: &[usize]) {
        for w in seq.windows(2) {
            self.arcs.push((w[0], w[1]));
        }
    }

    fn finish(self, gamma: GammaParams) -> Result<Instance> {
        Instance::new(self.country_of, self.arcs, gamma)
    }
}

fn fin(v: usize) -> Bound {
    Bound::Finite(v as u32)
}

fn gamma(icl: Bound, ncl: Vec<Bound>, iss: Vec<Bound>, isn: Vec<Bound>) -> Result<GammaParams> {
    GammaParams::new(icl, ncl, iss, isn).map_err(|e| Error::InvalidFixture(e.to_string()))
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidFixture(msg.into()))
    }
}

/// National r-cycle in country 0; each listed vertex gets its own
/// international cycle through `len - 2` country-1 vertices and one
/// country-2 vertex.
fn national_cycle_with_attachments(r: usize, len: usize, attached: usize) -> Result<Instance> {
    need(r >= 2, "r must be at least 2")?;
    need(len >= 2, "the international cycle length must be at least 2")?;
    let mut b = Builder::default();
    let u = b.vertices(0, r);
    b.cycle(&u);
    for &ui in u.iter().take(attached) {
        let mut seq = vec![ui];
        seq.extend(b.vertices(1, len - 2));
        seq.push(b.vertex(2));
        b.cycle(&seq);
    }
    let inf = vec![Bound::INF; 3];
    b.finish(gamma(fin(len), vec![fin(r), fin(2), fin(2)], inf.clone(), inf)?)
}

pub fn build_fixture(fixture: &Fixture) -> Result<Instance> {
    match *fixture {
        Fixture::Fig1 => {
            let mut b = Builder::default();
            let h = b.vertices(0, 2);
            let j = b.vertices(1, 2);
            b.cycle(&[h[0], h[1]]);
            b.cycle(&[h[0], j[0], j[1]]);
            b.finish(gamma(fin(3), vec![fin(2), fin(2)], vec![fin(1), fin(2)], vec![fin(1), fin(1)])?)
        }
        Fixture::Fig2a => {
            let mut b = Builder::default();
            let u = b.vertices(0, 2);
            let v = b.vertices(1, 2);
            b.cycle(&[u[0], u[1], v[0]]);
            b.cycle(&[v[0], v[1]]);
            b.finish(gamma(fin(3), vec![fin(2), fin(2)], vec![fin(2), fin(1)], vec![fin(1), fin(1)])?)
        }
        Fixture::Fig2b => {
            let mut b = Builder::default();
            let u = b.vertices(0, 6);
            let v = b.vertices(1, 5);
            b.cycle(&[u[0], u[1], u[2], u[3], v[0], v[1]]);
            b.cycle(&[u[0], v[2], u[4], v[3], u[5], v[4]]);
            b.finish(gamma(fin(6), vec![fin(2), fin(2)], vec![fin(4), fin(2)], vec![fin(3), fin(3)])?)
        }
        Fixture::Fig2c { r, icl } => national_cycle_with_attachments(r, icl, r - 1),
        Fixture::Thm7a { r, c_int } => national_cycle_with_attachments(r, c_int, r),
        Fixture::Thm5 { n, l } => {
            need(n >= 1, "n must be at least 1")?;
            need(l > 2, "L must be larger than 2")?;
            let mut b = Builder::default();
            let x = b.vertex(n);
            for i in 0..n {
                let mut seq = vec![x];
                seq.extend(b.vertices(i, l));
                let others: Vec<usize> = (1..n).map(|j| if j == i { 0 } else { j }).collect();
                for _ in 0..2 {
                    for &c in &others {
                        seq.push(b.vertex(c));
                    }
                }
                b.cycle(&seq);
            }
            let k = n + 1;
            b.finish(gamma(fin(l - 1 + 2 * n), vec![fin(2); k], vec![fin(l); k], vec![fin(2); k])?)
        }
        Fixture::Ex3 { l } => {
            need(l >= 1, "L must be at least 1")?;
            let mut b = Builder::default();
            let u = b.vertices(0, l + 2);
            let v = b.vertices(1, 2);
            b.path(&u[..l]);
            b.path(&[u[l - 1], v[0], u[l], v[1], u[l + 1], u[0]]);
            b.arcs.push((v[0], u[0]));
            b.arcs.push((u[l + 1], v[0]));
            b.finish(gamma(fin(l + 4), vec![fin(2), fin(2)], vec![fin(l), fin(1)], vec![fin(2), fin(2)])?)
        }
        Fixture::Rem1 => {
            let mut b = Builder::default();
            let u = b.vertices(0, 4);
            let v = b.vertices(1, 3);
            b.path(&[u[0], u[1], u[2], u[3], v[1], v[2], u[0]]);
            b.path(&[v[1], u[1], v[2]]);
            b.path(&[u[0], v[0], u[3]]);
            b.finish(gamma(fin(6), vec![fin(2), fin(2)], vec![fin(4), fin(2)], vec![fin(3), fin(3)])?)
        }
        Fixture::Fig7 { ncl_j } => {
            need(ncl_j != 1, "ncl_J must not be 1")?;
            let mut b = Builder::default();
            let h = b.vertices(0, 4);
            let j = b.vertices(1, 6);
            b.cycle(&[j[0], j[3], j[2], j[1]]);
            b.cycle(&[j[3], j[5], j[4]]);
            b.path(&[h[2], h[3], h[1], j[5], h[2]]);
            b.path(&[j[0], h[0], j[2]]);
            let ncl = vec![fin(4), Bound::Finite(ncl_j)];
            b.finish(gamma(fin(4), ncl, vec![fin(3), fin(3)], vec![fin(1), fin(1)])?)
        }
        Fixture::Thm7b { d } => {
            need(d >= 1, "d must be at least 1")?;
            let mut b = Builder::default();
            let u = b.vertices(0, 3);
            let v = b.vertex(1);
            b.cycle(&[u[0], u[1], u[2], v]);
            for _ in 0..d {
                let a = b.vertex(0);
                let bb = b.vertex(1);
                let c = b.vertex(0);
                b.cycle(&[v, a, bb, c]);
            }
            b.finish(gamma(fin(4), vec![fin(2), fin(2)], vec![fin(3), fin(1)], vec![fin(2), fin(2)])?)
        }
    }
}
