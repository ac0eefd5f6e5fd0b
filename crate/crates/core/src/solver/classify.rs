//! Complexity classification of parameter tuples.

use std::fmt;

use serde::Serialize;

use crate::bound::Bound;
use crate::model::GammaParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Polynomial-time case number 1..=7.
    Poly(u8),
    NpHard,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Poly(k) => write!(f, "Poly({k})"),
            Verdict::NpHard => f.write_str("NPHard"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyCase {
    pub verdict: Verdict,
    pub case_number: Option<u8>,
    pub case_description: String,
}

const CASES: [&str; 7] = [
    "n = 1 and ncl in {0, 2, inf}",
    "n >= 2, icl = 0 and every ncl_i in {0, 2, inf}",
    "n >= 2, icl = 2 and every ncl_i in {0, 2}",
    "n = 2, icl = 3, iss = (1, 1) and every ncl_i in {0, 2}",
    "n = 2, icl >= 4 or inf, iss = (1, 1), some isn_j = 1 and every ncl_i in {0, 2}",
    "n >= 2, icl = inf, ncl all 0, iss all 1, isn all inf",
    "n >= 2, icl = inf and ncl, iss, isn all inf",
];

/// Lowest-numbered polynomial case matching `g`, or NP-hard.
pub fn classify_gamma(g: &GammaParams) -> DichotomyCase {
    let in_02 = |b: Bound| b == 0 || b == 2;
    let in_02_inf = |b: Bound| in_02(b) || b.is_unbounded();
    let all = |v: &[Bound], p: &dyn Fn(Bound) -> bool| v.iter().all(|&b| p(b));
    let inf = |b: Bound| b.is_unbounded();
    let n = g.n;
    let matches = [
        n == 1 && in_02_inf(g.ncl[0]),
        n >= 2 && g.icl == 0 && all(&g.ncl, &in_02_inf),
        n >= 2 && g.icl == 2 && all(&g.ncl, &in_02),
        n == 2 && g.icl == 3 && all(&g.iss, &|b| b == 1) && all(&g.ncl, &in_02),
        n == 2
            && g.icl >= Bound::Finite(4)
            && all(&g.iss, &|b| b == 1)
            && g.isn.iter().any(|&b| b == 1)
            && all(&g.ncl, &in_02),
        n >= 2 && inf(g.icl) && all(&g.ncl, &|b| b == 0) && all(&g.iss, &|b| b == 1) && all(&g.isn, &inf),
        n >= 2 && inf(g.icl) && all(&g.ncl, &inf) && all(&g.iss, &inf) && all(&g.isn, &inf),
    ];
    match matches.iter().position(|&m| m) {
        Some(k) => DichotomyCase {
            verdict: Verdict::Poly(k as u8 + 1),
            case_number: Some(k as u8 + 1),
            case_description: CASES[k].to_string(),
        },
        None => DichotomyCase {
            verdict: Verdict::NpHard,
            case_number: None,
            case_description: "none of the polynomial cases applies; perfect packing is NP-complete".into(),
        },
    }
}
