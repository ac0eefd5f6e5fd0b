//! Seeded random instances with independent arcs.
//!
//! Every ordered pair of distinct vertices gets an arc with one probability
//! when both ends are in the same country and another otherwise. There is no
//! blood-type or tissue-type model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GammaParams, Instance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub country_sizes: Vec<usize>,
    #[serde(alias = "p_nat")]
    pub arc_probability_national: f64,
    #[serde(alias = "p_int")]
    pub arc_probability_international: f64,
    pub gamma: GammaParams,
    #[serde(default)]
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.country_sizes.is_empty() || self.country_sizes.contains(&0) {
            return Err(Error::InvalidConfig("country sizes must be positive".into()));
        }
        for p in [self.arc_probability_national, self.arc_probability_international] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("arc probability {p} is outside [0, 1]")));
            }
        }
        if self.gamma.n != self.country_sizes.len() {
            return Err(Error::InvalidConfig(format!(
                "{} countries but parameters for {}",
                self.country_sizes.len(),
                self.gamma.n
            )));
        }
        self.gamma.validate()
    }

    pub fn with_seed(&self, seed: u64) -> GenConfig {
        GenConfig { seed, ..self.clone() }
    }
}

pub fn gen_instance(cfg: &GenConfig) -> Result<Instance> {
    cfg.validate()?;
    let country_of: Vec<usize> = cfg.country_sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
    let n = country_of.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let p = if country_of[u] == country_of[v] {
                cfg.arc_probability_national
            } else {
                cfg.arc_probability_international
            };
            if rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Instance::new(country_of, arcs, cfg.gamma.clone())
}

/// Splits `total` vertices in proportion to `weights` (largest remainder,
/// earlier countries win ties), e.g. `sizes_from_ratio(30, &[3, 2, 1])` is
/// `[15, 10, 5]`.
pub fn sizes_from_ratio(total: usize, weights: &[usize]) -> Result<Vec<usize>> {
    let sum: usize = weights.iter().sum();
    if sum == 0 {
        return Err(Error::InvalidConfig("ratio weights sum to zero".into()));
    }
    let mut sizes: Vec<usize> = weights.iter().map(|w| total * w / sum).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(total * weights[i] % sum));
    let short = total - sizes.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        sizes[i] += 1;
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::Bound;

    fn config(sizes: Vec<usize>, p_nat: f64, p_int: f64, seed: u64) -> GenConfig {
        let gamma = GammaParams::uniform(sizes.len(), Bound::Finite(3), Bound::Finite(3), Bound::INF, Bound::INF).unwrap();
        GenConfig {
            country_sizes: sizes,
            arc_probability_national: p_nat,
            arc_probability_international: p_int,
            gamma,
            seed,
        }
    }

    #[test]
    fn extreme_probabilities() {
        assert!(gen_instance(&config(vec![3, 4], 0.0, 0.0, 1)).unwrap().arcs().is_empty());
        let full = gen_instance(&config(vec![3, 4], 1.0, 1.0, 1)).unwrap();
        assert_eq!(full.arcs().len(), 7 * 6);
    }

    #[test]
    fn same_seed_same_json() {
        let c = config(vec![5, 5, 5], 0.2, 0.1, 42);
        assert_eq!(gen_instance(&c).unwrap().to_json(), gen_instance(&c).unwrap().to_json());
        assert_ne!(gen_instance(&c).unwrap().to_json(), gen_instance(&c.with_seed(43)).unwrap().to_json());
    }

    fn split_counts(inst: &Instance) -> (f64, f64) {
        let nat = inst.arcs().iter().filter(|(u, v)| inst.country(*u) == inst.country(*v)).count();
        (nat as f64, (inst.arcs().len() - nat) as f64)
    }

    #[test]
    fn arc_count_within_three_sigma() {
        let inst = gen_instance(&config(vec![5, 5, 5], 0.2, 0.1, 42)).unwrap();
        // 60 national and 150 international ordered pairs.
        let mean = 0.2 * 60.0 + 0.1 * 150.0;
        let sd = (60.0 * 0.2 * 0.8 + 150.0 * 0.1 * 0.9f64).sqrt();
        assert!((inst.arcs().len() as f64 - mean).abs() <= 3.0 * sd);
    }

    #[test]
    fn arc_counts_follow_binomial_over_seeds() {
        let (p_nat, p_int) = (0.3, 0.15);
        let (n_nat, n_int) = (60.0, 150.0);
        let mut chi_nat = 0.0;
        let mut chi_int = 0.0;
        for seed in 0..100 {
            let (a, b) = split_counts(&gen_instance(&config(vec![5, 5, 5], p_nat, p_int, seed)).unwrap());
            chi_nat += (a - n_nat * p_nat).powi(2) / (n_nat * p_nat * (1.0 - p_nat));
            chi_int += (b - n_int * p_int).powi(2) / (n_int * p_int * (1.0 - p_int));
        }
        // 0.001 and 0.999 quantiles of chi-squared with 100 degrees of freedom.
        for chi in [chi_nat, chi_int] {
            assert!((61.9..149.4).contains(&chi), "chi-squared {chi}");
        }
    }

    #[test]
    fn ratio_sizes() {
        assert_eq!(sizes_from_ratio(30, &[3, 2, 1]).unwrap(), vec![15, 10, 5]);
        assert_eq!(sizes_from_ratio(10, &[3, 2, 1]).unwrap(), vec![5, 3, 2]);
        assert_eq!(sizes_from_ratio(24, &[1, 1, 1]).unwrap(), vec![8, 8, 8]);
        assert!(sizes_from_ratio(5, &[0, 0]).is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(gen_instance(&config(vec![3, 0], 0.1, 0.1, 0)).is_err());
        assert!(gen_instance(&config(vec![3, 3], 1.5, 0.1, 0)).is_err());
        let mut c = config(vec![3, 3], 0.1, 0.1, 0);
        c.country_sizes.push(2);
        assert!(gen_instance(&c).is_err());
    }
}
