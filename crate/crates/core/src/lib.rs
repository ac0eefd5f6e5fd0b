//! International kidney-exchange pools with country-specific cycle limits.
//!
//! Instances are partitioned compatibility digraphs with a parameter tuple
//! (`icl`, `ncl`, `iss`, `isn`) per country. The crate enumerates feasible
//! cycles, solves maximum cycle packing exactly or through polynomial special
//! cases, runs the national, consecutive, international and order-based
//! mechanisms with exact expected utilities, and checks individual
//! rationality, incentive compatibility and approximation bounds.

pub mod bound;
pub mod enumeration;
pub mod error;
pub mod exec;
pub mod generator;
pub mod mechanisms;
pub mod model;
pub mod rational;
pub mod simharness;
pub mod solver;
pub mod verification;
pub mod vertex_set;

pub use bound::Bound;
pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{Country, Cycle, CyclePacking, GammaParams, GammaViolation, Instance, Segment, VertexId};

/// Work limits shared by every expensive operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Maximum number of cycles a single enumeration may emit.
    pub max_cycles: usize,
    /// Maximum number of orderings an exact order-mechanism run may stand for.
    pub max_permutations: u64,
    /// Maximum branch-and-bound nodes per solve.
    pub max_search_nodes: u64,
    pub execution: Execution,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_cycles: 2_000_000,
            max_permutations: 362_880,
            max_search_nodes: 50_000_000,
            execution: Execution::default(),
        }
    }
}

impl Config {
    pub fn sequential() -> Self {
        Config { execution: Execution::Sequential, ..Config::default() }
    }

    pub fn with_execution(self, execution: Execution) -> Self {
        Config { execution, ..self }
    }
}
