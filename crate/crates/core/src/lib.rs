//! Continuous-time quantum-walk search on strongly regular graphs.
//!
//! The crate generates Paley, Latin-square and triangular graphs (plus the
//! complete graph as a baseline), evolves the search Hamiltonian
//! `H = -gamma L - |w><w|` either in the full vertex space or in the exact
//! three-dimensional invariant subspace, and computes the perturbative
//! predictions the simulations are compared against.
//!
//! ```
//! use srg_walk::experiment::{run_simulation, Engine, GammaPolicy, RunConfig};
//! use srg_walk::params::GraphFamily;
//!
//! let config = RunConfig::new(GraphFamily::Paley { q: 101 })
//!     .with_gamma(GammaPolicy::C1)
//!     .with_engine(Engine::Reduced);
//! let out = run_simulation(&config).unwrap();
//! assert!(out.peak.p > 0.9);
//! ```

pub mod dynamics;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod gf;
pub mod graph;
pub mod linalg;
pub mod numfmt;
pub mod params;
pub mod theory;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{GraphFamily, SrgParams};
