//! Equilibria of Tullock contests between human content creators and
//! generative-AI creators.
//!
//! Human creators split effort over topics; a GenAI producer learns from the
//! total human content and competes for the same traffic. In the *exclusive*
//! game the GenAI is a standalone competitor; in the *inclusive* game every
//! creator may switch to GenAI at zero cost.
//!
//! - [`game`]: instances, payoffs and gradients.
//! - [`solver`]: mirror descent, best responses and the inclusive searches.
//! - [`theory`]: numerical checks of the equilibrium bounds and properties.
//! - [`experiments`]: seeded parameter sweeps with CSV output.
//!
//! ```
//! use tullock_genai::game::{CostModel, Game, TopicParams};
//! use tullock_genai::solver::{mmd_solve, SolverConfig};
//!
//! let topic = TopicParams::new(1.0, 0.5, 0.9, 100.0)?;
//! let costs = CostModel::separable(vec![1.0, 2.0, 4.0], 1.5)?;
//! let game = Game::exclusive(vec![topic], costs)?;
//! let report = mmd_solve(&game, &SolverConfig::default())?;
//! assert!(report.converged);
//! # Ok::<(), tullock_genai::Error>(())
//! ```

pub mod error;
pub mod experiments;
pub mod game;
pub mod solver;
pub mod theory;

pub use error::{Error, Result};
